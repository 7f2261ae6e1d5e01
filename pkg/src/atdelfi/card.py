"""
The tutorial card: instruction text with demonstration frames alongside.

The card is a Markdown document.  A clip is drawn in full under the first
line that uses it; a later line about the same mechanic points back to it
by clip id.  Lines about a mechanic nobody triggered say so explicitly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .demos import RADIUS, DemoClip
from .instructions import InstructionDoc

NO_DEMO = "no demonstration available"
NO_POINTS = "This game has no scoring rules."


@dataclass(frozen=True)
class CardLine:
    text: str
    mechanic: Optional[int]
    embedded: tuple = ()  # clips drawn under this line
    referenced: tuple = ()  # clip ids drawn under an earlier line
    missing: bool = False  # a mechanic line with no clip at all


@dataclass
class CardDocument:
    title: str
    sections: list = field(default_factory=list)  # (title, [CardLine])

    def lines(self) -> list:
        return [line for _, lines in self.sections for line in lines]

    def clips(self) -> list:
        return [clip for line in self.lines() for clip in line.embedded]

    def to_markdown(self) -> str:
        out = [f"# {self.title}", ""]
        for title, lines in self.sections:
            out += [f"## {title}", ""]
            if title == "Points" and not lines:
                out += [NO_POINTS, ""]
            for line in lines:
                out.append(f"- {line.text}")
                for ref in line.referenced:
                    out.append(f"  (demonstrated above, see `{ref}`)")
                if line.missing:
                    out.append(f"  _{NO_DEMO}_")
                for clip in line.embedded:
                    out += _clip_block(clip)
            out.append("")
        return "\n".join(out).rstrip("\n") + "\n"

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "sections": [
                {
                    "title": title,
                    "lines": [
                        {
                            "text": line.text,
                            "mechanic": line.mechanic,
                            "clips": [c.to_dict() | {"id": c.clip_id} for c in line.embedded],
                            "see": list(line.referenced),
                            "missing": line.missing,
                        }
                        for line in lines
                    ],
                }
                for title, lines in self.sections
            ],
        }


def _clip_block(clip: DemoClip) -> list:
    agent, level, seed, tick = clip.source
    out = [f"  `{clip.clip_id}`: {agent} on {level}, seed {seed}, tick {tick}", "", "  ```"]
    for offset, frame in zip(range(-RADIUS, RADIUS + 1), clip.frames):
        label = "t" if offset == 0 else f"t{offset:+d}"
        out.append(f"  {label}")
        out += [f"  {row}" for row in frame.split("\n")]
    out += ["  ```", ""]
    return out


def assemble_card(doc: InstructionDoc, clips: list, title: str = "Tutorial") -> CardDocument:
    by_mechanic: dict = {}
    for clip in clips:
        by_mechanic.setdefault(clip.mechanic, []).append(clip)

    shown: set = set()
    card = CardDocument(title)
    for section, lines in doc.sections():
        out = []
        for line in lines:
            if line.mechanic is None:
                out.append(CardLine(line.text, None))
                continue
            present = [c for c in by_mechanic.get(line.mechanic, []) if not c.missing]
            fresh = tuple(c for c in present if c.clip_id not in shown)
            seen = tuple(c.clip_id for c in present if c.clip_id in shown)
            shown.update(c.clip_id for c in fresh)
            out.append(CardLine(line.text, line.mechanic, fresh, seen, missing=not present))
        card.sections.append((section, out))
    return card
