import json
import shutil
import time

import pytest

from atdelfi.cli import main
from atdelfi.pipeline import games_dir

from conftest import FIXTURES


def test_generate_text(tmp_path, capsys):
    assert main(["generate", "aliens.vgdl", "--format", "text", "-o", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("Controls:\n  As the avatar, use the arrow keys to turn and move.\n")
    assert (tmp_path / "aliens.txt").read_text() == out
    assert not (tmp_path / "aliens.card.md").exists()


def test_generate_card_with_documents(tmp_path, capsys):
    rc = main(["generate", str(games_dir() / "butterflies.vgdl"), "--agents", "OneStepLookahead,DoNothing",
               "--emit-graph", "--emit-analysis", "--keep-traces", "--seed", "3", "-o", str(tmp_path)])
    assert rc == 0
    card = (tmp_path / "butterflies.card.md").read_text()
    assert card == capsys.readouterr().out
    assert card.startswith("# How to play butterflies")
    assert json.loads((tmp_path / "butterflies.graph.json").read_text())["schema"] == "atdelfi.graph/1"
    analysis = json.loads((tmp_path / "butterflies.analysis.json").read_text())
    assert analysis["schema"] == "atdelfi.analysis/1" and analysis["stats"]["interaction_count"] == 4
    traces = sorted(p.name for p in (tmp_path / "traces" / "butterflies").iterdir())
    assert traces == ["butterflies_lvl0-DoNothing-3.json", "butterflies_lvl0-OneStepLookahead-3.json",
                      "butterflies_lvl1-DoNothing-3.json", "butterflies_lvl1-OneStepLookahead-3.json"]
    assert list((tmp_path / "clips").iterdir())


def test_generate_is_reproducible(tmp_path, capsys):
    args = ["generate", "aliens", "--agents", "BudgetedRollout", "--rollouts", "2", "--depth", "3",
            "--max-ticks", "200", "--seed", "5"]
    main(args + ["-o", str(tmp_path / "a")])
    main(args + ["-o", str(tmp_path / "b")])
    capsys.readouterr()
    assert (tmp_path / "a" / "aliens.card.md").read_text() == (tmp_path / "b" / "aliens.card.md").read_text()


def test_stats(capsys):
    assert main(["stats", str(FIXTURES / "synthetic_58.vgdl")]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["interaction_count"] == 58 and record["merged_interactions"] == 12


def test_simulate(capsys, tmp_path):
    level = games_dir() / "aliens_lvl0.lvl"
    assert main(["simulate", "aliens", str(level), "--agent", "DoNothing", "--seed", "4", "-o", str(tmp_path)]) == 0
    first = capsys.readouterr().out
    trace = json.loads(first)
    assert trace["outcome"] == "Lost" and trace["seed"] == 4
    main(["simulate", "aliens", str(level), "--agent", "DoNothing", "--seed", "4"])
    assert capsys.readouterr().out == first
    assert (tmp_path / "traces" / "aliens" / "aliens_lvl0-DoNothing-4.json").read_text().strip() == first.strip()


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.vgdl"
    bad.write_text("BasicGame\n    SpriteSet\n        a > Immovable\n")
    assert main(["stats", str(bad)]) == 2
    assert "missing section" in capsys.readouterr().err
    assert main(["stats", str(tmp_path / "nope.vgdl")]) == 2
    level = tmp_path / "bad_lvl0.lvl"
    level.write_text("A?\n")
    assert main(["simulate", "aliens", str(level)]) == 2


def test_analysis_failure_exit_code(tmp_path, capsys):
    src = (FIXTURES / "goomba.vgdl").read_text().replace("goomba > RandomNPC", "goomba > Teleporter")
    (tmp_path / "g.vgdl").write_text(src)
    (tmp_path / "g_lvl0.lvl").write_text("Agf\n")
    assert main(["simulate", str(tmp_path / "g.vgdl"), str(tmp_path / "g_lvl0.lvl")]) == 3
    assert "Teleporter" in capsys.readouterr().err


def test_unknown_agent_rejected(capsys):
    with pytest.raises(SystemExit) as err:
        main(["generate", "aliens", "--agents", "Human"])
    assert err.value.code == 2


def test_report(tmp_path, capsys):
    for name in ("butterflies.vgdl", "butterflies_lvl1.lvl", "survive.vgdl", "survive_lvl0.lvl"):
        shutil.copy(games_dir() / name, tmp_path / name)
    rc = main(["report", str(tmp_path), "--agents", "OneStepLookahead,DoNothing", "--episodes", "2"])
    assert rc == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0].startswith("game,sprite_count")
    assert [r.split(",")[0] for r in rows[1:]] == ["butterflies", "survive"]
    doc = json.loads((tmp_path / "report.json").read_text())
    assert [g["game"] for g in doc["games"]] == ["butterflies", "survive"]


def test_report_reads_stored_traces(tmp_path, capsys):
    shutil.copy(games_dir() / "aliens.vgdl", tmp_path)
    main(["simulate", "aliens", str(games_dir() / "aliens_lvl0.lvl"), "-o", str(tmp_path)])
    capsys.readouterr()
    assert main(["report", str(tmp_path), "-o", str(tmp_path / "out")]) == 0
    row = capsys.readouterr().out.splitlines()[1]
    assert row.endswith(",0,unavailable")
    assert (tmp_path / "out" / "report.json").exists()


def test_report_empty_corpus(tmp_path, capsys):
    assert main(["report", str(tmp_path)]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 1
    assert json.loads((tmp_path / "report.json").read_text())["games"] == []
