"""
Command line entry point.

    atdelfi generate GAME [LEVEL ...] [--format text|card] -o OUTDIR
    atdelfi stats GAME
    atdelfi simulate GAME LEVEL --agent A --seed N
    atdelfi report CORPUS_DIR

GAME is a path to a game file or the name of a bundled game.  Exit status is
0 on success, 2 when a game or level does not parse and 3 when analysis or
simulation fails.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import metrics
from .agents import AGENTS, DEFAULT_MAX_TICKS, run_episode
from .analysis import PATH_STRATEGIES
from .demos import export_clips
from .graph import build_graph
from .pipeline import build_tutorial, discover_levels, load_game, load_levels, resolve_game
from .simulator import SimulationError
from .traces import TraceStore
from .vgdl import VGDLError

EXIT_OK, EXIT_PARSE, EXIT_ANALYSIS = 0, 2, 3


def _agents(value: str) -> list:
    names = [a.strip() for a in value.split(",") if a.strip()]
    bad = [a for a in names if a not in AGENTS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown agent(s) {', '.join(bad)}; choose from {', '.join(AGENTS)}")
    return names


def _rollout_options(args) -> dict:
    return {"n": args.rollouts, "depth": args.depth}


def _levels(game, args_levels, game_path):
    paths = args_levels or discover_levels(game_path)
    return load_levels(game, paths)


def cmd_generate(args) -> int:
    game_path = resolve_game(args.game)
    game = load_game(game_path)
    simulate = args.format == "card"
    levels = _levels(game, args.levels, game_path) if simulate else []
    seeds = range(args.seed, args.seed + args.episodes)
    tut = build_tutorial(game, levels, args.agents, seeds, args.path_strategy, simulate,
                         args.max_ticks, **_rollout_options(args))

    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    text = tut.doc.to_text()
    (out / f"{game.name}.txt").write_text(text, encoding="utf-8")
    if tut.card is not None:
        (out / f"{game.name}.card.md").write_text(tut.card.to_markdown(), encoding="utf-8")
        (out / f"{game.name}.card.json").write_text(json.dumps(tut.card.to_dict(), indent=1, sort_keys=True),
                                                    encoding="utf-8")
        export_clips(tut.clips, out / "clips")
        if args.keep_traces:
            tut.traces.save(out / "traces")
    if args.emit_graph:
        (out / f"{game.name}.graph.json").write_text(json.dumps(tut.graph.to_dict(), indent=1, sort_keys=True),
                                                     encoding="utf-8")
    if args.emit_analysis:
        data = tut.analysis.to_dict() | {"stats": tut.stats.to_dict()}
        (out / f"{game.name}.analysis.json").write_text(json.dumps(data, indent=1, sort_keys=True),
                                                        encoding="utf-8")
    sys.stdout.write(text if tut.card is None else tut.card.to_markdown())
    return EXIT_OK


def cmd_stats(args) -> int:
    game = load_game(args.game)
    tut = build_tutorial(game, simulate=False, path_strategy=args.path_strategy)
    print(json.dumps({"game": game.name, **tut.stats.to_dict()}, indent=2))
    return EXIT_OK


def cmd_simulate(args) -> int:
    game_path = resolve_game(args.game)
    game = load_game(game_path)
    (level,) = load_levels(game, [args.level])
    opts = _rollout_options(args) if args.agent == "BudgetedRollout" else {}
    trace = run_episode(game, level, args.agent, args.seed, args.max_ticks, build_graph(game), **opts)
    if args.output:
        TraceStore([trace]).save(Path(args.output) / "traces")
    sys.stdout.write(trace.dumps() + "\n")
    return EXIT_OK


def cmd_report(args) -> int:
    corpus = Path(args.corpus)
    games = [load_game(p) for p in sorted(corpus.glob("*.vgdl"))]
    trace_dir = corpus / "traces"
    if trace_dir.is_dir():
        store = TraceStore.load(trace_dir)
    else:
        from .pipeline import play

        store = TraceStore()
        seeds = range(args.seed, args.seed + args.episodes)
        for g, path in zip(games, sorted(corpus.glob("*.vgdl"))):
            for t in play(g, load_levels(g, discover_levels(path)), args.agents, seeds, args.max_ticks,
                          **_rollout_options(args)):
                store.add(t)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", metrics.NoWinningTraces)
        reports = metrics.corpus_report(games, store)
    sys.stdout.write(metrics.report_csv(reports))
    out = Path(args.output or corpus)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(metrics.report_json(reports) + "\n", encoding="utf-8")
    return EXIT_OK


def _play_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-ticks", type=int, default=DEFAULT_MAX_TICKS)
    p.add_argument("--rollouts", type=int, default=20, help="BudgetedRollout rollouts per action")
    p.add_argument("--depth", type=int, default=10, help="BudgetedRollout rollout depth")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="atdelfi", description="Generate tutorials for grid arcade games.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write the tutorial for a game")
    g.add_argument("game")
    g.add_argument("levels", nargs="*", help="level files (default: <game>_lvl*.lvl next to the game)")
    g.add_argument("--format", choices=("text", "card"), default="card")
    g.add_argument("--emit-graph", action="store_true")
    g.add_argument("--emit-analysis", action="store_true")
    g.add_argument("--seed", type=int, default=0, help="first episode seed")
    g.add_argument("--episodes", type=int, default=1, help="seeds per (agent, level)")
    g.add_argument("--agents", type=_agents, default=list(AGENTS), help="comma separated agent names")
    g.add_argument("--path-strategy", choices=PATH_STRATEGIES, default="longest-shortest")
    g.add_argument("--keep-traces", action="store_true", help="also store the raw playthroughs")
    g.add_argument("-o", "--output", default="out")
    _play_options(g)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("stats", help="print size metrics for a game")
    s.add_argument("game")
    s.add_argument("--path-strategy", choices=PATH_STRATEGIES, default="longest-shortest")
    s.set_defaults(func=cmd_stats)

    m = sub.add_parser("simulate", help="play one episode and print its trace")
    m.add_argument("game")
    m.add_argument("level")
    m.add_argument("--agent", choices=AGENTS, default="DoNothing")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("-o", "--output", help="also store the trace under OUTPUT/traces")
    _play_options(m)
    m.set_defaults(func=cmd_simulate)

    r = sub.add_parser("report", help="corpus metrics as CSV plus report.json")
    r.add_argument("corpus", help="directory of game files (and optionally traces/)")
    r.add_argument("-o", "--output", help="where to write report.json (default: the corpus directory)")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--episodes", type=int, default=1)
    r.add_argument("--agents", type=_agents, default=list(AGENTS))
    _play_options(r)
    r.set_defaults(func=cmd_report)
    return parser


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"atdelfi: warning: {message}", file=sys.stderr if file is None else file)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    previous, warnings.showwarning = warnings.showwarning, _show_warning
    try:
        return args.func(args)
    except (VGDLError, FileNotFoundError) as exc:
        print(f"atdelfi: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SimulationError, ValueError, KeyError) as exc:
        print(f"atdelfi: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    finally:
        warnings.showwarning = previous


if __name__ == "__main__":
    sys.exit(main())
