"""Operator entry points: batch runs, evaluation, and the session server.

Every flag has a config-file equivalent (TOML or JSON, flat keys named like
the flags); explicit flags override the file. Exit codes: 0 ok, 1 runtime
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from .evalkit import (
    EmptySample,
    MismatchedTaskLists,
    SuiteConfig,
    aggregate_packs,
    attach_pack_aggregate,
    recompute_report,
    run_suite,
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

ENV_LOG_DIR = "RESPACT_LOG_DIR"

_RUN_KEYS = (
    "layout", "tasks", "policy", "user", "episodes", "seed", "out", "workers",
    "max_steps", "max_consecutive_invalid", "permutation", "dump_world", "report",
)
_SERVE_KEYS = (
    "host", "port", "static_dir", "wizard", "session_capacity", "reply_timeout",
)


def _load_config_file(path: str) -> dict:
    with open(path, "rb") as fp:
        if path.endswith(".json"):
            return json.load(fp)
        try:
            import tomllib  # py311+
        except ModuleNotFoundError:
            import tomli as tomllib
        return tomllib.load(fp)


def _merged(args: argparse.Namespace, keys: tuple[str, ...], defaults: dict) -> dict:
    file_cfg: dict = {}
    if getattr(args, "config", None):
        file_cfg = _load_config_file(args.config)
    merged = dict(defaults)
    for key in keys:
        if key in file_cfg:
            merged[key] = file_cfg[key]
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            merged[key] = flag_value
    return merged


def _default_out(name: str) -> str:
    log_dir = os.environ.get(ENV_LOG_DIR, "")
    return os.path.join(log_dir, name) if log_dir else name


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="respact")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a batch of episodes")
    run.add_argument("--config", help="TOML/JSON config file; flags override")
    run.add_argument("--layout", choices=("auto", "kitchen-small", "bedroom-small"))
    run.add_argument("--tasks", help='"table1-mix" or e.g. "pick:3,heat:2"')
    run.add_argument(
        "--policy",
        choices=("oracle", "scripted-respact", "look", "llm:react", "llm:respact", "llm:respact-schema"),
    )
    run.add_argument("--user", choices=("helpful", "perturbed", "unhelpful", "human"))
    run.add_argument("--episodes", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--out", help="episode JSONL path")
    run.add_argument("--workers", type=int)
    run.add_argument("--max-steps", dest="max_steps", type=int)
    run.add_argument(
        "--max-consecutive-invalid", dest="max_consecutive_invalid", type=int
    )
    run.add_argument("--permutation", type=int, help="exemplar pack permutation 0..5")
    run.add_argument("--dump-world", dest="dump_world", help="write generated worlds as JSONL")
    run.add_argument("--report", help="also write the metrics report JSON here")
    run.add_argument("--print-config", action="store_true", help="dump effective config and exit")

    ev = sub.add_parser("eval", help="recompute metrics from run JSONL files")
    ev.add_argument("runs", nargs="+", help="run JSONL files; several files aggregate as packs")
    ev.add_argument("--config", help="TOML/JSON config file; flags override")
    ev.add_argument("--report", help="write report JSON here (default stdout)")
    ev.add_argument("--csv", help="also write per-task success rates as CSV")

    serve = sub.add_parser("serve", help="serve the session HTTP/WS API")
    serve.add_argument("--config", help="TOML/JSON config file; flags override")
    serve.add_argument("--host")
    serve.add_argument("--port", type=int)
    serve.add_argument("--static-dir", dest="static_dir")
    serve.add_argument("--wizard", action="store_true", default=None,
                       help="allow ?wizard=true transcript mode")
    serve.add_argument("--session-capacity", dest="session_capacity", type=int)
    serve.add_argument("--reply-timeout", dest="reply_timeout", type=float)
    serve.add_argument("--print-config", action="store_true")
    return parser


def cmd_run(args: argparse.Namespace) -> int:
    defaults = {
        "layout": "auto",
        "tasks": "table1-mix",
        "policy": "scripted-respact",
        "user": "helpful",
        "episodes": 134,
        "seed": 0,
        "out": _default_out("run.jsonl"),
        "workers": 1,
        "max_steps": 50,
        "max_consecutive_invalid": 10,
        "permutation": 0,
        "dump_world": None,
        "report": None,
    }
    merged = _merged(args, _RUN_KEYS, defaults)
    if args.print_config:
        print(json.dumps(merged, indent=2))
        return EXIT_OK
    report_path = merged.pop("report")
    try:
        cfg = SuiteConfig(**merged)
        if cfg.user == "human":
            cfg.workers = 1
        cfg.validate()
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        episodes, report = run_suite(cfg)
    except KeyboardInterrupt:
        print("interrupted; partial log flushed", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fp:
            json.dump(report.to_dict(), fp, indent=2)
    print(
        f"{len(episodes)} episodes -> {cfg.out}  "
        f"(overall success rate {report.overall_sr:.1f}%)"
    )
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    try:
        reports = [recompute_report(path) for path in args.runs]
        report = reports[0]
        if len(reports) > 1:
            report = attach_pack_aggregate(report, aggregate_packs(reports))
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (EmptySample, MismatchedTaskLists, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    payload = json.dumps(report.to_dict(), indent=2)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fp:
            fp.write(payload + "\n")
    else:
        print(payload)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fp:
            writer = csv.writer(fp)
            writer.writerow(["task", "success_rate", "n"])
            for task, sr in report.per_task_sr.items():
                writer.writerow([task, f"{sr:.6f}", report.per_task_n[task]])
            writer.writerow(["overall", f"{report.overall_sr:.6f}", report.episode_count])
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    defaults = {
        "host": "127.0.0.1",
        "port": 8000,
        "static_dir": None,
        "wizard": False,
        "session_capacity": 16,
        "reply_timeout": 600.0,
    }
    merged = _merged(args, _SERVE_KEYS, defaults)
    if args.print_config:
        print(json.dumps(merged, indent=2))
        return EXIT_OK
    import uvicorn

    from .service import ServiceSettings, create_app

    settings = ServiceSettings(
        capacity=merged["session_capacity"],
        wizard_enabled=bool(merged["wizard"]),
        static_dir=merged["static_dir"],
        reply_timeout=merged["reply_timeout"],
    )
    app = create_app(settings)
    uvicorn.run(app, host=merged["host"], port=merged["port"], log_level="warning")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "eval":
        return cmd_eval(args)
    return cmd_serve(args)


if __name__ == "__main__":
    sys.exit(main())
