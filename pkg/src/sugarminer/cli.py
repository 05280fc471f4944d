"""Command-line pipeline driver.

Commands: ingest, pipeline, calibrate, mine, filter, census, metrics, serve.
Exit codes: 0 success, 2 empty corpus, 3 calibration produced no threshold,
1 any other fatal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .calibration import CalibrationError, calibrate
from .catalog import census as run_census
from .cfg import MethodCfg
from .corpus import DEFAULT_GLOBS, ingest_corpus
from .generalize import baseline_label, generalize
from .jsonio import (
    SCHEMA_VERSION,
    calibration_json,
    census_csv,
    census_examples_records,
    generalized_from_json,
    generalized_to_json,
    method_cfg_from_json,
    method_cfg_to_json,
    pattern_from_json,
    read_jsonl,
    verdict_from_json,
    write_jsonl,
)
from .mining import MiningGraph, mine
from .triage import LabelRecord, apply_rules, compute_metrics, metrics_csv

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_EMPTY_CORPUS = 2
EXIT_CALIBRATION = 3

MODE_GENERALIZED = "generalized"
MODE_BASELINE = "baseline"


def _add_corpus_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corpus", required=True, type=Path, help="corpus root directory")
    p.add_argument("--include", action="append", default=None,
                   help="include glob (repeatable; default **/*.java)")
    p.add_argument("--jobs", type=int, default=1, help="parallel parse workers")


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sugarminer")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a corpus into cfgs.jsonl")
    _add_corpus_args(p)
    p.add_argument("--out", required=True, type=Path, help="output directory")

    p = sub.add_parser("pipeline", help="run the full mining pipeline")
    _add_corpus_args(p)
    p.add_argument("--out", required=True, type=Path, help="output directory")
    p.add_argument("--mode", choices=[MODE_GENERALIZED, MODE_BASELINE],
                   default=MODE_GENERALIZED)
    p.add_argument("--min-support", type=float, default=None,
                   help="explicit support-ratio threshold (overrides calibration)")
    p.add_argument("--max-size", type=int, default=4)
    p.add_argument("--witnesses", type=int, default=5)

    p = sub.add_parser("calibrate", help="derive the threshold from cfgs.jsonl")
    p.add_argument("--cfgs", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("mine", help="mine frequent patterns from gcfgs/bcfgs.jsonl")
    p.add_argument("--graphs", required=True, type=Path)
    p.add_argument("--min-support", type=float, required=True)
    p.add_argument("--max-size", type=int, default=4)
    p.add_argument("--witnesses", type=int, default=5)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("filter", help="apply the capture rules to patterns.jsonl")
    p.add_argument("--patterns", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("census", help="idiom census over cfgs.jsonl")
    p.add_argument("--cfgs", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--examples-out", type=Path, default=None)
    p.add_argument("--examples", type=int, default=5)

    p = sub.add_parser("metrics", help="per-size metrics table")
    p.add_argument("--patterns", required=True, type=Path)
    p.add_argument("--verdicts", required=True, type=Path)
    p.add_argument("--labels", type=Path, default=None)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("serve", help="serve patterns, metrics, and labeling")
    p.add_argument("--run-dir", required=True, type=Path,
                   help="a pipeline output mode directory")
    p.add_argument("--corpus", type=Path, default=None,
                   help="corpus root (defaults to the path recorded in run.json)")
    p.add_argument("--port", type=int, default=8436)
    p.add_argument("--ui-dir", type=Path, default=None,
                   help="static frontend directory to mount at /")
    return ap


def _globs(args) -> tuple[str, ...]:
    return tuple(args.include) if args.include else DEFAULT_GLOBS


def cmd_ingest(args) -> int:
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    result = ingest_corpus(args.corpus, _globs(args), jobs=args.jobs)
    write_jsonl(out / "cfgs.jsonl", (method_cfg_to_json(c) for c in result.cfgs))
    write_jsonl(out / "ingest-warnings.jsonl", (w.to_json() for w in result.warnings))
    print(f"ingest: {result.files_seen} files, {len(result.cfgs)} methods, "
          f"{len(result.warnings)} warnings")
    if not result.cfgs:
        print("ingest: empty corpus", file=sys.stderr)
        return EXIT_EMPTY_CORPUS
    return EXIT_OK


def _load_cfgs(path: Path) -> list[MethodCfg]:
    return [method_cfg_from_json(d) for d in read_jsonl(path)]


def cmd_pipeline(args) -> int:
    mode: str = args.mode
    run_dir: Path = args.out / mode
    run_dir.mkdir(parents=True, exist_ok=True)

    result = ingest_corpus(args.corpus, _globs(args), jobs=args.jobs)
    write_jsonl(run_dir / "cfgs.jsonl", (method_cfg_to_json(c) for c in result.cfgs))
    write_jsonl(run_dir / "ingest-warnings.jsonl",
                (w.to_json() for w in result.warnings))
    if not result.cfgs:
        print("pipeline: empty corpus", file=sys.stderr)
        return EXIT_EMPTY_CORPUS
    cfgs = result.cfgs

    if mode == MODE_GENERALIZED:
        graphs = [generalize(c) for c in cfgs]
        graphs_name = "gcfgs.jsonl"
    else:
        file_bytes: dict[str, bytes] = {}
        graphs = []
        for c in cfgs:
            data = file_bytes.get(c.method.file_path)
            if data is None:
                data = (args.corpus / c.method.file_path).read_bytes()
                file_bytes[c.method.file_path] = data
            graphs.append(baseline_label(c, data))
        graphs_name = "bcfgs.jsonl"
    write_jsonl(run_dir / graphs_name, (generalized_to_json(g) for g in graphs))

    threshold: float | None = args.min_support
    need_calibration = threshold is None or mode == MODE_GENERALIZED
    if need_calibration:
        try:
            cal = calibrate(cfgs)
            (run_dir / "calibration.json").write_text(calibration_json(cal),
                                                      encoding="utf-8")
            if threshold is None:
                threshold = cal.threshold_ratio
        except CalibrationError as exc:
            if threshold is None:
                print(f"pipeline: calibration failed: {exc}", file=sys.stderr)
                return EXIT_CALIBRATION
            (run_dir / "calibration.json").write_text(
                json.dumps({"schema_version": SCHEMA_VERSION, "error": str(exc)},
                           sort_keys=True, indent=2) + "\n",
                encoding="utf-8",
            )
    assert threshold is not None

    db = [MiningGraph.from_generalized(g) for g in graphs]
    patterns = mine(db, threshold, max_size=args.max_size,
                    witnesses_per_pattern=args.witnesses)
    write_jsonl(run_dir / "patterns.jsonl", (p.to_json() for p in patterns))

    verdicts = [apply_rules(p) for p in patterns]
    write_jsonl(run_dir / "verdicts.jsonl", (v.to_json() for v in verdicts))

    labels_path = run_dir / "labels.jsonl"
    labels: dict[str, LabelRecord] = {}
    if labels_path.exists():
        for d in read_jsonl(labels_path):
            rec = LabelRecord.from_json(d)
            labels[rec.pattern_id] = rec
    rows = compute_metrics(patterns, verdicts, labels)
    (run_dir / "metrics.csv").write_text(metrics_csv(rows), encoding="utf-8")

    census_rows = run_census(cfgs, examples_per_idiom=args.witnesses)
    (run_dir / "census.csv").write_text(census_csv(census_rows), encoding="utf-8")
    write_jsonl(run_dir / "census-examples.jsonl",
                census_examples_records(census_rows))

    (run_dir / "run.json").write_text(
        json.dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "corpus": str(args.corpus.resolve()),
                "mode": mode,
                "min_support": threshold,
                "max_size": args.max_size,
                "witnesses": args.witnesses,
                "methods": len(cfgs),
            },
            sort_keys=True, indent=2,
        ) + "\n",
        encoding="utf-8",
    )
    print(f"pipeline[{mode}]: {len(cfgs)} methods, threshold {threshold}, "
          f"{len(patterns)} frequent patterns -> {run_dir}")
    return EXIT_OK


def cmd_calibrate(args) -> int:
    cfgs = _load_cfgs(args.cfgs)
    if not cfgs:
        print("calibrate: empty corpus", file=sys.stderr)
        return EXIT_EMPTY_CORPUS
    try:
        cal = calibrate(cfgs)
    except CalibrationError as exc:
        print(f"calibrate: {exc}", file=sys.stderr)
        return EXIT_CALIBRATION
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(calibration_json(cal), encoding="utf-8")
    print(f"calibrate: threshold {cal.threshold_ratio} from {cal.threshold_source.value}")
    return EXIT_OK


def cmd_mine(args) -> int:
    graphs = [generalized_from_json(d) for d in read_jsonl(args.graphs)]
    if not graphs:
        print("mine: empty graph database", file=sys.stderr)
        return EXIT_EMPTY_CORPUS
    db = [MiningGraph.from_generalized(g) for g in graphs]
    patterns = mine(db, args.min_support, max_size=args.max_size,
                    witnesses_per_pattern=args.witnesses)
    write_jsonl(args.out, (p.to_json() for p in patterns))
    print(f"mine: {len(patterns)} frequent patterns")
    return EXIT_OK


def cmd_filter(args) -> int:
    patterns = [pattern_from_json(d) for d in read_jsonl(args.patterns)]
    verdicts = [apply_rules(p) for p in patterns]
    write_jsonl(args.out, (v.to_json() for v in verdicts))
    investigated = sum(1 for v in verdicts if v.investigated)
    print(f"filter: {investigated}/{len(verdicts)} investigated")
    return EXIT_OK


def cmd_census(args) -> int:
    cfgs = _load_cfgs(args.cfgs)
    rows = run_census(cfgs, examples_per_idiom=args.examples)
    args.out.write_text(census_csv(rows), encoding="utf-8")
    if args.examples_out is not None:
        write_jsonl(args.examples_out, census_examples_records(rows))
    print("census: " + ", ".join(f"{r.idiom.value}={r.cfg_count}" for r in rows))
    return EXIT_OK


def cmd_metrics(args) -> int:
    patterns = [pattern_from_json(d) for d in read_jsonl(args.patterns)]
    verdicts = [verdict_from_json(d) for d in read_jsonl(args.verdicts)]
    labels: dict[str, LabelRecord] = {}
    if args.labels is not None and args.labels.exists():
        for d in read_jsonl(args.labels):
            rec = LabelRecord.from_json(d)
            labels[rec.pattern_id] = rec
    rows = compute_metrics(patterns, verdicts, labels)
    args.out.write_text(metrics_csv(rows), encoding="utf-8")
    print(f"metrics: {len(rows)} size rows")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    corpus = args.corpus
    if corpus is None:
        run_json = args.run_dir / "run.json"
        if run_json.exists():
            corpus = Path(json.loads(run_json.read_text(encoding="utf-8"))["corpus"])
    if corpus is None:
        print("serve: --corpus required (no run.json found)", file=sys.stderr)
        return EXIT_FATAL
    app = create_app(args.run_dir, corpus, ui_dir=args.ui_dir)
    uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="warning")
    return EXIT_OK


_COMMANDS = {
    "ingest": cmd_ingest,
    "pipeline": cmd_pipeline,
    "calibrate": cmd_calibrate,
    "mine": cmd_mine,
    "filter": cmd_filter,
    "census": cmd_census,
    "metrics": cmd_metrics,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    except Exception as exc:  # fatal, but never a traceback for users
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
