"""CLI contract: exit codes, artifact layout, determinism across job counts."""

import json
from pathlib import Path

from corpusgen import build_idiom_corpus
from sugarminer.cli import main


def run(*argv) -> int:
    return main([str(a) for a in argv])


def read_lines(path: Path):
    return path.read_text(encoding="utf-8").splitlines()


def test_ingest_writes_cfgs_and_warnings(tmp_path):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "A.java").write_text(
        "class A { void a() { x(); } int b() { return 1; } }"
    )
    (corpus / "Bad.java").write_text("class B { void bad( { }")
    out = tmp_path / "out"
    assert run("ingest", "--corpus", corpus, "--out", out) == 0
    assert len(read_lines(out / "cfgs.jsonl")) == 2
    warnings = read_lines(out / "ingest-warnings.jsonl")
    assert len(warnings) == 1
    assert json.loads(warnings[0])["file_path"] == "Bad.java"


def test_empty_corpus_exit_code(tmp_path):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    assert run("ingest", "--corpus", corpus, "--out", tmp_path / "o") == 2
    assert run("pipeline", "--corpus", corpus, "--out", tmp_path / "p") == 2


def test_missing_corpus_is_fatal(tmp_path):
    assert run("ingest", "--corpus", tmp_path / "nope", "--out", tmp_path / "o") == 1


def test_calibration_failure_exit_code(tmp_path):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "A.java").write_text(
        "class A { int f(int a) { int b = a * 2; return b; } }"
    )
    assert run("pipeline", "--corpus", corpus, "--out", tmp_path / "out") == 3
    # explicit threshold overrides the failure
    assert run("pipeline", "--corpus", corpus, "--out", tmp_path / "out2",
               "--min-support", "0.5") == 0


def test_mode_isolation(tmp_path):
    corpus = tmp_path / "corpus"
    build_idiom_corpus(corpus, seed=31, per_idiom=3, fillers=2)
    out = tmp_path / "out"
    assert run("pipeline", "--corpus", corpus, "--out", out,
               "--mode", "generalized", "--min-support", "0.2") == 0
    assert run("pipeline", "--corpus", corpus, "--out", out,
               "--mode", "baseline", "--min-support", "0.2") == 0
    assert (out / "generalized" / "gcfgs.jsonl").exists()
    assert not (out / "generalized" / "bcfgs.jsonl").exists()
    assert (out / "baseline" / "bcfgs.jsonl").exists()
    assert not (out / "baseline" / "gcfgs.jsonl").exists()
    for mode in ("generalized", "baseline"):
        for name in ("cfgs.jsonl", "patterns.jsonl", "verdicts.jsonl",
                     "metrics.csv", "census.csv", "run.json"):
            assert (out / mode / name).exists(), (mode, name)


def test_pipeline_determinism_across_job_counts(tmp_path):
    corpus = tmp_path / "corpus"
    build_idiom_corpus(corpus, seed=32, per_idiom=4, fillers=3)
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert run("pipeline", "--corpus", corpus, "--out", out1,
               "--min-support", "0.15", "--jobs", "1") == 0
    assert run("pipeline", "--corpus", corpus, "--out", out2,
               "--min-support", "0.15", "--jobs", "2") == 0
    for name in ("patterns.jsonl", "metrics.csv", "census.csv", "cfgs.jsonl",
                 "gcfgs.jsonl", "verdicts.jsonl"):
        b1 = (out1 / "generalized" / name).read_bytes()
        b2 = (out2 / "generalized" / name).read_bytes()
        assert b1 == b2, name


def test_staged_commands_match_pipeline(tmp_path):
    corpus = tmp_path / "corpus"
    build_idiom_corpus(corpus, seed=33, per_idiom=3, fillers=2)
    out = tmp_path / "out"
    assert run("pipeline", "--corpus", corpus, "--out", out,
               "--min-support", "0.2") == 0
    run_dir = out / "generalized"
    staged = tmp_path / "staged"
    staged.mkdir()
    assert run("mine", "--graphs", run_dir / "gcfgs.jsonl",
               "--min-support", "0.2", "--out", staged / "patterns.jsonl") == 0
    assert (staged / "patterns.jsonl").read_bytes() \
        == (run_dir / "patterns.jsonl").read_bytes()
    assert run("filter", "--patterns", staged / "patterns.jsonl",
               "--out", staged / "verdicts.jsonl") == 0
    assert (staged / "verdicts.jsonl").read_bytes() \
        == (run_dir / "verdicts.jsonl").read_bytes()
    assert run("census", "--cfgs", run_dir / "cfgs.jsonl",
               "--out", staged / "census.csv") == 0
    assert (staged / "census.csv").read_bytes() \
        == (run_dir / "census.csv").read_bytes()
    assert run("metrics", "--patterns", staged / "patterns.jsonl",
               "--verdicts", staged / "verdicts.jsonl",
               "--out", staged / "metrics.csv") == 0
    assert (staged / "metrics.csv").read_bytes() \
        == (run_dir / "metrics.csv").read_bytes()


def test_schema_version_on_every_jsonl_line(tmp_path):
    corpus = tmp_path / "corpus"
    build_idiom_corpus(corpus, seed=34, per_idiom=2, fillers=1)
    out = tmp_path / "out"
    assert run("pipeline", "--corpus", corpus, "--out", out,
               "--min-support", "0.3") == 0
    run_dir = out / "generalized"
    for name in ("cfgs.jsonl", "gcfgs.jsonl", "patterns.jsonl",
                 "verdicts.jsonl", "census-examples.jsonl"):
        for line in read_lines(run_dir / name):
            assert json.loads(line)["schema_version"] == 1
    for name in ("census.csv", "metrics.csv"):
        assert read_lines(run_dir / name)[0] == "# schema_version: 1"
    assert json.loads((run_dir / "run.json").read_text())["schema_version"] == 1
