"""Corpus ingestion: ordering, warnings, determinism, parallel equivalence."""

import re

from sugarminer.cfg import validate_cfg
from sugarminer.corpus import ingest_corpus, list_corpus_files
from sugarminer.jsonio import method_cfg_to_json


def write(root, rel, text):
    p = root / rel
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8")


def test_empty_corpus(tmp_path):
    result = ingest_corpus(tmp_path)
    assert result.files_seen == 0
    assert result.cfgs == []
    assert result.warnings == []


def test_method_index_assignment(tmp_path):
    write(tmp_path, "One.java",
          "class One { void a() { x(); } int b() { return 1; } }")
    result = ingest_corpus(tmp_path)
    assert [(c.method.method_index, c.method.method_signature) for c in result.cfgs] \
        == [(0, "a()"), (1, "b()")]


def test_invalid_file_warns_and_others_survive(tmp_path):
    # oracle: count method headers in the valid files with a regex, before
    # trusting the parser's own count
    valid_count = 0
    for i in range(9):
        n_methods = (i % 3) + 1
        methods = "\n".join(
            f"  public int m{j}(int x) {{ return x + {j}; }}"
            for j in range(n_methods)
        )
        write(tmp_path, f"src/V{i}.java", f"class V{i} {{\n{methods}\n}}\n")
    broken = 'class B { void bad( { "unterminated }'
    write(tmp_path, "src/Broken.java", broken)
    expected = 0
    for i in range(9):
        text = (tmp_path / f"src/V{i}.java").read_text()
        expected += len(re.findall(r"^\s*public int m\d+\(", text, re.M))
    result = ingest_corpus(tmp_path)
    assert len(result.warnings) == 1
    assert result.warnings[0].file_path == "src/Broken.java"
    assert len(result.cfgs) == expected
    for cfg in result.cfgs:
        assert validate_cfg(cfg) == []


def test_deterministic_order_and_content(tmp_path):
    write(tmp_path, "b/Second.java", "class S { void s() { x(); } }")
    write(tmp_path, "a/First.java", "class F { void f() { y(); } }")
    write(tmp_path, "Top.java", "class T { void t() { z(); } }")
    assert list_corpus_files(tmp_path) == ["Top.java", "a/First.java", "b/Second.java"]
    r1 = ingest_corpus(tmp_path)
    r2 = ingest_corpus(tmp_path)
    assert [method_cfg_to_json(c) for c in r1.cfgs] \
        == [method_cfg_to_json(c) for c in r2.cfgs]


def test_parallel_matches_serial(tmp_path):
    for i in range(6):
        write(tmp_path, f"F{i}.java",
              f"class F{i} {{ int go(int v) {{ return v * {i}; }} }}")
    serial = ingest_corpus(tmp_path, jobs=1)
    parallel = ingest_corpus(tmp_path, jobs=3)
    assert [method_cfg_to_json(c) for c in serial.cfgs] \
        == [method_cfg_to_json(c) for c in parallel.cfgs]


def test_include_globs(tmp_path):
    write(tmp_path, "a/Keep.java", "class K { void k() { x(); } }")
    write(tmp_path, "b/Skip.java", "class S { void s() { x(); } }")
    result = ingest_corpus(tmp_path, include_globs=("a/**/*.java",))
    assert [c.method.file_path for c in result.cfgs] == ["a/Keep.java"]


def test_iter_method_sources_round_trips(tmp_path):
    from sugarminer.cfg import build_cfg_from_source
    from sugarminer.corpus import iter_method_sources

    write(tmp_path, "M.java",
          "class M { int a(int x) { return x + 1; } void b() { go(); } }")
    pairs = list(iter_method_sources(tmp_path))
    assert [(r.method_signature, r.method_index) for r, _ in pairs] \
        == [("a(int)", 0), ("b()", 1)]
    for ref, text in pairs:
        assert text.endswith("}")
        rebuilt = build_cfg_from_source(text, ref)
        assert rebuilt.method == ref


def test_non_ascii_spans_are_byte_ranges(tmp_path):
    src = 'class U { void u() { String s = "héllo"; use(s); } }\n'
    write(tmp_path, "U.java", src)
    result = ingest_corpus(tmp_path)
    data = (tmp_path / "U.java").read_bytes()
    decl = result.cfgs[0].nodes[1]
    snippet = data[decl.span[0]:decl.span[1]].decode("utf-8")
    assert snippet == 'String s = "héllo";'


def test_bom_file_parses_with_true_byte_spans(tmp_path):
    (tmp_path / "B.java").write_bytes(
        b"\xef\xbb\xbf" + b"class B { void m() { total = 9; } }"
    )
    result = ingest_corpus(tmp_path)
    assert result.warnings == []
    assert len(result.cfgs) == 1
    data = (tmp_path / "B.java").read_bytes()
    assign = result.cfgs[0].nodes[1]
    assert data[assign.span[0]:assign.span[1]] == b"total = 9;"
