"""Local corpus ingestion: walk a directory of Java files and stream CFGs.

Replaces large-scale dataset infrastructure with plain directories.  Order is
deterministic: files sorted by corpus-relative posix path, methods by their
ordinal within the file.  A file that fails to tokenize or balance produces a
warning record and is skipped; it never aborts the run.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from pathlib import Path

from . import javaparser as jp
from .cfg import CfgBuildError, MethodCfg, MethodRef, build_method_cfg

DEFAULT_GLOBS = ("**/*.java",)


@dataclass(frozen=True)
class IngestWarning:
    file_path: str
    reason: str
    method_index: int | None = None

    def to_json(self) -> dict:
        d: dict = {"file_path": self.file_path, "reason": self.reason}
        if self.method_index is not None:
            d["method_index"] = self.method_index
        return d


@dataclass
class IngestResult:
    cfgs: list[MethodCfg]
    warnings: list[IngestWarning]
    files_seen: int


def list_corpus_files(root: Path, include_globs: tuple[str, ...] = DEFAULT_GLOBS) -> list[str]:
    if not root.is_dir():
        raise FileNotFoundError(f"corpus root not found or not a directory: {root}")
    rels: set[str] = set()
    for pattern in include_globs:
        for p in root.glob(pattern):
            if p.is_file():
                rels.add(p.relative_to(root).as_posix())
    return sorted(rels)


def parse_file(root: Path, rel_path: str) -> tuple[list[MethodCfg], list[IngestWarning]]:
    """Parse one file into MethodCfgs.  Pure function of the file bytes."""
    warnings: list[IngestWarning] = []
    try:
        data = (root / rel_path).read_bytes()
    except OSError as exc:
        return [], [IngestWarning(rel_path, f"unreadable: {exc}")]
    bom = data.startswith(b"\xef\xbb\xbf")
    try:
        source = data.decode("utf-8-sig" if bom else "utf-8")
    except UnicodeDecodeError as exc:
        return [], [IngestWarning(rel_path, f"not UTF-8: {exc}")]
    try:
        toks = jp.tokenize(source)
        match = jp.match_delimiters(toks)
        raw_methods = jp.scan_methods(toks, match)
    except jp.JavaSyntaxError as exc:
        return [], [IngestWarning(rel_path, f"parse failure: {exc}")]
    if bom or not source.isascii():
        # spans are byte ranges into the file; remap char offsets through a
        # prefix table (a stripped BOM shifts everything by its 3 bytes)
        remap = _byte_offset_table(source, 3 if bom else 0)
    else:
        remap = None
    cfgs: list[MethodCfg] = []
    for index, raw in enumerate(raw_methods):
        ref = MethodRef(rel_path, raw.signature, index)
        try:
            cfg = build_method_cfg(source, toks, match, raw, ref)
        except CfgBuildError as exc:
            warnings.append(IngestWarning(rel_path, exc.reason, method_index=index))
            continue
        if remap is not None:
            for node in cfg.nodes:
                node.span = (remap[node.span[0]], remap[node.span[1]])
        cfgs.append(cfg)
    return cfgs, warnings


def _byte_offset_table(source: str, base: int = 0) -> list[int]:
    table = [0] * (len(source) + 1)
    total = base
    for i, ch in enumerate(source):
        table[i] = total
        total += len(ch.encode("utf-8"))
    table[len(source)] = total
    return table


def iter_method_sources(root: Path, include_globs: tuple[str, ...] = DEFAULT_GLOBS):
    """Stream (MethodRef, method source text) pairs in deterministic order.

    The text covers the declaration through its closing brace. Unparseable
    files are skipped silently here; use ingest_corpus for warning records.
    """
    for rel in list_corpus_files(root, include_globs):
        try:
            source = (root / rel).read_text(encoding="utf-8")
            toks = jp.tokenize(source)
            match = jp.match_delimiters(toks)
            raw_methods = jp.scan_methods(toks, match)
        except (OSError, UnicodeDecodeError, jp.JavaSyntaxError):
            continue
        for index, raw in enumerate(raw_methods):
            ref = MethodRef(rel, raw.signature, index)
            yield ref, source[raw.header_start:raw.body_close]


def ingest_corpus(root: Path, include_globs: tuple[str, ...] = DEFAULT_GLOBS,
                  jobs: int = 1) -> IngestResult:
    """Build CFGs for every method of every matching file under root.

    ``jobs`` > 1 parses files in separate processes; results are merged back
    into path order so output is identical for any job count.
    """
    rels = list_corpus_files(root, include_globs)
    cfgs: list[MethodCfg] = []
    warnings: list[IngestWarning] = []
    if jobs <= 1 or len(rels) < 2:
        per_file = (parse_file(root, rel) for rel in rels)
    else:
        executor = concurrent.futures.ProcessPoolExecutor(max_workers=jobs)
        try:
            per_file = list(executor.map(parse_file, [root] * len(rels), rels, chunksize=8))
        finally:
            executor.shutdown()
    for file_cfgs, file_warnings in per_file:
        cfgs.extend(file_cfgs)
        warnings.extend(file_warnings)
    return IngestResult(cfgs=cfgs, warnings=warnings, files_seen=len(rels))
