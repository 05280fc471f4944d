"""Deterministic frequent subgraph mining over labeled directed graphs.

Transaction-style support: a pattern's support is the number of database
graphs containing at least one embedding, each graph counted once.  Patterns
are identified up to label- and direction-preserving isomorphism via a
permutation-minimal canonical serialization; the node-count bound keeps
exhaustive permutation cheap.  Growth is level-wise, one element (node+edge
or edge) per level, with Apriori pruning against the previous level.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from itertools import permutations

from .cfg import MethodRef
from .generalize import GeneralizedCfg


class MiningError(Exception):
    pass


@dataclass
class MiningGraph:
    """Database entry: node labels indexed by position, labeled directed edges."""
    method: MethodRef
    node_labels: list[str]
    edges: list[tuple[int, int, str]]

    @staticmethod
    def from_generalized(g: GeneralizedCfg) -> "MiningGraph":
        labels = [n.label for n in sorted(g.nodes, key=lambda n: n.id)]
        edges = [(e.src, e.dst, e.label) for e in g.edges]
        return MiningGraph(method=g.method, node_labels=labels, edges=edges)


@dataclass(frozen=True)
class PatternGraph:
    nodes: tuple[str, ...]
    edges: tuple[tuple[int, int, str], ...]

    @property
    def size(self) -> int:
        return len(self.nodes)

    def validate(self) -> None:
        n = len(self.nodes)
        seen = set()
        for s, d, lbl in self.edges:
            if not (0 <= s < n and 0 <= d < n):
                raise MiningError(f"edge endpoint out of range: {(s, d, lbl)}")
            if s == d:
                raise MiningError("self loops are not allowed")
            if (s, d, lbl) in seen:
                raise MiningError(f"duplicate edge {(s, d, lbl)}")
            seen.add((s, d, lbl))
        if n > 1 and not _weakly_connected(n, self.edges):
            raise MiningError("pattern must be weakly connected")


def _weakly_connected(n: int, edges: tuple[tuple[int, int, str], ...]) -> bool:
    if n == 0:
        return False
    adj: dict[int, set[int]] = {i: set() for i in range(n)}
    for s, d, _ in edges:
        adj[s].add(d)
        adj[d].add(s)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == n


@dataclass(frozen=True)
class CanonicalForm:
    text: str


DEFAULT_MAX_SIZE = 4


def canonical_form(p: PatternGraph, max_size: int = DEFAULT_MAX_SIZE) -> CanonicalForm:
    """Permutation-minimal serialization identifying the isomorphism class.

    Only orderings that list node labels in sorted order can yield the
    minimum, so permutation runs within equal-label groups; the node-count
    bound keeps this exhaustive search cheap.
    """
    p.validate()
    if p.size > max_size:
        raise MiningError(f"pattern size {p.size} exceeds bound {max_size}")
    order = sorted(range(p.size), key=lambda i: p.nodes[i])
    sorted_labels = [p.nodes[i] for i in order]
    # group positions holding equal labels; permute within groups only
    groups: list[list[int]] = []
    start = 0
    for i in range(1, p.size + 1):
        if i == p.size or sorted_labels[i] != sorted_labels[start]:
            groups.append(order[start:i])
            start = i
    best: str | None = None
    for assignment in _group_permutations(groups):
        pos = {old: new for new, old in assignment}
        edges = sorted((pos[s], pos[d], lbl) for s, d, lbl in p.edges)
        text = json.dumps([sorted_labels, [list(e) for e in edges]],
                          separators=(",", ":"))
        if best is None or text < best:
            best = text
    assert best is not None
    return CanonicalForm(text=best)


def _group_permutations(groups: list[list[int]]):
    """Yield node orderings as lists of (new_index, old_index), permuting only
    inside equal-label groups."""

    def rec(gi: int, prefix: list[int]):
        if gi == len(groups):
            yield list(enumerate(prefix))
            return
        for perm in permutations(groups[gi]):
            yield from rec(gi + 1, prefix + list(perm))

    yield from rec(0, [])


def decode_canonical(text: str) -> PatternGraph:
    labels, edges = json.loads(text)
    return PatternGraph(nodes=tuple(labels),
                        edges=tuple((s, d, lbl) for s, d, lbl in edges))


def pattern_id(canonical_text: str) -> str:
    return hashlib.sha256(canonical_text.encode("utf-8")).hexdigest()[:16]


@dataclass
class Witness:
    method: MethodRef
    mapping: list[tuple[int, int]]  # (pattern index, graph node id), sorted

    def to_json(self) -> dict:
        return {"method": self.method.to_json(),
                "mapping": [list(m) for m in self.mapping]}


@dataclass
class PatternStats:
    canonical: CanonicalForm
    size: int
    support_count: int
    support_ratio: float
    witnesses: list[Witness] = field(default_factory=list)

    @property
    def id(self) -> str:
        return pattern_id(self.canonical.text)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "canonical": self.canonical.text,
            "size": self.size,
            "support_count": self.support_count,
            "support_ratio": self.support_ratio,
            "witnesses": [w.to_json() for w in self.witnesses],
        }


class _GraphIndex:
    """Per-graph adjacency indexes for embedding search."""

    def __init__(self, g: MiningGraph):
        self.g = g
        self.by_label: dict[str, list[int]] = {}
        for i, lbl in enumerate(g.node_labels):
            self.by_label.setdefault(lbl, []).append(i)
        self.edge_set = set(g.edges)
        self.out_adj: dict[int, list[tuple[int, str]]] = {}
        self.in_adj: dict[int, list[tuple[int, str]]] = {}
        for s, d, lbl in g.edges:
            self.out_adj.setdefault(s, []).append((d, lbl))
            self.in_adj.setdefault(d, []).append((s, lbl))


def find_embeddings(p: PatternGraph, g: MiningGraph | GeneralizedCfg,
                    limit: int = 1) -> list[dict[int, int]]:
    """Injective, label- and direction-preserving mappings of p into g.

    Non-induced: extra graph edges between mapped nodes are allowed.  Search
    is deterministic: pattern nodes in index order, graph candidates in
    ascending node id.  Stops after ``limit`` mappings.
    """
    if isinstance(g, GeneralizedCfg):
        g = MiningGraph.from_generalized(g)
    index = _GraphIndex(g)
    return _embed(p, index, limit)


def _embed(p: PatternGraph, index: _GraphIndex, limit: int) -> list[dict[int, int]]:
    n = p.size
    results: list[dict[int, int]] = []
    # pattern adjacency restricted to already-assigned nodes
    pat_out: dict[int, list[tuple[int, str]]] = {i: [] for i in range(n)}
    pat_in: dict[int, list[tuple[int, str]]] = {i: [] for i in range(n)}
    for s, d, lbl in p.edges:
        pat_out[s].append((d, lbl))
        pat_in[d].append((s, lbl))

    assignment: dict[int, int] = {}
    used: set[int] = set()

    def candidates(i: int) -> list[int]:
        return index.by_label.get(p.nodes[i], [])

    def consistent(i: int, node: int) -> bool:
        for d, lbl in pat_out[i]:
            if d in assignment and (node, assignment[d], lbl) not in index.edge_set:
                return False
        for s, lbl in pat_in[i]:
            if s in assignment and (assignment[s], node, lbl) not in index.edge_set:
                return False
        return True

    def backtrack(i: int) -> bool:
        if i == n:
            results.append(dict(assignment))
            return len(results) >= limit
        for node in candidates(i):
            if node in used or not consistent(i, node):
                continue
            assignment[i] = node
            used.add(node)
            if backtrack(i + 1):
                return True
            used.discard(node)
            del assignment[i]
        return False

    backtrack(0)
    return results


def required_support(min_support_ratio: float, db_size: int) -> int:
    """Smallest integer support satisfying count/db_size >= ratio.

    The rounding guard absorbs float noise in ratio*db_size so exact
    boundaries (e.g. 0.66 of 3 -> 2) stay stable."""
    if not (0 < min_support_ratio <= 1):
        raise MiningError("min_support_ratio must be in (0, 1]")
    return max(1, math.ceil(round(min_support_ratio * db_size, 9)))


def mine(db: list[MiningGraph], min_support_ratio: float,
         max_size: int = DEFAULT_MAX_SIZE,
         witnesses_per_pattern: int = 5) -> list[PatternStats]:
    """Level-wise frequent pattern search; fully deterministic output."""
    if not db:
        raise MiningError("database must be non-empty")
    threshold = required_support(min_support_ratio, len(db))
    indexes = [_GraphIndex(g) for g in db]

    # level 1: single node labels
    label_tids: dict[str, set[int]] = {}
    for gi, g in enumerate(db):
        for lbl in set(g.node_labels):
            label_tids.setdefault(lbl, set()).add(gi)
    frequent_labels = {lbl for lbl, tids in label_tids.items() if len(tids) >= threshold}

    # edge vocabulary grounded in the database, endpoints restricted to
    # frequent labels (a pattern with an infrequent label cannot be frequent)
    observed: set[tuple[str, str, str]] = set()
    for g in db:
        for s, d, lbl in g.edges:
            ls, ld = g.node_labels[s], g.node_labels[d]
            if ls in frequent_labels and ld in frequent_labels:
                observed.add((ls, lbl, ld))
    vocab = _EdgeVocabulary(observed)

    current: dict[str, tuple[PatternGraph, set[int]]] = {}
    all_frequent: dict[str, tuple[PatternGraph, set[int]]] = {}
    for lbl in sorted(frequent_labels):
        p = PatternGraph(nodes=(lbl,), edges=())
        canon = canonical_form(p, max_size).text
        current[canon] = (p, label_tids[lbl])
        all_frequent[canon] = (p, label_tids[lbl])

    while current:
        candidates: dict[str, tuple[PatternGraph, set[int]]] = {}
        for canon in sorted(current):
            parent, parent_tids = current[canon]
            for child in _extensions(parent, vocab, max_size):
                child_canon = canonical_form(child, max_size).text
                if child_canon in candidates or child_canon in all_frequent:
                    continue
                candidates[child_canon] = (child, parent_tids)
        next_level: dict[str, tuple[PatternGraph, set[int]]] = {}
        for child_canon in sorted(candidates):
            child, parent_tids = candidates[child_canon]
            if not _subpatterns_frequent(child, current, max_size):
                continue
            tids = {
                gi for gi in sorted(parent_tids)
                if _embed(child, indexes[gi], 1)
            }
            if len(tids) >= threshold:
                next_level[child_canon] = (child, tids)
                all_frequent[child_canon] = (child, tids)
        current = next_level

    return _finalize(all_frequent, db, indexes, witnesses_per_pattern)


class _EdgeVocabulary:
    """Observed (source label, edge label, target label) triples, indexed."""

    def __init__(self, observed: set[tuple[str, str, str]]):
        self.pair_labels: dict[tuple[str, str], list[str]] = {}
        self.out_of: dict[str, list[tuple[str, str]]] = {}
        self.into: dict[str, list[tuple[str, str]]] = {}
        for ls, lbl, ld in sorted(observed):
            self.pair_labels.setdefault((ls, ld), []).append(lbl)
            self.out_of.setdefault(ls, []).append((lbl, ld))
            self.into.setdefault(ld, []).append((lbl, ls))


def _extensions(parent: PatternGraph, vocab: _EdgeVocabulary, max_size: int):
    """Deterministic candidate generation from one frequent parent."""
    existing = set(parent.edges)
    n = parent.size
    # (b) one new edge between existing nodes
    for s in range(n):
        for d in range(n):
            if s == d:
                continue
            for lbl in vocab.pair_labels.get((parent.nodes[s], parent.nodes[d]), ()):
                if (s, d, lbl) not in existing:
                    yield PatternGraph(nodes=parent.nodes,
                                       edges=parent.edges + ((s, d, lbl),))
    # (a) one new node connected by one edge, either direction
    if n >= max_size:
        return
    for anchor in range(n):
        la = parent.nodes[anchor]
        for lbl, ld in vocab.out_of.get(la, ()):  # anchor -> new
            yield PatternGraph(nodes=parent.nodes + (ld,),
                               edges=parent.edges + ((anchor, n, lbl),))
        for lbl, ls in vocab.into.get(la, ()):  # new -> anchor
            yield PatternGraph(nodes=parent.nodes + (ls,),
                               edges=parent.edges + ((n, anchor, lbl),))


def _subpatterns_frequent(p: PatternGraph,
                          prev_level: dict[str, tuple[PatternGraph, set[int]]],
                          max_size: int) -> bool:
    """Apriori check: every connected previous-level sub-pattern (one edge
    removed, plus its node when isolated) must have been frequent."""
    for k in range(len(p.edges)):
        edges = p.edges[:k] + p.edges[k + 1:]
        degree = [0] * p.size
        for s, d, _ in edges:
            degree[s] += 1
            degree[d] += 1
        isolated = [i for i in range(p.size) if degree[i] == 0]
        if len(isolated) == 0:
            sub = PatternGraph(nodes=p.nodes, edges=edges)
            if not _weakly_connected(sub.size, sub.edges):
                continue
        elif len(isolated) == 1 and p.size > 1:
            drop = isolated[0]
            remap = {old: new for new, old in enumerate(i for i in range(p.size) if i != drop)}
            nodes = tuple(p.nodes[i] for i in range(p.size) if i != drop)
            sub = PatternGraph(
                nodes=nodes,
                edges=tuple((remap[s], remap[d], lbl) for s, d, lbl in edges),
            )
            if sub.size > 1 and not _weakly_connected(sub.size, sub.edges):
                continue
        else:
            continue
        if canonical_form(sub, max_size).text not in prev_level:
            return False
    return True


def _finalize(frequent: dict[str, tuple[PatternGraph, set[int]]],
              db: list[MiningGraph], indexes: list[_GraphIndex],
              witnesses_per_pattern: int) -> list[PatternStats]:
    stats: list[PatternStats] = []
    for canon_text, (_, tids) in frequent.items():
        rep = decode_canonical(canon_text)  # canonical node order everywhere
        witnesses: list[Witness] = []
        for gi in sorted(tids)[:witnesses_per_pattern]:
            found = _embed(rep, indexes[gi], 1)
            if found:
                mapping = sorted(found[0].items())
                witnesses.append(Witness(method=db[gi].method, mapping=mapping))
        stats.append(
            PatternStats(
                canonical=CanonicalForm(canon_text),
                size=rep.size,
                support_count=len(tids),
                support_ratio=len(tids) / len(db),
                witnesses=witnesses,
            )
        )
    stats.sort(key=lambda s: (s.size, -s.support_count, s.canonical.text))
    return stats


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

BRUTE_MAX_NODES = 8
BRUTE_MAX_GRAPHS = 16


def brute_force_mine(db: list[MiningGraph], min_support_ratio: float,
                     max_size: int = DEFAULT_MAX_SIZE,
                     witnesses_per_pattern: int = 5) -> list[PatternStats]:
    """Explicit enumeration of every connected sub-pattern of every graph.

    Exponential by design; guarded to stay a test oracle."""
    if not db:
        raise MiningError("database must be non-empty")
    if len(db) > BRUTE_MAX_GRAPHS:
        raise MiningError(f"oracle limited to {BRUTE_MAX_GRAPHS} graphs")
    for g in db:
        if len(g.node_labels) > BRUTE_MAX_NODES:
            raise MiningError(f"oracle limited to {BRUTE_MAX_NODES} nodes per graph")
    threshold = required_support(min_support_ratio, len(db))
    presence: dict[str, set[int]] = {}
    for gi, g in enumerate(db):
        for canon in _enumerate_subpatterns(g, max_size):
            presence.setdefault(canon, set()).add(gi)
    frequent = {
        canon: (decode_canonical(canon), tids)
        for canon, tids in presence.items()
        if len(tids) >= threshold
    }
    indexes = [_GraphIndex(g) for g in db]
    return _finalize(frequent, db, indexes, witnesses_per_pattern)


def _enumerate_subpatterns(g: MiningGraph, max_size: int) -> set[str]:
    n = len(g.node_labels)
    out: set[str] = set()
    node_ids = list(range(n))
    for subset in _subsets_up_to(node_ids, max_size):
        inner = [e for e in g.edges if e[0] in subset and e[1] in subset]
        remap = {node: i for i, node in enumerate(sorted(subset))}
        labels = tuple(g.node_labels[node] for node in sorted(subset))
        k = len(subset)
        for bits in range(1 << len(inner)):
            edges = tuple(
                (remap[s], remap[d], lbl)
                for idx, (s, d, lbl) in enumerate(inner)
                if bits >> idx & 1
            )
            if k > 1 and not _weakly_connected(k, edges):
                continue
            if k == 1 and edges:
                continue
            p = PatternGraph(nodes=labels, edges=edges)
            out.add(canonical_form(p, max_size).text)
    return out


def _subsets_up_to(items: list[int], max_size: int):
    n = len(items)

    def rec(start: int, chosen: list[int]):
        if chosen:
            yield set(chosen)
        if len(chosen) == max_size:
            return
        for i in range(start, n):
            chosen.append(items[i])
            yield from rec(i + 1, chosen)
            chosen.pop()

    yield from rec(0, [])
