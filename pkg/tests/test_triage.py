"""Filter rules, the label store, per-size metrics, and the stopping rule."""

import json

import pytest

from sugarminer.mining import PatternGraph, PatternStats, canonical_form
from sugarminer.triage import (
    FilterVerdict,
    LabelError,
    LabelRecord,
    LabelStore,
    LabelingIncomplete,
    apply_rules,
    compute_metrics,
    metrics_csv,
    should_continue,
    unlabeled_investigated,
)


def stats_for(nodes, edges, support=10, db_size=100):
    p = PatternGraph(tuple(nodes), tuple(edges))
    return PatternStats(
        canonical=canonical_form(p),
        size=p.size,
        support_count=support,
        support_ratio=support / db_size,
    )


def flags(v: FilterVerdict):
    return {
        "duplication": v.duplication,
        "data_edge": v.data_edge,
        "null_rule": v.null_rule,
        "error_handling": v.error_handling,
        "entry_exit": v.entry_exit,
    }


class TestRules:
    def test_duplication_pair(self):
        v = apply_rules(stats_for(
            ["ASSIGN INT INT_LIT", "ASSIGN INT INT_LIT"], [(0, 1, "NONE|")]
        ))
        assert flags(v) == {
            "duplication": True, "data_edge": False, "null_rule": False,
            "error_handling": False, "entry_exit": False,
        }
        assert v.investigated

    def test_single_entry_node(self):
        v = apply_rules(stats_for(["ENTRY"], []))
        assert not v.entry_exit  # needs both
        assert v.investigated    # size 1 is always inspected

    def test_null_and_data_edge_combination(self):
        v = apply_rules(stats_for(
            ["IF NULL EQ", "ASSIGN OBJECT NULL"], [(0, 1, "TRUE|USE_DEF")]
        ))
        assert v.data_edge and v.null_rule
        assert not v.duplication and not v.error_handling and not v.entry_exit

    def test_error_handling_kinds(self):
        for label in ("TRY", "CATCH", "THROW"):
            v = apply_rules(stats_for([label], []))
            assert v.error_handling, label
        v = apply_rules(stats_for(["THROWER"], []))  # word boundary respected
        assert not v.error_handling

    def test_entry_exit_requires_both(self):
        v = apply_rules(stats_for(
            ["ENTRY", "RETURN INT_LIT", "EXIT"],
            [(0, 1, "NONE|"), (1, 2, "NONE|")],
        ))
        assert v.entry_exit
        assert v.investigated

    def test_baseline_labels_match_rules(self):
        v = apply_rules(stats_for(
            ["x = null;", "throw e;"], [(0, 1, "NONE|")]
        ))
        assert v.null_rule and v.error_handling

    def test_nothing_fires(self):
        v = apply_rules(stats_for(
            ["IF INT_LIT GT", "ASSIGN INT INT_LIT"], [(0, 1, "TRUE|")]
        ))
        assert flags(v) == {k: False for k in flags(v)}
        assert not v.investigated

    def test_purity(self):
        s = stats_for(["TRY", "CATCH"], [(0, 1, "EXCEPTION|")])
        assert apply_rules(s).to_json() == apply_rules(s).to_json()


def make_patterns():
    # sizes 1..3, distinct labels so ids are unique
    specs = [
        (["A"], [], 30), (["B"], [], 20),
        (["A", "B"], [(0, 1, "NONE|")], 12),
        (["B", "B"], [(0, 1, "NONE|")], 8),
        (["A", "B", "B"], [(0, 1, "NONE|"), (1, 2, "NONE|")], 5),
    ]
    return [stats_for(nodes, edges, support) for nodes, edges, support in specs]


class TestLabelStore:
    def test_round_trip_and_latest_wins(self, tmp_path):
        patterns = make_patterns()
        store = LabelStore(tmp_path / "labels.jsonl", {p.id for p in patterns})
        pid = patterns[0].id
        store.record_label(LabelRecord(pid, sugarable=True, sugar_name="unless"))
        store.record_label(LabelRecord(pid, sugarable=False))
        assert len(store.history_for(pid)) == 2
        assert store.latest()[pid].sugarable is False
        # replay from disk reproduces latest-wins state
        reloaded = LabelStore(tmp_path / "labels.jsonl", {p.id for p in patterns})
        assert reloaded.latest()[pid].sugarable is False
        assert len(reloaded.history_for(pid)) == 2

    def test_unknown_pattern_rejected(self, tmp_path):
        store = LabelStore(tmp_path / "labels.jsonl", {"abc"})
        with pytest.raises(LabelError):
            store.record_label(LabelRecord("nope", sugarable=True))

    def test_name_without_sugarable_rejected(self, tmp_path):
        store = LabelStore(tmp_path / "labels.jsonl", {"abc"})
        with pytest.raises(LabelError):
            store.record_label(LabelRecord("abc", sugarable=False, sugar_name="x"))

    def test_log_lines_carry_schema_version(self, tmp_path):
        patterns = make_patterns()
        store = LabelStore(tmp_path / "labels.jsonl", {p.id for p in patterns})
        store.record_label(LabelRecord(patterns[0].id, sugarable=True))
        line = (tmp_path / "labels.jsonl").read_text().splitlines()[0]
        assert json.loads(line)["schema_version"] == 1


class TestMetrics:
    def test_new_and_unique_arithmetic(self):
        patterns = make_patterns()
        verdicts = [apply_rules(p) for p in patterns]
        by_size = {}
        for p in patterns:
            by_size.setdefault(p.size, []).append(p)
        labels = {
            by_size[1][0].id: LabelRecord(by_size[1][0].id, True, "S1"),
            by_size[1][1].id: LabelRecord(by_size[1][1].id, True, "S2"),
            by_size[2][0].id: LabelRecord(by_size[2][0].id, True, "S2"),
            by_size[2][1].id: LabelRecord(by_size[2][1].id, True, "S3"),
        }
        rows = compute_metrics(patterns, verdicts, labels)
        assert [(r.size, r.new_sugars, r.unique_sugars) for r in rows] \
            == [(1, 2, 2), (2, 1, 2), (3, 0, 0)]
        assert rows[0].new_sugars == rows[0].unique_sugars  # size-1 identity

    def test_no_labels(self):
        patterns = make_patterns()
        verdicts = [apply_rules(p) for p in patterns]
        rows = compute_metrics(patterns, verdicts, {})
        assert all(r.sugarable_count == 0 and r.new_sugars == 0 and r.unique_sugars == 0
                   for r in rows)

    def test_median_single_value(self):
        patterns = [stats_for(["A"], [], support=814)]
        rows = compute_metrics(patterns, [apply_rules(patterns[0])], {})
        assert rows[0].median_frequency == 814

    def test_median_even_count_averages(self):
        patterns = [stats_for(["A"], [], 10), stats_for(["B"], [], 15)]
        rows = compute_metrics(patterns, [apply_rules(p) for p in patterns], {})
        assert rows[0].median_frequency == 12.5

    def test_total_consistency(self):
        patterns = make_patterns()
        rows = compute_metrics(patterns, [apply_rules(p) for p in patterns], {})
        assert sum(r.total_frequent for r in rows) == len(patterns)

    def test_csv_layout(self):
        patterns = make_patterns()
        rows = compute_metrics(patterns, [apply_rules(p) for p in patterns], {})
        text = metrics_csv(rows)
        lines = text.strip().splitlines()
        assert lines[0] == "# schema_version: 1"
        assert lines[1] == "size,total,investigated,median_freq,sugarable,new_sugars,unique_sugars"
        assert lines[2].startswith("1,2,")


class TestStopping:
    def setup_method(self):
        self.patterns = make_patterns()
        self.verdicts = [apply_rules(p) for p in self.patterns]

    def complete_labels(self, names_by_size):
        labels = {}
        for p in self.patterns:
            verdict = next(v for v in self.verdicts if v.pattern_id == p.id)
            if not verdict.investigated:
                continue
            name = names_by_size.get(p.size)
            labels[p.id] = LabelRecord(p.id, sugarable=name is not None,
                                       sugar_name=name)
        return labels

    def test_continue_while_new_names(self):
        labels = self.complete_labels({1: "S1", 2: "S2"})
        rows = compute_metrics(self.patterns, self.verdicts, labels)
        assert should_continue(rows, 1, 4, self.patterns, self.verdicts, labels)

    def test_stop_when_no_new_names(self):
        labels = self.complete_labels({1: "S1", 2: "S1"})
        rows = compute_metrics(self.patterns, self.verdicts, labels)
        assert not should_continue(rows, 2, 4, self.patterns, self.verdicts, labels)

    def test_stop_at_max_size(self):
        labels = self.complete_labels({1: "S1", 2: "S2", 3: "S3"})
        rows = compute_metrics(self.patterns, self.verdicts, labels)
        assert not should_continue(rows, 3, 3, self.patterns, self.verdicts, labels)

    def test_incomplete_labeling_raises_with_ids(self):
        labels = {}
        rows = compute_metrics(self.patterns, self.verdicts, labels)
        with pytest.raises(LabelingIncomplete) as err:
            should_continue(rows, 1, 4, self.patterns, self.verdicts, labels)
        expected = unlabeled_investigated(self.patterns, self.verdicts, labels, 1)
        assert err.value.unlabeled_ids == expected
        assert len(expected) == 2

    def test_added_labels_never_rewrite_smaller_sizes(self):
        # labels only added at size 2: the size-1 row is byte-for-byte stable
        labels = self.complete_labels({1: "S1"})
        before = compute_metrics(self.patterns, self.verdicts, labels)
        size1_before = next(r for r in before if r.size == 1).to_json()
        for p in self.patterns:
            if p.size == 2 and p.id not in labels:
                labels[p.id] = LabelRecord(p.id, sugarable=True, sugar_name="S9")
        after = compute_metrics(self.patterns, self.verdicts, labels)
        size1_after = next(r for r in after if r.size == 1).to_json()
        assert size1_before == size1_after
        assert next(r for r in after if r.size == 2).new_sugars == 1
