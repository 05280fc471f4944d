"""Idiom detectors and the per-method census."""

import random

import pytest

from corpusgen import IDIOM_NEGATIVES, IDIOM_PLANTERS, build_idiom_corpus
from sugarminer.catalog import CatalogIdiom, census, detect_idiom
from sugarminer.cfg import MethodRef, build_cfg_from_source
from sugarminer.corpus import ingest_corpus

REF = MethodRef("test.java", "m()", 0)


def cfg_of(source):
    return build_cfg_from_source(source, REF)


def detections(source):
    cfg = cfg_of(source)
    return {i for i in CatalogIdiom if detect_idiom(cfg, i)}


class TestDetectors:
    def test_three_consecutive_assignments_one_instance(self):
        src = 'void m() { id = 0; name = "Bob"; age = 50; }'
        instances = detect_idiom(cfg_of(src), CatalogIdiom.MULTIPLE_ASSIGNMENT)
        assert len(instances) == 1
        assert len(instances[0]) == 3

    def test_any_all_disjunction(self):
        src = "void m(boolean a, boolean b, boolean c) { if (a || b || c) { x(); } }"
        assert detections(src) == {CatalogIdiom.ANY_ALL}

    def test_any_all_conjunction(self):
        src = "void m(boolean a, boolean b, boolean c) { if (a && b && c) { x(); } }"
        assert detections(src) == {CatalogIdiom.ANY_ALL}

    def test_plain_assignment_matches_nothing(self):
        assert detections("void m() { a = 1; }") == set()

    def test_rethrow(self):
        src = "void m() { try { w(); } catch (E e) { throw e; } }"
        assert detections(src) == {CatalogIdiom.RETHROW}

    def test_unless_requires_top_negation(self):
        assert detections("void m(boolean a) { if (!a) { x(); } }") \
            == {CatalogIdiom.UNLESS}
        assert CatalogIdiom.UNLESS not in detections(
            "void m(boolean a, boolean b) { if (!a || b) { x(); } }"
        )

    def test_null_if_null_both_surfaces(self):
        guarded = "Object m(Object o) { if (o != null) { o.use(); } return null; }"
        early = "Object m(Object o) { if (o == null) { return null; } o.use(); return o; }"
        assert detections(guarded) == {CatalogIdiom.NULL_IF_NULL}
        assert CatalogIdiom.NULL_IF_NULL in detections(early)

    def test_require_type(self):
        src = ("void m(Object o) { if (o instanceof Widget) { o.use(); } "
               "else { throw new BadTypeException(); } }")
        assert detections(src) == {CatalogIdiom.REQUIRE_TYPE}

    def test_multiple_increment_requires_increments(self):
        assert detections("void m(int a, int b) { a++; b++; }") \
            == {CatalogIdiom.MULTIPLE_INCREMENT}
        assert detections("void m(int a, int b) { a++; b--; }") == set()

    @pytest.mark.parametrize("source", IDIOM_NEGATIVES)
    def test_negative_corpus(self, source):
        assert detections(source) == set()

    def test_planters_fire_exactly_their_idiom(self):
        rng = random.Random(6)
        for idiom_name, planter in IDIOM_PLANTERS.items():
            for i in range(6):
                got = detections(planter(rng, f"m{i}"))
                assert got == {CatalogIdiom(idiom_name)}, (idiom_name, got)


class TestCensus:
    def test_planted_counts(self, tmp_path):
        planted = build_idiom_corpus(tmp_path, seed=21, per_idiom=3, fillers=4)
        cfgs = ingest_corpus(tmp_path).cfgs
        rows = {r.idiom.value: r for r in census(cfgs)}
        for idiom, expected in planted.items():
            assert rows[idiom].cfg_count == expected, idiom

    def test_method_with_three_instances_counts_once(self):
        rng = random.Random(30)
        multi = IDIOM_PLANTERS["UNLESS"](rng, "m0", 3)
        single = IDIOM_PLANTERS["UNLESS"](rng, "m1")
        db = [cfg_of(multi), cfg_of(single)]
        assert len(detect_idiom(db[0], CatalogIdiom.UNLESS)) == 3
        row = next(r for r in census(db) if r.idiom == CatalogIdiom.UNLESS)
        assert row.cfg_count == 2

    def test_example_refs_deterministic_and_bounded(self, tmp_path):
        build_idiom_corpus(tmp_path, seed=22, per_idiom=7, fillers=0)
        cfgs = ingest_corpus(tmp_path).cfgs
        r1 = census(cfgs, examples_per_idiom=5)
        r2 = census(cfgs, examples_per_idiom=5)
        flat1 = [(row.idiom.value, [(m.to_json(), ids) for m, ids in row.example_refs])
                 for row in r1]
        flat2 = [(row.idiom.value, [(m.to_json(), ids) for m, ids in row.example_refs])
                 for row in r2]
        assert flat1 == flat2
        assert all(len(row.example_refs) <= 5 for row in r1)

    def test_census_matches_boolean_fold(self, tmp_path):
        # independent oracle: per-method any-instance fold
        build_idiom_corpus(tmp_path, seed=23, per_idiom=2, fillers=3)
        cfgs = ingest_corpus(tmp_path).cfgs
        rows = {r.idiom: r.cfg_count for r in census(cfgs)}
        for idiom in CatalogIdiom:
            fold = sum(1 for c in cfgs if bool(detect_idiom(c, idiom)))
            assert rows[idiom] == fold
