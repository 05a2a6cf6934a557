"""Verification suite: fixture self-tests, reports, negative controls."""

import json
from fractions import Fraction

import pytest

from lieinv import expr as ex
from lieinv import fixtures as fx
from lieinv import liealg
from lieinv import numeric as nm
from lieinv.invariants import free_generators, transitive_generators
from lieinv.verify import (
    TABLE_ROWS,
    annihilation_check,
    perturbed_variants,
    run_fixture_suite,
)

CFG = nm.SamplerConfig()


class TestFixtureSelfTest:
    @pytest.mark.parametrize("name", fx.TRANSITIVE_NAMES)
    def test_transitive_fixtures_annihilated(self, name):
        entry = liealg.catalog_lookup(name, {})
        _, gens = transitive_generators(entry)
        for label, e in fx.transitive_fixture(name).parsed():
            assert annihilation_check(gens, e, CFG, entry.param_map), label

    @pytest.mark.parametrize("name", fx.FREE_NAMES)
    def test_free_fixtures_annihilated(self, name):
        entry = liealg.catalog_lookup(name, {})
        _, gens = free_generators(entry, 1)
        for label, e in fx.free_fixture(name, 1).parsed():
            assert annihilation_check(gens, e, CFG, entry.param_map), label


class TestNegativeControls:
    @pytest.mark.parametrize("name", ["g2", "g3_1", "g3_7"])
    def test_perturbed_invariants_fail(self, name):
        entry = liealg.catalog_lookup(name, {})
        _, gens = transitive_generators(entry)
        fixture = fx.transitive_fixture(name)
        space = fixture.space()
        # perturb the highest-order invariant (always multi-term or moved)
        label, e = fixture.parsed()[-1]
        variants = perturbed_variants(e, space)
        assert len(variants) == 3
        for variant in variants:
            assert not annihilation_check(gens, variant, CFG,
                                          entry.param_map), label

    def test_single_term_invariant_perturbation(self):
        entry = liealg.catalog_lookup("2g1", {})
        _, gens = transitive_generators(entry)
        fixture = fx.transitive_fixture("2g1")
        _, e = fixture.parsed()[0]  # u_x, a single term
        for variant in perturbed_variants(e, fixture.space()):
            assert not annihilation_check(gens, variant, CFG)


class TestReport:
    def test_2d_transitive_passes(self):
        report = run_fixture_suite(["2d-transitive"], CFG)
        assert report.passed
        assert len(report.rows) == 2

    def test_json_deterministic_and_sorted(self):
        r1 = run_fixture_suite(["1d"], CFG)
        r2 = run_fixture_suite(["1d"], CFG)
        assert r1.to_json() == r2.to_json()
        payload = json.loads(r1.to_json())
        assert list(payload) == sorted(payload)

    def test_csv_has_row_per_case(self):
        report = run_fixture_suite(["2d-free"], CFG)
        lines = report.to_csv().strip().splitlines()
        assert len(lines) == 1 + len(TABLE_ROWS["2d-free"])

    def test_text_marks_pass(self):
        report = run_fixture_suite(["2d-transitive"], CFG)
        text = report.to_text()
        assert "[PASS]" in text and "FAIL" not in text

    def test_unknown_table_rejected(self):
        with pytest.raises(KeyError):
            run_fixture_suite(["9d"], CFG)

    def test_param_override(self):
        report = run_fixture_suite(["3d-transitive"], CFG,
                                   {"g3_4": {"h": Fraction(1, 3)}})
        g34_rows = [r for r in report.rows if r.algebra == "g3_4"]
        assert len(g34_rows) == 1
        assert g34_rows[0].params == {"h": "1/3"}
        assert g34_rows[0].passed


class TestSO3WorkedExample:
    def test_printed_frames_match_construction(self):
        entry = liealg.catalog_lookup("so3", {})
        sp = fx.so3_z_space()
        xi, eta = entry.fields(sp)
        for built, printed in zip(xi, fx.SO3_XI):
            for c, comp in built.components:
                assert ex.simplify_basic(comp) == \
                    ex.simplify_basic(sp.parse(printed[c])), (c, printed)
        for built, printed in zip(eta, fx.SO3_ETA):
            for c, comp in built.components:
                assert ex.simplify_basic(comp) == \
                    ex.simplify_basic(sp.parse(printed[c])), (c, printed)

    def test_recombination_identities(self):
        sp = fx.so3_split_space()
        v = {k: sp.parse(s) for k, s in fx.SO3_V.items()}
        tv = {k: sp.parse(s) for k, s in fx.SO3_V_TILDE.items()}

        class Ctx:
            def resolve(self, name):
                if name in v:
                    return ex.Symbol(name, "base")
                raise KeyError(name)

        cfg = nm.SamplerConfig(tol=1e-9)
        for name, formula in fx.SO3_RECOMBINATION:
            f = ex.parse(formula, Ctx())
            combined = ex.substitute(
                f, {ex.Symbol(k, "base"): e for k, e in v.items()})
            d = ex.add(combined, ex.mul(ex.Const(-1), tv[name]))
            denoms = ex.denominator_symbols(d) | {
                s for s in d.free_symbols() if s.kind == "jet"}
            assert nm.is_zero(d, cfg, {}, extra_denoms=denoms), name

    def test_raw_and_tilde_sets_equivalent(self):
        sp = fx.so3_split_space()
        v2 = [sp.parse(fx.SO3_V[k]) for k in ("v_12", "v_13", "v_23")]
        tv2 = [sp.parse(fx.SO3_V_TILDE[k]) for k in ("tv_12", "tv_13", "tv_23")]
        first = [sp.parse(fx.SO3_V[k]) for k in ("v_1", "v_2")]
        assert nm.equivalence_check(first + v2, first + tv2, CFG)
