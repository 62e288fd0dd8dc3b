from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from envyline import verify as vf
from envyline.analysis import GuaranteePair
from envyline.core import LocationProfile, PlacementDistribution, approximation_ratio
from envyline.mechanisms import Kind, MechanismSpec, run

CFG = vf.SearchConfig()
FAST = vf.SearchConfig(coarse_step=0.02, refine_step=1e-4)
unit = st.floats(0.0, 1.0, allow_nan=False)

SPECS = [
    MechanismSpec(Kind.MIDPOINT),
    MechanismSpec(Kind.CONSTANT_HALF),
    MechanismSpec(Kind.ALPHA_BIM, alpha=1.0),
    MechanismSpec(Kind.ALPHA_BIM, alpha=1.5),
    MechanismSpec.lrm_optimal(),
    MechanismSpec(Kind.BAM),
    MechanismSpec(Kind.ALPHA_BI_RANDOMIZED, alpha=1.3),
    MechanismSpec(Kind.BIAS_AWARE_LRM),
]
BLIND = [s for s in SPECS if s.kind is not Kind.MIDPOINT]


def scalar(spec, x1, x2, y):
    prof = LocationProfile([x1, x2])
    return approximation_ratio(run(spec, prof, y if spec.uses_prediction else None), prof)


class TestConfig:
    def test_defaults(self):
        assert (CFG.coarse_step, CFG.refine_step, CFG.refine_radius, CFG.tolerance) == (1e-2, 1e-5, 2e-2, 5e-3)

    @pytest.mark.parametrize(
        "kw", [dict(coarse_step=0.2), dict(refine_step=0.0), dict(refine_step=0.02), dict(tolerance=-1.0)]
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            vf.SearchConfig(**kw)

    def test_zero_tolerance_allowed(self):
        assert vf.SearchConfig(tolerance=0.0).tolerance == 0.0


class TestBatchEvaluator:
    @settings(max_examples=400)
    @given(st.sampled_from(SPECS), unit, unit, unit)
    def test_matches_scalar_path(self, spec, a, b, y):
        x1, x2 = min(a, b), max(a, b)
        got = float(vf.batch_ratio(spec, np.array([x1]), np.array([x2]), np.array([y]))[0])
        want = scalar(spec, x1, x2, y)
        if math.isinf(want) or want > 1e6:
            assert math.isinf(got) or got > 1e6
        else:
            assert got == pytest.approx(want, rel=1e-9)

    @settings(max_examples=200)
    @given(st.sampled_from(SPECS), unit, unit, unit)
    def test_matches_oracle(self, spec, a, b, y):
        x1, x2 = min(a, b), max(a, b)
        atoms = oracle.mechanism_atoms(spec.kind.value, y, spec.alpha, spec.p, (x1, x2))
        want = oracle.ratio(atoms, (x1, x2))
        got = float(vf.batch_ratio(spec, np.array([x1]), np.array([x2]), np.array([y]))[0])
        if math.isinf(want) or want > 1e6:
            assert math.isinf(got) or got > 1e6
        else:
            assert got == pytest.approx(want, rel=1e-9)


class TestSearch:
    @pytest.mark.parametrize("spec", SPECS, ids=str)
    @pytest.mark.parametrize("mode", [vf.PredictionMode.accurate(), vf.PredictionMode.adversarial()], ids=["acc", "adv"])
    def test_invariants(self, spec, mode):
        res = vf.worst_case_ratio(spec, mode, FAST)
        assert res.value >= res.coarse_value - 1e-12
        for w in res.witnesses:
            assert scalar(spec, *w.profile.positions, w.prediction) == w.value
            assert w.value >= res.value - FAST.tolerance
            if spec.uses_prediction and mode.kind == "accurate":
                assert w.prediction == pytest.approx(sum(w.profile.positions) / 2, abs=1e-15)
        assert res.witness.value == res.value

    @pytest.mark.parametrize(
        "kind,mode,alpha",
        [("half", None, None), ("bim", "accurate", 1.5), ("bim", "adversarial", 1.5), ("bam", "adversarial", None), ("lrm", None, 0.2)],
    )
    def test_dominates_flat_grid_oracle(self, kind, mode, alpha):
        p = 0.3 if kind == "lrm" else None
        spec = MechanismSpec(Kind(kind), alpha=alpha, p=p)
        grid = oracle.grid_worst_case(kind, 0.05, mode or "none", alpha=alpha, p=p)
        found = vf.worst_case_ratio(spec, vf.PredictionMode(mode or "adversarial"), FAST).value
        assert found >= grid - 1e-12

    def test_examples(self):
        half = vf.worst_case_ratio(MechanismSpec(Kind.CONSTANT_HALF), vf.PredictionMode.accurate(), CFG)
        assert half.value == pytest.approx(2.0, abs=5e-3)
        assert half.witness.profile.positions == pytest.approx((0.0, 0.5), abs=2e-2)
        bim = MechanismSpec(Kind.ALPHA_BIM, alpha=1.5)
        cons = vf.worst_case_ratio(bim, vf.PredictionMode.accurate(), CFG)
        assert cons.value == pytest.approx(1.5, abs=5e-3)
        assert cons.witness.profile.positions == pytest.approx((0.0, 1 / 3), abs=2e-2)
        rob = vf.worst_case_ratio(bim, vf.PredictionMode.adversarial(), CFG)
        assert rob.value == pytest.approx(3.0, abs=5e-3)

    def test_unbounded_is_reported(self):
        res = vf.worst_case_ratio(MechanismSpec(Kind.ALPHA_BIM, alpha=1.0), vf.PredictionMode.adversarial(), CFG)
        assert math.isinf(res.value)
        w = res.witness
        assert math.isinf(scalar(MechanismSpec(Kind.ALPHA_BIM, alpha=1.0), *w.profile.positions, w.prediction))

    def test_fixed_prediction(self):
        spec = MechanismSpec(Kind.BAM)
        res = vf.worst_case_ratio(spec, vf.PredictionMode.fixed(0.2), FAST)
        assert all(w.prediction == 0.2 for w in res.witnesses)
        assert res.value == pytest.approx(2.3, abs=5e-3)

    def test_error_bounded_respects_eta(self):
        spec = MechanismSpec(Kind.ALPHA_BIM, alpha=1.5)
        res = vf.worst_case_ratio(spec, vf.PredictionMode.error_bounded(0.12), FAST)
        for w in res.witnesses:
            assert abs(w.prediction - sum(w.profile.positions) / 2) <= 0.12 + 1e-12

    def test_error_curve_examples(self):
        got = dict(vf.empirical_error_curve(1.5, [0.0, 0.2], FAST))
        assert got[0.0] == pytest.approx(1.5, abs=5e-3)
        assert got[0.2] == pytest.approx(2.2, abs=5e-3)
        assert vf.empirical_error_curve(1.8, [1.0], FAST)[0][1] == pytest.approx(2.25, abs=5e-3)

    def test_empirical_guarantees(self):
        g, _ = vf.empirical_guarantees(MechanismSpec(Kind.MIDPOINT), CFG)
        assert tuple(g) == (1.0, 1.0)
        g, _ = vf.empirical_guarantees(MechanismSpec(Kind.BAM), CFG)
        assert tuple(g) == pytest.approx((1.75, 2.5), abs=5e-3)

    def test_n_agent_spot_check(self):
        for spec in (MechanismSpec(Kind.CONSTANT_HALF), MechanismSpec(Kind.ALPHA_BIM, alpha=1.5)):
            many, two = vf.n_agent_spot_check(spec, n=3, step=0.1, cfg=FAST)
            assert many <= two + FAST.tolerance


class TestLrmOptimizer:
    def test_default(self):
        res = vf.optimize_lrm(CFG)
        assert res.alpha == pytest.approx(math.sqrt(5) / 2 - 1, abs=1e-3)
        assert res.p == pytest.approx(0.4, abs=1e-3)
        assert res.ratio == pytest.approx(1 + 2 / math.sqrt(5), abs=1e-4)
        assert res.beats_constant_half
        ratios = [r for *_, r in res.trace]
        assert all(b <= a for a, b in zip(ratios, ratios[1:]))

    def test_high_alpha_warning(self):
        res = vf.optimize_lrm(CFG, alpha_bounds=(0.3, 0.4))
        assert res.min_sampled >= 2.0 - 1e-9 and not res.beats_constant_half

    def test_bounds_checked(self):
        with pytest.raises(ValueError):
            vf.optimize_lrm(CFG, alpha_bounds=(0.0, 0.6))


class TestStrategyproofness:
    @pytest.mark.parametrize("spec", BLIND, ids=str)
    def test_profile_blind_mechanisms_pass(self, spec):
        assert vf.strategyproofness_test(spec, 300, seed=11).passed

    def test_leftmost_rule_is_strategyproof(self):
        assert vf.strategyproofness_test(vf.leftmost_agent_mechanism, 1000, seed=3).passed

    @pytest.mark.parametrize("name", sorted(vf.NEGATIVE_CONTROLS))
    def test_negative_controls_fail(self, name):
        res = vf.strategyproofness_test(vf.NEGATIVE_CONTROLS[name], 1000, seed=3)
        assert not res.passed
        v = res.counterexample
        assert vf._sp_gain(vf.NEGATIVE_CONTROLS[name], v.profile, v.agent, v.misreport, v.prediction) == v.gain > 0

    @pytest.mark.parametrize("name", sorted(vf.NEGATIVE_CONTROLS))
    def test_grid_violation(self, name):
        v = vf.grid_sp_violation(vf.NEGATIVE_CONTROLS[name], LocationProfile([0.3, 0.6]))
        assert v is not None and v.gain > 1e-12
        # exaggerating outward pulls the facility towards the liar
        x = v.profile.positions[v.agent]
        assert (v.misreport < x) == (v.agent == 0)

    def test_grid_finder_clean_on_profile_blind_mechanism(self):
        assert vf.grid_sp_violation(MechanismSpec(Kind.BAM), LocationProfile([0.3, 0.6]), 0.2) is None

    def test_trials_validated(self):
        with pytest.raises(ValueError):
            vf.strategyproofness_test(BLIND[0], 0, 1)


class TestOtherProperties:
    def test_reduction(self):
        res = vf.reduction_property_test(1000, seed=1)
        assert res.passed and res.trials == 1000

    def test_reduction_examples(self):
        d = PlacementDistribution.point(0.7)
        assert approximation_ratio(d, LocationProfile([0, 0.5, 1])) <= approximation_ratio(d, LocationProfile([0, 1]))
        eq = LocationProfile([0.4, 0.4, 0.4])
        assert approximation_ratio(d, eq) == approximation_ratio(d, LocationProfile([0.4, 0.4])) == 1.0

    def test_dominance(self):
        assert vf.dominance_check([0.3, 0.25 + 1e-6, 0.45]).passed
        with pytest.raises(ValueError):
            vf.dominance_check([0.2])

    def test_balrm_frontier_dominance(self):
        assert vf.balrm_dominance_check(np.linspace(0, 0.5, 501)).passed


class TestVerifyAll:
    def test_empty(self):
        assert vf.verify_all(CFG, []) == []

    def test_report_semantics(self):
        tight = vf.VerificationReport(
            MechanismSpec(Kind.CONSTANT_HALF), "h", GuaranteePair(2.001, 2.0), GuaranteePair(2.0, 2.0), (), "tight", 5e-3
        )
        assert tight.passed
        low = vf.VerificationReport(
            MechanismSpec(Kind.CONSTANT_HALF), "h", GuaranteePair(1.5, 2.0), GuaranteePair(2.0, 2.0), (), "upper", 5e-3
        )
        assert low.passed
        bad = vf.VerificationReport(
            MechanismSpec(Kind.CONSTANT_HALF), "h", GuaranteePair(1.5, 2.0), GuaranteePair(2.0, 2.0), (), "tight", 5e-3
        )
        assert not bad.passed
        inf = vf.VerificationReport(
            MechanismSpec(Kind.CONSTANT_HALF), "h", GuaranteePair(1, math.inf), GuaranteePair(1, math.inf), (), "tight", 0.0
        )
        assert inf.passed

    def test_full_run_and_zero_tolerance(self):
        reports = vf.verify_all(CFG)
        assert len(reports) == len(vf.standard_cases())
        assert all(r.passed for r in reports), [r.label for r in reports if not r.passed]
        strict = vf.verify_all(vf.SearchConfig(tolerance=0.0))
        assert not all(r.passed for r in strict)

    def test_deterministic_across_thread_counts(self, monkeypatch):
        cases = vf.standard_cases()[:6]
        monkeypatch.setenv("ENVYLINE_THREADS", "1")
        a = vf.verify_all(FAST, cases)
        monkeypatch.setenv("ENVYLINE_THREADS", "4")
        b = vf.verify_all(FAST, cases)
        assert a == b

    def test_thread_env_validated(self, monkeypatch):
        monkeypatch.setenv("ENVYLINE_THREADS", "0")
        with pytest.raises(ValueError):
            vf.thread_count()
