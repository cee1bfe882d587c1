import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tautline import ValidationError, generate
from tautline import analysis as an

from conftest import step_signals


@pytest.fixture(scope="module")
def constant():
    return generate("constant", c=0.3)


@pytest.fixture(scope="module")
def staircase():
    return generate("staircase_nonbv", N=6)


class TestEquivalence:
    def test_constant(self, constant):
        assert an.verify_equivalence(constant, 0.1)

    def test_step_reports_both_oracles(self, step):
        v = an.verify_equivalence(step, 0.1)
        assert v and {"dual_deviation", "bruteforce_deviation"} <= set(v.details)

    def test_fig1(self, fig1):
        assert an.verify_equivalence(fig1, 0.03)


class TestSweeps:
    def test_constant_vacuous(self, constant):
        alphas = [0.01, 0.1, 1.0]
        for check in (an.verify_jump_nesting, an.verify_amplitude_monotonicity, an.verify_contact_nesting):
            assert check(constant, alphas)

    def test_step_jump_dies_at_alpha_max(self, step):
        alphas = [0.05, 0.1, 0.2, 0.3]
        v = an.verify_jump_nesting(step, alphas)
        assert v and v.details["jump_counts"] == [1, 1, 1, 0]
        assert an.verify_amplitude_monotonicity(step, alphas)

    def test_step_amplitude_closed_form(self, step):
        for a in (0.05, 0.1, 0.2):
            assert an.solved(step, a).jumps.amplitudes[0] == pytest.approx(1 - 4 * a, abs=1e-12)

    def test_staircase_nesting(self, staircase):
        alphas = np.geomspace(1e-4, 0.5, 20).tolist()
        assert an.verify_jump_nesting(staircase, alphas)
        for a in (alphas[0], alphas[9], alphas[15]):
            assert an.verify_equivalence(staircase, a)

    def test_fig1_amplitudes(self, fig1):
        assert an.verify_amplitude_monotonicity(fig1, np.linspace(0.005, 0.1, 10).tolist())

    def test_fig1_contact_nesting(self, fig1):
        v = an.verify_contact_nesting(fig1, [0.03, 0.06])
        assert v
        assert all(p["plus_nested"] and p["minus_nested"] for p in v.details["per_sign"])

    def test_contact_nesting_above_alpha_max(self, step):
        assert an.verify_contact_nesting(step, [0.1, 0.3, 0.5])

    @pytest.mark.parametrize("alphas", [[], [0.2, 0.1], [0.1, 0.1], [-1.0, 0.1]])
    def test_bad_alphas(self, step, alphas):
        with pytest.raises(ValidationError):
            an.verify_jump_nesting(step, alphas)

    def test_tight_threshold_excludes_near_threshold_jumps(self, fig1):
        v = an.verify_jump_nesting(fig1, [0.01, 0.02], tau=0.0)
        assert v and v.tolerances["jump_threshold"] == 0.0


class TestSingleAlpha:
    def test_jump_inclusion_above_alpha_max(self, step):
        v = an.verify_jump_inclusion(step, 0.6)
        assert v and v.details["jumps"] == 0
        assert np.allclose(an.solved(step, 0.6).u.values, 0.5, atol=1e-12)

    def test_jump_inclusion_fig1(self, fig1):
        v = an.verify_jump_inclusion(fig1, 0.03)
        assert v and v.details["contact_cells"] > 0

    def test_optimality_step(self, step):
        v = an.verify_optimality_conditions(step, 0.1)
        assert v and v.details["transitions"] == ["UL"]

    def test_optimality_fig1(self, fig1):
        v = an.verify_optimality_conditions(fig1, 0.03)
        assert v and not v.warnings
        assert sorted(v.details["transitions"]) == sorted(["UL", "UR", "DL", "DR", "UL", "UR"])

    def test_geometry_constant(self, constant):
        assert an.verify_geometry(constant, 0.1)

    def test_geometry_fig1(self, fig1):
        v = an.verify_geometry(fig1, 0.03)
        assert v
        assert v.details["spacing_bound"] == pytest.approx(0.06 / 1.2791, rel=1e-3)
        assert v.details["min_spacing"] > 0.15

    def test_stability(self, constant, step, fig1):
        assert an.verify_stability(constant, 0.1)
        v = an.verify_stability(step, 0.1)
        assert v and v.details["errors"][-1] < v.details["errors"][0] / 10
        assert an.verify_stability(fig1, 0.03)

    def test_stability_rejects_bad_deltas(self, step):
        with pytest.raises(ValidationError):
            an.verify_stability(step, 0.1, deltas=(0.01, 0.02))
        with pytest.raises(ValidationError):
            an.verify_stability(step, 0.0)

    def test_stability_one_sided_for_small_alpha(self, fig1):
        v = an.verify_stability(fig1, 0.03)
        assert v and v.details["one_sided"] == [0.04]

    def test_limits(self, constant, step):
        assert an.verify_limits(constant)
        v = an.verify_limits(step)
        assert v and v.details["alpha_max"] == 0.25
        assert an.verify_limits(generate("staircase_nonbv", N=5))

    def test_universal_minimality(self, step):
        assert an.verify_universal_minimality(generate("constant", c=0.0), 0.1)
        v = an.verify_universal_minimality(step, 0.1)
        assert v and len(v.details["deviations"]) == 4


class TestSpacingBound:
    """The opposite-wall spacing 2*alpha/Lip(F) can fail even for exact solutions."""

    def test_counterexample_is_exact(self):
        f = generate("random_piecewise", k=8, seed=50)
        v = an.verify_geometry(f, 0.05)
        assert not v.passed
        w = v.witness
        assert w["distance"] < w["bound"]
        # the solution is confirmed optimal by two independent oracles
        assert an.verify_equivalence(f, 0.05)
        assert v.details["half_bound_holds"]

    @given(step_signals(max_cells=30), st.floats(1e-3, 0.5))
    def test_half_bound_always_holds(self, f, alpha):
        assert an.verify_geometry(f, alpha).details["half_bound_holds"]


class TestReports:
    def test_verdict_json_schema(self, step):
        doc = json.loads(json.dumps(an.verify_geometry(step, 0.1).to_dict()))
        assert {"property", "pass", "witness", "tolerances"} <= set(doc)

    def test_failure_witness_is_self_contained(self):
        w = an.verify_geometry(generate("random_piecewise", k=8, seed=50), 0.05).witness
        assert abs(w["x_minus"] - w["x_plus"]) == pytest.approx(w["distance"])
        assert not w["distance"] > w["bound"] - an.SPACING_SLACK

    def test_run_suite_deterministic(self, fig1):
        a = json.dumps(an.run_suite(fig1, signal_id="fig1").to_dict())
        an._solved.cache_clear()
        b = json.dumps(an.run_suite(fig1, signal_id="fig1").to_dict())
        assert a == b

    def test_run_suite_with_oracle(self, step):
        rep = an.run_suite(step, [0.05, 0.1, 0.3], "step", oracle_tol=1e-10)
        assert rep.passed
        assert sum(v.property == "equivalence" for v in rep.verdicts) == 3

    def test_default_alphas(self, step, constant):
        al = an.default_alphas(step)
        assert len(al) == 8 and al[0] == pytest.approx(1e-3) and al[-1] == pytest.approx(0.275)
        assert an.default_alphas(constant)[-1] == pytest.approx(1.0)

    def test_default_corpus(self):
        names = [n for n, _ in an.default_corpus()]
        assert len(names) == 55 and names[:5] == [
            "constant", "step", "staircase_nonbv_N6", "fig1_sine_n1000", "sin_inv_x_n1000"]
        assert len(an.default_corpus(extras=False)) == 54

    def test_verify_corpus_parallel_matches_serial(self):
        corpus = an.default_corpus(random_count=4)
        serial = [r.to_dict() for r in an.verify_corpus(corpus)]
        parallel = [r.to_dict() for r in an.verify_corpus(corpus, jobs=2)]
        assert json.dumps(serial) == json.dumps(parallel)
