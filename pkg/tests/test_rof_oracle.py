import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tautline import (
    ConvergenceError,
    GridError,
    InvalidIntegrandError,
    PiecewiseConstantSignal,
    RofProblem,
    SizeError,
    Tube,
    ValidationError,
    denoise,
    energy,
    generate,
    minimize_convex_integrand,
    solve,
    solve_bruteforce,
    solve_dual,
)
from tautline.analysis import sup_distance
from tautline.rof_oracle import ARC_LENGTH, COSH, QUADRATIC, QUARTIC, STOCK_INTEGRANDS, ConvexIntegrand

from conftest import step_signals


class TestEnergy:
    def test_u_equals_f(self, step):
        assert energy(RofProblem(step, 0.3), step) == pytest.approx(0.3)

    def test_mean(self, step):
        assert energy(RofProblem(step, 0.3), generate("constant", c=0.5)) == pytest.approx(1 / 8)

    def test_step_minimizer(self, step):
        u = PiecewiseConstantSignal([0.0, 0.5, 1.0], [0.2, 0.8])
        p = RofProblem(step, 0.1)
        assert energy(p, u) == pytest.approx(0.08)
        assert energy(p, u) < energy(p, step) and energy(p, u) < energy(p, generate("constant", c=0.5))

    def test_grid_error(self, step):
        u = PiecewiseConstantSignal.__new__(PiecewiseConstantSignal)
        object.__setattr__(u, "breakpoints", np.array([0.0, 0.5, 2.0]))
        object.__setattr__(u, "values", np.array([0.0, 1.0]))
        with pytest.raises(GridError):
            energy(RofProblem(step, 0.1), u)

    def test_rejects_bad_alpha(self, step):
        with pytest.raises(ValidationError):
            RofProblem(step, 0.0)


class TestDual:
    def test_constant(self):
        res = solve_dual(RofProblem(generate("constant", c=0.4), 0.1))
        assert res.converged
        assert np.allclose(res.u.values, 0.4, atol=1e-10)

    def test_step(self, step):
        res = solve_dual(RofProblem(step, 0.1), tol=1e-10)
        assert np.allclose(res.u.values, [0.2, 0.8], atol=1e-8)

    def test_matches_bruteforce(self):
        p = RofProblem(generate("random_piecewise", k=5, seed=7), 0.05)
        assert sup_distance(solve_dual(p).u, solve_bruteforce(p)) <= 1e-7

    def test_nonconvergence(self):
        p = RofProblem(generate("random_piecewise", k=200, seed=1), 0.01)
        with pytest.raises(ConvergenceError) as info:
            solve_dual(p, tol=1e-14, max_iter=3, polish_every=0)
        assert info.value.iterations == 3 and info.value.residual > 0
        res = solve_dual(p, tol=1e-14, max_iter=3, polish_every=0, raise_on_failure=False)
        assert not res.converged and res.reason == "max_iter"

    def test_bad_tol(self, step):
        with pytest.raises(ValidationError):
            solve_dual(RofProblem(step, 0.1), tol=0.0)

    @given(step_signals(max_cells=60), st.floats(1e-3, 0.5))
    def test_objective_history_monotone(self, f, alpha):
        hist = solve_dual(RofProblem(f, alpha)).objective_history
        assert np.all(np.diff(hist) <= 1e-12)


class TestBruteforce:
    def test_single_cell(self):
        f = generate("constant", c=1.5)
        assert solve_bruteforce(RofProblem(f, 0.2)) == f

    def test_step(self, step):
        assert np.allclose(solve_bruteforce(RofProblem(step, 0.1)).values, [0.2, 0.8], atol=1e-15)
        assert np.allclose(solve_bruteforce(RofProblem(step, 0.3)).values, 0.5, atol=1e-15)

    def test_size_cap(self):
        with pytest.raises(SizeError):
            solve_bruteforce(RofProblem(generate("random_piecewise", k=13, seed=0), 0.1))

    @given(step_signals(max_cells=9), st.floats(1e-3, 0.5))
    def test_agrees_with_dual(self, f, alpha):
        p = RofProblem(f, alpha)
        assert sup_distance(solve_bruteforce(p), solve_dual(p).u) <= 1e-7


class TestIntegrands:
    def test_rejects_non_convex(self):
        with pytest.raises(InvalidIntegrandError):
            ConvexIntegrand(np.sin, np.cos, "sin")
        with pytest.raises(InvalidIntegrandError):
            ConvexIntegrand(np.abs, np.sign, "abs")

    def test_stock_are_valid(self):
        assert [c.label for c in STOCK_INTEGRANDS] == ["t^2/2", "sqrt(1+t^2)", "t^4/4", "cosh(t)"]

    def test_zero_signal(self):
        tube = Tube.around(generate("constant", c=0.0), 0.1)
        sol = minimize_convex_integrand(tube, QUADRATIC)
        assert np.all(sol.values == 0.0)

    def test_arc_length_on_step(self, step):
        tube = Tube.around(step, 0.1)
        ref = solve(tube).on_grid()
        assert np.max(np.abs(minimize_convex_integrand(tube, ARC_LENGTH).values - ref)) <= 1e-6

    @pytest.mark.parametrize("c", [QUARTIC, COSH], ids=lambda c: c.label)
    def test_fig1(self, c):
        tube = Tube.around(generate("fig1_sine", n=200), 0.03)
        ref = solve(tube).on_grid()
        assert np.max(np.abs(minimize_convex_integrand(tube, c, tol=1e-10).values - ref)) <= 1e-5

    def test_nonconvergence(self):
        tube = Tube.around(generate("fig1_sine", n=200), 0.03)
        with pytest.raises(ConvergenceError):
            minimize_convex_integrand(tube, QUADRATIC, max_sweeps=2)

    def test_bad_relaxation(self, step):
        with pytest.raises(ValidationError):
            minimize_convex_integrand(Tube.around(step, 0.1), QUADRATIC, relaxation=2.0)


@given(step_signals(max_cells=30), st.floats(1e-3, 0.5), st.integers(0, 2**32 - 1))
def test_energy_optimality(f, alpha, seed):
    p = RofProblem(f, alpha)
    u, _, _ = denoise(f, alpha)
    e = energy(p, u)
    mean = generate("constant", c=f.mean())
    for v in (f, mean, solve_dual(p).u):
        assert e <= energy(p, v) + 1e-10
    rng = np.random.default_rng(seed)
    grid = np.union1d(u.breakpoints, f.breakpoints)
    base = u(0.5 * (grid[:-1] + grid[1:]))
    for _ in range(100):
        v = PiecewiseConstantSignal(grid, base + rng.uniform(-1e-3, 1e-3, size=base.size))
        assert e <= energy(p, v) + 1e-10
