"""Independent reference solvers used to cross-check the taut-string path.

Nothing here imports the taut-string sweep: the dual solver works on the box
constrained knot problem, the brute-force solver enumerates sign patterns of
the ROF stationarity system, and the integrand minimizer runs coordinate
descent for an arbitrary strictly convex slope cost.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConvergenceError, GridError, InvalidIntegrandError, SizeError, ValidationError
from .signal import PiecewiseConstantSignal, cumulative
from .taut import TautSolution, Tube

log = logging.getLogger(__name__)

BRUTEFORCE_MAX_CELLS = 12


@dataclass(frozen=True)
class RofProblem:
    signal: PiecewiseConstantSignal
    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not (math.isfinite(a) and a > 0.0):
            raise ValidationError(f"alpha must be positive and finite, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    @property
    def widths(self) -> np.ndarray:
        return self.signal.widths


def energy(problem: RofProblem, u: PiecewiseConstantSignal) -> float:
    """ROF objective ``0.5 * ||u - f||^2 + alpha * TV(u)`` on the common grid.

    ``u`` must be defined on a grid that refines the problem grid, or the other
    way round; a canonical signal may drop breakpoints that the other keeps, so
    both are evaluated on the union of their grids.
    """
    f = problem.signal
    grid = np.union1d(f.breakpoints, u.breakpoints)
    if grid[0] != 0.0 or grid[-1] != 1.0:
        raise GridError("grids must both span [0, 1]")
    mids = 0.5 * (grid[:-1] + grid[1:])
    w = np.diff(grid)
    r = u(mids) - f(mids)
    fidelity = 0.5 * math.fsum(w * r * r)
    tv = math.fsum(np.abs(np.diff(u.values)))
    return fidelity + problem.alpha * tv


# --------------------------------------------------------------------------- dual projected gradient


@dataclass
class DualResult:
    u: PiecewiseConstantSignal
    knot_values: np.ndarray
    iterations: int
    converged: bool
    reason: str
    objective_history: list = field(default_factory=list)


def _knot_objective(V, dx):
    d = np.diff(V)
    return 0.5 * math.fsum(d * d / dx)


def _knot_gradient(V, dx):
    s = np.diff(V) / dx
    g = np.zeros_like(V)
    g[1:-1] = s[:-1] - s[1:]
    return g


def _active_set_polish(V, lo, hi, dx, x, rounds=50):
    """Primal-dual active-set refinement of the box-constrained knot problem.

    With the active knots fixed at their bounds, the reduced problem on each run
    of free knots is solved by linear interpolation. The active set is then
    updated from the KKT multipliers until it stops changing.
    """
    n = V.size
    at_lo = np.zeros(n, bool)
    at_hi = np.zeros(n, bool)
    at_lo[1:-1] = V[1:-1] <= lo[1:-1]
    at_hi[1:-1] = V[1:-1] >= hi[1:-1]
    W = V
    for _ in range(rounds):
        fixed = at_lo | at_hi
        fixed[0] = fixed[-1] = True
        idx = np.flatnonzero(fixed)
        vals = np.where(at_lo, lo, np.where(at_hi, hi, V))[idx]
        vals[0], vals[-1] = V[0], V[-1]
        W = np.interp(x, x[idx], vals)
        g = _knot_gradient(W, dx)
        new_lo = np.zeros(n, bool)
        new_hi = np.zeros(n, bool)
        inner = slice(1, n - 1)
        # keep a bound active while its multiplier has the right sign, add violators
        new_lo[inner] = (at_lo[inner] & (g[inner] >= 0.0)) | (~fixed[inner] & (W[inner] < lo[inner]))
        new_hi[inner] = (at_hi[inner] & (g[inner] <= 0.0)) | (~fixed[inner] & (W[inner] > hi[inner]))
        if np.array_equal(new_lo, at_lo) and np.array_equal(new_hi, at_hi):
            break
        at_lo, at_hi = new_lo, new_hi
    return np.clip(W, lo, hi)


def solve_dual(
    problem: RofProblem,
    tol: float = 1e-10,
    max_iter: int = 200_000,
    polish_every: int = 25,
    raise_on_failure: bool = True,
) -> DualResult:
    """Projected gradient on the knot heights of the primitive.

    Minimizes ``sum_i dx_i * c((V_i - V_{i-1}) / dx_i)`` with ``c(t) = t**2 / 2``
    over ``F_i - alpha <= V_i <= F_i + alpha`` with pinned ends; the minimizer's
    cell slopes solve the ROF problem. Every ``polish_every`` steps an
    active-set refinement is proposed and accepted only if it lowers the
    objective, so the objective sequence stays monotone. Stops when a step
    moves no knot by more than ``tol``.
    """
    if tol <= 0:
        raise ValidationError("tol must be positive")
    path = cumulative(problem.signal)
    x, F = path.breakpoints, path.values
    dx = np.diff(x)
    alpha = problem.alpha
    lo = F - alpha
    hi = F + alpha
    lo[0] = hi[0] = 0.0
    lo[-1] = hi[-1] = F[-1]
    # Gershgorin bound on the Hessian of the knot objective
    step = 1.0 / (4.0 / dx.min())
    V = np.clip(x * F[-1], lo, hi)
    obj = _knot_objective(V, dx)
    history = [obj]
    change = math.inf
    it = 0
    reason = "max_iter"
    while it < max_iter:
        it += 1
        W = np.clip(V - step * _knot_gradient(V, dx), lo, hi)
        if polish_every and it % polish_every == 0:
            P = _active_set_polish(W, lo, hi, dx, x)
            if _knot_objective(P, dx) <= _knot_objective(W, dx):
                W = P
        change = float(np.max(np.abs(W - V)))
        new_obj = _knot_objective(W, dx)
        if new_obj > obj:
            # only roundoff can get here; keep the better iterate
            new_obj = obj
            W = V
        V, obj = W, new_obj
        history.append(obj)
        if change < tol:
            reason = "tol"
            break
    converged = reason == "tol"
    if not converged and raise_on_failure:
        raise ConvergenceError("dual projected gradient did not converge", change, it)
    u = PiecewiseConstantSignal(x, np.diff(V) / dx)
    log.debug("solve_dual: %s after %d iterations (last change %.3e)", reason, it, change)
    return DualResult(u, V, it, converged, reason, history)


# --------------------------------------------------------------------------- brute force


@functools.lru_cache(maxsize=None)
def _all_patterns(m: int) -> np.ndarray:
    # lexicographic order over (-1, 0, +1), so argmin breaks ties toward the smallest pattern
    if m == 0:
        out = np.zeros((1, 0), dtype=np.int8)
    else:
        out = np.array(list(itertools.product((-1, 0, 1), repeat=m)), dtype=np.int8)
    out.setflags(write=False)
    return out


def solve_bruteforce(problem: RofProblem) -> PiecewiseConstantSignal:
    """Exact ROF minimizer by enumerating sign patterns of consecutive differences.

    For a pattern ``s`` the cells joined by ``s = 0`` form groups; each group
    value is its weighted mean of ``f`` shifted by ``alpha * (s_right - s_left) /
    mass``. Candidates whose differences disagree with their pattern are
    discarded and the cheapest survivor wins.
    """
    f = problem.signal
    n = f.n
    if n > BRUTEFORCE_MAX_CELLS:
        raise SizeError(f"brute force handles at most {BRUTEFORCE_MAX_CELLS} cells, got {n}")
    if n == 1:
        return f
    w = f.widths
    v = f.values
    alpha = problem.alpha
    S = _all_patterns(n - 1)
    P = S.shape[0]
    group = np.zeros((P, n), dtype=np.int64)
    group[:, 1:] = np.cumsum(S != 0, axis=1)
    flat = group + (np.arange(P) * n)[:, None]
    mass = np.bincount(flat.ravel(), weights=np.tile(w, P), minlength=P * n)
    moment = np.bincount(flat.ravel(), weights=np.tile(w * v, P), minlength=P * n)
    # each nonzero boundary k pushes its left group by +alpha*s and its right group by -alpha*s
    shift = np.bincount(flat[:, :-1].ravel(), weights=(alpha * S).ravel(), minlength=P * n)
    shift -= np.bincount(flat[:, 1:].ravel(), weights=(alpha * S).ravel(), minlength=P * n)
    with np.errstate(invalid="ignore", divide="ignore"):
        level = (moment + shift) / mass
    U = level[flat]
    D = np.diff(U, axis=1)
    consistent = np.all(np.where(S > 0, D > 0, np.where(S < 0, D < 0, True)), axis=1)
    E = 0.5 * np.sum(w * (U - v) ** 2, axis=1) + alpha * np.sum(np.abs(D), axis=1)
    E = np.where(consistent, E, np.inf)
    best = int(np.argmin(E))
    if not np.isfinite(E[best]):
        raise ConvergenceError("no sign pattern produced a consistent candidate", math.inf, P)
    return PiecewiseConstantSignal(f.breakpoints, U[best])


# --------------------------------------------------------------------------- general integrands


@dataclass(frozen=True)
class ConvexIntegrand:
    value: Callable
    derivative: Callable
    label: str

    def __post_init__(self):
        t = np.linspace(-10.0, 10.0, 401)
        d = np.asarray(self.derivative(t), dtype=np.float64)
        if not np.all(np.isfinite(d)) or np.any(np.diff(d) <= 0.0):
            raise InvalidIntegrandError(f"derivative of {self.label!r} is not strictly increasing")


QUADRATIC = ConvexIntegrand(lambda t: 0.5 * np.square(t), lambda t: np.asarray(t, dtype=np.float64), "t^2/2")
ARC_LENGTH = ConvexIntegrand(lambda t: np.sqrt(1.0 + np.square(t)), lambda t: t / np.sqrt(1.0 + np.square(t)), "sqrt(1+t^2)")
QUARTIC = ConvexIntegrand(lambda t: 0.25 * np.power(t, 4), lambda t: np.power(t, 3), "t^4/4")
COSH = ConvexIntegrand(np.cosh, np.sinh, "cosh(t)")
STOCK_INTEGRANDS = (QUADRATIC, ARC_LENGTH, QUARTIC, COSH)


def _coordinate_minimizers(dc, V_left, V_right, lo, hi, dx_left, dx_right, bisections):
    """Vectorized exact minimization of each knot's two-cell cost over its box."""

    def grad(V):
        return dc((V - V_left) / dx_left) - dc((V_right - V) / dx_right)

    with np.errstate(over="ignore", invalid="ignore"):
        g_lo = grad(lo)
        g_hi = grad(hi)
        a = lo.copy()
        b = hi.copy()
        for _ in range(bisections):
            mid = 0.5 * (a + b)
            gm = grad(mid)
            right = gm > 0.0
            b = np.where(right, mid, b)
            a = np.where(right, a, mid)
            if np.all(b - a <= 4.0 * np.spacing(np.maximum(np.abs(a), np.abs(b)))):
                break
    out = 0.5 * (a + b)
    out = np.where(g_lo >= 0.0, lo, out)
    out = np.where(g_hi <= 0.0, hi, out)
    return out


def minimize_convex_integrand(
    tube: Tube,
    c: ConvexIntegrand,
    tol: float = 1e-12,
    max_sweeps: int = 200_000,
    relaxation: float | None = None,
    bisections: int = 200,
) -> TautSolution:
    """Minimize ``sum_i dx_i * c(slope_i)`` over knot heights inside the tube.

    Cyclic coordinate descent in red/black order: every knot of one parity is
    moved to the exact minimizer of its two adjacent cell costs (bisection on
    the strictly increasing derivative), then the other parity. Knots of one
    parity do not interact, so each half-sweep is a batch of independent scalar
    problems. ``relaxation`` > 1 over-relaxes each move (then clips to the box);
    the default scales with the grid size.
    """
    if tol <= 0:
        raise ValidationError("tol must be positive")
    path = tube.path
    x, F = path.breakpoints, path.values
    dx = np.diff(x)
    n = dx.size
    lo, hi = tube.walls()
    if relaxation is None:
        # optimal SOR factor for a free run a quarter of the grid long
        relaxation = 2.0 / (1.0 + math.sin(math.pi / max(n / 4.0, 2.0)))
    if not 0.0 < relaxation < 2.0:
        raise ValidationError("relaxation must lie in (0, 2)")
    V = np.clip(x * F[-1], lo, hi)
    if n == 1:
        return TautSolution(tube.radius, x.copy(), V, x)
    parities = [np.arange(1, n, 2), np.arange(2, n, 2)]
    move = math.inf
    sweep = 0
    while sweep < max_sweeps:
        sweep += 1
        move = 0.0
        for idx in parities:
            if idx.size == 0:
                continue
            target = _coordinate_minimizers(
                c.derivative, V[idx - 1], V[idx + 1], lo[idx], hi[idx], dx[idx - 1], dx[idx], bisections
            )
            new = np.clip(V[idx] + relaxation * (target - V[idx]), lo[idx], hi[idx])
            move = max(move, float(np.max(np.abs(new - V[idx]))))
            V[idx] = new
        if not np.all(np.isfinite(V)):
            raise ConvergenceError(f"coordinate descent diverged for {c.label}", math.inf, sweep)
        if move <= tol:
            break
    else:
        raise ConvergenceError(f"coordinate descent for {c.label} did not converge", move, sweep)
    log.debug("minimize_convex_integrand(%s): %d sweeps", c.label, sweep)
    V[0] = 0.0
    V[-1] = F[-1]
    return TautSolution(tube.radius, x.copy(), V, x)
