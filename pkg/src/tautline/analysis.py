"""Executable checks of the structural properties of ROF / taut-string solutions.

Every ``verify_*`` function returns a :class:`Verdict`. A failing verdict
carries a witness holding the numbers of the violated inequality, so the
violation can be re-evaluated by hand from the report alone.
"""

from __future__ import annotations

import functools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import rof_oracle
from .errors import ValidationError
from .signal import (
    JumpReport,
    PiecewiseConstantSignal,
    approximate_limits,
    cumulative,
    generate,
    jump_set_of,
)
from .taut import (
    ContactSets,
    TautSolution,
    Tube,
    alpha_max,
    contact_sets,
    contact_tolerance,
    derivative,
    one_sided_slopes,
    solve,
)

log = logging.getLogger(__name__)

AMPLITUDE_SLACK = 1e-9
OPTIMALITY_SLACK = 1e-9
SLOPE_TOL = 1e-10
SPACING_SLACK = 1e-12
LIPSCHITZ_SLACK = 1e-12
EQUIVALENCE_TOL = 1e-6
BRUTEFORCE_TOL = 1e-7
DUAL_TOL = 1e-10
UNIVERSAL_TOL = 1e-5
LIMIT_TOL = 1e-10
STABILITY_SLACK = 1e-12
STABILITY_DROP = 10.0
MARGIN_FACTOR = 10.0


def jump_threshold(f: PiecewiseConstantSignal) -> float:
    return 1e-8 * max(1.0, f.sup_norm())


@dataclass
class Verdict:
    property: str
    passed: bool
    witness: dict | None = None
    tolerances: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "pass": self.passed,
            "witness": self.witness,
            "tolerances": self.tolerances,
            "details": self.details,
            "warnings": self.warnings,
        }


class Solved(NamedTuple):
    alpha: float
    tube: Tube
    solution: TautSolution
    u: PiecewiseConstantSignal
    contacts: ContactSets
    jumps: JumpReport


@functools.lru_cache(maxsize=2048)
def _solved(f: PiecewiseConstantSignal, alpha: float, eps: float | None, tau: float | None) -> Solved:
    tube = Tube(cumulative(f), alpha)
    sol = solve(tube)
    u = derivative(sol)
    cs = contact_sets(sol, tube, eps)
    return Solved(alpha, tube, sol, u, cs, jump_set_of(u, jump_threshold(f) if tau is None else tau))


def solved(f: PiecewiseConstantSignal, alpha: float, eps: float | None = None, tau: float | None = None) -> Solved:
    """Solve once and memoize; signals are immutable so the cache is safe.

    ``eps`` overrides the contact band and ``tau`` the jump threshold.
    """
    return _solved(f, float(alpha), None if eps is None else float(eps), None if tau is None else float(tau))


def _check_alphas(alphas: Sequence[float]) -> list[float]:
    out = [float(a) for a in alphas]
    if not out or any(not (math.isfinite(a) and a > 0.0) for a in out):
        raise ValidationError("alphas must be positive and finite")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ValidationError("alphas must be strictly increasing")
    return out


def _cell_midpoints(*signals: PiecewiseConstantSignal) -> np.ndarray:
    grid = functools.reduce(np.union1d, [s.breakpoints for s in signals])
    return 0.5 * (grid[:-1] + grid[1:])


def sup_distance(a: PiecewiseConstantSignal, b: PiecewiseConstantSignal) -> float:
    """Sup-norm distance between two step functions (exact on their common grid)."""
    mids = _cell_midpoints(a, b)
    return float(np.max(np.abs(a(mids) - b(mids))))


def plateau_summary(s: Solved) -> list[dict]:
    """Free segments of the string (between contact runs) with their slope."""
    grid = s.tube.grid
    runs = s.contacts.runs()
    edges = [0]
    for a, b, _ in runs:
        edges.extend((a, b))
    edges.append(grid.size - 1)
    out = []
    for left, right in zip(edges[::2], edges[1::2]):
        if right <= left:
            continue
        xl, xr = float(grid[left]), float(grid[right])
        mid = 0.5 * (xl + xr)
        out.append({"left": xl, "right": xr, "value": float(s.u(mid))})
    return out


# --------------------------------------------------------------------------- single-alpha checks


def verify_equivalence(
    f: PiecewiseConstantSignal,
    alpha: float,
    tol: float = EQUIVALENCE_TOL,
    dual_tol: float = DUAL_TOL,
    brute_tol: float = BRUTEFORCE_TOL,
) -> Verdict:
    """Taut-string derivative versus the dual oracle (and brute force when small)."""
    s = solved(f, alpha)
    problem = rof_oracle.RofProblem(f, alpha)
    dual = rof_oracle.solve_dual(problem, tol=dual_tol)
    dev = sup_distance(s.u, dual.u)
    details = {"dual_deviation": dev, "dual_iterations": dual.iterations}
    tolerances = {"dual": tol, "dual_solver_tol": dual_tol}
    witness = None
    if dev > tol:
        witness = {"oracle": "dual", "deviation": dev, "bound": tol}
    if f.n <= rof_oracle.BRUTEFORCE_MAX_CELLS:
        brute = rof_oracle.solve_bruteforce(problem)
        bdev = sup_distance(s.u, brute)
        details["bruteforce_deviation"] = bdev
        tolerances["bruteforce"] = brute_tol
        if bdev > brute_tol and witness is None:
            witness = {"oracle": "bruteforce", "deviation": bdev, "bound": brute_tol}
    return Verdict("equivalence", witness is None, witness, tolerances, details)


def verify_jump_inclusion(f: PiecewiseConstantSignal, alpha: float, *, eps: float | None = None, tau: float | None = None) -> Verdict:
    """Jumps of u lie at jumps of f and on the contact set; u = f inside contact runs."""
    s = solved(f, alpha, eps, tau)
    tau = jump_threshold(f) if tau is None else tau
    scale = max(1.0, f.sup_norm())
    f_jumps = set(jump_set_of(f, 0.0).locations.tolist())
    grid = s.tube.grid
    index = {float(x): i for i, x in enumerate(grid)}
    union = s.contacts.union_mask
    tolerances = {"jump_threshold": tau, "cellwise": 1e-9 * scale, "contact_eps": s.contacts.eps}
    for e in s.jumps:
        if e.location not in f_jumps:
            return Verdict("jump_inclusion", False, {"reason": "jump of u not a jump of f", **e._asdict()}, tolerances)
        if not union[index[e.location]]:
            return Verdict(
                "jump_inclusion", False, {"reason": "jump of u outside the contact set", **e._asdict()}, tolerances
            )
    # inside a contact run the string follows a wall, so u equals f cell by cell
    checked = 0
    widths = np.diff(grid)
    for a, b, sign in s.contacts.runs():
        for i in range(a, b):
            mid = 0.5 * (grid[i] + grid[i + 1])
            uv, fv = float(s.u(mid)), float(f(mid))
            bound = 1e-9 * scale + 2.0 * s.contacts.eps / widths[i]
            checked += 1
            if abs(uv - fv) > bound:
                return Verdict(
                    "jump_inclusion",
                    False,
                    {"reason": "u differs from f inside a contact run", "cell": [float(grid[i]), float(grid[i + 1])],
                     "u": uv, "f": fv, "difference": abs(uv - fv), "bound": bound, "wall": sign},
                    tolerances,
                )
    return Verdict("jump_inclusion", True, None, tolerances, {"jumps": len(s.jumps), "contact_cells": checked})


def _chain_case(sign: int, side: str) -> str:
    return ("D" if sign < 0 else "U") + ("L" if side == "left" else "R")


def verify_optimality_conditions(f: PiecewiseConstantSignal, alpha: float, *, eps: float | None = None, tau: float | None = None) -> Verdict:
    """One-sided slope chains at every point where the string meets or leaves a wall."""
    s = solved(f, alpha, eps, tau)
    grid = s.tube.grid
    f_breaks = set(f.breakpoints.tolist())
    warnings = []
    checked = []
    for a, b, sign in s.contacts.runs():
        for idx, side in ((a, "left"), (b, "right")):
            if side == "right" and b == a:
                # singleton: already checked as the left transition, same chain
                continue
            x0 = float(grid[idx])
            f_minus, f_plus = approximate_limits(f, x0)
            u_minus, u_plus = one_sided_slopes(s.solution, x0)
            if sign < 0:
                chain = [("f+", f_plus), ("U'+", u_plus), ("U'-", u_minus), ("f-", f_minus)]
            else:
                chain = [("f-", f_minus), ("U'-", u_minus), ("U'+", u_plus), ("f+", f_plus)]
            case = _chain_case(sign, side)
            checked.append(case)
            for (ln, lv), (rn, rv) in zip(chain, chain[1:]):
                slack = rv - lv
                if slack < -OPTIMALITY_SLACK:
                    witness = {"case": case, "x0": x0, "relation": f"{ln} <= {rn}", ln: lv, rn: rv, "slack": slack}
                    if x0 not in f_breaks:
                        warnings.append(witness)
                        continue
                    return Verdict("optimality_conditions", False, witness, {"slack": OPTIMALITY_SLACK})
    return Verdict(
        "optimality_conditions", True, None, {"slack": OPTIMALITY_SLACK}, {"transitions": checked}, warnings
    )


def _min_pair_distance(a: np.ndarray, b: np.ndarray):
    if a.size == 0 or b.size == 0:
        return math.inf, None, None
    pos = np.searchsorted(b, a)
    best = (math.inf, None, None)
    for i, p in enumerate(pos):
        for j in (p - 1, p):
            if 0 <= j < b.size:
                d = abs(a[i] - b[j])
                if d < best[0]:
                    best = (float(d), float(a[i]), float(b[j]))
    return best


def verify_geometry(f: PiecewiseConstantSignal, alpha: float, *, eps: float | None = None, tau: float | None = None) -> Verdict:
    """Convexity off the lower contact set, concavity off the upper one, spacing, Lipschitz bound."""
    s = solved(f, alpha, eps, tau)
    sol = s.solution
    lip = s.tube.path.lipschitz()
    tolerances = {"slope": SLOPE_TOL, "spacing": SPACING_SLACK, "lipschitz": LIPSCHITZ_SLACK}
    grid = s.tube.grid
    index = {float(x): i for i, x in enumerate(grid)}
    slopes = sol.slopes
    for k in range(1, sol.knots.size - 1):
        x = float(sol.knots[k])
        i = index[x]
        turn = float(slopes[k] - slopes[k - 1])
        if not s.contacts.minus_mask[i] and turn < -SLOPE_TOL:
            return Verdict("geometry", False, {"reason": "not convex off the lower contact set", "x": x,
                                               "left_slope": float(slopes[k - 1]), "right_slope": float(slopes[k])}, tolerances)
        if not s.contacts.plus_mask[i] and turn > SLOPE_TOL:
            return Verdict("geometry", False, {"reason": "not concave off the upper contact set", "x": x,
                                               "left_slope": float(slopes[k - 1]), "right_slope": float(slopes[k])}, tolerances)
    bound = 2.0 * alpha / lip if lip > 0 else math.inf
    dist, xm, xp = _min_pair_distance(grid[s.contacts.minus_mask], grid[s.contacts.plus_mask])
    # alpha / Lip(F) is what the Lipschitz comparison of U and F alone guarantees
    steepest = float(np.max(np.abs(slopes)))
    paired = xm is not None
    # with no opposite pair the spacing condition is vacuous
    details = {"lipschitz_F": lip, "spacing_bound": bound if paired else None, "min_spacing": dist if paired else None,
               "half_bound_holds": bool(not paired or dist > 0.5 * bound - SPACING_SLACK), "max_slope": steepest,
               "lipschitz_holds": bool(steepest <= lip + LIPSCHITZ_SLACK)}
    if paired and not dist > bound - SPACING_SLACK:
        return Verdict("geometry", False, {"reason": "contact points of opposite walls too close",
                                           "x_minus": xm, "x_plus": xp, "distance": dist, "bound": bound}, tolerances, details)
    if steepest > lip + LIPSCHITZ_SLACK:
        return Verdict("geometry", False, {"reason": "string steeper than F", "max_slope": steepest,
                                           "lipschitz_F": lip}, tolerances, details)
    return Verdict("geometry", True, None, tolerances, details)


def verify_stability(
    f: PiecewiseConstantSignal, alpha: float, deltas: Sequence[float] = (0.04, 0.02, 0.01, 0.005, 0.0025)
) -> Verdict:
    """Uniform distance between strings at nearby radii shrinks as the radii approach."""
    deltas = [float(d) for d in deltas]
    if not deltas or any(d <= 0 for d in deltas) or any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValidationError("deltas must be positive and strictly decreasing")
    if not (math.isfinite(alpha) and alpha > 0):
        raise ValidationError("alpha must be positive and finite")
    base = solved(f, alpha).solution.on_grid()
    errors = []
    one_sided = []
    for d in deltas:
        e = float(np.max(np.abs(solved(f, alpha + d).solution.on_grid() - base)))
        if alpha - d > 0:
            e = max(e, float(np.max(np.abs(solved(f, alpha - d).solution.on_grid() - base))))
        else:
            # no admissible radius below; compare from above only
            one_sided.append(d)
        errors.append(e)
    tolerances = {"slack": STABILITY_SLACK, "required_drop": STABILITY_DROP}
    details = {"deltas": deltas, "errors": errors, "one_sided": one_sided}
    for i in range(1, len(errors)):
        if errors[i] > errors[i - 1] + STABILITY_SLACK:
            return Verdict("stability", False, {"reason": "error increased as delta decreased", "delta_prev": deltas[i - 1],
                                                "delta": deltas[i], "e_prev": errors[i - 1], "e": errors[i]}, tolerances, details)
    if errors[-1] > errors[0] / STABILITY_DROP:
        return Verdict("stability", False, {"reason": "insufficient end-to-end decay", "e_first": errors[0],
                                            "e_last": errors[-1]}, tolerances, details)
    return Verdict("stability", True, None, tolerances, details)


def verify_limits(f: PiecewiseConstantSignal) -> Verdict:
    """Small radii recover f; radii past alpha_max give the constant mean."""
    path = cumulative(f)
    lip = path.lipschitz()
    amax = alpha_max(path)
    mean = path.total
    tau = jump_threshold(f)
    tolerances = {"constant": LIMIT_TOL, "mean": LIMIT_TOL, "jump_threshold": tau}
    details = {"alpha_max": amax, "lipschitz_F": lip, "mean": mean}
    if lip > 0:
        l2 = []
        for factor in (1e-2, 1e-3, 1e-4):
            u = solved(f, factor * lip).u
            mids = _cell_midpoints(u, f)
            w = np.diff(np.union1d(u.breakpoints, f.breakpoints))
            l2.append(math.sqrt(math.fsum(w * (u(mids) - f(mids)) ** 2)))
        details["l2_small_alpha"] = l2
        for prev, cur in zip(l2, l2[1:]):
            if cur > prev:
                return Verdict("limits", False, {"reason": "L2 error grew as alpha decreased", "previous": prev,
                                                 "current": cur}, tolerances, details)
    if amax > 0:
        u = solved(f, 1.01 * amax).u
        spread = float(np.ptp(u.values))
        off = float(np.max(np.abs(u.values - mean)))
        details.update(spread_above=spread, mean_deviation_above=off)
        if spread > LIMIT_TOL or off > LIMIT_TOL:
            return Verdict("limits", False, {"reason": "u not the constant mean above alpha_max", "alpha": 1.01 * amax,
                                             "spread": spread, "mean_deviation": off}, tolerances, details)
        below = solved(f, 0.99 * amax)
        if len(below.jumps) == 0:
            return Verdict("limits", False, {"reason": "u constant below alpha_max", "alpha": 0.99 * amax,
                                             "spread": float(np.ptp(below.u.values))}, tolerances, details)
    return Verdict("limits", True, None, tolerances, details)


def verify_universal_minimality(
    f: PiecewiseConstantSignal, alpha: float, tol: float = UNIVERSAL_TOL, solver_tol: float = 1e-10
) -> Verdict:
    """Minimizers for several strictly convex slope costs coincide with the taut string."""
    s = solved(f, alpha)
    ref = s.solution.on_grid()
    deviations = {}
    for c in rof_oracle.STOCK_INTEGRANDS:
        other = rof_oracle.minimize_convex_integrand(s.tube, c, tol=solver_tol)
        deviations[c.label] = float(np.max(np.abs(other.values - ref)))
    worst = max(deviations, key=deviations.get)
    witness = None
    if deviations[worst] > tol:
        witness = {"integrand": worst, "deviation": deviations[worst], "bound": tol}
    return Verdict("universal_minimality", witness is None, witness, {"sup_norm": tol, "solver": solver_tol},
                   {"deviations": deviations})


# --------------------------------------------------------------------------- alpha sweeps


def _pairs(alphas):
    return list(zip(alphas, alphas[1:]))


def verify_jump_nesting(f: PiecewiseConstantSignal, alphas: Sequence[float], *, eps: float | None = None, tau: float | None = None) -> Verdict:
    """Jump sets shrink as alpha grows and always sit inside the jump set of f."""
    alphas = _check_alphas(alphas)
    tau = jump_threshold(f) if tau is None else tau
    margin = MARGIN_FACTOR * tau
    f_jumps = set(jump_set_of(f, 0.0).locations.tolist())
    tolerances = {"jump_threshold": tau, "margin": margin}
    excluded = []
    for a1, a2 in _pairs(alphas):
        j1 = set(solved(f, a1, eps, tau).jumps.locations.tolist())
        for e in solved(f, a2, eps, tau).jumps:
            if e.amplitude <= margin:
                excluded.append({"alpha": a2, "location": e.location, "amplitude": e.amplitude})
                log.info("jump at %r (alpha=%r) within margin of threshold; excluded", e.location, a2)
                continue
            if e.location not in j1:
                return Verdict("jump_nesting", False, {"alpha1": a1, "alpha2": a2, "location": e.location,
                                                       "amplitude_alpha2": e.amplitude,
                                                       "amplitude_alpha1": solved(f, a1, eps, tau).jumps.amplitude_at(e.location)},
                               tolerances)
            if e.location not in f_jumps:
                return Verdict("jump_nesting", False, {"alpha1": a1, "alpha2": a2, "location": e.location,
                                                       "reason": "not a jump of f"}, tolerances)
    counts = [len(solved(f, a, eps, tau).jumps) for a in alphas]
    return Verdict("jump_nesting", True, None, tolerances, {"jump_counts": counts, "excluded": excluded})


def verify_amplitude_monotonicity(f: PiecewiseConstantSignal, alphas: Sequence[float], *, eps: float | None = None, tau: float | None = None) -> Verdict:
    """At each jump of the smoother solution the rougher one jumps at least as much."""
    alphas = _check_alphas(alphas)
    tau = jump_threshold(f) if tau is None else tau
    margin = MARGIN_FACTOR * tau
    tolerances = {"slack": AMPLITUDE_SLACK, "jump_threshold": tau, "margin": margin}
    worst = math.inf
    for a1, a2 in _pairs(alphas):
        rough = jump_set_of(solved(f, a1, eps, tau).u, 0.0)
        for e in solved(f, a2, eps, tau).jumps:
            if e.amplitude <= margin:
                continue
            amp1 = rough.amplitude_at(e.location)
            slack = amp1 - e.amplitude
            worst = min(worst, slack)
            if slack < -AMPLITUDE_SLACK:
                return Verdict("amplitude_monotonicity", False, {"alpha1": a1, "alpha2": a2, "location": e.location,
                                                                 "amplitude_alpha1": amp1, "amplitude_alpha2": e.amplitude,
                                                                 "slack": slack}, tolerances)
    return Verdict("amplitude_monotonicity", True, None, tolerances, {"min_slack": None if worst == math.inf else worst})


def verify_contact_nesting(f: PiecewiseConstantSignal, alphas: Sequence[float], *, eps: float | None = None, tau: float | None = None) -> Verdict:
    """Contact union at the larger radius is contained in the union at the smaller one."""
    alphas = _check_alphas(alphas)
    per_sign = []
    for a1, a2 in _pairs(alphas):
        c1, c2 = solved(f, a1, eps, tau).contacts, solved(f, a2, eps, tau).contacts
        grid = solved(f, a1, eps, tau).tube.grid
        stray = c2.union_mask & ~c1.union_mask
        if np.any(stray):
            x = float(grid[np.flatnonzero(stray)[0]])
            return Verdict("contact_nesting", False, {"alpha1": a1, "alpha2": a2, "x": x,
                                                      "in_plus_alpha2": bool(c2.plus_mask[grid == x][0]),
                                                      "in_minus_alpha2": bool(c2.minus_mask[grid == x][0])},
                           {"contact_eps": [c1.eps, c2.eps]})
        per_sign.append({
            "alpha1": a1,
            "alpha2": a2,
            "plus_nested": bool(not np.any(c2.plus_mask & ~c1.plus_mask)),
            "minus_nested": bool(not np.any(c2.minus_mask & ~c1.minus_mask)),
        })
    return Verdict("contact_nesting", True, None, {"contact_eps": "max(1e-12, 1e-9*alpha)" if eps is None else eps},
                   {"per_sign": per_sign})


# --------------------------------------------------------------------------- reports


@dataclass
class MonotonicityReport:
    signal_id: str
    alphas: list
    per_alpha: list
    verdicts: list

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def failures(self) -> list:
        return [v for v in self.verdicts if not v.passed]

    def to_dict(self) -> dict:
        return {
            "signal": self.signal_id,
            "alphas": self.alphas,
            "per_alpha": self.per_alpha,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "pass": self.passed,
        }


def default_alphas(f: PiecewiseConstantSignal, count: int = 8, lo: float = 1e-3) -> list[float]:
    """Log-spaced radii from ``lo`` to ``1.1 * alpha_max`` (to 1.0 when that is degenerate)."""
    hi = 1.1 * alpha_max(cumulative(f))
    if hi <= lo:
        hi = 1.0
    return np.geomspace(lo, hi, count).tolist()


def run_suite(
    f: PiecewiseConstantSignal,
    alphas: Sequence[float] | None = None,
    signal_id: str = "signal",
    *,
    eps: float | None = None,
    tau: float | None = None,
    oracle_tol: float | None = None,
) -> MonotonicityReport:
    """All sweep-level and per-alpha checks for one signal.

    With ``oracle_tol`` set, each radius is also cross-checked against the dual
    oracle run at that tolerance.
    """
    alphas = _check_alphas(default_alphas(f) if alphas is None else alphas)
    per_alpha = []
    tol = {"eps": eps, "tau": tau}
    verdicts = [
        verify_jump_nesting(f, alphas, **tol),
        verify_amplitude_monotonicity(f, alphas, **tol),
        verify_contact_nesting(f, alphas, **tol),
    ]
    for a in alphas:
        s = solved(f, a, eps, tau)
        per_alpha.append({
            "alpha": a,
            "jumps": s.jumps.to_dict(),
            "contacts": {"plus": [list(iv) for iv in s.contacts.plus], "minus": [list(iv) for iv in s.contacts.minus]},
            "plateaus": plateau_summary(s),
        })
        checks = [check(f, a, **tol) for check in (verify_jump_inclusion, verify_optimality_conditions, verify_geometry)]
        if oracle_tol is not None:
            checks.append(verify_equivalence(f, a, dual_tol=oracle_tol))
        for v in checks:
            v.details = {"alpha": a, **v.details}
            verdicts.append(v)
    verdicts.append(verify_limits(f))
    return MonotonicityReport(signal_id, alphas, per_alpha, verdicts)


def default_corpus(random_count: int = 50, extras: bool = True) -> list[tuple[str, PiecewiseConstantSignal]]:
    """Named signals plus seeded random step functions of varying size.

    ``extras`` adds the oscillating ``sin_inv_x`` signal to the core set.
    """
    corpus = [
        ("constant", generate("constant", c=0.3)),
        ("step", generate("step")),
        ("staircase_nonbv_N6", generate("staircase_nonbv", N=6)),
        ("fig1_sine_n1000", generate("fig1_sine", n=1000)),
    ]
    if extras:
        corpus.append(("sin_inv_x_n1000", generate("sin_inv_x", n=1000)))
    sizes = (5, 12, 40, 128, 400)
    for seed in range(random_count):
        k = sizes[seed % len(sizes)]
        corpus.append((f"random_k{k}_s{seed}", generate("random_piecewise", k=k, seed=seed)))
    return corpus


def _suite_job(item):
    signal_id, f, alphas = item
    return run_suite(f, alphas, signal_id)


def verify_corpus(corpus=None, alphas=None, jobs: int = 1) -> list[MonotonicityReport]:
    """Run :func:`run_suite` over a corpus; results keep corpus order whatever ``jobs`` is."""
    corpus = default_corpus() if corpus is None else corpus
    items = [(sid, f, alphas) for sid, f in corpus]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_suite_job, items))
    return [_suite_job(it) for it in items]
