"""Exact taut-string solver for piecewise-linear tubes.

For a step input ``f`` the walls ``F - alpha`` and ``F + alpha`` are piecewise
linear with kinks on the grid, so the shortest pinned path inside the tube is a
polyline whose vertices are wall points at grid knots. :func:`solve` finds
those vertices with a greedy sweep and the ROF minimizer is the slope of the
result (:func:`derivative`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, IllConditionedError, InconsistencyError, ValidationError
from .signal import CumulativePath, PiecewiseConstantSignal, cumulative

# below this multiple of Lip(F) the tube is treated as collapsed onto F
COLLAPSE_RATIO = 1e-14
_FIRST_WINDOW = 64


def contact_tolerance(alpha: float) -> float:
    """Default band used to decide that the string touches a wall."""
    return max(1e-12, 1e-9 * alpha)


@dataclass(frozen=True)
class Tube:
    path: CumulativePath
    radius: float

    def __post_init__(self):
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0.0):
            raise ValidationError(f"tube radius must be positive and finite, got {self.radius!r}")
        object.__setattr__(self, "radius", r)

    @classmethod
    def around(cls, signal: PiecewiseConstantSignal, alpha: float, extra_knots=()) -> "Tube":
        return cls(cumulative(signal, extra_knots), alpha)

    @property
    def grid(self) -> np.ndarray:
        return self.path.breakpoints

    def walls(self) -> tuple[np.ndarray, np.ndarray]:
        """Lower and upper wall at the grid knots; both pinned to ``F`` at 0 and 1."""
        F = self.path.values
        lo = F - self.radius
        hi = F + self.radius
        lo[0] = hi[0] = F[0]
        lo[-1] = hi[-1] = F[-1]
        return lo, hi


@dataclass(frozen=True, eq=False)
class TautSolution:
    """Polyline through ``(knots[i], values[i])``; knots are a subset of the tube grid."""

    alpha: float
    knots: np.ndarray
    values: np.ndarray
    grid: np.ndarray

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / np.diff(self.knots)

    def __call__(self, x):
        return np.interp(x, self.knots, self.values)

    def on_grid(self) -> np.ndarray:
        """String height at every knot of the tube grid."""
        return np.interp(self.grid, self.knots, self.values)

    def to_dict(self, contacts: "ContactSets | None" = None) -> dict:
        out = {
            "alpha": self.alpha,
            "knots": self.knots.tolist(),
            "values": self.values.tolist(),
        }
        if contacts is not None:
            out["contacts"] = {
                "plus": [list(iv) for iv in contacts.plus],
                "minus": [list(iv) for iv in contacts.minus],
            }
        return out


class ContactSets(NamedTuple):
    plus: tuple
    minus: tuple
    transitions: tuple
    plus_mask: np.ndarray
    minus_mask: np.ndarray
    eps: float

    @property
    def union_mask(self) -> np.ndarray:
        return self.plus_mask | self.minus_mask

    def runs(self):
        """Contact runs as ``(first_index, last_index, sign)`` in grid order."""
        out = []
        for mask, sign in ((self.plus_mask, +1), (self.minus_mask, -1)):
            out.extend((a, b, sign) for a, b in _runs(mask))
        return sorted(out)


def _runs(mask: np.ndarray):
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate(([idx[0]], idx[breaks + 1]))
    ends = np.concatenate((idx[breaks], [idx[-1]]))
    return list(zip(starts.tolist(), ends.tolist()))


def alpha_max(path: CumulativePath) -> float:
    """Smallest radius for which the straight chord from (0, 0) to (1, F(1)) fits."""
    x, F = path.breakpoints, path.values
    return float(np.max(np.abs(F - x * F[-1])))


def _chord(tube: Tube) -> TautSolution:
    F = tube.path.values
    return TautSolution(tube.radius, np.array([0.0, 1.0]), np.array([0.0, F[-1]]), tube.grid)


def _sweep(x: np.ndarray, lo: np.ndarray, hi: np.ndarray):
    """Greedy taut-string sweep over knot walls ``lo <= U <= hi``.

    From the current anchor the admissible slopes form a cone bounded below by
    the steepest lower-wall point seen so far (first edge of the least concave
    majorant of the lower wall) and above by the flattest upper-wall point (first
    edge of the greatest convex minorant of the upper wall). When the cone closes,
    the string bends at the wall point that pinned the violated bound, which
    becomes the next anchor.
    """
    n = x.size - 1
    vx = [0]
    vy = [lo[0]]
    a = 0
    ay = lo[0]
    while a < n:
        ax = x[a]
        best_lo, arg_lo = -math.inf, a
        best_hi, arg_hi = math.inf, a
        start = a + 1
        width = _FIRST_WINDOW
        bend = None
        while start <= n:
            stop = min(n + 1, start + width)
            dx = x[start:stop] - ax
            s_lo = (lo[start:stop] - ay) / dx
            s_hi = (hi[start:stop] - ay) / dx
            run_lo = np.maximum.accumulate(np.concatenate(([best_lo], s_lo)))
            run_hi = np.minimum.accumulate(np.concatenate(([best_hi], s_hi)))
            closed = np.flatnonzero(run_lo[1:] > run_hi[1:])
            if closed.size:
                j = int(closed[0])  # offset of the first knot that closes the cone
                if s_lo[j] > run_hi[j]:
                    seg = s_hi[:j]
                    if seg.size and seg.min() <= best_hi:
                        k = start + int(seg.size - 1 - np.argmin(seg[::-1]))
                    else:
                        k = arg_hi
                    bend = (k, hi[k])
                else:
                    seg = s_lo[:j]
                    if seg.size and seg.max() >= best_lo:
                        k = start + int(seg.size - 1 - np.argmax(seg[::-1]))
                    else:
                        k = arg_lo
                    bend = (k, lo[k])
                break
            # carry the cone across windows; ties resolve to the farthest knot
            m = s_lo.size - 1 - int(np.argmax(s_lo[::-1]))
            if s_lo[m] >= best_lo:
                best_lo, arg_lo = float(s_lo[m]), start + m
            m = s_hi.size - 1 - int(np.argmin(s_hi[::-1]))
            if s_hi[m] <= best_hi:
                best_hi, arg_hi = float(s_hi[m]), start + m
            start = stop
            width *= 2
        if bend is None:
            vx.append(n)
            vy.append(lo[n])
            break
        a, ay = bend
        vx.append(a)
        vy.append(ay)
    return np.asarray(vx), np.asarray(vy, dtype=np.float64)


def solve(tube: Tube) -> TautSolution:
    """Shortest path from (0, 0) to (1, F(1)) inside ``[F - alpha, F + alpha]``."""
    path = tube.path
    alpha = tube.radius
    lip = path.lipschitz()
    if alpha >= alpha_max(path):
        return _chord(tube)
    if alpha < COLLAPSE_RATIO * lip:
        return TautSolution(alpha, path.breakpoints.copy(), path.values.copy(), tube.grid)
    lo, hi = tube.walls()
    if np.any(hi[1:-1] <= lo[1:-1]):
        bad = int(np.flatnonzero(hi[1:-1] <= lo[1:-1])[0]) + 1
        raise IllConditionedError(
            f"tube of radius {alpha!r} collapses at x={tube.grid[bad]!r} (F={path.values[bad]!r})"
        )
    idx, vals = _sweep(tube.grid, lo, hi)
    # pins are carried over verbatim, never recomputed
    vals[0] = 0.0
    vals[-1] = path.values[-1]
    return TautSolution(alpha, tube.grid[idx], vals, tube.grid)


def derivative(sol: TautSolution) -> PiecewiseConstantSignal:
    """Slope of the string as a step function; this is the ROF minimizer."""
    return PiecewiseConstantSignal(sol.knots, sol.slopes)


def denoise(signal: PiecewiseConstantSignal, alpha: float, extra_knots=()):
    """Convenience wrapper returning ``(u, solution, tube)``."""
    tube = Tube.around(signal, alpha, extra_knots)
    sol = solve(tube)
    return derivative(sol), sol, tube


def contact_sets(sol: TautSolution, tube: Tube, eps: float | None = None) -> ContactSets:
    """Grid knots where the string lies within ``eps`` of a wall, merged into runs.

    The pinned endpoints 0 and 1 are never contact points.
    """
    if eps is None:
        eps = contact_tolerance(tube.radius)
    if eps < 0:
        raise ValidationError("eps must be nonnegative")
    if not np.array_equal(sol.grid, tube.grid):
        raise ValidationError("solution and tube live on different grids")
    U = sol.on_grid()
    F = tube.path.values
    plus = np.abs(U - (F + tube.radius)) <= eps
    minus = np.abs(U - (F - tube.radius)) <= eps
    plus[0] = plus[-1] = minus[0] = minus[-1] = False
    both = plus & minus
    if np.any(both):
        x = float(tube.grid[np.flatnonzero(both)[0]])
        raise InconsistencyError(f"knot x={x!r} is within eps={eps!r} of both walls")
    grid = tube.grid
    plus_iv = tuple((float(grid[a]), float(grid[b])) for a, b in _runs(plus))
    minus_iv = tuple((float(grid[a]), float(grid[b])) for a, b in _runs(minus))
    points = sorted({p for iv in plus_iv + minus_iv for p in iv})
    return ContactSets(plus_iv, minus_iv, tuple(points), plus, minus, float(eps))


def one_sided_slopes(sol: TautSolution, x: float) -> tuple[float, float]:
    """Slopes of the string immediately left and right of ``x``."""
    if not 0.0 < x < 1.0:
        raise DomainError(f"x={x!r} outside (0, 1)")
    slopes = sol.slopes
    left = int(np.searchsorted(sol.knots, x, side="left")) - 1
    right = int(np.searchsorted(sol.knots, x, side="right")) - 1
    return float(slopes[left]), float(slopes[right])
