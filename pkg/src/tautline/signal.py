"""Piecewise-constant signals on nonuniform grids of (0, 1).

A signal stores the cell edges ``0 = x_0 < x_1 < ... < x_n = 1`` and one value
per cell. Construction canonicalizes: adjacent cells carrying bit-identical
values are merged, so every interior breakpoint is a genuine discontinuity.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    ConfigurationError,
    CsvParseError,
    DomainError,
    MonotonicityError,
    SignalIOError,
    ValidationError,
)

CSV_HEADER = ("breakpoint", "value")

SIGNAL_NAMES = (
    "fig1_sine",
    "step",
    "staircase_nonbv",
    "sin_inv_x",
    "random_piecewise",
    "constant",
)
_ALIASES = {"fig1": "fig1_sine", "staircase": "staircase_nonbv", "random": "random_piecewise"}


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def _check_grid(breakpoints: np.ndarray) -> None:
    if breakpoints.ndim != 1 or breakpoints.size < 2:
        raise ValidationError("need at least two breakpoints (one cell)")
    if not np.all(np.isfinite(breakpoints)):
        raise ValidationError("breakpoints must be finite")
    if breakpoints[0] != 0.0 or breakpoints[-1] != 1.0:
        raise ValidationError(
            f"grid must start at 0 and end at 1, got [{breakpoints[0]!r}, {breakpoints[-1]!r}]"
        )
    if np.any(np.diff(breakpoints) <= 0.0):
        raise ValidationError("breakpoints must be strictly increasing")


@dataclass(frozen=True, eq=False)
class PiecewiseConstantSignal:
    """Step function with value ``values[i]`` on ``(breakpoints[i], breakpoints[i+1])``."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.breakpoints, dtype=np.float64).ravel()
        v = np.asarray(self.values, dtype=np.float64).ravel()
        _check_grid(x)
        if v.size != x.size - 1:
            raise ValidationError(f"{x.size} breakpoints need {x.size - 1} values, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise ValidationError("signal values must be finite")
        # merge cells whose values are bit-identical
        keep = np.concatenate(([True], v[1:] != v[:-1]))
        v = v[keep]
        x = np.concatenate((x[:-1][keep], [1.0]))
        object.__setattr__(self, "breakpoints", _frozen(x))
        object.__setattr__(self, "values", _frozen(v))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def mean(self) -> float:
        return math.fsum(self.values * self.widths)

    def total_variation(self) -> float:
        return math.fsum(np.abs(np.diff(self.values)))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def cell_index(self, x: float) -> int:
        """Index of the cell whose half-open span ``[x_{i}, x_{i+1})`` contains ``x``."""
        return int(np.searchsorted(self.breakpoints, x, side="right") - 1)

    def __call__(self, x):
        idx = np.clip(np.searchsorted(self.breakpoints, x, side="right") - 1, 0, self.n - 1)
        return self.values[idx]

    def __eq__(self, other):
        if not isinstance(other, PiecewiseConstantSignal):
            return NotImplemented
        return np.array_equal(self.breakpoints, other.breakpoints) and np.array_equal(
            self.values, other.values
        )

    def __hash__(self):
        return hash((self.breakpoints.tobytes(), self.values.tobytes()))

    def __repr__(self):
        return f"PiecewiseConstantSignal(n={self.n}, mean={self.mean():.6g})"


@dataclass(frozen=True, eq=False)
class CumulativePath:
    """Knot values of ``F(t) = int_0^t f``; linear between knots.

    The grid may refine the source signal's grid, in which case ``slopes`` holds
    repeated values and some knots are not discontinuities of ``f``.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    slopes: np.ndarray

    @property
    def n(self) -> int:
        return self.slopes.size

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def total(self) -> float:
        return float(self.values[-1])

    def lipschitz(self) -> float:
        return float(np.max(np.abs(self.slopes)))

    def __call__(self, x):
        return np.interp(x, self.breakpoints, self.values)


class JumpEntry(NamedTuple):
    location: float
    left_value: float
    right_value: float
    amplitude: float


@dataclass(frozen=True)
class JumpReport:
    entries: tuple
    threshold: float = 0.0

    @property
    def locations(self) -> np.ndarray:
        return np.array([e.location for e in self.entries], dtype=np.float64)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([e.amplitude for e in self.entries], dtype=np.float64)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def amplitude_at(self, x: float) -> float:
        """Amplitude of the jump at exactly ``x``, or 0.0 when there is none."""
        for e in self.entries:
            if e.location == x:
                return e.amplitude
        return 0.0

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "entries": [e._asdict() for e in self.entries],
        }


def _compensated_cumsum(terms: np.ndarray) -> np.ndarray:
    # Neumaier summation; returns the running sums with the leading zero
    out = np.empty(terms.size + 1)
    out[0] = 0.0
    s = 0.0
    c = 0.0
    for i, t in enumerate(terms.tolist(), start=1):
        u = s + t
        if abs(s) >= abs(t):
            c += (s - u) + t
        else:
            c += (t - u) + s
        s = u
        out[i] = s + c
    return out


def cumulative(signal: PiecewiseConstantSignal, extra_knots: Iterable[float] = ()) -> CumulativePath:
    """Primitive ``F`` of ``signal`` with ``F(0) = 0``.

    Args:
        signal: the input step function.
        extra_knots: optional points in (0, 1) to insert into the grid without
            changing ``f``; used to check that solutions ignore grid refinement.
    """
    x = signal.breakpoints
    extra = np.asarray(list(extra_knots), dtype=np.float64)
    if extra.size:
        if np.any((extra <= 0.0) | (extra >= 1.0)) or not np.all(np.isfinite(extra)):
            raise DomainError("extra knots must lie in (0, 1)")
        x = np.union1d(x, extra)
    slopes = signal(x[:-1])
    F = _compensated_cumsum(slopes * np.diff(x))
    return CumulativePath(_frozen(x), _frozen(F), _frozen(slopes))


def approximate_limits(signal: PiecewiseConstantSignal, x: float) -> tuple[float, float]:
    """Left and right limits of ``signal`` at ``x`` in (0, 1)."""
    if not 0.0 < x < 1.0:
        raise DomainError(f"x={x!r} outside (0, 1)")
    bp = signal.breakpoints
    right = int(np.searchsorted(bp, x, side="right")) - 1
    left = int(np.searchsorted(bp, x, side="left")) - 1
    return float(signal.values[left]), float(signal.values[right])


def jump_set_of(signal: PiecewiseConstantSignal, threshold: float = 0.0) -> JumpReport:
    """Interior breakpoints where the value changes by more than ``threshold``."""
    if threshold < 0:
        raise ValidationError("threshold must be nonnegative")
    v = signal.values
    amp = np.abs(np.diff(v))
    idx = np.nonzero(amp > threshold)[0]
    entries = tuple(
        JumpEntry(float(signal.breakpoints[i + 1]), float(v[i]), float(v[i + 1]), float(amp[i]))
        for i in idx
    )
    return JumpReport(entries, float(threshold))


def lipschitz_of_cumulative(signal: PiecewiseConstantSignal) -> float:
    return signal.sup_norm()


# --------------------------------------------------------------------------- generators


def fig1_function(x):
    """The smooth test input sin(4 pi (x + 1/4)) + cos(pi (x + 1/4) / 2) / 2."""
    x = np.asarray(x, dtype=np.float64)
    return np.sin(4.0 * np.pi * (x + 0.25)) + 0.5 * np.cos(0.5 * np.pi * (x + 0.25))


def fig1_antiderivative(x):
    x = np.asarray(x, dtype=np.float64)
    return -np.cos(4.0 * np.pi * (x + 0.25)) / (4.0 * np.pi) + np.sin(0.5 * np.pi * (x + 0.25)) / np.pi


def _uniform_midpoints(n: int, lo: float = 0.0, hi: float = 1.0):
    edges = np.linspace(lo, hi, n + 1)
    edges[0], edges[-1] = lo, hi
    return edges, 0.5 * (edges[:-1] + edges[1:])


def _positive_int(params: dict, key: str, default: int, minimum: int = 1) -> int:
    value = params.pop(key, default)
    if isinstance(value, bool) or int(value) != value or int(value) < minimum:
        raise ConfigurationError(f"{key} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def generate(name: str, **params) -> PiecewiseConstantSignal:
    """Build one of the named test signals.

    ``fig1_sine(n=1000)``, ``step()``, ``staircase_nonbv(N=6)``,
    ``sin_inv_x(n=1000, eps=1e-3)``, ``random_piecewise(k=16, seed=0)``
    (``n`` is accepted for ``k``) and ``constant(c=0.0)``.
    """
    key = _ALIASES.get(name, name)
    if key not in SIGNAL_NAMES:
        raise ConfigurationError(f"unknown signal {name!r}; choose from {', '.join(SIGNAL_NAMES)}")
    params = dict(params)
    if key != "random_piecewise":
        # the CLI always forwards a seed; only the random generator uses it
        params.pop("seed", None)

    if key == "fig1_sine":
        n = _positive_int(params, "n", 1000)
        edges, mids = _uniform_midpoints(n)
        sig = PiecewiseConstantSignal(edges, fig1_function(mids))
    elif key == "step":
        params.pop("n", None)
        sig = PiecewiseConstantSignal([0.0, 0.5, 1.0], [0.0, 1.0])
    elif key == "staircase_nonbv":
        params.pop("n", None)
        depth = _positive_int(params, "N", 6, minimum=2)
        if depth > 40:
            raise ConfigurationError("N above 40 produces intervals below double resolution")
        pieces = sorted((1.0 / m, 1.0 / m + 2.0 ** -m) for m in range(2, depth + 1))
        edges = [0.0]
        vals = []
        for left, right in pieces:
            vals.append(0.0)
            edges.append(left)
            vals.append(1.0)
            edges.append(right)
        if edges[-1] < 1.0:
            vals.append(0.0)
            edges.append(1.0)
        sig = PiecewiseConstantSignal(edges, vals)
    elif key == "sin_inv_x":
        n = _positive_int(params, "n", 1000)
        eps = float(params.pop("eps", 1e-3))
        if not 0.0 < eps < 1.0:
            raise ConfigurationError("eps must lie in (0, 1)")
        edges, mids = _uniform_midpoints(n, eps, 1.0)
        sig = PiecewiseConstantSignal(np.concatenate(([0.0], edges)), np.concatenate(([0.0], np.sin(1.0 / mids))))
    elif key == "random_piecewise":
        n = params.pop("n", 16)
        k = _positive_int(params, "k", n)
        seed = params.pop("seed", 0)
        rng = np.random.default_rng(seed)
        cuts = np.sort(rng.uniform(0.0, 1.0, size=k - 1))
        vals = rng.uniform(-1.0, 1.0, size=k)
        edges = np.concatenate(([0.0], cuts, [1.0]))
        if np.any(np.diff(edges) <= 0.0):
            raise ConfigurationError(f"seed {seed!r} produced coincident breakpoints")
        sig = PiecewiseConstantSignal(edges, vals)
    else:  # constant
        params.pop("n", None)
        c = float(params.pop("c", 0.0))
        sig = PiecewiseConstantSignal([0.0, 1.0], [c])

    if params:
        raise ConfigurationError(f"unexpected parameters for {key}: {sorted(params)}")
    return sig


# --------------------------------------------------------------------------- CSV


def _fmt(value: float) -> str:
    return repr(float(value))


def dumps_csv(signal: PiecewiseConstantSignal, comments: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for x, v in zip(signal.breakpoints[1:], signal.values):
        writer.writerow((_fmt(x), _fmt(v)))
    return buf.getvalue()


def loads_csv(text: str) -> PiecewiseConstantSignal:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise CsvParseError("empty signal file")
    rows = list(csv.reader(lines))
    header = tuple(c.strip() for c in rows[0])
    if header != CSV_HEADER:
        raise CsvParseError(f"expected header {','.join(CSV_HEADER)!r}, got {','.join(header)!r}")
    if len(rows) == 1:
        raise CsvParseError("signal file has a header but no rows")
    xs, vs = [0.0], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise CsvParseError(f"row {lineno}: expected 2 fields, got {len(row)}")
        try:
            x, v = float(row[0]), float(row[1])
        except ValueError as exc:
            raise CsvParseError(f"row {lineno}: {exc}") from None
        if not (math.isfinite(x) and math.isfinite(v)):
            raise CsvParseError(f"row {lineno}: non-finite number")
        if x <= xs[-1]:
            raise MonotonicityError(f"row {lineno}: breakpoint {x!r} does not exceed {xs[-1]!r}")
        xs.append(x)
        vs.append(v)
    if xs[-1] != 1.0:
        raise MonotonicityError(f"final breakpoint must equal 1, got {xs[-1]!r}")
    return PiecewiseConstantSignal(xs, vs)


def write_csv(signal: PiecewiseConstantSignal, path, comments: Sequence[str] = ()) -> None:
    try:
        with open(os.fspath(path), "w", encoding="utf-8", newline="") as fh:
            fh.write(dumps_csv(signal, comments))
    except OSError as exc:
        raise SignalIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_csv(path) -> PiecewiseConstantSignal:
    try:
        with open(os.fspath(path), encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise SignalIOError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return loads_csv(text)
