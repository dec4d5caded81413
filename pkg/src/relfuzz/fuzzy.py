"""Triangular fuzzy numbers.

Two ways of pushing TFNs through formulas are provided:

* vertex arithmetic (:func:`add`, :func:`scale`, :func:`mul`, :func:`div`) which
  combines the (a, b, c) triples directly. ``mul``/``div`` are the usual
  positive-TFN approximations.
* alpha-cut propagation (:func:`propagate`) which evaluates a crisp function
  over the alpha-level boxes of its inputs (extension principle).
"""

from dataclasses import dataclass
import math

import numpy as np

__all__ = [
    "TFN",
    "AlphaInterval",
    "MembershipCurve",
    "UnitMismatchError",
    "PropagationError",
    "crisp",
    "add",
    "scale",
    "mul",
    "div",
    "alpha_cut",
    "uniform_alphas",
    "propagate",
    "propagate_cuts",
    "defuzzify_centroid",
    "defuzzify_curve",
    "DEFAULT_ALPHA_LEVELS",
]

DEFAULT_ALPHA_LEVELS = 101


class UnitMismatchError(ValueError):
    pass


class PropagationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class TFN:
    """Triangular fuzzy number with vertices ``a <= b <= c`` and a unit tag."""

    a: float
    b: float
    c: float
    unit: str = ""

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"TFN vertex {name} must be finite, got {v}")
            object.__setattr__(self, name, v)
        if not (self.a <= self.b <= self.c):
            raise ValueError(f"TFN vertices must satisfy a <= b <= c, got ({self.a}, {self.b}, {self.c})")

    @property
    def is_crisp(self) -> bool:
        return self.a == self.c

    def as_tuple(self):
        return (self.a, self.b, self.c)

    def with_unit(self, unit: str) -> "TFN":
        return TFN(self.a, self.b, self.c, unit)

    def membership(self, x):
        """Membership grade of ``x`` (scalar or array)."""
        x = np.asarray(x, dtype=float)
        mu = np.zeros_like(x)
        if self.is_crisp:
            mu[x == self.b] = 1.0
            return mu if mu.ndim else float(mu)
        if self.b > self.a:
            left = (x >= self.a) & (x <= self.b)
            mu[left] = (x[left] - self.a) / (self.b - self.a)
        if self.c > self.b:
            right = (x >= self.b) & (x <= self.c)
            mu[right] = (self.c - x[right]) / (self.c - self.b)
        mu[x == self.b] = 1.0
        return mu if mu.ndim else float(mu)

    def __add__(self, other):
        return add(self, other)

    def __repr__(self):
        u = f", unit={self.unit!r}" if self.unit else ""
        return f"TFN({self.a!r}, {self.b!r}, {self.c!r}{u})"


def crisp(x: float, unit: str = "") -> TFN:
    return TFN(x, x, x, unit)


@dataclass(frozen=True)
class AlphaInterval:
    alpha: float
    lo: float
    hi: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.lo > self.hi:
            raise ValueError(f"interval is empty: [{self.lo}, {self.hi}]")


@dataclass(frozen=True, eq=False)
class MembershipCurve:
    """Polyline membership function.

    ``x`` is nondecreasing (repeated abscissae encode vertical edges, e.g. the
    left edge of a TFN with ``a == b``); ``mu`` rises to 1 then falls.
    """

    x: np.ndarray
    mu: np.ndarray
    unit: str = ""

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        mu = np.asarray(self.mu, dtype=float)
        if x.ndim != 1 or x.shape != mu.shape or x.size == 0:
            raise ValueError("curve needs matching non-empty 1-D x and mu arrays")
        if np.any(np.diff(x) < 0):
            raise ValueError("curve abscissae must be nondecreasing")
        if np.any(mu < 0) or np.any(mu > 1):
            raise ValueError("membership grades must lie in [0, 1]")
        peak = int(np.argmax(mu))
        if np.any(np.diff(mu[: peak + 1]) < 0) or np.any(np.diff(mu[peak:]) > 0):
            raise ValueError("membership curve must be quasi-concave")
        x.setflags(write=False)
        mu.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "mu", mu)

    @classmethod
    def from_cuts(cls, alphas, lo, hi, unit=""):
        """Build the polyline from alpha-cut bounds ordered by increasing alpha."""
        alphas = np.asarray(alphas, dtype=float)
        x = np.concatenate([lo, np.asarray(hi)[::-1]])
        mu = np.concatenate([alphas, alphas[::-1]])
        return cls(x, mu, unit)

    @classmethod
    def from_tfn(cls, x: TFN, levels: int = DEFAULT_ALPHA_LEVELS):
        alphas = uniform_alphas(levels)
        lo, hi = _cut_bounds(x, alphas)
        return cls.from_cuts(alphas, lo, hi, x.unit)

    @property
    def peak(self) -> float:
        return float(self.x[int(np.argmax(self.mu))])

    @property
    def support(self):
        return float(self.x[0]), float(self.x[-1])


def _check_units(x: TFN, y: TFN):
    if x.unit != y.unit:
        raise UnitMismatchError(f"unit mismatch: {x.unit!r} vs {y.unit!r}")


def add(x: TFN, y: TFN) -> TFN:
    _check_units(x, y)
    return TFN(x.a + y.a, x.b + y.b, x.c + y.c, x.unit)


def scale(x: TFN, k: float) -> TFN:
    if k < 0:
        raise ValueError(f"scale factor must be nonnegative, got {k}")
    return TFN(k * x.a, k * x.b, k * x.c, x.unit)


def _product_unit(u, v):
    if not u:
        return v
    if not v:
        return u
    return f"{u}*{v}"


def _quotient_unit(u, v):
    if u == v:
        return ""
    if not v:
        return u
    return f"{u}/{v}"


def mul(x: TFN, y: TFN) -> TFN:
    """Vertex product of two nonnegative TFNs."""
    if x.a < 0 or y.a < 0:
        raise ValueError("mul is defined for nonnegative TFNs only")
    return TFN(x.a * y.a, x.b * y.b, x.c * y.c, _product_unit(x.unit, y.unit))


def div(x: TFN, y: TFN) -> TFN:
    """Vertex quotient ``(x.a/y.c, x.b/y.b, x.c/y.a)``; divisor must be positive."""
    if y.a <= 0:
        raise ZeroDivisionError(f"divisor support must be strictly positive, got a={y.a}")
    if x.a < 0:
        raise ValueError("div is defined for nonnegative dividends only")
    return TFN(x.a / y.c, x.b / y.b, x.c / y.a, _quotient_unit(x.unit, y.unit))


def alpha_cut(x: TFN, alpha: float) -> AlphaInterval:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    lo = x.a + alpha * (x.b - x.a)
    hi = x.c - alpha * (x.c - x.b)
    # rounding can push lo past hi at alpha == 1
    if alpha == 1.0:
        lo = hi = x.b
    return AlphaInterval(alpha, lo, hi)


def uniform_alphas(levels: int = DEFAULT_ALPHA_LEVELS) -> np.ndarray:
    if levels < 2:
        raise ValueError("an alpha grid needs at least two levels (0 and 1)")
    return np.linspace(0.0, 1.0, levels)


def _cut_bounds(x: TFN, alphas):
    lo = np.minimum(x.a + alphas * (x.b - x.a), x.b)
    hi = np.maximum(x.c - alphas * (x.c - x.b), x.b)
    top = alphas == 1.0
    lo[top] = hi[top] = x.b
    return lo, hi


def _candidates(x: TFN, alphas, dense_points):
    lo, hi = _cut_bounds(x, alphas)
    cols = [lo, np.full_like(alphas, x.b), hi]
    if dense_points:
        t = np.linspace(0.0, 1.0, dense_points)
        cols.extend(lo + ti * (hi - lo) for ti in t[1:-1])
    return np.stack(cols, axis=1)


def propagate_cuts(f, inputs, alphas, dense=False, dense_points=33):
    """Alpha-cut bounds of ``f(*inputs)``.

    Each input contributes, per alpha level, the two cut endpoints and its
    peak; ``f`` is evaluated on the Cartesian product of those candidates and
    the min/max taken. That is exact when ``f`` is monotone in every
    coordinate. With ``dense=True`` each cut is additionally sampled at
    ``dense_points`` evenly spaced points, for non-monotone ``f``.

    ``f`` must accept numpy arrays and broadcast.

    Returns
    -------
    alphas, lo, hi : ndarray
        Levels (ascending) and the output interval at each level. The bounds
        are made nested (lo nondecreasing, hi nonincreasing in alpha).
    """
    alphas = np.asarray(alphas, dtype=float)
    if alphas.ndim != 1 or alphas.size == 0:
        raise ValueError("alpha grid must be a non-empty 1-D sequence")
    if np.any((alphas < 0) | (alphas > 1)):
        raise ValueError("alpha levels must lie in [0, 1]")
    alphas = np.unique(alphas)
    inputs = list(inputs)
    if not inputs:
        raise ValueError("propagate needs at least one input")
    n = len(inputs)
    cand = [_candidates(x, alphas, dense_points if dense else 0) for x in inputs]
    args = []
    for i, c in enumerate(cand):
        shape = [alphas.size] + [1] * n
        shape[i + 1] = c.shape[1]
        args.append(c.reshape(shape))
    try:
        with np.errstate(divide="raise", invalid="raise", over="raise"):
            vals = np.asarray(f(*args), dtype=float)
        vals = np.broadcast_to(vals, np.broadcast_shapes(*(a.shape for a in args)))
    except Exception as exc:
        raise PropagationError(f"function evaluation failed: {exc}") from exc
    vals = vals.reshape(alphas.size, -1)
    if not np.all(np.isfinite(vals)):
        raise PropagationError("function produced non-finite values on the alpha boxes")
    lo = vals.min(axis=1)
    hi = vals.max(axis=1)
    # cuts are nested, so the true bounds are monotone in alpha
    lo = np.minimum.accumulate(lo[::-1])[::-1]
    hi = np.maximum.accumulate(hi[::-1])[::-1]
    return alphas, lo, hi


def propagate(f, inputs, alpha_grid=None, dense=False, dense_points=33, unit=""):
    """Extension-principle image of ``inputs`` under ``f`` as a membership curve."""
    if alpha_grid is None:
        alpha_grid = uniform_alphas(DEFAULT_ALPHA_LEVELS)
    alphas, lo, hi = propagate_cuts(f, inputs, alpha_grid, dense=dense, dense_points=dense_points)
    return MembershipCurve.from_cuts(alphas, lo, hi, unit)


def defuzzify_centroid(x: TFN) -> float:
    """Centroid of a triangular membership function.

    ``(c^2 + bc - a^2 - ab) / (3 (c - a))``, which reduces to the crisp value
    when ``a == c``.
    """
    a, b, c = x.a, x.b, x.c
    if c == a:
        return b
    return (c * c + b * c - a * a - a * b) / (3.0 * (c - a))


def defuzzify_curve(m: MembershipCurve) -> float:
    """Centroid ``int x mu dx / int mu dx`` of a polyline membership curve.

    Integrals are exact for the piecewise-linear ``mu``.
    """
    x0, x1 = m.x[:-1], m.x[1:]
    m0, m1 = m.mu[:-1], m.mu[1:]
    h = x1 - x0
    area = np.sum(h * (m0 + m1)) / 2.0
    if not area > 0:
        raise ZeroDivisionError("membership curve encloses zero area")
    moment = np.sum(h * (x0 * (2.0 * m0 + m1) + x1 * (m0 + 2.0 * m1))) / 6.0
    return float(moment / area)
