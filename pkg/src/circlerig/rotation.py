"""
Certified translation and rotation numbers, and the translation cocycle.

For F in Homeo^Z(R), |F^k(x) - x - k*rot~(F)| < 1 for every k, so each iterate
F^k(0) gives the enclosure [(F^k(0) - 1)/k, (F^k(0) + 1)/k].  Intersecting the
enclosures of all intermediate iterates keeps the width below 2/n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circle_maps import (
    ELLIPTIC, IDENTITY, CircleHomeo, LiftedHomeo, Moebius, Rotation, canonical_lift,
    classify_moebius, compose, fixed_points, is_identity_map, power,
)

DEFAULT_ITERS = 10_000
FINITE_ORDER_TOL = 1e-9
FIXED_POINT_GRID = 1024


class CocycleBoundError(ArithmeticError):
    """A cocycle enclosure missed [-1, 1]: evaluation is broken somewhere."""


class NotFiniteOrder(ValueError):
    pass


@dataclass(frozen=True)
class CertifiedInterval:
    lo: float
    hi: float
    exact: bool = False
    rational: Fraction | None = None

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exactly(cls, q) -> "CertifiedInterval":
        q = Fraction(q)
        return cls(float(q), float(q), True, q)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return float(self.rational) if self.exact else 0.5 * (self.lo + self.hi)

    def contains(self, x, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def __add__(self, other: "CertifiedInterval") -> "CertifiedInterval":
        if self.exact and other.exact:
            return CertifiedInterval.exactly(self.rational + other.rational)
        return CertifiedInterval(self.lo + other.lo, self.hi + other.hi)

    def __neg__(self) -> "CertifiedInterval":
        if self.exact:
            return CertifiedInterval.exactly(-self.rational)
        return CertifiedInterval(-self.hi, -self.lo)

    def __sub__(self, other: "CertifiedInterval") -> "CertifiedInterval":
        return self + (-other)

    def scale(self, k: int) -> "CertifiedInterval":
        if self.exact:
            return CertifiedInterval.exactly(self.rational * k)
        lo, hi = self.lo * k, self.hi * k
        return CertifiedInterval(min(lo, hi), max(lo, hi))

    def shift(self, k) -> "CertifiedInterval":
        if self.exact:
            return CertifiedInterval.exactly(self.rational + k)
        return CertifiedInterval(self.lo + k, self.hi + k)

    def integers(self) -> list[int]:
        if self.exact:
            return [int(self.rational)] if self.rational.denominator == 1 else []
        return list(range(math.ceil(self.lo), math.floor(self.hi) + 1))

    def isolated_integer(self) -> int | None:
        ints = self.integers()
        return ints[0] if len(ints) == 1 else None

    def mod1(self) -> "CertifiedInterval":
        """Shift so that lo lies in [0, 1)."""
        if self.exact:
            return CertifiedInterval.exactly(self.rational % 1)
        return self.shift(-math.floor(self.lo))

    def to_json(self) -> dict:
        out = {"lo": self.lo, "hi": self.hi, "exact": self.exact}
        if self.rational is not None:
            out["rational"] = f"{self.rational.numerator}/{self.rational.denominator}"
        return out


def overlap_mod1(u: CertifiedInterval, v: CertifiedInterval, slack: float = 0.0) -> bool:
    """Do the images of u and v in R/Z intersect?"""
    a, b = u.mod1(), v.mod1()
    for k in (-1, 0, 1):
        if a.lo - slack <= b.hi + k and b.lo + k <= a.hi + slack:
            return True
    return False


def _intersect_bounds(lower: float, upper: float, value: float, k: int) -> tuple[float, float]:
    return max(lower, (value - 1) / k), min(upper, (value + 1) / k)


def fixed_point_translation(F: LiftedHomeo, grid: int = FIXED_POINT_GRID) -> int | None:
    """Integer k with F(x) = x + k solvable, i.e. rot~(F) = k exactly; None if none seen.

    Moebius maps are decided from their classification; other maps by a sign
    change of F(x) - x - k on a grid, confirmed by bisection.
    """
    base = F.base.resolved()
    if isinstance(base, Moebius):
        kind = classify_moebius(base.m)
        if kind == ELLIPTIC:
            return None
        if kind == IDENTITY:
            return round(F(0.0))
        p = fixed_points(base.m)[0].turn
        return round(F(p) - p)
    if isinstance(base, Rotation):
        return round(F(0.0)) if base.angle == 0 else None
    x = np.arange(grid) / grid
    d = np.asarray(F(x)) - x
    lo, hi = float(d.min()), float(d.max())
    k = math.floor(hi + 1e-13)
    if k < lo - 1e-13:
        return None
    if k <= lo + 1e-13 or k >= hi - 1e-13:
        return k
    # lo < k < hi: bisect on the sign change of d - k
    s = d - k
    i = int(np.argmax(s < 0))
    j = (i + 1) % grid
    while s[j] < 0:
        i, j = j, (j + 1) % grid
    a, b = x[i], x[j] + (1.0 if j == 0 else 0.0)
    for _ in range(80):
        m = 0.5 * (a + b)
        if F(m) - m - k < 0:
            a = m
        else:
            b = m
        if b - a < 1e-12:
            break
    residual = F(0.5 * (a + b)) - 0.5 * (a + b) - k
    return k if abs(residual) < 1e-9 else None


def translation_number(F: LiftedHomeo, n: int = DEFAULT_ITERS, shortcut: bool = True) -> CertifiedInterval:
    """Enclosure of rot~(F) of width <= 2/n (exact when decidable)."""
    if n < 1:
        raise ValueError("need n >= 1")
    base = F.base.resolved()
    if isinstance(base, Rotation):
        return CertifiedInterval.exactly(base.angle + F.offset) if isinstance(base.angle, Fraction) \
            else _iterate(F, n)
    if shortcut:
        k = fixed_point_translation(F)
        if k is not None:
            return CertifiedInterval.exactly(k)
    return _iterate(F, n)


def _iterate(F: LiftedHomeo, n: int) -> CertifiedInterval:
    lower, upper = -math.inf, math.inf
    base = F.base.resolved()
    bounded = isinstance(base, Rotation) or (isinstance(base, Moebius) and classify_moebius(base.m) == ELLIPTIC)
    if bounded:
        # closed-form powers: F^(2^j) by squaring, then F^n (entries stay bounded
        # only for elliptic maps; hyperbolic powers would overflow)
        k, sq = 1, F
        while k <= n:
            lower, upper = _intersect_bounds(lower, upper, sq(0.0), k)
            sq = sq.compose(sq)
            k *= 2
        lower, upper = _intersect_bounds(lower, upper, F.power(n)(0.0), n)
    else:
        x = 0.0
        for k in range(1, n + 1):
            x = F(x)
            lower, upper = _intersect_bounds(lower, upper, x, k)
    if lower > upper:  # only rounding can do this
        lower = upper = 0.5 * (lower + upper)
    return CertifiedInterval(lower, upper)


def rotation_number(f: CircleHomeo, n: int = DEFAULT_ITERS) -> CertifiedInterval:
    """rot(f) in R/Z, reported with lo in [0, 1)."""
    return translation_number(canonical_lift(f), n).mod1()


def exact_rotation_number_finite_order(f: CircleHomeo, max_order: int) -> Fraction:
    """p/q for the least q <= max_order with f^q = id; raises NotFiniteOrder."""
    if max_order < 1:
        raise ValueError("max_order >= 1")
    F = canonical_lift(f)
    base = f.resolved()
    for q in range(1, max_order + 1):
        if isinstance(base, Moebius):
            mq = base.m.power(q)
            done = mq.is_identity(FINITE_ORDER_TOL)
        else:
            done = is_identity_map(power(base, q), FINITE_ORDER_TOL)
        if done:
            p = F.power(q)(0.0)
            return Fraction(round(p), q)
    raise NotFiniteOrder(f"no q <= {max_order} with f^q = id")


@dataclass(frozen=True)
class CocycleValue:
    value: CertifiedInterval

    def __post_init__(self):
        v = self.value
        if v.hi < -1 or v.lo > 1:
            raise CocycleBoundError(f"cocycle enclosure [{v.lo}, {v.hi}] misses [-1, 1]")


def lifted_cocycle(F: LiftedHomeo, G: LiftedHomeo, n: int = DEFAULT_ITERS) -> CocycleValue:
    """rot~(FG) - rot~(F) - rot~(G) for given lifts."""
    fg = translation_number(F.compose(G), n)
    return CocycleValue(fg - translation_number(F, n) - translation_number(G, n))


def translation_cocycle(f: CircleHomeo, g: CircleHomeo, n: int = DEFAULT_ITERS) -> CocycleValue:
    return lifted_cocycle(canonical_lift(f), canonical_lift(g), n)
