"""
Orientation-preserving circle homeomorphisms and their lifts to R.

Points of S^1 are stored in turns, t in [0, 1).  Moebius matrices act on the
boundary of the upper half-plane; the boundary R u {oo} is carried to the
circle by the Cayley transform z -> (z - i)/(z + i), so x = oo sits at t = 0
and x = 0 at t = 1/2.

Every CircleHomeo has a *raw lift* ``lift(x)``: a fixed, continuous map
R -> R with lift(x + 1) = lift(x) + 1.  LiftedHomeo adds an integer offset.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

DET_TOL = 1e-12
TRACE_BAND = 1e-9
ELLIPTIC, PARABOLIC, HYPERBOLIC, IDENTITY = "elliptic", "parabolic", "hyperbolic", "identity"


class CircleMapError(ValueError):
    pass


class IllConditionedError(CircleMapError):
    pass


class CompositionDomainError(CircleMapError):
    pass


class NoFixedPointError(CircleMapError):
    pass


def normalize_turn(t):
    """Reduce a turn coordinate into [0, 1)."""
    r = t % 1
    if isinstance(r, np.ndarray):
        r[r >= 1.0] = 0.0
        return r
    return 0.0 if r >= 1.0 else r


# ---------------------------------------------------------------- Cayley chart

def boundary_to_turn(x) -> float:
    """Point of R u {oo} (use math.inf for oo) -> turn coordinate."""
    if math.isinf(x):
        return 0.0
    w = (x - 1j) / (x + 1j)
    return normalize_turn(cmath.phase(w) / (2 * math.pi))


def turn_to_boundary(t: float) -> float:
    t = normalize_turn(t)
    if t == 0.0:
        return math.inf
    return -1.0 / math.tan(math.pi * t)


# ---------------------------------------------------------------- Moebius

@dataclass(frozen=True)
class MoebiusTransform:
    """Element of PSL(2, R) stored with det 1 and the first nonzero entry of
    the top row positive."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        a, b, c, d = (float(v) for v in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        if not det > DET_TOL:
            raise CircleMapError(f"Moebius matrix needs positive determinant, got {det!r}")
        s = 1.0 / math.sqrt(det)
        lead = a if abs(a) > 1e-12 else b
        if lead < 0:
            s = -s
        for name, v in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, v * s)

    @classmethod
    def from_array(cls, m) -> "MoebiusTransform":
        m = np.asarray(m, dtype=float).reshape(2, 2)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def identity(cls) -> "MoebiusTransform":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_disk(cls, alpha: complex, beta: complex) -> "MoebiusTransform":
        """Inverse of :meth:`disk`; SU(1,1) coefficients up to a common scalar."""
        a = (alpha + beta).real
        d = (alpha - beta).real
        b = (alpha - beta).imag
        c = -(alpha + beta).imag
        return cls(a, b, c, d)

    @property
    def array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def trace(self) -> float:
        return self.a + self.d

    def disk(self) -> tuple[complex, complex]:
        """(alpha, beta) with w -> (alpha w + beta)/(conj(beta) w + conj(alpha))."""
        a, b, c, d = self.a, self.b, self.c, self.d
        return complex(a + d, b - c) / 2, complex(a - d, -(b + c)) / 2

    def __matmul__(self, other: "MoebiusTransform") -> "MoebiusTransform":
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return MoebiusTransform(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "MoebiusTransform":
        return MoebiusTransform(self.d, -self.b, -self.c, self.a)

    def power(self, n: int) -> "MoebiusTransform":
        if n < 0:
            return self.inverse().power(-n)
        return MoebiusTransform.from_array(np.linalg.matrix_power(self.array, n))

    def is_identity(self, tol: float = 1e-9) -> bool:
        return max(abs(self.a - 1), abs(self.b), abs(self.c), abs(self.d - 1)) < tol

    def close_to(self, other: "MoebiusTransform", tol: float = 1e-9) -> bool:
        return float(np.max(np.abs(self.array - other.array))) < tol

    def __call__(self, z):
        """Action on the upper half-plane (or R u {oo})."""
        if isinstance(z, float) and math.isinf(z):
            return math.inf if self.c == 0 else self.a / self.c
        den = self.c * z + self.d
        if den == 0:
            return math.inf
        return (self.a * z + self.b) / den


def classify_moebius(m: MoebiusTransform) -> str:
    tr = abs(m.trace)
    if abs(tr - 2) <= TRACE_BAND:
        return IDENTITY if m.is_identity() else PARABOLIC
    return ELLIPTIC if tr < 2 else HYPERBOLIC


@dataclass(frozen=True)
class FixedPoint:
    turn: float
    stability: str  # "attracting" | "repelling" | "neutral"


def fixed_points(m: MoebiusTransform) -> list[FixedPoint]:
    """Boundary fixed points, solved in the disk model.

    With w -> (alpha w + beta)/(conj(beta) w + conj(alpha)) the fixed points
    solve conj(beta) w^2 + (conj(alpha) - alpha) w - beta = 0, and a fixed
    point on |w| = 1 attracts iff |conj(beta) w + conj(alpha)| > 1.
    """
    kind = classify_moebius(m)
    if kind in (ELLIPTIC, IDENTITY):
        raise NoFixedPointError(f"{kind} transform has no isolated boundary fixed point")
    alpha, beta = m.disk()
    if kind == PARABOLIC:
        w = (alpha - alpha.conjugate()) / (2 * beta.conjugate())
        return [FixedPoint(normalize_turn(cmath.phase(w) / (2 * math.pi)), "neutral")]
    A, B, C = beta.conjugate(), alpha.conjugate() - alpha, -beta
    disc = cmath.sqrt(B * B - 4 * A * C)
    out = []
    for w in ((-B + disc) / (2 * A), (-B - disc) / (2 * A)):
        w = w / abs(w)
        deriv = 1.0 / abs(beta.conjugate() * w + alpha.conjugate()) ** 2
        out.append(FixedPoint(normalize_turn(cmath.phase(w) / (2 * math.pi)),
                              "attracting" if deriv < 1 else "repelling"))
    out.sort(key=lambda p: p.stability)
    return out


# ---------------------------------------------------------------- circle maps

class CircleHomeo:
    """Base class.  Subclasses implement ``lift`` (vectorised) and ``inverse``."""

    def lift(self, x):
        raise NotImplementedError

    def inverse(self) -> "CircleHomeo":
        raise NotImplementedError

    def resolved(self) -> "CircleHomeo":
        return self

    def __call__(self, p):
        y = self.lift(p)
        if isinstance(y, np.ndarray):
            if not np.all(np.isfinite(y)):
                raise IllConditionedError("non-finite image")
        elif not math.isfinite(y):
            raise IllConditionedError("non-finite image")
        return normalize_turn(y)

    def __mul__(self, other: "CircleHomeo") -> "CircleHomeo":
        return compose(self, other)


@dataclass(frozen=True, eq=False)
class Moebius(CircleHomeo):
    m: MoebiusTransform
    _coef: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        alpha, beta = self.m.disk()
        object.__setattr__(self, "_coef", (2 * cmath.phase(alpha) / (2 * math.pi), beta / alpha))

    def lift(self, x):
        shift, ratio = self._coef
        if isinstance(x, np.ndarray):
            return x + shift + np.angle(1 + ratio * np.exp(-2j * np.pi * x)) / np.pi
        return x + shift + cmath.phase(1 + ratio * cmath.exp(-2j * math.pi * x)) / math.pi

    def inverse(self):
        return Moebius(self.m.inverse())

    def __eq__(self, other):
        return isinstance(other, Moebius) and self.m.close_to(other.m, 1e-12)

    __hash__ = object.__hash__


@dataclass(frozen=True)
class Rotation(CircleHomeo):
    """Rigid rotation; ``angle`` in turns, kept in [0, 1) (Fraction or float)."""

    angle: Fraction | float

    def __post_init__(self):
        a = self.angle
        if isinstance(a, int):
            a = Fraction(a)
        object.__setattr__(self, "angle", a % 1 if isinstance(a, Fraction) else normalize_turn(float(a)))

    def lift(self, x):
        return x + float(self.angle)

    def inverse(self):
        return Rotation(-self.angle)


@dataclass(frozen=True, eq=False)
class PiecewiseLinear(CircleHomeo):
    """Degree-one PL map given by lift points (x_i, y_i), x_i in [0, 1) increasing,
    y_i increasing with y_last < y_0 + 1; extended by F(x + 1) = F(x) + 1."""

    breaks: tuple
    _xs: np.ndarray = field(init=False, repr=False)
    _ys: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        pts = np.asarray(self.breaks, dtype=float).reshape(-1, 2)
        if len(pts) == 0:
            raise CircleMapError("PL map needs at least one breakpoint")
        xs, ys = pts[:, 0], pts[:, 1]
        if xs[0] < 0 or xs[-1] >= 1:
            raise CircleMapError("PL breakpoints must lie in [0, 1)")
        if np.any(np.diff(xs) <= 0) or np.any(np.diff(ys) <= 0) or ys[-1] >= ys[0] + 1:
            raise CircleMapError("PL breakpoints and images must be strictly increasing (degree 1)")
        object.__setattr__(self, "breaks", tuple(map(tuple, pts.tolist())))
        object.__setattr__(self, "_xs", np.append(xs, xs[0] + 1))
        object.__setattr__(self, "_ys", np.append(ys, ys[0] + 1))

    @classmethod
    def from_lift_points(cls, xs, ys) -> "PiecewiseLinear":
        """Normalise arbitrary samples (x, F(x)) of a lift into canonical breaks."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        k = np.floor(xs)
        xs, ys = xs - k, ys - k
        order = np.argsort(xs, kind="stable")
        return cls(tuple(zip(xs[order].tolist(), ys[order].tolist())))

    def lift(self, x):
        x0 = self._xs[0]
        k = np.floor(np.asarray(x) - x0)
        y = np.interp(np.asarray(x) - k, self._xs, self._ys) + k
        return y if isinstance(x, np.ndarray) else float(y)

    def inverse(self):
        # swapping coordinates inverts a PL lift exactly
        return PiecewiseLinear.from_lift_points(self._ys[:-1], self._xs[:-1])

    def __eq__(self, other):
        return isinstance(other, PiecewiseLinear) and np.allclose(self._xs, other._xs) and np.allclose(self._ys, other._ys)

    __hash__ = object.__hash__


@dataclass(frozen=True)
class Composite(CircleHomeo):
    """Lazy composition; factors apply right to left."""

    factors: tuple

    def lift(self, x):
        for f in reversed(self.factors):
            x = f.lift(x)
        return x

    def inverse(self):
        return Composite(tuple(f.inverse() for f in reversed(self.factors)))


# ---------------------------------------------------------------- words

def parse_word(word: str | Sequence[str]) -> tuple[str, ...]:
    """'a1 B1 a2' -> ('a1', 'B1', 'a2').  A capitalised token is an inverse."""
    if isinstance(word, str):
        return tuple(word.split())
    return tuple(word)


def invert_letter(x: str) -> str:
    return x[0].swapcase() + x[1:]


def invert_word(w: Sequence[str]) -> tuple[str, ...]:
    return tuple(invert_letter(x) for x in reversed(w))


def free_reduce(w: Sequence[str]) -> tuple[str, ...]:
    out: list[str] = []
    for x in w:
        if out and out[-1] == invert_letter(x):
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def word_str(w: Sequence[str]) -> str:
    return " ".join(w)


def letter_base(x: str) -> str:
    return x[0].lower() + x[1:]


def fold_word(images: Mapping[str, CircleHomeo], w: Sequence[str]) -> CircleHomeo:
    """Product of generator images, folded left to right."""
    out: CircleHomeo = Rotation(Fraction(0))
    inverses: dict[str, CircleHomeo] = {}
    for x in w:
        base = letter_base(x)
        if base not in images:
            raise KeyError(f"unknown generator {x!r}")
        if x == base:
            g = images[base]
        else:
            if base not in inverses:
                inverses[base] = images[base].inverse()
            g = inverses[base]
        out = compose(out, g)
    return out


@dataclass(frozen=True, eq=False)
class Word(CircleHomeo):
    """Word in the generators of a representation ``rep`` (anything exposing
    ``images``, or a plain name -> map table), evaluated lazily by folding
    generator images."""

    rep: object
    word: tuple

    def __post_init__(self):
        object.__setattr__(self, "word", parse_word(self.word))

    def resolved(self) -> CircleHomeo:
        cache = self.__dict__.get("_resolved")
        if cache is None:
            images = self.rep.images if hasattr(self.rep, "images") else self.rep
            cache = fold_word(images, self.word).resolved()
            object.__setattr__(self, "_resolved", cache)
        return cache

    def lift(self, x):
        return self.resolved().lift(x)

    def inverse(self):
        return Word(self.rep, invert_word(self.word))


# ---------------------------------------------------------------- group operations

def compose(f: CircleHomeo, g: CircleHomeo) -> CircleHomeo:
    """f o g.  Moebius and rotation products stay closed-form."""
    if isinstance(f, Word) and isinstance(g, Word):
        if f.rep is not g.rep:
            raise CompositionDomainError("words over different representations")
        return Word(f.rep, free_reduce(f.word + g.word))
    f, g = f.resolved(), g.resolved()
    if isinstance(f, Rotation) and f.angle == 0:
        return g
    if isinstance(g, Rotation) and g.angle == 0:
        return f
    if isinstance(f, Moebius) and isinstance(g, Moebius):
        return Moebius(f.m @ g.m)
    if isinstance(f, Rotation) and isinstance(g, Rotation):
        return Rotation(f.angle + g.angle)
    ff = f.factors if isinstance(f, Composite) else (f,)
    gg = g.factors if isinstance(g, Composite) else (g,)
    return Composite(ff + gg)


def inverse(f: CircleHomeo) -> CircleHomeo:
    return f.inverse()


def power(f: CircleHomeo, n: int) -> CircleHomeo:
    if n < 0:
        return power(f.inverse(), -n)
    f = f.resolved()
    if isinstance(f, Moebius):
        return Moebius(f.m.power(n))
    if isinstance(f, Rotation):
        return Rotation(f.angle * n)
    out: CircleHomeo = Rotation(Fraction(0))
    for _ in range(n):
        out = compose(out, f)
    return out


def conjugate(h: CircleHomeo, f: CircleHomeo) -> CircleHomeo:
    """h f h^-1."""
    return compose(compose(h, f), h.inverse())


def flip(f: CircleHomeo) -> CircleHomeo:
    """Conjugate by the orientation-reversing involution t -> -t."""
    f = f.resolved()
    if isinstance(f, Moebius):
        m = f.m
        return Moebius(MoebiusTransform(m.a, -m.b, -m.c, m.d))
    if isinstance(f, Rotation):
        return Rotation(-f.angle)
    if isinstance(f, PiecewiseLinear):
        return PiecewiseLinear.from_lift_points(-f._xs[:-1], -f._ys[:-1])
    if isinstance(f, Composite):
        return Composite(tuple(flip(g) for g in f.factors))
    raise CircleMapError(f"cannot flip {type(f).__name__}")


# ---------------------------------------------------------------- lifts

def _integer_gap(value: float) -> int:
    k = round(value)
    if abs(value - k) > 1e-6:
        raise IllConditionedError(f"lift bookkeeping drifted: {value!r} is not an integer")
    return int(k)


@dataclass(frozen=True)
class LiftedHomeo:
    """Element of Homeo^Z(R): F(x) = base.lift(x) + offset."""

    base: CircleHomeo
    offset: int = 0

    def __call__(self, x):
        return self.base.lift(x) + self.offset

    def shift(self, k: int) -> "LiftedHomeo":
        return LiftedHomeo(self.base, self.offset + k)

    def compose(self, other: "LiftedHomeo") -> "LiftedHomeo":
        h = compose(self.base, other.base)
        c = _integer_gap(self.base.lift(other.base.lift(0.0)) - h.lift(0.0))
        return LiftedHomeo(h, self.offset + other.offset + c)

    __matmul__ = compose

    def inverse(self) -> "LiftedHomeo":
        g = self.base.inverse()
        k = _integer_gap(g.lift(self.base.lift(0.0)))
        return LiftedHomeo(g, -k - self.offset)

    def power(self, n: int) -> "LiftedHomeo":
        if n < 0:
            return self.inverse().power(-n)
        result = LiftedHomeo(Rotation(Fraction(0)))
        sq = self
        while n:
            if n & 1:
                result = result.compose(sq)
            n >>= 1
            if n:
                sq = sq.compose(sq)
        return result


def canonical_lift(f: CircleHomeo) -> LiftedHomeo:
    """The lift with F(0) in [0, 1)."""
    return LiftedHomeo(f, -math.floor(f.lift(0.0)))


def sample_grid(n: int = 64) -> np.ndarray:
    return np.arange(n) / n


def maps_agree(f: CircleHomeo, g: CircleHomeo, tol: float = 1e-10, n: int = 64) -> bool:
    """Agreement as circle maps on an n-point grid (distance measured mod 1)."""
    x = sample_grid(n)
    d = np.asarray(f.lift(x)) - np.asarray(g.lift(x))
    d = d - np.round(d)
    return bool(np.max(np.abs(d)) < tol)


def is_identity_map(f: CircleHomeo, tol: float = 1e-9, n: int = 64) -> bool:
    return maps_agree(f, Rotation(Fraction(0)), tol, n)


# ---------------------------------------------------------------- JSON

def _angle_json(a):
    return f"{a.numerator}/{a.denominator}" if isinstance(a, Fraction) else float(a)


def homeo_to_json(f: CircleHomeo) -> dict:
    if isinstance(f, Moebius):
        return {"type": "moebius", "m": [f.m.a, f.m.b, f.m.c, f.m.d]}
    if isinstance(f, Rotation):
        return {"type": "rotation", "angle": _angle_json(f.angle)}
    if isinstance(f, PiecewiseLinear):
        return {"type": "pl", "breaks": [list(p) for p in f.breaks]}
    if isinstance(f, Word):
        if not hasattr(f.rep, "id"):
            return homeo_to_json(f.resolved())
        return {"type": "word", "rep": f.rep.id, "word": word_str(f.word)}
    if isinstance(f, Composite):
        return {"type": "composite", "factors": [homeo_to_json(g) for g in f.factors]}
    raise CircleMapError(f"no JSON encoding for {type(f).__name__}")


def homeo_from_json(obj: dict, reps: Mapping[str, object] | None = None) -> CircleHomeo:
    kind = obj.get("type")
    if kind == "moebius":
        return Moebius(MoebiusTransform(*obj["m"]))
    if kind == "rotation":
        a = obj["angle"]
        return Rotation(Fraction(a) if isinstance(a, (str, int)) else float(a))
    if kind == "pl":
        return PiecewiseLinear(tuple(tuple(p) for p in obj["breaks"]))
    if kind == "word":
        if not reps or obj["rep"] not in reps:
            raise CircleMapError(f"word refers to unknown representation {obj.get('rep')!r}")
        return Word(reps[obj["rep"]], obj["word"])
    if kind == "composite":
        return Composite(tuple(homeo_from_json(o, reps) for o in obj["factors"]))
    raise CircleMapError(f"unknown circle map type {kind!r}")
