"""
Euler numbers of surface- and orbifold-group actions on the circle.

Sign convention: eu is the integer t for which the lifted relator
[A1,B1]...[Ag,Bg] is translation by -t.  The pants sum below is oriented to
agree with it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .circle_maps import (
    CircleHomeo, LiftedHomeo, Rotation, canonical_lift, flip, fold_word, free_reduce,
    homeo_from_json, homeo_to_json, invert_letter, invert_word, is_identity_map,
    letter_base, parse_word, sample_grid, word_str,
)
from .presentations import OrbifoldSignature, lcm, orbifold_presentation
from .rotation import (
    DEFAULT_ITERS, CertifiedInterval, exact_rotation_number_finite_order, lifted_cocycle,
)

MAX_ITERS = 1_000_000
RELATOR_GRID = 64


class InvalidRepresentation(ValueError):
    pass


class PrecisionError(ArithmeticError):
    """A quantity that must be an integer could not be isolated."""


class CrossValidationError(AssertionError):
    pass


# ---------------------------------------------------------------- representations

@dataclass(eq=False)
class OrbifoldRep:
    """Images of the standard generators of a (g; m_1..m_r) group."""

    signature: OrbifoldSignature
    images: dict
    tol: float = 1e-9
    id: str = "rep"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        missing = set(self.signature.generators) - set(self.images)
        if missing:
            raise InvalidRepresentation(f"missing generator images {sorted(missing)}")

    @property
    def genus(self) -> int:
        return self.signature.genus

    @property
    def generators(self) -> list[str]:
        return self.signature.generators

    def word(self, w) -> CircleHomeo:
        return evaluate_word(self, w)

    def lifted_word(self, w, lifts: Mapping[str, LiftedHomeo]) -> LiftedHomeo:
        return lift_word(lifts, parse_word(w))

    def relator_residuals(self) -> dict[str, float]:
        """Sup-distance from the identity of each relator on the check grid."""
        out = {}
        x = sample_grid(RELATOR_GRID)
        for r in orbifold_presentation(self.signature).relators:
            d = np.asarray(self.word(r).lift(x)) - x
            d = d - np.round(d)
            out[word_str(r)] = float(np.max(np.abs(d)))
        return out

    def validate(self) -> "OrbifoldRep":
        for r, res in self.relator_residuals().items():
            if res > self.tol:
                raise InvalidRepresentation(f"relator {r!r} is off the identity by {res:.3g}")
        return self

    def map_images(self, fn) -> "OrbifoldRep":
        new = {k: fn(v) for k, v in self.images.items()}
        return type(self)._like(self, new)

    @staticmethod
    def _like(rep, images):
        return OrbifoldRep(rep.signature, images, rep.tol, rep.id, dict(rep.meta))

    def to_json(self) -> dict:
        kind = "surface" if not self.signature.periods else "orbifold"
        return {"schema": "1", "kind": kind, "id": self.id, "signature": self.signature.to_json(),
                "tol": self.tol, "generators": {k: homeo_to_json(self.images[k]) for k in self.generators},
                "meta": self.meta}


@dataclass(eq=False)
class SurfaceGroupRep(OrbifoldRep):
    def __post_init__(self):
        if self.signature.periods or self.signature.genus < 2:
            raise InvalidRepresentation("surface group needs signature (g; -) with g >= 2")
        super().__post_init__()

    @classmethod
    def of_genus(cls, genus: int, images: dict, tol: float = 1e-9, id: str = "rep", meta=None):
        return cls(OrbifoldSignature(genus), images, tol, id, meta or {})

    @staticmethod
    def _like(rep, images):
        return SurfaceGroupRep(rep.signature, images, rep.tol, rep.id, dict(rep.meta))

    @property
    def relator(self) -> tuple[str, ...]:
        return self.signature.long_relator


def rep_from_json(obj: dict, reps: Mapping[str, object] | None = None) -> OrbifoldRep:
    """Decode a representation; word-valued images are resolved against ``reps``."""
    sig = OrbifoldSignature.from_json(obj["signature"])
    cls = SurfaceGroupRep if not sig.periods else OrbifoldRep
    images = {g: homeo_from_json(obj["generators"][g], reps) for g in sig.generators}
    return cls(sig, images, float(obj.get("tol", 1e-9)), obj.get("id", "rep"), dict(obj.get("meta", {})))


def evaluate_word(rep: OrbifoldRep, word) -> CircleHomeo:
    """Left-to-right fold of generator images; '' is the identity."""
    w = parse_word(word)
    for x in w:
        if letter_base(x) not in rep.images:
            raise KeyError(f"unknown generator symbol {x!r}")
    return fold_word(rep.images, w)


def lift_word(lifts: Mapping[str, LiftedHomeo], w: Sequence[str]) -> LiftedHomeo:
    out = LiftedHomeo(Rotation(Fraction(0)))
    inv: dict[str, LiftedHomeo] = {}
    for x in w:
        base = letter_base(x)
        if x == base:
            out = out.compose(lifts[base])
        else:
            if base not in inv:
                inv[base] = lifts[base].inverse()
            out = out.compose(inv[base])
    return out


def conjugate_rep(rep: OrbifoldRep, h: CircleHomeo) -> OrbifoldRep:
    from .circle_maps import conjugate
    return rep.map_images(lambda f: conjugate(h, f))


def flip_rep(rep: OrbifoldRep) -> OrbifoldRep:
    return rep.map_images(flip)


# ---------------------------------------------------------------- Euler numbers

@dataclass(frozen=True)
class EulerNumber:
    value: CertifiedInterval
    isolated: Fraction | None
    method: str = ""
    iters: int | None = None

    @property
    def integer(self) -> int:
        if self.isolated is None or self.isolated.denominator != 1:
            raise PrecisionError(f"Euler number not isolated as an integer: {self.value}")
        return int(self.isolated)

    def to_json(self) -> dict:
        out = {"method": self.method, "interval": self.value.to_json()}
        if self.isolated is not None:
            out["value"] = str(self.isolated)
        if self.iters is not None:
            out["iters"] = self.iters
        return out


def relator_translation(rep: OrbifoldRep, lifts: Mapping[str, LiftedHomeo], tol: float | None = None) -> int:
    """Integer T with lifted long relator = translation by T."""
    R = lift_word(lifts, rep.signature.long_relator)
    x = sample_grid(RELATOR_GRID)
    d = np.asarray(R(x)) - x
    if not np.all(np.isfinite(d)):
        raise PrecisionError("relator lift is not finite")
    off = float(np.max(np.abs(d - np.round(d))))
    if off > rep.tol:
        raise InvalidRepresentation(f"relator does not act as the identity (off by {off:.3g})")
    ts = np.unique(np.round(d))
    tol = max(rep.tol, 1e-6) if tol is None else tol
    if len(ts) != 1 or off > tol:
        raise PrecisionError(f"relator lift is not a translation by an integer: {d.min()!r}..{d.max()!r}")
    return int(ts[0])


def euler_relator(rep: SurfaceGroupRep, n: int = DEFAULT_ITERS) -> EulerNumber:
    """eu from the lifted surface relator (any lifts; the result is lift-independent)."""
    lifts = {g: canonical_lift(rep.images[g]) for g in rep.generators}
    t = relator_translation(rep, lifts)
    eu = -t
    _milnor_wood_guard(eu, rep.genus)
    return EulerNumber(CertifiedInterval.exactly(eu), Fraction(eu), "relator", n)


def _milnor_wood_guard(eu, g):
    if abs(eu) > 2 * g - 2:
        raise CrossValidationError(f"|eu| = {abs(eu)} exceeds 2g-2 = {2 * g - 2}")


@dataclass(frozen=True)
class PantsDecomposition:
    """Triples (x, y, z) of words with xyz = 1; eu(P) = tau(x, y)."""

    genus: int
    triples: tuple

    def __post_init__(self):
        triples = tuple(tuple(parse_word(w) for w in t) for t in self.triples)
        object.__setattr__(self, "triples", triples)
        if len(triples) != 2 * self.genus - 2:
            raise ValueError(f"need {2 * self.genus - 2} pants, got {len(triples)}")
        for t in triples:
            if len(t) != 3:
                raise ValueError("each pants is a triple of words")

    def check(self, rep: OrbifoldRep, tol: float | None = None) -> None:
        tol = rep.tol if tol is None else tol
        for x, y, z in self.triples:
            if free_reduce(x + y + z) == ():
                continue
            if not is_identity_map(rep.word(x + y + z), max(tol, 1e-9)):
                raise InvalidRepresentation(f"pants ({word_str(x)}, {word_str(y)}, {word_str(z)}) is not a relation")

    def to_json(self) -> dict:
        return {"genus": self.genus, "triples": [[word_str(w) for w in t] for t in self.triples]}

    @classmethod
    def from_json(cls, obj: dict) -> "PantsDecomposition":
        return cls(int(obj["genus"]), tuple(tuple(t) for t in obj["triples"]))

    def cyclically_permuted(self, k: int = 1) -> "PantsDecomposition":
        return PantsDecomposition(self.genus, tuple(t[k % 3:] + t[:k % 3] for t in self.triples))


def _commutator(i: int) -> tuple[str, ...]:
    a, b = f"a{i}", f"b{i}"
    return (a, b, invert_letter(a), invert_letter(b))


def canonical_pants(genus: int) -> PantsDecomposition:
    """Chain decomposition: a pants inside each one-holed torus, joined along
    the separating curves c_i = [a1,b1]...[ai,bi]."""
    if genus < 2:
        raise ValueError("genus >= 2")
    triples = []
    for i in range(1, genus + 1):
        a, b = f"a{i}", f"b{i}"
        A, B = invert_letter(a), invert_letter(b)
        triples.append((_commutator(i), (b, a, B), (A,)))
    c = _commutator(1)
    for i in range(2, genus):
        ci = c + _commutator(i)
        triples.append((ci, invert_word(_commutator(i)), invert_word(c)))
        c = ci
    return PantsDecomposition(genus, tuple(triples))


def pants_contributions(rep: OrbifoldRep, pants: PantsDecomposition, n: int) -> list[CertifiedInterval]:
    lift_cache: dict = {}

    def lifted(w):
        if w not in lift_cache:
            lift_cache[w] = canonical_lift(rep.word(w))
        return lift_cache[w]

    return [lifted_cocycle(lifted(x), lifted(y), n).value for x, y, _ in pants.triples]


def euler_pants(rep: SurfaceGroupRep, pants: PantsDecomposition | None = None, n: int = DEFAULT_ITERS,
                max_iters: int = MAX_ITERS, cross_check: bool = True) -> EulerNumber:
    """Sum of tau over pants; n escalates x10 until a unique integer is isolated."""
    pants = pants or canonical_pants(rep.genus)
    if pants.genus != rep.genus:
        raise ValueError("pants decomposition is for a different genus")
    pants.check(rep)
    while True:
        parts = pants_contributions(rep, pants, n)
        total = CertifiedInterval.exactly(0)
        for p in parts:
            total = total + p
        k = total.isolated_integer()
        if k is not None:
            break
        if n * 10 > max_iters:
            raise PrecisionError(f"pants sum {total} isolates no unique integer at n = {n}")
        n *= 10
    _milnor_wood_guard(k, rep.genus)
    eu = EulerNumber(total, Fraction(k), "pants", n)
    if cross_check:
        other = euler_relator(rep, n)
        if other.integer != k:
            raise CrossValidationError(f"pants sum {k} != relator value {other.integer}")
    return eu


def euler_orbifold(rep: OrbifoldRep, n: int = DEFAULT_ITERS) -> EulerNumber:
    """eu = m + sum rot(q_i): cone generators lifted canonically, the lifted
    long relator being translation by -m."""
    sig = rep.signature
    lifts = {g: canonical_lift(rep.images[g]) for g in rep.generators}
    m = -relator_translation(rep, lifts)
    rots = []
    for q, order in zip(sig.cone_names, sig.periods):
        r = exact_rotation_number_finite_order(rep.images[q], order)
        if order % r.denominator:
            raise InvalidRepresentation(f"{q} has order {r.denominator} not dividing {order}")
        rots.append(r)
    eu = Fraction(m) + sum(rots, Fraction(0))
    if sig.periods and lcm(sig.periods) % eu.denominator:
        raise PrecisionError(f"denominator of {eu} does not divide lcm{sig.periods}")
    return EulerNumber(CertifiedInterval.exactly(eu), eu, "orbifold", n)


def check_milnor_wood(e: EulerNumber | int | Fraction, g: int) -> bool:
    val = e.isolated if isinstance(e, EulerNumber) else Fraction(e)
    return abs(val) <= 2 * g - 2


def check_multiplicativity(orb_eu: EulerNumber | Fraction, k: int, surface_eu: EulerNumber | int) -> bool:
    """k * eu(orbifold) = +-eu(surface), exactly."""
    a = orb_eu.isolated if isinstance(orb_eu, EulerNumber) else Fraction(orb_eu)
    b = surface_eu.isolated if isinstance(surface_eu, EulerNumber) else Fraction(surface_eu)
    return abs(k * a) == abs(b)


def rotation_rep(genus: int, angles: Sequence, id: str = "abelian") -> SurfaceGroupRep:
    """Abelian representation by rigid rotations."""
    gens = OrbifoldSignature(genus).generators
    return SurfaceGroupRep.of_genus(genus, {g: Rotation(a) for g, a in zip(gens, angles)}, id=id)
