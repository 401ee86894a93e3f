"""
Explicit cocompact Fuchsian groups and their boundary actions.

Constructions live in the Poincare disk, where isometries are SU(1,1)
matrices w -> (alpha w + beta)/(conj(beta) w + conj(alpha)), and are exported
as PSL(2, R) matrices through the Cayley transform.  Reflections are kept as
anti-holomorphic maps w -> N conj(w); a product of two reflections
r_i r_j has matrix N_i conj(N_j).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .circle_maps import (
    ELLIPTIC, HYPERBOLIC, IDENTITY, Moebius, MoebiusTransform, classify_moebius,
    invert_letter, letter_base, parse_word,
)
from .euler import OrbifoldRep, SurfaceGroupRep
from .presentations import (
    CoverError, FiniteGroupHom, OrbifoldSignature, SchreierData, orbifold_presentation,
    random_kernel_words, reidemeister_schreier, torsion_orders_certificate,
)

BISECT_TOL = 1e-14
VERIFY_TOL = 1e-9
NON_ELLIPTIC_SLACK = 1e-9


class ConstructionError(RuntimeError):
    pass


# ---------------------------------------------------------------- points and disk isometries

@dataclass(frozen=True)
class HyperbolicPoint:
    z: complex
    model: str = "disk"   # "disk" | "upper"

    def __post_init__(self):
        if self.model == "disk" and not abs(self.z) < 1:
            raise ValueError("disk point needs |z| < 1")
        if self.model == "upper" and not self.z.imag > 0:
            raise ValueError("upper half-plane point needs Im z > 0")
        if self.model not in ("disk", "upper"):
            raise ValueError(f"unknown model {self.model!r}")

    def to_disk(self) -> "HyperbolicPoint":
        if self.model == "disk":
            return self
        return HyperbolicPoint((self.z - 1j) / (self.z + 1j), "disk")

    def to_upper(self) -> "HyperbolicPoint":
        if self.model == "upper":
            return self
        w = self.z
        return HyperbolicPoint(1j * (1 + w) / (1 - w), "upper")

    def distance(self, other: "HyperbolicPoint") -> float:
        a, b = self.to_disk().z, other.to_disk().z
        return 2 * math.atanh(abs((a - b) / (1 - a.conjugate() * b)))


def _rot(theta: float) -> np.ndarray:
    return np.array([[np.exp(0.5j * theta), 0], [0, np.exp(-0.5j * theta)]])


def _trans(t: float) -> np.ndarray:
    """Translation along the real diameter by hyperbolic distance t."""
    return np.array([[math.cosh(t / 2), math.sinh(t / 2)], [math.sinh(t / 2), math.cosh(t / 2)]], dtype=complex)


def _act(U: np.ndarray, w: complex) -> complex:
    return (U[0, 0] * w + U[0, 1]) / (U[1, 0] * w + U[1, 1])


def _to_moebius(U: np.ndarray) -> MoebiusTransform:
    U = U / np.sqrt(np.linalg.det(U))
    alpha, beta = U[0, 0], U[0, 1]
    if abs(U[1, 1] - alpha.conjugate()) > 1e-9 or abs(U[1, 0] - beta.conjugate()) > 1e-9:
        raise ConstructionError("matrix is not an orientation-preserving disk isometry")
    return MoebiusTransform.from_disk(complex(alpha), complex(beta))


def _line_reflection(angle: float) -> np.ndarray:
    """Reflection in the diameter at ``angle``: w -> e^{2i angle} conj(w)."""
    return np.array([[np.exp(1j * angle), 0], [0, np.exp(-1j * angle)]])


def _circle_reflection(center: complex) -> np.ndarray:
    """Reflection in the geodesic on the circle |w - c|^2 = |c|^2 - 1."""
    return np.array([[center, -1], [1, -center.conjugate()]], dtype=complex)


def _reflection_product(Ni: np.ndarray, Nj: np.ndarray) -> np.ndarray:
    return Ni @ Nj.conj()


def _apply_reflection(N: np.ndarray, w: complex) -> complex:
    return _act(N, w.conjugate())


def bisect(fn, lo: float, hi: float, tol: float = BISECT_TOL, max_iter: int = 400) -> float:
    """Root of a monotone function with a sign change on [lo, hi]."""
    flo, fhi = fn(lo), fn(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ConstructionError("bisection bracket has no sign change")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo < tol * max(1.0, abs(mid)):
            return 0.5 * (lo + hi)
    raise ConstructionError("bisection did not converge")


# ---------------------------------------------------------------- geometric representations

@dataclass(eq=False)
class GeometricRep:
    """Moebius generator matrices for a signature, plus construction data."""

    signature: OrbifoldSignature
    matrices: dict
    meta: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    @property
    def generators(self) -> list[str]:
        return self.signature.generators

    def matrix(self, word) -> MoebiusTransform:
        out = MoebiusTransform.identity()
        inv: dict = {}
        for x in parse_word(word):
            base = letter_base(x)
            if x == base:
                out = out @ self.matrices[base]
            else:
                if base not in inv:
                    inv[base] = self.matrices[base].inverse()
                out = out @ inv[base]
        return out

    def relator_residuals(self) -> dict[str, float]:
        out = {}
        for r in orbifold_presentation(self.signature).relators:
            out[" ".join(r)] = float(np.max(np.abs(self.matrix(r).array - np.eye(2))))
        return out

    def elliptic_trace_residuals(self) -> dict[str, float]:
        return {q: abs(abs(self.matrices[q].trace) - 2 * math.cos(math.pi / m))
                for q, m in zip(self.signature.cone_names, self.signature.periods)}

    def verify(self, tol: float = VERIFY_TOL) -> "GeometricRep":
        for name, res in {**self.relator_residuals(), **self.elliptic_trace_residuals(),
                          **self.witnesses}.items():
            if not res < tol:
                raise ConstructionError(f"check {name!r} failed with residual {res:.3g}")
        return self

    def boundary_action(self, id: str | None = None) -> OrbifoldRep:
        return boundary_action(self, id)


def boundary_action(geo: GeometricRep, id: str | None = None) -> OrbifoldRep:
    """The standard action: each matrix acting on the boundary circle."""
    images = {g: Moebius(geo.matrices[g]) for g in geo.generators}
    cls = SurfaceGroupRep if not geo.signature.periods else OrbifoldRep
    meta = {"construction": geo.meta.get("kind", "geometric")}
    return cls(geo.signature, images, 1e-9, id or geo.meta.get("kind", "geometric"), meta)


def regular_polygon_circumradius(sides: int, interior_angle: float) -> float:
    """Hyperbolic circumradius of the regular polygon with the given angles, by bisection.

    Half the interior angle B solves cot B = cosh(R) tan(pi/N) in the right
    triangle (centre, side midpoint, vertex).
    """
    if sides * interior_angle >= (sides - 2) * math.pi:
        raise ConstructionError("angle sum too large for a hyperbolic polygon")

    def angle_excess(r):
        return 2 * math.atan(1 / (math.cosh(r) * math.tan(math.pi / sides))) - interior_angle

    hi = 1.0
    while angle_excess(hi) > 0:
        hi *= 2
        if hi > 100:
            raise ConstructionError("no circumradius found")
    return bisect(angle_excess, 0.0, hi)


def build_surface_group(g: int) -> GeometricRep:
    """Genus-g surface group from the regular 4g-gon with angles 2pi/4g.

    Side j (midpoint at angle 2pi j/4g) is carried to side j+2 by
    rot(theta_{j+2}) . trans(2h) . rot(pi) . rot(-theta_j); with
    a_i = (pairing of side 4(i-1))^-1 and b_i = pairing of side 4(i-1)+1
    the product of commutators is the identity.
    """
    if g < 2:
        raise ValueError("g >= 2")
    n = 4 * g
    radius = regular_polygon_circumradius(n, 2 * math.pi / n)
    h = math.atanh(math.tanh(radius) * math.cos(math.pi / n))
    theta = [2 * math.pi * j / n for j in range(n)]
    vr = math.tanh(radius / 2)
    verts = [vr * np.exp(1j * (t + math.pi / n)) for t in theta]   # verts[j] ends side j

    def pairing(j):
        return _rot(theta[(j + 2) % n]) @ _trans(2 * h) @ _rot(math.pi) @ _rot(-theta[j])

    mats, witnesses = {}, {}
    for i in range(1, g + 1):
        ja, jb = 4 * (i - 1), 4 * (i - 1) + 1
        Ua, Ub = pairing(ja), pairing(jb)
        for j, U in ((ja, Ua), (jb, Ub)):
            start, end = verts[(j - 1) % n], verts[j]
            s2, e2 = verts[(j + 1) % n], verts[(j + 2) % n]
            witnesses[f"side {j} start"] = abs(_act(U, start) - e2)
            witnesses[f"side {j} end"] = abs(_act(U, end) - s2)
        mats[f"a{i}"] = _to_moebius(np.linalg.inv(Ua))
        mats[f"b{i}"] = _to_moebius(Ub)
    meta = {"kind": "surface", "genus": g, "circumradius": radius, "inradius": h,
            "vertices": [[v.real, v.imag] for v in verts]}
    geo = GeometricRep(OrbifoldSignature(g), mats, meta, witnesses).verify()
    for name, m in mats.items():
        if classify_moebius(m) != HYPERBOLIC:
            raise ConstructionError(f"side pairing {name} is not hyperbolic")
    return geo


def _reflection_group_rep(sig: OrbifoldSignature, reflections: list[np.ndarray], vertices: list[complex],
                          meta: dict) -> GeometricRep:
    """Generators r_i r_{i+1} (cyclically) about polygon vertex i, i = 0..k-1."""
    k = len(reflections)
    mats, witnesses = {}, {}
    for i, name in enumerate(sig.cone_names):
        Ni, Nj = reflections[i], reflections[(i + 1) % k]
        U = _reflection_product(Ni, Nj)
        v = vertices[i]
        witnesses[f"{name} fixes its vertex"] = abs(_act(U, v) - v)
        witnesses[f"vertex {i} on both sides"] = max(abs(_apply_reflection(Ni, v) - v),
                                                     abs(_apply_reflection(Nj, v) - v))
        mats[name] = _to_moebius(U)
    meta = dict(meta, vertices=[[complex(v).real, complex(v).imag] for v in vertices])
    return GeometricRep(sig, mats, meta, witnesses).verify()


def build_orbifold_2222g(g: int) -> GeometricRep:
    """Quadrilateral with angles pi/2, pi/2, pi/2 at v12, v23, v34 and pi/(2g) at
    the origin; sides 1 (real axis), 2, 3, 4 (ray at angle pi/(2g)).

    The quadrilateral is symmetric in the diagonal at angle pi/(4g); each half
    is a right triangle with angles pi/(4g) and pi/4, so
    cosh(|0 v12|) = cos(pi/4) / sin(pi/(4g)).
    """
    if g < 2:
        raise ValueError("g >= 2")
    half = math.pi / (4 * g)
    cosh_l = math.cos(math.pi / 4) / math.sin(half)
    if not cosh_l > 1:
        raise ConstructionError("no hyperbolic quadrilateral with these angles")
    x0 = math.tanh(math.acosh(cosh_l) / 2)
    c2 = complex((x0 * x0 + 1) / (2 * x0))
    c3 = c2 * np.exp(2j * half)
    refl = [_line_reflection(0.0), _circle_reflection(c2), _circle_reflection(c3), _line_reflection(2 * half)]
    # the far vertex v23 lies on the diagonal, on circle 2
    rho = _circle_ray_intersection(c2, half)
    v12, v23, v34 = complex(x0), rho * np.exp(1j * half), x0 * np.exp(2j * half)
    # generator a sits at v12 = side1 n side2, ..., d at the origin = side4 n side1
    sig = OrbifoldSignature(0, (2, 2, 2, 2 * g))
    return _reflection_group_rep(sig, refl, [v12, v23, v34, 0j], {"kind": "2222g", "genus": g})


def build_orbifold_334() -> GeometricRep:
    """Triangle with angles pi/3 at A (real axis), pi/3 at B (ray at pi/4) and
    pi/4 at the origin; a = r1 r2 about A, b = r2 r3 about B, c = r3 r1 about 0."""
    alpha, beta, gamma = math.pi / 3, math.pi / 3, math.pi / 4
    cosh_oa = (math.cos(beta) + math.cos(gamma) * math.cos(alpha)) / (math.sin(gamma) * math.sin(alpha))
    xa = math.tanh(math.acosh(cosh_oa) / 2)
    re_c = (xa * xa + 1) / (2 * xa)
    c2 = re_c / math.cos(gamma / 2) * np.exp(1j * gamma / 2)
    refl = [_line_reflection(0.0), _circle_reflection(complex(c2)), _line_reflection(gamma)]
    A, B = complex(xa), xa * np.exp(1j * gamma)
    sig = OrbifoldSignature(0, (3, 3, 4))
    return _reflection_group_rep(sig, refl, [A, B, 0j], {"kind": "334"})


def _circle_ray_intersection(center: complex, angle: float) -> float:
    """Distance r < 1 at which the ray at ``angle`` meets |w - c|^2 = |c|^2 - 1."""
    # r^2 - 2 r Re(c e^{-i angle}) + 1 = 0
    p = (center * np.exp(-1j * angle)).real
    return p - math.sqrt(p * p - 1)


def build(kind: str, genus: int = 2) -> GeometricRep:
    if kind == "surface":
        return build_surface_group(genus)
    if kind == "2222g":
        return build_orbifold_2222g(genus)
    if kind == "334":
        return build_orbifold_334()
    raise ValueError(f"unknown construction {kind!r}")


# ---------------------------------------------------------------- kernels of covers

def is_non_elliptic(m: MoebiusTransform, slack: float = NON_ELLIPTIC_SLACK) -> bool:
    return abs(m.trace) >= 2 - slack


@dataclass
class KernelScan:
    schreier: SchreierData
    matrices: list
    min_abs_trace: float
    random_words: int
    random_min_abs_trace: float
    trivial_words: int = 0   # random words that are the identity in the group (+-I)

    @property
    def passed(self) -> bool:
        return self.min_abs_trace >= 2 - NON_ELLIPTIC_SLACK and self.random_min_abs_trace >= 2 - NON_ELLIPTIC_SLACK


def is_trivial(m: MoebiusTransform, tol: float = VERIFY_TOL) -> bool:
    a = m.array
    return min(np.max(np.abs(a - np.eye(2))), np.max(np.abs(a + np.eye(2)))) < tol


def kernel_matrices(geo: GeometricRep, hom: FiniteGroupHom) -> list[MoebiusTransform]:
    """Schreier generators of ker(hom) as matrices; all must be non-elliptic."""
    if tuple(hom.source.generators) != tuple(geo.generators):
        raise CoverError("homomorphism source does not match the geometric presentation")
    cert = torsion_orders_certificate(hom, geo.signature)
    if not cert.passed:
        raise CoverError(cert.detail)
    data = reidemeister_schreier(hom.source, hom)
    mats = [geo.matrix(w) for w in data.generators]
    bad = [i for i, m in enumerate(mats) if not is_non_elliptic(m)]
    if bad:
        raise CoverError(f"elliptic kernel element {' '.join(data.generators[bad[0]])}")
    return mats


def scan_kernel(geo: GeometricRep, hom: FiniteGroupHom, count: int = 10_000, max_len: int = 12,
                seed: int = 0) -> KernelScan:
    data = reidemeister_schreier(hom.source, hom)
    mats = [geo.matrix(w) for w in data.generators]
    words = random_kernel_words(hom, count, max_len, seed)
    wm = [geo.matrix(w) for w in words]
    # the identity is never elliptic; the minimum is taken over the nontrivial elements
    nontrivial = [abs(m.trace) for m in wm if not is_trivial(m)]
    rnd = min(nontrivial) if nontrivial else math.inf
    return KernelScan(data, mats, min(abs(m.trace) for m in mats), len(words), rnd, len(words) - len(nontrivial))
