"""
Denjoy blow-up of a marked orbit, the collapsing semi-conjugacy, and
finite-sample semi-conjugacy certificates.

The blow-up is symbolic: a point of the new circle is either Base(x), x off
the marked orbit, or Inserted(w, t), parameter t in [0, 1] of the interval
inserted at w.p0.  Generators act by Base(x) -> Base(g x) and
Inserted(w, t) -> Inserted(gw, t).

Numbers enter only through the re-coordinatised circle used to realise the
action by PL maps: a census of orbit points up to word length ``radius``
receives interval lengths l(w) = lam * 2^-|w| / c_|w| (c_n = census words of
length n), and the remaining 1 - sum(l) is Lebesgue measure of the old circle.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Mapping, Sequence

import numpy as np

from .circle_maps import (
    CircleHomeo, PiecewiseLinear, free_reduce, invert_letter, normalize_turn,
    word_str,
)

POS_TOL = 1e-11
ID_TOL = 1e-8
EQUIV_TOL = 1e-9
MESH = 2 ** 12
BLOWN_TOL = 0.05  # relator residual allowed for the finite PL realisation


class MarkedPointNotFree(ValueError):
    pass


# ---------------------------------------------------------------- symbolic points

@dataclass(frozen=True)
class Base:
    x: float


@dataclass(frozen=True)
class Inserted:
    word: tuple
    t: float

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise ValueError("interior parameter must lie in [0, 1]")


def point_to_json(p) -> dict:
    if isinstance(p, Base):
        return {"type": "base", "x": p.x}
    if isinstance(p, Inserted):
        return {"type": "inserted", "word": word_str(p.word), "t": p.t}
    return {"type": "circle", "x": float(p)}


def point_from_json(obj: dict):
    if obj["type"] == "base":
        return Base(float(obj["x"]))
    if obj["type"] == "inserted":
        return Inserted(tuple(obj["word"].split()), float(obj["t"]))
    return float(obj["x"])


# ---------------------------------------------------------------- helpers

def _images(rep) -> dict:
    return dict(rep.images) if hasattr(rep, "images") else dict(rep)


def _gens(rep) -> list[str]:
    return list(rep.generators) if hasattr(rep, "generators") else list(_images(rep))


def letters_of(gens: Sequence[str]) -> list[str]:
    out = []
    for g in gens:
        out += [g, invert_letter(g)]
    return out


def _letter_maps(images: Mapping[str, CircleHomeo], gens: Sequence[str]) -> dict[str, CircleHomeo]:
    out = {}
    for g in gens:
        out[g] = images[g].resolved()
        out[invert_letter(g)] = images[g].inverse().resolved()
    return out


def _circ_dist(a, b):
    d = np.abs(np.asarray(a) - np.asarray(b)) % 1.0
    return np.minimum(d, 1.0 - d)


def orbit_positions(rep, start: float, depth: int) -> np.ndarray:
    """w.start for every reduced word w with |w| <= depth (with repetitions)."""
    gens = _gens(rep)
    letters = letters_of(gens)
    maps = _letter_maps(_images(rep), gens)
    inv_index = np.array([letters.index(invert_letter(x)) for x in letters])
    pos = np.array([normalize_turn(float(start))])
    first = np.array([-1])
    out = [pos]
    for _ in range(depth):
        new_pos, new_first = [], []
        for li, x in enumerate(letters):
            mask = first != inv_index[li]
            if not mask.any():
                continue
            new_pos.append(normalize_turn(np.asarray(maps[x].lift(pos[mask]), dtype=float)))
            new_first.append(np.full(int(mask.sum()), li))
        pos, first = np.concatenate(new_pos), np.concatenate(new_first)
        out.append(pos)
    return np.concatenate(out)


# ---------------------------------------------------------------- orbit census

class OrbitCensus:
    """Group elements of word length <= radius, one canonical word each,
    identified through the images of p0 and two probe points.

    Two distinct elements sending p0 to the same point expose a nontrivial
    stabiliser word of length <= 2 * radius.
    """

    def __init__(self, rep, p0: float, radius: int, probes: tuple = (0.1234567, 0.7654321)):
        self.gens = _gens(rep)
        self.letters = letters_of(self.gens)
        self.maps = _letter_maps(_images(rep), self.gens)
        self.p0 = normalize_turn(float(p0))
        self.radius = radius
        inv_index = [self.letters.index(invert_letter(x)) for x in self.letters]
        pts = np.array([[self.p0, *probes]])
        parent, letter, length = [-1], [-1], [0]
        frontier = np.array([0])
        for n in range(1, radius + 1):
            cand_pts, cand_parent, cand_letter = [], [], []
            for li, x in enumerate(self.letters):
                ok = [i for i in frontier if letter[i] != inv_index[li]]
                if not ok:
                    continue
                ok = np.array(ok)
                cand_pts.append(normalize_turn(np.asarray(self.maps[x].lift(pts[ok]), dtype=float)))
                cand_parent.append(ok)
                cand_letter.append(np.full(len(ok), li))
            cp = np.concatenate(cand_pts)
            cpar = np.concatenate(cand_parent)
            clet = np.concatenate(cand_letter)
            keep = self._new_elements(pts, cp)
            start = len(parent)
            pts = np.vstack([pts, cp[keep]])
            parent += cpar[keep].tolist()
            letter += clet[keep].tolist()
            length += [n] * int(keep.sum())
            frontier = np.arange(start, len(parent))
        self.points = pts
        self.parent = np.array(parent)
        self.letter = np.array(letter)
        self.length = np.array(length)
        self.pos = pts[:, 0]
        self.order = np.argsort(self.pos, kind="stable")
        self.sorted_pos = self.pos[self.order]
        self._word_cache: dict[int, tuple] = {}
        self.index_of = {self.word(i): i for i in range(len(self.pos))}
        self.counts = np.bincount(self.length, minlength=radius + 1)

    def _new_elements(self, old: np.ndarray, cand: np.ndarray) -> np.ndarray:
        """Mask of candidates that are new group elements; raise on stabilisers.
        Candidates come in shortlex order, so the first copy is kept."""
        allp = np.vstack([old, cand])
        n_old = len(old)
        order = np.lexsort((np.arange(len(allp)), allp[:, 0]))
        p = allp[order]
        close = _circ_dist(p[1:, 0], p[:-1, 0]) < POS_TOL
        cluster = np.concatenate([[0], np.cumsum(~close)])
        if len(p) > 1 and cluster[-1] > 0 and _circ_dist(p[0, 0], p[-1, 0]) < POS_TOL:
            cluster[cluster == cluster[-1]] = 0  # wrap-around run
        first = np.full(cluster.max() + 1, len(allp))
        np.minimum.at(first, cluster, order)
        rep_idx = first[cluster]
        if np.any(np.max(_circ_dist(allp[order, 1:], allp[rep_idx, 1:]), axis=1) > ID_TOL):
            i = int(np.argmax(np.max(_circ_dist(allp[order, 1:], allp[rep_idx, 1:]), axis=1)))
            raise MarkedPointNotFree(
                f"distinct group elements send p0 to {p[i, 0]:.12g}: p0 has a nontrivial stabiliser")
        dup = np.zeros(len(allp), dtype=bool)
        dup[order] = order != rep_idx
        return ~dup[n_old:]

    def __len__(self):
        return len(self.pos)

    def word(self, i: int) -> tuple:
        w = self._word_cache.get(i)
        if w is None:
            out = []
            j = i
            while self.parent[j] >= 0:
                out.append(self.letters[self.letter[j]])
                j = self.parent[j]
            w = tuple(out)
            self._word_cache[i] = w
        return w

    def lookup(self, positions) -> np.ndarray:
        """Census index of each position (-1 if absent)."""
        q = np.atleast_1d(np.asarray(positions, dtype=float))
        k = np.searchsorted(self.sorted_pos, q)
        out = np.full(len(q), -1)
        n = len(self.sorted_pos)
        for cand in (k - 1, k, k % n, (k - 1) % n):
            cand = np.clip(cand, 0, n - 1)
            hit = (out < 0) & (_circ_dist(self.sorted_pos[cand], q) < POS_TOL)
            out[hit] = self.order[cand[hit]]
        return out


# ---------------------------------------------------------------- blown-up action

def default_sigma(n: int) -> float:
    return 2.0 ** (-n)


class BlownUpAction:
    def __init__(self, rep, p0: float, lam: float = 0.3, depth: int = 8,
                 sigma: Callable[[int], float] = default_sigma):
        if not 0 < lam:
            raise ValueError("lambda must be positive")
        self.rep = rep
        self.gens = _gens(rep)
        self.letters = letters_of(self.gens)
        self.maps = _letter_maps(_images(rep), self.gens)
        self.p0 = normalize_turn(float(p0))
        self.lam = lam
        self.depth = depth
        self.census = OrbitCensus(rep, self.p0, math.ceil(depth / 2))
        c = self.census
        per_length = np.array([lam * sigma(n) / c.counts[n] if c.counts[n] else 0.0
                               for n in range(c.radius + 1)])
        self.lengths = per_length[c.length]
        self.total = float(self.lengths.sum())
        if not self.total < 1:
            raise ValueError(f"inserted length {self.total} must be < 1; lower lambda")
        self.scale = 1.0 - self.total
        sorted_len = self.lengths[c.order]
        self._cum_before = np.concatenate([[0.0], np.cumsum(sorted_len)])
        self.s_minus = np.empty(len(c))
        self.s_minus[c.order] = self.scale * c.sorted_pos + self._cum_before[:-1]
        self._pos_cache: dict[tuple, float] = {(): self.p0}

    # -- orbit bookkeeping
    def position(self, w: tuple) -> float:
        """w.p0, letters applied right to left."""
        w = tuple(w)
        if w in self._pos_cache:
            return self._pos_cache[w]
        i = self.census.index_of.get(w)
        if i is not None:
            p = float(self.census.pos[i])
        else:
            p = normalize_turn(float(self.maps[w[0]].lift(self.position(w[1:]))))
        self._pos_cache[w] = p
        return p

    def canonical(self, w: Sequence[str]) -> tuple:
        w = free_reduce(tuple(w))
        if w in self.census.index_of:
            return w
        i = int(self.census.lookup(self.position(w))[0])
        return self.census.word(i) if i >= 0 else w

    def length_of(self, w: tuple) -> float:
        i = self.census.index_of.get(tuple(w))
        return float(self.lengths[i]) if i is not None else 0.0

    # -- symbolic action
    def act(self, letter: str, p):
        if isinstance(p, Base):
            return Base(normalize_turn(float(self.maps[letter].lift(p.x))))
        if isinstance(p, Inserted):
            return Inserted(self.canonical((letter,) + tuple(p.word)), p.t)
        raise TypeError(f"not a symbolic point: {p!r}")

    def act_word(self, w: Sequence[str], p):
        for x in reversed(tuple(w)):
            p = self.act(x, p)
        return p

    def collapse(self, p) -> float:
        if isinstance(p, Base):
            return p.x
        return self.position(p.word)

    def key(self, p) -> tuple:
        if isinstance(p, Base):
            return (p.x, 0.0)
        return (self.position(p.word), p.t)

    def cyclic_order(self, p, q, r) -> int:
        return cyclic_order(self.key(p), self.key(q), self.key(r))

    def same(self, p, q) -> bool:
        if isinstance(p, Inserted) and isinstance(q, Inserted):
            return self.canonical(p.word) == self.canonical(q.word) and abs(p.t - q.t) < EQUIV_TOL
        if isinstance(p, Base) and isinstance(q, Base):
            return bool(_circ_dist(p.x, q.x) < EQUIV_TOL)
        return False

    # -- realisation on the re-coordinatised circle
    def coordinate_base(self, x):
        """S(x) for base points (vectorised)."""
        x = np.asarray(x, dtype=float)
        k = np.searchsorted(self.census.sorted_pos, x, side="left")
        return self.scale * x + self._cum_before[k]

    def coordinate_base_lift(self, y):
        y = np.asarray(y, dtype=float)
        k = np.floor(y)
        return self.coordinate_base(y - k) + k

    def coordinate(self, p) -> float:
        if isinstance(p, Base):
            return float(self.coordinate_base(p.x))
        w = self.canonical(p.word)
        i = self.census.index_of.get(w)
        if i is not None:
            return float(self.s_minus[i] + p.t * self.lengths[i])
        return float(self.coordinate_base(self.position(w)))

    def circle_map(self, letter: str, mesh: int = MESH) -> PiecewiseLinear:
        """PL map realising ``letter`` on the new circle: exact on a base mesh
        and on census intervals whose image interval is also in the census."""
        g = self.maps[letter]
        c = self.census
        # mesh uniform in the source and (through g^-1) in the target
        yb = normalize_turn(np.asarray(self.maps[invert_letter(letter)].lift((np.arange(mesh) + 0.25) / mesh),
                                       dtype=float))
        xb = np.unique(np.concatenate([(np.arange(mesh) + 0.5) / mesh, yb]))
        xs = [self.coordinate_base(xb)]
        ys = [self.coordinate_base_lift(np.asarray(g.lift(xb), dtype=float))]
        gp = np.asarray(g.lift(c.pos), dtype=float)
        j = c.lookup(normalize_turn(gp % 1.0))
        ok = (j >= 0) & (self.lengths > 0)
        i, j = np.nonzero(ok)[0], j[ok]
        ok2 = self.lengths[j] > 0
        i, j = i[ok2], j[ok2]
        shift = np.round(gp[i] - c.pos[j])
        for t in (0.0, 1.0):
            xs.append(self.s_minus[i] + t * self.lengths[i])
            ys.append(self.s_minus[j] + shift + t * self.lengths[j])
        return PiecewiseLinear.from_lift_points(np.concatenate(xs), np.concatenate(ys))

    def as_rep(self, tol: float = BLOWN_TOL, mesh: int = MESH):
        """The blown-up action as a representation by PL circle maps."""
        images = {g: self.circle_map(g, mesh) for g in self.gens}
        base = self.rep
        if hasattr(base, "signature"):
            from .euler import OrbifoldRep, SurfaceGroupRep
            cls = SurfaceGroupRep if isinstance(base, SurfaceGroupRep) else OrbifoldRep
            return cls(base.signature, images, tol, f"{base.id}-blown", {"blown_up": True, "mesh": mesh})
        return images

    def free_orbit_certificate(self) -> dict:
        return {"tested_word_length": 2 * self.census.radius, "census_size": len(self.census),
                "passed": True}

    def to_json(self) -> dict:
        out = {"schema": "1", "kind": "blown-up", "p0": self.p0, "lambda": self.lam, "depth": self.depth,
               "census_radius": self.census.radius, "census_size": len(self.census),
               "total_inserted_length": self.total, "free_orbit": self.free_orbit_certificate()}
        if hasattr(self.rep, "to_json"):
            out["base"] = self.rep.to_json()
        return out


def blow_up(rep, p0: float, lam: float = 0.3, depth: int = 8,
            sigma: Callable[[int], float] = default_sigma) -> BlownUpAction:
    """Insert an interval at each point of the orbit of p0.  Raises
    MarkedPointNotFree if a word of length <= depth fixes p0 nontrivially."""
    return BlownUpAction(rep, p0, lam, depth, sigma)


def collapse_map(blown: BlownUpAction) -> Callable:
    return blown.collapse


# ---------------------------------------------------------------- plain circle actions

class CircleAction:
    """Action of a representation on CirclePoints, with the same interface as BlownUpAction."""

    def __init__(self, rep):
        self.rep = rep
        self.gens = _gens(rep)
        self.letters = letters_of(self.gens)
        self.maps = _letter_maps(_images(rep), self.gens)

    def act(self, letter: str, x: float) -> float:
        return normalize_turn(float(self.maps[letter].lift(float(x))))

    def act_word(self, w, x):
        for c in reversed(tuple(w)):
            x = self.act(c, x)
        return x

    def key(self, x) -> tuple:
        return (float(x),)

    def cyclic_order(self, p, q, r) -> int:
        return cyclic_order(self.key(p), self.key(q), self.key(r))

    def same(self, x, y) -> bool:
        return bool(_circ_dist(x, y) < EQUIV_TOL)


def as_action(obj):
    return obj if isinstance(obj, (BlownUpAction, CircleAction)) else CircleAction(obj)


def cyclic_order(p, q, r) -> int:
    """+1 if p, q, r are met in this order going counter-clockwise, -1 if the
    reverse, 0 if two coincide.  Accepts turn coordinates or sort keys."""
    if p == q or q == r or p == r:
        return 0
    if (p < q < r) or (q < r < p) or (r < p < q):
        return 1
    return -1


def _ranks(keys: list) -> np.ndarray:
    distinct = sorted(set(keys))
    where = {k: i for i, k in enumerate(distinct)}
    return np.array([where[k] for k in keys])


def _orientations(ranks: np.ndarray, tri: np.ndarray) -> np.ndarray:
    a, b, c = ranks[tri[:, 0]], ranks[tri[:, 1]], ranks[tri[:, 2]]
    pos = ((a < b) & (b < c)) | ((b < c) & (c < a)) | ((c < a) & (a < b))
    deg = (a == b) | (b == c) | (a == c)
    return np.where(deg, 0, np.where(pos, 1, -1))


@dataclass
class SemiConjugacyCertificate:
    passed: bool
    samples: int
    triples_checked: int
    orientation_mismatches: int
    equivariance_checked: int
    equivariance_failures: int
    witness: dict | None = None

    def to_json(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}


def orbit_sample(action, start, n: int, rng: random.Random, max_len: int = 6) -> tuple[list, list]:
    """n orbit points w.start for distinct random reduced words w (identity first)."""
    words, seen = [()], {()}
    tries = 0
    while len(words) < n and tries < 100 * n:
        tries += 1
        w = free_reduce(tuple(rng.choice(action.letters) for _ in range(rng.randint(1, max_len))))
        if w not in seen:
            seen.add(w)
            words.append(w)
    return words, [action.act_word(w, start) for w in words]


def check_semi_conjugacy(rep1, rep2, correspondence: Callable | None = None, start=None,
                         samples: int = 200, seed: int = 0, max_triples: int = 100_000) -> SemiConjugacyCertificate:
    """Finite-sample certificate that ``correspondence`` is an equivariant,
    cyclic-order preserving bijection from an orbit of rep1 to one of rep2."""
    a1, a2 = as_action(rep1), as_action(rep2)
    corr = correspondence or (lambda p: p)
    rng = random.Random(seed)
    if start is None:
        start = Base(0.2718281828) if isinstance(a1, BlownUpAction) else 0.2718281828
    words, pts = orbit_sample(a1, start, samples, rng)
    images = [corr(p) for p in pts]

    eq_checked = eq_fail = 0
    witness = None
    for w, p, q in zip(words, pts, images):
        for x in a1.letters:
            eq_checked += 1
            if not a2.same(corr(a1.act(x, p)), a2.act(x, q)):
                eq_fail += 1
                if witness is None:
                    witness = {"kind": "equivariance", "word": word_str(w), "letter": x}

    r1 = _ranks([a1.key(p) for p in pts])
    r2 = _ranks([a2.key(q) for q in images])
    n = len(pts)
    total = math.comb(n, 3)
    if total <= max_triples:
        tri = np.array(list(combinations(range(n), 3)), dtype=int).reshape(-1, 3)
    else:
        nrng = np.random.default_rng(seed)
        tri = np.sort(np.array([nrng.choice(n, 3, replace=False) for _ in range(max_triples)]), axis=1)
    o1, o2 = _orientations(r1, tri), _orientations(r2, tri)
    bad = np.nonzero(o1 != o2)[0]
    if len(bad) and witness is None:
        i, j, k = tri[bad[0]]
        witness = {"kind": "orientation", "words": [word_str(words[i]), word_str(words[j]), word_str(words[k])],
                   "signs": [int(o1[bad[0]]), int(o2[bad[0]])]}
    return SemiConjugacyCertificate(eq_fail == 0 and len(bad) == 0, n, len(tri), int(len(bad)),
                                    eq_checked, eq_fail, witness)


# ---------------------------------------------------------------- minimality probe

@dataclass
class ProbeResult:
    depth: int
    orbit_size: int
    max_gap: float
    gap_interval: tuple
    gap_found: bool
    witness: str | None = None

    def to_json(self) -> dict:
        return {"depth": self.depth, "orbit_size": self.orbit_size, "max_gap": self.max_gap,
                "gap_interval": list(self.gap_interval), "result": "gap" if self.gap_found else "no-gap-found",
                "witness": self.witness}


def _largest_gap(points: np.ndarray) -> tuple[float, float, float, int]:
    """(gap, left end, right end, number of distinct points); points closer than POS_TOL merge."""
    p = np.unique(normalize_turn(points))
    gaps = np.diff(np.append(p, p[0] + 1.0))
    distinct = int(np.count_nonzero(gaps >= POS_TOL)) or 1
    i = int(np.argmax(gaps))
    return float(gaps[i]), float(p[i]), float(p[i] + gaps[i]), distinct


def minimality_probe(action, start, depth: int, gap_threshold: float = 0.05) -> ProbeResult:
    """Largest complementary gap of the depth-``depth`` orbit of ``start``."""
    if isinstance(action, BlownUpAction):
        x0 = start.x if isinstance(start, Base) else action.collapse(start)
        base = orbit_positions(action.rep, x0, depth)
        if isinstance(start, Base):
            pts = action.coordinate_base(base)
        else:
            idx = action.census.lookup(base)
            pts = np.where(idx >= 0, action.s_minus[idx] + start.t * action.lengths[idx],
                           action.coordinate_base(base))
        gap, lo, hi, size = _largest_gap(pts)
        witness = None
        c = action.census
        inside = [i for i in range(len(c)) if action.lengths[i] > 0 and
                  _arc_contains(lo, hi, action.s_minus[i], action.s_minus[i] + action.lengths[i])]
        if inside:
            best = max(inside, key=lambda i: action.lengths[i])
            witness = f"inserted interval of word '{word_str(c.word(best))}' (length {action.lengths[best]:.6g})"
        return ProbeResult(depth, size, gap, (lo, hi), gap >= gap_threshold, witness)
    pts = orbit_positions(action.rep if isinstance(action, CircleAction) else action, float(start), depth)
    gap, lo, hi, size = _largest_gap(pts)
    return ProbeResult(depth, size, gap, (lo, hi), gap >= gap_threshold, None)


def _arc_contains(lo: float, hi: float, a: float, b: float) -> bool:
    """Is [a, b] inside the arc [lo, hi] (hi may exceed 1)?"""
    for k in (0.0, 1.0):
        if lo - 1e-15 <= a + k and b + k <= hi + 1e-15:
            return True
    return False


# ---------------------------------------------------------------- invariants

@dataclass
class InvariantComparison:
    word: str
    base: "object"
    blown: "object"
    agree: bool


def compare_rotation_numbers(blown: BlownUpAction, count: int = 20, seed: int = 0, n: int = 10_000,
                             max_len: int = 6, slack: float = 1e-3) -> list[InvariantComparison]:
    """rot of sampled words under the base action and the PL realisation of the blow-up."""
    from .circle_maps import fold_word
    from .rotation import overlap_mod1, rotation_number

    rng = random.Random(seed)
    pl = {g: blown.circle_map(g) for g in blown.gens}
    words = []
    while len(words) < count:
        w = free_reduce(tuple(rng.choice(blown.letters) for _ in range(rng.randint(1, max_len))))
        if w and w not in words:
            words.append(w)
    out = []
    for w in words:
        a = rotation_number(fold_word(_images(blown.rep), w), n)
        b = rotation_number(fold_word(pl, w), n)
        out.append(InvariantComparison(word_str(w), a, b, overlap_mod1(a, b, slack)))
    return out


def compare_euler(blown: BlownUpAction, n: int = 10_000) -> tuple:
    """(eu of the base action, eu of the PL realisation) via the lifted relator."""
    from .euler import euler_orbifold, euler_relator, SurfaceGroupRep

    fn = euler_relator if isinstance(blown.rep, SurfaceGroupRep) else euler_orbifold
    return fn(blown.rep, n), fn(blown.as_rep(), n)
