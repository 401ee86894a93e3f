"""
Orbifold signatures, their standard presentations, finite quotients and
certified covers.

Words are tuples of generator tokens; a capitalised token is an inverse
('a' vs 'A', 'a1' vs 'A1').
"""
from __future__ import annotations

import random
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Hashable, Iterable, Sequence

from .circle_maps import free_reduce, invert_letter, invert_word, letter_base, parse_word, word_str


class CoverError(ValueError):
    pass


class NotAHomomorphism(CoverError):
    pass


# ---------------------------------------------------------------- signatures

@dataclass(frozen=True)
class OrbifoldSignature:
    genus: int
    periods: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "periods", tuple(int(m) for m in self.periods))
        if self.genus < 0 or any(m < 2 for m in self.periods):
            raise ValueError(f"bad signature {self}")

    @classmethod
    def parse(cls, text: str) -> "OrbifoldSignature":
        """'0;2,2,2,4', '(0;3,3,4)', '2' or '2;'."""
        text = text.strip().strip("()")
        g, _, rest = text.partition(";")
        periods = tuple(int(m) for m in re.split(r"[,\s]+", rest.strip()) if m and m != "-")
        return cls(int(g), periods)

    @classmethod
    def from_json(cls, obj: dict) -> "OrbifoldSignature":
        return cls(int(obj["genus"]), tuple(obj.get("periods", ())))

    def to_json(self) -> dict:
        return {"genus": self.genus, "periods": list(self.periods)}

    def __str__(self):
        return f"({self.genus};{','.join(map(str, self.periods)) or '-'})"

    @property
    def handle_names(self) -> list[tuple[str, str]]:
        return [(f"a{i}", f"b{i}") for i in range(1, self.genus + 1)]

    @property
    def cone_names(self) -> list[str]:
        r = len(self.periods)
        if self.genus == 0 and r <= 4:
            return list("abcd"[:r])
        return [f"q{i}" for i in range(1, r + 1)]

    @property
    def generators(self) -> list[str]:
        out = [x for pair in self.handle_names for x in pair]
        return out + self.cone_names

    @property
    def long_relator(self) -> tuple[str, ...]:
        w = list(self.cone_names)
        for a, b in self.handle_names:
            w += [a, b, invert_letter(a), invert_letter(b)]
        return tuple(w)

    def euler_characteristic(self) -> Fraction:
        return orbifold_euler_characteristic(self)


def orbifold_euler_characteristic(sig: OrbifoldSignature) -> Fraction:
    """chi = -(2g - 2 + sum(1 - 1/m_i)), exactly."""
    return -(2 * sig.genus - 2 + sum((1 - Fraction(1, m) for m in sig.periods), Fraction(0)))


@dataclass(frozen=True)
class FinitePresentation:
    generators: tuple[str, ...]
    relators: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(parse_word(r) for r in self.relators))
        gens = set(self.generators)
        for r in self.relators:
            for x in r:
                if letter_base(x) not in gens:
                    raise ValueError(f"relator {word_str(r)!r} uses unknown generator {x!r}")

    def __str__(self):
        rels = ", ".join(word_str(r) for r in self.relators)
        return f"< {' '.join(self.generators)} | {rels} >"


def orbifold_presentation(sig: OrbifoldSignature) -> FinitePresentation:
    rels = [(q,) * m for q, m in zip(sig.cone_names, sig.periods)]
    rels.append(sig.long_relator)
    return FinitePresentation(tuple(sig.generators), tuple(rels))


# ---------------------------------------------------------------- finite groups

class FiniteGroup:
    """Finite group given by normal forms and a multiplication rule."""

    name: str

    @property
    def elements(self) -> list:
        raise NotImplementedError

    @property
    def identity(self):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def parse(self, obj):
        raise NotImplementedError

    def dump(self, x):
        raise NotImplementedError

    @property
    def order(self) -> int:
        return len(self.elements)

    def power(self, x, n: int):
        if n < 0:
            x, n = self.inv(x), -n
        out = self.identity
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def element_order(self, x) -> int:
        y, k = x, 1
        while y != self.identity:
            y, k = self.mul(y, x), k + 1
        return k

    def check_axioms(self) -> None:
        els = self.elements
        s = set(els)
        for x in els:
            if self.mul(x, self.inv(x)) != self.identity or self.mul(self.identity, x) != x:
                raise ValueError(f"{self.name}: inverse/identity axiom fails at {x}")
            for y in els:
                if self.mul(x, y) not in s:
                    raise ValueError(f"{self.name}: not closed")


@dataclass(frozen=True)
class CyclicGroup(FiniteGroup):
    n: int

    @property
    def name(self):
        return f"cyclic:{self.n}"

    @property
    def elements(self):
        return list(range(self.n))

    @property
    def identity(self):
        return 0

    def mul(self, x, y):
        return (x + y) % self.n

    def inv(self, x):
        return (-x) % self.n

    def parse(self, obj):
        return int(obj) % self.n

    def dump(self, x):
        return x


@dataclass(frozen=True)
class DihedralGroup(FiniteGroup):
    """<r, s | r^n, s^2, srsr> of order 2n; elements (k, e) mean r^k s^e."""

    n: int

    @property
    def name(self):
        return f"dihedral:{2 * self.n}"

    @property
    def elements(self):
        return [(k, e) for e in (0, 1) for k in range(self.n)]

    @property
    def identity(self):
        return (0, 0)

    @property
    def r(self):
        return (1 % self.n, 0)

    @property
    def s(self):
        return (0, 1)

    def mul(self, x, y):
        (k, e), (l, f) = x, y
        return ((k + (-l if e else l)) % self.n, (e + f) % 2)

    def inv(self, x):
        k, e = x
        return x if e else ((-k) % self.n, 0)

    def from_word(self, text: str):
        """'s r^2', 'r^-1', 'R', '1' -> element."""
        out = self.identity
        for tok in text.replace("*", " ").split():
            if tok == "1":
                continue
            m = re.fullmatch(r"([rsRS])(?:\^(-?\d+))?", tok)
            if not m:
                raise ValueError(f"bad dihedral token {tok!r}")
            base = self.r if m.group(1) in "rR" else self.s
            k = int(m.group(2) or 1) * (-1 if m.group(1).isupper() else 1)
            out = self.mul(out, self.power(base, k))
        return out

    def parse(self, obj):
        if isinstance(obj, str):
            return self.from_word(obj)
        k, e = obj
        return (int(k) % self.n, int(e) % 2)

    def dump(self, x):
        k, e = x
        return (f"r^{k}" + (" s" if e else "")) if k else ("s" if e else "1")


def _sl2_elements(p: int):
    return [m for m in product(range(p), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % p == 1]


@dataclass(frozen=True)
class SL2Fp(FiniteGroup):
    """SL_2(F_p); elements (a, b, c, d) for [[a, b], [c, d]]."""

    p: int = 3

    @property
    def name(self):
        return "sl2f3" if self.p == 3 else f"sl2f{self.p}"

    @property
    def elements(self):
        return _sl2_elements(self.p)

    @property
    def identity(self):
        return (1, 0, 0, 1)

    def mul(self, x, y):
        a, b, c, d = x
        e, f, g, h = y
        p = self.p
        return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)

    def inv(self, x):
        a, b, c, d = x
        p = self.p
        return (d % p, -b % p, -c % p, a % p)

    def parse(self, obj):
        (a, b), (c, d) = obj
        x = tuple(int(v) % self.p for v in (a, b, c, d))
        if (x[0] * x[3] - x[1] * x[2]) % self.p != 1:
            raise ValueError(f"{obj} is not in SL_2(F_{self.p})")
        return x

    def dump(self, x):
        return [[x[0], x[1]], [x[2], x[3]]]


def group_from_name(name: str) -> FiniteGroup:
    kind, _, arg = name.partition(":")
    if kind == "dihedral":
        order = int(arg)
        if order % 2:
            raise ValueError("dihedral order must be even")
        return DihedralGroup(order // 2)
    if kind == "cyclic":
        return CyclicGroup(int(arg))
    if kind == "sl2f3":
        return SL2Fp(3)
    raise ValueError(f"unknown finite group {name!r}")


def closure(group: FiniteGroup, gens: Iterable) -> set:
    """Breadth-first closure of a generating set."""
    gens = list(gens)
    seen = {group.identity}
    queue = deque([group.identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = group.mul(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


# ---------------------------------------------------------------- homomorphisms

@dataclass(frozen=True)
class Certificate:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class FiniteGroupHom:
    source: FinitePresentation
    target: FiniteGroup
    images: dict
    certificates: list = field(default_factory=list)

    def __post_init__(self):
        missing = set(self.source.generators) - set(self.images)
        if missing:
            raise ValueError(f"no image for generators {sorted(missing)}")

    def letter(self, x: str):
        g = self.images[letter_base(x)]
        return g if x == letter_base(x) else self.target.inv(g)

    def image(self, word: Sequence[str] | str):
        out = self.target.identity
        for x in parse_word(word):
            out = self.target.mul(out, self.letter(x))
        return out

    def to_json(self) -> dict:
        return {"target": self.target.name,
                "images": {k: self.target.dump(v) for k, v in self.images.items()}}

    @classmethod
    def from_json(cls, obj: dict, source: FinitePresentation) -> "FiniteGroupHom":
        target = group_from_name(obj["target"])
        images = {k: target.parse(v) for k, v in obj["images"].items()}
        return cls(source, target, images)


def verify_hom(hom: FiniteGroupHom) -> Certificate:
    for r in hom.source.relators:
        if hom.image(r) != hom.target.identity:
            return Certificate("relators", False, f"relator {word_str(r)!r} maps to {hom.target.dump(hom.image(r))}")
    return Certificate("relators", True, f"{len(hom.source.relators)} relators map to the identity")


def verify_surjective(hom: FiniteGroupHom) -> Certificate:
    span = closure(hom.target, [hom.images[g] for g in hom.source.generators])
    n = hom.target.order
    return Certificate("surjective", len(span) == n, f"generated subgroup has {len(span)} of {n} elements")


def certify(hom: FiniteGroupHom) -> FiniteGroupHom:
    """Attach relator and surjectivity certificates; raise if either fails."""
    certs = [verify_hom(hom), verify_surjective(hom)]
    bad = [c for c in certs if not c.passed]
    if bad:
        raise NotAHomomorphism("; ".join(c.detail for c in bad))
    hom.certificates = certs
    return hom


def torsion_orders_certificate(hom: FiniteGroupHom, sig: OrbifoldSignature) -> Certificate:
    orders = [hom.target.element_order(hom.images[q]) for q in sig.cone_names]
    ok = orders == list(sig.periods)
    return Certificate("torsion_orders", ok, f"image orders {orders}, periods {list(sig.periods)}")


def kernel_genus(sig: OrbifoldSignature, group_order: int) -> int:
    """Genus g of the torsion-free kernel: 2 - 2g = chi * |G|."""
    chi_cover = orbifold_euler_characteristic(sig) * group_order
    if chi_cover.denominator != 1 or chi_cover.numerator % 2:
        raise CoverError(f"chi * |G| = {chi_cover} is not an even integer")
    g = (2 - chi_cover.numerator) // 2
    if g < 2:
        raise CoverError(f"kernel genus {g} < 2")
    return g


def hom_2222g(g: int) -> FiniteGroupHom:
    """(0;2,2,2,2g) -> dihedral group of order 4g: a -> r^g, b -> sr, c -> sr^(2-g), d -> (abc)^-1."""
    if g < 2:
        raise ValueError("g >= 2")
    D = DihedralGroup(2 * g)
    r, s = D.r, D.s
    a = D.power(r, g)
    b = D.mul(s, r)
    c = D.mul(s, D.power(r, 2 - g))
    d = D.inv(D.mul(D.mul(a, b), c))
    pres = orbifold_presentation(OrbifoldSignature(0, (2, 2, 2, 2 * g)))
    return certify(FiniteGroupHom(pres, D, {"a": a, "b": b, "c": c, "d": d}))


def hom_334() -> FiniteGroupHom:
    """(0;3,3,4) -> SL_2(F_3): a -> [[1,1],[0,1]], b -> [[1,0],[1,1]], c -> (ab)^-1."""
    G = SL2Fp(3)
    a, b = (1, 1, 0, 1), (1, 0, 1, 1)
    c = G.inv(G.mul(a, b))
    pres = orbifold_presentation(OrbifoldSignature(0, (3, 3, 4)))
    return certify(FiniteGroupHom(pres, G, {"a": a, "b": b, "c": c}))


# ---------------------------------------------------------------- Reidemeister-Schreier

@dataclass
class SchreierData:
    index: int
    cosets: list                       # target elements, in BFS order
    transversal: list                  # transversal[i] is the word of coset i
    coset_table: list                  # coset_table[i][gen] -> coset index
    generators: list                   # Schreier generators (reduced words)
    pairs: list                        # (coset, gen) for each Schreier generator

    def to_json(self) -> dict:
        return {"index": self.index,
                "transversal": [word_str(w) for w in self.transversal],
                "coset_table": self.coset_table,
                "schreier_generators": [word_str(w) for w in self.generators]}


def reidemeister_schreier(pres: FinitePresentation, hom: FiniteGroupHom) -> SchreierData:
    """Schreier generators of ker(hom), cosets realised as elements of the image.

    The transversal is the shortlex-least positive word per coset (BFS with
    generators in presentation order), hence prefix-closed.
    """
    G = hom.target
    gens = list(pres.generators)
    rep = {G.identity: ()}
    cosets = [G.identity]
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for gname in gens:
            y = G.mul(x, hom.images[gname])
            if y not in rep:
                rep[y] = rep[x] + (gname,)
                cosets.append(y)
                queue.append(y)
    index_of = {x: i for i, x in enumerate(cosets)}
    table, schreier, pairs = [], [], []
    for i, x in enumerate(cosets):
        row = {}
        for gname in gens:
            y = G.mul(x, hom.images[gname])
            row[gname] = index_of[y]
            w = free_reduce(rep[x] + (gname,) + invert_word(rep[y]))
            if w:
                schreier.append(w)
                pairs.append((i, gname))
        table.append(row)
    return SchreierData(len(cosets), cosets, [rep[x] for x in cosets], table, schreier, pairs)


def random_words(gens: Sequence[str], count: int, max_len: int, rng: random.Random) -> Iterable[tuple]:
    letters = list(gens) + [invert_letter(g) for g in gens]
    for _ in range(count):
        n = rng.randint(1, max_len)
        yield free_reduce(tuple(rng.choice(letters) for _ in range(n)))


def random_kernel_words(hom: FiniteGroupHom, count: int, max_len: int = 12, seed: int = 0,
                        max_tries: int = 10_000_000) -> list[tuple]:
    """Seed-fixed random reduced words of length <= max_len lying in ker(hom)."""
    rng = random.Random(seed)
    gens = list(hom.source.generators)
    letters = gens + [invert_letter(g) for g in gens]
    letter_images = {x: hom.letter(x) for x in letters}
    G = hom.target
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > max_tries:
            raise CoverError("could not sample enough kernel words")
        w = free_reduce(tuple(rng.choice(letters) for _ in range(rng.randint(1, max_len))))
        if not w:
            continue
        x = G.identity
        for c in w:
            x = G.mul(x, letter_images[c])
        if x == G.identity:
            out.append(w)
    return out


def schreier_bound(index: int, n_gens: int) -> int:
    """Rank of an index-k subgroup of a free group of rank n."""
    return index * (n_gens - 1) + 1


def lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
