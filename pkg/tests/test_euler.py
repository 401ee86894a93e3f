import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from circlerig.circle_maps import Moebius, MoebiusTransform, PiecewiseLinear, Rotation
from circlerig.euler import (
    CrossValidationError, InvalidRepresentation, OrbifoldRep, PantsDecomposition, SurfaceGroupRep,
    canonical_pants, check_milnor_wood, check_multiplicativity, conjugate_rep, euler_orbifold, euler_pants,
    euler_relator, flip_rep, pants_contributions, rep_from_json, rotation_rep,
)
from circlerig.presentations import OrbifoldSignature


def random_sl2(rng):
    a, b, c = (rng.uniform(-1.5, 1.5) for _ in range(3))
    a = a if abs(a) > 0.3 else 0.3
    return MoebiusTransform(a, b, c, (1 + b * c) / a)


# -- abelian representations

@given(st.integers(2, 4), st.lists(st.fractions(0, 1), min_size=8, max_size=8))
def test_abelian_rep_has_zero_euler_number(g, angles):
    rep = rotation_rep(g, angles[: 2 * g])
    assert euler_relator(rep).integer == 0
    assert euler_pants(rep).integer == 0
    assert check_milnor_wood(euler_relator(rep), g)


def test_abelian_float_angles():
    rep = rotation_rep(3, [0.1, 0.71, 0.33, 0.5, 0.9, 0.2])
    assert euler_relator(rep).integer == 0
    assert euler_pants(rep).integer == 0


# -- standard representations

def test_standard_genus_two(surface2):
    rep = surface2.boundary_action()
    rel = euler_relator(rep)
    assert abs(rel.integer) == 2
    pa = euler_pants(rep)
    assert pa.integer == rel.integer
    parts = pants_contributions(rep, canonical_pants(2), 10_000)
    assert all(p.exact and p.rational in (-1, 0, 1) for p in parts)
    assert check_milnor_wood(rel, 2) and abs(rel.integer) == 2 * 2 - 2


def test_standard_genus_three(surface3):
    rep = surface3.boundary_action()
    assert abs(euler_relator(rep).integer) == 4
    assert euler_pants(rep).integer == euler_relator(rep).integer


def test_pants_sum_invariant_under_cyclic_permutation(surface2):
    rep = surface2.boundary_action()
    base = euler_pants(rep).integer
    for k in (1, 2):
        assert euler_pants(rep, canonical_pants(2).cyclically_permuted(k)).integer == base


def test_orientation_flip_negates(surface2):
    rep = surface2.boundary_action()
    assert euler_relator(flip_rep(rep)).integer == -euler_relator(rep).integer


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_conjugation_preserves_euler_number(surface2, seed):
    rng = random.Random(seed)
    rep = surface2.boundary_action()
    h = Moebius(random_sl2(rng)) if seed % 2 else PiecewiseLinear(((0.0, 0.1), (0.3, 0.2), (0.8, 0.95)))
    conj = conjugate_rep(rep, h)
    conj.tol = 1e-8
    assert euler_relator(conj).integer == euler_relator(rep).integer
    assert euler_pants(conj).integer == euler_relator(rep).integer


# -- checks and guards

def test_milnor_wood_examples():
    assert check_milnor_wood(2, 2)
    assert check_milnor_wood(0, 3)
    assert not check_milnor_wood(3, 2)   # 2g - 1
    assert not check_milnor_wood(-5, 3)


def test_multiplicativity_examples(orb2222_2, orb334, surface2):
    s = euler_relator(surface2.boundary_action())
    assert check_multiplicativity(euler_orbifold(orb2222_2.boundary_action()), 8, s)
    assert check_multiplicativity(euler_orbifold(orb334.boundary_action()), 24, s)
    assert check_multiplicativity(Fraction(0), 5, 0)
    assert not check_multiplicativity(Fraction(1, 4), 4, 2)


def test_non_representation_is_rejected():
    gens = OrbifoldSignature(2).generators
    images = {g: Moebius(MoebiusTransform(1 + 0.1 * i, 0.2, 0.1, (1 + 0.02) / (1 + 0.1 * i)))
              for i, g in enumerate(gens)}
    rep = SurfaceGroupRep.of_genus(2, images)
    with pytest.raises(InvalidRepresentation):
        euler_relator(rep)


def test_bad_pants_is_rejected(surface2):
    rep = surface2.boundary_action()
    bad = PantsDecomposition(2, (("a1", "b1", "a2"), ("a1 b1", "A1", "B1")))
    with pytest.raises(InvalidRepresentation):
        euler_pants(rep, bad)
    with pytest.raises(ValueError):
        PantsDecomposition(3, (("a1", "b1", "B1 A1"),))


def test_cross_validation_flags_disagreement(surface2, monkeypatch):
    import circlerig.euler as eu
    rep = surface2.boundary_action()
    real = eu.euler_relator
    monkeypatch.setattr(eu, "euler_relator", lambda r, n=10_000: eu.EulerNumber(
        real(r, n).value.shift(1), Fraction(real(r, n).integer + 1), "relator", n))
    with pytest.raises(CrossValidationError):
        eu.euler_pants(rep)


# -- orbifolds

def test_orbifold_examples(orb2222_2, orb334):
    e = euler_orbifold(orb2222_2.boundary_action()).isolated
    assert abs(e) == Fraction(1, 4)
    e = euler_orbifold(orb334.boundary_action()).isolated
    assert abs(e) == Fraction(1, 12)


def test_orbifold_trivial_cone_images():
    sig = OrbifoldSignature(1, (2, 3))
    images = {"a1": Rotation(Fraction(1, 7)), "b1": Rotation(Fraction(2, 9)),
              "q1": Rotation(0), "q2": Rotation(0)}
    assert euler_orbifold(OrbifoldRep(sig, images)).isolated == 0


def test_rep_json_round_trip(orb334, surface2):
    for geo in (orb334, surface2):
        rep = geo.boundary_action()
        back = rep_from_json(rep.to_json())
        assert type(back) is type(rep)
        assert back.generators == rep.generators
        for g in rep.generators:
            assert back.images[g].m.close_to(rep.images[g].m)
