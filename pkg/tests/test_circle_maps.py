import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from circlerig.circle_maps import (
    ELLIPTIC, HYPERBOLIC, IDENTITY, PARABOLIC, CircleMapError, CompositionDomainError, LiftedHomeo, Moebius,
    MoebiusTransform, NoFixedPointError, PiecewiseLinear, Rotation, Word, boundary_to_turn, canonical_lift,
    classify_moebius, compose, conjugate, fixed_points, flip, free_reduce, homeo_from_json, homeo_to_json,
    inverse, is_identity_map, maps_agree, parse_word, power, sample_grid, turn_to_boundary,
)

HYP = MoebiusTransform(2, 0, 0, 0.5)


def rot_matrix(theta):
    return MoebiusTransform(math.cos(theta), -math.sin(theta), math.sin(theta), math.cos(theta))


sl2 = st.tuples(*[st.floats(-3, 3) for _ in range(3)]).filter(lambda t: abs(t[0]) > 0.2).map(
    lambda t: MoebiusTransform(t[0], t[1], t[2], (1 + t[1] * t[2]) / t[0]))
angles = st.floats(0, 1, exclude_max=True)


def pl_maps():
    @st.composite
    def build(draw):
        n = draw(st.integers(2, 8))
        xs = sorted(set(draw(st.lists(st.floats(0, 0.999), min_size=n, max_size=n))))
        gaps = draw(st.lists(st.floats(0.05, 1), min_size=len(xs), max_size=len(xs)))
        ys = np.cumsum(gaps) / (sum(gaps) * 1.0001)
        shift = draw(st.floats(-2, 2))
        if len(xs) < 2 or np.any(np.diff(xs) < 1e-6):
            return Rotation(shift)
        return PiecewiseLinear.from_lift_points(np.array(xs), ys + shift)
    return build()


homeos = st.one_of(sl2.map(Moebius), angles.map(Rotation), pl_maps())


# -- chart

def test_cayley_chart_anchors():
    assert boundary_to_turn(math.inf) == 0.0
    assert boundary_to_turn(0.0) == pytest.approx(0.5)
    assert turn_to_boundary(0.5) == pytest.approx(0.0, abs=1e-15)
    for x in (-3.0, -0.2, 0.7, 5.0):
        assert turn_to_boundary(boundary_to_turn(x)) == pytest.approx(x)


# -- evaluate

def test_evaluate_examples():
    assert Rotation(Fraction(1, 4))(0.5) == pytest.approx(0.75)
    assert Moebius(MoebiusTransform.identity())(0.3) == pytest.approx(0.3)
    f = Moebius(HYP)
    for t in (boundary_to_turn(0.0), boundary_to_turn(math.inf)):
        assert f(t) == pytest.approx(t, abs=1e-12)


def test_moebius_matches_upper_half_plane_action():
    m = MoebiusTransform(1.3, 0.4, -0.7, 0.5)
    for x in (-2.0, 0.1, 3.3):
        y = (m.a * x + m.b) / (m.c * x + m.d)
        assert Moebius(m)(boundary_to_turn(x)) == pytest.approx(boundary_to_turn(y), abs=1e-12)


# -- lifts

def test_canonical_lift_of_rotations():
    F = canonical_lift(Rotation(Fraction(1, 3)))
    assert F(0.25) == pytest.approx(0.25 + 1 / 3)
    G = canonical_lift(Rotation(0))
    assert G(0.7) == 0.7


@given(homeos, st.floats(-5, 5))
def test_lift_is_degree_one(f, x):
    F = canonical_lift(f)
    assert F(x + 1) == pytest.approx(F(x) + 1, abs=1e-9)
    assert F.shift(1)(x) == pytest.approx(F(x) + 1, abs=1e-12)
    assert 0 <= F(0.0) < 1 + 1e-12


@given(homeos)
def test_lift_monotone_on_grid(f):
    x = np.linspace(0, 1, 1000, endpoint=False)
    y = np.asarray(canonical_lift(f)(x))
    assert np.all(np.diff(y) > 0)


# -- composition

def test_compose_examples():
    r = compose(Rotation(Fraction(1, 4)), Rotation(Fraction(1, 4)))
    assert isinstance(r, Rotation) and r.angle == Fraction(1, 2)
    M, N = MoebiusTransform(1, 2, 0, 1), MoebiusTransform(2, 0, 1, 0.5)
    prod = compose(Moebius(M), Moebius(N))
    assert isinstance(prod, Moebius)
    assert prod.m.close_to(MoebiusTransform.from_array(M.array @ N.array))
    assert prod.m.a * prod.m.d - prod.m.b * prod.m.c == pytest.approx(1)


@given(homeos)
def test_compose_with_inverse_is_identity(f):
    assert is_identity_map(compose(f, inverse(f)), 1e-10, 64)
    assert is_identity_map(compose(inverse(f), f), 1e-10, 64)


@given(homeos, homeos)
def test_compose_applies_right_factor_first(f, g):
    x = sample_grid(16)
    d = (np.asarray(compose(f, g).lift(x)) - np.asarray(f.lift(g.lift(x)))) % 1.0
    assert np.all(np.minimum(d, 1 - d) < 1e-10)


def test_power_and_conjugate():
    f = Moebius(MoebiusTransform(1.2, 0.3, 0.1, 0.9))
    assert maps_agree(power(f, 3), compose(f, compose(f, f)))
    assert is_identity_map(power(f, 0))
    assert maps_agree(power(f, -2), inverse(compose(f, f)))
    h = Rotation(0.2)
    assert maps_agree(conjugate(h, f), compose(h, compose(f, inverse(h))))


def test_lifted_homeo_algebra():
    F = canonical_lift(Moebius(MoebiusTransform(1.1, 0.5, -0.2, 0.8)))
    G = canonical_lift(Rotation(0.3)).shift(2)
    x = np.linspace(-1, 1, 9)
    assert np.allclose(F.compose(G)(x), F(G(x)))
    assert np.allclose(F.inverse()(F(x)), x, atol=1e-12)
    assert np.allclose(F.power(3)(x), F(F(F(x))), atol=1e-12)
    assert np.allclose(F.power(-2)(F(F(x))), x, atol=1e-10)
    assert isinstance(F @ G, LiftedHomeo)


# -- classification and fixed points

def test_classify_examples():
    assert classify_moebius(HYP) == HYPERBOLIC
    assert classify_moebius(rot_matrix(math.pi / 5)) == ELLIPTIC
    assert classify_moebius(MoebiusTransform(1, 1, 0, 1)) == PARABOLIC
    assert classify_moebius(MoebiusTransform.identity()) == IDENTITY


def test_fixed_points_examples():
    fps = {p.stability: p.turn for p in fixed_points(HYP)}
    # z -> 4z pushes everything towards infinity
    assert fps["attracting"] == pytest.approx(boundary_to_turn(math.inf), abs=1e-12)
    assert fps["repelling"] == pytest.approx(boundary_to_turn(0.0), abs=1e-12)
    (p,) = fixed_points(MoebiusTransform(1, 1, 0, 1))
    assert p.turn == pytest.approx(0.0, abs=1e-12) and p.stability == "neutral"
    with pytest.raises(NoFixedPointError):
        fixed_points(rot_matrix(0.3))


@given(sl2.filter(lambda m: abs(m.trace) > 2.2), angles)
def test_iterates_converge_to_attracting_point(m, x):
    fps = fixed_points(m)
    attr = next(p.turn for p in fps if p.stability == "attracting")
    rep = next(p.turn for p in fps if p.stability == "repelling")
    if min(abs(x - rep), 1 - abs(x - rep)) < 1e-3:
        return
    f = Moebius(m)
    for _ in range(100):
        x = f(x)
    assert min(abs(x - attr), 1 - abs(x - attr)) < 1e-6


@given(sl2)
def test_fixed_points_are_fixed(m):
    if classify_moebius(m) in (ELLIPTIC, IDENTITY):
        return
    f = Moebius(m)
    for p in fixed_points(m):
        d = abs(f(p.turn) - p.turn)
        assert min(d, 1 - d) < 1e-7


# -- normalisation and errors

def test_projective_sign_normalisation():
    m = MoebiusTransform(-2, -1, -1, -1)
    assert m.a > 0 and m.a * m.d - m.b * m.c == pytest.approx(1)
    assert MoebiusTransform(0, -1, 1, 0).b > 0
    with pytest.raises(CircleMapError):
        MoebiusTransform(1, 2, 2, 1)


def test_pl_validation_and_inverse():
    with pytest.raises(CircleMapError):
        PiecewiseLinear(((0.1, 0.5), (0.2, 0.4)))
    f = PiecewiseLinear(((0.0, 0.1), (0.3, 0.2), (0.6, 0.8)))
    x = sample_grid(64)
    assert np.allclose(f.inverse().lift(f.lift(x)), x, atol=1e-12)


# -- words

def test_word_helpers():
    assert parse_word("a1 B1") == ("a1", "B1")
    assert free_reduce(("a", "b", "B", "A", "c")) == ("c",)
    images = {"a": Rotation(Fraction(1, 5)), "b": Moebius(HYP)}
    w = Word(images, ("a", "b", "A"))
    assert maps_agree(w, compose(images["a"], compose(images["b"], inverse(images["a"]))))
    assert is_identity_map(Word(images, ()))
    assert is_identity_map(Word(images, ("a", "A")))
    other = Word({"a": Rotation(0.1)}, ("a",))
    with pytest.raises(CompositionDomainError):
        compose(w, other)


def test_flip_conjugates_by_reflection():
    f = Moebius(MoebiusTransform(1.4, 0.3, -0.5, 0.6))
    g = flip(f)
    for x in (0.1, 0.37, 0.8):
        assert g(-x % 1) == pytest.approx(-f(x) % 1, abs=1e-12)
    pl = PiecewiseLinear(((0.0, 0.1), (0.3, 0.2), (0.6, 0.8)))
    for x in (0.05, 0.5):
        assert flip(pl)(-x % 1) == pytest.approx(-pl(x) % 1, abs=1e-12)


@given(homeos)
def test_json_round_trip(f):
    g = homeo_from_json(homeo_to_json(f))
    assert maps_agree(f, g, 1e-12)
