import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from circlerig.circle_maps import Moebius, MoebiusTransform, Rotation
from circlerig.denjoy import (
    Base, Inserted, MarkedPointNotFree, blow_up, check_semi_conjugacy, collapse_map, compare_euler,
    compare_rotation_numbers, cyclic_order, minimality_probe, point_from_json, point_to_json,
)
from circlerig.euler import flip_rep
from circlerig.rotation import rotation_number

GOLDEN = (math.sqrt(5) - 1) / 2


@pytest.fixture(scope="module")
def base(surface2):
    return surface2.boundary_action()


@pytest.fixture(scope="module")
def blown(base):
    return blow_up(base, 0.2718281828, lam=0.3, depth=8)


# -- cyclic order

def test_cyclic_order_examples():
    assert cyclic_order(0.1, 0.5, 0.9) == 1
    assert cyclic_order(0.9, 0.5, 0.1) == -1
    assert cyclic_order(0.3, 0.3, 0.7) == 0
    assert cyclic_order(0.5, 0.9, 0.1) == 1


@given(st.floats(0, 1, exclude_max=True), st.floats(0, 1, exclude_max=True), st.floats(0, 1, exclude_max=True))
def test_cyclic_order_is_alternating(p, q, r):
    s = cyclic_order(p, q, r)
    assert cyclic_order(q, r, p) == s and cyclic_order(q, p, r) == -s


# -- symbolic action

def test_symbolic_equivariance(blown):
    rng = random.Random(1)
    c = blown.census
    collapse = collapse_map(blown)
    for _ in range(1000):
        x = rng.choice(blown.letters)
        if rng.random() < 0.5:
            w = c.word(rng.randrange(len(c)))
            p = Inserted(w, rng.random())
            q = blown.act(x, p)
            assert q.t == p.t and q.word == blown.canonical((x,) + w)
        else:
            p = Base(rng.random())
        d = abs(collapse(blown.act(x, p)) - float(blown.maps[x](collapse(p))))
        assert min(d, 1 - d) < 1e-9


def test_identity_word_acts_trivially(blown):
    for p in (Base(0.4), Inserted(("a1", "B2"), 0.3), Inserted((), 0.9)):
        assert blown.act_word((), p) == p
        q = blown.act_word(("a1", "A1"), p)
        assert blown.same(p, q)


def test_inserted_endpoints_collapse_together(blown):
    for w in [(), ("a1",), ("b2", "A1")]:
        assert blown.collapse(Inserted(w, 0.0)) == blown.collapse(Inserted(w, 1.0)) == blown.position(w)
        assert blown.coordinate(Inserted(w, 1.0)) - blown.coordinate(Inserted(w, 0.0)) == pytest.approx(
            blown.length_of(blown.canonical(w)))


def test_inserted_lengths(blown):
    assert blown.total < 1
    assert blown.length_of(()) == pytest.approx(0.3)
    assert blown.free_orbit_certificate()["tested_word_length"] >= 8


def test_symbolic_order_is_total(blown):
    rng = random.Random(2)
    pts = [Inserted(blown.census.word(rng.randrange(len(blown.census))), rng.random()) for _ in range(30)]
    pts += [Base(rng.random()) for _ in range(30)]
    coords = [blown.coordinate(p) for p in pts]
    for _ in range(500):
        i, j, k = rng.sample(range(len(pts)), 3)
        assert blown.cyclic_order(pts[i], pts[j], pts[k]) == cyclic_order(coords[i], coords[j], coords[k])


def test_fixed_point_is_not_free(base):
    from circlerig.circle_maps import fixed_points
    a = base.images["a1"]
    p = fixed_points(a.m)[0].turn
    with pytest.raises(MarkedPointNotFree):
        blow_up(base, p, depth=4)


def test_lambda_guard(base):
    with pytest.raises(ValueError):
        blow_up({"a": Rotation(GOLDEN)}, 0.0, lam=1.5)


def test_point_json_round_trip():
    for p in (Base(0.25), Inserted(("a1", "B2"), 0.5)):
        assert point_from_json(point_to_json(p)) == p


# -- one generator: the classical Denjoy example

def test_denjoy_rotation_example():
    rep = {"a": Rotation(GOLDEN)}
    blown = blow_up(rep, 0.0, lam=0.5, depth=8)
    for k in range(-3, 3):
        w = ("a",) * k if k >= 0 else ("A",) * -k
        nxt = ("a",) * (k + 1) if k + 1 >= 0 else ("A",) * -(k + 1)
        assert blown.act("a", Inserted(w, 0.4)) == Inserted(nxt, 0.4)
    f = blown.circle_map("a")
    assert rotation_number(f, 10_000).contains(GOLDEN)
    probe = minimality_probe(blown, Base(0.1), 8)
    assert probe.gap_found and probe.max_gap >= blown.length_of(())


# -- certificates

def test_self_check_passes(base):
    cert = check_semi_conjugacy(base, base, samples=60)
    assert cert.passed and cert.orientation_mismatches == 0 and cert.witness is None


def test_flipped_action_fails_with_witness(base):
    cert = check_semi_conjugacy(base, flip_rep(base), correspondence=lambda x: -x % 1.0, samples=40)
    assert not cert.passed
    assert cert.orientation_mismatches == cert.triples_checked
    assert cert.witness["kind"] == "orientation" and len(cert.witness["words"]) == 3


def test_blow_up_is_semi_conjugate_to_base(blown, base):
    cert = check_semi_conjugacy(blown, base, collapse_map(blown), samples=80)
    assert cert.passed and cert.equivariance_failures == 0


# -- probes

def test_probe_of_finite_orbit():
    probe = minimality_probe({"a": Rotation(Fraction(1, 2))}, 0.1, 5)
    assert probe.max_gap == pytest.approx(0.5) and probe.orbit_size == 2


def test_base_probe_gaps_shrink(base):
    gaps = [minimality_probe(base, 0.2718281828, d).max_gap for d in (3, 4, 5, 6)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_blown_probe_keeps_identity_gap(blown):
    probe = minimality_probe(blown, Base(0.5), 5)
    assert probe.gap_found and probe.max_gap >= 0.3 * 1.0
    assert "word ''" in probe.witness


# -- invariants through the PL realisation

def test_rotation_numbers_agree(blown):
    assert all(c.agree for c in compare_rotation_numbers(blown, count=5, seed=3))


def test_moebius_rotation_blow_up_agrees():
    th = 0.7
    m = MoebiusTransform(math.cos(th), -math.sin(th), math.sin(th), math.cos(th))
    blown = blow_up({"a": Moebius(m)}, 0.1, lam=0.4, depth=6)
    a, b = rotation_number(Moebius(m), 10_000), rotation_number(blown.circle_map("a"), 10_000)
    assert abs(a.mid - b.mid) < 1e-3


def test_euler_number_survives_blow_up(blown):
    e0, e1 = compare_euler(blown)
    assert e0.integer == e1.integer and abs(e1.integer) == 2
