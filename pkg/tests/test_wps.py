import math
from functools import reduce
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from wproj.errors import BudgetError, ParseError, UsageError
from wproj.gf import field_create, field_from_q
from wproj.wps import (
    WeightSystem,
    bezout,
    canonicalize,
    distinguished_point,
    enumerate_points,
    parse_point,
    pn,
    point_set,
    representatives,
    strata,
)


def test_pn():
    assert pn(2, 3) == 13
    assert pn(-1, 7) == 0
    assert pn(0, 5) == 1


def test_weight_system_rejects_bad_input():
    with pytest.raises(UsageError):
        WeightSystem((1,))
    with pytest.raises(UsageError):
        WeightSystem((1, 0))


@pytest.mark.parametrize(
    "v,W,q,expected",
    [
        ((0, 2), (1, 2), 3, (0, 1)),
        ((1, 1), (1, 2), 3, (1, 1)),
        ((2, 1, 0), (1, 1, 2), 3, (1, 2, 0)),
    ],
)
def test_canonicalize_examples(v, W, q, expected):
    assert canonicalize(v, W, field_create(q)).coords == expected


def test_canonicalize_rejects_zero_and_length():
    F = field_create(3)
    with pytest.raises(UsageError):
        canonicalize((0, 0), (1, 2), F)
    with pytest.raises(UsageError):
        canonicalize((1, 0, 0), (1, 2), F)


def test_enumerate_examples():
    F3, F2 = field_create(3), field_create(2)
    assert [P.coords for P in enumerate_points((1, 2), F3)] == [(0, 1), (1, 0), (1, 1), (1, 2)]
    assert [P.coords for P in enumerate_points((1, 1), F2)] == [(0, 1), (1, 0), (1, 1)]
    assert len(enumerate_points((1, 1, 2), F2)) == 7


def test_representatives_examples():
    F3 = field_create(3)
    assert representatives(canonicalize((0, 1), (1, 2), F3)) == {(0, 1), (0, 2)}
    assert representatives(canonicalize((1, 1), (1, 1), F3)) == {(1, 1), (2, 2)}
    F4 = field_create(2, 2)
    O2 = distinguished_point((1, 1, 2), F4, 2)
    assert representatives(O2) == {(0, 0, c) for c in F4.nonzero()}


@pytest.mark.parametrize("bs", [[1], [2, 3], [3, 2], [6, 10, 15], [4, 6, 9], [1, 1, 1], [5, 7, 11, 13]])
def test_bezout(bs):
    g, u = bezout(bs)
    assert g == reduce(math.gcd, bs)
    assert sum(a * b for a, b in zip(u, bs)) == g


def test_bezout_straight_weights():
    assert bezout([1, 1, 1])[1] == [1, 0, 0]


def test_strata_indexing():
    st_ = strata((2, 4, 3))
    assert st_[0] is None
    assert st_[0b011].support == (0, 1) and st_[0b011].gcd == 2 and st_[0b011].reduced == (1, 2)


def test_point_text_round_trip():
    F = field_create(3, 2)
    for P in enumerate_points((1, 2), F):
        assert parse_point(str(P), F) == P.coords
    with pytest.raises(ParseError):
        parse_point("0:1", F)


def test_budget_guard():
    with pytest.raises(BudgetError):
        point_set((1, 1, 1), field_create(5), budget=100)


# -- scalar-orbit oracle ------------------------------------------------------
# Two GF(p)-vectors are the same rational point when some lambda in the
# algebraic closure moves one to the other. Such a lambda has lambda^g in
# GF(p) for g the gcd of the weights on the support, so it lies in GF(p^L),
# L = lcm of the weights, and a union-find over GF(p^L)^* gives an
# independent partition.

ORACLE_CASES = [
    ((1, 2), 3), ((1, 2), 5), ((1, 2), 7), ((2, 3), 2), ((2, 3), 3), ((2, 3), 5),
    ((1, 2, 3), 2), ((1, 2, 3), 3), ((1, 2, 3), 5), ((2, 4), 3), ((2, 4), 5), ((1, 2, 2), 3),
    ((2, 2, 3), 3), ((4, 6), 2), ((1, 1, 2), 3), ((1, 1, 2, 2), 3), ((1, 3), 7), ((3, 4), 2),
]


def _oracle_classes(W, p):
    L = reduce(math.lcm, W)
    big = field_create(p, L, max_size=10**6)
    # the prime subfield is encoded by the same integers in both fields
    scalars = [[big.pow(lam, a) for a in W] for lam in big.nonzero()]
    vecs = [v for v in product(range(p), repeat=len(W)) if any(v)]
    parent = {v: v for v in vecs}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for v in vecs:
        for pw in scalars:
            w = tuple(big.mul(c, x) for c, x in zip(pw, v))
            if all(x < p for x in w):
                a, b = find(v), find(w)
                if a != b:
                    parent[a] = b
    classes = {}
    for v in vecs:
        classes.setdefault(find(v), set()).add(v)
    return list(classes.values())


@pytest.mark.parametrize("W,p", ORACLE_CASES)
def test_canonicalize_matches_orbit_oracle(W, p):
    F = field_create(p)
    classes = _oracle_classes(W, p)
    assert len(classes) == pn(len(W) - 1, p)
    seen = set()
    for cls in classes:
        canon = {canonicalize(v, W, F).coords for v in cls}
        assert len(canon) == 1
        (c,) = canon
        assert c in cls and c not in seen
        seen.add(c)
        assert representatives(canonicalize(c, W, F)) == cls
        assert len(cls) == p - 1


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
@pytest.mark.parametrize("W", [(1, 1), (1, 2), (2, 3), (2, 4), (1, 1, 2), (1, 2, 3), (2, 3, 5), (1, 1, 2, 2)])
def test_point_count_and_representatives(q, W):
    F = field_from_q(q)
    ps = point_set(W, F)
    assert len(ps) == pn(len(W) - 1, q)
    reps = set()
    for P in ps.points:
        r = representatives(P)
        assert len(r) == q - 1
        reps |= r
    assert len(reps) == q ** len(W) - 1


@pytest.mark.parametrize("q", [4, 8, 9])
def test_vectorized_matches_scalar_canonicalize(q):
    F = field_from_q(q)
    W = WeightSystem((2, 3, 6))
    ps = point_set(W, F)
    expect = sorted({canonicalize(v, W, F).ranks for v in product(F.elements(), repeat=3) if any(v)})
    assert [tuple(int(x) for x in row) for row in ps.ranks] == expect


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from([2, 3, 4, 5, 7, 8, 9, 16]),
    st.lists(st.integers(1, 8), min_size=2, max_size=4),
    st.data(),
)
def test_canonicalize_idempotent_and_scalar_invariant(q, W, data):
    F = field_from_q(q)
    v = tuple(data.draw(st.lists(st.integers(0, q - 1), min_size=len(W), max_size=len(W))))
    if not any(v):
        v = (1,) + v[1:]
    lam = data.draw(st.integers(1, q - 1))
    P = canonicalize(v, W, F)
    assert canonicalize(P.coords, W, F) == P
    scaled = tuple(F.mul(F.pow(lam, a), x) for a, x in zip(W, v))
    assert canonicalize(scaled, W, F) == P
    assert v in representatives(P)
