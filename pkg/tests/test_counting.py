from itertools import product

import numpy as np
import pytest

from wproj.counting import (
    audit_antecedent,
    audit_identities,
    audit_lesZi,
    audit_mondo,
    audit_preimage,
    bounds,
    count_zeros,
    is_safe,
    literal_membership,
    pairwise_coprime,
    partition_counts,
    preimage_count,
    unscrew,
    zero_set,
)
from wproj.errors import BudgetError, ZeroPolynomialError
from wproj.gf import field_create, field_from_q
from wproj.wpoly import WeightedPolynomial, evaluate, parse_poly, random_polynomial, saturating_poly
from wproj.wps import canonicalize, pn, point_set

F2, F3, F4, F5 = field_create(2), field_create(3), field_create(2, 2), field_create(5)


def brute_count(f):
    """Zeros by evaluating at every nonzero vector, grouped into points."""
    F = f.field
    pts = {canonicalize(v, f.weights, F).coords for v in product(F.elements(), repeat=len(f.weights))
           if any(v) and evaluate(f, v) == 0}
    return len(pts)


def test_count_examples():
    assert count_zeros(parse_poly("X0", (1, 1, 2), F3)) == 4
    assert count_zeros(saturating_poly(3, (1, 1), F2)) == 3
    assert count_zeros(parse_poly("X0*X1", (1, 1, 1), F2)) == 5


def test_zero_polynomial_rejected():
    with pytest.raises(ZeroPolynomialError):
        count_zeros(WeightedPolynomial.from_terms(F3, (1, 1), 2, {}))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("W", [(1, 2), (2, 3), (1, 1, 2), (1, 2, 3)])
def test_count_matches_brute_force(q, W):
    F = field_from_q(q)
    rng = np.random.default_rng(7 * q)
    for d in (2, 3, 6):
        f = random_polynomial(W, d, F, rng)
        assert count_zeros(f) == brute_count(f)


def test_zero_set_lists_points():
    f = parse_poly("X0", (1, 2), F3)
    assert [str(P) for P in zero_set(f)] == ["[0:1]"]


def test_partition_examples():
    pc = partition_counts(None, 1, "disjoint", W=(1, 2), F=F3)
    assert (pc.R, pc.T, pc.I) == (2, 1, 1)
    for q in (2, 3, 4, 5):
        assert partition_counts(None, 0, "disjoint", W=(1, 1), F=field_from_q(q)).I == 0
    pc = partition_counts(parse_poly("X0", (1, 2), F3), 1, "disjoint")
    assert (pc.R, pc.T, pc.I) == (1, 0, 0)


def test_literal_mode_reports_overlap():
    pc = partition_counts(None, 1, "literal", W=(1, 2), F=F3)
    assert "[0:1]" in pc.overlap  # O_1 is in R_1 and I_1


def test_preimage_examples():
    W = (1, 2)
    n, pre = preimage_count(canonicalize((1, 1), W, F5), 1)
    assert n == 2 and {str(P) for P in pre} == {"[1:1]", "[1:4]"}
    assert preimage_count(canonicalize((1, 0), W, F5), 1)[0] == 1
    assert preimage_count(canonicalize((1, 2), W, F3), 1)[0] == 0


@pytest.mark.parametrize("W,q", [((1, 2), 5), ((2, 3), 7), ((1, 2, 2), 3), ((2, 4), 5), ((1, 2, 3), 4)])
def test_preimages_cover_upstairs(W, q):
    F = field_from_q(q)
    for i in range(len(W)):
        total = sum(preimage_count(P, i)[0] for P in point_set(W, F).points)
        assert total == pn(len(W) - 1, q)


def test_bounds_examples():
    b = bounds(2, (1, 1, 2), F3)
    assert (b.pn, b.serre, b.conjecture, b.lower) == (13, 7, 7, 7)
    assert bounds(3, (1, 1), F2).serre == 3 == pn(1, 2)
    b = bounds(1, (2, 3), F5)
    assert b.conjecture is None and b.serre == 1
    assert any("inapplicable" in x for x in b.notes)


def test_lesZi_examples():
    assert audit_lesZi((1, 1, 2), F3, 2).passed
    r = audit_lesZi((1, 1), F4, 1)
    assert r.passed and r.details["r"] == 1 and r.details["I_empty"]
    r = audit_lesZi((1, 2), F3, 1)
    assert r.passed and r.details["items"] == {"i": True, "ii": True, "iii": True}
    assert "[0:1]" in r.details["overlap"]


def test_identities_examples():
    r = audit_identities(parse_poly("X0*X1", (1, 1), F3), 1)
    assert r.passed and r.lhs["i"] == 2 and r.lhs["ii"] == 2
    # both zeros [0:1] = O_1 and [1:0] lie in R_1, so N(pullback) = 1*0 + 2
    c = r.details["counts"]
    assert (c["R"], c["T"], c["I"]) == (2, 0, 0)
    r = audit_identities(parse_poly("X0", (1, 2), F3), 1)
    assert r.passed and r.lhs["i"] == 1 and r.details["counts"]["R"] == 1 and r.lhs["ii"] == 1


def test_identities_unsafe_example_is_flagged():
    r = audit_identities(parse_poly("X1 - X2", (1, 2, 2), F3), 1)
    assert r.safe is False
    assert set(r.lhs) == set(r.rhs)  # observed counts recorded either way


def test_mondo_examples():
    r = audit_mondo(parse_poly("X0", (1, 2), F3), 1)
    assert r.passed and (r.lhs, r.rhs) == (2, 2) and r.details["equality"]
    rng = np.random.default_rng(0)
    for _ in range(30):
        f = random_polynomial((1, 2, 3), 6, F4, rng)
        for i in range(3):
            rep = audit_mondo(f, i)
            assert rep.passed
            if rep.details["r"] == 1:
                assert rep.details["equality"]


def test_pairwise_coprime():
    assert pairwise_coprime((1, 2, 3)) and pairwise_coprime((2, 3))
    assert not pairwise_coprime((1, 2, 2))


def test_unscrew_examples():
    polys, rep = unscrew(parse_poly("X0", (1, 2), F3))
    assert len(polys) == 2 and all(str(g) == "X0" and g.W.is_straight() for g in polys)
    assert rep.passed and (rep.lhs, rep.rhs) == (2, 2)


def test_unscrew_two_three_over_gf5():
    # gcd(2,4) = 2 and gcd(3,4) = 1, so the chain has 2 polynomials
    polys, rep = unscrew(parse_poly("X0^3 - X1^2", (2, 3), F5))
    assert rep.details["r"] == [2, 1] and len(polys) == 2 and rep.passed


def test_unscrew_straight_is_trivially_tight():
    f = parse_poly("X0^2 + X1*X2", (1, 1, 1), F3)
    polys, rep = unscrew(f)
    assert all(c == count_zeros(f) for c in rep.details["counts"])


def test_unscrew_budget():
    with pytest.raises(BudgetError):
        unscrew(parse_poly("X0^6 + X1", (1, 6), field_create(7)), budget=2)


def test_safety_flags():
    assert is_safe((1, 2), F3, 1)
    assert not is_safe((1, 2, 2), F3, 1)


def test_antecedent_regression():
    rep = audit_antecedent((1, 2, 2), F3, 1)
    assert not rep.passed and rep.safe is False
    over = {o["point"]: o for o in rep.details["overlap"]}
    assert over["[0:1:1]"]["preimages"] == 1
    assert audit_antecedent((1, 2, 3), F5, 1).passed


@pytest.mark.parametrize("W,q", [((1, 2, 2), 3), ((2, 4), 5), ((1, 2), 3), ((2, 2, 3), 5)])
def test_preimage_identity_unconditional(W, q):
    F = field_from_q(q)
    rng = np.random.default_rng(3)
    for _ in range(20):
        f = random_polynomial(W, 4, F, rng)
        for i in range(len(W)):
            assert audit_preimage(f, i).passed


def test_literal_membership_shapes():
    mem = literal_membership((1, 2), F3, 1)
    assert mem.Z.shape == (4, 2) and mem.R.shape == (4,)
