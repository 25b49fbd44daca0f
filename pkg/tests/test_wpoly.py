import json
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wproj.counting import count_zeros
from wproj.errors import HomogeneityError, ParseError, UsageError
from wproj.gf import field_create, field_from_q
from wproj.wpoly import (
    WeightedPolynomial,
    evaluate,
    evaluate_on,
    is_homogeneous,
    monomial_basis,
    multiply,
    p1_points,
    parse_poly,
    product_of_forms,
    pullback,
    random_polynomial,
    saturating_poly,
    twist,
    weighted_degree,
)
from wproj.wps import point_set

F2, F3, F5 = field_create(2), field_create(3), field_create(5)


def test_monomial_basis_examples():
    assert set(monomial_basis((1, 1, 2), 2)) == {(2, 0, 0), (1, 1, 0), (0, 2, 0), (0, 0, 1)}
    assert set(monomial_basis((2, 3), 6)) == {(3, 0), (0, 2)}
    assert monomial_basis((2, 3), 1) == []


def test_monomial_basis_order_and_degree():
    basis = monomial_basis((1, 2, 3), 7)
    assert basis == sorted(basis, reverse=True)
    assert all(weighted_degree(e, (1, 2, 3)) == 7 for e in basis)
    # brute-force count of solutions
    assert len(basis) == sum(1 for e in product(range(8), repeat=3) if e[0] + 2 * e[1] + 3 * e[2] == 7)


def test_parse_examples():
    f = parse_poly("X0^3*X1 - X0*X1^3", (1, 1), F3)
    assert f.degree == 4 and len(f) == 2
    with pytest.raises(HomogeneityError, match="3 and 2"):
        parse_poly("X0^2*X1 + 2*X2", (1, 1, 2), F3)
    g = parse_poly("X0 - X1^2", (2, 1), F5)
    assert g.degree == 2


@pytest.mark.parametrize("bad", ["X3", "X0^", "5*X0", "X0 +", "Y0", "X0**2", "X0^-1"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_poly(bad, (1, 1), F3)


def test_parse_zero_polynomial_has_no_terms():
    f = parse_poly("X0 - X0", (1, 1), F3)
    assert f.is_zero()


def test_parse_extension_coefficients():
    F9 = field_create(3, 2)
    f = parse_poly("g^3*X0 + g*X1 + 2*X0", (1, 1), F9)
    assert parse_poly(str(f), (1, 1), F9) == f
    assert f.term_dict()[(0, 1)] == F9.delta


def test_text_and_json_round_trip():
    F4 = field_create(2, 2)
    rng = np.random.default_rng(1)
    for _ in range(50):
        f = random_polynomial((1, 2, 3), 6, F4, rng)
        assert parse_poly(f.to_text(), (1, 2, 3), F4) == f
        assert WeightedPolynomial.from_json(json.loads(json.dumps(f.to_json())), F4) == f


def test_is_homogeneous_examples():
    terms = {(2, 0): 1, (0, 1): F3.neg(1)}
    chk = is_homogeneous(terms, (1, 2), F3)
    assert chk.homogeneous and chk.degree == 2
    chk = is_homogeneous(terms, (1, 1), F3)
    assert not chk.homogeneous and set(chk.degrees) == {1, 2}
    chk = is_homogeneous({}, (1, 1), F3)
    assert chk.homogeneous and chk.degree is None


def test_evaluate_examples():
    assert evaluate(parse_poly("X0*X1", (1, 1), F3), (1, 2)) == 2
    assert evaluate(parse_poly("X0^3*X1 - X0*X1^3", (1, 1), F2), (1, 1)) == 0
    assert evaluate(parse_poly("X0 - X1^2", (2, 1), F5), (4, 2)) == 0


def test_pullback_examples():
    f = parse_poly("X0 - X1^2", (2, 1), F5)
    assert pullback(f, 0) == parse_poly("X0^2 - X1^2", (1, 1), F5)
    g = parse_poly("X2", (1, 1, 2), F3)
    assert pullback(g, 2) == parse_poly("X2^2", (1, 1, 1), F3)
    h = parse_poly("X0^2 + X2", (1, 1, 2), F3)
    assert pullback(h, 0) == h


def test_twist_examples():
    f = parse_poly("X0*X1", (1, 1), F3)
    assert twist(f, 1, 1) == f.scale(2)
    assert twist(f, 1, 0) == f
    g = parse_poly("X1^2", (1, 1), F5)
    assert twist(g, 1, 1) == g.scale(4)


def test_product_of_forms_examples():
    F = field_create(2)
    f = product_of_forms([(1, 0), (0, 1)], 0, 1, (1, 1, 2), 2, F)
    # (X0 - 0)(0 - X1) = -X0*X1, which over GF(2) is X0*X1
    assert f == parse_poly("X0*X1", (1, 1, 2), F)
    g = product_of_forms([(1, 1)], 0, 1, (2, 3), 6, F5)
    assert g == parse_poly("X0^3 - X1^2", (2, 3), F5)
    with pytest.raises(UsageError):
        product_of_forms([(1, 1), (2, 2)], 0, 1, (1, 1), 2, F5)


def test_product_of_forms_over_gf3_is_x0x1_up_to_scalar():
    f = product_of_forms([(1, 0), (0, 1)], 0, 1, (1, 1, 2), 2, F3)
    assert f == parse_poly("X0*X1", (1, 1, 2), F3).scale(2)


def test_saturating_examples():
    assert saturating_poly(4, (1, 1, 2), F2) == parse_poly("X0^3*X1 - X0^2*X1^2", (1, 1, 2), F2)
    assert saturating_poly(3, (1, 1), F2) == parse_poly("X0^2*X1 - X0*X1^2", (1, 1), F2)
    with pytest.raises(UsageError):
        saturating_poly(2, (1, 1), F3)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_evaluate_on_matches_scalar(q):
    F = field_from_q(q)
    W = (1, 2, 3)
    ps = point_set(W, F)
    rng = np.random.default_rng(q)
    for d in (3, 5, 6):
        f = random_polynomial(W, d, F, rng)
        fast = evaluate_on(f, ps)
        slow = [F.rank(evaluate(f, P.coords)) for P in ps.points]
        assert list(fast) == slow


def test_multiply_degrees_add():
    f = parse_poly("X0 + X1", (1, 1), F3)
    g = parse_poly("X0 - X1", (1, 1), F3)
    assert multiply(f, g) == parse_poly("X0^2 - X1^2", (1, 1), F3)


def test_p1_points():
    assert p1_points(F3) == [(0, 1), (1, 0), (1, 1), (1, 2)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9]), st.integers(0, 10**6))
def test_pullback_and_twist_invariants(q, seed):
    F = field_from_q(q)
    rng = np.random.default_rng(seed)
    W = (1, 2, 3)
    d = int(rng.choice([2, 3, 4, 5, 6]))
    f = random_polynomial(W, d, F, rng)
    i = int(rng.integers(0, 3))
    g = pullback(f, i)
    assert g.degree == f.degree and g.weights[i] == 1
    # evaluating the pullback at x equals evaluating f at x with x_i raised to a_i
    for P in point_set(g.W, F).points[:20]:
        v = list(P.coords)
        w = list(v)
        w[i] = F.pow(w[i], W[i])
        assert evaluate(g, v) == evaluate(f, w)
    # twists compose additively and have period q-1
    j, k = int(rng.integers(0, q)), int(rng.integers(0, q))
    assert twist(twist(f, i, j), i, k) == twist(f, i, j + k)
    assert twist(f, i, q - 1) == f
    # a twist by j*a_i is a scalar multiple, which keeps the zero count
    assert count_zeros(twist(f, i, W[i])) == count_zeros(f)
