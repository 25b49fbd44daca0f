"""Weighted-homogeneous polynomials over GF(q).

A polynomial is a sparse map from exponent tuples to nonzero field elements,
together with its weight system and declared weighted degree. Terms are kept
in basis order: lexicographic with X0 highest, i.e. descending exponent
tuples.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import HomogeneityError, ParseError, UsageError
from .gf import Field
from .wps import PointSet, WeightSystem, as_weights


def weighted_degree(exps, weights) -> int:
    return sum(e * a for e, a in zip(exps, weights))


@lru_cache(maxsize=None)
def _basis(weights: tuple[int, ...], d: int) -> tuple[tuple[int, ...], ...]:
    if len(weights) == 1:
        a = weights[0]
        return ((d // a,),) if d % a == 0 else ()
    a, rest = weights[0], weights[1:]
    out = []
    for e in range(d // a, -1, -1):
        out.extend((e,) + tail for tail in _basis(rest, d - e * a))
    return tuple(out)


def monomial_basis(W, d: int) -> list[tuple[int, ...]]:
    """Exponent tuples of weighted degree d, X0 highest lexicographic order."""
    if d < 0:
        raise UsageError(f"degree must be nonnegative, got {d}")
    return list(_basis(as_weights(W).weights, d))


@dataclass(frozen=True)
class WeightedPolynomial:
    field: Field
    weights: tuple[int, ...]
    degree: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def from_terms(cls, field: Field, W, degree: int, terms: dict) -> "WeightedPolynomial":
        W = as_weights(W)
        clean = {}
        for exps, c in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(W):
                raise UsageError(f"monomial {exps} has the wrong number of variables")
            if weighted_degree(exps, W) != degree:
                raise HomogeneityError(
                    f"monomial {exps} has weighted degree {weighted_degree(exps, W)}, expected {degree}"
                )
            if c:
                clean[exps] = int(c)
        ordered = tuple(sorted(clean.items(), reverse=True))
        return cls(field, W.weights, degree, ordered)

    @property
    def W(self) -> WeightSystem:
        return WeightSystem(self.weights)

    @property
    def n(self) -> int:
        return len(self.weights) - 1

    def term_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def scale(self, c: int) -> "WeightedPolynomial":
        F = self.field
        return WeightedPolynomial.from_terms(F, self.weights, self.degree, {e: F.mul(c, v) for e, v in self.terms})

    def to_text(self) -> str:
        return format_poly(self)

    def __str__(self):
        return format_poly(self)

    def to_json(self) -> dict:
        F = self.field
        return {
            "degree": self.degree,
            "weights": list(self.weights),
            "terms": [{"exps": list(e), "coeff": F.format_element(c)} for e, c in self.terms],
        }

    @classmethod
    def from_json(cls, obj: dict, field: Field) -> "WeightedPolynomial":
        terms = {tuple(t["exps"]): field.parse_element(str(t["coeff"])) for t in obj["terms"]}
        return cls.from_terms(field, obj["weights"], int(obj["degree"]), terms)

    def coefficient_vector(self) -> list[int]:
        """Coefficients over monomial_basis(W, degree), zeros included."""
        d = self.term_dict()
        return [d.get(m, 0) for m in monomial_basis(self.weights, self.degree)]

    @classmethod
    def from_coefficients(cls, field: Field, W, degree: int, coeffs) -> "WeightedPolynomial":
        basis = monomial_basis(W, degree)
        if len(coeffs) != len(basis):
            raise UsageError(f"expected {len(basis)} coefficients, got {len(coeffs)}")
        return cls.from_terms(field, W, degree, {m: int(c) for m, c in zip(basis, coeffs) if c})


def _format_monomial(exps) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(f"X{i}")
        elif e > 1:
            parts.append(f"X{i}^{e}")
    return "*".join(parts)


def format_poly(f: WeightedPolynomial) -> str:
    if not f.terms:
        return "0"
    F = f.field
    out = []
    for exps, c in f.terms:
        mono = _format_monomial(exps)
        if not mono:
            out.append(F.format_element(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{F.format_element(c)}*{mono}")
    return " + ".join(out)


_SIGN = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"\s*(?:X(\d+)(?:\^(\d+))?|(\d+)|g(?:\^(\d+))?)\s*")
_STAR = re.compile(r"\s*\*\s*")


def _parse_terms(text: str, n_vars: int, F: Field) -> list[tuple[tuple[int, ...], int]]:
    pos, end = 0, len(text)
    out = []
    first = True
    while True:
        m = _SIGN.match(text, pos)
        sign = 1
        if m:
            sign = -1 if m.group(1) == "-" else 1
            pos = m.end()
        elif not first:
            raise ParseError(f"expected '+' or '-' at position {pos} in {text!r}")
        first = False
        exps = [0] * n_vars
        coeff = None
        nfactors = 0
        while True:
            fm = _FACTOR.match(text, pos)
            if not fm or fm.end() == pos:
                raise ParseError(f"expected a coefficient or variable at position {pos} in {text!r}")
            var, e, num, gpow = fm.groups()
            if var is not None:
                i = int(var)
                if i >= n_vars:
                    raise ParseError(f"variable X{i} out of range for {n_vars} variables")
                exps[i] += int(e) if e is not None else 1
            else:
                if nfactors:
                    raise ParseError(f"coefficient must come first in a term, at position {pos} in {text!r}")
                if num is not None:
                    v = int(num)
                    if v >= F.p:
                        raise ParseError(f"coefficient {v} is not in GF({F.p})")
                    coeff = v
                else:
                    coeff = F.exp(int(gpow) if gpow is not None else 1)
            nfactors += 1
            pos = fm.end()
            sm = _STAR.match(text, pos)
            if sm and sm.end() < end:
                pos = sm.end()
                continue
            break
        c = 1 if coeff is None else coeff
        if sign < 0:
            c = F.neg(c)
        out.append((tuple(exps), c))
        if pos >= end or not text[pos:].strip():
            return out


def parse_poly(text: str, W, F: Field) -> WeightedPolynomial:
    W = as_weights(W)
    if not text.strip():
        raise ParseError("empty polynomial text")
    raw = _parse_terms(text, len(W), F)
    degrees = sorted({weighted_degree(e, W) for e, _ in raw}, reverse=True)
    if len(degrees) > 1:
        raise HomogeneityError(
            "non-homogeneous input: weighted degrees " + " and ".join(map(str, degrees)) + " mixed"
        )
    terms: dict = {}
    for exps, c in raw:
        terms[exps] = F.add(terms.get(exps, 0), c)
    return WeightedPolynomial.from_terms(F, W, degrees[0], terms)


@dataclass(frozen=True)
class HomogeneityCheck:
    homogeneous: bool
    degree: int | None
    degrees: tuple[int, ...]
    mismatches: tuple = ()


def is_homogeneous(terms: dict, W, F: Field, samples: int = 32) -> HomogeneityCheck:
    """Symbolic check plus the numeric identity F(l^a x) = l^d F(x).

    A numeric mismatch on a symbolically homogeneous input would mean an
    evaluation bug; mismatches are returned rather than raised.
    """
    W = as_weights(W)
    live = {tuple(e): c for e, c in terms.items() if c}
    degrees = tuple(sorted({weighted_degree(e, W) for e in live}))
    if not degrees:
        return HomogeneityCheck(True, None, ())
    if len(degrees) > 1:
        return HomogeneityCheck(False, None, degrees)
    d = degrees[0]
    f = WeightedPolynomial.from_terms(F, W, d, live)
    rng = np.random.default_rng(0)
    vecs = rng.integers(0, F.q, size=(samples, len(W)))
    bad = []
    for v in vecs:
        v = tuple(int(x) for x in v)
        base = evaluate(f, v)
        for lam in F.nonzero():
            moved = tuple(F.mul(F.pow(lam, a), x) for a, x in zip(W, v))
            if evaluate(f, moved) != F.mul(F.pow(lam, d), base):
                bad.append((v, lam))
    return HomogeneityCheck(not bad, d, degrees, tuple(bad))


def evaluate(f: WeightedPolynomial, v) -> int:
    F = f.field
    if len(v) != len(f.weights):
        raise UsageError(f"expected {len(f.weights)} coordinates, got {len(v)}")
    acc = 0
    for exps, c in f.terms:
        t = c
        for x, e in zip(v, exps):
            if e:
                t = F.mul(t, F.pow(int(x), e))
        acc = F.add(acc, t)
    return acc


def pullback(f: WeightedPolynomial, i: int) -> WeightedPolynomial:
    """Substitute X_i -> X_i^(a_i); the result lives on weights with a_i = 1."""
    a = f.weights[i]
    W2 = f.W.with_weight(i, 1)
    terms = {}
    for exps, c in f.terms:
        e = list(exps)
        e[i] *= a
        terms[tuple(e)] = c
    return WeightedPolynomial.from_terms(f.field, W2, f.degree, terms)


def twist(f: WeightedPolynomial, i: int, j: int, F: Field | None = None) -> WeightedPolynomial:
    """f composed with sigma_i^j: the i-th variable scaled by delta^j."""
    F = F or f.field
    terms = {exps: F.mul(c, F.exp(j * exps[i])) for exps, c in f.terms}
    return WeightedPolynomial.from_terms(F, f.weights, f.degree, terms)


def multiply(f: WeightedPolynomial, g: WeightedPolynomial) -> WeightedPolynomial:
    F = f.field
    terms: dict = {}
    for e1, c1 in f.terms:
        for e2, c2 in g.terms:
            e = tuple(x + y for x, y in zip(e1, e2))
            terms[e] = F.add(terms.get(e, 0), F.mul(c1, c2))
    return WeightedPolynomial.from_terms(F, f.weights, f.degree + g.degree, terms)


def _p1_normal(pair, F: Field) -> tuple[int, int]:
    a, b = (int(x) for x in pair)
    if a == 0 and b == 0:
        raise UsageError("(0:0) is not a point of P^1")
    s = F.inv(a if a else b)
    return F.mul(s, a), F.mul(s, b)


def p1_points(F: Field) -> list[tuple[int, int]]:
    """P^1(F_q) in canonical order, first nonzero coordinate 1."""
    return [(0, 1)] + [(1, b) for b in F.elements()]


def product_of_forms(pairs, r: int, s: int, W, d: int, F: Field) -> WeightedPolynomial:
    """prod_k (alpha_k X_r^(a_rs/a_r) - beta_k X_s^(a_rs/a_s)), a_rs = lcm(a_r, a_s)."""
    W = as_weights(W)
    if r == s:
        raise UsageError("r and s must be distinct")
    a_rs = math.lcm(W[r], W[s])
    if d % a_rs:
        raise UsageError(f"lcm(a_{r}, a_{s}) = {a_rs} does not divide d = {d}")
    pairs = list(pairs)
    if len(pairs) > F.q + 1:
        raise UsageError(f"at most q+1 = {F.q + 1} distinct factors exist")
    if len(pairs) != d // a_rs:
        raise UsageError(f"need d/a_rs = {d // a_rs} pairs, got {len(pairs)}")
    normal = [_p1_normal(p, F) for p in pairs]
    if len(set(normal)) != len(normal):
        raise UsageError("pairs must be distinct points of P^1")
    er, es = [0] * len(W), [0] * len(W)
    er[r] = a_rs // W[r]
    es[s] = a_rs // W[s]
    out = WeightedPolynomial.from_terms(F, W, 0, {(0,) * len(W): 1})
    for alpha, beta in pairs:
        factor = WeightedPolynomial.from_terms(
            F, W, a_rs, {tuple(er): int(alpha), tuple(es): F.neg(int(beta))}
        )
        out = multiply(out, factor)
    return out


def saturating_poly(d: int, W, F: Field) -> WeightedPolynomial:
    """X0^(d-q-1) (X0^q X1 - X0 X1^q), vanishing at every rational point."""
    W = as_weights(W)
    q = F.q
    if W[0] != 1 or W[1] != 1:
        raise UsageError("the first two weights must both be 1")
    if d < q + 1:
        raise UsageError(f"need d >= q+1 = {q + 1}, got {d}")
    e1 = [0] * len(W)
    e1[0], e1[1] = d - 1, 1
    e2 = [0] * len(W)
    e2[0], e2[1] = d - q, q
    return WeightedPolynomial.from_terms(F, W, d, {tuple(e1): 1, tuple(e2): F.neg(1)})


def monomial_value_table(monomials, ps: PointSet) -> np.ndarray:
    """Rank of each monomial at each point: shape (len(monomials), len(ps))."""
    qm1 = ps.F.q - 1
    E = np.asarray(monomials, dtype=np.int64).reshape(-1, len(ps.W))
    R = ps.ranks
    zero = (R == 0).astype(np.int64)
    logs = np.where(R > 0, R - 1, 0)
    vanish = ((E > 0).astype(np.int64) @ zero.T) > 0
    vals = (E @ logs.T) % qm1 + 1
    return np.where(vanish, 0, vals)


def evaluate_on(f: WeightedPolynomial, ps: PointSet) -> np.ndarray:
    """Ranks of f at every point of the set (via the kernel)."""
    F = f.field
    if not f.terms:
        return np.zeros(len(ps), dtype=np.int64)
    monos = [e for e, _ in f.terms]
    coeffs = np.array([F.rank(c) for _, c in f.terms], dtype=np.int64)
    vals = monomial_value_table(monos, ps)
    return kernels.eval_ranks(coeffs, vals, F.zech, F.q)


def random_polynomial(W, d: int, F: Field, rng: np.random.Generator) -> WeightedPolynomial:
    """Uniform nonzero element of S_d (rejection on the zero vector)."""
    basis = monomial_basis(W, d)
    if not basis:
        raise UsageError(f"no monomial of weighted degree {d}")
    while True:
        ranks = rng.integers(0, F.q, size=len(basis))
        if ranks.any():
            coeffs = [int(F.from_rank[r]) for r in ranks]
            return WeightedPolynomial.from_coefficients(F, W, d, coeffs)
