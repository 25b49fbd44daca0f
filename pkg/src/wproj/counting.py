"""Point counts N(F), the R/T/I partition along a coordinate, and auditors.

Class membership is decided on representatives. In *literal* mode a point
belongs to every class for which one of its GF(q)-representatives has the
defining property, so classes may overlap. In *disjoint* mode the precedence
R > T > Z/I turns them into a partition. Literal membership is computed by
brute force over all nonzero vectors, grouped by their canonical point.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field as dc_field
from functools import lru_cache, reduce
from itertools import combinations

import numpy as np

from .errors import BudgetError, UsageError, ZeroPolynomialError
from .gf import Field, subgroup_data
from .wpoly import WeightedPolynomial, evaluate_on, pullback, twist
from .wps import (
    ENUMERATION_BUDGET,
    WeightSystem,
    _rank_vectors,
    as_weights,
    canonicalize_ranks,
    distinguished_point,
    pn,
    point_set,
    strata,
)

UNSCREW_BUDGET = 10**4


def _require_nonzero(f: WeightedPolynomial) -> None:
    if f.is_zero():
        raise ZeroPolynomialError("the zero polynomial defines no hypersurface")


def zero_mask(f: WeightedPolynomial) -> np.ndarray:
    """Boolean mask over point_set(f.W, f.field) of the zeros of f."""
    _require_nonzero(f)
    ps = point_set(f.weights, f.field)
    return evaluate_on(f, ps) == 0


def count_zeros(f: WeightedPolynomial) -> int:
    """N(F): number of rational points of the hypersurface V(F)."""
    return int(zero_mask(f).sum())


def zero_set(f: WeightedPolynomial) -> list:
    ps = point_set(f.weights, f.field)
    return [ps.points[k] for k in np.flatnonzero(zero_mask(f))]


# -- literal class membership -------------------------------------------------

@lru_cache(maxsize=128)
def _vector_classes(weights: tuple[int, ...], F: Field):
    """Every nonzero vector (ranks) with the index of its point."""
    ps = point_set(weights, F)
    width = len(weights)
    total = F.q**width
    if total > ENUMERATION_BUDGET:
        raise BudgetError(f"{total} vectors exceed the enumeration budget")
    vecs = _rank_vectors(1, total, width, F.q)
    owner = ps.index_of_ranks(canonicalize_ranks(vecs, ps.W, F))
    return vecs, owner


@dataclass(frozen=True)
class Membership:
    """Literal class membership along coordinate i, one row per point."""

    R: np.ndarray
    T: np.ndarray
    I: np.ndarray
    Z: np.ndarray  # column j-1 is Z_i(j), j = 1..q-1
    O: int  # index of O_i


@lru_cache(maxsize=256)
def literal_membership(weights: tuple[int, ...], F: Field, i: int) -> Membership:
    ps = point_set(weights, F)
    vecs, owner = _vector_classes(weights, F)
    npts, qm1 = len(ps), F.q - 1
    y = vecs[:, i]
    powers = {F.rank(x) for x in subgroup_data(F, weights[i]).delta_a}
    o_idx = ps.index(distinguished_point(weights, F, i))

    def having(sel):
        out = np.zeros(npts, dtype=bool)
        out[owner[sel]] = True
        return out

    R = having(y == 0)
    R[o_idx] = True
    T = having(y == 1)
    T[o_idx] = False
    I = having((y != 0) & ~np.isin(y, list(powers)))
    Z = np.zeros((npts, qm1), dtype=bool)
    for j in range(1, qm1 + 1):
        Z[:, j - 1] = having(y == (j % qm1) + 1)
    for arr in (R, T, I, Z):
        arr.setflags(write=False)
    return Membership(R, T, I, Z, o_idx)


@lru_cache(maxsize=256)
def disjoint_classes(weights: tuple[int, ...], F: Field, i: int) -> np.ndarray:
    """Label per point: 0 for R, 1 for T, 1+j for Z_i(j) (j = 1..r_i-1)."""
    mem = literal_membership(weights, F, i)
    r = math.gcd(weights[i], F.q - 1)
    labels = np.full(len(mem.R), -1, dtype=np.int64)
    labels[mem.R] = 0
    labels[(labels < 0) & mem.T] = 1
    for j in range(1, r):
        labels[(labels < 0) & mem.Z[:, j - 1]] = 1 + j
    assert np.all(labels >= 0)
    labels.setflags(write=False)
    return labels


def is_safe(W, F: Field, i: int) -> bool:
    """True when representative-level class membership along i is point-well-defined.

    That holds iff every support I containing i and some other index has
    gcd(a_i / d_I, q-1) = gcd(a_i, q-1).
    """
    W = as_weights(W)
    r = math.gcd(W[i], F.q - 1)
    for st in strata(W.weights):
        if st is None or len(st.support) < 2 or i not in st.support:
            continue
        b = st.reduced[st.support.index(i)]
        if math.gcd(b, F.q - 1) != r:
            return False
    return True


@dataclass
class PartitionCounts:
    i: int
    mode: str
    R: int
    T: int
    I: int
    Z: list[int]  # Z[j-1] for j = 1..r_i-1
    examined: int
    overlap: list[str] = dc_field(default_factory=list)

    def as_dict(self) -> dict:
        return asdict(self)


def partition_counts(f: WeightedPolynomial | None, i: int, mode: str = "disjoint",
                     W=None, F: Field | None = None) -> PartitionCounts:
    """R_i, T_i, I_i and Z_i(j) counts over V(f), or over all points if f is None."""
    if f is not None:
        W, F = f.W, f.field
    W = as_weights(W)
    if not 0 <= i <= W.n:
        raise UsageError(f"index {i} out of range 0..{W.n}")
    if mode not in ("literal", "disjoint"):
        raise UsageError(f"unknown partition mode {mode!r}")
    ps = point_set(W, F)
    sel = zero_mask(f) if f is not None else np.ones(len(ps), dtype=bool)
    r = W.r(F, i)
    if mode == "disjoint":
        lab = disjoint_classes(W.weights, F, i)[sel]
        Z = [int((lab == 1 + j).sum()) for j in range(1, r)]
        return PartitionCounts(i, mode, int((lab == 0).sum()), int((lab == 1).sum()),
                               int((lab >= 2).sum()), Z, int(sel.sum()))
    mem = literal_membership(W.weights, F, i)
    multi = (mem.R.astype(int) + mem.T + mem.I) > 1
    overlap = [str(ps.points[k]) for k in np.flatnonzero(multi & sel)]
    Z = [int((mem.Z[:, j - 1] & sel).sum()) for j in range(1, r)]
    return PartitionCounts(i, mode, int((mem.R & sel).sum()), int((mem.T & sel).sum()),
                           int((mem.I & sel).sum()), Z, int(sel.sum()), overlap)


# -- preimages under pi_i -----------------------------------------------------

@lru_cache(maxsize=256)
def preimage_map(weights: tuple[int, ...], F: Field, i: int) -> np.ndarray:
    """For each point Q upstairs (a_i replaced by 1), the index of pi_i(Q) downstairs."""
    W = WeightSystem(weights)
    up = point_set(W.with_weight(i, 1), F)
    down = point_set(W, F)
    img = up.ranks.copy()
    col = img[:, i]
    img[:, i] = np.where(col == 0, 0, ((col - 1) * weights[i]) % (F.q - 1) + 1)
    out = down.index_of_ranks(canonicalize_ranks(img, W, F))
    out.setflags(write=False)
    return out


def preimage_count(P, i: int, W=None, F: Field | None = None) -> tuple[int, list]:
    """Rational preimages of P under pi_i, found by enumerating the space upstairs."""
    W = as_weights(W if W is not None else P.weights)
    F = F or P.field
    down = point_set(W, F)
    up = point_set(W.with_weight(i, 1), F)
    target = down.index(P)
    hits = np.flatnonzero(preimage_map(W.weights, F, i) == target)
    return int(hits.size), [up.points[k] for k in hits]


def preimage_counts(W, F: Field, i: int) -> np.ndarray:
    """Number of rational preimages of every downstairs point."""
    W = as_weights(W)
    return np.bincount(preimage_map(W.weights, F, i), minlength=len(point_set(W, F)))


# -- bounds -------------------------------------------------------------------

@dataclass
class BoundSet:
    d: int
    q: int
    weights: tuple[int, ...]
    pn: int
    serre: int
    conjecture: int | None
    lower: int | None
    notes: list[str] = dc_field(default_factory=list)

    def as_dict(self) -> dict:
        out = asdict(self)
        out["weights"] = list(self.weights)
        return out


def bounds(d: int, W, F: Field) -> BoundSet:
    """p_n, the Serre bound, the conjectured e_q and the pair-construction lower bound.

    Components whose divisibility hypothesis fails are None, with a note.
    """
    W = as_weights(W)
    q, n = F.q, W.n
    p = pn(n, q)
    serre = d * q ** (n - 1) + pn(n - 2, q)
    notes = []
    conj = None
    if 1 in W.weights:
        k0 = W.weights.index(1)
        rest = W.weights[:k0] + W.weights[k0 + 1:]
        L = reduce(math.lcm, rest)
        if d % L == 0:
            a1 = min(rest)
            conj = min(p, (d // a1) * q ** (n - 1) + pn(n - 2, q))
        else:
            notes.append(f"conjecture inapplicable: lcm of the other weights ({L}) does not divide d")
    else:
        notes.append("conjecture inapplicable: no weight equal to 1")
    a = min(math.lcm(x, y) for x, y in combinations(W.weights, 2))
    lower = None
    if d % a == 0:
        lower = min(p, (d // a) * q ** (n - 1) + pn(n - 2, q))
    else:
        notes.append(f"lower bound inapplicable: a = {a} does not divide d")
    if d > q + 1:
        notes.append("d > q+1: the Serre bound exceeds p_n and is vacuous")
    return BoundSet(d, q, W.weights, p, serre, conj, lower, notes)


# -- audits -------------------------------------------------------------------

@dataclass
class AuditReport:
    prop: str
    q: int
    weights: tuple[int, ...]
    i: int | None
    poly: str | None
    verdict: str
    safe: bool | None
    lhs: object = None
    rhs: object = None
    witnesses: list = dc_field(default_factory=list)
    details: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "prop": self.prop,
            "q": self.q,
            "weights": list(self.weights),
            "i": self.i,
            "poly": self.poly,
            "verdict": self.verdict,
            "safe": self.safe,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "witnesses": self.witnesses,
            "details": self.details,
        }


def audit_lesZi(W, F: Field, i: int) -> AuditReport:
    """Check the three set identities relating Z_i(j), T_i and I_i (literal sets)."""
    W = as_weights(W)
    ps = point_set(W, F)
    mem = literal_membership(W.weights, F, i)
    r, qm1 = W.r(F, i), F.q - 1
    names = lambda mask: [str(ps.points[k]) for k in np.flatnonzero(mask)]
    witnesses = []
    items = {}

    ok1 = True
    for j1 in range(1, qm1 + 1):
        for j2 in range(j1 + r, qm1 + 1, r):
            diff = mem.Z[:, j1 - 1] ^ mem.Z[:, j2 - 1]
            if diff.any():
                ok1 = False
                witnesses.append({"item": "i", "j1": j1, "j2": j2, "points": names(diff)})
    items["i"] = ok1

    # O_i admits the representative with y_i = 1 but is excluded from T_i.
    zr = mem.Z[:, r - 1].copy()
    zr[mem.O] = False
    diff = zr ^ mem.T
    items["ii"] = not diff.any()
    if diff.any():
        witnesses.append({"item": "ii", "points": names(diff)})

    if r == 1:
        union = np.zeros(len(ps), dtype=bool)
    else:
        union = mem.Z[:, : r - 1].any(axis=1)
    diff = union ^ mem.I
    items["iii"] = not diff.any()
    if diff.any():
        witnesses.append({"item": "iii", "points": names(diff)})

    overlap = names((mem.R.astype(int) + mem.T + mem.I) > 1)
    return AuditReport(
        prop="lesZi", q=F.q, weights=W.weights, i=i, poly=None,
        verdict="pass" if all(items.values()) else "fail",
        safe=is_safe(W, F, i), lhs=None, rhs=None, witnesses=witnesses,
        details={"r": r, "items": items, "overlap": overlap,
                 "I_empty": not mem.I.any()},
    )


def audit_identities(f: WeightedPolynomial, i: int) -> AuditReport:
    """N = R+T+I, N(pullback) = r T + R, and the twist identities, in disjoint mode."""
    _require_nonzero(f)
    F, W = f.field, f.W
    r = W.r(F, i)
    pc = partition_counts(f, i, "disjoint")
    N = count_zeros(f)
    lhs, rhs = {}, {}
    lhs["i"], rhs["i"] = N, pc.R + pc.T + pc.I
    lhs["ii"], rhs["ii"] = count_zeros(pullback(f, i)), r * pc.T + pc.R
    if r != 1:
        for j in range(1, r):
            tw = partition_counts(twist(f, i, j), i, "disjoint")
            lhs[f"iii.a j={j}"], rhs[f"iii.a j={j}"] = tw.T, pc.Z[j - 1]
            lhs[f"iii.c j={j}"], rhs[f"iii.c j={j}"] = tw.R, pc.R
        tw = partition_counts(twist(f, i, r), i, "disjoint")
        lhs["iii.b"], rhs["iii.b"] = tw.T, pc.T
    bad = [k for k in lhs if lhs[k] != rhs[k]]
    return AuditReport(
        prop="identities", q=F.q, weights=W.weights, i=i, poly=str(f),
        verdict="fail" if bad else "pass", safe=is_safe(W, F, i), lhs=lhs, rhs=rhs,
        witnesses=[{"item": k, "lhs": lhs[k], "rhs": rhs[k]} for k in bad],
        details={"r": r, "counts": pc.as_dict()},
    )


def pairwise_coprime(W) -> bool:
    return all(math.gcd(x, y) == 1 for x, y in combinations(as_weights(W).weights, 2))


def audit_mondo(f: WeightedPolynomial, i: int) -> AuditReport:
    """r_i N(F) <= sum_j N(pullback_i(F o sigma_i^j)), compared without division.

    With pairwise coprime weights equality is required as well.
    """
    _require_nonzero(f)
    F, W = f.field, f.W
    r = W.r(F, i)
    N = count_zeros(f)
    terms = [count_zeros(pullback(twist(f, i, j), i)) for j in range(r)]
    lhs, rhs = r * N, sum(terms)
    equal = lhs == rhs
    coprime = pairwise_coprime(W)
    witnesses = []
    if lhs > rhs:
        witnesses.append({"item": "inequality", "lhs": lhs, "rhs": rhs, "terms": terms})
    if coprime and not equal:
        witnesses.append({"item": "equality", "lhs": lhs, "rhs": rhs, "terms": terms})
    return AuditReport(
        prop="mondo", q=F.q, weights=W.weights, i=i, poly=str(f),
        verdict="fail" if witnesses else "pass", safe=is_safe(W, F, i),
        lhs=lhs, rhs=rhs, witnesses=witnesses,
        details={"r": r, "N": N, "terms": terms, "equality": equal, "coprime": coprime},
    )


def unscrew(f: WeightedPolynomial, budget: int = UNSCREW_BUDGET) -> tuple[list[WeightedPolynomial], AuditReport]:
    """Pull f back along pi_0, ..., pi_n with all twists, down to straight weights.

    Returns the r_0 ... r_n polynomials on P^n and the check
    (r_0 ... r_n) N(f) <= sum of their counts.
    """
    _require_nonzero(f)
    F, W = f.field, f.W
    rs = [W.r(F, i) for i in range(len(W))]
    total = math.prod(rs)
    if total > budget:
        raise BudgetError(f"unscrewing produces {total} polynomials, over the budget of {budget}")
    level = [f]
    for i, r in enumerate(rs):
        level = [pullback(twist(g, i, j), i) for g in level for j in range(r)]
    assert all(g.W.is_straight() and g.degree == f.degree for g in level)
    N = count_zeros(f)
    counts = [count_zeros(g) for g in level]
    lhs, rhs = total * N, sum(counts)
    b = bounds(f.degree, W, F)
    report = AuditReport(
        prop="unscrew", q=F.q, weights=W.weights, i=None, poly=str(f),
        verdict="pass" if lhs <= rhs else "fail", safe=None, lhs=lhs, rhs=rhs,
        witnesses=[] if lhs <= rhs else [{"N": N, "counts": counts}],
        details={"r": rs, "N": N, "counts": counts, "serre": b.serre,
                 "within_serre": N <= b.serre, "vacuous": f.degree > F.q + 1},
    )
    return level, report


def audit_antecedent(W, F: Field, i: int) -> AuditReport:
    """Compare enumerated preimage counts under pi_i with the class of each point.

    The predicted count is 1 on R_i, r_i on T_i and 0 on I_i (disjoint
    classes). Points belonging to several literal classes are listed as
    overlap in the details.
    """
    W = as_weights(W)
    ps = point_set(W, F)
    r = W.r(F, i)
    counts = preimage_counts(W, F, i)
    labels = disjoint_classes(W.weights, F, i)
    predicted = np.where(labels == 0, 1, np.where(labels == 1, r, 0))
    bad = np.flatnonzero(counts != predicted)
    mem = literal_membership(W.weights, F, i)
    overlap = []
    for k in np.flatnonzero((mem.R.astype(int) + mem.T + mem.I) > 1):
        classes = [c for c, m in (("R", mem.R), ("T", mem.T), ("I", mem.I)) if m[k]]
        overlap.append({"point": str(ps.points[k]), "classes": classes, "preimages": int(counts[k])})
    names = {0: "R", 1: "T"}
    witnesses = [
        {"point": str(ps.points[k]), "class": names.get(int(labels[k]), "I"),
         "predicted": int(predicted[k]), "enumerated": int(counts[k])}
        for k in bad
    ]
    return AuditReport(
        prop="antecedent", q=F.q, weights=W.weights, i=i, poly=None,
        verdict="fail" if witnesses else "pass", safe=is_safe(W, F, i),
        lhs=int(counts.sum()), rhs=int(predicted.sum()), witnesses=witnesses,
        details={"r": r, "overlap": overlap, "upstairs": len(point_set(W.with_weight(i, 1), F))},
    )


def audit_preimage(f: WeightedPolynomial, i: int) -> AuditReport:
    """N(pullback_i f) = sum over P in V(f) of the enumerated fiber size of pi_i.

    This holds for every configuration, SAFE or not.
    """
    _require_nonzero(f)
    F, W = f.field, f.W
    counts = preimage_counts(W, F, i)
    zeros = zero_mask(f)
    lhs = count_zeros(pullback(f, i))
    rhs = int(counts[zeros].sum())
    return AuditReport(
        prop="preimage", q=F.q, weights=W.weights, i=i, poly=str(f),
        verdict="pass" if lhs == rhs else "fail", safe=is_safe(W, F, i),
        lhs=lhs, rhs=rhs,
        witnesses=[] if lhs == rhs else [{"lhs": lhs, "rhs": rhs}],
        details={"N": int(zeros.sum())},
    )
