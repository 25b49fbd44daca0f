"""Rational points of weighted projective spaces P(a_0, ..., a_n) over GF(q).

A point is stored through its canonical representative: on the support I of
a coordinate vector v, put d = gcd(a_i : i in I), b_i = a_i / d and pick
Bezout coefficients u with sum u_i b_i = 1. Scaling by
lambda = prod v_i^(-u_i) moves v to the unique representative with
prod w_i^(u_i) = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache, reduce

import numpy as np

from . import kernels
from .errors import BudgetError, ParseError, UsageError
from .gf import Field

ENUMERATION_BUDGET = 10**8
_DIRECT_ADDRESS_LIMIT = 2**24
_CHUNK = 1 << 20


def pn(n: int, q: int) -> int:
    """Number of points of P^n(F_q); zero for negative n."""
    if n < 0:
        return 0
    return sum(q**m for m in range(n + 1))


@dataclass(frozen=True)
class WeightSystem:
    weights: tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(a) for a in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) < 2:
            raise UsageError("a weight system needs at least two weights (n >= 1)")
        if any(a < 1 for a in w):
            raise UsageError(f"weights must be positive integers, got {w}")

    @property
    def n(self) -> int:
        return len(self.weights) - 1

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def __iter__(self):
        return iter(self.weights)

    def r(self, field: Field, i: int) -> int:
        return math.gcd(self.weights[i], field.q - 1)

    def with_weight(self, i: int, a: int) -> "WeightSystem":
        w = list(self.weights)
        w[i] = a
        return WeightSystem(tuple(w))

    def is_straight(self) -> bool:
        return all(a == 1 for a in self.weights)

    def __str__(self):
        return "(" + ",".join(map(str, self.weights)) + ")"


def as_weights(w) -> WeightSystem:
    return w if isinstance(w, WeightSystem) else WeightSystem(tuple(w))


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        t = a // b
        a, b = b, a - t * b
        x0, x1 = x1, x0 - t * x1
        y0, y1 = y1, y0 - t * y1
    return a, x0, y0


def bezout(bs: list[int]) -> tuple[int, list[int]]:
    """Left-to-right fold: returns (g, u) with sum u_i bs_i = g = gcd(bs).

    At each step the coefficient on the new entry is reduced into
    [0, g_old / g_new), which makes the output deterministic.
    """
    g = bs[0]
    u = [1]
    for b in bs[1:]:
        g2, x, y = _egcd(g, b)
        step = g // g2
        y2 = y % step
        x += ((y - y2) // step) * (b // g2)
        u = [x * c for c in u] + [y2]
        g = g2
    return g, u


@dataclass(frozen=True)
class Stratum:
    support: tuple[int, ...]
    gcd: int
    reduced: tuple[int, ...]
    bezout: tuple[int, ...]


@lru_cache(maxsize=None)
def strata(weights: tuple[int, ...]) -> tuple[Stratum | None, ...]:
    """Stratum data for every nonempty support, indexed by bitmask."""
    out: list[Stratum | None] = [None]
    for mask in range(1, 1 << len(weights)):
        supp = tuple(i for i in range(len(weights)) if mask >> i & 1)
        d = reduce(math.gcd, (weights[i] for i in supp))
        reduced = tuple(weights[i] // d for i in supp)
        g, u = bezout(list(reduced))
        assert g == 1
        out.append(Stratum(supp, d, reduced, tuple(u)))
    return tuple(out)


@lru_cache(maxsize=None)
def _kernel_tables(weights: tuple[int, ...], q: int):
    width = len(weights)
    qm1 = q - 1
    bmat = np.zeros((1 << width, width), dtype=np.int64)
    umat = np.zeros((1 << width, width), dtype=np.int64)
    for mask, st in enumerate(strata(weights)):
        if st is None:
            continue
        for i, b, u in zip(st.support, st.reduced, st.bezout):
            bmat[mask, i] = b % qm1
            umat[mask, i] = u % qm1
    bmat.setflags(write=False)
    umat.setflags(write=False)
    return bmat, umat


def _mask(coords) -> int:
    return sum(1 << i for i, x in enumerate(coords) if x)


@dataclass(frozen=True)
class CanonicalPoint:
    """A rational point, stored as its Bezout-normalized representative."""

    coords: tuple[int, ...]
    weights: tuple[int, ...]
    field: Field = dc_field(compare=False, repr=False)

    @property
    def stratum(self) -> Stratum:
        return strata(self.weights)[_mask(self.coords)]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.coords) if x)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(self.field.rank(x) for x in self.coords)

    def __str__(self):
        return format_point(self.coords, self.field)


def format_point(coords, field: Field) -> str:
    return "[" + ":".join(field.format_element(int(x)) for x in coords) + "]"


def parse_point(text: str, field: Field) -> tuple[int, ...]:
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError(f"point must look like [x0:x1:...], got {text!r}")
    return tuple(field.parse_element(t) for t in s[1:-1].split(":"))


def canonicalize(v, W, F: Field) -> CanonicalPoint:
    W = as_weights(W)
    v = tuple(int(x) for x in v)
    if len(v) != len(W):
        raise UsageError(f"expected {len(W)} coordinates, got {len(v)}")
    if not any(v):
        raise UsageError("the zero vector is not a point")
    st = strata(W.weights)[_mask(v)]
    lam = 1
    for i, u in zip(st.support, st.bezout):
        lam = F.mul(lam, F.pow(v[i], -u))
    w = [0] * len(v)
    for i, b in zip(st.support, st.reduced):
        w[i] = F.mul(F.pow(lam, b), v[i])
    return CanonicalPoint(tuple(w), W.weights, F)


def representatives(P: CanonicalPoint, W=None, F: Field | None = None) -> set[tuple[int, ...]]:
    """All GF(q)-coordinate vectors of the point: lambda^(b_i) x_i, lambda != 0."""
    F = F or P.field
    st = strata(P.weights)[_mask(P.coords)]
    out = set()
    for lam in F.nonzero():
        w = [0] * len(P.coords)
        for i, b in zip(st.support, st.reduced):
            w[i] = F.mul(F.pow(lam, b), P.coords[i])
        out.add(tuple(w))
    return out


def distinguished_point(W, F: Field, i: int) -> CanonicalPoint:
    """O_i = [0:...:1:...:0] with the 1 at index i."""
    W = as_weights(W)
    coords = [0] * len(W)
    coords[i] = 1
    return CanonicalPoint(tuple(coords), W.weights, F)


class PointSet:
    """All rational points of P(W)(F_q) as an array of ranks, lexicographically sorted."""

    def __init__(self, W: WeightSystem, F: Field, ranks: np.ndarray):
        self.W = W
        self.F = F
        self.ranks = ranks
        self.ranks.setflags(write=False)
        q = F.q
        powers = q ** np.arange(len(W) - 1, -1, -1, dtype=np.int64)
        self.codes = ranks @ powers
        self._points = None

    def __len__(self):
        return self.ranks.shape[0]

    @property
    def coords(self) -> np.ndarray:
        return self.F.from_rank[self.ranks]

    @property
    def points(self) -> list[CanonicalPoint]:
        if self._points is None:
            W, F = self.W.weights, self.F
            self._points = [CanonicalPoint(tuple(int(x) for x in row), W, F) for row in self.coords]
        return self._points

    def index_of_ranks(self, ranks: np.ndarray) -> np.ndarray:
        """Positions of canonical rank rows within this set."""
        q = self.F.q
        powers = q ** np.arange(len(self.W) - 1, -1, -1, dtype=np.int64)
        codes = np.asarray(ranks, dtype=np.int64) @ powers
        pos = np.searchsorted(self.codes, codes)
        if np.any(pos >= len(self.codes)) or np.any(self.codes[np.minimum(pos, len(self.codes) - 1)] != codes):
            raise KeyError("rank row is not a canonical point of this space")
        return pos

    def index(self, P) -> int:
        coords = P.coords if isinstance(P, CanonicalPoint) else P
        row = np.array([[self.F.rank(int(x)) for x in coords]], dtype=np.int64)
        return int(self.index_of_ranks(row)[0])


def canonicalize_ranks(vecs: np.ndarray, W: WeightSystem, F: Field) -> np.ndarray:
    bmat, umat = _kernel_tables(W.weights, F.q)
    return kernels.canonicalize_ranks(vecs, bmat, umat, F.q)


def _rank_vectors(lo: int, hi: int, width: int, q: int) -> np.ndarray:
    codes = np.arange(lo, hi, dtype=np.int64)
    out = np.empty((codes.size, width), dtype=np.int64)
    for i in range(width - 1, -1, -1):
        out[:, i] = codes % q
        codes //= q
    return out


@lru_cache(maxsize=256)
def _point_set(weights: tuple[int, ...], F: Field, budget: int) -> PointSet:
    W = WeightSystem(weights)
    q, width = F.q, len(weights)
    total = q**width
    if total > budget:
        raise BudgetError(f"enumerating {q}^{width} vectors exceeds the budget of {budget}")
    powers = q ** np.arange(width - 1, -1, -1, dtype=np.int64)
    direct = total <= _DIRECT_ADDRESS_LIMIT
    seen = np.zeros(total, dtype=bool) if direct else None
    parts = []
    for lo in range(1, total, _CHUNK):
        vecs = _rank_vectors(lo, min(total, lo + _CHUNK), width, q)
        codes = canonicalize_ranks(vecs, W, F) @ powers
        if direct:
            seen[codes] = True
        else:
            parts.append(np.unique(codes))
    codes = np.flatnonzero(seen) if direct else np.unique(np.concatenate(parts))
    ranks = np.empty((codes.size, width), dtype=np.int64)
    c = codes.copy()
    for i in range(width - 1, -1, -1):
        ranks[:, i] = c % q
        c //= q
    return PointSet(W, F, ranks)


def point_set(W, F: Field, budget: int = ENUMERATION_BUDGET) -> PointSet:
    return _point_set(as_weights(W).weights, F, budget)


def enumerate_points(W, F: Field, budget: int = ENUMERATION_BUDGET) -> list[CanonicalPoint]:
    """Canonical representatives of every rational point, sorted."""
    return list(point_set(W, F, budget).points)
