"""e_q(d; a_0, ..., a_n) by exhaustive or sampled search over S_d minus 0.

Candidates are coefficient vectors over monomial_basis(W, d) whose first
nonzero entry is 1, one per scalar class, enumerated in lexicographic order
under the canonical element order. Point counts are scalar invariant, so
this loses nothing.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import combinations

import numpy as np

from . import __version__, kernels
from .counting import count_zeros, zero_mask
from .errors import BudgetError, EmptyDegreeError
from .gf import Field
from .wpoly import (
    WeightedPolynomial,
    evaluate_on,
    monomial_basis,
    monomial_value_table,
    p1_points,
    product_of_forms,
)
from .wps import as_weights, pn, point_set

EXHAUSTIVE_BUDGET = 10**7
WITNESS_CAP = 16


def candidate_count(m: int, q: int) -> int:
    return (q**m - 1) // (q - 1)


class SearchSpace:
    """Basis, point set and monomial value table for one (W, d, F)."""

    def __init__(self, W, d: int, F: Field):
        self.W = as_weights(W)
        self.d = d
        self.F = F
        self.basis = monomial_basis(self.W, d)
        if not self.basis:
            raise EmptyDegreeError(f"no monomial of weighted degree {d} for weights {self.W}")
        self.points = point_set(self.W, F)
        self.values = monomial_value_table(self.basis, self.points)
        self.total = candidate_count(len(self.basis), F.q)

    def polynomial(self, index: int) -> WeightedPolynomial:
        ranks = kernels.decode_candidates([index], len(self.basis), self.F.q)[0]
        coeffs = [int(self.F.from_rank[r]) for r in ranks]
        return WeightedPolynomial.from_coefficients(self.F, self.W, self.d, coeffs)


def iterate_polynomials(W, d: int, F: Field, budget: int = EXHAUSTIVE_BUDGET, chunk: int = 4096):
    """Yield one normalized representative per scalar class of S_d minus 0."""
    space = SearchSpace(W, d, F)
    if space.total > budget:
        raise BudgetError(f"{space.total} candidates exceed the budget of {budget}")
    m = len(space.basis)
    for lo in range(0, space.total, chunk):
        ranks = kernels.decode_candidates(np.arange(lo, min(space.total, lo + chunk)), m, F.q)
        for row in ranks:
            coeffs = [int(F.from_rank[r]) for r in row]
            yield WeightedPolynomial.from_coefficients(F, space.W, d, coeffs)


@dataclass
class SearchResult:
    q: int
    weights: tuple[int, ...]
    d: int
    mode: str
    value: int
    witnesses: list[WeightedPolynomial]
    maximizers: int
    searched: int
    exhaustive: bool
    seed: int | None = None
    checks: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "q": self.q,
            "weights": list(self.weights),
            "d": self.d,
            "mode": self.mode,
            "value": self.value,
            "witnesses": [str(w) for w in self.witnesses],
            "maximizers": self.maximizers,
            "searched": self.searched,
            "exhaustive": self.exhaustive,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if self.checks:
            out["checks"] = self.checks
        return out


def _shards(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    edges = [total * k // parts for k in range(parts + 1)]
    return [(edges[k], edges[k + 1]) for k in range(parts)]


def _merge(results, cap: int):
    best = max(r[0] for r in results)
    count, wits = 0, []
    for value, n, w in results:
        if value == best:
            count += int(n)
            wits.extend(int(x) for x in w)
    return best, count, wits[:cap]


def lower_bound_witness(W, d: int, F: Field) -> WeightedPolynomial | None:
    """The pair-product construction for the pair with the smallest lcm, if it applies."""
    W = as_weights(W)
    pairs = [(math.lcm(W[r], W[s]), r, s) for r, s in combinations(range(len(W)), 2)]
    a, r, s = min(pairs)
    if d % a or d // a > F.q + 1:
        return None
    return product_of_forms(p1_points(F)[: d // a], r, s, W, d, F)


def eq_exhaustive(W, d: int, F: Field, budget: int = EXHAUSTIVE_BUDGET, threads: int = 1,
                  cap: int = WITNESS_CAP, backend: str | None = None) -> SearchResult:
    """Exact e_q(d; W) with up to ``cap`` witnesses (the lexicographically first)."""
    space = SearchSpace(W, d, F)
    if space.total > budget:
        raise BudgetError(f"{space.total} candidates exceed the budget of {budget}")
    impl = kernels.get_backend(backend)
    shards = _shards(space.total, threads)

    def run(rng):
        return impl.search_range(space.values, F.zech, F.q, rng[0], rng[1], cap)

    if len(shards) == 1:
        results = [run(shards[0])]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, shards))
    value, count, wits = _merge(results, cap)
    witnesses = [space.polynomial(k) for k in wits]
    for w in witnesses:
        assert count_zeros(w) == value, "witness does not reproduce the maximum"
    checks = {}
    lw = lower_bound_witness(space.W, d, F)
    if lw is not None:
        n_lw = count_zeros(lw)
        checks["construction"] = {"poly": str(lw), "count": n_lw, "ok": n_lw <= value}
    checks["at_most_pn"] = value <= pn(space.W.n, F.q)
    return SearchResult(F.q, space.W.weights, d, "exhaustive", value, witnesses, count,
                        space.total, True, None, checks)


def eq_random(W, d: int, F: Field, trials: int, seed: int = 0, cap: int = WITNESS_CAP,
              backend: str | None = None) -> SearchResult:
    """Lower bound for e_q from ``trials`` seeded samples of the normalized stream.

    Samples are drawn without replacement; with trials >= the number of
    candidates the whole stream is covered.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    space = SearchSpace(W, d, F)
    rng = np.random.default_rng(seed)
    if trials >= space.total:
        idx = np.arange(space.total, dtype=np.int64)
    elif space.total < 2**62:
        idx = np.sort(rng.choice(space.total, size=trials, replace=False))
    else:
        idx = np.unique(rng.integers(0, space.total, size=trials, dtype=np.int64))
    impl = kernels.get_backend(backend)
    counts = impl.count_candidates(space.values, F.zech, F.q, idx)
    value = int(counts.max())
    hits = idx[counts == value]
    witnesses = [space.polynomial(int(k)) for k in hits[:cap]]
    return SearchResult(F.q, space.W.weights, d, "random", value, witnesses, int(hits.size),
                        int(idx.size), bool(idx.size == space.total), seed)


def hyperplane_structure(f: WeightedPolynomial) -> dict:
    """Describe V(f) on P^n as a union of rational hyperplanes, if it is one.

    ``pencil`` is True when V(f) is the union of deg f distinct hyperplanes
    through a common codimension-2 linear space, i.e. f is (up to a linear
    change of coordinates) a product of distinct linear forms in two variables.
    """
    F, W = f.field, f.W
    if not W.is_straight():
        raise ValueError("hyperplane structure is defined on straight weights only")
    n = W.n
    ps = point_set(W, F)
    zeros = zero_mask(f)
    planes = []
    for c in ps.points:
        lin = WeightedPolynomial.from_terms(
            F, W, 1, {tuple(int(k == i) for k in range(n + 1)): x for i, x in enumerate(c.coords) if x}
        )
        mask = evaluate_on(lin, ps) == 0
        if not np.any(mask & ~zeros):
            planes.append(mask)
    union = np.zeros(len(ps), dtype=bool)
    common = np.ones(len(ps), dtype=bool)
    for m in planes:
        union |= m
        common &= m
    union_ok = bool(planes) and bool(np.array_equal(union, zeros))
    codim2 = len(planes) < 2 or int(common.sum()) == pn(n - 2, F.q)
    return {
        "hyperplanes": len(planes),
        "union_matches": union_ok,
        "common_codim2": codim2,
        "pencil": union_ok and codim2 and len(planes) == f.degree,
    }


class ResultCache:
    """Append-only JSON-lines store of search results.

    Hits are re-verified: every cached witness is recounted, and an entry
    whose witnesses do not reproduce its value is ignored.
    """

    def __init__(self, path: str | os.PathLike):
        self.path = os.fspath(path)

    @staticmethod
    def _key(q, weights, d, mode, seed=None):
        return (int(q), tuple(int(a) for a in weights), int(d), mode, seed)

    def _entries(self):
        if not os.path.exists(self.path):
            return
        with open(self.path) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    yield json.loads(line)

    def lookup(self, W, d: int, F: Field, mode: str, seed=None, searched: int | None = None) -> SearchResult | None:
        """Latest matching entry, or None. ``searched`` pins the sample size in random mode."""
        from .wpoly import parse_poly

        want = self._key(F.q, as_weights(W).weights, d, mode, seed)
        found = None
        for e in self._entries():
            if self._key(e["q"], e["weights"], e["d"], e["mode"], e.get("seed")) == want:
                if searched is None or e["searched"] == searched:
                    found = e
        if found is None:
            return None
        wits = [parse_poly(t, W, F) for t in found["witnesses"]]
        if not wits or any(count_zeros(w) != found["value"] for w in wits):
            return None
        return SearchResult(F.q, as_weights(W).weights, d, mode, found["value"], wits,
                            found.get("maximizers", len(wits)), found["searched"],
                            mode == "exhaustive", found.get("seed"), {"cached": True})

    def store(self, res: SearchResult) -> None:
        line = {
            "q": res.q,
            "weights": list(res.weights),
            "d": res.d,
            "mode": res.mode,
            "value": res.value,
            "witnesses": [str(w) for w in res.witnesses],
            "maximizers": res.maximizers,
            "searched": res.searched,
            "version": __version__,
        }
        if res.seed is not None:
            line["seed"] = res.seed
        with open(self.path, "a") as fh:
            fh.write(json.dumps(line, sort_keys=True) + "\n")
