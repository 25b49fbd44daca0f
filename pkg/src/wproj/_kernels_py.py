"""Pure numpy implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable, and as the
reference the compiled path is tested against. All arrays are int64 in rank
encoding (0 is zero, r >= 1 is delta**(r-1)).
"""

from __future__ import annotations

import numpy as np

# rows of the suffix table in the exhaustive search
_SUFFIX_ROWS = 4096
# elements per vectorized chunk
_CHUNK = 1 << 22


def fmul(a, b, qm1):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = (a + b - 2) % qm1 + 1
    return np.where((a == 0) | (b == 0), 0, out)


def fadd(a, b, zech, qm1):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    a, b = np.broadcast_arrays(a, b)
    z = zech[(b - a) % qm1]
    both = np.where(z == 0, 0, (a + z - 2) % qm1 + 1)
    return np.where(a == 0, b, np.where(b == 0, a, both))


def canonicalize_ranks(vecs, bmat, umat, q):
    """Bezout-normalize each row of ``vecs`` (no zero rows allowed)."""
    vecs = np.asarray(vecs, dtype=np.int64)
    qm1 = q - 1
    nz = vecs != 0
    width = vecs.shape[1]
    mask = (nz * (1 << np.arange(width, dtype=np.int64))).sum(axis=1)
    logs = np.where(nz, vecs - 1, 0)
    lam = (-(umat[mask] * logs).sum(axis=1)) % qm1
    out = (logs + bmat[mask] * lam[:, None]) % qm1 + 1
    return np.where(nz, out, 0)


def eval_ranks(coeffs, vals, zech, q):
    """Values of sum_m coeffs[m] * vals[m, :] for every column."""
    qm1 = q - 1
    vals = np.asarray(vals, dtype=np.int64)
    acc = np.zeros(vals.shape[1], dtype=np.int64)
    for c, row in zip(np.asarray(coeffs, dtype=np.int64), vals):
        if c:
            acc = fadd(acc, fmul(c, row, qm1), zech, qm1)
    return acc


def block_start(length, q):
    return (q**length - 1) // (q - 1)


def decode_candidates(indices, m, q):
    """Coefficient ranks of candidates by position in the normalized stream.

    Candidates with L free trailing coefficients after the leading 1 form
    block L; blocks come in increasing L and each is enumerated in base-q
    order, which is lexicographic order of the coefficient vectors.
    """
    indices = np.asarray(indices, dtype=np.int64)
    starts = np.array([block_start(L, q) for L in range(m + 1)], dtype=np.int64)
    if indices.size and (indices.min() < 0 or indices.max() >= starts[-1]):
        raise IndexError("candidate index out of range")
    L = np.searchsorted(starts, indices, side="right") - 1
    k = indices - starts[L]
    out = np.zeros((indices.size, m), dtype=np.int64)
    lead = m - 1 - L
    out[np.arange(indices.size), lead] = 1
    for pos in range(m - 1, 0, -1):
        free = pos > lead
        out[:, pos] = np.where(free, k % q, out[:, pos])
        k = np.where(free, k // q, k)
    return out


def count_candidates(vals, zech, q, indices):
    """Number of zero columns for each candidate index."""
    vals = np.asarray(vals, dtype=np.int64)
    m, npts = vals.shape
    qm1 = q - 1
    indices = np.asarray(indices, dtype=np.int64)
    counts = np.empty(indices.size, dtype=np.int64)
    step = max(1, _CHUNK // max(1, npts * m))
    for lo in range(0, indices.size, step):
        coeffs = decode_candidates(indices[lo:lo + step], m, q)
        acc = np.zeros((coeffs.shape[0], npts), dtype=np.int64)
        for j in range(m):
            acc = fadd(acc, fmul(coeffs[:, j, None], vals[j][None, :], qm1), zech, qm1)
        counts[lo:lo + step] = (acc == 0).sum(axis=1)
    return counts


def _combo_table(rows, zech, q):
    """Sums of c_j * rows[j] over all digit strings, most significant first."""
    qm1 = q - 1
    npts = rows.shape[1]
    table = np.zeros((1, npts), dtype=np.int64)
    digits = np.arange(q, dtype=np.int64)
    for row in rows[::-1]:
        terms = fmul(digits[:, None], row[None, :], qm1)
        table = fadd(terms[:, None, :], table[None, :, :], zech, qm1).reshape(-1, npts)
    return table


class _Best:
    def __init__(self, cap):
        self.cap = cap
        self.value = -1
        self.count = 0
        self.witnesses = []

    def update(self, counts, first_index):
        if counts.size == 0:
            return
        top = int(counts.max())
        if top < self.value:
            return
        if top > self.value:
            self.value, self.count, self.witnesses = top, 0, []
        hits = np.flatnonzero(counts == top)
        self.count += int(hits.size)
        room = self.cap - len(self.witnesses)
        if room > 0:
            self.witnesses.extend(int(first_index + h) for h in hits[:room])


def search_range(vals, zech, q, start, stop, cap):
    """Max zero count over candidates start..stop-1 of the normalized stream.

    Returns (best, number of maximizers, first ``cap`` maximizing indices).
    """
    vals = np.asarray(vals, dtype=np.int64)
    m, npts = vals.shape
    qm1 = q - 1
    best = _Best(cap)
    low_len = 0
    while low_len < m - 1 and q ** (low_len + 1) <= _SUFFIX_ROWS:
        low_len += 1
    tables = {}
    g = start
    while g < stop:
        L = 0
        while block_start(L + 1, q) <= g:
            L += 1
        bstart = block_start(L, q)
        bend = min(stop, bstart + q**L)
        lead = m - 1 - L
        ll = min(L, low_len)
        lh = L - ll
        if ll not in tables:
            tables[ll] = _combo_table(vals[m - ll:], zech, q)
        low = tables[ll]
        width = q**ll
        k0, k1 = g - bstart, bend - bstart
        h0, h1 = k0 // width, (k1 - 1) // width + 1
        hstep = max(1, _CHUNK // max(1, width * npts))
        for hlo in range(h0, h1, hstep):
            hs = np.arange(hlo, min(h1, hlo + hstep), dtype=np.int64)
            acc = np.broadcast_to(vals[lead], (hs.size, npts)).copy()
            rem = hs.copy()
            digits = np.empty((hs.size, lh), dtype=np.int64)
            for j in range(lh - 1, -1, -1):
                digits[:, j] = rem % q
                rem //= q
            for j in range(lh):
                acc = fadd(acc, fmul(digits[:, j, None], vals[lead + 1 + j][None, :], qm1), zech, qm1)
            comb = fadd(acc[:, None, :], low[None, :, :], zech, qm1)
            counts = (comb == 0).sum(axis=2).reshape(-1)
            first = hlo * width
            lo_cut = max(0, k0 - first)
            hi_cut = min(counts.size, k1 - first)
            best.update(counts[lo_cut:hi_cut], bstart + first + lo_cut)
        g = bend
    return best.value, best.count, np.array(best.witnesses, dtype=np.int64)
