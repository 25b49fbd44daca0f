# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Same contracts as ``wproj._kernels_py``."""

import numpy as np

ctypedef long long i64


cdef inline i64 _mod(i64 a, i64 m) noexcept nogil:
    cdef i64 r = a % m
    if r < 0:
        r += m
    return r


cdef inline i64 _mul(i64 a, i64 b, i64 qm1) noexcept nogil:
    if a == 0 or b == 0:
        return 0
    return (a + b - 2) % qm1 + 1


cdef inline i64 _add(i64 a, i64 b, const i64[::1] zech, i64 qm1) noexcept nogil:
    cdef i64 z
    if a == 0:
        return b
    if b == 0:
        return a
    z = zech[_mod(b - a, qm1)]
    if z == 0:
        return 0
    return (a + z - 2) % qm1 + 1


def canonicalize_ranks(vecs, bmat, umat, i64 q):
    cdef const i64[:, ::1] v = np.ascontiguousarray(vecs, dtype=np.int64)
    cdef const i64[:, ::1] b = np.ascontiguousarray(bmat, dtype=np.int64)
    cdef const i64[:, ::1] u = np.ascontiguousarray(umat, dtype=np.int64)
    cdef Py_ssize_t n = v.shape[0], w = v.shape[1], r, i
    out = np.zeros((n, w), dtype=np.int64)
    cdef i64[:, ::1] o = out
    cdef i64 qm1 = q - 1, mask, lam
    with nogil:
        for r in range(n):
            mask = 0
            lam = 0
            for i in range(w):
                if v[r, i] != 0:
                    mask |= (<i64>1) << i
            for i in range(w):
                if v[r, i] != 0:
                    lam -= u[mask, i] * (v[r, i] - 1)
            lam = _mod(lam, qm1)
            for i in range(w):
                if v[r, i] != 0:
                    o[r, i] = _mod(v[r, i] - 1 + b[mask, i] * lam, qm1) + 1
    return out


def eval_ranks(coeffs, vals, zech, i64 q):
    cdef const i64[::1] c = np.ascontiguousarray(coeffs, dtype=np.int64)
    cdef const i64[:, ::1] v = np.ascontiguousarray(vals, dtype=np.int64)
    cdef const i64[::1] z = np.ascontiguousarray(zech, dtype=np.int64)
    cdef Py_ssize_t m = v.shape[0], npts = v.shape[1], j, pt
    cdef i64 qm1 = q - 1, acc
    out = np.zeros(npts, dtype=np.int64)
    cdef i64[::1] o = out
    with nogil:
        for pt in range(npts):
            acc = 0
            for j in range(m):
                acc = _add(acc, _mul(c[j], v[j, pt], qm1), z, qm1)
            o[pt] = acc
    return out


cdef inline i64 _block_start(i64 length, i64 q) noexcept nogil:
    cdef i64 s = 0, pw = 1, t
    for t in range(length):
        s += pw
        pw *= q
    return s


cdef void _decode(i64 g, i64 m, i64 q, i64* digits) noexcept nogil:
    cdef i64 L = 0, k, pos, lead
    while _block_start(L + 1, q) <= g:
        L += 1
    k = g - _block_start(L, q)
    lead = m - 1 - L
    for pos in range(m):
        digits[pos] = 0
    digits[lead] = 1
    pos = m - 1
    while pos > lead:
        digits[pos] = k % q
        k = k // q
        pos -= 1


def count_candidates(vals, zech, i64 q, indices):
    cdef const i64[:, ::1] v = np.ascontiguousarray(vals, dtype=np.int64)
    cdef const i64[::1] z = np.ascontiguousarray(zech, dtype=np.int64)
    cdef const i64[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef Py_ssize_t m = v.shape[0], npts = v.shape[1], n = idx.shape[0], r, j, pt
    cdef i64 qm1 = q - 1, acc, cnt
    total = _block_start(m, q)
    for r in range(n):
        if idx[r] < 0 or idx[r] >= total:
            raise IndexError("candidate index out of range")
    digits_arr = np.zeros(max(m, 1), dtype=np.int64)
    cdef i64[::1] digits = digits_arr
    out = np.zeros(n, dtype=np.int64)
    cdef i64[::1] o = out
    with nogil:
        for r in range(n):
            _decode(idx[r], m, q, &digits[0])
            cnt = 0
            for pt in range(npts):
                acc = 0
                for j in range(m):
                    acc = _add(acc, _mul(digits[j], v[j, pt], qm1), z, qm1)
                if acc == 0:
                    cnt += 1
            o[r] = cnt
    return out


def search_range(vals, zech, i64 q, i64 start, i64 stop, i64 cap):
    cdef const i64[:, ::1] v = np.ascontiguousarray(vals, dtype=np.int64)
    cdef const i64[::1] z = np.ascontiguousarray(zech, dtype=np.int64)
    cdef Py_ssize_t m = v.shape[0], npts = v.shape[1], pt, lvl
    cdef i64 qm1 = q - 1
    # partial[l] holds sum_{j<l} c_j * v[j] at every point
    partial_arr = np.zeros((m + 1, npts), dtype=np.int64)
    cdef i64[:, ::1] partial = partial_arr
    digits_arr = np.zeros(m, dtype=np.int64)
    cdef i64[::1] digits = digits_arr
    wit_arr = np.zeros(max(cap, 1), dtype=np.int64)
    cdef i64[::1] wit = wit_arr
    cdef i64 best = -1, nbest = 0, nwit = 0
    cdef i64 g = start, L, bend, lead, cnt, pos, from_lvl
    with nogil:
        while g < stop:
            L = 0
            while _block_start(L + 1, q) <= g:
                L += 1
            bend = _block_start(L + 1, q)
            if bend > stop:
                bend = stop
            lead = m - 1 - L
            _decode(g, m, q, &digits[0])
            from_lvl = lead
            for pt in range(npts):
                partial[lead, pt] = 0
            while True:
                for lvl in range(from_lvl, m):
                    for pt in range(npts):
                        partial[lvl + 1, pt] = _add(partial[lvl, pt], _mul(digits[lvl], v[lvl, pt], qm1), z, qm1)
                cnt = 0
                for pt in range(npts):
                    if partial[m, pt] == 0:
                        cnt += 1
                if cnt > best:
                    best = cnt
                    nbest = 0
                    nwit = 0
                if cnt == best:
                    nbest += 1
                    if nwit < cap:
                        wit[nwit] = g
                        nwit += 1
                g += 1
                if g >= bend:
                    break
                pos = m - 1
                while digits[pos] == q - 1:
                    digits[pos] = 0
                    pos -= 1
                digits[pos] += 1
                from_lvl = pos
    return best, nbest, wit_arr[:nwit].copy()
