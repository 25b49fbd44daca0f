"""Finite fields GF(p^k) with a fixed primitive element and log tables.

Elements are plain ints. For k = 1 an element is its residue 0..p-1; for
k > 1 the element c_0 + c_1 x + ... + c_{k-1} x^{k-1} (reduced modulo the
field's defining polynomial) is stored as sum(c_j * p**j).

The compiled kernels work in a second encoding, the *rank*: 0 stands for the
zero element and r >= 1 for delta**(r - 1). Rank order is the canonical
element order used for sorting points and candidate polynomials.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ExtensionDegreeError, FieldSizeError, NotPrimeError, ParseError

MAX_FIELD_SIZE = 2**16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def split_prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p**k, or raise if q is not a prime power."""
    if q < 2:
        raise NotPrimeError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            break
    k = 0
    m = q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1 or not is_prime(p):
        raise NotPrimeError(f"{q} is not a prime power")
    return p, k


# -- polynomials over GF(p), coefficient lists low degree first ------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for j, mj in enumerate(m):
            a[shift + j] = (a[shift + j] - c * mj) % p
        _trim(a)
    return a


def _is_irreducible(f: list[int], p: int) -> bool:
    k = len(f) - 1
    if k == 1:
        return True
    if f[0] == 0:
        return False
    for deg in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            g = list(low) + [1]
            if not _poly_rem(f, g, p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k over GF(p).

    Coefficients are compared low degree first; the returned tuple has the
    leading 1 at the end.
    """
    for low in itertools.product(range(p), repeat=k):
        f = list(low) + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class Field:
    """GF(p^k) with exp/log tables relative to a fixed primitive element."""

    def __init__(self, p: int, k: int, max_size: int = MAX_FIELD_SIZE):
        if not is_prime(p):
            raise NotPrimeError(f"{p} is not prime")
        if k < 1:
            raise ExtensionDegreeError(f"extension degree must be >= 1, got {k}")
        if p**k > max_size:
            raise FieldSizeError(f"field size {p}^{k} exceeds limit {max_size}")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = smallest_irreducible(p, k) if k > 1 else None
        self._build_tables()

    # construction helpers -------------------------------------------------

    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(x % self.p)
            x //= self.p
        return out

    def _undigits(self, d: list[int]) -> int:
        x = 0
        for c in reversed(d):
            x = x * self.p + c
        return x

    def _slow_mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        p = self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        r = _poly_rem(prod, list(self.modulus), p)
        return self._undigits(r + [0] * (self.k - len(r)))

    def _slow_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def _build_tables(self) -> None:
        q, qm1 = self.q, self.q - 1
        primes = prime_factors(qm1)
        for cand in range(1, q):
            if all(self._slow_pow(cand, qm1 // ell) != 1 for ell in primes):
                self.delta = cand
                break
        exp = np.empty(qm1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for m in range(qm1):
            exp[m] = x
            log[x] = m
            x = self._slow_mul(x, self.delta)
        assert x == 1
        self.exp_table = exp
        self.log_table = log
        self.to_rank = log + 1
        self.from_rank = np.concatenate(([0], exp))
        # zech[d] = rank(1 + delta^d)
        one_plus = np.array([self._add_digits(1, int(exp[d])) for d in range(qm1)], dtype=np.int64)
        self.zech = self.to_rank[one_plus]
        self.minus_one = int(exp[qm1 // 2]) if self.p != 2 else 1
        for arr in (self.exp_table, self.log_table, self.to_rank, self.from_rank, self.zech):
            arr.setflags(write=False)

    def _add_digits(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        da, db = self._digits(a), self._digits(b)
        return self._undigits([(x + y) % self.p for x, y in zip(da, db)])

    # identity -------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((Field, self.p, self.k))

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (field_create, (self.p, self.k))

    # arithmetic -----------------------------------------------------------

    def elements(self) -> list[int]:
        """All elements in canonical order: 0, 1, delta, delta^2, ..."""
        return [0] + [int(x) for x in self.exp_table]

    def nonzero(self) -> list[int]:
        return [int(x) for x in self.exp_table]

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = int(self.log_table[a]), int(self.log_table[b])
        qm1 = self.q - 1
        z = int(self.zech[(lb - la) % qm1])
        if z == 0:
            return 0
        return int(self.exp_table[(la + z - 1) % qm1])

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self.mul(a, self.minus_one)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return (a * b) % self.p
        return int(self.exp_table[(self.log_table[a] + self.log_table[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.exp_table[(-self.log_table[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, m: int) -> int:
        """a**m; negative m goes through the inverse, and 0**0 = 1."""
        if m == 0:
            return 1
        if a == 0:
            if m < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 0
        return int(self.exp_table[(int(self.log_table[a]) * m) % (self.q - 1)])

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("log of 0 is undefined")
        return int(self.log_table[a])

    def exp(self, m: int) -> int:
        return int(self.exp_table[m % (self.q - 1)])

    def rank(self, a: int) -> int:
        return int(self.to_rank[a])

    def element_of_rank(self, r: int) -> int:
        return int(self.from_rank[r])

    def order(self, a: int) -> int:
        qm1 = self.q - 1
        return qm1 // math.gcd(self.log(a), qm1)

    # text ---------------------------------------------------------------

    def format_element(self, a: int) -> str:
        if self.k == 1 or a < self.p:
            return str(a)
        return f"g^{self.log(a)}"

    _ELEM_RE = re.compile(r"^\s*(?:(\d+)|g(?:\^(-?\d+))?)\s*$")

    def parse_element(self, text: str) -> int:
        m = self._ELEM_RE.match(text)
        if not m:
            raise ParseError(f"cannot parse field element {text!r}")
        if m.group(1) is not None:
            v = int(m.group(1))
            if v >= self.p:
                raise ParseError(f"{v} is not an element of the prime field GF({self.p})")
            return v
        e = int(m.group(2)) if m.group(2) is not None else 1
        return self.exp(e)

    def describe(self) -> dict:
        return {
            "q": self.q,
            "p": self.p,
            "k": self.k,
            "modulus": list(self.modulus) if self.modulus else None,
            "delta": self.delta,
        }


@lru_cache(maxsize=None)
def _cached_field(p: int, k: int, max_size: int) -> Field:
    return Field(p, k, max_size)


def field_create(p: int, k: int = 1, max_size: int = MAX_FIELD_SIZE) -> Field:
    """Build (or fetch the cached) GF(p^k)."""
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if k < 1:
        raise ExtensionDegreeError(f"extension degree must be >= 1, got {k}")
    if p**k > max_size:
        raise FieldSizeError(f"field size {p}^{k} exceeds limit {max_size}")
    return _cached_field(p, k, max_size)


def field_from_q(q: int | str) -> Field:
    """Field from a size given as an int or text like ``9`` or ``3^2``."""
    if isinstance(q, str):
        s = q.strip()
        if "^" in s:
            p, k = (int(t) for t in s.split("^", 1))
            return field_create(p, k)
        q = int(s)
    p, k = split_prime_power(q)
    return field_create(p, k)


def primitive_element(field: Field) -> int:
    return field.delta


@dataclass(frozen=True)
class SubgroupData:
    a: int
    r: int
    mu: frozenset
    delta_a: frozenset


def subgroup_data(field: Field, a: int) -> SubgroupData:
    """Kernel and image of z -> z**a on the multiplicative group."""
    if a < 1:
        raise ValueError(f"weight must be >= 1, got {a}")
    units = field.nonzero()
    mu = frozenset(z for z in units if field.pow(z, a) == 1)
    image = frozenset(field.pow(z, a) for z in units)
    return SubgroupData(a=a, r=math.gcd(a, field.q - 1), mu=mu, delta_a=image)
