"""Small finite fields with exact arithmetic for brute-force point counts.

Fields F_{p^k} are realized as Z/p[x] modulo a fixed monic PRIMITIVE
polynomial, so that x generates the multiplicative group.  A short table of
standard (Conway) polynomials covers the cases the test suite exercises;
anything absent falls back to a deterministic search for the
lexicographically smallest primitive polynomial, which keeps counts
reproducible across runs.

Elements are packed into integers (base-p digits).  Fields of size up to
TABLE_CAP get exp/log tables, making multiplication and q-th powers O(1)
during enumeration loops.
"""

from __future__ import annotations

from functools import lru_cache

TABLE_CAP = 4 * 10 ** 6

# (p, k) -> monic polynomial, low-degree-first coefficient list of length k+1.
PRIMITIVE_POLYS = {
    (2, 1): [1, 1],
    (2, 2): [1, 1, 1],
    (2, 3): [1, 1, 0, 1],
    (2, 4): [1, 1, 0, 0, 1],
    (3, 1): [1, 1],
    (3, 2): [2, 2, 1],
    (3, 3): [1, 2, 0, 1],
    (5, 1): [3, 1],
    (5, 2): [2, 4, 1],
    (7, 1): [4, 1],
    (7, 2): [3, 6, 1],
}


def factorize(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n):
    return n > 1 and factorize(n) == {n: 1}


def prime_power(q):
    """Return (p, k) with q = p^k, or raise ValueError."""
    f = factorize(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    [(p, k)] = f.items()
    return p, k


def _poly_mulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    # reduce modulo mod (monic)
    k = len(mod) - 1
    for i in range(len(out) - 1, k - 1, -1):
        c = out[i]
        if c:
            for j in range(k + 1):
                out[i - k + j] = (out[i - k + j] - c * mod[j]) % p
    out = out[:k]
    while len(out) < k:
        out.append(0)
    return out


def _poly_powmod(a, n, mod, p):
    k = len(mod) - 1
    acc = [1] + [0] * (k - 1)
    base = list(a) + [0] * (k - len(a))
    while n:
        if n & 1:
            acc = _poly_mulmod(acc, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        n >>= 1
    return acc


def _is_irreducible(poly, p):
    """Monic poly over F_p irreducible iff x^(p^k) = x and gcd conditions hold."""
    k = len(poly) - 1
    if k == 1:
        return True
    x = [0, 1]
    # x^(p^d) mod poly for d = 1..k
    acc = list(x)
    for d in range(1, k + 1):
        acc = _poly_powmod(acc, p, poly, p)
        if d < k and k % d == 0:
            # gcd(x^(p^d) - x, poly) must be 1
            diff = list(acc)
            diff[1] = (diff[1] - 1) % p
            if _poly_gcd_nontrivial(diff, poly, p):
                return False
    diff = list(acc)
    diff[1] = (diff[1] - 1) % p
    return not any(diff)


def _poly_gcd_nontrivial(a, b, p):
    a = _trim(a)
    b = _trim(b)
    while a:
        b = _polymod(b, a, p)
        a, b = b, a
    return len(b) > 1


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        k = len(a) - len(b)
        for i in range(len(b)):
            a[i + k] = (a[i + k] - c * b[i]) % p
        a = _trim(a)
    return a


def _is_primitive(poly, p):
    """Irreducible monic poly is primitive iff x has full order p^k - 1."""
    k = len(poly) - 1
    order = p ** k - 1
    for ell in factorize(order):
        acc = _poly_powmod([0, 1], order // ell, poly, p)
        if acc == [1] + [0] * (k - 1):
            return False
    return True


@lru_cache(maxsize=None)
def primitive_polynomial(p, k):
    if (p, k) in PRIMITIVE_POLYS:
        poly = PRIMITIVE_POLYS[(p, k)]
        return tuple(poly)
    if k == 1:
        # x - g for the smallest primitive root g
        g = _smallest_primitive_root(p)
        return ((-g) % p, 1)
    # deterministic search: lexicographically smallest primitive monic poly
    from itertools import product

    for tail in product(range(p), repeat=k):
        if tail[0] == 0:
            continue  # constant term 0 means x divides it
        poly = list(tail) + [1]
        if _is_irreducible(poly, p) and _is_primitive(poly, p):
            return tuple(poly)
    raise RuntimeError("no primitive polynomial found")  # unreachable


def _smallest_primitive_root(p):
    order = p - 1
    fac = factorize(order)
    for g in range(2, p):
        if all(pow(g, order // ell, p) != 1 for ell in fac):
            return g
    raise RuntimeError("no primitive root")  # unreachable for prime p


class FiniteField:
    """F_{p^k} with log/exp tables; elements are ints packing base-p digits."""

    def __init__(self, p, k):
        self.p = p
        self.k = k
        self.size = p ** k
        if self.size > TABLE_CAP:
            raise ValueError(f"field size {self.size} exceeds table cap")
        self.poly = primitive_polynomial(p, k)
        self.exp = [0] * (self.size - 1)
        self.log = [None] * self.size
        if k == 1:
            g = _smallest_primitive_root(p) if p > 2 else 1
            cur = 1
            for i in range(self.size - 1):
                self.exp[i] = cur
                self.log[cur] = i
                cur = cur * g % p
        else:
            # generator is x itself (the polynomial is primitive); multiply
            # by x per step: shift digits, reduce the overflow digit
            tail = list(self.poly[:k])
            cur = [1] + [0] * (k - 1)
            for i in range(self.size - 1):
                self.exp[i] = self._pack(cur)
                self.log[self.exp[i]] = i
                top = cur[k - 1]
                cur = [0] + cur[:k - 1]
                if top:
                    for j in range(k):
                        if tail[j]:
                            cur[j] = (cur[j] - top * tail[j]) % p

    def _pack(self, coeffs):
        acc = 0
        for c in reversed(coeffs):
            acc = acc * self.p + c
        return acc

    def zero(self):
        return 0

    def one(self):
        return self.exp[0]

    def generator(self):
        return self.exp[1] if self.size > 2 else self.exp[0]

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.size - 1)]

    def pow(self, a, n):
        if a == 0:
            if n == 0:
                return self.one()
            if n < 0:
                raise ZeroDivisionError
            return 0
        return self.exp[(self.log[a] * n) % (self.size - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError
        return self.exp[(-self.log[a]) % (self.size - 1)]

    def root_of_unity(self, e):
        """Canonical primitive e-th root: generator^((size-1)/e)."""
        if (self.size - 1) % e != 0:
            raise ValueError(f"no primitive {e}-th root in field of size {self.size}")
        return self.exp[(self.size - 1) // e]

    def units(self):
        return self.exp  # all nonzero elements, generator powers in order


@lru_cache(maxsize=None)
def finite_field(q):
    p, k = prime_power(q)
    return FiniteField(p, k)


def extension_field(q, m):
    """F_{q^m}, built (and cached) directly as F_{p^(k*m)}."""
    return finite_field(q ** m)


def multiplicative_order(a, n):
    """Order of a modulo n (a coprime to n)."""
    if n == 1:
        return 1
    from math import gcd

    if gcd(a, n) != 1:
        raise ValueError("not a unit")
    k = 1
    cur = a % n
    while cur != 1:
        cur = cur * a % n
        k += 1
    return k
