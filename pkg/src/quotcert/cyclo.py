"""Exact arithmetic in cyclotomic fields Q(zeta_e) and linear algebra over them.

Numbers are stored canonically: a CycloNumber of conductor e keeps exactly
phi(e) rational coefficients, the remainder of its polynomial representative
modulo the e-th cyclotomic polynomial.  Canonical storage makes equality and
hashing structural, which the stratification engine relies on when it
deduplicates hyperplane flats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def cyclotomic_polynomial(e: int):
    """Coefficients (low degree first, ints) of the e-th cyclotomic polynomial."""
    if e < 1:
        raise ValueError("conductor must be positive")
    # start from x^e - 1 and divide off Phi_d for proper divisors d
    poly = [-1] + [0] * (e - 1) + [1]
    for d in range(1, e):
        if e % d == 0:
            poly = _poly_div_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _poly_div_exact(num, den):
    """Exact division of integer polynomials (low degree first)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[len(den) - 1 + k]
        if c % den[-1] != 0:
            raise ArithmeticError("non-exact polynomial division")
        q = c // den[-1]
        out[k] = q
        for i, dc in enumerate(den):
            num[i + k] -= q * dc
    if any(num):
        raise ArithmeticError("non-exact polynomial division")
    return out


@lru_cache(maxsize=None)
def _phi_deg(e: int) -> int:
    return len(cyclotomic_polynomial(e)) - 1


def _reduce(coeffs, e):
    """Reduce a coefficient list modulo Phi_e; return tuple of length phi(e)."""
    phi = cyclotomic_polynomial(e)
    d = len(phi) - 1
    c = [Fraction(x) for x in coeffs]
    if len(c) < d:
        c += [Fraction(0)] * (d - len(c))
    for k in range(len(c) - 1, d - 1, -1):
        q = c[k]
        if q:
            for i in range(len(phi)):
                c[k - d + i] -= q * phi[i]
        c.pop()
    return tuple(c[:d])


@dataclass(frozen=True)
class CycloNumber:
    """Element of Q(zeta_e), canonically reduced modulo Phi_e."""

    e: int
    coeffs: tuple  # phi(e) Fractions, low power first

    def __post_init__(self):
        if len(self.coeffs) != _phi_deg(self.e):
            raise ValueError("coefficient length must be phi(e)")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @staticmethod
    def from_coeffs(e, coeffs):
        return CycloNumber(e, _reduce(coeffs, e))

    @staticmethod
    def zero(e):
        return CycloNumber(e, (Fraction(0),) * _phi_deg(e))

    @staticmethod
    def one(e):
        return CycloNumber.from_coeffs(e, [1])

    @staticmethod
    def rational(e, q):
        return CycloNumber.from_coeffs(e, [Fraction(q)])

    @staticmethod
    def zeta(e, k=1):
        """zeta_e^k, reduced."""
        k %= e
        return CycloNumber.from_coeffs(e, [0] * k + [1])

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def _check(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNumber.rational(self.e, other)
        if not isinstance(other, CycloNumber):
            raise TypeError(type(other))
        if other.e != self.e:
            raise ValueError("mixed conductors; lift explicitly first")
        return other

    def __add__(self, other):
        other = self._check(other)
        return CycloNumber(self.e, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.e, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        a, b = self.coeffs, other.coeffs
        prod = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycloNumber.from_coeffs(self.e, prod)

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse of a nonzero element (extended Euclid mod Phi_e)."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.e)]
        r0, r1 = phi, list(self.coeffs)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while True:
            r1 = _poly_trim(r1)
            if len(r1) == 1:
                inv = [c / r1[0] for c in s1]
                return CycloNumber.from_coeffs(self.e, inv)
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inverse()

    def lift(self, e_new):
        """Image under zeta_e -> zeta_{e_new}^{e_new/e}; e must divide e_new."""
        if e_new % self.e != 0:
            raise ValueError("target conductor must be a multiple")
        step = e_new // self.e
        out = [Fraction(0)] * (len(self.coeffs) * step + 1)
        for i, c in enumerate(self.coeffs):
            out[i * step] += c
        return CycloNumber.from_coeffs(e_new, out)

    def eval_mod(self, zeta_val, modulus):
        """Evaluate at an integer root of unity modulo a prime (for point counts)."""
        acc = 0
        power = 1
        for c in self.coeffs:
            if c.denominator != 1:
                inv = pow(c.denominator, -1, modulus)
                acc = (acc + c.numerator * inv % modulus * power) % modulus
            else:
                acc = (acc + c.numerator * power) % modulus
            power = power * zeta_val % modulus
        return acc % modulus

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*z^{i}" if i else f"{c}")
        return "Cyclo({}; e={})".format(" + ".join(terms) if terms else "0", self.e)


def _poly_trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod(a, b):
    a = _poly_trim(a)
    b = _poly_trim(b)
    if len(b) == 1 and b[0] == 0:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    r = list(a)
    while len(_poly_trim(r)) >= len(b) and any(r):
        r = _poly_trim(r)
        if len(r) < len(b):
            break
        k = len(r) - len(b)
        c = r[-1] / b[-1]
        q[k] = c
        for i in range(len(b)):
            r[i + k] -= c * b[i]
        r = r[:-1]
    return q, _poly_trim(r)


@dataclass(frozen=True)
class CycloMatrix:
    rows: int
    cols: int
    entries: tuple  # CycloNumber, row-major

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")

    @staticmethod
    def from_rows(e, rows):
        conv = []
        for r in rows:
            for x in r:
                conv.append(x if isinstance(x, CycloNumber) else CycloNumber.rational(e, x))
        n = len(rows)
        m = len(rows[0]) if rows else 0
        return CycloMatrix(n, m, tuple(conv))

    @staticmethod
    def identity(e, n):
        one, zero = CycloNumber.one(e), CycloNumber.zero(e)
        return CycloMatrix(n, n, tuple(one if i == j else zero
                                       for i in range(n) for j in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self):
        return [self.row(i) for i in range(self.rows)]

    def mul_vec(self, v):
        return [sum((self[i, k] * v[k] for k in range(self.cols)),
                    start=CycloNumber.zero(_entry_conductor(self)))
                for i in range(self.rows)]


def _entry_conductor(M: CycloMatrix):
    if not M.entries:
        raise ValueError("empty matrix has no conductor")
    return M.entries[0].e


@dataclass(frozen=True)
class SolutionSpace:
    """Solutions of A x = b over Q(zeta_e)."""

    rank: int
    consistent: bool
    particular: tuple | None      # one solution, or None when inconsistent
    nullspace: tuple              # tuple of basis vectors (tuples of CycloNumber)

    @property
    def nullity(self):
        return len(self.nullspace)


def cyclo_solve(A: CycloMatrix, b) -> SolutionSpace:
    """Exact Gaussian elimination over Q(zeta_e).

    Returns rank, consistency, a particular solution when consistent, and a
    nullspace basis.  Inconsistent systems yield an empty SolutionSpace.
    Pivoting is deterministic: first nonzero entry in row-major order.
    """
    n, m = A.rows, A.cols
    e = _entry_conductor(A) if A.entries else (b[0].e if b else 1)
    rows = [A.row(i) + [b[i] if isinstance(b[i], CycloNumber)
                        else CycloNumber.rational(e, b[i])] for i in range(n)]
    zero = CycloNumber.zero(e)
    piv_cols = []
    r = 0
    for j in range(m):
        sel = None
        for i in range(r, n):
            if not rows[i][j].is_zero():
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = rows[r][j].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and not rows[i][j].is_zero():
                f = rows[i][j]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(j)
        r += 1
        if r == n:
            break
    # consistency: zero rows must have zero rhs
    consistent = all(rows[i][m].is_zero() for i in range(r, n))
    if not consistent:
        return SolutionSpace(rank=r, consistent=False, particular=None, nullspace=())
    particular = [zero] * m
    for idx, j in enumerate(piv_cols):
        particular[j] = rows[idx][m]
    free_cols = [j for j in range(m) if j not in piv_cols]
    null = []
    one = CycloNumber.one(e)
    for f in free_cols:
        vec = [zero] * m
        vec[f] = one
        for idx, j in enumerate(piv_cols):
            vec[j] = -rows[idx][f]
        null.append(tuple(vec))
    return SolutionSpace(rank=r, consistent=True,
                         particular=tuple(particular), nullspace=tuple(null))
