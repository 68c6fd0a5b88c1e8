"""Exact integer matrices: Hermite/Smith normal forms and congruence counting.

Everything here is arbitrary-precision integer arithmetic on plain Python
ints; there is no floating point anywhere in this module.  The matrices are
small (desk scale), so the classical O(n^3)-ish elimination algorithms are
used throughout.  Conventions fixed project-wide:

* Hermite normal form is COLUMN-style: for input M we return (H, U) with
  M @ U = H, U unimodular, H in lower-triangular echelon shape with positive
  pivots whose rows strictly increase by column, entries in a pivot row to
  the left of the pivot reduced into [0, pivot), and zero columns pushed to
  the right.
* Smith normal form returns (D, U, V) with U @ M @ V = D, d1 | d2 | ... and
  nonnegative diagonal.  Pivot selection is smallest nonzero absolute value,
  ties broken by lowest (row, col), which makes U and V deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major entries."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")
        object.__setattr__(self, "entries", tuple(int(x) for x in self.entries))

    @staticmethod
    def from_rows(rows):
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise ValueError("ragged rows")
        return IntMatrix(n, m, tuple(x for r in rows for x in r))

    @staticmethod
    def from_cols(cols):
        cols = [list(c) for c in cols]
        if not cols:
            return IntMatrix(0, 0, ())
        n = len(cols[0])
        return IntMatrix.from_rows([[cols[j][i] for j in range(len(cols))] for i in range(n)])

    @staticmethod
    def identity(n):
        return IntMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def zero(rows, cols):
        return IntMatrix(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j):
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self):
        return [self.row(i) for i in range(self.rows)]

    def transpose(self):
        return IntMatrix.from_rows([self.col(j) for j in range(self.cols)])

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            a, b = self.to_rows(), other.to_rows()
            out = [[sum(a[i][k] * b[k][j] for k in range(self.cols))
                    for j in range(other.cols)] for i in range(self.rows)]
            return IntMatrix.from_rows(out) if self.rows else IntMatrix(0, other.cols, ())
        raise TypeError(type(other))

    def mul_vec(self, v):
        if len(v) != self.cols:
            raise ValueError("shape mismatch")
        return [sum(self[i, k] * v[k] for k in range(self.cols)) for i in range(self.rows)]

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols,
                         tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols,
                         tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c):
        return IntMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def is_identity(self):
        return self.rows == self.cols and self == IntMatrix.identity(self.rows)

    def is_zero(self):
        return all(a == 0 for a in self.entries)

    def power(self, k):
        if self.rows != self.cols:
            raise ValueError("power of non-square matrix")
        if k < 0:
            raise ValueError("negative power")
        acc = IntMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                acc = acc @ base
            base = base @ base if k > 1 else base
            k >>= 1
        return acc


def det(M: IntMatrix):
    """Exact determinant by fraction-free Bareiss elimination."""
    if M.rows != M.cols:
        raise ValueError("determinant of non-square matrix")
    n = M.rows
    if n == 0:
        return 1
    a = M.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hermite_normal_form(M: IntMatrix):
    """Column-style HNF: return (H, U) with M @ U = H, U unimodular.

    Total on every input, including non-square and rank-deficient matrices.
    """
    n, m = M.rows, M.cols
    h = [M.col(j) for j in range(m)]   # work on columns
    u = [[1 if i == j else 0 for i in range(m)] for j in range(m)]  # columns of U

    def combine(j1, j2, a, b, c, d):
        # (col j1, col j2) <- (a*j1 + b*j2, c*j1 + d*j2), det ad - bc = +-1
        for vec in (h, u):
            x, y = vec[j1], vec[j2]
            vec[j1] = [a * xi + b * yi for xi, yi in zip(x, y)]
            vec[j2] = [c * xi + d * yi for xi, yi in zip(x, y)]

    piv = 0  # next pivot column slot
    pivots = []  # (row, col) of placed pivots
    for i in range(n):
        if piv >= m:
            break
        # clear row i to a single entry among columns piv..m-1
        j0 = None
        for j in range(piv, m):
            if h[j][i] != 0:
                j0 = j
                break
        if j0 is None:
            continue
        if j0 != piv:
            h[piv], h[j0] = h[j0], h[piv]
            u[piv], u[j0] = u[j0], u[piv]
        for j in range(piv + 1, m):
            if h[j][i] == 0:
                continue
            g, s, t = _xgcd(h[piv][i], h[j][i])
            x, y = h[piv][i] // g, h[j][i] // g
            combine(piv, j, s, t, -y, x)
        if h[piv][i] < 0:
            h[piv] = [-x for x in h[piv]]
            u[piv] = [-x for x in u[piv]]
        # reduce entries left of the pivot in row i into [0, pivot)
        p = h[piv][i]
        for j in range(piv):
            q = h[j][i] // p
            if q:
                h[j] = [x - q * y for x, y in zip(h[j], h[piv])]
                u[j] = [x - q * y for x, y in zip(u[j], u[piv])]
        pivots.append((i, piv))
        piv += 1
    H = IntMatrix.from_cols(h) if m else IntMatrix(n, 0, ())
    U = IntMatrix.from_cols(u) if m else IntMatrix(0, 0, ())
    return H, U


def smith_normal_form(M: IntMatrix):
    """Return (D, U, V) with U @ M @ V = D, d1 | d2 | ..., all di >= 0."""
    n, m = M.rows, M.cols
    a = M.to_rows()
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    V = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def row_op(i1, i2, c):       # row i1 -= c * row i2
        a[i1] = [x - c * y for x, y in zip(a[i1], a[i2])]
        U[i1] = [x - c * y for x, y in zip(U[i1], U[i2])]

    def col_op(j1, j2, c):       # col j1 -= c * col j2
        for r in a:
            r[j1] -= c * r[j2]
        for r in V:
            r[j1] -= c * r[j2]

    def row_swap(i1, i2):
        a[i1], a[i2] = a[i2], a[i1]
        U[i1], U[i2] = U[i2], U[i1]

    def col_swap(j1, j2):
        for r in a:
            r[j1], r[j2] = r[j2], r[j1]
        for r in V:
            r[j1], r[j2] = r[j2], r[j1]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]

    k = 0
    size = min(n, m)
    while k < size:
        # pivot: smallest nonzero |entry| in a[k:][k:], ties by (row, col)
        best = None
        for i in range(k, n):
            for j in range(k, m):
                if a[i][j] != 0:
                    key = (abs(a[i][j]), i, j)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != k:
            row_swap(k, bi)
        if bj != k:
            col_swap(k, bj)
        # eliminate row/column k; pivot may shrink, so loop to fixpoint
        while True:
            for i in range(k + 1, n):
                if a[i][k]:
                    row_op(i, k, a[i][k] // a[k][k])
            for j in range(k + 1, m):
                if a[k][j]:
                    col_op(j, k, a[k][j] // a[k][k])
            nz = [(abs(a[i][k]), i, k) for i in range(k + 1, n) if a[i][k]]
            nz += [(abs(a[k][j]), k, j) for j in range(k + 1, m) if a[k][j]]
            if not nz:
                break
            _, bi, bj = min(nz)
            if bi != k:
                row_swap(k, bi)
            else:
                col_swap(k, bj)
        if a[k][k] < 0:
            row_neg(k)
        k += 1
    # enforce the divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(size - 1):
            x, y = a[i][i], a[i + 1][i + 1]
            if x and y % x != 0:
                # classical fix-up: fold d_{i+1} into position (i, i)
                col_op(i, i + 1, -1)        # col i += col i+1 (via -(-1))
                # now a[i+1][i] = y; redo a 2x2 elimination at i
                while a[i + 1][i] or a[i][i + 1]:
                    if a[i][i] == 0 or (a[i + 1][i] and abs(a[i + 1][i]) < abs(a[i][i])):
                        row_swap(i, i + 1)
                    if a[i + 1][i]:
                        row_op(i + 1, i, a[i + 1][i] // a[i][i])
                    if a[i][i + 1]:
                        col_op(i + 1, i, a[i][i + 1] // a[i][i])
                if a[i][i] < 0:
                    row_neg(i)
                if a[i + 1][i + 1] < 0:
                    row_neg(i + 1)
                changed = True
    D = IntMatrix.from_rows(a) if n else IntMatrix(0, m, ())
    Um = IntMatrix.from_rows(U) if n else IntMatrix(0, 0, ())
    Vm = IntMatrix.from_rows(V) if m else IntMatrix(0, 0, ())
    return D, Um, Vm


def congruence_solution_count(A: IntMatrix, b, m: int) -> int:
    """Count x in (Z/m)^n with A x = b (mod m), via Smith normal form.

    No enumeration: the count is a product of per-invariant gcd counts.
    """
    if m < 1:
        raise ValueError("modulus must be >= 1")
    if len(b) != A.rows:
        raise ValueError("rhs length mismatch")
    if m == 1:
        return 1
    D, U, V = smith_normal_form(A)
    c = U.mul_vec(list(b))
    n = A.cols
    count = 1
    r = min(A.rows, A.cols)
    for i in range(A.rows):
        d = D[i, i] if i < r else 0
        rhs = c[i] % m
        if d == 0:
            if rhs != 0:
                return 0
            if i < n:
                count *= m  # zero invariant: that variable is free
            continue
        g = gcd(d, m)
        if rhs % g != 0:
            return 0
        count *= g
    # columns of D beyond the diagonal support are free variables
    used = min(A.rows, n)
    count *= m ** (n - used)
    return count


def matmul_mod(A: IntMatrix, B: IntMatrix, m: int) -> IntMatrix:
    C = A @ B
    return IntMatrix(C.rows, C.cols, tuple(x % m for x in C.entries))


def inverse_times(B: IntMatrix, M: IntMatrix):
    """Return B^{-1} @ M as an IntMatrix, or None if not integral.

    B must be square nonsingular.  Exact: uses the adjugate via Bareiss
    determinants of minors replaced by column solves (Cramer).
    """
    n = B.rows
    if B.cols != n or M.rows != n:
        raise ValueError("shape mismatch")
    d = det(B)
    if d == 0:
        raise ValueError("singular matrix")
    out = []
    for j in range(M.cols):
        target = M.col(j)
        col = []
        for i in range(n):
            # Cramer: replace column i of B by target
            cols = [B.col(k) if k != i else target for k in range(n)]
            num = det(IntMatrix.from_cols(cols))
            if num % d != 0:
                return None
            col.append(num // d)
        out.append(col)
    return IntMatrix.from_cols(out) if M.cols else IntMatrix(n, 0, ())


def solve_integer(B: IntMatrix, v):
    """Solve B x = v exactly over Z; return x or None (B square nonsingular)."""
    R = inverse_times(B, IntMatrix.from_cols([list(v)]))
    return None if R is None else R.col(0)


def kernel_lattice(A: IntMatrix) -> IntMatrix:
    """Basis (columns) of {x in Z^cols : A x = 0}, in column HNF."""
    H, U = hermite_normal_form(A)
    zero_cols = [j for j in range(H.cols) if all(H[i, j] == 0 for i in range(H.rows))]
    gens = [U.col(j) for j in zero_cols]
    if not gens:
        return IntMatrix(A.cols, 0, ())
    Hk, _ = hermite_normal_form(IntMatrix.from_cols(gens))
    keep = [j for j in range(Hk.cols) if any(Hk[i, j] != 0 for i in range(Hk.rows))]
    return IntMatrix.from_cols([Hk.col(j) for j in keep]) if keep else IntMatrix(A.cols, 0, ())


def congruence_kernel_lattice(C: IntMatrix, e: int) -> IntMatrix:
    """Full-rank column basis (HNF) of {v in Z^n : C v = 0 (mod e)}.

    C is k x n (one character per row).  The lattice always contains e*Z^n,
    so the result is n x n.
    """
    k, n = C.rows, C.cols
    if k == 0:
        return IntMatrix.identity(n)
    # kernel of [C | e*I_k] : Z^{n+k} -> Z^k, projected to the first n coords
    aug = IntMatrix.from_rows([C.row(i) + [e if j == i else 0 for j in range(k)]
                               for i in range(k)])
    K = kernel_lattice(aug)
    gens = [K.col(j)[:n] for j in range(K.cols)]
    gens += [[e if i == t else 0 for i in range(n)] for t in range(n)]
    H, _ = hermite_normal_form(IntMatrix.from_cols(gens))
    cols = [H.col(j) for j in range(n)]  # first n columns carry the pivots
    B = IntMatrix.from_cols(cols)
    if abs(det(B)) == 0:
        raise AssertionError("kernel lattice must be full rank")
    return B
