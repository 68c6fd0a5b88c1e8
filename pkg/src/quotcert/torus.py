"""Tori with twisted monomial group actions and abelian invariant lattices.

A group element acts on a rank-n torus through its character lattice Z^n:

    g . x^v  =  zeta_e^(c . v) * x^(M v)

with M an integer lattice map and c a character vector mod e.  For a
monomial element (perm, scalars), M is the permutation matrix and
c[j] = scalars[perm[j]], so that the action on variables reads
g(x_j) = zeta^(c[j]) x_perm[j].

Invariant subrings of diagonal actions are finite-index sublattices of the
character lattice; their bases are always returned in column Hermite normal
form so certificates are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import MonomialElement, MonomialRep, SubsetOrbit, subset_orbits
from .intmat import (
    IntMatrix,
    congruence_kernel_lattice,
    det,
    hermite_normal_form,
    inverse_times,
)


class NotStable(Exception):
    """The action does not map the sublattice into itself."""


class NotUnimodular(Exception):
    pass


class NotScalarCenter(Exception):
    pass


@dataclass(frozen=True)
class TwistedMonomialAction:
    """g . x^v = zeta_e^(char . v) x^(lattice_map v)."""

    lattice_map: IntMatrix
    char: tuple
    e: int

    def __post_init__(self):
        if self.lattice_map.rows != self.lattice_map.cols:
            raise ValueError("lattice map must be square")
        if len(self.char) != self.lattice_map.cols:
            raise ValueError("character length mismatch")
        object.__setattr__(self, "char", tuple(c % self.e for c in self.char))

    @property
    def rank(self):
        return self.lattice_map.rows

    @staticmethod
    def identity(rank, e):
        return TwistedMonomialAction(IntMatrix.identity(rank), (0,) * rank, e)

    @staticmethod
    def from_element(g: MonomialElement):
        n = g.n
        M = IntMatrix.from_rows([[1 if g.perm[j] == i else 0 for j in range(n)]
                                 for i in range(n)])
        char = tuple(g.scalars[g.perm[j]] for j in range(n))
        return TwistedMonomialAction(M, char, g.e)

    def compose(self, other):
        """self after other: x^v -> zeta^(c_o.v) x^(M_o v) -> ..."""
        if self.e != other.e or self.rank != other.rank:
            raise ValueError("incompatible actions")
        M = self.lattice_map @ other.lattice_map
        mt = other.lattice_map.transpose()
        char = tuple((other.char[j] + sum(mt[j, i] * self.char[i]
                                          for i in range(self.rank))) % self.e
                     for j in range(self.rank))
        return TwistedMonomialAction(M, char, self.e)

    def power(self, k):
        acc = TwistedMonomialAction.identity(self.rank, self.e)
        base = self
        if k < 0:
            raise ValueError("negative power unsupported; invert via order")
        while k:
            if k & 1:
                acc = acc.compose(base)
            base = base.compose(base) if k > 1 else base
            k >>= 1
        return acc

    def order(self):
        acc = self
        k = 1
        while not acc.is_identity():
            acc = acc.compose(self)
            k += 1
            if k > 10 ** 4:
                raise RuntimeError("action order exceeds cap")
        return k

    def is_identity(self):
        return self.lattice_map.is_identity() and all(c == 0 for c in self.char)

    def is_diagonal(self):
        return self.lattice_map.is_identity()

    def twist_of(self, v):
        return sum(c * x for c, x in zip(self.char, v)) % self.e

    def apply_to_vector(self, v):
        """(new exponent vector, scalar exponent)."""
        return self.lattice_map.mul_vec(list(v)), self.twist_of(v)


def action_of(g: MonomialElement) -> TwistedMonomialAction:
    return TwistedMonomialAction.from_element(g)


@dataclass(frozen=True)
class InvariantLattice:
    """Finite-index sublattice of invariant monomials, basis in column HNF."""

    basis: IntMatrix   # columns are exponent vectors of the generators
    index: int

    @property
    def rank(self):
        return self.basis.cols


def abelian_invariant_lattice(chars, n, e) -> InvariantLattice:
    """Invariant lattice {v : c . v = 0 mod e for all character rows c}.

    The index equals the order of the image of the joint character map
    Z^n -> (Z/e)^k, which is also |det basis|.
    """
    rows = [list(c) for c in chars]
    if not rows:
        return InvariantLattice(IntMatrix.identity(n), 1)
    C = IntMatrix.from_rows(rows)
    if C.cols != n:
        raise ValueError("character length mismatch")
    B = congruence_kernel_lattice(C, e)
    return InvariantLattice(B, abs(det(B)))


def restrict_action_to_sublattice(action: TwistedMonomialAction,
                                  lat: InvariantLattice) -> TwistedMonomialAction:
    """Express the action in the sublattice basis B: map B^-1 M B, char B^T c.

    Raises NotStable when M B is not contained in the column span of B over Z.
    """
    B = lat.basis
    MB = action.lattice_map @ B
    M2 = inverse_times(B, MB)
    if M2 is None:
        raise NotStable("action does not stabilize the sublattice")
    bt = B.transpose()
    char = tuple(sum(bt[j, i] * action.char[i] for i in range(B.rows)) % action.e
                 for j in range(B.cols))
    return TwistedMonomialAction(M2, char, action.e)


def apply_substitution(action: TwistedMonomialAction, U: IntMatrix) -> TwistedMonomialAction:
    """Conjugate by the unimodular coordinate change U (columns = new basis)."""
    if abs(det(U)) != 1:
        raise NotUnimodular("substitution matrix must have |det| = 1")
    MU = action.lattice_map @ U
    M2 = inverse_times(U, MU)
    ut = U.transpose()
    char = tuple(sum(ut[j, i] * action.char[i] for i in range(U.rows)) % action.e
                 for j in range(U.cols))
    return TwistedMonomialAction(M2, char, action.e)


@dataclass(frozen=True)
class TorusStratum:
    """Coordinate stratum: x_j invertible for j in the subset, zero outside."""

    orbit: SubsetOrbit
    chars: tuple        # character vectors of the stabilizer restricted to J
    e: int
    full_group: bool    # True only for the open stratum of a non-abelian rep

    @property
    def rank(self):
        return len(self.orbit.representative)


def coordinate_stratify(rep: MonomialRep):
    """Decompose affine space into coordinate tori modulo the group action.

    The permutation image of the group must be trivial (diagonal action) or
    generated by the full cycle x_j -> x_{j+1}.  Proper nonempty subsets have
    stabilizer equal to the diagonal subgroup N; the open stratum carries the
    whole group; the empty stratum is a point.
    """
    closure = rep.closure()
    perms = {g.perm for g in closure}
    n = rep.n
    cycle = tuple((j + 1) % n for j in range(n))
    diag = [g for g in closure if g.is_diagonal()]
    if perms == {tuple(range(n))}:
        strata = []
        for mask in range(2 ** n):
            subset = tuple(i for i in range(n) if mask >> i & 1)
            chars = tuple(tuple(g.scalars[i] for i in subset) for g in diag)
            strata.append(TorusStratum(SubsetOrbit(subset, 1), chars, rep.e,
                                       full_group=False))
        strata.sort(key=lambda s: (len(s.orbit.representative),
                                   s.orbit.representative))
        return strata
    expected = {tuple((j + k) % n for j in range(n)) for k in range(n)}
    if perms != expected:
        raise ValueError("permutation image must be trivial or the full cycle")
    strata = []
    for orbit in subset_orbits(n):
        subset = orbit.representative
        if subset == tuple(range(n)):
            strata.append(TorusStratum(orbit, (), rep.e, full_group=True))
        else:
            chars = tuple(tuple(g.scalars[i] for i in subset) for g in diag)
            strata.append(TorusStratum(orbit, chars, rep.e, full_group=False))
    return strata


def fixed_sublattice(maps) -> IntMatrix:
    """Column HNF basis of {v : M v = v for every lattice map M}."""
    if not maps:
        raise ValueError("need at least one lattice map")
    n = maps[0].rows
    stacked = []
    for M in maps:
        stacked.extend((M - IntMatrix.identity(n)).to_rows())
    from .intmat import kernel_lattice

    return kernel_lattice(IntMatrix.from_rows(stacked))


def paper_center_basis(n: int, z_order: int) -> IntMatrix:
    """Columns y1 = x1^z_order, y_{i+1} = x_{i+2}/x_{i+1} (0-indexed ratios)."""
    cols = [[z_order if i == 0 else 0 for i in range(n)]]
    for j in range(n - 1):
        col = [0] * n
        col[j] = -1
        col[j + 1] = 1
        cols.append(col)
    return IntMatrix.from_cols(cols)
