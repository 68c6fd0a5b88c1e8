"""Twisted-Frobenius point counts over finite fields.

The primary counting route is exact linear algebra: the number of points x
of a split rank-n torus over the algebraic closure with Frob_q(x) = g.x is
|det(q I - M_g)| where M_g is the lattice map of g; the diagonal root-of-
unity twist never changes the count (the Lang map of the torus is a
surjective isogeny with kernel of exactly that size).  Two independent
routes back this up:

* a Smith-form congruence count of the index equations q a = c + M a
  (mod q^m - 1), and
* honest enumeration of points in an explicit extension field, checking the
  defining field equations pointwise (`brute_force_twisted_count`).

Quotient counts are Burnside averages of twisted counts over all group
elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

from .classpoly import ClassPoly
from .gf import extension_field, multiplicative_order, prime_power
from .groups import MonomialElement, MonomialRep
from .intmat import IntMatrix, congruence_solution_count, det
from .torus import TwistedMonomialAction, action_of

BRUTE_FORCE_BUDGET = 10 ** 7


class Degenerate(Exception):
    pass


class IntegralityViolation(Exception):
    """Burnside sum not divisible by the group order: an upstream bug."""


class BudgetExceeded(Exception):
    pass


class InvalidField(Exception):
    pass


@dataclass(frozen=True)
class FieldSpec:
    """A finite field valid for verifying a certificate of conductor e."""

    q: int
    required_conductor: int
    m_max: int = 12

    def __post_init__(self):
        p, _ = prime_power(self.q)  # raises for non prime powers
        if self.required_conductor % p == 0:
            raise InvalidField(
                f"characteristic {p} divides the conductor {self.required_conductor}")
        if self.q % self.required_conductor != 1 % self.required_conductor:
            raise InvalidField(
                f"q = {self.q} is not 1 mod {self.required_conductor}")


def validate_q(q, e):
    """Conductor guard: raise InvalidField unless q = 1 mod e and char is good."""
    FieldSpec(q, e)
    return q


def default_qs(e, count=3):
    """The smallest `count` primes q = 1 (mod e)."""
    from .gf import is_prime

    out = []
    q = 2
    while len(out) < count:
        if is_prime(q) and q % e == 1 % e:
            try:
                FieldSpec(q, e)
                out.append(q)
            except InvalidField:
                pass
        q += 1
    return out


def twisted_torus_count(action: TwistedMonomialAction, q: int) -> int:
    """|{x in the rank-n torus over the closure : Frob_q(x) = g.x}|."""
    n = action.rank
    M = action.lattice_map
    d = det(IntMatrix.identity(n).scale(q) - M)
    if d == 0:
        raise Degenerate("det(qI - M) = 0; M is not of finite order or q < 2")
    return abs(d)


def twisted_count_via_congruence(action: TwistedMonomialAction, q: int, m: int) -> int:
    """Same count through index congruences in F_{q^m}^*, via Smith form.

    Requires ord(action) | m and, when twisted, conductor | q^m - 1.  Counts
    solutions a of the index system (qI - M^T) a = t (mod q^m - 1), where
    t encodes the twist via zeta = g^((q^m-1)/e): writing x_j = g^(a_j), the
    point equation x_i^q = zeta^(c_i) prod_j x_j^M[j,i] becomes exactly that
    congruence row.
    """
    N = q ** m - 1
    A = IntMatrix.identity(action.rank).scale(q) - action.lattice_map.transpose()
    if any(c % action.e for c in action.char):
        if N % action.e != 0:
            raise InvalidField("conductor does not divide q^m - 1")
        t = [c * (N // action.e) for c in action.char]
    else:
        t = [0] * action.rank
    return congruence_solution_count(A, t, N)


def stabilization_degree(action: TwistedMonomialAction, q: int) -> int:
    """Smallest m with all twisted fixed points inside F_{q^m}.

    Any multiple of the transformation order works once the twist scalars
    exist in the field.
    """
    m = action.order()
    twist_orders = [action.e // gcd(action.e, c) for c in action.char if c % action.e]
    if twist_orders:
        e_eff = lcm(*twist_orders)
        p, _ = prime_power(q)
        if e_eff % p == 0:
            raise InvalidField(
                f"characteristic {p} divides the twist order {e_eff}")
        m = lcm(m, multiplicative_order(q % e_eff, e_eff))
    return m


def brute_force_twisted_count(action: TwistedMonomialAction, q: int, m: int) -> int:
    """Honest enumeration in (F_{q^m}^*)^n checking x_i^q = zeta^(c_i) x^(M e_i...).

    The check is the defining field equation evaluated pointwise.  The count
    is complete (equals the count over the algebraic closure) whenever the
    transformation order of the action divides m.  Enumeration is organized
    by the structure of the lattice map: per coordinate when M is diagonal,
    per permutation cycle when M is a permutation matrix, and over the full
    torus otherwise; the planned enumeration size must stay within the
    10^7 budget.
    """
    n = action.rank
    M = action.lattice_map
    Q = q ** m
    units = Q - 1
    twisted = any(c % action.e for c in action.char)
    if twisted and units % action.e != 0:
        raise InvalidField("conductor does not divide q^m - 1")

    diag = all(M[i, j] == 0 for i in range(n) for j in range(n) if i != j)
    perm_like = _as_permutation(M) if not diag else None

    if diag:
        planned = n * units
    elif perm_like is not None:
        planned = len(perm_like[1]) * units
    else:
        planned = units ** n
    if planned > BRUTE_FORCE_BUDGET:
        raise BudgetExceeded(f"planned enumeration {planned} exceeds 10^7")

    F = extension_field(q, m)
    zeta = F.root_of_unity(action.e) if twisted else F.one()
    zpow = [F.pow(zeta, c) for c in action.char]

    # the point map has coordinates g(x)_i = zeta^(c_i) * prod_j x_j^M[j, i]
    if diag:
        total = 1
        for i in range(n):
            d = M[i, i]
            cnt = 0
            for x in F.units():
                if F.pow(x, q) == F.mul(zpow[i], F.pow(x, d)):
                    cnt += 1
            total *= cnt
        return total

    if perm_like is not None:
        # equations x_i^q = zeta^(c_i) x_perm(i) decouple along cycles;
        # propagate x_perm(i) = zeta^(-c_i) x_i^q and check closure
        _, cycles = perm_like
        total = 1
        for cyc in cycles:
            cnt = 0
            inv_z = [F.inv(zpow[j]) for j in cyc]
            for u in F.units():
                x = u
                for t in range(len(cyc)):
                    x = F.mul(F.pow(x, q), inv_z[t])
                if x == u:
                    cnt += 1
            total *= cnt
        return total

    # general lattice map: full torus enumeration
    from itertools import product

    total = 0
    for xs in product(F.units(), repeat=n):
        good = True
        for i in range(n):
            rhs = zpow[i]
            for j in range(n):
                mji = M[j, i]
                if mji:
                    rhs = F.mul(rhs, F.pow(xs[j], mji))
            if F.pow(xs[i], q) != rhs:
                good = False
                break
        if good:
            total += 1
    return total


def _as_permutation(M: IntMatrix):
    """If M is a permutation matrix return (perm, cycles); else None."""
    n = M.rows
    perm = [None] * n
    for j in range(n):
        col = M.col(j)
        nz = [i for i in range(n) if col[i] != 0]
        if len(nz) != 1 or col[nz[0]] != 1:
            return None
        perm[j] = nz[0]
    if sorted(perm) != list(range(n)):
        return None
    seen = [False] * n
    cycles = []
    for j in range(n):
        if seen[j]:
            continue
        cyc = []
        cur = j
        while not seen[cur]:
            seen[cur] = True
            cyc.append(cur)
            cur = perm[cur]
        cycles.append(cyc)
    return perm, cycles


def twisted_affine_count(g: MonomialElement, q: int, n: int | None = None) -> int:
    """Twisted fixed count on affine n-space: sum over g-stable supports.

    Equals q^n for every finite-order monomial g.
    """
    if n is None:
        n = g.n
    if n != g.n:
        raise ValueError("dimension mismatch")
    act = action_of(g)
    total = 0
    for mask in range(2 ** n):
        J = [i for i in range(n) if mask >> i & 1]
        if any((g.perm[j] not in J) for j in J):
            continue
        if not J:
            total += 1  # the origin
            continue
        sub = IntMatrix.from_rows([[act.lattice_map[a, b] for b in J] for a in J])
        d = det(IntMatrix.identity(len(J)).scale(q) - sub)
        total += abs(d)
    return total


@dataclass
class CountReport:
    q: int
    per_element: dict       # element key -> twisted count
    quotient_count: int
    class_value: int | None
    match: bool | None


def burnside_quotient_count(rep: MonomialRep, q: int,
                            cls: ClassPoly | None = None) -> CountReport:
    """Rational points of A^n / G via the averaged twisted-fixed-point formula."""
    closure = rep.closure()
    per = {}
    total = 0
    for g in closure:
        c = twisted_affine_count(g, q)
        per[g.key()] = c
        total += c
    if total % len(closure) != 0:
        raise IntegralityViolation(
            f"sum {total} not divisible by group order {len(closure)}")
    count = total // len(closure)
    value = cls.evaluate(q) if cls is not None else None
    return CountReport(q, per, count, value,
                       None if value is None else value == count)


def burnside_torus_count(actions, q: int) -> int:
    """(1/|G|) sum of twisted torus counts over a full list of group actions."""
    total = sum(twisted_torus_count(a, q) for a in actions)
    if total % len(actions) != 0:
        raise IntegralityViolation("torus Burnside sum not divisible")
    return total // len(actions)


def cyclic_torus_quotient_count(action: TwistedMonomialAction, q: int) -> int:
    """Burnside count for the cyclic group generated by one action."""
    k = action.order()
    acts = [action.power(j) for j in range(k)]
    return burnside_torus_count(acts, q)
