"""Monomial representations of the supported p-group families.

A group element acts on coordinates by a permutation composed with diagonal
root-of-unity scalings.  Elements are stored as (perm, scalars) pairs, never
as matrices over a field, so everything downstream stays exact and
field-independent.

Conventions, fixed once for the whole project:

* perm[j] is the index the j-th coordinate is sent to; the substitution
  action on variables reads g(x_j) = zeta^(scalars[perm[j]]) * x_perm[j].
* composition (g*h) applies h first, matching matrix multiplication of the
  associated monomial matrices D(scalars) P(perm).
* the cycle generator tau always acts by x_j -> x_{j+1 mod p}.  The builders
  therefore declare presentations in the tau^-1 . g . tau orientation; the
  relation list of each representation is verified explicitly rather than
  transcribed, and a corrupted representation fails verify_presentation.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

CLOSURE_CAP = 10 ** 4


@dataclass(frozen=True)
class MonomialElement:
    """Coordinate permutation plus per-coordinate scalar exponents mod e."""

    n: int
    e: int
    perm: tuple   # perm[j] = image index of coordinate j
    scalars: tuple  # exponent of zeta_e multiplying output coordinate i

    def __post_init__(self):
        if sorted(self.perm) != list(range(self.n)):
            raise ValueError("perm is not a permutation")
        if len(self.scalars) != self.n:
            raise ValueError("scalar vector length mismatch")
        object.__setattr__(self, "scalars", tuple(s % self.e for s in self.scalars))

    @staticmethod
    def identity(n, e):
        return MonomialElement(n, e, tuple(range(n)), (0,) * n)

    def __mul__(self, other):
        """Composition: self after other (matrix product of D P forms)."""
        if (self.n, self.e) != (other.n, other.e):
            raise ValueError("incompatible elements")
        perm = tuple(self.perm[other.perm[j]] for j in range(self.n))
        inv_self = _inv_perm(self.perm)
        scalars = tuple((self.scalars[i] + other.scalars[inv_self[i]]) % self.e
                        for i in range(self.n))
        return MonomialElement(self.n, self.e, perm, scalars)

    def inverse(self):
        inv = _inv_perm(self.perm)
        scalars = tuple((-self.scalars[self.perm[j]]) % self.e for j in range(self.n))
        return MonomialElement(self.n, self.e, inv, scalars)

    def power(self, k):
        if k < 0:
            return self.inverse().power(-k)
        acc = MonomialElement.identity(self.n, self.e)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base if k > 1 else base
            k >>= 1
        return acc

    def is_identity(self):
        return self.perm == tuple(range(self.n)) and all(s == 0 for s in self.scalars)

    def is_diagonal(self):
        return self.perm == tuple(range(self.n))

    def order(self):
        acc = self
        k = 1
        while not acc.is_identity():
            acc = acc * self
            k += 1
            if k > CLOSURE_CAP:
                raise RuntimeError("element order exceeds cap")
        return k

    def key(self):
        return (self.perm, self.scalars)


def _inv_perm(p):
    inv = [0] * len(p)
    for j, i in enumerate(p):
        inv[i] = j
    return tuple(inv)


@dataclass(frozen=True)
class MonomialRep:
    """A finite monomial group: named generators plus presentation relations.

    relations are words over the generator names, stored as tuples of
    (name, exponent) pairs; every relation word must evaluate to the
    identity element.
    """

    kind: str
    p: int
    n: int
    e: int
    order: int
    generators: dict
    relations: tuple
    params: tuple = ()

    def generator(self, name):
        return self.generators[name]

    def eval_word(self, word):
        acc = MonomialElement.identity(self.n, self.e)
        for name, k in word:
            acc = acc * self.generators[name].power(k)
        return acc

    def closure(self):
        """All group elements by breadth-first products of the generators."""
        gens = [self.generators[name] for name in sorted(self.generators)]
        seen = {MonomialElement.identity(self.n, self.e).key():
                MonomialElement.identity(self.n, self.e)}
        frontier = list(seen.values())
        while frontier:
            nxt = []
            for g in frontier:
                for h in gens:
                    prod = g * h
                    k = prod.key()
                    if k not in seen:
                        seen[k] = prod
                        nxt.append(prod)
                        if len(seen) > CLOSURE_CAP:
                            raise RuntimeError("group closure exceeds cap 10^4")
            frontier = nxt
        return [seen[k] for k in sorted(seen)]

    def diagonal_subgroup(self):
        return [g for g in self.closure() if g.is_diagonal()]

    def label(self):
        if self.kind == "abelian":
            return "abelian:" + ",".join(str(d) for d in self.params)
        if self.kind == "semidirect":
            return f"semidirect:{self.params[0]}"
        return self.kind


@dataclass
class PresentationReport:
    relation_results: list   # (word-string, passed)
    closure_size: int
    declared_order: int
    faithful: bool

    @property
    def ok(self):
        return (all(p for _, p in self.relation_results)
                and self.closure_size == self.declared_order and self.faithful)


def _word_str(word):
    return "*".join(f"{n}^{k}" if k != 1 else n for n, k in word)


def verify_presentation(rep: MonomialRep) -> PresentationReport:
    """Evaluate every relation word and confirm closure size and faithfulness."""
    results = []
    for word in rep.relations:
        val = rep.eval_word(word)
        results.append((_word_str(word), val.is_identity()))
    closure = rep.closure()
    faithful = sum(1 for g in closure if g.is_identity()) == 1
    return PresentationReport(results, len(closure), rep.order, faithful)


def compute_center(rep: MonomialRep):
    """Elements commuting with every generator."""
    gens = [rep.generators[name] for name in sorted(rep.generators)]
    return [g for g in rep.closure()
            if all(g * h == h * g for h in gens)]


def _cycle(p):
    """tau's permutation: coordinate j goes to j+1 mod p."""
    return tuple((j + 1) % p for j in range(p))


def induce_monomial_rep(kind: str, p: int, params=()) -> MonomialRep:
    """Build the named representation; relations are verified by callers/tests.

    Supported kinds: heisenberg, modular, dihedral8, quaternion8,
    semidirect (params = (s,)), abelian (params = invariant factors).
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    if kind == "heisenberg":
        return _build_heisenberg(p)
    if kind == "modular":
        return _build_semidirect_cyclic("modular", p, 2)
    if kind == "dihedral8":
        if p != 2:
            raise ValueError("dihedral8 requires p = 2")
        return _build_dihedral8()
    if kind == "quaternion8":
        if p != 2:
            raise ValueError("quaternion8 requires p = 2")
        return _build_quaternion8()
    if kind == "semidirect":
        if len(params) != 1:
            raise ValueError("semidirect needs the exponent parameter s")
        s = int(params[0])
        if s < 2:
            raise ValueError("semidirect requires s >= 2")
        return _build_semidirect_cyclic("semidirect", p, s)
    if kind == "abelian":
        if not params:
            raise ValueError("abelian needs invariant factors")
        return _build_abelian(tuple(int(d) for d in params))
    raise ValueError(f"unknown group kind: {kind}")


def _build_heisenberg(p):
    """(Z/p x Z/p) x| Z/p for odd p; the p = 2 instance is the dihedral group."""
    e = 4 if p == 2 else p
    unit = e // p  # scalar exponents are multiples of e/p
    sigma = MonomialElement(p, e, tuple(range(p)), (unit,) * p)
    pi = MonomialElement(p, e, tuple(range(p)), tuple(unit * i for i in range(p)))
    tau = MonomialElement(p, e, _cycle(p), (0,) * p)
    relations = (
        (("s", p),),
        (("pi", p),),
        (("t", p),),
        (("s", 1), ("pi", 1), ("s", -1), ("pi", -1)),
        (("s", 1), ("t", 1), ("s", -1), ("t", -1)),
        # tau^-1 pi tau = sigma pi, in this project's composition orientation
        (("t", -1), ("pi", 1), ("t", 1), ("pi", -1), ("s", -1)),
    )
    return MonomialRep("heisenberg", p, p, e, p ** 3,
                       {"s": sigma, "pi": pi, "t": tau}, relations)


def _build_semidirect_cyclic(kind, p, s):
    """Z/p^s x| Z/p with tau^-1 sigma tau = sigma^(1+p^(s-1)); s=2 is 'modular'."""
    e = p ** s
    sigma = MonomialElement(p, e, tuple(range(p)),
                            tuple((1 + i * p ** (s - 1)) % e for i in range(p)))
    tau = MonomialElement(p, e, _cycle(p), (0,) * p)
    twist = 1 + p ** (s - 1)
    relations = (
        (("s", e),),
        (("t", p),),
        (("t", -1), ("s", 1), ("t", 1), ("s", -twist)),
    )
    return MonomialRep(kind, p, p, e, p ** (s + 1),
                       {"s": sigma, "t": tau}, relations,
                       params=(s,) if kind == "semidirect" else ())


def _build_dihedral8():
    e = 4
    sigma = MonomialElement(2, e, (0, 1), (1, 3))
    tau = MonomialElement(2, e, (1, 0), (0, 0))
    relations = (
        (("s", 4),),
        (("t", 2),),
        (("t", -1), ("s", 1), ("t", 1), ("s", 1)),
    )
    return MonomialRep("dihedral8", 2, 2, e, 8, {"s": sigma, "t": tau}, relations)


def _build_quaternion8():
    e = 4
    sigma = MonomialElement(2, e, (0, 1), (1, 3))
    tau = MonomialElement(2, e, (1, 0), (2, 0))
    relations = (
        (("s", 4),),
        (("t", 2), ("s", -2)),
        (("t", -1), ("s", 1), ("t", 1), ("s", 1)),
    )
    return MonomialRep("quaternion8", 2, 2, e, 8, {"s": sigma, "t": tau}, relations)


def _build_abelian(factors):
    n = len(factors)
    e = lcm(*factors)
    gens = {}
    relations = []
    for i, d in enumerate(factors):
        scal = [0] * n
        scal[i] = e // d
        name = f"g{i}"
        gens[name] = MonomialElement(n, e, tuple(range(n)), tuple(scal))
        relations.append(((name, d),))
    for i in range(n):
        for j in range(i + 1, n):
            relations.append(
                ((f"g{i}", 1), (f"g{j}", 1), (f"g{i}", -1), (f"g{j}", -1)))
    order = 1
    for d in factors:
        order *= d
    # p is the smallest prime dividing the exponent; only used for labels
    p = min((q for q in range(2, e + 1) if e % q == 0), default=2)
    return MonomialRep("abelian", p, n, e, order, gens, tuple(relations),
                       params=tuple(factors))


def parse_group_spec(spec: str, p: int) -> MonomialRep:
    """CLI-facing vocabulary: heisenberg, modular, dihedral8, quaternion8,
    semidirect:s, abelian:d1,d2,..."""
    if ":" in spec:
        head, tail = spec.split(":", 1)
        if head == "semidirect":
            return induce_monomial_rep("semidirect", p, (int(tail),))
        if head == "abelian":
            return induce_monomial_rep("abelian", p,
                                       tuple(int(x) for x in tail.split(",")))
        raise ValueError(f"unknown group kind: {spec}")
    return induce_monomial_rep(spec, p)


@dataclass(frozen=True)
class SubsetOrbit:
    representative: tuple  # sorted subset of range(p)
    orbit_size: int


def subset_orbits(p: int):
    """One representative per cyclic-shift orbit of subsets of {0, ..., p-1}.

    For prime p there are 2 + (2^p - 2) / p orbits.
    """
    seen = set()
    orbits = []
    for mask in range(2 ** p):
        subset = tuple(i for i in range(p) if mask >> i & 1)
        if subset in seen:
            continue
        orbit = set()
        cur = subset
        while cur not in orbit:
            orbit.add(cur)
            cur = tuple(sorted((i + 1) % p for i in cur))
        rep = min(orbit)
        orbits.append(SubsetOrbit(rep, len(orbit)))
        seen.update(orbit)
    orbits.sort(key=lambda o: (len(o.representative), o.representative))
    return orbits
