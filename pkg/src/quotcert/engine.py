"""The stratification pipeline: from a monomial representation to a certificate.

Pipeline shape (non-abelian kinds):

  affine space  ->  coordinate strata (tori indexed by cyclic subset orbits)
  proper strata ->  abelian invariant lattices  ->  torus quotient leaves
  open stratum  ->  center reduction  ->  one of three branches:
      invariant split:   a fully invariant primitive coordinate splits off a
                         torus factor (L-1); recurse on the complement
      modular reduction: the diagonal residual acts by one character; its
                         invariants turn the cycle into a pure rank-p
                         permutation torus (the T-variant strata)
      free-scalar split: a coordinate fixed by every lattice map on which
                         the cycle acts by a nontrivial scalar; the scalar
                         acts freely, so a torus factor (L-1) still splits
                         off (the quaternion case)
  residual rank-(p-1) problems reduce their diagonal part, then a cyclic
  generator conjugates the cycle action to the companion matrix of
  1 + x + ... + x^(p-1), which is the S-variant strata input.

Strata of both torus-cycle variants linearize to a diagonal root-of-unity
action on affine space minus one cyclic orbit of affine hyperplanes; those
are closed out exactly by incidence-poset splitting.

All searches are deterministic (increasing max-norm, then lexicographic),
so certificates are byte-identical across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd

from .certificate import CertBuilder, Certificate, matrix_data, total_class
from .classpoly import ClassPoly
from .cyclo import CycloMatrix, CycloNumber, cyclo_solve
from .groups import MonomialRep, compute_center
from .intmat import IntMatrix, det, kernel_lattice
from .torus import (
    InvariantLattice,
    NotStable,
    TwistedMonomialAction,
    abelian_invariant_lattice,
    action_of,
    apply_substitution,
    coordinate_stratify,
    paper_center_basis,
    restrict_action_to_sublattice,
)


@dataclass(frozen=True)
class EngineConfig:
    search_bound: int = 3
    p_cap: int = 7
    cyclic_candidate_budget: int = 2 * 10 ** 6


class PipelineStuck(Exception):
    def __init__(self, stage, detail):
        super().__init__(f"{stage}: {detail}")
        self.stage = stage
        self.detail = detail


class NotFound(Exception):
    def __init__(self, bound, detail=""):
        super().__init__(f"no vector within max-norm {bound} {detail}".strip())
        self.bound = bound


class WrongBranch(Exception):
    pass


class NotScalarCenter(Exception):
    pass


# ---------------------------------------------------------------------------
# searches

def _norm_shell_vectors(n, bound):
    """All nonzero integer vectors with max-norm <= bound, ordered by
    (max-norm, lexicographic)."""
    for s in range(1, bound + 1):
        shell = []
        for v in product(range(-s, s + 1), repeat=n):
            if max(abs(x) for x in v) == s:
                shell.append(v)
        for v in shell:
            yield v


def _is_primitive(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


def _dual_splitter(lattice_maps, v):
    """A functional u fixed by every transposed map with <u, v> = 1, or None.

    ker(u) is then a stable complement of Z v, and [v | ker-basis] is
    unimodular.
    """
    n = len(v)
    if lattice_maps:
        stacked = []
        for M in lattice_maps:
            stacked.extend((M.transpose() - IntMatrix.identity(n)).to_rows())
        K = kernel_lattice(IntMatrix.from_rows(stacked))
    else:
        K = IntMatrix.identity(n)
    if K.cols == 0:
        return None
    # integer combination of the K columns pairing to 1 with v
    pair = [sum(K[i, j] * v[i] for i in range(n)) for j in range(K.cols)]
    g, coeffs = _gcd_combination(pair)
    if g != 1:
        return None
    u = [sum(coeffs[j] * K[i, j] for j in range(K.cols)) for i in range(n)]
    return u


def _gcd_combination(values):
    """(g, coeffs) with sum(coeffs * values) = g = gcd >= 0."""
    g = 0
    coeffs = [0] * len(values)
    for idx, val in enumerate(values):
        if val == 0:
            continue
        if g == 0:
            g = abs(val)
            coeffs = [0] * len(values)
            coeffs[idx] = 1 if val > 0 else -1
            continue
        # extended gcd of (g, val)
        old_r, r = g, val
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            qq = old_r // r
            old_r, r = r, old_r - qq * r
            old_s, s = s, old_s - qq * s
            old_t, t = t, old_t - qq * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coeffs = [old_s * c for c in coeffs]
        coeffs[idx] = old_t
        g = old_r
    return g, coeffs


def _split_basis(v, u):
    """Unimodular [v | basis of ker u], with the kernel basis in HNF."""
    n = len(v)
    comp = kernel_lattice(IntMatrix.from_rows([list(u)]))
    cols = [list(v)] + [comp.col(j) for j in range(comp.cols)]
    U = IntMatrix.from_cols(cols)
    if abs(det(U)) != 1:
        raise AssertionError("split basis is not unimodular")
    return U


def splitting_candidates(actions, bound, *, require_untwisted_for=(),
                         char_trivial_for=()):
    """Yield (v, u, U): primitive vectors fixed by every lattice map, with the
    prescribed twist behaviour, that split off unimodularly.

    require_untwisted_for must have twist 0 on the vector; char_trivial_for
    are diagonal actions whose characters must vanish on it.  Order:
    increasing max-norm, then lexicographic.
    """
    if not actions:
        return
    maps = [a.lattice_map for a in actions if not a.lattice_map.is_identity()]
    n = actions[0].rank
    for v in _norm_shell_vectors(n, bound):
        if not _is_primitive(v):
            continue
        if any(M.mul_vec(list(v)) != list(v) for M in maps):
            continue
        if any(a.twist_of(v) != 0 for a in require_untwisted_for):
            continue
        if any(a.twist_of(v) != 0 for a in char_trivial_for):
            continue
        u = _dual_splitter(maps, list(v))
        if u is None:
            continue
        yield list(v), u, _split_basis(v, u)


def find_invariant_splitting(actions, bound, *, require_untwisted_for,
                             char_trivial_for=()):
    """First splitting candidate, or NotFound(bound)."""
    for v, u, U in splitting_candidates(
            actions, bound, require_untwisted_for=require_untwisted_for,
            char_trivial_for=char_trivial_for):
        return v, u, U
    raise NotFound(bound)


def cyclic_generator(A: IntMatrix, bound: int, candidate_budget=2 * 10 ** 6):
    """v with [v, Av, ..., A^(n-1)v] unimodular; deterministic first hit.

    Search order: increasing max-norm, then lexicographic.  NotFound carries
    the bound; the search also stops (NotFound) when the candidate budget is
    exhausted, which keeps large-rank probes finite.
    """
    n = A.rows
    powers = [IntMatrix.identity(n)]
    for _ in range(n - 1):
        powers.append(A @ powers[-1])
    seen = 0
    for v in _norm_shell_vectors(n, bound):
        seen += 1
        if seen > candidate_budget:
            raise NotFound(bound, "(candidate budget exhausted)")
        cols = [P.mul_vec(list(v)) for P in powers]
        C = IntMatrix.from_cols(cols)
        if abs(det(C)) == 1:
            return list(v), C
    raise NotFound(bound)


def companion_matrix(p):
    """Multiplication by zeta_p on Z[zeta_p]: x^(p-1) = -(1 + x + ...)."""
    n = p - 1
    cols = []
    for j in range(n - 1):
        col = [0] * n
        col[j + 1] = 1
        cols.append(col)
    cols.append([-1] * n)
    return IntMatrix.from_cols(cols)


def cycle_matrix(p):
    cols = []
    for j in range(p):
        col = [0] * p
        col[(j + 1) % p] = 1
        cols.append(col)
    return IntMatrix.from_cols(cols)


def tau_lattice_action(action: TwistedMonomialAction, lat: InvariantLattice):
    """Restrict the cycle action to the invariant sublattice; the result must
    satisfy I + A + ... + A^(p-1) = 0 (checked by the caller)."""
    res = restrict_action_to_sublattice(action, lat)
    return res.lattice_map, res


def _phi_relation_holds(A: IntMatrix, p: int) -> bool:
    acc = IntMatrix.zero(A.rows, A.cols)
    power = IntMatrix.identity(A.rows)
    for _ in range(p):
        acc = acc + power
        power = power @ A
    return acc.is_zero() and power.is_identity()


# ---------------------------------------------------------------------------
# hyperplane arrangements (exact, over Q(zeta))

@dataclass(frozen=True)
class AffineFunctional:
    const: CycloNumber
    coeffs: tuple

    def twist_pullback(self, tau_exps, e):
        """Functional of the preimage hyperplane: compose with tau^{-1}."""
        new = tuple(c * CycloNumber.zeta(e, (-t) % e)
                    for c, t in zip(self.coeffs, tau_exps))
        return AffineFunctional(self.const, new)

    def proportional_to(self, other):
        mine = [self.const, *self.coeffs]
        theirs = [other.const, *other.coeffs]
        lam = None
        for a, b in zip(mine, theirs):
            if a.is_zero() != b.is_zero():
                return False
            if not a.is_zero():
                cand = b * a.inverse()
                if lam is None:
                    lam = cand
                elif lam != cand:
                    return False
        return lam is not None


def _cyclo_serialize(x: CycloNumber):
    return {"e": x.e, "coeffs": [f"{c.numerator}/{c.denominator}" for c in x.coeffs]}


def serialize_functional(f: AffineFunctional):
    return {"const": _cyclo_serialize(f.const),
            "coeffs": [_cyclo_serialize(c) for c in f.coeffs]}


def flat_poset(hyperplanes, n, e):
    """Incidence poset of the arrangement: closure subset -> flat dimension.

    A flat's closure is the set of ALL hyperplane indices vanishing on it;
    distinct closures are distinct flats.
    """
    m = len(hyperplanes)
    flats = {}
    for mask in range(1, 2 ** m):
        S = tuple(i for i in range(m) if mask >> i & 1)
        A = CycloMatrix.from_rows(e, [list(hyperplanes[i].coeffs) for i in S]) \
            if n > 0 else CycloMatrix(len(S), 0, ())
        b = [-hyperplanes[i].const for i in S]
        sol = cyclo_solve(A, b)
        if not sol.consistent:
            continue
        closure = []
        for i in range(m):
            f = hyperplanes[i]
            val = f.const
            for c, x in zip(f.coeffs, sol.particular):
                val = val + c * x
            if not val.is_zero():
                continue
            if all(
                sum((c * y for c, y in zip(f.coeffs, nv)),
                    start=CycloNumber.zero(e)).is_zero()
                for nv in sol.nullspace
            ):
                closure.append(i)
        closure = tuple(closure)
        dim = n - sol.rank
        if closure in flats:
            if flats[closure] != dim:
                raise AssertionError("inconsistent flat dimensions")
        else:
            flats[closure] = dim
    return flats


def hyperplane_cycle(hyperplanes, tau_exps, e):
    """Permutation sigma with tau(H_m) = H_sigma(m)."""
    sigma = []
    for f in hyperplanes:
        g = f.twist_pullback(tau_exps, e)
        matches = [i for i, h in enumerate(hyperplanes) if g.proportional_to(h)]
        if len(matches) != 1:
            raise AssertionError("hyperplane orbit is not a clean cycle")
        sigma.append(matches[0])
    if sorted(sigma) != list(range(len(hyperplanes))):
        raise AssertionError("tau does not permute the hyperplanes")
    return sigma


def flat_orbit_table(flats, sigma, p):
    """Group closures into tau-orbits; sizes must be 1 or p (p prime)."""
    remaining = set(flats)
    table = {}
    while remaining:
        C = min(remaining)
        orbit = []
        cur = C
        while cur not in orbit:
            orbit.append(cur)
            cur = tuple(sorted(sigma[i] for i in cur))
            if cur not in flats:
                raise AssertionError("tau image of a flat is missing")
        rep = min(orbit)
        if len(orbit) not in (1, p):
            raise AssertionError(f"orbit size {len(orbit)} not in {{1, {p}}}")
        for member in orbit:
            table[member] = (rep, len(orbit))
            remaining.discard(member)
    return table


def arrangement_classes(flats, orbits):
    """Plain and quotient classes of the incidence strata."""
    plain = {}

    def class_plain(C):
        if C not in plain:
            acc = ClassPoly.lefschetz_power(flats[C])
            for C2 in flats:
                if C2 != C and set(C2) > set(C):
                    acc = acc - class_plain(C2)
            plain[C] = acc
        return plain[C]

    qcls = {}

    def class_quot(C):
        if C not in qcls:
            acc = ClassPoly.lefschetz_power(flats[C])
            seen_reps = set()
            for C2 in flats:
                if C2 == C or not set(C2) > set(C):
                    continue
                rep, size = orbits[C2]
                if size == 1:
                    acc = acc - class_quot(C2)
                elif rep not in seen_reps:
                    seen_reps.add(rep)
                    acc = acc - class_plain(rep)
            qcls[C] = acc
        return qcls[C]

    for C in flats:
        class_plain(C)
        rep, size = orbits[C]
        if size == 1:
            class_quot(C)
    return plain, qcls


def arrangement_subtree(builder: CertBuilder, n, hyperplanes, tau_exps, e, p):
    """Quotient of (A^n minus the hyperplane union) by the diagonal tau."""
    flats = flat_poset(hyperplanes, n, e)
    sigma = hyperplane_cycle(hyperplanes, tau_exps, e) if flats else \
        list(range(len(hyperplanes)))
    orbits = flat_orbit_table(flats, sigma, p) if flats else {}
    plain, qcls = arrangement_classes(flats, orbits)

    ambient = builder.add(
        "affine_diagonal_leaf", n, ClassPoly.lefschetz_power(n),
        data={"dim": n, "tau_exponents": list(tau_exps), "conductor": e})
    children = [ambient]
    union_class = ClassPoly.zero()
    flat_table = []
    for C in sorted(flats):
        rep, size = orbits[C]
        flat_table.append({"subset": list(C), "dim": flats[C],
                           "orbit_size": size, "rep": list(rep),
                           "stable": size == 1})
    reps_done = set()
    for C in sorted(flats):
        rep, size = orbits[C]
        if rep in reps_done or C != rep:
            continue
        reps_done.add(rep)
        if size == 1:
            cls = qcls[C]
            leaf = builder.add("flat_leaf", flats[C], cls,
                               data={"subset": list(C), "dim": flats[C],
                                     "stable": True, "orbit_size": 1})
            children.append(leaf)
        else:
            cls = plain[C]
            leaf = builder.add("flat_leaf", flats[C], cls,
                               data={"subset": list(C), "dim": flats[C],
                                     "stable": False, "orbit_size": size})
            wrap = builder.add("orbit_collapse", flats[C], cls, (leaf,),
                               data={"orbit_size": size})
            children.append(wrap)
        union_class = union_class + cls
    node_cls = ClassPoly.lefschetz_power(n) - union_class
    nid = builder.add(
        "arrangement_split", n, node_cls, tuple(children),
        data={"dim": n, "conductor": e, "p": int(p),
              "tau_exponents": list(tau_exps),
              "hyperplanes": [serialize_functional(f) for f in hyperplanes],
              "hyperplane_cycle": list(sigma),
              "flats": flat_table})
    return nid, node_cls


def lemma33_subtree(builder: CertBuilder, p: int, variant: str):
    """The torus-cycle stratification; S is rank p-1, T is rank p."""
    e = p
    zeta = lambda k: CycloNumber.zeta(e, k % e)
    children = []
    cls_total = ClassPoly.zero()
    if variant == "S":
        for i in range(p):
            n_i = p - 1 - i
            hyps = []
            for m in range(p):
                const = zeta(-m * i)
                coeffs = tuple(zeta(-m * k) for k in range(i + 1, p))
                hyps.append(AffineFunctional(const, coeffs))
            tau_exps = [(i - k) % p for k in range(i + 1, p)]
            nid, cls = arrangement_subtree(builder, n_i, hyps, tau_exps, e, p)
            children.append(nid)
            cls_total = cls_total + cls
        data = {"variant": "S", "p": p, "conductor": e,
                "tau_matrix": matrix_data(companion_matrix(p))}
        dim = p - 1
    elif variant == "T":
        hyps = []
        for m in range(p):
            coeffs = tuple(zeta(-m * j) for j in range(p))
            hyps.append(AffineFunctional(CycloNumber.zero(e), coeffs))
        tau_exps = [(-j) % p for j in range(p)]
        nid, cls = arrangement_subtree(builder, p, hyps, tau_exps, e, p)
        children.append(nid)
        cls_total = cls
        data = {"variant": "T", "p": p, "conductor": e,
                "cycle_matrix": matrix_data(cycle_matrix(p))}
        dim = p
    else:
        raise ValueError("variant must be S or T")
    nid = builder.add("lemma33_strata", dim, cls_total, tuple(children), data)
    return nid, cls_total


def lemma33_class(p: int, variant: str, config: EngineConfig | None = None) -> Certificate:
    """Standalone certificate for one torus-cycle quotient."""
    config = config or EngineConfig()
    if p > config.p_cap:
        raise ValueError(f"p = {p} exceeds the cap {config.p_cap}")
    if not _is_prime(p):
        raise ValueError("p must be prime")
    builder = CertBuilder()
    nid, cls = lemma33_subtree(builder, p, variant)
    group = {"kind": f"lemma33-{variant}", "p": p, "params": [],
             "dim": p - 1 if variant == "S" else p, "conductor": p, "order": p}
    return builder.finalize(group, nid, cls)


def _is_prime(p):
    return p > 1 and all(p % d for d in range(2, int(p ** 0.5) + 1))


# ---------------------------------------------------------------------------
# the open-stratum dispatcher

def _restrict_all(actions, U):
    """Substitute, assert the block split, and return rank-(n-1) restrictions.

    In the new basis the first coordinate is the split direction: every
    matrix must be [[1, 0...], [0, M']]; the twist on the first coordinate
    is returned separately.
    """
    out = []
    twists = []
    n = U.rows
    for name, act in actions:
        sub = apply_substitution(act, U)
        M = sub.lattice_map
        if M.col(0) != [1] + [0] * (n - 1) or any(M[0, j] != 0 for j in range(1, n)):
            raise AssertionError("split basis does not block-diagonalize")
        M2 = IntMatrix.from_rows([[M[i, j] for j in range(1, n)]
                                  for i in range(1, n)])
        out.append((name, TwistedMonomialAction(M2, sub.char[1:], sub.e)))
        twists.append(sub.char[0])
    return out, twists


def _diag_and_cycles(actions):
    diags = [(nm, a) for nm, a in actions if a.is_diagonal() and not a.is_identity()]
    cycles = [(nm, a) for nm, a in actions if not a.is_diagonal()]
    return diags, cycles


def torus_quotient_subtree(builder, actions, rank, e, config):
    """Certificate subtree for (rank-n torus) / <actions>.

    actions: list of (name, TwistedMonomialAction).  Raises PipelineStuck
    with a stage tag when no reduction applies within the search bounds.
    """
    actions = [(nm, a) for nm, a in actions if not a.is_identity()]
    if rank == 0:
        return builder.add("point_leaf", 0, ClassPoly.one(), data={}), ClassPoly.one()
    diags, cycles = _diag_and_cycles(actions)
    if not cycles:
        chars = [a.char for _, a in diags]
        lat = abelian_invariant_lattice(chars, rank, e)
        cls = ClassPoly.lefschetz_minus_one_power(rank)
        nid = builder.add(
            "torus_quotient_leaf", rank, cls,
            data={"rank": rank, "conductor": e,
                  "chars": [list(c) for c in chars],
                  "basis": matrix_data(lat.basis), "index": lat.index})
        return nid, cls
    if len(cycles) > 1:
        raise PipelineStuck("unsupported", "more than one non-diagonal generator")
    tau_name, tau = cycles[0]
    M = tau.lattice_map
    fixed = kernel_lattice(M - IntMatrix.identity(rank))

    if fixed.cols > 0:
        # A. strict split: invariant under everything
        try:
            v, u, U = find_invariant_splitting(
                [a for _, a in actions], config.search_bound,
                require_untwisted_for=[tau],
                char_trivial_for=[a for _, a in diags])
            rest, twists = _restrict_all(actions, U)
            child, child_cls = torus_quotient_subtree(builder, rest, rank - 1,
                                                      e, config)
            cls = ClassPoly((-1, 1)) * child_cls
            nid = builder.add(
                "invariant_split", rank, cls, (child,),
                data={"mode": "invariant", "vector": list(v),
                      "matrix": matrix_data(U), "twist": 0})
            return nid, cls
        except NotFound:
            pass
        # B. modular branch: tau-fixed coordinate, single-character residual
        result = _modular_branch(builder, actions, diags, tau, rank, e, config)
        if result is not None:
            return result
        # C. free-scalar split
        try:
            v, u, U = find_invariant_splitting(
                [a for _, a in actions], config.search_bound,
                require_untwisted_for=[],
                char_trivial_for=[a for _, a in diags])
            twist = tau.twist_of(v)
            rest, _ = _restrict_all(actions, U)
            child, child_cls = torus_quotient_subtree(builder, rest, rank - 1,
                                                      e, config)
            cls = ClassPoly((-1, 1)) * child_cls
            nid = builder.add(
                "invariant_split", rank, cls, (child,),
                data={"mode": "free_scalar", "vector": list(v),
                      "matrix": matrix_data(U), "twist": int(twist)})
            return nid, cls
        except NotFound:
            pass
        raise PipelineStuck(
            "invariant_split",
            f"fixed vectors exist but none split within max-norm "
            f"{config.search_bound}")

    # no fixed vectors: reduce the diagonal part, then normalize the cycle
    if diags:
        chars = [a.char for _, a in diags]
        lat = abelian_invariant_lattice(chars, rank, e)
        try:
            tau_res = restrict_action_to_sublattice(tau, lat)
        except NotStable as exc:
            raise PipelineStuck("modular_reduce", str(exc))
        child, child_cls = torus_quotient_subtree(
            builder, [(tau_name, tau_res)], rank, e, config)
        nid = builder.add(
            "center_reduction", rank, child_cls, (child,),
            data={"subgroup": "diagonal", "chars": [list(c) for c in chars],
                  "basis": matrix_data(lat.basis), "index": lat.index})
        return nid, child_cls

    # single twisted cycle, no diagonals, no fixed vectors
    p_eff = _matrix_order(M)
    if any(c % e for c in tau.char):
        raise PipelineStuck("tau_lattice_action",
                            "residual cycle still carries a twist")
    if not _is_prime(p_eff) or rank != p_eff - 1 or not _phi_relation_holds(M, p_eff):
        raise PipelineStuck("tau_lattice_action",
                            "cycle action is not a rank p-1 cyclotomic module")
    try:
        v, C = cyclic_generator(M, config.search_bound,
                                config.cyclic_candidate_budget)
    except NotFound as exc:
        raise PipelineStuck("cyclic_generator", str(exc))
    normalized = apply_substitution(tau, C)
    if normalized.lattice_map != companion_matrix(p_eff):
        raise AssertionError("cyclic basis did not produce the companion matrix")
    child, child_cls = lemma33_subtree(builder, p_eff, "S")
    nid = builder.add(
        "substitution", rank, child_cls, (child,),
        data={"matrix": matrix_data(C), "note": "cyclic generator basis",
              "vector": list(v)})
    return nid, child_cls


def _matrix_order(M: IntMatrix):
    acc = M
    k = 1
    while not acc.is_identity():
        acc = acc @ M
        k += 1
        if k > 10 ** 4:
            raise PipelineStuck("tau_lattice_action", "lattice map has huge order")
    return k


def _modular_branch(builder, actions, diags, tau, rank, e, config):
    """Single-character reduction to the pure-cycle T-variant, or None.

    Iterates the cycle-fixed splitting candidates: whether the diagonal
    residual is a single character on the adjusted coordinates depends on
    the candidate (its sign, in particular), so each one is tested in turn.
    """
    if not diags:
        return None
    p_eff = _matrix_order(tau.lattice_map)
    if not _is_prime(p_eff) or rank != p_eff:
        return None
    for v, u, U in splitting_candidates(
            [a for _, a in actions], config.search_bound,
            require_untwisted_for=[tau]):
        adjusted = [(nm, apply_substitution(a, U)) for nm, a in actions]
        adj_diags = [(nm, a) for nm, a in adjusted if a.is_diagonal()]
        adj_taus = [a for nm, a in adjusted if not a.is_diagonal()]
        if len(adj_taus) != 1:
            continue
        adj_tau = adj_taus[0]
        values = []
        for _, a in adj_diags:
            if len(set(a.char)) != 1:
                values = None  # not a single character on these coordinates
                break
            values.append(a.char[0])
        if not values:
            continue
        g = 0
        for c in values:
            g = gcd(g, c)
        m = e // gcd(e, g)
        if m != p_eff:
            continue
        # invariant lattice of the constant character: w1 = z1^m, wi = yi/z1
        cols = [[m] + [0] * (rank - 1)]
        for i in range(1, rank):
            col = [-1] + [0] * (rank - 1)
            col[i] = 1
            cols.append(col)
        Bw = IntMatrix.from_cols(cols)
        lat = InvariantLattice(Bw, abs(det(Bw)))
        try:
            tau_w = restrict_action_to_sublattice(adj_tau, lat)
        except NotStable:
            continue
        # flip w1 to close the cycle: new first coordinate is (w1 ... wp)^-1
        flip = IntMatrix.from_cols([[-1] * rank] +
                                   [[1 if i == j else 0 for i in range(rank)]
                                    for j in range(1, rank)])
        tau_f = apply_substitution(tau_w, flip)
        if tau_f.lattice_map != cycle_matrix(p_eff) or any(c % e for c in tau_f.char):
            continue
        lem, lem_cls = lemma33_subtree(builder, p_eff, "T")
        flip_node = builder.add(
            "substitution", rank, lem_cls, (lem,),
            data={"matrix": matrix_data(flip), "note": "close the cycle"})
        red_node = builder.add(
            "center_reduction", rank, lem_cls, (flip_node,),
            data={"subgroup": "diagonal",
                  "chars": [list(a.char) for _, a in adj_diags],
                  "basis": matrix_data(Bw), "index": lat.index})
        sub_node = builder.add(
            "substitution", rank, lem_cls, (red_node,),
            data={"matrix": matrix_data(U),
                  "note": "isolate the cycle-fixed coordinate",
                  "vector": list(v)})
        return sub_node, lem_cls
    return None


# ---------------------------------------------------------------------------
# center reduction and the full certifier

def open_stratum_class(cert: Certificate) -> ClassPoly:
    """Class of the open-torus stratum subtree of a group certificate."""
    root = cert.nodes[cert.root]
    for cid in root.children:
        node = cert.nodes[cid]
        if node.kind == "center_reduction" and node.data.get("subgroup") == "center":
            return node.cls
    raise ValueError("certificate has no open-stratum subtree")


def center_reduce(rep: MonomialRep):
    """Invariant lattice of the scalar center plus the residual generators.

    Returns (InvariantLattice, residual list of (name, action), center data).
    """
    center = compute_center(rep)
    z = len(center)
    if z == 1:
        lat = InvariantLattice(IntMatrix.identity(rep.n), 1)
        residual = [(nm, action_of(g)) for nm, g in sorted(rep.generators.items())]
        return lat, residual, {"order": 1, "char": [0] * rep.n}
    scalars = []
    for g in center:
        if not g.is_diagonal() or len(set(g.scalars)) != 1:
            raise NotScalarCenter("center does not act by scalar matrices")
        scalars.append(g.scalars[0])
    B = paper_center_basis(rep.n, z)
    lat = InvariantLattice(B, abs(det(B)))
    if lat.index != z:
        raise AssertionError("center basis index mismatch")
    residual = []
    for nm, g in sorted(rep.generators.items()):
        act = restrict_action_to_sublattice(action_of(g), lat)
        residual.append((nm, act))
    gen_char = sorted(s for s in scalars if s)[0] if z > 1 else 0
    return lat, residual, {"order": z, "char": [gen_char] * rep.n}


def certify_quotient(rep: MonomialRep, config: EngineConfig | None = None) -> Certificate:
    """Build the stratification certificate for affine space modulo the group."""
    config = config or EngineConfig()
    group = {"kind": rep.kind, "p": rep.p, "params": list(rep.params),
             "dim": rep.n, "conductor": rep.e, "order": rep.order,
             "label": rep.label()}
    if rep.n > config.p_cap:
        raise ValueError(f"dimension {rep.n} exceeds the cap {config.p_cap}")
    builder = CertBuilder()
    strata = coordinate_stratify(rep)
    children = []
    total = ClassPoly.zero()
    stuck = None
    for stratum in strata:
        J = stratum.orbit.representative
        r = len(J)
        if r == 0:
            nid = builder.add("point_leaf", 0, ClassPoly.one(), data={})
            children.append(nid)
            total = total + ClassPoly.one()
            continue
        if not stratum.full_group:
            lat = abelian_invariant_lattice(
                [list(c) for c in stratum.chars], r, rep.e)
            cls = ClassPoly.lefschetz_minus_one_power(r)
            leaf = builder.add(
                "torus_quotient_leaf", r, cls,
                data={"rank": r, "conductor": rep.e,
                      "chars": [list(c) for c in stratum.chars],
                      "basis": matrix_data(lat.basis), "index": lat.index,
                      "subset": list(J)})
            if stratum.orbit.orbit_size > 1:
                nid = builder.add("orbit_collapse", r, cls, (leaf,),
                                  data={"orbit_size": stratum.orbit.orbit_size})
            else:
                nid = leaf
            children.append(nid)
            total = total + cls
            continue
        # the open stratum of a non-abelian kind
        try:
            lat, residual, center_data = center_reduce(rep)
            open_child, open_cls = torus_quotient_subtree(
                builder, residual, rep.n, rep.e, config)
            nid = builder.add(
                "center_reduction", rep.n, open_cls, (open_child,),
                data={"subgroup": "center", "order": center_data["order"],
                      "char": center_data["char"],
                      "basis": matrix_data(lat.basis), "index": lat.index})
            children.append(nid)
            total = total + open_cls
        except PipelineStuck as exc:
            stuck = {"stage": exc.stage, "detail": exc.detail}
        except (NotScalarCenter, NotStable) as exc:
            stuck = {"stage": "center_reduce", "detail": str(exc)}
    root = builder.add("open_closed_split", rep.n, total, tuple(children),
                       data={"note": "coordinate subset strata"})
    if stuck is not None:
        return builder.finalize(group, root, None, stuck=stuck)
    cert = builder.finalize(group, root, total)
    total_class(cert)  # consistency: stored total equals the tree fold
    return cert
