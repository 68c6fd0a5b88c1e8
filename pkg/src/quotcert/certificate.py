"""Certificate tree: machine-checkable transcript of a stratification.

Node kinds and the class rule each one obeys:

  point_leaf            class 1
  torus_quotient_leaf   class (L-1)^rank
  affine_diagonal_leaf  class L^dim
  flat_leaf             class computed from the incidence poset
  orbit_collapse        class = child (a free orbit collapses to one piece)
  substitution          class = child (unimodular coordinate change)
  center_reduction      class = child (invariant subring of a diagonal
                        subgroup; re-presents the same quotient)
  invariant_split       class = (L-1) * child (a split torus factor)
  open_closed_split     class = sum of children
  lemma33_strata        class = sum of children (torus-cycle strata)
  arrangement_split     class = ambient child - sum of stratum children

Node ids are depth-first preorder; two runs on the same input produce
byte-identical certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .classpoly import ClassPoly

LEAF_KINDS = {"point_leaf", "torus_quotient_leaf", "affine_diagonal_leaf", "flat_leaf"}
PASS_THROUGH_KINDS = {"orbit_collapse", "substitution", "center_reduction"}
SUM_KINDS = {"open_closed_split", "lemma33_strata"}
ALL_KINDS = LEAF_KINDS | PASS_THROUGH_KINDS | SUM_KINDS | {
    "invariant_split", "arrangement_split"}


class IncompleteCertificate(Exception):
    pass


@dataclass
class CertNode:
    id: int
    kind: str
    dim: int
    cls: ClassPoly
    children: tuple
    data: dict

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise ValueError(f"unknown node kind {self.kind}")


@dataclass
class Certificate:
    group: dict              # descriptor: kind, p, params, dim, conductor, order
    nodes: dict              # id -> CertNode
    root: int | None
    total: ClassPoly | None
    stuck: dict | None = None   # {"stage": ..., "detail": ...} for partial runs

    @property
    def complete(self):
        return self.stuck is None and self.root is not None

    def node(self, nid) -> CertNode:
        return self.nodes[nid]

    def leaves(self):
        return [n for n in self.nodes.values() if n.kind in LEAF_KINDS]

    def walk(self, nid=None):
        """Depth-first preorder traversal."""
        if nid is None:
            nid = self.root
        node = self.nodes[nid]
        yield node
        for c in node.children:
            yield from self.walk(c)


class CertBuilder:
    """Assigns provisional ids bottom-up; finalize renumbers to DFS preorder."""

    def __init__(self):
        self._nodes = {}
        self._next = 0

    def add(self, kind, dim, cls, children=(), data=None) -> int:
        nid = self._next
        self._next += 1
        self._nodes[nid] = CertNode(nid, kind, dim, cls, tuple(children),
                                    dict(data or {}))
        return nid

    def node(self, nid) -> CertNode:
        return self._nodes[nid]

    def finalize(self, group, root, total, stuck=None) -> Certificate:
        if root is None:
            return Certificate(group, {}, None, None, stuck=stuck)
        order = []

        def visit(nid):
            order.append(nid)
            for c in self._nodes[nid].children:
                visit(c)

        visit(root)
        remap = {old: new for new, old in enumerate(order)}
        nodes = {}
        for old, new in remap.items():
            n = self._nodes[old]
            nodes[new] = CertNode(new, n.kind, n.dim, n.cls,
                                  tuple(remap[c] for c in n.children), n.data)
        return Certificate(group, nodes, remap[root], total, stuck=stuck)


def fold_class(cert: Certificate, nid=None) -> ClassPoly:
    """Recompute a node's class bottom-up from the per-kind rules."""
    if nid is None:
        if cert.root is None:
            raise IncompleteCertificate("certificate has no root")
        nid = cert.root
    node = cert.nodes[nid]
    if node.kind in LEAF_KINDS:
        return node.cls
    kids = [fold_class(cert, c) for c in node.children]
    if node.kind in PASS_THROUGH_KINDS:
        return kids[0]
    if node.kind == "invariant_split":
        return ClassPoly((-1, 1)) * kids[0]
    if node.kind in SUM_KINDS:
        out = ClassPoly.zero()
        for k in kids:
            out = out + k
        return out
    if node.kind == "arrangement_split":
        out = kids[0]
        for k in kids[1:]:
            out = out - k
        return out
    raise AssertionError(node.kind)


def total_class(cert: Certificate) -> ClassPoly:
    """Root class of a complete certificate; checked against the tree fold."""
    if not cert.complete:
        raise IncompleteCertificate(
            f"certificate stuck at {cert.stuck and cert.stuck.get('stage')}")
    folded = fold_class(cert)
    if folded != cert.total:
        raise IncompleteCertificate("stored total disagrees with the tree fold")
    return cert.total


def structural_errors(cert: Certificate):
    """Per-node class-rule, unimodularity, and cyclotomic-relation checks."""
    from .intmat import IntMatrix, det

    errors = []
    if cert.root is None:
        return errors
    for node in cert.walk():
        kids = [cert.nodes[c] for c in node.children]
        if node.kind in LEAF_KINDS and kids:
            errors.append((node.id, "leaf has children"))
        if node.kind == "point_leaf" and node.cls != ClassPoly.one():
            errors.append((node.id, "point leaf class must be 1"))
        if node.kind == "torus_quotient_leaf":
            if node.cls != ClassPoly.lefschetz_minus_one_power(node.data["rank"]):
                errors.append((node.id, "torus leaf class must be (L-1)^rank"))
        if node.kind == "affine_diagonal_leaf":
            if node.cls != ClassPoly.lefschetz_power(node.dim):
                errors.append((node.id, "affine leaf class must be L^dim"))
        if node.kind in PASS_THROUGH_KINDS:
            if len(kids) != 1 or kids[0].cls != node.cls:
                errors.append((node.id, "pass-through class must equal child"))
        if node.kind == "invariant_split":
            if len(kids) != 1 or node.cls != ClassPoly((-1, 1)) * kids[0].cls:
                errors.append((node.id, "split class must be (L-1) * child"))
        if node.kind in SUM_KINDS:
            acc = ClassPoly.zero()
            for k in kids:
                acc = acc + k.cls
            if acc != node.cls:
                errors.append((node.id, "class additivity fails"))
        if node.kind == "arrangement_split":
            if not kids:
                errors.append((node.id, "arrangement without ambient child"))
            else:
                acc = kids[0].cls
                for k in kids[1:]:
                    acc = acc - k.cls
                if acc != node.cls:
                    errors.append((node.id, "complement class rule fails"))
        if node.cls.degree > node.dim:
            errors.append((node.id, "class degree exceeds dimension"))
        # recorded matrices
        for key in ("matrix", "flip_matrix"):
            if key in node.data:
                M = _data_matrix(node.data[key])
                if abs(det(M)) != 1:
                    errors.append((node.id, f"{key} is not unimodular"))
        if "tau_matrix" in node.data:
            A = _data_matrix(node.data["tau_matrix"])
            p = node.data["p"]
            acc = IntMatrix.zero(A.rows, A.cols)
            power = IntMatrix.identity(A.rows)
            for _ in range(p):
                acc = acc + power
                power = power @ A
            if not acc.is_zero():
                errors.append((node.id, "cyclotomic relation I + A + ... fails"))
            if not power.is_identity():
                errors.append((node.id, "tau matrix does not have order p"))
    return errors


def _data_matrix(d):
    from .intmat import IntMatrix

    return IntMatrix(d["rows"], d["cols"], tuple(d["entries"]))


def matrix_data(M) -> dict:
    return {"rows": M.rows, "cols": M.cols, "entries": list(M.entries)}
