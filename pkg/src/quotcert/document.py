"""Versioned JSON certificate documents (serialization owned by the CLI).

Documents round-trip losslessly: parse(serialize(doc)) == doc.  The node
array is sorted by id and ids are depth-first preorder, so serialized
certificates are byte-identical across runs.  Class polynomials serialize
as integer coefficient arrays, constant term first.
"""

from __future__ import annotations

import json

from .certificate import CertNode, Certificate
from .classpoly import ClassPoly

SCHEMA = "quotcert.certificate/1"


def certificate_to_document(cert: Certificate, verification=None) -> dict:
    nodes = []
    for nid in sorted(cert.nodes):
        n = cert.nodes[nid]
        nodes.append({
            "id": n.id,
            "kind": n.kind,
            "dim": n.dim,
            "class": list(n.cls.coeffs),
            "children": list(n.children),
            "data": n.data,
        })
    return {
        "schema": SCHEMA,
        "group": cert.group,
        "root": cert.root,
        "nodes": nodes,
        "total": list(cert.total.coeffs) if cert.total is not None else None,
        "stuck": cert.stuck,
        "verification": verification,
    }


def document_to_certificate(doc: dict) -> Certificate:
    errors = validate_document(doc)
    if errors:
        raise ValueError("invalid certificate document: " + "; ".join(errors))
    nodes = {}
    for nd in doc["nodes"]:
        nodes[nd["id"]] = CertNode(nd["id"], nd["kind"], nd["dim"],
                                   ClassPoly(tuple(nd["class"])),
                                   tuple(nd["children"]), nd["data"])
    total = ClassPoly(tuple(doc["total"])) if doc["total"] is not None else None
    return Certificate(doc["group"], nodes, doc["root"], total,
                       stuck=doc.get("stuck"))


def validate_document(doc) -> list:
    """Structural schema validation; returns a list of error strings."""
    errors = []
    if not isinstance(doc, dict):
        return ["document is not an object"]
    if doc.get("schema") != SCHEMA:
        errors.append(f"schema must be {SCHEMA!r}")
    group = doc.get("group")
    if not isinstance(group, dict) or "kind" not in group or "conductor" not in group:
        errors.append("group descriptor must carry kind and conductor")
    nodes = doc.get("nodes")
    if not isinstance(nodes, list):
        return errors + ["nodes must be an array"]
    ids = [nd.get("id") for nd in nodes]
    if ids != sorted(ids) or ids != list(range(len(ids))):
        errors.append("node ids must be 0..n-1 in order")
    for nd in nodes:
        for key, typ in (("kind", str), ("dim", int), ("class", list),
                         ("children", list), ("data", dict)):
            if not isinstance(nd.get(key), typ):
                errors.append(f"node {nd.get('id')}: bad field {key}")
                break
        else:
            if not all(isinstance(c, int) for c in nd["class"]):
                errors.append(f"node {nd['id']}: class coefficients must be integers")
            if nd["class"] and nd["class"][-1] == 0:
                errors.append(f"node {nd['id']}: class not in trimmed form")
            if not all(isinstance(c, int) and 0 <= c < len(nodes)
                       for c in nd["children"]):
                errors.append(f"node {nd['id']}: bad child reference")
    root = doc.get("root")
    if nodes and root is not None:
        if not isinstance(root, int) or not 0 <= root < len(nodes):
            errors.append("bad root reference")
        elif not errors:
            # depth-first preorder from the root must yield 0, 1, 2, ...
            order = []
            seen = set()

            def visit(nid):
                if nid in seen:
                    errors.append("node graph is not a tree")
                    return
                seen.add(nid)
                order.append(nid)
                for c in nodes[nid]["children"]:
                    visit(c)

            visit(root)
            if not errors and order != list(range(len(nodes))):
                errors.append("node ids are not depth-first preorder")
    total = doc.get("total")
    if total is not None:
        if not isinstance(total, list) or not all(isinstance(c, int) for c in total):
            errors.append("total must be an integer coefficient array")
    if doc.get("stuck") is not None and not isinstance(doc["stuck"], dict):
        errors.append("stuck must be an object")
    return errors


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    return json.loads(text)


def render_text(doc: dict) -> str:
    """Deterministic human-readable mirror of the JSON document."""
    lines = []
    g = doc["group"]
    label = g.get("label", g["kind"])
    lines.append(f"certificate schema {doc['schema']}")
    lines.append(f"group {label}  p={g.get('p')}  order={g.get('order')}  "
                 f"dim={g.get('dim')}  conductor={g.get('conductor')}")
    if doc.get("stuck"):
        lines.append(f"STUCK at {doc['stuck']['stage']}: {doc['stuck']['detail']}")
    if doc.get("total") is not None:
        lines.append(f"total class coefficients (low first): {doc['total']}")
        lines.append(f"total class: {ClassPoly(tuple(doc['total']))}")
    lines.append(f"nodes ({len(doc['nodes'])}):")
    for nd in doc["nodes"]:
        cls = ClassPoly(tuple(nd["class"]))
        kids = ",".join(str(c) for c in nd["children"]) or "-"
        lines.append(f"  [{nd['id']:3d}] {nd['kind']:22s} dim={nd['dim']} "
                     f"class={list(nd['class'])} ({cls}) children={kids}")
    ver = doc.get("verification")
    if ver is not None:
        lines.append(f"verification: ok={ver['ok']} qs={ver['qs']}")
        for r in ver.get("q_results", []):
            lines.append(f"  q={r['q']}: class={r['class_value']} "
                         f"count={r['count']} match={r['match']}")
        bad = [c for c in ver.get("node_checks", []) if not c["match"]]
        lines.append(f"  node checks: {len(ver.get('node_checks', []))} "
                     f"({len(bad)} mismatching)")
        for c in bad:
            lines.append(f"    MISMATCH node {c['node']} ({c['kind']}) q={c['q']}: "
                         f"class={c['expected']} count={c['counted']}")
        for nid, msg in ver.get("structure", []):
            lines.append(f"    STRUCTURE node {nid}: {msg}")
    return "\n".join(lines) + "\n"


def verification_block(report) -> dict:
    return {
        "ok": report.ok,
        "qs": list(report.qs),
        "q_results": report.q_results,
        "node_checks": [
            {"q": c.q, "node": c.node, "kind": c.kind, "expected": c.expected,
             "counted": c.counted, "match": c.match, "label": c.label}
            for c in report.node_results
        ],
        "structure": [[nid, msg] for nid, msg in report.structure],
    }
