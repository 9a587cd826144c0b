"""Minimal Morse decompositions, the connection order, and the labeled graph export.

Minimal Morse sets are the strongly connected components of the flow graph
that carry at least one arc (a self-loop counts: critical cells loop onto
themselves).  The order is induced by reachability between distinct sets;
the exported graph draws its transitive reduction, with the full closure
available in the JSON form under ``order_closure``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional

import networkx as nx

from .complex import SimplexSet, SimplicialComplex
from .field import VectorField
from .flow import FlowGraph, InternalInvariantError, flow_map, invariant_part, is_isolated_invariant
from .homology import conley_index, poincare_polynomial


def _canonical_set_key(complex_: SimplicialComplex, sset) -> tuple:
    return tuple(sorted(complex_.sort_key(s) for s in sset))


def minimal_morse_sets(complex_: SimplicialComplex, field: VectorField) -> list[SimplexSet]:
    """SCCs of the flow graph with at least one arc, canonically sorted."""
    fg = FlowGraph(complex_, field)
    sets = fg.cyclic_components()
    for sset in sets:
        report = is_isolated_invariant(complex_, field, sset)
        if not report.ok:
            raise InternalInvariantError(
                f"minimal Morse candidate fails isolation ({report.message}); this contradicts the theory")
    return sorted(sets, key=lambda s: _canonical_set_key(complex_, s))


def morse_order(complex_: SimplicialComplex, field: VectorField,
                sets: list) -> frozenset:
    """Strict order: (p, q) present when a walk leaves set q and reaches set p.

    Mutual reachability between distinct sets means the input is not a Morse
    family and raises ``ValueError``.
    """
    sets = [frozenset(s) for s in sets]
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            if a & b:
                raise ValueError("Morse sets must be mutually disjoint")
    fg = FlowGraph(complex_, field)
    n = len(sets)
    reach = [[False] * n for _ in range(n)]
    for q in range(n):
        seen = set(sets[q])
        stack = list(seen)
        while stack:
            v = stack.pop()
            for w in fg.graph.successors(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        for p in range(n):
            if p != q and seen & sets[p]:
                reach[q][p] = True
    less = set()
    for q in range(n):
        for p in range(n):
            if reach[q][p]:
                if reach[p][q]:
                    raise ValueError(
                        f"cyclic cross-connections between sets {p} and {q}; not a Morse family")
                less.add((p, q))
    return frozenset(less)


@dataclass
class DecompositionReport:
    ok: bool
    clause: Optional[str] = None
    message: str = ""
    witness: object = None


def validate_morse_decomposition(complex_: SimplicialComplex, field: VectorField,
                                 sets: list, order: Iterable[tuple] = None) -> DecompositionReport:
    """Check a user-supplied family against the three decomposition conditions.

    (a) the members are mutually disjoint isolated invariant sets;
    (b) every limit behavior is trapped: each cyclic SCC lies inside a member,
        and connections between members respect the supplied order;
    (c) no walk leaves a member and later returns to it.
    On a finite flow graph these are equivalent to the solution-based
    conditions, checked exhaustively on the condensation.
    """
    sets = [frozenset(s) for s in sets]
    for i, a in enumerate(sets):
        for j in range(i + 1, len(sets)):
            if a & sets[j]:
                return DecompositionReport(False, "a", f"sets {i} and {j} overlap",
                                           min(a & sets[j], key=complex_.sort_key))
    for i, a in enumerate(sets):
        report = is_isolated_invariant(complex_, field, a)
        if not report.ok:
            return DecompositionReport(False, "a",
                                       f"set {i} is not an isolated invariant set: {report.message}",
                                       report.witness)
    fg = FlowGraph(complex_, field)
    member_of = {}
    for i, a in enumerate(sets):
        for s in a:
            member_of[s] = i
    for comp in fg.cyclic_components():
        owners = {member_of.get(s) for s in comp}
        if None in owners or len(owners) > 1:
            return DecompositionReport(False, "b",
                                       "a recurrent component is not contained in any single set",
                                       min(comp, key=complex_.sort_key))
    try:
        induced = morse_order(complex_, field, sets)
    except ValueError as exc:
        return DecompositionReport(False, "b", str(exc))
    if order is not None:
        declared = frozenset((int(p), int(q)) for p, q in order)
        missing = induced - declared
        if missing:
            p, q = min(missing)
            return DecompositionReport(False, "b",
                                       f"connections run from set {q} to set {p} but the order does not place {p} below {q}",
                                       (p, q))
    for r, a in enumerate(sets):
        outside = set()
        stack = []
        for s in a:
            for w in fg.graph.successors(s):
                if w not in a and w not in outside:
                    outside.add(w)
                    stack.append(w)
        while stack:
            v = stack.pop()
            for w in fg.graph.successors(v):
                if w in a:
                    return DecompositionReport(False, "c",
                                               f"a walk leaves set {r} and returns to it",
                                               min(a, key=complex_.sort_key))
                if w not in outside:
                    outside.add(w)
                    stack.append(w)
    return DecompositionReport(True)


@dataclass(frozen=True)
class ConleyMorseGraph:
    """Order-induced DAG on Morse sets labeled with their Betti vectors."""

    sets: tuple            # tuple of frozensets, canonical order
    betti: tuple           # tuple of Betti vectors
    poincare: tuple        # tuple of display strings
    edges: tuple           # transitive reduction, pairs (hi, lo)
    order_closure: tuple   # full order, pairs (hi, lo)


def conley_morse_graph(complex_: SimplicialComplex, field: VectorField,
                       sets: Optional[list] = None) -> ConleyMorseGraph:
    """Assemble the labeled graph; defaults to the minimal Morse sets."""
    if sets is None:
        sets = minimal_morse_sets(complex_, field)
    else:
        sets = [frozenset(s) for s in sets]
        report = validate_morse_decomposition(complex_, field, sets)
        if not report.ok:
            raise ValueError(f"invalid Morse family (clause {report.clause}): {report.message}")
    less = morse_order(complex_, field, sets)
    dag = nx.DiGraph()
    dag.add_nodes_from(range(len(sets)))
    for p, q in less:
        dag.add_edge(q, p)  # arrows point from larger to smaller
    reduction = nx.transitive_reduction(dag)
    betti = tuple(conley_index(complex_, field, s) for s in sets)
    polys = tuple(poincare_polynomial(b) for b in betti)
    edges = tuple(sorted(reduction.edges()))
    closure = tuple(sorted((q, p) for p, q in less))
    return ConleyMorseGraph(tuple(sets), betti, polys, edges, closure)


def export_dot(graph: ConleyMorseGraph) -> str:
    """Graphviz text; deterministic node and edge order."""
    lines = ["digraph conley_morse {"]
    for i in range(len(graph.sets)):
        lines.append(f'  "M{i}" [label="M{i}\\nP(t)={graph.poincare[i]}"];')
    for hi, lo in graph.edges:
        lines.append(f'  "M{hi}" -> "M{lo}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_json(graph: ConleyMorseGraph, manifest: Optional[dict] = None) -> str:
    payload = {
        "nodes": [
            {
                "id": i,
                "simplices": [list(s) for s in sorted(graph.sets[i])],
                "betti": list(graph.betti[i]),
                "poincare": graph.poincare[i],
            }
            for i in range(len(graph.sets))
        ],
        "edges": [list(e) for e in graph.edges],
        "order_closure": [list(e) for e in graph.order_closure],
    }
    if manifest is not None:
        payload["manifest"] = manifest
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def morse_graph_from_json(text: str) -> ConleyMorseGraph:
    data = json.loads(text)
    sets = tuple(frozenset(tuple(s) for s in node["simplices"]) for node in data["nodes"])
    betti = tuple(tuple(node["betti"]) for node in data["nodes"])
    polys = tuple(node["poincare"] for node in data["nodes"])
    edges = tuple(tuple(e) for e in data["edges"])
    closure = tuple(tuple(e) for e in data["order_closure"])
    return ConleyMorseGraph(sets, betti, polys, edges, closure)
