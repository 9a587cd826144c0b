"""The multivalued flow of a combinatorial vector field and its dynamics.

The flow sends a critical simplex to its closure, a tail to its head, and a
head to its proper faces other than the matching tail.  Everything dynamical
(invariant parts, isolation, index pairs, solutions) is derived from the
directed graph of this map.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Optional

import networkx as nx

from .complex import Simplex, SimplexSet, SimplicialComplex, ComplexError
from .field import VectorField


class InternalInvariantError(RuntimeError):
    """A structural guarantee of the theory failed; indicates an implementation bug."""


def flow_map(complex_: SimplicialComplex, field: VectorField, sigma: Simplex) -> SimplexSet:
    """Successor set of one simplex under the multivalued flow.  Never empty."""
    if sigma not in complex_.simplices:
        raise ComplexError(f"simplex {sigma!r} not in complex")
    if field.is_critical(sigma):
        return complex_.closure([sigma])
    if field.is_tail(sigma):
        return frozenset({field.matched[sigma]})
    tail = field.inverse[sigma]
    return complex_.boundary(sigma) - {tail}


class FlowGraph:
    """Directed graph of the flow with SCC condensation and reachability."""

    def __init__(self, complex_: SimplicialComplex, field: VectorField):
        self.complex = complex_
        self.field = field
        g = nx.DiGraph()
        g.add_nodes_from(complex_.sorted_simplices())
        for sigma in complex_.sorted_simplices():
            for tau in sorted(flow_map(complex_, field, sigma), key=complex_.sort_key):
                g.add_edge(sigma, tau)
        self.graph = g
        self.condensation = nx.condensation(g)
        self.scc_id = dict(self.condensation.graph["mapping"])

    def arcs(self) -> frozenset:
        return frozenset(self.graph.edges())

    def components(self) -> list[SimplexSet]:
        return [frozenset(self.condensation.nodes[c]["members"]) for c in self.condensation.nodes]

    def cyclic_components(self) -> list[SimplexSet]:
        """SCCs carrying at least one arc (more than one node, or a self-loop)."""
        out = []
        for c in self.condensation.nodes:
            members = self.condensation.nodes[c]["members"]
            if len(members) > 1 or any(self.graph.has_edge(m, m) for m in members):
                out.append(frozenset(members))
        return out

    def reaches(self, source: Iterable[Simplex], target: Iterable[Simplex]) -> bool:
        """Is there a walk from some source simplex to some target simplex?"""
        targets = set(target)
        seen = set(source)
        stack = list(seen)
        while stack:
            v = stack.pop()
            if v in targets:
                return True
            for w in self.graph.successors(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False


def flow_graph(complex_: SimplicialComplex, field: VectorField) -> FlowGraph:
    return FlowGraph(complex_, field)


def invariant_part(complex_: SimplicialComplex, field: VectorField, family: Iterable[Simplex]) -> SimplexSet:
    """Largest subset of the family in which every simplex sits on a bi-infinite walk.

    A simplex qualifies exactly when, inside the restricted graph, it both
    reaches a cycle and is reached from a cycle; single pass over SCCs.
    """
    fam = frozenset(family)
    for s in fam:
        if s not in complex_.simplices:
            raise ComplexError(f"simplex {s!r} not in complex")
    g = nx.DiGraph()
    g.add_nodes_from(fam)
    for sigma in fam:
        for tau in flow_map(complex_, field, sigma):
            if tau in fam:
                g.add_edge(sigma, tau)
    cyclic: set = set()
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1 or any(g.has_edge(m, m) for m in comp):
            cyclic.update(comp)
    if not cyclic:
        return frozenset()
    backward = set(cyclic)
    stack = list(cyclic)
    while stack:
        v = stack.pop()
        for w in g.successors(v):
            if w not in backward:
                backward.add(w)
                stack.append(w)
    forward = set(cyclic)
    stack = list(cyclic)
    while stack:
        v = stack.pop()
        for w in g.predecessors(v):
            if w not in forward:
                forward.add(w)
                stack.append(w)
    return frozenset(forward & backward)


@dataclass
class IsolationReport:
    """Outcome of the isolated-invariant-set check.

    ``clause`` is 'a' (invariance), 'b' (exit set closed) or 'c' (no internal
    tangency); ``tail_head_violations`` lists simplices whose tail and head
    disagree about membership, an equivalent certificate used as a cross-check.
    """

    ok: bool
    clause: Optional[str] = None
    witness: object = None
    message: str = ""
    tail_head_violations: tuple = ()


def _tail_head_violations(complex_: SimplicialComplex, field: VectorField, sset: SimplexSet) -> tuple:
    bad = []
    for sigma in complex_.sorted_simplices():
        if (field.sigma_minus(sigma) in sset) != (field.sigma_plus(sigma) in sset):
            bad.append(sigma)
    return tuple(bad)


def is_isolated_invariant(complex_: SimplicialComplex, field: VectorField, family: Iterable[Simplex]) -> IsolationReport:
    """Check invariance, closedness of the exit set, and absence of internal tangencies.

    The tangency clause is cross-checked against the tail/head membership
    criterion; a disagreement between the two (impossible for a correct
    implementation) raises ``InternalInvariantError``.
    """
    sset = frozenset(family)
    pm = _tail_head_violations(complex_, field, sset)
    inv = invariant_part(complex_, field, sset)
    if inv != sset:
        missing = min(sset - inv, key=complex_.sort_key)
        return IsolationReport(False, "a", missing,
                               f"not invariant: {missing!r} lies on no bi-infinite walk inside the set",
                               pm)
    exit_ = complex_.exit_set(sset)
    if not complex_.is_closed(exit_):
        bad = min(complex_.closure(exit_) - exit_, key=complex_.sort_key)
        return IsolationReport(False, "b", bad,
                               f"exit set not closed: missing face {bad!r}", pm)
    tangency = None
    for xi in sorted(exit_, key=complex_.sort_key):
        enters = any(tau in sset for tau in flow_map(complex_, field, xi))
        if not enters:
            continue
        entered = any(xi in flow_map(complex_, field, sigma) for sigma in sset)
        if entered:
            tangency = xi
            break
    if (tangency is not None) != bool(pm):
        raise InternalInvariantError(
            f"tangency check and tail/head criterion disagree on {sorted(sset)!r}")
    if tangency is not None:
        return IsolationReport(False, "c", tangency,
                               f"internal tangency at exit simplex {tangency!r}", pm)
    return IsolationReport(True, tail_head_violations=pm)


def canonical_index_pair(complex_: SimplicialComplex, field: VectorField, sset: Iterable[Simplex]):
    """The closure/exit pair of an isolated invariant set."""
    s = frozenset(sset)
    report = is_isolated_invariant(complex_, field, s)
    if not report.ok:
        raise ValueError(f"not an isolated invariant set: {report.message}")
    return complex_.closure(s), complex_.exit_set(s)


@dataclass
class IndexPairReport:
    ok: bool
    failures: tuple = ()  # (condition name, witness) pairs


def index_pair_check(complex_: SimplicialComplex, field: VectorField,
                     p1: Iterable[Simplex], p2: Iterable[Simplex],
                     sset: Iterable[Simplex]) -> IndexPairReport:
    """Verify the three index-pair conditions for (p1, p2) around the given set."""
    P1, P2, S = frozenset(p1), frozenset(p2), frozenset(sset)
    if not P2.issubset(P1):
        raise ValueError("index pair not nested: second member must lie inside the first")
    if not complex_.is_closed(P1) or not complex_.is_closed(P2):
        raise ValueError("index pair members must be closed")
    failures = []
    for sigma in sorted(P2, key=complex_.sort_key):
        leak = flow_map(complex_, field, sigma) & P1 - P2
        if leak:
            failures.append(("P1_meet_flow(P2)_inside_P2", (sigma, min(leak, key=complex_.sort_key))))
            break
    for sigma in sorted(P1 - P2, key=complex_.sort_key):
        out = flow_map(complex_, field, sigma) - P1
        if out:
            failures.append(("flow(P1_minus_P2)_inside_P1", (sigma, min(out, key=complex_.sort_key))))
            break
    if invariant_part(complex_, field, P1 - P2) != S:
        failures.append(("invariant_part_of_P1_minus_P2_equals_S", None))
    return IndexPairReport(not failures, tuple(failures))


# -- solutions ---------------------------------------------------------------


@dataclass(frozen=True)
class SolutionSeq:
    """A solution presented with optional periodic tails.

    The modeled bi-infinite word is ``...LLL  M  RRR...`` where L/R repeat
    forever; a finite sequence has empty tails, a fully periodic solution has
    ``left == right`` and empty middle.  Finiteness of the complex makes any
    limit-relevant behavior eventually periodic, so this presentation loses
    nothing.
    """

    left: tuple = ()
    middle: tuple = ()
    right: tuple = ()

    @staticmethod
    def finite(entries: Iterable[Simplex]) -> "SolutionSeq":
        return SolutionSeq(middle=tuple(entries))

    @staticmethod
    def periodic(cycle: Iterable[Simplex]) -> "SolutionSeq":
        c = tuple(cycle)
        return SolutionSeq(left=c, right=c)

    @property
    def is_full(self) -> bool:
        return bool(self.left) and bool(self.right)

    def consecutive_pairs(self):
        """All adjacency constraints implied by the presentation."""
        pairs = []
        for seg in (self.left, self.right):
            if seg:
                pairs.extend((seg[i], seg[(i + 1) % len(seg)]) for i in range(len(seg)))
        chain = []
        if self.left:
            chain.append(self.left[-1])
        chain.extend(self.middle)
        if self.right:
            chain.append(self.right[0])
        pairs.extend(zip(chain, chain[1:]))
        return pairs

    def window(self, copies: int = 2) -> tuple:
        """A finite unrolled stretch, mostly for display and tests."""
        return self.left * copies + self.middle + self.right * copies

    def canonical(self) -> "SolutionSeq":
        """Rotate pure-periodic presentations to their least rotation."""
        if self.left and self.left == self.right and not self.middle:
            c = self.left
            rotations = [c[i:] + c[:i] for i in range(len(c))]
            best = min(rotations)
            return SolutionSeq(left=best, right=best)
        return self


def is_solution(complex_: SimplicialComplex, field: VectorField, rho: SolutionSeq) -> bool:
    for sigma, tau in rho.consecutive_pairs():
        if sigma not in complex_.simplices or tau not in complex_.simplices:
            return False
        if tau not in flow_map(complex_, field, sigma):
            return False
    return True


def _reduce_linear(field: VectorField, word, pred):
    out = []
    for entry in word:
        removed = pred is not None and field.is_tail(pred) and field.matched[pred] == entry
        if not removed:
            out.append(entry)
        pred = entry
    return tuple(out)


def _reduce_cyclic(field: VectorField, cycle):
    n = len(cycle)
    kept = tuple(cycle[i] for i in range(n)
                 if not (field.is_tail(cycle[i - 1]) and field.matched[cycle[i - 1]] == cycle[i]))
    if cycle and not kept:
        raise ValueError("periodic tail reduces to nothing; input was not a solution")
    return kept


def reduce_solution(field: VectorField, rho: SolutionSeq) -> SolutionSeq:
    """Drop every head that immediately follows its own tail.

    Removal decisions use the original predecessors, which is sound because a
    removed entry (a head) can never itself be the tail of the next arrow.
    """
    new_left = _reduce_cyclic(field, rho.left)
    pred = rho.left[-1] if rho.left else None
    new_middle = _reduce_linear(field, rho.middle, pred)
    if rho.right:
        if rho.left and not rho.middle and rho.left == rho.right:
            # fully periodic word: the cyclic mask covers every copy
            return SolutionSeq(new_left, (), _reduce_cyclic(field, rho.right))
        first_pred = rho.middle[-1] if rho.middle else (rho.left[-1] if rho.left else None)
        first_copy = _reduce_linear(field, rho.right, first_pred)
        cyclic = _reduce_cyclic(field, rho.right)
        if first_copy == cyclic:
            return SolutionSeq(new_left, new_middle, cyclic)
        return SolutionSeq(new_left, new_middle + first_copy, cyclic)
    return SolutionSeq(new_left, new_middle, ())


def _extend_linear(field: VectorField, word, successor):
    out = []
    entries = list(word)
    for i, entry in enumerate(entries):
        out.append(entry)
        nxt = entries[i + 1] if i + 1 < len(entries) else successor
        if field.is_tail(entry) and nxt is not None and nxt != field.matched[entry]:
            out.append(field.matched[entry])
    return tuple(out)


def _extend_cyclic(field: VectorField, cycle):
    n = len(cycle)
    out = []
    for i, entry in enumerate(cycle):
        out.append(entry)
        nxt = cycle[(i + 1) % n]
        if field.is_tail(entry) and nxt != field.matched[entry]:
            out.append(field.matched[entry])
    return tuple(out)


def arrowhead_extension(field: VectorField, rho: SolutionSeq) -> SolutionSeq:
    """Insert missing heads after their tails; inverse of ``reduce_solution`` on solutions."""
    new_left = _extend_cyclic(field, rho.left)
    new_right = _extend_cyclic(field, rho.right)
    if rho.middle or (rho.left and rho.right and rho.left != rho.right):
        successor = rho.right[0] if rho.right else None
        prefix = ()
        if rho.left:
            # the boundary copy of the left cycle may extend differently at its seam
            seam_next = rho.middle[0] if rho.middle else successor
            boundary_copy = _extend_linear(field, rho.left, seam_next)
            if boundary_copy != new_left:
                prefix = boundary_copy
                new_middle = _extend_linear(field, rho.middle, successor)
                return SolutionSeq(new_left, prefix + new_middle, new_right)
        new_middle = _extend_linear(field, rho.middle, successor)
        return SolutionSeq(new_left, new_middle, new_right)
    return SolutionSeq(new_left, (), new_right)


def alpha_omega_limits(rho: SolutionSeq) -> tuple[SimplexSet, SimplexSet]:
    """Simplices visited infinitely often backward and forward."""
    if not rho.is_full:
        raise ValueError("limit sets need a bi-infinite presentation with both periodic tails")
    return frozenset(rho.left), frozenset(rho.right)
