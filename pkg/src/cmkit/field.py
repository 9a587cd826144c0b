"""Combinatorial (discrete) vector fields: facet-cofacet matchings with critical cells.

A field is a partition of the simplices into critical singletons and vectors
(tail, head) where the tail is a facet of the head.  Equivalently it is an
injective partial self-map V with

    (i)   V(s) = s or s a facet of V(s),
    (ii)  dom V + im V covers every simplex,
    (iii) dom V meets im V exactly in the fixed points.

Critical cells must be listed explicitly and are checked, never inferred:
silently inferring them would mask input typos.
"""

from __future__ import annotations

from typing import Iterable

from .complex import Simplex, SimplexSet, SimplicialComplex


class FieldError(ValueError):
    """Field validation failure; ``clause`` names the violated condition."""

    def __init__(self, clause: str, message: str, witness=None):
        super().__init__(f"clause ({clause}): {message}")
        self.clause = clause
        self.witness = witness


class VectorField:
    """Validated combinatorial vector field over a fixed complex."""

    def __init__(self, complex_: SimplicialComplex, matched: dict, critical: SimplexSet):
        self.complex = complex_
        self.matched = dict(matched)            # tail -> head
        self.inverse = {h: t for t, h in matched.items()}
        self.critical = frozenset(critical)

    def is_critical(self, sigma: Simplex) -> bool:
        return sigma in self.critical

    def is_tail(self, sigma: Simplex) -> bool:
        return sigma in self.matched

    def is_head(self, sigma: Simplex) -> bool:
        return sigma in self.inverse

    def sigma_plus(self, sigma: Simplex) -> Simplex:
        """Head of the vector through sigma; sigma itself off the domain."""
        return self.matched.get(sigma, sigma)

    def sigma_minus(self, sigma: Simplex) -> Simplex:
        """Tail of the vector through sigma; sigma itself on the domain."""
        if sigma in self.matched or sigma in self.critical:
            return sigma
        return self.inverse.get(sigma, sigma)

    def vectors(self) -> list[tuple[Simplex, Simplex]]:
        key = self.complex.sort_key
        return sorted(self.matched.items(), key=lambda th: key(th[0]))

    def __repr__(self):
        return f"VectorField({len(self.matched)} vectors, {len(self.critical)} critical)"


def validate_field(
    complex_: SimplicialComplex,
    vectors: Iterable[tuple[Iterable, Iterable]],
    critical: Iterable[Iterable],
) -> VectorField:
    """Validate and build a field, or raise ``FieldError`` naming the failed clause.

    Coverage gaps report clause (ii); double coverage (a simplex used by two
    vectors, or both as tail and head, or vector plus critical) reports
    clause (iii); a tail that is not a facet of its head reports clause (i);
    two tails sharing one head report clause `injective`.
    """
    crit = complex_.simplex_set(critical)
    matched: dict = {}
    heads: dict = {}
    roles: dict = {s: "critical" for s in crit}

    def claim(sigma, role):
        if sigma in roles:
            raise FieldError("iii", f"simplex {sigma!r} covered twice ({roles[sigma]} and {role})", sigma)
        roles[sigma] = role

    for raw_tail, raw_head in vectors:
        tail = complex_.simplex(raw_tail)
        head = complex_.simplex(raw_head)
        if tail not in complex_.simplices or head not in complex_.simplices:
            raise FieldError("i", f"vector ({tail!r}, {head!r}) names a simplex not in the complex", (tail, head))
        if len(head) != len(tail) + 1 or not set(tail).issubset(head):
            raise FieldError("i", f"tail {tail!r} is not a facet of head {head!r}", (tail, head))
        if head in heads:
            raise FieldError("injective", f"head {head!r} re-used by two vectors", head)
        claim(tail, "tail")
        claim(head, "head")
        matched[tail] = head
        heads[head] = tail

    uncovered = complex_.simplices - set(roles)
    if uncovered:
        witness = min(uncovered, key=complex_.sort_key)
        raise FieldError("ii", f"simplex {witness!r} not covered by any vector or critical cell", witness)
    return VectorField(complex_, matched, crit)


def field_from_partition(complex_: SimplicialComplex, parts: Iterable[Iterable[Iterable]]) -> VectorField:
    """Build a field from the partition view (singletons and doubletons).

    Doubletons are oriented automatically (lower-dimensional member first);
    the two views carry the same information.
    """
    vectors = []
    critical = []
    for part in parts:
        members = [complex_.simplex(m) for m in part]
        if len(members) == 1:
            critical.append(members[0])
        elif len(members) == 2:
            tail, head = sorted(members, key=len)
            vectors.append((tail, head))
        else:
            raise FieldError("iii", f"partition part with {len(members)} members", tuple(members))
    return validate_field(complex_, vectors, critical)


def partition_view(field: VectorField) -> list[tuple[Simplex, ...]]:
    """The partition underlying the field: singletons plus (tail, head) doubletons."""
    parts = [(s,) for s in field.critical] + [(t, h) for t, h in field.matched.items()]
    return sorted(parts, key=lambda p: field.complex.sort_key(p[0]))
