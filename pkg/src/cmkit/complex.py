"""Finite abstract simplicial complexes with face-poset (Alexandroff) topology.

A simplex is canonically a tuple of vertices sorted by the complex's declared
vertex order; a family of simplices is a ``frozenset`` of such tuples.  All
iteration orders derived from a complex are deterministic.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

Vertex = str
Simplex = tuple  # tuple[Vertex, ...], sorted by the complex's vertex order
SimplexSet = frozenset


class ComplexError(ValueError):
    """Malformed complex input or a simplex foreign to the complex."""


class SimplicialComplex:
    """Downward closure of a declared family of maximal simplices.

    Input accepts maximal simplices only; every non-empty subset of a member
    is added automatically, so the result is a simplicial complex by
    construction.  Instances are immutable and safe for concurrent reads.
    """

    def __init__(self, vertices: Iterable[Vertex], maximal_simplices: Iterable[Iterable[Vertex]]):
        self.vertices: tuple[Vertex, ...] = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ComplexError("duplicate vertex in declared vertex list")
        self._order = {v: i for i, v in enumerate(self.vertices)}
        members: set[Simplex] = set()
        for raw in maximal_simplices:
            sigma = self.simplex(raw)
            for k in range(1, len(sigma) + 1):
                members.update(combinations(sigma, k))
        self.simplices: SimplexSet = frozenset(members)
        self.dim: int = max((len(s) - 1 for s in members), default=-1)
        self._by_dim: dict[int, tuple[Simplex, ...]] = {}
        for k in range(self.dim + 1):
            self._by_dim[k] = tuple(sorted((s for s in members if len(s) == k + 1), key=self.sort_key))
        self._facets: dict[Simplex, tuple[Simplex, ...]] = {}
        self._cofacets: dict[Simplex, list[Simplex]] = {s: [] for s in members}
        for s in self.sorted_simplices():
            facets = tuple(combinations(s, len(s) - 1)) if len(s) > 1 else ()
            self._facets[s] = facets
            for f in facets:
                self._cofacets[f].append(s)
        for f in self._cofacets:
            self._cofacets[f].sort(key=self.sort_key)

    # -- canonical naming ------------------------------------------------

    def simplex(self, raw: Iterable[Vertex]) -> Simplex:
        """Canonicalize a vertex collection into a simplex of this complex's vertex set."""
        vs = list(raw)
        if not vs:
            raise ComplexError("empty simplex")
        for v in vs:
            if v not in self._order:
                raise ComplexError(f"unknown vertex identifier {v!r}")
        if len(set(vs)) != len(vs):
            raise ComplexError(f"duplicate vertex within simplex {vs!r}")
        return tuple(sorted(vs, key=self._order.__getitem__))

    def sort_key(self, sigma: Simplex):
        return (len(sigma), tuple(self._order[v] for v in sigma))

    def sorted_simplices(self) -> list[Simplex]:
        return sorted(self.simplices, key=self.sort_key)

    def simplex_set(self, raw_sets: Iterable[Iterable[Vertex]]) -> SimplexSet:
        """Canonicalize a family of simplices, requiring membership in the complex."""
        out = set()
        for raw in raw_sets:
            s = self.simplex(raw)
            if s not in self.simplices:
                raise ComplexError(f"simplex {s!r} not in complex")
            out.add(s)
        return frozenset(out)

    def __contains__(self, sigma) -> bool:
        return sigma in self.simplices

    def __len__(self) -> int:
        return len(self.simplices)

    # -- topology --------------------------------------------------------

    def closure(self, family: Iterable[Simplex]) -> SimplexSet:
        """All faces of all members (the Alexandroff closure).  Idempotent."""
        out: set[Simplex] = set()
        for sigma in family:
            self._require(sigma)
            for k in range(1, len(sigma) + 1):
                out.update(combinations(sigma, k))
        return frozenset(out)

    def is_closed(self, family: Iterable[Simplex]) -> bool:
        fam = frozenset(family)
        return self.closure(fam) == fam

    def exit_set(self, family: Iterable[Simplex]) -> SimplexSet:
        """The mouth of the family: its closure minus the family itself."""
        fam = frozenset(family)
        return self.closure(fam) - fam

    def boundary(self, sigma: Simplex) -> SimplexSet:
        """Proper faces of one simplex."""
        self._require(sigma)
        return frozenset(f for k in range(1, len(sigma)) for f in combinations(sigma, k))

    def faces(self, sigma: Simplex, codim: int = 1) -> SimplexSet:
        self._require(sigma)
        if codim < 1:
            raise ComplexError("codimension must be >= 1")
        size = len(sigma) - codim
        if size < 1:
            return frozenset()
        return frozenset(combinations(sigma, size))

    def cofaces(self, sigma: Simplex, codim: int = 1) -> SimplexSet:
        self._require(sigma)
        if codim < 1:
            raise ComplexError("codimension must be >= 1")
        if codim == 1:
            return frozenset(self._cofacets[sigma])
        size = len(sigma) + codim
        pool = self._by_dim.get(size - 1, ())
        ss = set(sigma)
        return frozenset(t for t in pool if ss.issubset(t))

    def facets(self, sigma: Simplex) -> tuple[Simplex, ...]:
        self._require(sigma)
        return self._facets[sigma]

    def cofacets(self, sigma: Simplex) -> tuple[Simplex, ...]:
        self._require(sigma)
        return tuple(self._cofacets[sigma])

    def _require(self, sigma) -> None:
        if sigma not in self.simplices:
            raise ComplexError(f"simplex {sigma!r} not in complex")


def build_complex(vertices: Iterable[Vertex], maximal_simplices: Iterable[Iterable[Vertex]]) -> SimplicialComplex:
    """Construct the downward closure of the given maximal simplices."""
    return SimplicialComplex(vertices, maximal_simplices)
