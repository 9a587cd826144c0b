"""Two worked examples: a one-dimensional graph and a triangulated hexagonal disk.

``two_loops`` is a graph on six vertices whose field has an attracting
3-edge cycle, two critical edges and a critical vertex.  ``hexagon_disk``
is a 2-dimensional disk (10 vertices, 19 edges, 10 triangles) carrying a
field with 7 critical cells and 16 vectors; ``hexagon_invariant_set``
returns its distinguished 17-simplex isolated invariant set, whose exit
set is a 7-simplex path along the disk.
"""

from __future__ import annotations

from .complex import SimplicialComplex
from .field import VectorField, validate_field


def two_loops() -> tuple[SimplicialComplex, VectorField]:
    """Two hollow triangles joined by a bridge edge, with three critical cells."""
    complex_ = SimplicialComplex(
        vertices="ABCDEF",
        maximal_simplices=[("A", "C"), ("A", "D"), ("B", "E"), ("B", "F"),
                           ("C", "D"), ("D", "E"), ("E", "F")],
    )
    field = validate_field(
        complex_,
        vectors=[(("A",), ("A", "D")), (("B",), ("B", "E")), (("C",), ("A", "C")),
                 (("D",), ("C", "D")), (("E",), ("E", "F"))],
        critical=[("B", "F"), ("D", "E"), ("F",)],
    )
    return complex_, field


def two_loops_cycle_set(complex_: SimplicialComplex):
    """The attracting 6-element cycle of the two-loops field."""
    return complex_.simplex_set([("A",), ("A", "C"), ("A", "D"), ("C",), ("C", "D"), ("D",)])


def hexagon_disk() -> tuple[SimplicialComplex, VectorField]:
    """Triangulated hexagonal disk: 10 vertices, 19 edges, 10 triangles.

    The field has 7 critical cells and 16 vectors and exactly one attracting
    periodic cycle (through the quadrilateral F, G, J, I), giving eight
    minimal Morse sets.
    """
    complex_ = SimplicialComplex(
        vertices="ABCDEFGHIJ",
        maximal_simplices=[
            ("A", "D", "E"), ("D", "E", "H"), ("E", "H", "I"), ("E", "F", "I"),
            ("E", "C", "A"), ("E", "F", "C"), ("F", "G", "I"), ("G", "J", "I"),
            ("H", "I", "J"), ("A", "B", "C"),
        ],
    )
    field = validate_field(
        complex_,
        vectors=[
            # inside the distinguished invariant set
            (("D", "E"), ("D", "E", "H")),
            (("E", "H"), ("E", "H", "I")),
            (("E", "I"), ("E", "F", "I")),
            (("F",), ("F", "G")),
            (("G",), ("G", "J")),
            (("J",), ("I", "J")),
            (("I",), ("F", "I")),
            # the rest of the disk drains toward the cycle
            (("E",), ("A", "E")),
            (("A",), ("A", "B")),
            (("B",), ("B", "C")),
            (("C",), ("C", "F")),
            (("D",), ("A", "D")),
            (("H",), ("D", "H")),
            (("C", "A"), ("E", "C", "A")),
            (("E", "C"), ("E", "F", "C")),
            (("G", "I"), ("F", "G", "I")),
        ],
        critical=[("A", "D", "E"), ("E", "F"), ("H", "I"), ("H", "J"),
                  ("G", "J", "I"), ("H", "I", "J"), ("A", "B", "C")],
    )
    return complex_, field


def hexagon_invariant_set(complex_: SimplicialComplex):
    """The 17-simplex isolated invariant set of the hexagon field."""
    return complex_.simplex_set([
        ("A", "D", "E"), ("D", "E"), ("D", "E", "H"), ("E", "F"), ("E", "F", "I"),
        ("E", "H"), ("E", "H", "I"), ("E", "I"), ("F",), ("F", "G"), ("F", "I"),
        ("G",), ("G", "J"), ("H", "I"), ("I",), ("I", "J"), ("J",),
    ])


def hexagon_core() -> tuple[SimplicialComplex, VectorField]:
    """The closure of the hexagon's invariant set as a standalone complex.

    The field restricted to the closure is re-matched on the exit path
    (which the full field pairs with simplices outside the closure).
    """
    complex_ = SimplicialComplex(
        vertices="ADEFGHIJ",
        maximal_simplices=[
            ("A", "D", "E"), ("D", "E", "H"), ("E", "H", "I"), ("E", "F", "I"),
            ("F", "G"), ("G", "J"), ("I", "J"),
        ],
    )
    field = validate_field(
        complex_,
        vectors=[
            (("D", "E"), ("D", "E", "H")),
            (("E", "H"), ("E", "H", "I")),
            (("E", "I"), ("E", "F", "I")),
            (("F",), ("F", "G")),
            (("G",), ("G", "J")),
            (("J",), ("I", "J")),
            (("I",), ("F", "I")),
            (("A",), ("A", "D")),
            (("D",), ("D", "H")),
            (("E",), ("A", "E")),
        ],
        critical=[("A", "D", "E"), ("E", "F"), ("H", "I"), ("H",)],
    )
    return complex_, field
