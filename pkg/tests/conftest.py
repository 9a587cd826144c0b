import random

import pytest

from cmkit import SimplicialComplex, VectorField, validate_field
from cmkit.fixtures import (hexagon_core, hexagon_disk, hexagon_invariant_set,
                            two_loops, two_loops_cycle_set)


@pytest.fixture(scope="session")
def k1():
    return two_loops()


@pytest.fixture(scope="session")
def k1_cycle(k1):
    complex_, _ = k1
    return two_loops_cycle_set(complex_)


@pytest.fixture(scope="session")
def hexagon():
    return hexagon_disk()


@pytest.fixture(scope="session")
def hexagon_s(hexagon):
    complex_, _ = hexagon
    return hexagon_invariant_set(complex_)


@pytest.fixture(scope="session")
def hexagon_sub():
    return hexagon_core()


def random_system(seed: int, max_vertices: int = 5) -> tuple[SimplicialComplex, VectorField]:
    """A small random complex with a random matching; always a valid field."""
    rng = random.Random(seed)
    n = rng.randint(1, max_vertices)
    vertices = [chr(ord("a") + i) for i in range(n)]
    maximal = [[v] for v in vertices]
    for _ in range(rng.randint(0, 2 * n)):
        size = rng.randint(1, min(3, n))
        maximal.append(rng.sample(vertices, size))
    complex_ = SimplicialComplex(vertices, maximal)
    order = complex_.sorted_simplices()
    rng.shuffle(order)
    assigned = set()
    vectors = []
    critical = []
    for sigma in order:
        if sigma in assigned:
            continue
        frees = [c for c in complex_.cofacets(sigma) if c not in assigned]
        if frees and rng.random() < 0.7:
            head = rng.choice(frees)
            vectors.append((sigma, head))
            assigned.add(sigma)
            assigned.add(head)
        else:
            critical.append(sigma)
            assigned.add(sigma)
    return complex_, validate_field(complex_, vectors, critical)
