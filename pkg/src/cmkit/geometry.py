"""Exact-rational realization of a combinatorial vector field's dynamics.

Geometry lives in barycentric coordinates over the complex's vertex set.
Every construction below (level cells, the region-valued maps on the
realization, the neighborhood systems and index-pair candidates, the
cell-collapse maps, orbit lifting and projection) is decided in exact
rational arithmetic: the definitions hinge on strict versus non-strict
inequalities, so no floating point is allowed anywhere near a membership
test.

Regions are finite unions of constraint blocks (carrier simplex plus
per-vertex rational bounds), with one extra block kind for cones over a
maximal characteristic simplex.  Blocks admit exact membership tests and an
exact emptiness certificate, which is what the orbit-lifting search uses to
distinguish "no witness below the grid cap" from "region empty".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional

from .complex import Simplex, SimplicialComplex, ComplexError
from .field import VectorField
from .flow import InternalInvariantError, SolutionSeq, arrowhead_extension, is_solution


class GeometryError(ValueError):
    pass


class ParamsError(GeometryError):
    """Level parameters violate the required strict chain."""


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise GeometryError(f"expected an exact rational, got {value!r}")


@dataclass(frozen=True)
class Params:
    """Level constants; must satisfy 0 < delta_prime < delta < gamma < eps < 1/(d+1)."""

    eps: Fraction
    gamma: Fraction
    delta: Fraction
    delta_prime: Fraction

    def validate(self, dim: int) -> "Params":
        chain = (Fraction(0), self.delta_prime, self.delta, self.gamma, self.eps,
                 Fraction(1, dim + 1) if dim >= 0 else Fraction(1))
        names = ("0", "delta_prime", "delta", "gamma", "eps", "1/(d+1)")
        for i in range(len(chain) - 1):
            if not chain[i] < chain[i + 1]:
                raise ParamsError(
                    f"parameter chain violated: need {names[i]} < {names[i+1]}, "
                    f"got {chain[i]} and {chain[i+1]}")
        return self

    def levels(self) -> tuple[Fraction, ...]:
        return (self.delta_prime, self.delta, self.gamma, self.eps)

    def grid_unit(self) -> int:
        """Least common denominator of the four levels."""
        return lcm(*(f.denominator for f in self.levels()))


def make_params(eps, gamma, delta, delta_prime) -> Params:
    return Params(_frac(eps), _frac(gamma), _frac(delta), _frac(delta_prime))


def default_params(dim: int) -> Params:
    """Simple exact defaults honoring the strict chain: eps = 1/(d+2), then 3/4, 1/2, 1/4 of it."""
    if dim < 0:
        raise GeometryError("dimension must be >= 0")
    eps = Fraction(1, dim + 2)
    return Params(eps, Fraction(3, 4) * eps, eps / 2, eps / 4).validate(dim)


@dataclass(frozen=True)
class BaryPoint:
    """Barycentric point: positive rational coordinates on one carrier simplex."""

    items: tuple  # ((vertex, Fraction), ...) in vertex order, positive entries only

    def t(self, vertex) -> Fraction:
        for v, c in self.items:
            if v == vertex:
                return c
        return Fraction(0)

    @property
    def carrier(self) -> Simplex:
        return tuple(v for v, _ in self.items)

    def as_dict(self) -> dict:
        return {v: c for v, c in self.items}

    def __repr__(self):
        inside = ", ".join(f"{v}:{c}" for v, c in self.items)
        return f"BaryPoint({inside})"


def bary_point(complex_: SimplicialComplex, coords) -> BaryPoint:
    """Validate coordinates: non-negative, summing to one, supported on a simplex."""
    clean = []
    total = Fraction(0)
    for v, raw in coords.items():
        c = _frac(raw)
        if c < 0:
            raise GeometryError(f"negative coordinate at vertex {v!r}")
        total += c
        if c > 0:
            clean.append((v, c))
    if total != 1:
        raise GeometryError(f"coordinates sum to {total}, expected 1")
    carrier = complex_.simplex([v for v, _ in clean])
    if carrier not in complex_.simplices:
        raise GeometryError(f"support {carrier!r} is not a simplex of the complex")
    order = {v: i for i, v in enumerate(carrier)}
    clean.sort(key=lambda vc: order[vc[0]])
    return BaryPoint(tuple(clean))


def vertex_point(complex_: SimplicialComplex, vertex) -> BaryPoint:
    return bary_point(complex_, {vertex: Fraction(1)})


def barycenter(complex_: SimplicialComplex, sigma: Simplex) -> BaryPoint:
    n = len(sigma)
    return bary_point(complex_, {v: Fraction(1, n) for v in sigma})


# -- regions -----------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    """Points of the closed carrier simplex satisfying per-vertex bounds.

    ``bounds`` maps a vertex of the carrier to a closed interval (lo, hi);
    vertices without an entry are unconstrained in [0, 1], vertices off the
    carrier are implicitly zero.  Equalities are intervals with lo == hi.
    """

    carrier: Simplex
    bounds: tuple = ()  # ((vertex, lo, hi), ...), sorted

    def feasible(self) -> bool:
        lo_sum = Fraction(0)
        hi_sum = Fraction(0)
        bounded = {}
        for v, lo, hi in self.bounds:
            if lo > hi:
                return False
            bounded[v] = (lo, hi)
        for v in self.carrier:
            lo, hi = bounded.get(v, (Fraction(0), Fraction(1)))
            lo_sum += max(lo, Fraction(0))
            hi_sum += min(hi, Fraction(1))
        return lo_sum <= 1 <= hi_sum

    def contains(self, point: BaryPoint) -> bool:
        carrier_set = set(self.carrier)
        for v, _ in point.items:
            if v not in carrier_set:
                return False
        for v, lo, hi in self.bounds:
            c = point.t(v)
            if not (lo <= c <= hi):
                return False
        return True


@dataclass(frozen=True)
class ConeBlock:
    """Segment hull of an apex point with a closed base simplex.

    Membership by the ratio test: y belongs exactly when there is a single
    alpha in [0, 1] with t_v(y) = alpha * t_v(apex) off the base and
    t_v(y) >= alpha * t_v(apex) on it.
    """

    apex: BaryPoint
    base: Simplex

    def contains(self, point: BaryPoint) -> bool:
        base = set(self.base)
        ratios = []
        for v, c in self.apex.items:
            if v not in base:
                y = point.t(v)
                ratios.append((y, c))
        for v, _ in point.items:
            if v not in base and self.apex.t(v) == 0:
                return False
        if not ratios:
            return all(v in base for v, _ in point.items)
        alpha = ratios[0][0] / ratios[0][1]
        for y, c in ratios[1:]:
            if y / c != alpha:
                return False
        if not (0 <= alpha <= 1):
            return False
        return all(point.t(v) >= alpha * self.apex.t(v) for v in self.base)

    def feasible(self) -> bool:
        return True  # always contains its apex


@dataclass(frozen=True)
class RegionDescriptor:
    """Finite union of blocks; an empty block tuple denotes the empty region."""

    blocks: tuple

    def contains(self, point: BaryPoint) -> bool:
        return any(b.contains(point) for b in self.blocks)

    def constraint_blocks(self) -> tuple:
        return tuple(b for b in self.blocks if isinstance(b, Block))

    def to_json(self) -> list:
        out = []
        for b in self.blocks:
            if isinstance(b, Block):
                out.append({
                    "carrier": list(b.carrier),
                    "constraints": [[v, str(lo), str(hi)] for v, lo, hi in b.bounds],
                })
            else:
                out.append({
                    "cone": {
                        "apex": {v: str(c) for v, c in b.apex.items},
                        "base": list(b.base),
                    }
                })
        return out


def in_region(point: BaryPoint, region: RegionDescriptor) -> bool:
    return region.contains(point)


def _normalize_blocks(complex_: SimplicialComplex, blocks) -> tuple:
    seen = set()
    keep = []
    for b in blocks:
        if isinstance(b, Block):
            if not b.feasible():
                continue
        if b not in seen:
            seen.add(b)
            keep.append(b)

    def key(b):
        if isinstance(b, Block):
            return (0, complex_.sort_key(b.carrier), b.bounds)
        return (1, complex_.sort_key(b.base), b.apex.items)

    return tuple(sorted(keep, key=key))


def _block(complex_, carrier, bounds: dict = ()) -> Block:
    order = {v: i for i, v in enumerate(carrier)}
    rows = tuple(sorted(((v, lo, hi) for v, (lo, hi) in dict(bounds).items()),
                        key=lambda r: order[r[0]]))
    return Block(tuple(carrier), rows)


# -- the dynamics ------------------------------------------------------------


class GeometricDynamics:
    """All level-set geometry induced by one field at fixed parameters.

    Methods are pure and cache by the characteristic data of their argument,
    which is sound because every region-valued map below is constant on open
    top-level cells.
    """

    def __init__(self, complex_: SimplicialComplex, field: VectorField, params: Optional[Params] = None):
        if complex_.dim < 0:
            raise GeometryError("empty complex has no realization")
        self.complex = complex_
        self.field = field
        self.params = (params or default_params(complex_.dim)).validate(complex_.dim)
        self._f_cache: dict = {}
        self._f_alt_cache: dict = {}
        self._ftilde_cache: dict = {}
        self._abc_cache: dict = {}
        self._grid_cache: dict = {}

    # -- characteristic data ------------------------------------------

    def point(self, coords) -> BaryPoint:
        return bary_point(self.complex, coords)

    def signature(self, x: BaryPoint, level) -> dict:
        lam = _frac(level)
        out = {}
        for v in self.complex.vertices:
            c = x.t(v)
            out[v] = 0 if c == lam else (1 if c > lam else -1)
        return out

    def sigma_min(self, x: BaryPoint, level) -> Simplex:
        lam = _frac(level)
        sigma = tuple(v for v, c in x.items if c > lam)
        if sigma not in self.complex.simplices:
            raise InternalInvariantError(
                f"minimal characteristic simplex {sigma!r} escaped the complex")
        return sigma

    def sigma_max(self, x: BaryPoint, level) -> Simplex:
        lam = _frac(level)
        if lam <= 0:
            raise GeometryError("maximal characteristic simplex needs a positive level")
        sigma = tuple(v for v, c in x.items if c >= lam)
        if sigma not in self.complex.simplices:
            raise InternalInvariantError(
                f"maximal characteristic simplex {sigma!r} escaped the complex")
        return sigma

    def characteristic_data(self, x: BaryPoint, level):
        """The interval of simplices sandwiched between the two characteristic simplices."""
        lam = _frac(level)
        if not (0 < lam < Fraction(1, self.complex.dim + 1)):
            raise GeometryError("characteristic level must lie strictly between 0 and 1/(d+1)")
        smin = self.sigma_min(x, lam)
        smax = self.sigma_max(x, lam)
        return smin, smax, self._interval(smin, smax)

    def _interval(self, smin: Simplex, smax: Simplex) -> tuple:
        from itertools import combinations
        extra = tuple(v for v in smax if v not in smin)
        out = []
        for k in range(len(extra) + 1):
            for add in combinations(extra, k):
                sigma = self.complex.simplex(smin + add)
                out.append(sigma)
        if not out:
            raise InternalInvariantError("characteristic interval is empty")
        return tuple(sorted(out, key=self.complex.sort_key))

    def in_cell(self, x: BaryPoint, sigma: Simplex, level, closed: bool = False) -> bool:
        """Exact membership in the open level cell of sigma, or its closure."""
        lam = _frac(level)
        if sigma not in self.complex.simplices:
            raise ComplexError(f"simplex {sigma!r} not in complex")
        inside = set(sigma)
        for v in self.complex.vertices:
            c = x.t(v)
            if v in inside:
                if not (c >= lam if closed else c > lam):
                    return False
            else:
                if not (c <= lam if closed else c < lam):
                    return False
        return True

    # -- building-block regions ----------------------------------------

    def region_abc(self, sigma: Simplex):
        """The three pieces from which the flow's region map is assembled."""
        if sigma in self._abc_cache:
            return self._abc_cache[sigma]
        gamma = self.params.gamma
        plus = self.field.sigma_plus(sigma)
        minus = self.field.sigma_minus(sigma)
        if plus == minus:
            a_blocks = [_block(self.complex, plus)]
        else:
            a_blocks = [
                _block(self.complex, plus, {v: (gamma, Fraction(1)) for v in minus}),
                _block(self.complex, minus),
            ]
        b_blocks = [_block(self.complex, plus, {v: (Fraction(0), gamma)}) for v in minus]
        c_blocks = []
        for v in minus:
            eq = {w: (gamma, Fraction(1)) for w in minus if w != v}
            eq[v] = (gamma, gamma)
            c_blocks.append(_block(self.complex, plus, eq))
            c_blocks.append(_block(self.complex, minus, {v: (Fraction(0), gamma)}))
        result = (RegionDescriptor(_normalize_blocks(self.complex, a_blocks)),
                  RegionDescriptor(_normalize_blocks(self.complex, b_blocks)),
                  RegionDescriptor(_normalize_blocks(self.complex, c_blocks)))
        self._abc_cache[sigma] = result
        return result

    def _piece_blocks(self, sigma: Simplex, smax: Simplex) -> tuple:
        """Blocks contributed by one characteristic simplex, by the case table."""
        plus = self.field.sigma_plus(smax)
        minus = self.field.sigma_minus(smax)
        a, b, c = self.region_abc(sigma)
        if sigma == minus and sigma == plus:
            return (_block(self.complex, sigma),)
        if sigma == plus and plus != minus:
            return b.blocks
        if sigma == minus and plus != minus:
            return c.blocks
        return a.blocks

    def region_f(self, x: BaryPoint) -> RegionDescriptor:
        """Image region of the induced map; non-empty by construction."""
        smin, smax, interval = self.characteristic_data(x, self.params.eps)
        key = (smin, smax)
        if key not in self._f_cache:
            blocks = []
            for sigma in interval:
                blocks.extend(self._piece_blocks(sigma, smax))
            self._f_cache[key] = RegionDescriptor(_normalize_blocks(self.complex, blocks))
        return self._f_cache[key]

    def region_f_alt(self, x: BaryPoint) -> RegionDescriptor:
        """Equivalent assembly from the top characteristic simplex and stray tails."""
        smin, smax, interval = self.characteristic_data(x, self.params.eps)
        key = (smin, smax)
        if key not in self._f_alt_cache:
            smax_closure = self.complex.closure([smax])
            blocks = list(self._piece_blocks(smax, smax))
            for tau in interval:
                if tau == smax:
                    continue
                if self.field.sigma_minus(tau) != tau:
                    continue
                if self.field.sigma_plus(tau) in smax_closure:
                    continue
                blocks.extend(self._piece_blocks(tau, smax))
            self._f_alt_cache[key] = RegionDescriptor(_normalize_blocks(self.complex, blocks))
        return self._f_alt_cache[key]

    def region_ftilde(self, x: BaryPoint) -> RegionDescriptor:
        """Relaxation of the image region that additionally absorbs each piece's A-part."""
        smin, smax, interval = self.characteristic_data(x, self.params.eps)
        key = (smin, smax)
        if key not in self._ftilde_cache:
            plus = self.field.sigma_plus(smax)
            minus = self.field.sigma_minus(smax)
            blocks = []
            for sigma in interval:
                a, _, _ = self.region_abc(sigma)
                if sigma == minus and plus != minus:
                    blocks.extend(a.blocks)            # the C-case relaxes to A
                elif sigma == plus and plus != minus:
                    blocks.append(_block(self.complex, self.field.sigma_plus(sigma)))
                else:
                    blocks.extend(self._piece_blocks(sigma, smax))
            self._ftilde_cache[key] = RegionDescriptor(_normalize_blocks(self.complex, blocks))
        return self._ftilde_cache[key]

    def region_g(self, x: BaryPoint) -> RegionDescriptor:
        """The identity-absorbing envelope: cone over the top simplex plus the relaxation."""
        smax = self.sigma_max(x, self.params.eps)
        cone = ConeBlock(x, smax)
        blocks = self.region_ftilde(x).blocks + (cone,)
        return RegionDescriptor(blocks)

    # -- neighborhoods and pairs ----------------------------------------

    def in_n(self, x: BaryPoint, family: Iterable[Simplex], level) -> bool:
        """Membership in the union of closed level cells over the family."""
        fam = frozenset(family)
        if not fam:
            return False
        lam = _frac(level)
        if not (0 < lam < Fraction(1, self.complex.dim + 1)):
            raise GeometryError("level must lie strictly between 0 and 1/(d+1)")
        smin = tuple(v for v, c in x.items if c > lam)
        smax = tuple(v for v, c in x.items if c >= lam)
        fast = set(smin)
        for sigma in fam:
            if fast.issubset(sigma) and set(sigma).issubset(smax):
                return True
        return False

    def _interval_split(self, x: BaryPoint, family: frozenset, level):
        smin, smax, interval = self.characteristic_data(x, level)
        inside = [s for s in interval if s in family]
        outside = [s for s in interval if s not in family]
        return inside, outside

    def on_boundary_n(self, x: BaryPoint, family: Iterable[Simplex], level=None) -> bool:
        """Boundary of the closed-cell neighborhood, decided combinatorially."""
        lam = self.params.delta if level is None else _frac(level)
        inside, outside = self._interval_split(x, frozenset(family), lam)
        return bool(inside) and bool(outside)

    def in_interior_n(self, x: BaryPoint, family: Iterable[Simplex], level=None) -> bool:
        lam = self.params.delta if level is None else _frac(level)
        inside, outside = self._interval_split(x, frozenset(family), lam)
        return bool(inside) and not outside

    def in_p(self, x: BaryPoint, sset: Iterable[Simplex], index: int) -> bool:
        """The weak-index-pair candidate around an isolated invariant set."""
        s = frozenset(sset)
        if index == 1:
            return self.in_n(x, s, self.params.delta) and self.in_n(x, s, self.params.delta_prime)
        if index == 2:
            return self.in_n(x, s, self.params.delta_prime) and self.on_boundary_n(x, s)
        raise GeometryError("pair index must be 1 or 2")

    def in_q(self, x: BaryPoint, sset: Iterable[Simplex], index: int) -> bool:
        """The auxiliary closure/exit pair used by the collapse map."""
        s = frozenset(sset)
        cl = self.complex.closure(s)
        if index == 1:
            return self.in_n(x, cl, self.params.delta) and self.in_n(x, cl, self.params.delta_prime)
        if index == 2:
            exit_ = cl - s
            return self.in_n(x, exit_, self.params.delta) and self.in_n(x, cl, self.params.delta_prime)
        raise GeometryError("pair index must be 1 or 2")

    # -- collapse maps ---------------------------------------------------

    @staticmethod
    def collapse_scalar(t, level) -> Fraction:
        """Scalar ramp: 0 below the level, renormalized linear above it."""
        tt, lam = _frac(t), _frac(level)
        if tt <= lam:
            return Fraction(0)
        return (tt - lam) / (1 - lam)

    def _collapse_on(self, x: BaryPoint, sigma: Simplex, lam: Fraction) -> tuple:
        weights = []
        total = Fraction(0)
        for v, c in x.items:
            w = self.collapse_scalar(c, lam)
            if w > 0:
                weights.append((v, w))
                total += w
        if total == 0:
            raise InternalInvariantError("collapse map hit a zero normalizer")
        direct = tuple((v, w / total) for v, w in weights)
        n_sigma = len(sigma)
        r = sum((c for v, c in x.items if v not in sigma), Fraction(0))
        denom = 1 - lam * n_sigma - r
        closed = tuple((v, (x.t(v) - lam) / denom) for v in sigma if x.t(v) > lam)
        if direct != closed:
            raise InternalInvariantError(
                f"collapse map evaluations disagree on {sigma!r}: {direct} vs {closed}")
        return direct

    def phi(self, x: BaryPoint, level=None) -> BaryPoint:
        """Cell collapse at the given level (defaults to delta).

        Every admissible carrier must produce the same value; a mismatch is
        an internal error, as is disagreement between the direct evaluation
        and its closed form.
        """
        lam = self.params.delta if level is None else _frac(level)
        if not (0 < lam < Fraction(1, self.complex.dim + 1)):
            raise GeometryError("collapse level must lie strictly between 0 and 1/(d+1)")
        smin, smax, interval = self.characteristic_data(x, lam)
        values = {self._collapse_on(x, sigma, lam) for sigma in interval}
        if len(values) != 1:
            raise InternalInvariantError(f"collapse map ambiguous across cells at {x!r}")
        items = values.pop()
        return bary_point(self.complex, dict(items))

    def collapse_preimage(self, y: BaryPoint, sigma: Simplex, level=None) -> BaryPoint:
        """The canonical preimage of a point of the closed simplex under the collapse."""
        lam = self.params.delta if level is None else _frac(level)
        n_sigma = len(sigma)
        coords = {v: y.t(v) * (1 - lam * n_sigma) + lam for v in sigma}
        return bary_point(self.complex, coords)

    def psi(self, x: BaryPoint, sset: Iterable[Simplex]) -> BaryPoint:
        """Collapse restricted to the first auxiliary-pair member."""
        s = frozenset(sset)
        if not self.in_q(x, s, 1):
            raise GeometryError("point lies outside the domain of the restricted collapse")
        return self.phi(x, self.params.delta)

    # -- grids ------------------------------------------------------------

    def _block_numerator_ranges(self, block: Block, denominator: int,
                                 open_cell: Optional[Simplex]):
        def floor_frac(f: Fraction) -> int:
            return f.numerator // f.denominator

        def ceil_frac(f: Fraction) -> int:
            return -((-f.numerator) // f.denominator)

        eps = self.params.eps
        bounded = {v: (lo, hi) for v, lo, hi in block.bounds}
        cell = set(open_cell) if open_cell is not None else None
        if cell is not None and not cell.issubset(block.carrier):
            return None
        ranges = []
        for v in block.carrier:
            lo, hi = bounded.get(v, (Fraction(0), Fraction(1)))
            lo_n = ceil_frac(lo * denominator)
            hi_n = floor_frac(hi * denominator)
            if cell is not None:
                strict = eps * denominator
                if v in cell:
                    lo_n = max(lo_n, floor_frac(strict) + 1)   # n > eps*D
                else:
                    hi_n = min(hi_n, ceil_frac(strict) - 1)    # n < eps*D
            lo_n = max(lo_n, 0)
            hi_n = min(hi_n, denominator)
            ranges.append((v, lo_n, hi_n))
        return ranges

    def grid_points(self, region: RegionDescriptor, denominator: int,
                    open_cell: Optional[Simplex] = None) -> list[BaryPoint]:
        """Lattice points of the constraint blocks, in deterministic order."""
        out = []
        seen = set()
        for block in region.constraint_blocks():
            ranges = self._block_numerator_ranges(block, denominator, open_cell)
            if ranges is None:
                continue
            for assignment in _compositions(ranges, denominator):
                coords = {v: Fraction(n, denominator) for v, n in assignment.items() if n}
                point = bary_point(self.complex, coords)
                if point.items not in seen:
                    seen.add(point.items)
                    out.append(point)
        return out

    def region_feasible_in_cell(self, region: RegionDescriptor, sigma: Simplex) -> bool:
        """Exact non-emptiness of region  meet  open cell of sigma."""
        eps = self.params.eps
        for block in region.constraint_blocks():
            if not set(sigma).issubset(block.carrier):
                continue
            bounded = {v: (lo, hi) for v, lo, hi in block.bounds}
            lo_sum = Fraction(0)
            hi_sum = Fraction(0)
            ok = True
            strict_lo = False
            strict_hi = False
            for v in block.carrier:
                lo, hi = bounded.get(v, (Fraction(0), Fraction(1)))
                lo_open = False
                hi_open = False
                if v in set(sigma):
                    if eps >= lo:
                        lo, lo_open = eps, True
                else:
                    if eps <= hi:
                        hi, hi_open = eps, True
                if lo > hi or (lo == hi and (lo_open or hi_open)):
                    ok = False
                    break
                lo_sum += lo
                hi_sum += hi
                strict_lo = strict_lo or lo_open
                strict_hi = strict_hi or hi_open
            if not ok:
                continue
            lower_ok = lo_sum < 1 or (lo_sum == 1 and not strict_lo)
            upper_ok = hi_sum > 1 or (hi_sum == 1 and not strict_hi)
            if lower_ok and upper_ok:
                return True
        return False

    # -- orbit lifting and projection -------------------------------------

    def lift_solution(self, reduced: SolutionSeq, cap: int = 64) -> list[BaryPoint]:
        """Witness orbit through the open top-level cells of a reduced solution.

        Supports fully periodic and finite presentations.  The image region
        of the induced map is constant on open cells, so each position can be
        searched independently on a deterministic lattice; per-position
        failure distinguishes a provably empty region (which would refute the
        correspondence and raises ``LiftError`` with kind 'empty_region')
        from exhaustion of the grid cap (kind 'cap_exceeded').
        """
        periodic = bool(reduced.left)
        if reduced.left and (reduced.middle or reduced.left != reduced.right):
            raise GeometryError("lifting supports fully periodic or finite presentations only")
        word = list(reduced.left if periodic else reduced.middle)
        if not word:
            raise GeometryError("empty solution")
        extended = arrowhead_extension(self.field, reduced)
        if not is_solution(self.complex, self.field, extended):
            raise GeometryError("input is not the reduction of a flow solution")
        unit = self.params.grid_unit()
        points = []
        for k, sigma in enumerate(word):
            if periodic or k > 0:
                pred = word[(k - 1) % len(word)]
                region = self.region_f(barycenter(self.complex, pred))
            else:
                region = RegionDescriptor((_block(self.complex, sigma),))
            witness = None
            q = 1
            while q <= cap:
                for cand in self.grid_points(region, q * unit, open_cell=sigma):
                    if self.in_cell(cand, sigma, self.params.eps):
                        witness = cand
                        break
                if witness is not None:
                    break
                q *= 2
            if witness is None:
                if not self.region_feasible_in_cell(region, sigma):
                    raise LiftError(
                        "empty_region",
                        f"image region meets no point of the open cell of {sigma!r}; "
                        f"this refutes the correspondence (step {k}, region {region.to_json()!r})")
                raise LiftError(
                    "cap_exceeded",
                    f"no lattice witness below grid cap {cap} at step {k}; raise the cap")
            points.append(witness)
        return points

    def check_orbit(self, points: list[BaryPoint], periodic: bool) -> Optional[int]:
        """Index of the first failing step of the orbit property, if any."""
        n = len(points)
        last = n if periodic else n - 1
        for k in range(last):
            y = points[(k + 1) % n]
            if not self.region_f(points[k]).contains(y):
                return k
        return None

    def project_orbit(self, points: list[BaryPoint], periodic: bool = True) -> SolutionSeq:
        """Combinatorial solution shadowed by an orbit of the induced map.

        Projection takes top characteristic simplices, splices in a connecting
        face where an orbit step leaves the previous head (smallest admissible
        face in canonical order), then restores arrowheads.
        """
        bad = self.check_orbit(points, periodic)
        if bad is not None:
            raise GeometryError(f"not an orbit of the induced map: step {bad} fails membership")
        word = [self.sigma_max(x, self.params.eps) for x in points]
        n = len(word)
        spliced = []
        for k in range(n):
            if periodic or k > 0:
                prev = word[(k - 1) % n]
                carrier = points[k].carrier
                prev_head = self.field.sigma_plus(prev)
                if not set(carrier).issubset(prev_head):
                    tau = self._insertion_face(prev, carrier)
                    spliced.append(tau)
            spliced.append(word[k])
        seq = SolutionSeq.periodic(spliced) if periodic else SolutionSeq.finite(spliced)
        out = arrowhead_extension(self.field, seq)
        if not is_solution(self.complex, self.field, out):
            raise InternalInvariantError("projected sequence is not a flow solution")
        return out

    def _insertion_face(self, prev: Simplex, carrier: Simplex) -> Simplex:
        candidates = []
        for tau in sorted(self.complex.closure([prev]) - {prev}, key=self.complex.sort_key):
            head = self.field.sigma_plus(tau)
            if set(carrier).issubset(head) and carrier != tau:
                candidates.append(tau)
        if not candidates:
            raise GeometryError(
                f"no admissible connecting face from {prev!r} toward carrier {carrier!r}")
        return candidates[0]


class LiftError(GeometryError):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def _compositions(ranges, total):
    """Assignments of numerators within per-vertex ranges summing to the total."""
    n = len(ranges)

    def rec(i, remaining, acc):
        if i == n:
            if remaining == 0:
                yield dict(acc)
            return
        v, lo, hi = ranges[i]
        rest_lo = sum(r[1] for r in ranges[i + 1:])
        rest_hi = sum(r[2] for r in ranges[i + 1:])
        start = max(lo, remaining - rest_hi)
        stop = min(hi, remaining - rest_lo)
        for value in range(start, stop + 1):
            acc.append((v, value))
            yield from rec(i + 1, remaining - value, acc)
            acc.pop()

    yield from rec(0, total, [])
