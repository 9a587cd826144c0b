"""Deterministic sampling and the geometric property suite.

Every property below is a theorem about the constructions in
``cmkit.geometry``, so a failure always indicates an implementation bug;
the report captures the first counterexample per property with enough data
to replay it by hand.  Points are generated counter-style (hash of seed and
index), so the sample set is independent of evaluation order, and the
corner battery always contributes the equality-boundary points where
strict/non-strict distinctions live.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .complex import SimplexSet, SimplicialComplex
from .field import VectorField
from .flow import is_isolated_invariant
from .geometry import (BaryPoint, Block, GeometricDynamics, Params, RegionDescriptor,
                       bary_point, barycenter, default_params)


@dataclass(frozen=True)
class SampleConfig:
    count: int
    seed: int = 1
    denominator_base: int = 1
    target: Optional[SimplexSet] = None

    def validate(self) -> "SampleConfig":
        if self.count < 0 or self.denominator_base < 1:
            raise ValueError("sample count must be >= 0 and denominator base >= 1")
        return self


def _digest_stream(seed: int, index: int):
    j = 0
    while True:
        block = hashlib.sha256(f"{seed}:{index}:{j}".encode()).digest()
        for i in range(0, 32, 4):
            yield int.from_bytes(block[i:i + 4], "big")
        j += 1


def sample_points(complex_: SimplicialComplex, config: SampleConfig,
                  unit_denominator: int = 1) -> list[BaryPoint]:
    """Counter-based pseudo-random points; identical inputs give identical lists.

    Even-indexed samples are biased onto the closure of the target family
    when one is set, which puts at least half of them inside every closed
    level neighborhood of that closure.
    """
    config.validate()
    pool_all = complex_.sorted_simplices()
    pool_target = (sorted(complex_.closure(config.target), key=complex_.sort_key)
                   if config.target else None)
    points = []
    for k in range(config.count):
        stream = _digest_stream(config.seed, k)
        pool = pool_target if (pool_target and k % 2 == 0) else pool_all
        sigma = pool[next(stream) % len(pool)]
        n = len(sigma)
        denom = config.denominator_base * unit_denominator
        while denom < n:
            denom *= 2
        remaining = denom - n
        parts = []
        for _ in range(n - 1):
            extra = next(stream) % (remaining + 1)
            parts.append(1 + extra)
            remaining -= extra
        parts.append(1 + remaining)
        points.append(bary_point(complex_, {v: Fraction(p, denom) for v, p in zip(sigma, parts)}))
    return points


def corner_battery(complex_: SimplicialComplex, params: Params,
                   target: Optional[SimplexSet] = None) -> list[BaryPoint]:
    """Vertices, edge midpoints, and level points on the relevant edges."""
    points = []
    seen = set()

    def push(coords):
        p = bary_point(complex_, coords)
        if p.items not in seen:
            seen.add(p.items)
            points.append(p)

    for v in complex_.vertices:
        if (v,) in complex_.simplices:
            push({v: Fraction(1)})
    edges = [s for s in complex_.sorted_simplices() if len(s) == 2]
    for u, v in edges:
        push({u: Fraction(1, 2), v: Fraction(1, 2)})
    level_edges = edges
    if target is not None:
        closure = complex_.closure(target)
        level_edges = [e for e in edges if e in closure]
    for u, v in level_edges:
        for c in params.levels():
            push({u: c, v: 1 - c})
            push({u: 1 - c, v: c})
    return points


@dataclass
class PropertyResult:
    name: str
    tested: int
    passed: bool
    counterexample: Optional[dict] = None


@dataclass
class PropertyReport:
    params: dict
    seed: int
    count: int
    target: Optional[list]
    results: list = dc_field(default_factory=list)
    precondition_failure: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.precondition_failure is None and all(r.passed for r in self.results)

    def to_json(self, manifest: Optional[dict] = None) -> str:
        payload = {
            "ok": self.ok,
            "params": self.params,
            "seed": self.seed,
            "samples": self.count,
            "target": self.target,
            "precondition_failure": self.precondition_failure,
            "properties": [
                {
                    "name": r.name,
                    "tested": r.tested,
                    "passed": r.passed,
                    "counterexample": r.counterexample,
                }
                for r in self.results
            ],
        }
        if manifest is not None:
            payload["manifest"] = manifest
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = []
        if self.precondition_failure:
            lines.append(f"PRECONDITION FAILURE: {self.precondition_failure}")
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status} {r.name} ({r.tested} checks)")
            if r.counterexample:
                lines.append(f"     counterexample: {json.dumps(r.counterexample, sort_keys=True)}")
        lines.append(f"result: {'all properties hold' if self.ok else 'FAILURES FOUND'}")
        return "\n".join(lines) + "\n"


def _point_json(x: BaryPoint) -> dict:
    return {v: str(c) for v, c in x.items}


def _thread_count() -> int:
    raw = os.environ.get("CMK_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_property_suite(complex_: SimplicialComplex, field: VectorField,
                       sset: Optional[Iterable] = None,
                       params: Optional[Params] = None,
                       config: Optional[SampleConfig] = None) -> PropertyReport:
    """Evaluate every geometric invariant over samples plus the corner battery."""
    params = (params or default_params(complex_.dim)).validate(complex_.dim)
    config = (config or SampleConfig(count=200)).validate()
    target = frozenset(sset) if sset is not None else None
    report = PropertyReport(
        params={"eps": str(params.eps), "gamma": str(params.gamma),
                "delta": str(params.delta), "delta_prime": str(params.delta_prime)},
        seed=config.seed, count=config.count,
        target=sorted(map(list, target)) if target is not None else None)
    if target is not None:
        iso = is_isolated_invariant(complex_, field, target)
        if not iso.ok:
            report.precondition_failure = f"target set is not an isolated invariant set: {iso.message}"
            return report
    dyn = GeometricDynamics(complex_, field, params)
    effective = SampleConfig(config.count, config.seed, config.denominator_base, target)
    unit = params.grid_unit()
    samples = sample_points(complex_, effective, unit) + corner_battery(complex_, params, target)
    suite = _build_suite(dyn, target, unit)

    threads = _thread_count()
    for name, per_sample in suite["per_sample"]:
        tested = 0
        counterexample = None
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                outcomes = list(pool.map(per_sample, samples))
        else:
            outcomes = [per_sample(x) for x in samples]
        for idx, out in enumerate(outcomes):
            tested += 1
            if out is not None and counterexample is None:
                out["sample_index"] = idx
                counterexample = out
        report.results.append(PropertyResult(name, tested, counterexample is None, counterexample))
    for name, runner in suite["global"]:
        tested, counterexample = runner()
        report.results.append(PropertyResult(name, tested, counterexample is None, counterexample))
    return report


def _build_suite(dyn: GeometricDynamics, target, unit: int):
    complex_ = dyn.complex
    field = dyn.field
    params = dyn.params
    levels = params.levels()
    closure = complex_.closure(target) if target is not None else None
    exit_ = (closure - target) if target is not None else None

    def fgrid(x):
        return dyn.grid_points(dyn.region_f(x), unit)

    # -- S-independent properties ---------------------------------------

    def char_levels_nested(x):
        carrier = set(x.carrier)
        chain = [(Fraction(0), carrier)]
        for lam in sorted(levels):
            smax = set(dyn.sigma_max(x, lam))
            for lo, lo_min in chain:
                if not smax.issubset(lo_min):
                    return {"property": "char_levels_nested", "x": _point_json(x),
                            "low_level": str(lo), "high_level": str(lam)}
            chain.append((lam, set(dyn.sigma_min(x, lam))))
        return None

    def char_interval_equivalence(x):
        for lam in levels:
            smin, smax, interval = dyn.characteristic_data(x, lam)
            members = set(interval)
            for sigma in complex_.sorted_simplices():
                sandwich = set(smin).issubset(sigma) and set(sigma).issubset(smax)
                closed_cell = dyn.in_cell(x, sigma, lam, closed=True)
                listed = sigma in members
                if not (sandwich == closed_cell == listed):
                    return {"property": "char_interval_equivalence", "x": _point_json(x),
                            "level": str(lam), "sigma": list(sigma),
                            "sandwich": sandwich, "closed_cell": closed_cell, "listed": listed}
        return None

    def char_simplices_exist(x):
        for lam in levels:
            _, _, interval = dyn.characteristic_data(x, lam)
            if not interval:
                return {"property": "char_simplices_exist", "x": _point_json(x), "level": str(lam)}
        return None

    def open_cells_disjoint(x):
        for lam in levels:
            cells = [s for s in complex_.sorted_simplices() if dyn.in_cell(x, s, lam)]
            if len(cells) > 1:
                return {"property": "open_cells_disjoint", "x": _point_json(x),
                        "level": str(lam), "cells": [list(c) for c in cells]}
        return None

    def region_f_alt_agreement(x):
        f = dyn.region_f(x)
        alt = dyn.region_f_alt(x)
        probes = dyn.grid_points(f, unit) + dyn.grid_points(alt, unit) + [x]
        for y in probes:
            if f.contains(y) != alt.contains(y):
                return {"property": "region_f_alt_agreement", "x": _point_json(x),
                        "y": _point_json(y), "direct": f.contains(y), "alt": alt.contains(y)}
        return None

    def region_f_constant_on_cells(x):
        for sigma in complex_.sorted_simplices():
            if dyn.in_cell(x, sigma, params.eps):
                reference = dyn.region_f(barycenter(complex_, sigma))
                if dyn.region_f(x) != reference:
                    return {"property": "region_f_constant_on_cells", "x": _point_json(x),
                            "cell": list(sigma)}
        return None

    def piece_carrier_in_head(x):
        _, smax, interval = dyn.characteristic_data(x, params.eps)
        for sigma in interval:
            head = set(field.sigma_plus(sigma))
            for block in dyn._piece_blocks(sigma, smax):
                if not set(block.carrier).issubset(head):
                    return {"property": "piece_carrier_in_head", "x": _point_json(x),
                            "sigma": list(sigma), "carrier": list(block.carrier)}
        return None

    def _simplex_probes(sigma):
        lattice = dyn.grid_points(RegionDescriptor((Block(tuple(sigma)),)), unit)
        return lattice if lattice else [barycenter(complex_, sigma)]

    def closed_simplex_in_ftilde(x):
        _, smax, interval = dyn.characteristic_data(x, params.eps)
        ftilde = dyn.region_ftilde(x)
        for sigma in interval:
            for y in _simplex_probes(sigma):
                if not ftilde.contains(y):
                    return {"property": "closed_simplex_in_ftilde", "x": _point_json(x),
                            "sigma": list(sigma), "y": _point_json(y)}
        return None

    def graph_selectors(x):
        g = dyn.region_g(x)
        if not g.contains(x):
            return {"property": "graph_selectors", "x": _point_json(x), "missing": "identity"}
        for y in fgrid(x):
            if not g.contains(y):
                return {"property": "graph_selectors", "x": _point_json(x),
                        "y": _point_json(y), "missing": "image"}
        return None

    def ftilde_envelope(x):
        # the relaxation must equal  A(top) union image region  pointwise
        _, smax, _ = dyn.characteristic_data(x, params.eps)
        ftilde = dyn.region_ftilde(x)
        a_top = dyn.region_abc(smax)[0]
        f = dyn.region_f(x)
        probes = dyn.grid_points(ftilde, unit) + dyn.grid_points(f, unit) + dyn.grid_points(a_top, unit)
        for y in probes:
            lhs = ftilde.contains(y)
            rhs = a_top.contains(y) or f.contains(y)
            if lhs != rhs:
                return {"property": "ftilde_envelope", "x": _point_json(x),
                        "y": _point_json(y), "relaxation": lhs, "union": rhs}
        return None

    def collapse_closed_form(x):
        for lam in (params.delta, params.delta_prime):
            y = dyn.phi(x, lam)  # internally cross-checks the closed form
            total = sum((c for _, c in y.items), Fraction(0))
            if total != 1:
                return {"property": "collapse_closed_form", "x": _point_json(x), "level": str(lam)}
        return None

    per_sample = [
        ("char_levels_nested", char_levels_nested),
        ("char_interval_equivalence", char_interval_equivalence),
        ("char_simplices_exist", char_simplices_exist),
        ("open_cells_disjoint", open_cells_disjoint),
        ("region_f_alt_agreement", region_f_alt_agreement),
        ("region_f_constant_on_cells", region_f_constant_on_cells),
        ("piece_carrier_in_head", piece_carrier_in_head),
        ("closed_simplex_in_ftilde", closed_simplex_in_ftilde),
        ("ftilde_envelope", ftilde_envelope),
        ("graph_selectors", graph_selectors),
        ("collapse_closed_form", collapse_closed_form),
    ]

    # -- S-dependent properties ------------------------------------------

    if target is not None:
        def pair_nesting(x):
            p1, p2 = dyn.in_p(x, target, 1), dyn.in_p(x, target, 2)
            q1, q2 = dyn.in_q(x, target, 1), dyn.in_q(x, target, 2)
            n_delta = dyn.in_n(x, target, params.delta)
            if p2 and not p1:
                return {"property": "pair_nesting", "x": _point_json(x), "violated": "P2 in P1"}
            if p1 and not n_delta:
                return {"property": "pair_nesting", "x": _point_json(x), "violated": "P1 in N_delta"}
            if q2 and not q1:
                return {"property": "pair_nesting", "x": _point_json(x), "violated": "Q2 in Q1"}
            return None

        def p_diff_identity(x):
            lhs = dyn.in_p(x, target, 1) and not dyn.in_p(x, target, 2)
            rhs = dyn.in_n(x, target, params.delta_prime) and dyn.in_interior_n(x, target)
            if lhs != rhs:
                return {"property": "p_diff_identity", "x": _point_json(x),
                        "p1_minus_p2": lhs, "interior_form": rhs}
            return None

        def q_diff_equals_p_diff(x):
            lhs = dyn.in_q(x, target, 1) and not dyn.in_q(x, target, 2)
            rhs = dyn.in_p(x, target, 1) and not dyn.in_p(x, target, 2)
            if lhs != rhs:
                return {"property": "q_diff_equals_p_diff", "x": _point_json(x),
                        "q_diff": lhs, "p_diff": rhs}
            return None

        def boundary_interior_partition(x):
            inside = dyn.in_n(x, target, params.delta)
            bd = dyn.on_boundary_n(x, target)
            interior = dyn.in_interior_n(x, target)
            if inside != (bd or interior) or (bd and interior):
                return {"property": "boundary_interior_partition", "x": _point_json(x),
                        "in_n": inside, "boundary": bd, "interior": interior}
            return None

        def flow_image_in_open_cells(x):
            if not dyn.in_n(x, target, params.delta):
                return None
            for y in fgrid(x):
                if dyn.in_n(y, target, params.delta) and y.carrier not in target:
                    return {"property": "flow_image_in_open_cells", "x": _point_json(x),
                            "y": _point_json(y), "carrier": list(y.carrier)}
            return None

        def weak_pair_invariance(x):
            for i in (1, 2):
                if not dyn.in_p(x, target, i):
                    continue
                for y in fgrid(x):
                    if dyn.in_n(y, target, params.delta) and not dyn.in_p(y, target, i):
                        return {"property": "weak_pair_invariance", "x": _point_json(x),
                                "y": _point_json(y), "index": i}
            return None

        def invariant_region_interior(x):
            if not (dyn.in_n(x, target, params.eps) and x.carrier in target):
                return None
            if dyn.sigma_max(x, params.eps) not in target:
                return {"property": "invariant_region_interior", "x": _point_json(x),
                        "violated": "top characteristic simplex escapes the set"}
            for lam, tag in ((params.delta, "delta"), (params.delta_prime, "delta_prime")):
                if not dyn.in_interior_n(x, target, lam):
                    return {"property": "invariant_region_interior", "x": _point_json(x),
                            "violated": f"interior at {tag}"}
            return None

        def collapse_lands_in_closure(x):
            if dyn.in_q(x, target, 1):
                y = dyn.psi(x, target)
                if y.carrier not in closure:
                    return {"property": "collapse_lands_in_closure", "x": _point_json(x),
                            "y": _point_json(y), "violated": "closure"}
                if dyn.in_q(x, target, 2) and y.carrier not in exit_:
                    return {"property": "collapse_lands_in_closure", "x": _point_json(x),
                            "y": _point_json(y), "violated": "exit"}
            return None

        per_sample.extend([
            ("pair_nesting", pair_nesting),
            ("p_diff_identity", p_diff_identity),
            ("q_diff_equals_p_diff", q_diff_equals_p_diff),
            ("boundary_interior_partition", boundary_interior_partition),
            ("flow_image_in_open_cells", flow_image_in_open_cells),
            ("weak_pair_invariance", weak_pair_invariance),
            ("invariant_region_interior", invariant_region_interior),
            ("collapse_lands_in_closure", collapse_lands_in_closure),
        ])

    # -- one-shot structural properties -----------------------------------

    def abc_nonempty():
        tested = 0
        for sigma in complex_.sorted_simplices():
            if field.is_critical(sigma):
                continue
            tested += 1
            a, b, c = dyn.region_abc(sigma)
            for tag, region in (("A", a), ("B", b), ("C", c)):
                if not region.blocks:
                    return tested, {"property": "abc_nonempty", "sigma": list(sigma), "empty": tag}
        return tested, None

    def collapse_onto():
        tested = 0
        for sigma in complex_.sorted_simplices():
            for y in _simplex_probes(sigma):
                tested += 1
                x = dyn.collapse_preimage(y, sigma)
                image = dyn.phi(x, params.delta)
                if image.items != y.items:
                    return tested, {"property": "collapse_onto", "sigma": list(sigma),
                                    "y": _point_json(y), "image": _point_json(image)}
        return tested, None

    global_props = [
        ("abc_nonempty", abc_nonempty),
        ("collapse_onto", collapse_onto),
    ]

    return {"per_sample": per_sample, "global": global_props}
