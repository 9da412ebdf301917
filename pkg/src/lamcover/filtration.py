"""Hypercompactness machinery: skeleta, interior triangles, B(R)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List

from .complexes import (Region, TriangulatedComplex, _edge_key,
                        region_components, region_touches_frontier)
from .relations import FinitePartition, Filtration


@dataclass(frozen=True)
class Skeleton:
    edges1: frozenset   # sq^1: separating edges plus window frontier edges
    vertices0: frozenset  # sq^0: endpoints of sq^1 edges

    def __post_init__(self):
        for e in self.edges1:
            if not (e[0] in self.vertices0 and e[1] in self.vertices0):
                raise ValueError(f"sq1 edge {e} has endpoint outside sq0")


def skeleton(R: FinitePartition, window: TriangulatedComplex) -> Skeleton:
    """Class-frontier edges and vertices of the relation on the window.

    An interior edge is in sq^1 iff its two incident triangles lie in
    different classes; window boundary edges are added conservatively.
    """
    sq1 = set()
    for e, ts in window.edges.items():
        if len(ts) == 1:
            sq1.add(e)
        elif R.class_of[ts[0]] != R.class_of[ts[1]]:
            sq1.add(e)
    sq0 = frozenset(v for e in sq1 for v in e)
    return Skeleton(frozenset(sq1), sq0)


def interior_triangles(R: FinitePartition, window: TriangulatedComplex) -> Region:
    """Triangles whose closure is disjoint from |sq^1(R)|."""
    sk = skeleton(R, window)
    keep = {t for t, vs in window.triangles.items()
            if not any(v in sk.vertices0 for v in vs)}
    return Region(window, keep)


def associated_region(R: FinitePartition, window: TriangulatedComplex) -> Region:
    """B(R): the polytope region of interior triangles."""
    return interior_triangles(R, window)


@dataclass
class HypercompactReport:
    ok: bool
    monotone: bool
    exhausted: frozenset   # triangles interior at some step
    detail: str = ""


def hypercompact_filtration(F: Filtration, window: TriangulatedComplex):
    """B_n = B(R_n) for each step, plus the monotonicity/exhaustion report."""
    regions = [associated_region(R, window) for R in F]
    monotone = all(regions[i].triangles <= regions[i + 1].triangles
                   for i in range(len(regions) - 1))
    exhausted = frozenset().union(*(r.triangles for r in regions)) if regions else frozenset()
    detail = "" if monotone else "B_n not increasing"
    return regions, HypercompactReport(ok=monotone, monotone=monotone,
                                       exhausted=exhausted, detail=detail)


def finite_volume_check(B: Region) -> Dict[int, dict]:
    """Per-component triangle counts; frontier-touching components are
    flagged volume-unreliable."""
    out = {}
    for i, comp in enumerate(region_components(B)):
        sub = B.replace(comp)
        out[i] = {
            'vol': len(comp),
            'reliable': not region_touches_frontier(sub),
            'triangles': frozenset(comp),
        }
    return out
