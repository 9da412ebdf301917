"""Hole-filling envelopes of simplicial regions in planar windows."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import (ComplexError, Region, _edge_key, is_disk,
                        region_components, region_touches_frontier)


class EnvelopeError(ValueError):
    pass


@dataclass(frozen=True)
class EnvelopeResult:
    region: Region          # the envelope
    filled: frozenset       # triangles added as holes
    reliable: bool          # False when truncation makes the answer a guess


def _frontier_seeds(host):
    """Triangles touching the window frontier (flood-fill seeds)."""
    bverts = {v for e in host.boundary_edges() for v in e} | host.on_frontier
    return {t for t, vs in host.triangles.items() if any(v in bverts for v in vs)}


def _flood(host, allowed, seeds):
    """Dual-graph flood fill inside `allowed` from `seeds`."""
    seen = set()
    stack = [t for t in seeds if t in allowed]
    seen.update(stack)
    while stack:
        t = stack.pop()
        a, b, c = host.triangles[t]
        for u, v in ((a, b), (b, c), (c, a)):
            for t2 in host.edges[_edge_key(u, v)]:
                if t2 in allowed and t2 not in seen:
                    seen.add(t2)
                    stack.append(t2)
    return seen


def envelope(B: Region) -> EnvelopeResult:
    """Fill every complement component that does not reach the window
    frontier (the leaf minus C_infinity)."""
    host = B.host
    complement = set(host.triangles) - B.triangles
    c_inf = _flood(host, complement, _frontier_seeds(host))
    filled = frozenset(complement - c_inf)
    region = B.replace(B.triangles | filled)
    reliable = True if not region.triangles else not region_touches_frontier(region)
    return EnvelopeResult(region=region, filled=filled, reliable=reliable)


def envelope_component(omega: Region) -> EnvelopeResult:
    """Envelope of a single connected region."""
    if not omega.triangles:
        raise EnvelopeError("envelope of empty region")
    if len(region_components(omega)) != 1:
        raise EnvelopeError("envelope_component requires a connected region")
    return envelope(omega)


def envelope_per_leaf(regions: Sequence[Region]) -> List[EnvelopeResult]:
    """Family-wide envelope: one result per leaf region."""
    return [envelope(r) for r in regions]


def integral_decomposition(B: Region) -> List[Region]:
    """Split B into parts where component envelopes are pairwise disjoint.

    A component whose envelope contains exactly k other components of B
    lands in part k.
    """
    comps = region_components(B)
    if not comps:
        return []
    envs = []
    for comp in comps:
        res = envelope(B.replace(comp))
        if not res.reliable:
            raise EnvelopeError("unreliable envelope: component reaches the frontier")
        envs.append(res.region.triangles)
    parts: Dict[int, set] = {}
    for i, comp in enumerate(comps):
        k = sum(1 for j, other in enumerate(comps)
                if j != i and other <= envs[i])
        parts.setdefault(k, set()).update(comp)
    return [B.replace(parts[k]) for k in sorted(parts)]


def envelope_bounded(B: Region, q: int) -> Region:
    """Union of component envelopes of volume <= q (each a disk)."""
    if q < 0:
        raise EnvelopeError("q must be nonnegative")
    out = set()
    for comp in region_components(B):
        res = envelope(B.replace(comp))
        if not res.reliable:
            continue
        if len(res.region.triangles) <= q:
            out |= res.region.triangles
    return B.replace(out)


@dataclass
class StrongFiltrationReport:
    ok: bool
    disk_ok: bool
    increasing: bool
    volumes: List[List[int]]   # per q, component envelope volumes
    detail: str = ""


def strong_filtration(B_n: Sequence[Region], q_values: Sequence[int]):
    """Strong disk filtration: for each q, the union over n of the
    volume-q-bounded envelopes of B_n.

    Returns (list of (q, Region), report).
    """
    if not B_n:
        return [], StrongFiltrationReport(True, True, True, [])
    host = B_n[0].host
    for r in B_n[1:]:
        if r.host is not host:
            raise EnvelopeError("strong_filtration: regions on different hosts")
    for i in range(len(B_n) - 1):
        if not B_n[i].triangles <= B_n[i + 1].triangles:
            raise EnvelopeError("strong_filtration: B_n not increasing")

    # all component envelopes across stages, with volumes
    env_comps = []
    for r in B_n:
        for comp in region_components(r):
            res = envelope(r.replace(comp))
            if res.reliable:
                env_comps.append(res.region.triangles)

    q_values = sorted(set(q_values))
    out = []
    volumes = []
    disk_ok = True
    detail = []
    for q in q_values:
        tris = set()
        for env in env_comps:
            if len(env) <= q:
                tris |= env
        reg = Region(host, tris)
        comps = region_components(reg)
        vols = sorted(len(c) for c in comps)
        volumes.append(vols)
        for c in comps:
            sub = reg.replace(c)
            if len(c) > q or not is_disk(sub):
                disk_ok = False
                detail.append(f"q={q}: component of size {len(c)} fails disk/volume check")
        out.append((q, reg))
    increasing = all(out[i][1].triangles <= out[i + 1][1].triangles
                     for i in range(len(out) - 1))
    report = StrongFiltrationReport(ok=disk_ok and increasing, disk_ok=disk_ok,
                                    increasing=increasing, volumes=volumes,
                                    detail="; ".join(detail))
    return out, report
