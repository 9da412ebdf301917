"""Developing-map representation of maps to the flat torus, suspensions of
commuting permutation pairs, development extension across nested disk
pairs, and the hyperfinite-to-covering pipeline.

Maps to R^2/Z^2 are stored as developments: real vertex coordinates whose
reduction mod Z^2 is the torus map.  Local-homeomorphism checking is exact
orientation plus angle-sum tests; extensions are computed as
convex-combination (Tutte) placements with the already-developed sub-disks
held fixed, certified a posteriori and refined on failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import spsolve

from .complexes import (ComplexError, Region, _edge_key, boundary,
                        descend_region, descend_triangles, is_disk,
                        region_boundary_edges, region_components,
                        region_in_interior, retract, subdivide_once)
from .envelope import strong_filtration
from .filtration import hypercompact_filtration
from .generators import grid_window
from .pile import Family

SQRT2_OVER_2 = math.sqrt(2.0) / 2.0


class CoveringError(ValueError):
    pass


@dataclass(frozen=True)
class Development:
    """Vertex images in R^2 over a domain region; the induced torus map is
    the coordinates reduced mod Z^2."""
    domain: Region
    coords: Dict[int, Tuple[float, float]]

    def __post_init__(self):
        verts = {v for t in self.domain.triangles
                 for v in self.domain.host.triangles[t]}
        missing = verts - set(self.coords)
        if missing:
            raise CoveringError(
                f"development misses vertices: {sorted(missing)[:5]}")

    def torus_coords(self) -> Dict[int, Tuple[float, float]]:
        return {v: (x % 1.0, y % 1.0) for v, (x, y) in self.coords.items()}


# ------------------------------------------------------------- suspensions


def _check_permutation(perm, T):
    if set(perm) != T or set(perm.values()) != T:
        raise CoveringError("action maps must be permutations of the vertical")


@dataclass(frozen=True)
class SuspensionInstance:
    """Two commuting permutations of a finite vertical set, plus the window
    radius at which leaves are truncated."""
    vertical: Tuple[Hashable, ...]
    a: Dict[Hashable, Hashable]
    b: Dict[Hashable, Hashable]
    radius: int

    def __post_init__(self):
        T = set(self.vertical)
        if len(self.vertical) != len(T):
            raise CoveringError("duplicate vertical indices")
        _check_permutation(self.a, T)
        _check_permutation(self.b, T)
        for t in T:
            if self.a[self.b[t]] != self.b[self.a[t]]:
                raise CoveringError("action permutations do not commute")
        if self.radius < 1:
            raise CoveringError("radius must be >= 1")


def _orbit_shift(S, t, i, j):
    """a^i b^j applied to t."""
    inv_a = {w: v for v, w in S.a.items()}
    inv_b = {w: v for v, w in S.b.items()}
    for _ in range(abs(i)):
        t = S.a[t] if i > 0 else inv_a[t]
    for _ in range(abs(j)):
        t = S.b[t] if j > 0 else inv_b[t]
    return t


def orbits(S: SuspensionInstance) -> List[frozenset]:
    seen = set()
    out = []
    for t in S.vertical:
        if t in seen:
            continue
        comp = {t}
        stack = [t]
        while stack:
            s = stack.pop()
            for nxt in (S.a[s], S.b[s]):
                if nxt not in comp:
                    comp.add(nxt)
                    stack.append(nxt)
        inv_a = {w: v for v, w in S.a.items()}
        inv_b = {w: v for v, w in S.b.items()}
        stack = list(comp)
        while stack:
            s = stack.pop()
            for nxt in (inv_a[s], inv_b[s]):
                if nxt not in comp:
                    comp.add(nxt)
                    stack.append(nxt)
        seen |= comp
        out.append(frozenset(comp))
    return out


@dataclass
class SuspensionResult:
    family: Family
    developments: Dict[Hashable, Development]
    orbits: List[frozenset]


def suspend(S: SuspensionInstance) -> SuspensionResult:
    """One grid-window leaf per orbit; the development is the tautological
    lattice coordinate, so the projection mod Z^2 is a local homeomorphism
    on every leaf."""
    fibers = {}
    devs = {}
    orbs = orbits(S)
    for orb in orbs:
        key = sorted(orb, key=repr)[0]
        W = grid_window(S.radius)
        fibers[key] = W
        reg = Region(W, set(W.triangles))
        devs[key] = Development(reg, {v: W.coord_float(v)
                                      for v in W.vertex_set()})
    return SuspensionResult(Family(fibers), devs, orbs)


def fiber_relation(S: SuspensionInstance, r: int) -> frozenset:
    """Pairs of vertical points visible from each other within a radius-r
    leaf window: (t, a^i b^j t) for |i|, |j| <= r.  Grows with r and
    stabilizes at the orbit relation of the action."""
    pairs = set()
    for t in S.vertical:
        for i in range(-r, r + 1):
            s = _orbit_shift(S, t, i, 0)
            for j in range(-r, r + 1):
                pairs.add((t, _orbit_shift(S, s, 0, j)))
    return frozenset(pairs)


def orbit_relation(S: SuspensionInstance) -> frozenset:
    return frozenset((t, s) for orb in orbits(S) for t in orb for s in orb)


# ----------------------------------------------------- local homeomorphism


@dataclass
class LocalHomeoReport:
    ok: bool
    orientation_ok: bool
    link_ok: bool
    bad_triangles: List[int]
    bad_vertices: List[int]
    max_angle_defect: float


def validate_local_homeo(d: Development, tol: float = 1e-9) -> LocalHomeoReport:
    """Pass iff every domain triangle has a positively oriented image and
    the image corners around every interior vertex wind exactly once
    (angle sum 2*pi within tol)."""
    host = d.domain.host
    tris = sorted(d.domain.triangles)
    if not tris:
        return LocalHomeoReport(True, True, True, [], [], 0.0)
    tri_vs = np.array([host.triangles[t] for t in tris])
    xy = d.coords
    P = np.array([[xy[v] for v in row] for row in tri_vs])  # (n, 3, 2)
    e1 = P[:, 1] - P[:, 0]
    e2 = P[:, 2] - P[:, 0]
    cross = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    bad_t = [tris[i] for i in np.nonzero(cross <= 0)[0]]

    bverts = {v for e in region_boundary_edges(d.domain) for v in e}
    verts = {v for row in tri_vs for v in row}
    interior = verts - bverts - host.on_frontier

    angle_sum: Dict[int, float] = {v: 0.0 for v in interior}
    # corner angles, vectorized over all corners at once
    for k in range(3):
        a = P[:, k]
        b = P[:, (k + 1) % 3]
        c = P[:, (k + 2) % 3]
        u = b - a
        w = c - a
        ang = np.abs(np.arctan2(u[:, 0] * w[:, 1] - u[:, 1] * w[:, 0],
                                u[:, 0] * w[:, 0] + u[:, 1] * w[:, 1]))
        for i, v in enumerate(tri_vs[:, k]):
            if v in angle_sum:
                angle_sum[v] += ang[i]
    defects = {v: abs(s - 2.0 * math.pi) for v, s in angle_sum.items()}
    bad_v = sorted(v for v, x in defects.items() if x > tol)
    max_defect = max(defects.values(), default=0.0)
    orientation_ok = not bad_t
    link_ok = not bad_v
    return LocalHomeoReport(orientation_ok and link_ok, orientation_ok,
                            link_ok, bad_t, bad_v, max_defect)


# ----------------------------------------------------- retract filtration


def retract_filtration(B_n: Sequence[Region]) -> List[Region]:
    """Stage-indexed retractions: the i-th output (1-based) is ret_i of the
    i-th input, a region of the depth-i subdivision whose supports are
    nested with room to spare (each inside the interior of the next)."""
    return [retract(B, i + 1) for i, B in enumerate(B_n)]


# ------------------------------------------------------------- extensions


def _refine_coords_once(coords, dst_host, needed):
    """Extend vertex images across one barycentric subdivision by affine
    interpolation (so the piecewise-linear map is unchanged)."""
    src = dst_host.parent
    out = {}
    for v in needed:
        if v in coords:
            out[v] = coords[v]
            continue
        kind, val = dst_host.carrier[v]
        if kind == 'e':
            (xa, ya), (xb, yb) = coords[val[0]], coords[val[1]]
            out[v] = ((xa + xb) / 2.0, (ya + yb) / 2.0)
        elif kind == 't':
            a, b, c = src.triangles[val]
            (xa, ya), (xb, yb), (xc, yc) = coords[a], coords[b], coords[c]
            out[v] = ((xa + xb + xc) / 3.0, (ya + yb + yc) / 3.0)
        else:
            raise CoveringError(f"cannot interpolate vertex {v}")
    return out


def refine_development(d: Development, dst_host) -> Development:
    """The same piecewise-linear map re-expressed on a deeper subdivision.
    Existing vertex images are kept bit-identical."""
    chain = []
    c = dst_host
    while c is not d.domain.host:
        chain.append(c)
        c = c.parent
        if c is None:
            raise CoveringError("target is not a subdivision of the domain")
    region = d.domain
    coords = dict(d.coords)
    for level in reversed(chain):
        region = descend_region(region, level)
        needed = {v for t in region.triangles
                  for v in level.triangles[t]}
        coords = _refine_coords_once(coords, level, needed)
    return Development(region, coords)


def _signed_area(pts):
    s = 0.0
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        s += x1 * y2 - x2 * y1
    return 0.5 * s


def _disk_boundary_ccw(region):
    cycles = boundary(region)
    if len(cycles) != 1:
        raise CoveringError("region has more than one boundary cycle")
    cyc = cycles[0]
    pts = [region.host.coord_float(v) for v in cyc]
    if _signed_area(pts) < 0:
        cyc = cyc[::-1]
    return cyc


def _harmonic_solve(region, fixed: Dict[int, Tuple[float, float]],
                    uniform: bool = False):
    """Convex-combination placement of the region's free vertices with the
    given vertex images held fixed.  Weights default to clamped cotangents
    of the domain geometry (much closer to the continuous harmonic map on
    the skewed barycentric-subdivision triangles than uniform weights)."""
    host = region.host
    wts: Dict[Tuple[int, int], float] = {}
    for t in region.triangles:
        tri = host.triangles[t]
        pts = {v: host.coord_float(v) for v in tri}
        a, b, c = tri
        for apex, (u, v) in ((c, (a, b)), (a, (b, c)), (b, (c, a))):
            e = _edge_key(u, v)
            if uniform:
                wts[e] = 1.0
                continue
            px, py = pts[apex]
            d1 = (pts[u][0] - px, pts[u][1] - py)
            d2 = (pts[v][0] - px, pts[v][1] - py)
            cross = d1[0] * d2[1] - d1[1] * d2[0]
            dot = d1[0] * d2[0] + d1[1] * d2[1]
            wts[e] = wts.get(e, 0.0) + 0.5 * dot / abs(cross)
    if not uniform:
        wts = {e: max(x, 1e-8) for e, x in wts.items()}
    nbrs: Dict[int, list] = {}
    for (u, v), w in wts.items():
        nbrs.setdefault(u, []).append((v, w))
        nbrs.setdefault(v, []).append((u, w))
    free = sorted(v for v in nbrs if v not in fixed)
    if not free:
        return dict(fixed)
    idx = {v: i for i, v in enumerate(free)}
    rows, cols, vals = [], [], []
    rhs = np.zeros((len(free), 2))
    for v in free:
        i = idx[v]
        diag = 0.0
        for w, wt in nbrs[v]:
            diag += wt
            if w in idx:
                rows.append(i)
                cols.append(idx[w])
                vals.append(-wt)
            else:
                rhs[i, 0] += wt * fixed[w][0]
                rhs[i, 1] += wt * fixed[w][1]
        rows.append(i)
        cols.append(i)
        vals.append(diag)
    A = coo_matrix((vals, (rows, cols)),
                   shape=(len(free), len(free))).tocsr()
    sol = np.atleast_2d(spsolve(A, rhs))
    out = dict(fixed)
    for v, i in idx.items():
        out[v] = (float(sol[i, 0]), float(sol[i, 1]))
    return out


def _circle_positions(region, cycle, center, radius):
    """Boundary vertices on the target circle, at their domain angles
    around the region centroid so that nested stages stay angularly
    aligned (no twist between a fixed island and the outer circle).
    Falls back to arc-length spacing when the domain angles fail to wind
    monotonically (non-star-shaped boundary)."""
    host = region.host
    gx, gy = _support_centroid(region)
    pts = [host.coord_float(v) for v in cycle]
    angles = [math.atan2(y - gy, x - gx) for x, y in pts]
    # cyclic monotonicity: exactly one negative jump across the wrap
    wraps = sum(1 for a, b in zip(angles, angles[1:] + angles[:1]) if b < a)
    if wraps != 1:
        total = 0.0
        lens = []
        for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
            lens.append(total)
            total += math.hypot(x2 - x1, y2 - y1)
        angles = [angles[0] + 2.0 * math.pi * s / total for s in lens]
    cx, cy = center
    return {v: (cx + radius * math.cos(a), cy + radius * math.sin(a))
            for v, a in zip(cycle, angles)}


def _images_disjoint(components, coords, host):
    """Pairwise disjointness of developed component images, via shapely."""
    from shapely.geometry import Polygon
    polys = []
    for comp in components:
        cyc = _disk_boundary_ccw(Region(host, comp))
        polys.append(Polygon([coords[v] for v in cyc]))
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            if polys[i].intersects(polys[j]):
                return False
    return True


def _frame_positions(region, cycle, anchor, scale):
    """Boundary vertices under the global frame similarity
    p -> scale * (p - anchor).  All stage rings restrict this one map, so
    image disks inherit the disjointness and nesting of their domains."""
    host = region.host
    ax, ay = anchor
    out = {}
    for v in cycle:
        x, y = host.coord_float(v)
        out[v] = (scale * (x - ax), scale * (y - ay))
    return out


def _solve_disk_stage(hat: Region, fixed_dev: Optional[Development],
                      ring_fn, retries):
    """Harmonic placement of a disk region with its boundary cycle pinned
    by `ring_fn(region, cycle)` and the fixed sub-development's images
    kept; refines barycentrically on fold failure, up to `retries` times."""
    region = hat
    for attempt in range(retries + 1):
        coords_fixed = dict(fixed_dev.coords) if fixed_dev else {}
        cyc = _disk_boundary_ccw(region)
        ring = ring_fn(region, cyc)
        if set(ring) & set(coords_fixed):
            raise CoveringError("fixed vertices lie on the outer boundary")
        coords = _harmonic_solve(region, {**coords_fixed, **ring})
        dev = Development(region, coords)
        if validate_local_homeo(dev).ok:
            return dev
        if attempt == retries:
            break
        deeper = subdivide_once(region.host)
        region = descend_region(region, deeper)
        if fixed_dev is not None:
            fixed_dev = refine_development(fixed_dev, deeper)
    raise CoveringError(
        f"extension folds persisted after {retries} refinements")


def extend_development(B: Optional[Region], Bhat: Region, d: Optional[Development],
                       n: int, *, center=(0.0, 0.0), radius=None,
                       retries: int = 4) -> Development:
    """Extend a development of B (disjoint developed disks) to the ambient
    disk Bhat, mapping Bhat onto a round disk of radius >= n and agreeing
    with d on B exactly (existing vertex images are reused untouched)."""
    if not is_disk(Bhat):
        raise CoveringError("Bhat must be a disk")
    if B is None or not B.triangles:
        R = max(float(n), 1.0, float(radius or 0.0))
        ring_fn = lambda reg, cyc: _circle_positions(reg, cyc, center, R)
        return _solve_disk_stage(Bhat, None, ring_fn, retries)
    if B.host is not Bhat.host:
        raise CoveringError("B and Bhat must live on the same complex")
    if d is None or d.domain.triangles != B.triangles:
        raise CoveringError("d must be a development of B")
    comps = region_components(B)
    for comp in comps:
        if not is_disk(B.replace(comp)):
            raise CoveringError("components of B must be disks")
    if not region_in_interior(B, Bhat):
        raise CoveringError("B must lie in the interior of Bhat")
    if len(comps) > 1 and not _images_disjoint(comps, d.coords, B.host):
        raise CoveringError("developed images of B components overlap")
    cx, cy = center
    reach = max(math.hypot(x - cx, y - cy) for x, y in d.coords.values())
    R = max(float(n), reach + 1.0, float(radius or 0.0))
    ring_fn = lambda reg, cyc: _circle_positions(reg, cyc, center, R)
    return _solve_disk_stage(Bhat, d, ring_fn, retries)


# ---------------------------------------------------------- build_covering


def _support_centroid(region):
    host = region.host
    sx = sy = 0.0
    for t in region.triangles:
        a, b, c = (host.coord_float(v) for v in host.triangles[t])
        sx += (a[0] + b[0] + c[0]) / 3.0
        sy += (a[1] + b[1] + c[1]) / 3.0
    m = len(region.triangles)
    return sx / m, sy / m


@dataclass
class _Node:
    stage: int              # 1-based
    triangles: frozenset
    host: object
    centroid: Tuple[float, float]
    children: list = field(default_factory=list)
    on_anchor_path: bool = False


def _build_forest(stages):
    """Component containment forest across consecutive stages."""
    levels = []
    for k, reg in enumerate(stages):
        nodes = []
        for comp in region_components(reg):
            sub = reg.replace(comp)
            nodes.append(_Node(k + 1, comp, reg.host, _support_centroid(sub)))
        levels.append(nodes)
    for lo, hi in zip(levels, levels[1:]):
        for child in lo:
            tris = descend_triangles(child.triangles, child.host,
                                     hi[0].host)
            parent = next((p for p in hi if tris <= p.triangles), None)
            if parent is None:
                raise CoveringError("stage component not nested in the next stage")
            parent.children.append(child)
    return levels


def _layout(levels):
    """Global frame: one similarity p -> s * (p - a), where a is the
    centroid of the first-stage anchor component and s is the smallest
    scale making every anchor-path stage contain a disk of radius
    stage + 1/2 around the anchor image (the origin).

    Because every stage ring restricts the same similarity, images of
    distinct components stay disjoint and nested exactly as their domains
    are, and the harmonic extensions reproduce the similarity (linear
    precision of the cotangent weights), which keeps them fold-free even
    when a tiny early stage sits inside a much larger later one."""
    from shapely.geometry import LinearRing, Point
    # anchor: the first-stage component with the smallest triangle id
    first = min(levels[0], key=lambda n: min(n.triangles))
    node = first
    while node is not None:
        node.on_anchor_path = True
        node = next((p for lvl in levels for p in lvl
                     if node in p.children), None)
    ax, ay = first.centroid
    pt = Point(ax, ay)
    scale = 1.0
    for lvl in levels:
        for nd in lvl:
            if not nd.on_anchor_path:
                continue
            cyc = _disk_boundary_ccw(Region(nd.host, nd.triangles))
            ring = LinearRing([nd.host.coord_float(v) for v in cyc])
            d = pt.distance(ring)
            if d <= 0:
                raise CoveringError("anchor lies on a stage boundary")
            scale = max(scale, (float(nd.stage) + 0.5) / d)
    return (ax, ay), scale


@dataclass
class CoveringResult:
    developments: List[Development]
    radius_certificates: List[Optional[float]]
    anchor: Optional[Tuple[float, float]]
    torus_surjective: bool
    extension_exact: bool


def _anchor_certificate(dev, anchor):
    """Distance from the anchor to the developed boundary of the component
    containing it (0 when no component contains it)."""
    from shapely.geometry import LinearRing, Point, Polygon
    best = 0.0
    pt = Point(anchor)
    for comp in region_components(dev.domain):
        cyc = _disk_boundary_ccw(dev.domain.replace(comp))
        ring = LinearRing([dev.coords[v] for v in cyc])
        if Polygon(ring).contains(pt):
            best = max(best, pt.distance(ring))
    return best


def build_covering(hat_regions: Sequence[Region], *,
                   retries: int = 4) -> CoveringResult:
    """Stage-by-stage developments of a retracted disk filtration, each
    extending the previous one exactly, with per-stage radius certificates
    measured at the first-stage anchor."""
    stages = [r for r in hat_regions]
    nonempty = [r for r in stages if r.triangles]
    if not nonempty:
        return CoveringResult([], [None] * len(stages), None, False, True)
    for reg in nonempty:
        for comp in region_components(reg):
            if not is_disk(reg.replace(comp)):
                raise CoveringError("filtration stage has a non-disk component")
    levels = _build_forest(nonempty)
    frame_anchor, frame_scale = _layout(levels)
    anchor = (0.0, 0.0)  # image of the frame anchor

    devs: List[Development] = []
    certs: List[Optional[float]] = []
    comp_devs: Dict[frozenset, Development] = {}
    prev_lvl = None
    for k, lvl in enumerate(levels):
        stage_coords: Dict[int, Tuple[float, float]] = {}
        stage_regions = []
        new_comp_devs = {}
        for nd in lvl:
            inner_devs = [comp_devs[frozenset(ch.triangles)]
                          for ch in nd.children]
            # work at the deepest host touched so far (fold retries may
            # have pushed an inner development below the nominal depth)
            depth_host = max([nd.host] + [d.domain.host for d in inner_devs],
                             key=lambda h: h.depth)
            hat = descend_region(Region(nd.host, nd.triangles), depth_host)
            fixed_dev = None
            if inner_devs:
                tris = set()
                coords = {}
                for idv in inner_devs:
                    r = refine_development(idv, depth_host) \
                        if idv.domain.host is not depth_host else idv
                    tris |= set(r.domain.triangles)
                    coords.update(r.coords)
                fixed_dev = Development(Region(depth_host, tris), coords)
            ring_fn = (lambda reg, cyc:
                       _frame_positions(reg, cyc, frame_anchor, frame_scale))
            dev = _solve_disk_stage(hat, fixed_dev, ring_fn, retries)
            new_comp_devs[frozenset(nd.triangles)] = dev
            stage_regions.append(dev)
        comp_devs = new_comp_devs
        # merge per-component developments into the stage development;
        # hosts can differ after retries, so re-express on the deepest one
        deepest = max((d.domain.host for d in stage_regions),
                      key=lambda h: h.depth)
        merged_tris = set()
        merged_coords = {}
        for dv in stage_regions:
            dvr = refine_development(dv, deepest) \
                if dv.domain.host is not deepest else dv
            merged_tris |= set(dvr.domain.triangles)
            merged_coords.update(dvr.coords)
        stage_dev = Development(Region(deepest, merged_tris), merged_coords)
        devs.append(stage_dev)
        certs.append(_anchor_certificate(stage_dev, anchor))
    # pad certificates for empty input stages (kept out of the pipeline)
    pad = [None] * (len(stages) - len(levels))
    surjective = bool(certs and certs[-1] >= SQRT2_OVER_2)

    # extension exactness: each stage restricted to the previous stage's
    # vertices must be bit-identical
    exact = True
    for d1, d2 in zip(devs, devs[1:]):
        r1 = refine_development(d1, d2.domain.host) \
            if d1.domain.host is not d2.domain.host else d1
        for v, xy in r1.coords.items():
            if d2.coords.get(v) != xy:
                exact = False
    return CoveringResult(devs, pad + certs, anchor, surjective, exact)


# --------------------------------------------------------------- pipeline


@dataclass
class PipelineReport:
    ok: bool
    vacuous: bool
    stage: str                     # furthest stage reached
    detail: str
    hypercompact: Optional[object] = None
    strong: Optional[object] = None
    covering: Optional[CoveringResult] = None
    q_values: Optional[List[int]] = None


def _default_q_schedule(regions, max_stages):
    """Distinct component-envelope volumes across the filtration, thinned
    to at most max_stages values (always keeping the largest)."""
    from .envelope import envelope
    vols = set()
    for reg in regions:
        for comp in region_components(reg):
            res = envelope(reg.replace(comp))
            if res.reliable:
                vols.add(len(res.region.triangles))
    qs = sorted(vols)
    if len(qs) > max_stages:
        idxs = sorted({round(i * (len(qs) - 1) / (max_stages - 1))
                       for i in range(max_stages)})
        qs = [qs[i] for i in idxs]
    return qs


def covering_from_hyperfinite(F, window, *, q_values=None,
                              max_stages: int = 3,
                              retries: int = 4) -> PipelineReport:
    """Full pipeline: hypercompact filtration -> strong disk filtration ->
    retraction -> covering construction, with stage-attributed failures."""
    try:
        regions, hrep = hypercompact_filtration(F, window)
    except Exception as e:  # noqa: BLE001 - stage attribution
        return PipelineReport(False, False, "hypercompact", str(e))
    if not hrep.ok:
        return PipelineReport(False, False, "hypercompact", hrep.detail,
                              hypercompact=hrep)
    if not any(r.triangles for r in regions):
        return PipelineReport(True, True, "hypercompact",
                              "nothing exhausted", hypercompact=hrep)
    if q_values is None:
        q_values = _default_q_schedule(regions, max_stages)
    if not q_values:
        return PipelineReport(True, True, "strong",
                              "no finite envelopes", hypercompact=hrep,
                              q_values=[])
    out, srep = strong_filtration(regions, q_values)
    if not srep.ok:
        return PipelineReport(False, False, "strong", srep.detail,
                              hypercompact=hrep, strong=srep,
                              q_values=list(q_values))
    stage_regions = [reg for _q, reg in out if reg.triangles]
    # drop duplicate consecutive stages (identical regions add no content)
    dedup = []
    for reg in stage_regions:
        if not dedup or reg.triangles != dedup[-1].triangles:
            dedup.append(reg)
    if not dedup:
        return PipelineReport(True, True, "strong", "empty strong filtration",
                              hypercompact=hrep, strong=srep,
                              q_values=list(q_values))
    hats = retract_filtration(dedup)
    try:
        cov = build_covering(hats, retries=retries)
    except CoveringError as e:
        return PipelineReport(False, False, "covering", str(e),
                              hypercompact=hrep, strong=srep,
                              q_values=list(q_values))
    ok = cov.extension_exact and all(
        validate_local_homeo(d).ok for d in cov.developments)
    return PipelineReport(ok, not cov.developments, "covering",
                          "" if ok else "certificate failure",
                          hypercompact=hrep, strong=srep, covering=cov,
                          q_values=list(q_values))
