"""Finite triangulated 2-complexes embedded in the plane.

Coordinates are exact rationals, stored as integer numerators over a
per-complex scale so that orientation tests and barycentric subdivision
stay in integer arithmetic.  Every complex produced by `subdivide` keeps
a link to its parent, the old vertex ids, and a *carrier* per new vertex
(the parent vertex, edge or triangle it lies on), which makes "does this
triangle meet that set" questions combinatorial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional


class ComplexError(ValueError):
    pass


class CoverGapError(ComplexError):
    pass


# coordinate quantization scale for inexact (float) input
_FLOAT_SCALE = 1 << 48


def _edge_key(a, b):
    return (a, b) if a < b else (b, a)


def _to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        # quantize: floats are treated as fixed-precision inputs
        return Fraction(round(x * _FLOAT_SCALE), _FLOAT_SCALE)
    raise ComplexError(f"unsupported coordinate {x!r}")


class TriangulatedComplex:
    """A finite planar triangulated 2-complex.

    vertices: id -> exact coordinates, with an `on_frontier` flag marking
    the truncation boundary of the window.
    triangles: id -> positively oriented vertex triple.
    edges: derived, unordered vertex pair -> incident triangle ids.
    """

    def __init__(self, vertices, triangles, *, validate=True):
        # vertices: iterable of (id, x, y) or (id, x, y, frontier)
        num = {}
        frontier = set()
        fracs = {}
        for item in vertices:
            if len(item) == 3:
                vid, x, y = item
                fr = False
            else:
                vid, x, y, fr = item
            if vid in fracs:
                raise ComplexError(f"duplicate vertex id {vid}")
            fracs[vid] = (_to_fraction(x), _to_fraction(y))
            if fr:
                frontier.add(vid)
        scale = 1
        for (x, y) in fracs.values():
            scale = scale * x.denominator // math.gcd(scale, x.denominator)
            scale = scale * y.denominator // math.gcd(scale, y.denominator)
            if scale > _FLOAT_SCALE:
                raise ComplexError("coordinate denominators too large")
        for vid, (x, y) in fracs.items():
            num[vid] = (int(x * scale), int(y * scale))

        tris = {}
        for tid, a, b, c in ((t[0],) + tuple(t[1]) if len(t) == 2 else tuple(t)
                             for t in triangles):
            if tid in tris:
                raise ComplexError(f"duplicate triangle id {tid}")
            tris[tid] = (a, b, c)
        self._init_tables(num, scale, frontier, tris,
                          carrier={v: ('v', v) for v in num},
                          ancestor={t: t for t in tris},
                          parent=None, parent_tri=None, parent_children=None,
                          depth=0, validate=validate)

    # internal constructor used by subdivision
    @classmethod
    def _raw(cls, num, scale, frontier, tris, carrier, ancestor,
             parent, parent_tri, parent_children, depth):
        obj = cls.__new__(cls)
        obj._init_tables(num, scale, frontier, tris, carrier, ancestor,
                         parent, parent_tri, parent_children, depth,
                         validate=False)
        return obj

    def _init_tables(self, num, scale, frontier, tris, carrier, ancestor,
                     parent, parent_tri, parent_children, depth, validate):
        self._num = num
        self._scale = scale
        self.on_frontier = frontier
        self.triangles = tris
        self.carrier = carrier          # vertex id -> parent-relative carrier
        self.ancestor = ancestor        # triangle id -> root triangle id
        self.parent = parent
        self.parent_tri = parent_tri    # triangle id -> parent triangle id
        self.parent_children = parent_children  # parent tri -> child ids
        self.depth = depth
        self.root = self if parent is None else parent.root
        self._coord_cache = {}
        self._sd_next = None
        self._carrier_lift = {}

        edges = {}
        for t, (a, b, c) in tris.items():
            if validate and (a == b or b == c or a == c):
                raise ComplexError(f"triangle {t} has repeated vertices")
            for u, v in ((a, b), (b, c), (c, a)):
                edges.setdefault(_edge_key(u, v), []).append(t)
        self.edges = {k: tuple(v) for k, v in edges.items()}

        if validate:
            seen = set()
            for t, (a, b, c) in tris.items():
                for v in (a, b, c):
                    if v not in num:
                        raise ComplexError(f"triangle {t} uses unknown vertex {v}")
                key = frozenset((a, b, c))
                if key in seen:
                    raise ComplexError(f"two triangles share vertex set {set(key)}")
                seen.add(key)
                if self.orientation(t) <= 0:
                    raise ComplexError(
                        f"triangle {t} degenerate or negatively oriented")
            for e, ts in self.edges.items():
                if len(ts) > 2:
                    raise ComplexError(f"edge {e} incident to {len(ts)} triangles")

    # ---------------------------------------------------------------- basics

    def coord(self, v):
        c = self._coord_cache.get(v)
        if c is None:
            xn, yn = self._num[v]
            c = (Fraction(xn, self._scale), Fraction(yn, self._scale))
            self._coord_cache[v] = c
        return c

    def coord_float(self, v):
        xn, yn = self._num[v]
        return (xn / self._scale, yn / self._scale)

    def orientation(self, t):
        """Sign of twice the signed area of triangle t (exact)."""
        a, b, c = self.triangles[t]
        xa, ya = self._num[a]
        xb, yb = self._num[b]
        xc, yc = self._num[c]
        d = (xb - xa) * (yc - ya) - (yb - ya) * (xc - xa)
        return (d > 0) - (d < 0)

    def triangle_area(self, t):
        a, b, c = self.triangles[t]
        xa, ya = self._num[a]
        xb, yb = self._num[b]
        xc, yc = self._num[c]
        d = (xb - xa) * (yc - ya) - (yb - ya) * (xc - xa)
        return Fraction(d, 2 * self._scale * self._scale)

    def boundary_edges(self):
        """Edges incident to exactly one triangle."""
        return {e for e, ts in self.edges.items() if len(ts) == 1}

    def frontier_edges(self):
        """Boundary edges whose endpoints are both flagged as frontier."""
        return {e for e in self.boundary_edges()
                if e[0] in self.on_frontier and e[1] in self.on_frontier}

    def vertex_count(self):
        return len(self._num)

    def support_area(self):
        return sum((self.triangle_area(t) for t in self.triangles), Fraction(0))

    def vertex_set(self):
        return set(self._num)

    def coords_exact(self):
        return {v: self.coord(v) for v in self._num}

    # ------------------------------------------------------------- carriers

    def carrier_at(self, v, target):
        """Carrier of vertex v relative to ancestor complex `target`."""
        if target is self:
            return ('v', v)
        key = (v, id(target))
        got = self._carrier_lift.get(key)
        if got is not None:
            return got
        kind, val = self.carrier[v]
        par = self.parent
        if par is None:
            raise ComplexError("carrier_at: target is not an ancestor")
        if kind == 'v':
            res = par.carrier_at(val, target)
        elif kind == 't':
            res = ('t', _ancestor_at(par, val, target))
        else:  # 'e': edge of the parent
            a, b = val
            ca = par.carrier_at(a, target)
            cb = par.carrier_at(b, target)
            res = _combine_edge_carrier(ca, cb, target,
                                        _ancestor_at(par, par.edges[val][0], target))
        self._carrier_lift[key] = res
        return res


def _ancestor_at(C, t, target):
    """Triangle of `target` containing triangle t of descendant complex C."""
    while C is not target:
        t = C.parent_tri[t]
        C = C.parent
    return t


def _combine_edge_carrier(ca, cb, target, fallback_tri):
    """Carrier of the open segment between two carried points."""
    if ca[0] == 't' or cb[0] == 't':
        return ('t', fallback_tri)
    if ca[0] == 'e' and cb[0] == 'e':
        return ca if ca[1] == cb[1] else ('t', fallback_tri)
    if ca[0] == 'e':
        return ca if cb[1] in ca[1] else ('t', fallback_tri)
    if cb[0] == 'e':
        return cb if ca[1] in cb[1] else ('t', fallback_tri)
    e = _edge_key(ca[1], cb[1])
    if e in target.edges:
        return ('e', e)
    return ('t', fallback_tri)


# ------------------------------------------------------------------ regions


@dataclass(frozen=True)
class Region:
    """A set of triangles of a host complex (one leaf window)."""
    host: TriangulatedComplex
    triangles: frozenset
    leaf_index: Optional[object] = None

    def __post_init__(self):
        object.__setattr__(self, 'triangles', frozenset(self.triangles))
        bad = self.triangles - set(self.host.triangles)
        if bad:
            raise ComplexError(f"region triangles not in host: {sorted(bad)[:5]}")

    def __len__(self):
        return len(self.triangles)

    def replace(self, triangles):
        return Region(self.host, frozenset(triangles), self.leaf_index)


def region_components(region):
    """Connected components of a region in the dual graph (edge adjacency)."""
    host = region.host
    tris = region.triangles
    seen = set()
    comps = []
    for start in sorted(tris):
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            t = stack.pop()
            comp.append(t)
            a, b, c = host.triangles[t]
            for u, v in ((a, b), (b, c), (c, a)):
                for t2 in host.edges[_edge_key(u, v)]:
                    if t2 in tris and t2 not in seen:
                        seen.add(t2)
                        stack.append(t2)
        comps.append(frozenset(comp))
    return comps


def region_boundary_edges(region):
    """Edges incident to exactly one triangle of the region (host-relative)."""
    count = {}
    host = region.host
    for t in region.triangles:
        a, b, c = host.triangles[t]
        for u, v in ((a, b), (b, c), (c, a)):
            k = _edge_key(u, v)
            count[k] = count.get(k, 0) + 1
    return {e for e, n in count.items() if n == 1}


def boundary(region):
    """Oriented boundary cycles of a region, as lists of vertex ids.

    Cycles are walked through corner fans, so a pinch vertex yields two
    cycles meeting at that vertex.  Raises on non-manifold directed edges.
    """
    if not region.triangles:
        raise ComplexError("boundary of empty region")
    host = region.host
    dir_tri = {}
    for t in sorted(region.triangles):
        a, b, c = host.triangles[t]
        for u, v in ((a, b), (b, c), (c, a)):
            if (u, v) in dir_tri:
                raise ComplexError(f"non-manifold directed edge {(u, v)}")
            dir_tri[(u, v)] = t

    def third(t, u, v):
        a, b, c = host.triangles[t]
        return a + b + c - u - v

    def next_edge(u, v):
        t = dir_tri[(u, v)]
        w = third(t, u, v)
        while (w, v) in dir_tri:
            t = dir_tri[(w, v)]
            w = third(t, w, v)
        return (v, w)

    bnd = sorted((u, v) for (u, v) in dir_tri if (v, u) not in dir_tri)
    visited = set()
    cycles = []
    for start in bnd:
        if start in visited:
            continue
        cyc = []
        e = start
        while e not in visited:
            visited.add(e)
            cyc.append(e[0])
            e = next_edge(*e)
        cycles.append(cyc)
    return cycles


def region_euler(region):
    """(V - E + F, number of boundary cycles) of the region subcomplex."""
    host = region.host
    verts = set()
    edges = set()
    for t in region.triangles:
        a, b, c = host.triangles[t]
        verts.update((a, b, c))
        edges.update(_edge_key(*p) for p in ((a, b), (b, c), (c, a)))
    chi = len(verts) - len(edges) + len(region.triangles)
    ncyc = len(boundary(region)) if region.triangles and region_boundary_edges(region) else 0
    return chi, ncyc


def is_disk(region):
    if not region.triangles:
        return False
    if len(region_components(region)) != 1:
        return False
    chi, ncyc = region_euler(region)
    return chi == 1 and ncyc == 1


def region_touches_frontier(region):
    host = region.host
    bedges = host.boundary_edges()
    bverts = {v for e in bedges for v in e} | host.on_frontier
    for t in region.triangles:
        if any(v in bverts for v in host.triangles[t]):
            return True
    return False


def vol(region):
    """Triangle count per connected component."""
    return [len(c) for c in region_components(region)]


# ------------------------------------------------------------- construction


def build_complex(vertices, triangles):
    """Validated complex from raw vertex/triangle tables."""
    return TriangulatedComplex(vertices, triangles)


def subdivide_once(C):
    """One barycentric subdivision; caches the result on C."""
    if C._sd_next is not None:
        return C._sd_next
    scale = C._scale * 6
    num = {v: (6 * x, 6 * y) for v, (x, y) in C._num.items()}
    carrier = {v: ('v', v) for v in C._num}
    frontier = set(C.on_frontier)
    front_edges = C.frontier_edges()
    next_v = max(C._num) + 1 if C._num else 0
    mid = {}
    for e in sorted(C.edges):
        a, b = e
        xa, ya = C._num[a]
        xb, yb = C._num[b]
        m = next_v
        next_v += 1
        mid[e] = m
        num[m] = (3 * (xa + xb), 3 * (ya + yb))
        carrier[m] = ('e', e)
        if e in front_edges:
            frontier.add(m)
    tris = {}
    ancestor = {}
    parent_tri = {}
    children = {}
    nt = 0
    for t in sorted(C.triangles):
        a, b, c = C.triangles[t]
        xa, ya = C._num[a]
        xb, yb = C._num[b]
        xc, yc = C._num[c]
        g = next_v
        next_v += 1
        num[g] = (2 * (xa + xb + xc), 2 * (ya + yb + yc))
        carrier[g] = ('t', t)
        mab = mid[_edge_key(a, b)]
        mbc = mid[_edge_key(b, c)]
        mca = mid[_edge_key(c, a)]
        anc = C.ancestor[t]
        ch = []
        for p, q in ((a, mab), (mab, b), (b, mbc), (mbc, c), (c, mca), (mca, a)):
            tris[nt] = (p, q, g)
            ancestor[nt] = anc
            parent_tri[nt] = t
            ch.append(nt)
            nt += 1
        children[t] = tuple(ch)
    out = TriangulatedComplex._raw(num, scale, frontier, tris, carrier,
                                   ancestor, C, parent_tri, children,
                                   C.depth + 1)
    C._sd_next = out
    return out


def subdivision(C, n):
    """The n-th barycentric subdivision sd_n(C) (chain cached on C)."""
    if n < 0:
        raise ComplexError("negative subdivision depth")
    out = C
    for _ in range(n):
        out = subdivide_once(out)
    return out


def subdivide(C, n):
    """n-fold barycentric subdivision sd_n(C)."""
    return subdivision(C, n)


def descend_triangles(tris, src, dst):
    """Map triangles of ancestor complex `src` to all their descendants in `dst`."""
    chain = []
    c = dst
    while c is not src:
        chain.append(c)
        c = c.parent
        if c is None:
            raise ComplexError("descend_triangles: src is not an ancestor of dst")
    out = set(tris)
    for level in reversed(chain):
        nxt = set()
        for t in out:
            nxt.update(level.parent_children[t])
        out = nxt
    return out


def descend_region(region, dst):
    return Region(dst, descend_triangles(region.triangles, region.host, dst),
                  region.leaf_index)


# ----------------------------------------------------------- star / retract


def _closure_simplices(C, A):
    """Normalize a simplex set A of complex C into closed vertex/edge/triangle
    sets, plus exact points."""
    V, E, T, P = set(), set(), set(), []
    for item in A:
        if isinstance(item, int):
            item = ('v', item)
        kind, val = item
        if kind == 'v':
            V.add(val)
        elif kind == 'e':
            e = _edge_key(*val)
            if e not in C.edges:
                raise ComplexError(f"unknown edge {e}")
            E.add(e)
            V.update(e)
        elif kind == 't':
            a, b, c = C.triangles[val]
            T.add(val)
            V.update((a, b, c))
            E.update(_edge_key(*p) for p in ((a, b), (b, c), (c, a)))
        elif kind == 'p':
            P.append((_to_fraction(val[0]), _to_fraction(val[1])))
        else:
            raise ComplexError(f"unknown simplex kind {kind}")
    return V, E, T, P


def _orient_pts(p, q, r):
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (d > 0) - (d < 0)


def _triangle_contains(C, t, p):
    a, b, c = (C.coord(v) for v in C.triangles[t])
    return (_orient_pts(a, b, p) >= 0 and _orient_pts(b, c, p) >= 0
            and _orient_pts(c, a, p) >= 0)


def star(C, A, n):
    """Region of sd_n(C) triangles whose closure meets A.

    A is an iterable of vertex ids or tagged simplices ('v', id),
    ('e', (a, b)), ('t', id), ('p', (x, y)).
    """
    V, E, T, P = _closure_simplices(C, A)
    D = subdivision(C, n)
    out = set()
    if V or E or T:
        for t in D.triangles:
            if D.ancestor[t] in T:
                out.add(t)
                continue
            for v in D.triangles[t]:
                kind, val = D.carrier_at(v, C)
                if (kind == 'v' and val in V) or (kind == 'e' and val in E):
                    out.add(t)
                    break
    for p in P:
        roots = [t for t in C.triangles if _triangle_contains(C, t, p)]
        for t in D.triangles:
            if D.ancestor[t] in roots and _triangle_contains(D, t, p):
                out.add(t)
    return Region(D, out)


def region_boundary_simplices(region):
    """Closed boundary of a region: its frontier edges inside the host plus
    window-frontier edges, with their endpoints."""
    E = region_boundary_edges(region)
    V = {v for e in E for v in e}
    return V, E


def retract(region, n):
    """ret_n: triangles of sd_n(region) whose closure avoids the region
    boundary (including window truncation edges)."""
    host = region.host
    D = subdivision(host, n)
    if not region.triangles:
        return Region(D, frozenset())
    V, E = region_boundary_simplices(region)
    keep = set()
    for t in descend_triangles(region.triangles, host, D):
        ok = True
        for v in D.triangles[t]:
            kind, val = D.carrier_at(v, host)
            if (kind == 'v' and val in V) or (kind == 'e' and val in E):
                ok = False
                break
        if ok:
            keep.add(t)
    return Region(D, keep)


def region_in_interior(inner, outer):
    """True iff support(inner) is contained in the interior of support(outer).

    `outer` must live on a complex at depth >= inner's, in the same tower.
    """
    if not inner.triangles:
        return True
    tris = descend_triangles(inner.triangles, inner.host, outer.host)
    if not tris <= outer.triangles:
        return False
    V, _E = region_boundary_simplices(outer)
    for t in tris:
        if any(v in V for v in outer.host.triangles[t]):
            return False
    return True


# ------------------------------------------------------------ leaf classes


def classify_leaf(C, closed=False):
    """Window-level trichotomy by Euler characteristic and boundary cycles."""
    full = Region(C, frozenset(C.triangles))
    if len(region_components(full)) != 1:
        raise ComplexError("classify_leaf: complex not connected")
    chi = C.vertex_count() - len(C.edges) + len(C.triangles)
    ncyc = len(boundary(full)) if C.boundary_edges() else 0
    if chi == 1 and ncyc == 1:
        return 'disk'
    if chi == 0 and ncyc == 2:
        return 'annulus'
    if chi == 0 and ncyc == 0:
        return 'torus'
    return 'other'


# --------------------------------------------------- triangulation of cover


def triangulate_from_cover(centers, radii, window):
    """Triangulate a flat rectangular window from a covering family of disks.

    Straight segments join the centers of overlapping disks; the cells of
    the resulting arrangement (clipped to the window) are triangulated by
    joining each cell's barycenter to its boundary vertices.
    """
    from shapely.geometry import Point, Polygon, LineString, box
    from shapely.ops import unary_union, polygonize

    if len(centers) != len(radii):
        raise ComplexError("centers and radii length mismatch")
    if any(r <= 0 for r in radii):
        raise ComplexError("radii must be positive")
    xmin, ymin, xmax, ymax = window
    win = box(xmin, ymin, xmax, ymax)
    disks = [Point(c).buffer(r, quad_segs=64) for c, r in zip(centers, radii)]
    gap = win.difference(unary_union(disks))
    if gap.area > 1e-9:
        raise CoverGapError("disks do not cover the window")

    lines = [win.exterior]
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            dx = centers[i][0] - centers[j][0]
            dy = centers[i][1] - centers[j][1]
            if dx * dx + dy * dy < (radii[i] + radii[j]) ** 2:
                seg = LineString([centers[i], centers[j]]).intersection(win)
                if not seg.is_empty and seg.length > 0:
                    lines.append(seg)
    cells = [p for p in polygonize(unary_union(lines))
             if p.representative_point().within(win)]
    if not cells:
        raise ComplexError("no cells produced")

    quant = 1 << 32

    def key(x, y):
        return (round(x * quant), round(y * quant))

    vid_of = {}
    vertices = []

    def get_vertex(x, y):
        k = key(x, y)
        if k not in vid_of:
            vid = len(vertices)
            vid_of[k] = vid
            fr = (abs(x - xmin) < 1e-9 or abs(x - xmax) < 1e-9
                  or abs(y - ymin) < 1e-9 or abs(y - ymax) < 1e-9)
            vertices.append((vid, Fraction(k[0], quant), Fraction(k[1], quant), fr))
        return vid_of[k]

    triangles = []
    for cell in sorted(cells, key=lambda p: (p.centroid.x, p.centroid.y)):
        ring = list(cell.exterior.coords)[:-1]
        if Polygon(ring).exterior.is_ccw is False:
            ring.reverse()
        if len(ring) < 3 or cell.area < 1e-12:
            raise ComplexError("degenerate cell")
        gx, gy = cell.centroid.x, cell.centroid.y
        g = get_vertex(gx, gy)
        ids = [get_vertex(x, y) for x, y in ring]
        for i in range(len(ids)):
            a, b = ids[i], ids[(i + 1) % len(ids)]
            if a == b:
                continue
            pa = vertices[a][1:3]
            pb = vertices[b][1:3]
            pg = vertices[g][1:3]
            if _orient_pts(pa, pb, pg) <= 0:
                raise ComplexError("degenerate cell: barycenter fan failed")
            triangles.append((len(triangles), (a, b, g)))
    return TriangulatedComplex(vertices, [(t, v[0], v[1], v[2])
                                          for t, v in triangles])
