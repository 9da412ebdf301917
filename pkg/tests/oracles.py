"""Independent brute-force oracles used by the test suite.

These deliberately recompute everything from first principles (point-set
scans, exhaustive search) rather than reusing the library's fast paths.
"""

from fractions import Fraction

from lamcover.complexes import _edge_key


def skeleton_oracle(R, window):
    """sq^1 by direct edge scan; sq^0 as all endpoints."""
    sq1 = set()
    for e, ts in window.edges.items():
        if len(ts) == 1 or R.class_of[ts[0]] != R.class_of[ts[1]]:
            sq1.add(e)
    sq0 = {v for e in sq1 for v in e}
    return sq0, sq1


def interior_oracle(R, window):
    """Triangles whose closed point set is disjoint from |sq^1|, checked by
    segment/triangle intersection tests.  Coordinates are taken as floats,
    which is exact on the small-integer grid-window coordinates this oracle
    is used with; a bounding-box pre-test prunes far-apart pairs."""
    _sq0, sq1 = skeleton_oracle(R, window)
    segs = []
    for a, b in sq1:
        p, q = window.coord_float(a), window.coord_float(b)
        box = (min(p[0], q[0]), min(p[1], q[1]),
               max(p[0], q[0]), max(p[1], q[1]))
        segs.append((p, q, box))
    out = set()
    for t, vs in window.triangles.items():
        tri = [window.coord_float(v) for v in vs]
        xs = [x for x, _ in tri]
        ys = [y for _, y in tri]
        tb = (min(xs), min(ys), max(xs), max(ys))
        hit = any(tb[0] <= b[2] and b[0] <= tb[2]
                  and tb[1] <= b[3] and b[1] <= tb[3]
                  and _seg_meets_triangle(p, q, tri)
                  for p, q, b in segs)
        if not hit:
            out.add(t)
    return out


def _orient(p, q, r):
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (d > 0) - (d < 0)


def _point_in_closed_triangle(p, tri):
    a, b, c = tri
    return _orient(a, b, p) >= 0 and _orient(b, c, p) >= 0 and _orient(c, a, p) >= 0


def _on_segment(p, q, r):
    # r collinear with pq and within the box
    if _orient(p, q, r) != 0:
        return False
    return (min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]))


def _segments_intersect(p1, q1, p2, q2):
    d1 = _orient(p2, q2, p1)
    d2 = _orient(p2, q2, q1)
    d3 = _orient(p1, q1, p2)
    d4 = _orient(p1, q1, q2)
    if ((d1 > 0) != (d2 > 0) and d1 != 0 and d2 != 0
            and (d3 > 0) != (d4 > 0) and d3 != 0 and d4 != 0):
        return True
    return (_on_segment(p2, q2, p1) or _on_segment(p2, q2, q1)
            or _on_segment(p1, q1, p2) or _on_segment(p1, q1, q2))


def _seg_meets_triangle(p, q, tri):
    if _point_in_closed_triangle(p, tri) or _point_in_closed_triangle(q, tri):
        return True
    a, b, c = tri
    return any(_segments_intersect(p, q, u, v)
               for u, v in ((a, b), (b, c), (c, a)))


def flood_fill_envelope_oracle(region):
    """Envelope by BFS flood fill of the complement from frontier-touching
    triangles (recomputed locally)."""
    host = region.host
    bverts = {v for e in host.edges if len(host.edges[e]) == 1 for v in e}
    bverts |= host.on_frontier
    complement = set(host.triangles) - region.triangles
    seeds = [t for t in complement
             if any(v in bverts for v in host.triangles[t])]
    seen = set(seeds)
    queue = list(seeds)
    while queue:
        t = queue.pop()
        a, b, c = host.triangles[t]
        for u, v in ((a, b), (b, c), (c, a)):
            for t2 in host.edges[_edge_key(u, v)]:
                if t2 in complement and t2 not in seen:
                    seen.add(t2)
                    queue.append(t2)
    return region.triangles | (complement - seen)


def class_cardinality_bfs_oracle(R, x):
    """|R(x)| by breadth-first search over the class graph."""
    target = R.class_of[x]
    seen = {x}
    queue = [x]
    while queue:
        y = queue.pop()
        for z in R.universe:
            if z not in seen and R.class_of[z] == target:
                seen.add(z)
                queue.append(z)
    return len(seen)


def dart_digraph(C, labels=None):
    """Oriented labeled complex as a dart digraph for isomorphism testing.

    Each triangle contributes three darts (its directed edges in positive
    order); 'next' arcs rotate within a triangle, 'twin' arcs cross to the
    adjacent triangle.  Node attributes carry the triangle label and the
    endpoint frontier flags, so digraph isomorphism (respecting arc kinds
    and node attributes) is exactly labeled orientation-preserving
    simplicial isomorphism.
    """
    import networkx as nx
    labels = labels or {}
    G = nx.DiGraph()
    owner = {}
    for t, (a, b, c) in C.triangles.items():
        for i, (u, v) in enumerate(((a, b), (b, c), (c, a))):
            G.add_node((t, i), label=str(labels.get(t)),
                       flags=(u in C.on_frontier, v in C.on_frontier))
            owner[(u, v)] = (t, i)
    for t in C.triangles:
        for i in range(3):
            G.add_edge((t, i), (t, (i + 1) % 3), kind='next')
    for (u, v), d in owner.items():
        if (v, u) in owner:
            G.add_edge(d, owner[(v, u)], kind='twin')
    return G


def labeled_isomorphic_oracle(C1, C2, labels1=None, labels2=None):
    import networkx as nx
    from networkx.algorithms import isomorphism as iso
    m = iso.DiGraphMatcher(
        dart_digraph(C1, labels1), dart_digraph(C2, labels2),
        node_match=iso.categorical_node_match(['label', 'flags'], [None, None]),
        edge_match=iso.categorical_edge_match('kind', None))
    return m.is_isomorphic()


def triangle_support(C, tris):
    """Exact multiset-free support area of a triangle set."""
    return sum((C.triangle_area(t) for t in tris), Fraction(0))
