"""Instance generators: grid windows, block filtrations, suspensions,
linear-foliation windows."""

from __future__ import annotations

import random
from typing import Dict, List, Sequence, Tuple

from .complexes import Region, TriangulatedComplex
from .relations import FinitePartition, Filtration


def grid_window(radius: int) -> TriangulatedComplex:
    """G_r: integer grid on [-r, r]^2, each unit square split along the
    (i,j)-(i+1,j+1) diagonal.  Perimeter vertices are flagged frontier."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    r = radius
    w = 2 * r + 1

    def vid(i, j):
        return (i + r) * w + (j + r)

    vertices = []
    for i in range(-r, r + 1):
        for j in range(-r, r + 1):
            fr = abs(i) == r or abs(j) == r
            vertices.append((vid(i, j), i, j, fr))
    triangles = []
    t = 0
    for i in range(-r, r):
        for j in range(-r, r):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            triangles.append((t, a, b, c))
            triangles.append((t + 1, a, c, d))
            t += 2
    C = TriangulatedComplex(vertices, triangles)
    C.grid_radius = radius
    return C


def grid_cell(window: TriangulatedComplex, t: int) -> Tuple[int, int]:
    """Lattice cell (i, j) of a grid-window triangle."""
    r = window.grid_radius
    cell = t // 2
    i = cell // (2 * r) - r
    j = cell % (2 * r) - r
    return i, j


def grid_subregion(window: TriangulatedComplex, radius: int) -> Region:
    """The G_radius block centered in a larger grid window."""
    r = window.grid_radius
    if radius > r:
        raise ValueError("subregion larger than window")
    tris = set()
    for t in window.triangles:
        i, j = grid_cell(window, t)
        if -radius <= i < radius and -radius <= j < radius:
            tris.add(t)
    return Region(window, tris)


def block_partition(window: TriangulatedComplex, block: int) -> FinitePartition:
    """Partition of a grid window's triangles into block x block cell blocks."""
    r = window.grid_radius
    class_of = {}
    for t in window.triangles:
        i, j = grid_cell(window, t)
        class_of[t] = ((i + r) // block, (j + r) // block)
    return FinitePartition(set(window.triangles), class_of)


def block_filtration(window: TriangulatedComplex, blocks: Sequence[int]) -> Filtration:
    """Filtration by increasing block sizes (each must divide the next)."""
    steps = [block_partition(window, b) for b in blocks]
    return Filtration(steps)


def random_partition(window: TriangulatedComplex, rng: random.Random,
                     n_classes: int) -> FinitePartition:
    """Random connected-ish partition grown by seeded flood fill."""
    from .complexes import _edge_key
    tris = sorted(window.triangles)
    seeds = rng.sample(tris, min(n_classes, len(tris)))
    class_of = {s: i for i, s in enumerate(seeds)}
    frontier_list = list(class_of)
    while len(class_of) < len(tris):
        t = frontier_list[rng.randrange(len(frontier_list))]
        a, b, c = window.triangles[t]
        nbrs = [t2 for u, v in ((a, b), (b, c), (c, a))
                for t2 in window.edges[_edge_key(u, v)]
                if t2 != t and t2 not in class_of]
        if not nbrs:
            frontier_list.remove(t)
            if not frontier_list:
                for t2 in tris:
                    if t2 not in class_of:
                        class_of[t2] = rng.randrange(len(seeds))
            continue
        t2 = rng.choice(nbrs)
        class_of[t2] = class_of[t]
        frontier_list.append(t2)
    return FinitePartition(set(tris), class_of)


def random_region(window: TriangulatedComplex, rng: random.Random,
                  n_tris: int) -> Region:
    """Random region grown by flood fill from a few seeds."""
    from .complexes import _edge_key
    tris = sorted(window.triangles)
    n_tris = min(n_tris, len(tris))
    seeds = rng.sample(tris, max(1, min(4, n_tris)))
    chosen = set(seeds)
    frontier_list = list(chosen)
    while len(chosen) < n_tris and frontier_list:
        t = frontier_list[rng.randrange(len(frontier_list))]
        a, b, c = window.triangles[t]
        nbrs = [t2 for u, v in ((a, b), (b, c), (c, a))
                for t2 in window.edges[_edge_key(u, v)]
                if t2 not in chosen]
        if not nbrs:
            frontier_list.remove(t)
            continue
        t2 = rng.choice(nbrs)
        chosen.add(t2)
        frontier_list.append(t2)
    return Region(window, chosen)


def torus_grid(n: int) -> TriangulatedComplex:
    """Closed n x n periodic grid torus (no frontier)."""
    if n < 3:
        raise ValueError("need n >= 3 for a simplicial torus grid")

    def vid(i, j):
        return (i % n) * n + (j % n)

    vertices = [(vid(i, j), i, j) for i in range(n) for j in range(n)]
    # coordinates only used for ids; periodic gluing breaks the planar
    # embedding, so build with validation off via a planar immersion trick:
    # place vertices on the fundamental square and accept the wrap triangles.
    tris = []
    t = 0
    for i in range(n):
        for j in range(n):
            tris.append((t, vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            tris.append((t + 1, vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)))
            t += 2
    # wrap triangles have inverted planar orientation; build unvalidated
    C = TriangulatedComplex.__new__(TriangulatedComplex)
    num = {v: (x, y) for v, x, y in vertices}
    C._init_tables(num, 1, set(), {tid: (a, b, c) for tid, a, b, c in tris},
                   carrier={v: ('v', v) for v in num},
                   ancestor={tid: tid for tid, *_ in tris},
                   parent=None, parent_tri=None, parent_children=None,
                   depth=0, validate=False)
    return C
