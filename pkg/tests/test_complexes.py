import random
from fractions import Fraction

import pytest

from lamcover.complexes import (ComplexError, CoverGapError, Region, boundary,
                                build_complex, classify_leaf, is_disk,
                                region_components, region_in_interior,
                                retract, star, subdivide, subdivision,
                                triangulate_from_cover)
from lamcover.generators import (grid_window, grid_subregion, random_region,
                                 torus_grid)
from oracles import triangle_support


def full(C):
    return Region(C, set(C.triangles))


class TestBuildComplex:
    def test_grid_disk_counts(self, g1):
        assert len(g1.triangles) == 8
        assert len(g1.edges) == 16

    def test_single_triangle(self):
        C = build_complex([(0, 0, 0), (1, 1, 0), (2, 0, 1)], [(0, 0, 1, 2)])
        assert len(C.triangles) == 1
        assert len(C.edges) == 3

    def test_clockwise_rejected(self):
        with pytest.raises(ComplexError):
            build_complex([(0, 0, 0), (1, 1, 0), (2, 0, 1)], [(0, 0, 2, 1)])

    def test_degenerate_rejected(self):
        with pytest.raises(ComplexError):
            build_complex([(0, 0, 0), (1, 1, 0), (2, 2, 0)], [(0, 0, 1, 2)])

    def test_duplicate_vertex_id(self):
        with pytest.raises(ComplexError):
            build_complex([(0, 0, 0), (0, 1, 0), (2, 0, 1)], [(0, 0, 0, 2)])

    def test_duplicate_triangle_set(self):
        with pytest.raises(ComplexError):
            build_complex(
                [(0, 0, 0), (1, 1, 0), (2, 0, 1)],
                [(0, 0, 1, 2), (1, 1, 2, 0)])

    def test_overfull_edge(self):
        verts = [(0, 0, 0), (1, 1, 0), (2, 0, 1), (3, 1, 1), (4, -1, 1)]
        with pytest.raises(ComplexError):
            build_complex(verts, [(0, 0, 1, 2), (1, 1, 3, 2), (2, 0, 2, 4),
                                  (3, 2, 3, 4)])


class TestSubdivide:
    def test_zero_is_identity(self, g1):
        assert subdivide(g1, 0) is g1

    def test_single_triangle_once(self):
        C = build_complex([(0, 0, 0), (1, 1, 0), (2, 0, 1)], [(0, 0, 1, 2)])
        S = subdivide(C, 1)
        assert len(S.triangles) == 6
        assert S.vertex_count() == 7

    def test_counts_depth2(self, g1):
        assert len(subdivide(g1, 2).triangles) == 8 * 36

    def test_support_preserved(self, rng):
        for _ in range(5):
            C = random_region(grid_window(3), rng, rng.randrange(4, 20))
            # treat the region's subcomplex support through the window itself
            W = C.host
            for n in (1, 2):
                S = subdivide(W, n)
                assert triangle_support(S, S.triangles) == \
                    triangle_support(W, W.triangles)
                base_pts = set(W.coords_exact().values())
                sub_pts = set(S.coords_exact().values())
                assert base_pts <= sub_pts

    def test_orientation_positive(self, g2):
        S = subdivide(g2, 2)
        assert all(S.orientation(t) > 0 for t in S.triangles)


class TestStar:
    def test_empty(self, g2):
        assert star(g2, [], 1).triangles == frozenset()

    def test_interior_vertex_six_triangles(self, g2):
        # vertex at the origin of G_2
        center = (2 * 5) + 2
        assert g2.coord(center) == (0, 0)
        st = star(g2, [center], 0)
        assert len(st.triangles) == 6

    def test_whole_support(self, g2):
        A = [('t', t) for t in g2.triangles]
        st = star(g2, A, 0)
        assert st.triangles == frozenset(g2.triangles)

    def test_monotone_in_depth(self, g2, rng):
        center = (2 * 5) + 2
        s0 = star(g2, [center], 0)
        s1 = star(g2, [center], 1)
        # support shrinks: compare exact areas
        a0 = triangle_support(s0.host, s0.triangles)
        a1 = triangle_support(s1.host, s1.triangles)
        assert a1 <= a0

    def test_point_star(self, g1):
        st = star(g1, [('p', (Fraction(1, 3), Fraction(1, 5)))], 0)
        assert len(st.triangles) == 1


class TestRetract:
    def test_ret0_g1_empty(self, g1):
        assert retract(full(g1), 0).triangles == frozenset()

    def test_ret0_g2_inner_block(self, g2):
        r = retract(full(g2), 0)
        assert r.triangles == grid_subregion(g2, 1).triangles

    def test_ret_empty(self, g2):
        assert retract(Region(g2, set()), 2).triangles == frozenset()

    def test_tower_nesting(self, g4, rng):
        for _ in range(5):
            om = random_region(g4, rng, rng.randrange(8, 60))
            prev = None
            for n in range(3):
                cur = retract(om, n)
                if prev is not None:
                    assert region_in_interior(prev, cur)
                prev = cur

    def test_tower_exhausts_interior(self, g2):
        # every original triangle's barycenter is eventually covered
        om = full(g2)
        r3 = retract(om, 3)
        covered = {r3.host.ancestor[t] for t in r3.triangles}
        # triangles away from the frontier have their barycenter covered
        inner = grid_subregion(g2, 1).triangles
        assert inner <= covered


class TestBoundary:
    def test_g1_cycle(self, g1):
        cycles = boundary(full(g1))
        assert len(cycles) == 1
        assert len(cycles[0]) == 8

    def test_annulus_two_cycles(self, g2):
        ann = Region(g2, full(g2).triangles - grid_subregion(g2, 1).triangles)
        cycles = sorted(len(c) for c in boundary(ann))
        assert cycles == [8, 16]

    def test_single_triangle(self):
        C = build_complex([(0, 0, 0), (1, 1, 0), (2, 0, 1)], [(0, 0, 1, 2)])
        cycles = boundary(full(C))
        assert len(cycles) == 1 and len(cycles[0]) == 3

    def test_empty_region_raises(self, g1):
        with pytest.raises(ComplexError):
            boundary(Region(g1, set()))


class TestClassifyLeaf:
    def test_disk(self, g2):
        assert classify_leaf(g2) == 'disk'

    def test_annulus(self, g2):
        ann = full(g2).triangles - grid_subregion(g2, 1).triangles
        verts = {v for t in ann for v in g2.triangles[t]}
        sub = build_complex(
            [(v,) + g2.coord(v) + (v in g2.on_frontier,) for v in verts],
            [(t,) + g2.triangles[t] for t in ann])
        assert classify_leaf(sub) == 'annulus'

    def test_torus(self):
        assert classify_leaf(torus_grid(3)) == 'torus'


class TestTriangulateFromCover:
    def test_four_corner_cover(self):
        C = triangulate_from_cover(
            [(0, 0), (1, 0), (1, 1), (0, 1)], [0.8] * 4, (0, 0, 1, 1))
        # four cells around the central crossing, fanned from barycenters
        assert all(C.orientation(t) > 0 for t in C.triangles)
        assert len(C.triangles) == 12
        assert classify_leaf(C) == 'disk'

    def test_single_disk(self):
        C = triangulate_from_cover([(0.5, 0.5)], [2.0], (0, 0, 1, 1))
        # one cell: star triangulation from the window barycenter
        assert len(C.triangles) == 4
        assert classify_leaf(C) == 'disk'

    def test_cover_gap(self):
        with pytest.raises(CoverGapError):
            triangulate_from_cover([(0, 0), (1, 1)], [0.2, 0.2], (0, 0, 1, 1))


class TestRegions:
    def test_components(self, g4):
        reg = Region(g4, {0, 120})
        assert len(region_components(reg)) == 2

    def test_is_disk(self, g2):
        assert is_disk(grid_subregion(g2, 1))
        ann = Region(g2, full(g2).triangles - grid_subregion(g2, 1).triangles)
        assert not is_disk(ann)
