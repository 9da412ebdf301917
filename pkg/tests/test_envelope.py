import random

import pytest

from lamcover.complexes import Region, is_disk, region_components
from lamcover.envelope import (EnvelopeError, envelope, envelope_bounded,
                               envelope_component, envelope_per_leaf,
                               integral_decomposition, strong_filtration)
from lamcover.generators import grid_subregion, grid_window, random_region
from oracles import flood_fill_envelope_oracle


def ring(window, inner, outer):
    """Annulus G_outer - G_inner inside a grid window."""
    return Region(window, grid_subregion(window, outer).triangles
                  - grid_subregion(window, inner).triangles)


class TestEnvelopeComponent:
    def test_solid_block_no_holes(self, g4):
        res = envelope_component(grid_subregion(g4, 1))
        assert res.filled == frozenset()
        assert res.region.triangles == grid_subregion(g4, 1).triangles
        assert res.reliable

    def test_annulus_fills_hole(self, g4):
        res = envelope_component(ring(g4, 1, 2))
        assert res.filled == grid_subregion(g4, 1).triangles
        assert res.region.triangles == grid_subregion(g4, 2).triangles
        assert res.reliable

    def test_single_triangle(self, g2):
        res = envelope_component(Region(g2, {0}))
        assert res.region.triangles == frozenset({0})
        assert res.filled == frozenset()

    def test_empty_raises(self, g2):
        with pytest.raises(EnvelopeError):
            envelope_component(Region(g2, set()))

    def test_disconnected_raises(self, g4):
        with pytest.raises(EnvelopeError):
            envelope_component(Region(g4, {0, 120}))

    def test_output_is_disk(self, g4, rng):
        for _ in range(25):
            om = random_region(g4, rng, rng.randrange(2, 30))
            for comp in region_components(om):
                res = envelope_component(om.replace(comp))
                if res.reliable:
                    assert is_disk(res.region)


class TestEnvelope:
    def test_empty(self, g2):
        res = envelope(Region(g2, set()))
        assert res.region.triangles == frozenset()
        assert res.reliable

    def test_nested_annuli_fill_gap(self, g8):
        B = Region(g8, ring(g8, 1, 2).triangles | ring(g8, 3, 4).triangles)
        res = envelope(B)
        # both holes and the enclosed gap between the annuli get filled
        assert res.region.triangles == grid_subregion(g8, 4).triangles
        assert res.filled == (grid_subregion(g8, 3).triangles
                              - B.triangles) | grid_subregion(g8, 1).triangles

    def test_frontier_flagged_unreliable(self, g2):
        res = envelope(Region(g2, set(g2.triangles)))
        assert not res.reliable

    def test_oracle(self, rng):
        W = grid_window(4)
        for _ in range(60):
            om = random_region(W, rng, rng.randrange(1, 40))
            res = envelope(om)
            assert res.region.triangles == flood_fill_envelope_oracle(om)
            assert res.filled.isdisjoint(om.triangles)
            assert om.triangles <= res.region.triangles

    def test_idempotent(self, rng):
        W = grid_window(4)
        for _ in range(20):
            om = random_region(W, rng, rng.randrange(1, 40))
            res = envelope(om)
            assert envelope(res.region).filled == frozenset()

    def test_monotone(self, rng):
        W = grid_window(4)
        for _ in range(20):
            a = random_region(W, rng, rng.randrange(1, 25))
            b = a.replace(a.triangles
                          | random_region(W, rng, rng.randrange(1, 25)).triangles)
            assert envelope(a).region.triangles <= envelope(b).region.triangles

    def test_disjoint_or_nested(self, rng):
        W = grid_window(6)
        for _ in range(30):
            om = random_region(W, rng, rng.randrange(4, 50))
            comps = region_components(om)
            envs = [envelope(om.replace(c)).region.triangles for c in comps]
            for i in range(len(envs)):
                for j in range(i + 1, len(envs)):
                    a, b = envs[i], envs[j]
                    assert a.isdisjoint(b) or a <= b or b <= a

    def test_per_leaf(self, g2, g4):
        out = envelope_per_leaf([ring(g4, 1, 2), Region(g2, {0})])
        assert out[0].region.triangles == grid_subregion(g4, 2).triangles
        assert out[1].region.triangles == frozenset({0})


class TestIntegralDecomposition:
    def test_empty(self, g2):
        assert integral_decomposition(Region(g2, set())) == []

    def test_non_nested_single_part(self, g8):
        from lamcover.generators import grid_cell
        a = {t for t in g8.triangles
             if -6 <= grid_cell(g8, t)[0] < -4 and -1 <= grid_cell(g8, t)[1] < 1}
        b = {t for t in g8.triangles
             if 4 <= grid_cell(g8, t)[0] < 6 and -1 <= grid_cell(g8, t)[1] < 1}
        parts = integral_decomposition(Region(g8, a | b))
        assert len(parts) == 1
        assert parts[0].triangles == a | b

    def test_two_nested_annuli(self, g8):
        inner, outer = ring(g8, 1, 2), ring(g8, 3, 4)
        parts = integral_decomposition(
            Region(g8, inner.triangles | outer.triangles))
        # the outer annulus's envelope contains the inner one
        assert len(parts) == 2
        assert parts[0].triangles == inner.triangles
        assert parts[1].triangles == outer.triangles

    def test_three_deep_nesting(self, g8):
        rings = [ring(g8, 1, 2), ring(g8, 3, 4), ring(g8, 5, 6)]
        B = Region(g8, set().union(*(r.triangles for r in rings)))
        parts = integral_decomposition(B)
        assert len(parts) == 3
        for k, r in enumerate(rings):
            assert parts[k].triangles == r.triangles

    def test_parts_partition(self, rng):
        W = grid_window(5)
        for _ in range(15):
            om = random_region(W, rng, rng.randrange(4, 40))
            try:
                parts = integral_decomposition(om)
            except EnvelopeError:
                continue  # a component reached the frontier
            union = set().union(*(p.triangles for p in parts))
            assert union == om.triangles
            total = sum(len(p.triangles) for p in parts)
            assert total == len(om.triangles)

    def test_frontier_component_rejected(self, g2):
        with pytest.raises(EnvelopeError):
            integral_decomposition(Region(g2, set(g2.triangles)))


class TestEnvelopeBounded:
    def test_q_zero(self, g4):
        reg = envelope_bounded(grid_subregion(g4, 1), 0)
        assert reg.triangles == frozenset()

    def test_negative_q(self, g4):
        with pytest.raises(EnvelopeError):
            envelope_bounded(grid_subregion(g4, 1), -1)

    def test_annulus_threshold(self, g4):
        # the annulus envelope is the 32-triangle disk G_2
        ann = ring(g4, 1, 2)
        assert envelope_bounded(ann, 31).triangles == frozenset()
        assert envelope_bounded(ann, 32).triangles == \
            grid_subregion(g4, 2).triangles

    def test_single_triangle(self, g2):
        t = min(grid_subregion(g2, 1).triangles)  # away from the frontier
        reg = envelope_bounded(Region(g2, {t}), 1)
        assert reg.triangles == frozenset({t})

    def test_components_are_small_disks(self, rng):
        W = grid_window(5)
        for _ in range(15):
            om = random_region(W, rng, rng.randrange(4, 40))
            q = rng.randrange(1, 40)
            reg = envelope_bounded(om, q)
            for comp in region_components(reg):
                assert len(comp) <= q
                assert is_disk(reg.replace(comp))


class TestStrongFiltration:
    def test_grid_volume_schedule(self, g8):
        B_n = [grid_subregion(g8, n) for n in (1, 2, 3)]
        out, rep = strong_filtration(B_n, [8, 32, 72])
        assert rep.ok
        got = {q: reg.triangles for q, reg in out}
        assert got[8] == grid_subregion(g8, 1).triangles
        assert got[32] == grid_subregion(g8, 2).triangles
        assert got[72] == grid_subregion(g8, 3).triangles

    def test_all_empty(self, g4):
        out, rep = strong_filtration([Region(g4, set())] * 3, [1, 4, 9])
        assert rep.ok
        assert all(reg.triangles == frozenset() for _, reg in out)

    def test_annular_stage_hole_appears(self, g8):
        B_n = [ring(g8, 1, 2), grid_subregion(g8, 2)]
        out, rep = strong_filtration(B_n, [31, 32])
        assert rep.ok
        got = {q: reg.triangles for q, reg in out}
        assert got[31] == frozenset()
        assert got[32] == grid_subregion(g8, 2).triangles

    def test_not_increasing_rejected(self, g4):
        with pytest.raises(EnvelopeError):
            strong_filtration([grid_subregion(g4, 2),
                               grid_subregion(g4, 1)], [8])

    def test_components_disks_and_increasing(self, rng):
        W = grid_window(6)
        for _ in range(10):
            stages = []
            tris = set()
            for _k in range(3):
                tris |= random_region(W, rng, rng.randrange(4, 30)).triangles
                stages.append(Region(W, set(tris)))
            qs = sorted(rng.sample(range(1, 80), 4))
            out, rep = strong_filtration(stages, qs)
            assert rep.ok
            for q, reg in out:
                for comp in region_components(reg):
                    assert len(comp) <= q
                    assert is_disk(reg.replace(comp))
