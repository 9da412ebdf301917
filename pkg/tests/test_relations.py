import random

import pytest

from lamcover.relations import (FinitePartition, Filtration, RelationError,
                                check_filtration, class_cardinality,
                                fundamental_domain, induced_relation, saturate)
from lamcover.generators import block_filtration, block_partition, grid_window
from oracles import class_cardinality_bfs_oracle


def part(classes):
    return FinitePartition.from_classes(classes)


class TestSaturate:
    def test_empty(self):
        R = part({0: {1, 2}, 1: {3}})
        assert saturate(R, set()) == frozenset()

    def test_identity(self):
        R = FinitePartition.identity({1, 2, 3})
        assert saturate(R, {1, 3}) == frozenset({1, 3})

    def test_forced(self):
        R = part({0: {'a', 'b'}, 1: {'c'}})
        assert saturate(R, {'a'}) == frozenset({'a', 'b'})

    def test_outside_universe(self):
        R = FinitePartition.identity({1})
        with pytest.raises(RelationError):
            saturate(R, {2})

    def test_idempotent_and_additive(self, rng):
        universe = set(range(40))
        for _ in range(20):
            class_of = {x: rng.randrange(8) for x in universe}
            R = FinitePartition(universe, class_of)
            A = set(rng.sample(sorted(universe), rng.randrange(0, 15)))
            B = set(rng.sample(sorted(universe), rng.randrange(0, 15)))
            sA = saturate(R, A)
            assert saturate(R, sA) == sA
            assert saturate(R, A | B) == saturate(R, A) | saturate(R, B)


class TestClassCardinality:
    def test_identity(self):
        R = FinitePartition.identity({1, 2, 3})
        assert all(class_cardinality(R, x) == 1 for x in R.universe)

    def test_single_class(self):
        R = FinitePartition.single_class(set(range(8)))
        assert class_cardinality(R, 3) == 8

    def test_small(self):
        R = part({0: {'a', 'b'}, 1: {'c'}})
        assert class_cardinality(R, 'a') == 2
        assert class_cardinality(R, 'c') == 1

    def test_unknown_id(self):
        R = FinitePartition.identity({1})
        with pytest.raises(RelationError):
            class_cardinality(R, 9)

    def test_bfs_oracle(self, rng):
        universe = set(range(30))
        for _ in range(200):
            class_of = {x: rng.randrange(6) for x in universe}
            R = FinitePartition(universe, class_of)
            x = rng.choice(sorted(universe))
            assert class_cardinality(R, x) == class_cardinality_bfs_oracle(R, x)


class TestFundamentalDomain:
    def test_minimum_of_each_class(self):
        R = part({0: {2, 5}, 1: {7}})
        assert fundamental_domain(R) == frozenset({2, 7})

    def test_identity(self):
        R = FinitePartition.identity({4, 5, 6})
        assert fundamental_domain(R) == frozenset({4, 5, 6})

    def test_single_class_custom_order(self):
        R = FinitePartition.single_class({'a', 'b', 'c'})
        assert fundamental_domain(R, order=['a', 'b', 'c']) == frozenset({'a'})

    def test_meets_each_class_once_and_deterministic(self, rng):
        universe = set(range(50))
        for _ in range(30):
            class_of = {x: rng.randrange(10) for x in universe}
            R = FinitePartition(universe, class_of)
            D = fundamental_domain(R)
            assert D == fundamental_domain(R)
            for members in R.classes().values():
                assert len(members & D) == 1


class TestInducedRelation:
    def test_full(self):
        R = part({0: {1, 2}, 1: {3}})
        assert induced_relation(R, R.universe) == R

    def test_empty(self):
        R = part({0: {1, 2}})
        S = induced_relation(R, set())
        assert S.universe == frozenset()

    def test_restriction(self):
        R = part({0: {'a', 'b'}, 1: {'c', 'd'}})
        S = induced_relation(R, {'a', 'c'})
        assert sorted(map(sorted, S.classes().values())) == [['a'], ['c']]


class TestCheckFiltration:
    def test_identity_then_target(self):
        u = set(range(6))
        tgt = FinitePartition.single_class(u)
        rep = check_filtration([FinitePartition.identity(u), tgt], tgt)
        assert rep.ok

    def test_reversed_fails(self):
        u = set(range(6))
        tgt = FinitePartition.single_class(u)
        rep = check_filtration([tgt, FinitePartition.identity(u)], tgt)
        assert not rep.monotone

    def test_block_filtration(self):
        W = grid_window(2)  # 4x4 cells
        steps = [block_partition(W, b) for b in (1, 2, 4)]
        rep = check_filtration(steps, block_partition(W, 4))
        assert rep.ok

    def test_filtration_type_validates(self):
        u = set(range(4))
        with pytest.raises(RelationError):
            Filtration([FinitePartition.single_class(u),
                        FinitePartition.identity(u)])


class TestComposite:
    def test_induced_filtration_from_regions(self):
        # induced relations on any transversal of a block filtration form
        # a valid filtration joining to the induced target
        W = grid_window(4)  # 8x8 cells
        F = block_filtration(W, (1, 2, 4, 8))
        T = set(range(0, len(W.triangles), 7))
        induced = [induced_relation(R, T) for R in F]
        rep = check_filtration(induced, induced_relation(F.steps[-1], T))
        assert rep.ok
