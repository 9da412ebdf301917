"""Finite equivalence relations (partitions) on triangle sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional


class RelationError(ValueError):
    pass


class FinitePartition:
    """An equivalence relation on a finite triangle-id universe."""

    def __init__(self, universe, class_of):
        self.universe = frozenset(universe)
        self.class_of = dict(class_of)
        missing = self.universe - set(self.class_of)
        if missing:
            raise RelationError(f"class_of not total: missing {sorted(missing)[:5]}")
        extra = set(self.class_of) - self.universe
        if extra:
            raise RelationError(f"class_of defined outside universe: {sorted(extra)[:5]}")
        classes = {}
        for x, c in self.class_of.items():
            classes.setdefault(c, set()).add(x)
        self._classes = {c: frozenset(m) for c, m in classes.items()}

    @classmethod
    def identity(cls, universe):
        return cls(universe, {x: x for x in universe})

    @classmethod
    def single_class(cls, universe):
        return cls(universe, {x: 0 for x in universe})

    @classmethod
    def from_classes(cls, classes):
        class_of = {}
        universe = set()
        for c, members in classes.items():
            for x in members:
                if x in class_of:
                    raise RelationError(f"element {x} in two classes")
                class_of[x] = c
                universe.add(x)
        return cls(universe, class_of)

    def classes(self) -> Dict[object, FrozenSet]:
        return dict(self._classes)

    def cls(self, x) -> FrozenSet:
        if x not in self.class_of:
            raise RelationError(f"unknown id {x}")
        return self._classes[self.class_of[x]]

    def same_class(self, x, y):
        return self.class_of[x] == self.class_of[y]

    def coarsens(self, other) -> bool:
        """True iff every class of `other` is contained in a class of self."""
        if self.universe != other.universe:
            return False
        for members in other._classes.values():
            it = iter(members)
            c = self.class_of[next(it)]
            if any(self.class_of[x] != c for x in it):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, FinitePartition):
            return NotImplemented
        return (self.universe == other.universe
                and self.coarsens(other) and other.coarsens(self))

    def __hash__(self):
        return hash(frozenset(self._classes.values()))


def saturate(R: FinitePartition, A):
    """Union of the R-classes meeting A."""
    A = set(A)
    bad = A - R.universe
    if bad:
        raise RelationError(f"ids outside universe: {sorted(bad)[:5]}")
    out = set()
    for x in A:
        out |= R.cls(x)
    return frozenset(out)


def class_cardinality(R: FinitePartition, x) -> int:
    return len(R.cls(x))


def fundamental_domain(R: FinitePartition, order=None):
    """One element per class: the order-minimum (default: id order)."""
    if order is None:
        keyf = lambda x: x
    else:
        rank = {x: i for i, x in enumerate(order)}
        if set(rank) < R.universe:
            raise RelationError("order is not total on the universe")
        keyf = rank.__getitem__
    return frozenset(min(members, key=keyf) for members in R.classes().values())


def induced_relation(R: FinitePartition, T):
    """Restriction of R to the subset T (empty intersections dropped)."""
    T = set(T)
    bad = T - R.universe
    if bad:
        raise RelationError(f"ids outside universe: {sorted(bad)[:5]}")
    return FinitePartition(T, {x: R.class_of[x] for x in T})


@dataclass
class Filtration:
    """An increasing sequence of partitions over a fixed universe."""
    steps: List[FinitePartition]

    def __post_init__(self):
        if not self.steps:
            raise RelationError("empty filtration")
        u = self.steps[0].universe
        for i, s in enumerate(self.steps):
            if s.universe != u:
                raise RelationError(f"universe mismatch at step {i}")
        for i in range(1, len(self.steps)):
            if not self.steps[i].coarsens(self.steps[i - 1]):
                raise RelationError(f"step {i} does not coarsen step {i - 1}")

    @property
    def universe(self):
        return self.steps[0].universe

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


@dataclass
class FiltrationReport:
    ok: bool
    monotone: bool
    join_matches: bool
    detail: str = ""


def check_filtration(steps, target: FinitePartition) -> FiltrationReport:
    """Check that `steps` is monotone coarsening and joins to `target`."""
    u = target.universe
    for i, s in enumerate(steps):
        if s.universe != u:
            raise RelationError(f"universe mismatch at step {i}")
    monotone = all(steps[i].coarsens(steps[i - 1]) for i in range(1, len(steps)))
    join_matches = bool(steps) and steps[-1] == target
    detail = []
    if not monotone:
        bad = [i for i in range(1, len(steps)) if not steps[i].coarsens(steps[i - 1])]
        detail.append(f"monotonicity fails at steps {bad}")
    if not join_matches:
        detail.append("join (last step) differs from target")
    return FiltrationReport(ok=monotone and join_matches, monotone=monotone,
                            join_matches=join_matches, detail="; ".join(detail))
