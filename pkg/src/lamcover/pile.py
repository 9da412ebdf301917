"""Families of labeled complexes over a finite vertical index and their
decomposition into piles (product families).

A pile is a family whose fibers are all canonically isomorphic to a common
base complex; the isomorphisms are the parametrization.  Decomposition
groups fibers by a canonical form of the labeled complex; relative
decomposition additionally cuts by the positions of sub-regions so that
each part of the inner family becomes a full sub-pile.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .complexes import (Region, TriangulatedComplex, _edge_key, build_complex,
                        region_components)


class PileError(ValueError):
    pass


@dataclass
class Family:
    """Finite vertical index set with one triangulated fiber per index.

    `labels` optionally assigns a sortable label to each triangle of each
    fiber; unlabeled triangles all count as equal.
    """
    fibers: Dict[Hashable, TriangulatedComplex]
    labels: Optional[Dict[Hashable, Dict[int, Hashable]]] = None

    @property
    def vertical(self):
        return frozenset(self.fibers)

    def fiber_labels(self, t) -> Dict[int, Hashable]:
        if self.labels is None or t not in self.labels:
            return {}
        return self.labels[t]


@dataclass
class Pile:
    """Product family: a base complex plus, per vertical index, a labeled
    orientation-preserving simplicial isomorphism base -> fiber (as a
    vertex-id map)."""
    base: TriangulatedComplex
    vertical: Tuple[Hashable, ...]
    iso: Dict[Hashable, Dict[int, int]]

    def restrict(self, vertical: Sequence[Hashable]) -> "Pile":
        return Pile(self.base, tuple(vertical),
                    {t: self.iso[t] for t in vertical})

    def check(self, family: Family) -> None:
        """Validate every iso against the family (raises on failure)."""
        base_tris = {frozenset(vs): t for t, vs in self.base.triangles.items()}
        for t in self.vertical:
            fib = family.fibers[t]
            m = self.iso[t]
            if len(set(m.values())) != len(m) or \
                    set(m) != self.base.vertex_set() or \
                    set(m.values()) != fib.vertex_set():
                raise PileError(f"iso for {t!r} is not a vertex bijection")
            fib_tris = {frozenset(vs): s for s, vs in fib.triangles.items()}
            if len(fib_tris) != len(base_tris):
                raise PileError(f"fiber {t!r} has wrong triangle count")
            for bt, (a, b, c) in self.base.triangles.items():
                key = frozenset((m[a], m[b], m[c]))
                if key not in fib_tris:
                    raise PileError(f"iso for {t!r} is not simplicial")
                s = fib_tris[key]
                # orientation: the image triple must be a rotation of the
                # stored (counterclockwise) fiber triple
                img = (m[a], m[b], m[c])
                stored = fib.triangles[s]
                rots = {stored, stored[1:] + stored[:1], stored[2:] + stored[:2]}
                if img not in rots:
                    raise PileError(f"iso for {t!r} reverses orientation")


def _neighbor(C, u, v, t):
    """The triangle across directed edge (u, v) from t, or None."""
    for s in C.edges[_edge_key(u, v)]:
        if s != t:
            return s
    return None


def _oriented(C, t, lead):
    """The stored (counterclockwise) triple of t rotated to start at lead."""
    a, b, c = C.triangles[t]
    if lead == a:
        return (a, b, c)
    if lead == b:
        return (b, c, a)
    if lead == c:
        return (c, a, b)
    raise PileError("vertex not in triangle")


def _traverse(C, labels, t0, rot):
    """Deterministic oriented breadth-first traversal from one start.

    Returns (encoding, vertex -> canonical-id map).  The encoding lists,
    per triangle in discovery order, its label, canonical vertex triple,
    and frontier flags, so equal encodings mean labeled isomorphism.
    """
    a, b, c = C.triangles[t0]
    start = ((a, b, c), (b, c, a), (c, a, b))[rot]
    cid: Dict[int, int] = {}
    enc = []
    seen = {t0}
    queue = [(t0, start)]
    qi = 0
    while qi < len(queue):
        t, (a, b, c) = queue[qi]
        qi += 1
        for v in (a, b, c):
            if v not in cid:
                cid[v] = len(cid)
        enc.append((str(labels.get(t)), (cid[a], cid[b], cid[c]),
                    (a in C.on_frontier, b in C.on_frontier,
                     c in C.on_frontier)))
        for u, v in ((a, b), (b, c), (c, a)):
            s = _neighbor(C, u, v, t)
            if s is not None and s not in seen:
                seen.add(s)
                queue.append((s, _oriented(C, s, v)))
    if len(seen) != len(C.triangles):
        raise PileError("fiber is not connected")
    return tuple(enc), cid


def canonical_form(C: TriangulatedComplex,
                   labels: Optional[Dict[int, Hashable]] = None):
    """Canonical encoding of a connected labeled oriented complex.

    Returns (encoding, vertex -> canonical-id map) minimizing the traversal
    encoding over all orientation-preserving starts; two complexes are
    labeled-isomorphic iff their encodings are equal, and composing the
    vertex maps yields the isomorphism.
    """
    if not C.triangles:
        raise PileError("canonical form of an empty complex")
    labels = labels or {}
    best = None
    for t0 in sorted(C.triangles):
        for rot in range(3):
            enc, cid = _traverse(C, labels, t0, rot)
            if best is None or enc < best[0]:
                best = (enc, cid)
    return best


def pile_decompose(F: Family) -> List[Pile]:
    """Cut a family into piles: group fibers by canonical form.

    Within each pile every fiber is canonically labeled-isomorphic to the
    base (the fiber of the smallest vertical index).  Verticals partition
    the family's index set.
    """
    forms: Dict[tuple, List] = {}
    canon: Dict[Hashable, Dict[int, int]] = {}
    order = sorted(F.fibers, key=repr)
    for t in order:
        enc, cid = canonical_form(F.fibers[t], F.fiber_labels(t))
        forms.setdefault(enc, []).append(t)
        canon[t] = cid
    piles = []
    for enc in sorted(forms):
        group = forms[enc]
        t0 = group[0]
        base = F.fibers[t0]
        inv0 = {c: v for v, c in canon[t0].items()}
        iso = {}
        for t in group:
            inv_t = {c: v for v, c in canon[t].items()}
            iso[t] = {inv0[c]: inv_t[c] for c in inv_t}
        piles.append(Pile(base, tuple(group), iso))
    return piles


def _check_simplicial(fib, vmap, K):
    k_edges = set(K.edges)
    k_tris = {frozenset(vs) for vs in K.triangles.values()}
    for v in fib.vertex_set():
        if v not in vmap or vmap[v] not in K.vertex_set():
            raise PileError("map does not send vertices into the target")
    for a, b, c in fib.triangles.values():
        img = {vmap[a], vmap[b], vmap[c]}
        if len(img) == 3 and img not in k_tris:
            raise PileError("triangle image is not a target triangle")
        if len(img) == 2 and _edge_key(*img) not in k_edges:
            raise PileError("edge image is not a target edge")


def semi_simple_decompose(F: Family, f: Dict[Hashable, Dict[int, int]],
                          K: TriangulatedComplex):
    """Refine the pile decomposition by the induced base-vertex map.

    `f` gives, per fiber, a simplicial vertex map into the fixed complex K.
    On each part the map factors through the pile base; returns a list of
    (Pile, base vertex map) pairs.
    """
    for t, fib in F.fibers.items():
        _check_simplicial(fib, f[t], K)
    out = []
    for pile in pile_decompose(F):
        groups: Dict[tuple, List] = {}
        for t in pile.vertical:
            base_map = tuple(sorted((v, f[t][pile.iso[t][v]])
                                    for v in pile.base.vertex_set()))
            groups.setdefault(base_map, []).append(t)
        for key in sorted(groups):
            out.append((pile.restrict(groups[key]), dict(key)))
    return out


def is_full_subpile(P: Pile, Phat: Pile):
    """Test the full-sub-pile condition and return (flag, base embedding).

    True iff the verticals coincide and a single simplicial embedding of
    P's base into Phat's base commutes with every fiber parametrization
    (so each plaque of Phat contains exactly one plaque of P).
    """
    if set(P.vertical) != set(Phat.vertical) or not P.vertical:
        return False, None
    t0 = P.vertical[0]
    inv = {w: v for v, w in Phat.iso[t0].items()}
    emb = {}
    for v, w in P.iso[t0].items():
        if w not in inv:
            return False, None
        emb[v] = inv[w]
    if len(set(emb.values())) != len(emb):
        return False, None
    hat_tris = {frozenset(vs) for vs in Phat.base.triangles.values()}
    for a, b, c in P.base.triangles.values():
        if frozenset((emb[a], emb[b], emb[c])) not in hat_tris:
            return False, None
    for t in P.vertical:
        for v in emb:
            if Phat.iso[t][emb[v]] != P.iso[t][v]:
                return False, None
    return True, emb


@dataclass
class RelativePile:
    """One part of a relative decomposition: a pile of the outer family
    together with the full sub-piles cut out of the inner one."""
    pile: Pile
    subpiles: List[Pile]
    embeddings: List[Dict[int, int]]
    degenerate_full: bool = False   # no inner component meets these fibers


def _subcomplex(C, tris):
    verts = sorted({v for t in tris for v in C.triangles[t]})
    return build_complex(
        [(v,) + C.coord(v) + (v in C.on_frontier,) for v in verts],
        [(t,) + C.triangles[t] for t in sorted(tris)])


def _contained(fib, hat):
    return all(t in hat.triangles and set(vs) == set(hat.triangles[t])
               for t, vs in fib.triangles.items())


def relative_decompose(B: Family, Bhat: Family) -> List[RelativePile]:
    """Cut Bhat into piles so that every part of B is a full sub-pile.

    Fibers of B must be subcomplexes (shared ids) of the matching Bhat
    fibers.  Within each pile of Bhat, fibers are further grouped by the
    base positions of their B components; a part whose fibers contain r
    components yields r sub-piles, ordered by minimal base triangle
    (the one-component case is split off first, then the remainder).
    Fibers meeting no B component form parts flagged degenerate_full.
    """
    for t, fib in B.fibers.items():
        if t not in Bhat.fibers or not _contained(fib, Bhat.fibers[t]):
            raise PileError(f"B fiber {t!r} is not a subcomplex of Bhat's")

    out = []
    for pile in pile_decompose(Bhat):
        inv = {t: {w: v for v, w in pile.iso[t].items()}
               for t in pile.vertical}
        base_tri = {frozenset(vs): bt
                    for bt, vs in pile.base.triangles.items()}
        groups: Dict[tuple, List] = {}
        for t in pile.vertical:
            comps = []
            if t in B.fibers and B.fibers[t].triangles:
                host = Bhat.fibers[t]
                reg = Region(host, set(B.fibers[t].triangles))
                comps = region_components(reg)
            # pull each component back to base triangle ids through the iso
            positions = tuple(sorted(
                (frozenset(base_tri[frozenset(inv[t][v]
                                              for v in host.triangles[s])]
                           for s in c)
                 for c in comps), key=min))
            groups.setdefault(positions, []).append(t)
        for positions in sorted(
                groups, key=lambda p: (len(p),
                                       tuple(tuple(sorted(c)) for c in p))):
            part = pile.restrict(groups[positions])
            subpiles, embeddings = [], []
            for comp in positions:
                sub_base = _subcomplex(part.base, comp)
                sub_iso = {t: {v: part.iso[t][v]
                               for v in sub_base.vertex_set()}
                           for t in part.vertical}
                sp = Pile(sub_base, part.vertical, sub_iso)
                ok, emb = is_full_subpile(sp, part)
                if not ok:
                    raise PileError("internal: sub-pile is not full")
                subpiles.append(sp)
                embeddings.append(emb)
            out.append(RelativePile(part, subpiles, embeddings,
                                    degenerate_full=not positions))
    return out
