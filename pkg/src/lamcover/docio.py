"""JSON instance documents: windows, partitions, filtrations, families,
regions, developments, and suspension actions.

Documents are plain JSON objects with a top-level "kind".  Serialization is
deterministic (sorted keys, fixed indentation) and exact: coordinates are
written as fraction strings, so every document round-trips byte-identically
through `loads_doc`/`dumps_doc`.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict

from .complexes import Region, TriangulatedComplex, build_complex
from .relations import FinitePartition, Filtration


class DocumentError(ValueError):
    pass


def _frac_str(x: Fraction) -> str:
    return str(x)


def _parse_frac(s) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise DocumentError(f"bad coordinate {s!r}: {e}") from None


# ----------------------------------------------------------------- building


def complex_to_doc(C: TriangulatedComplex) -> dict:
    verts = [[v, _frac_str(x), _frac_str(y), v in C.on_frontier]
             for v in sorted(C.vertex_set())
             for x, y in [C.coord(v)]]
    tris = [[t, *C.triangles[t]] for t in sorted(C.triangles)]
    return {"kind": "complex", "vertices": verts, "triangles": tris}


def complex_from_doc(doc: dict) -> TriangulatedComplex:
    try:
        verts = [(vid, _parse_frac(x), _parse_frac(y), bool(fr))
                 for vid, x, y, fr in doc["vertices"]]
        tris = [tuple(row) for row in doc["triangles"]]
    except (KeyError, TypeError, ValueError) as e:
        raise DocumentError(f"malformed complex document: {e}") from None
    return build_complex(verts, tris)


def partition_to_doc(P: FinitePartition) -> dict:
    classes: Dict[str, list] = {}
    for x, c in P.class_of.items():
        classes.setdefault(str(c), []).append(x)
    return {"kind": "partition",
            "partition": {c: sorted(m) for c, m in classes.items()}}


def partition_from_doc(doc: dict, universe=None) -> FinitePartition:
    try:
        block = doc["partition"]
        class_of = {t: c for c, members in block.items() for t in members}
    except (KeyError, TypeError) as e:
        raise DocumentError(f"malformed partition document: {e}") from None
    return FinitePartition(universe if universe is not None else set(class_of),
                           class_of)


def filtration_to_doc(F: Filtration, window: TriangulatedComplex) -> dict:
    return {"kind": "filtration",
            "window": complex_to_doc(window),
            "filtration": [partition_to_doc(P)["partition"] for P in F]}


def filtration_from_doc(doc: dict):
    try:
        window = complex_from_doc(doc["window"])
        steps = [partition_from_doc({"partition": block},
                                    set(window.triangles))
                 for block in doc["filtration"]]
    except (KeyError, TypeError) as e:
        raise DocumentError(f"malformed filtration document: {e}") from None
    return Filtration(steps), window


def region_to_doc(R: Region) -> dict:
    doc = {"kind": "region",
           "window": complex_to_doc(R.host),
           "region": sorted(R.triangles)}
    if R.leaf_index is not None:
        doc["leaf_index"] = R.leaf_index
    return doc


def region_from_doc(doc: dict) -> Region:
    try:
        window = complex_from_doc(doc["window"])
        tris = set(doc["region"])
    except (KeyError, TypeError) as e:
        raise DocumentError(f"malformed region document: {e}") from None
    missing = tris - set(window.triangles)
    if missing:
        raise DocumentError(f"region uses unknown triangles {sorted(missing)[:5]}")
    return Region(window, tris, doc.get("leaf_index"))


def development_to_doc(dev) -> dict:
    return {"kind": "development",
            "window": complex_to_doc(dev.domain.host),
            "region": sorted(dev.domain.triangles),
            "development": {str(v): [x, y]
                            for v, (x, y) in sorted(dev.coords.items())}}


def development_from_doc(doc: dict):
    from .covering import Development
    reg = region_from_doc(doc)
    try:
        coords = {int(v): (float(x), float(y))
                  for v, (x, y) in doc["development"].items()}
    except (KeyError, TypeError, ValueError) as e:
        raise DocumentError(f"malformed development document: {e}") from None
    return Development(reg, coords)


def suspension_to_doc(S) -> dict:
    return {"kind": "suspension",
            "vertical": [str(t) for t in S.vertical],
            "a": {str(t): str(S.a[t]) for t in S.vertical},
            "b": {str(t): str(S.b[t]) for t in S.vertical},
            "radius": S.radius}


def suspension_from_doc(doc: dict):
    from .covering import SuspensionInstance
    try:
        vertical = tuple(doc["vertical"])
        a = dict(doc["a"])
        b = dict(doc["b"])
        radius = int(doc["radius"])
    except (KeyError, TypeError, ValueError) as e:
        raise DocumentError(f"malformed suspension document: {e}") from None
    return SuspensionInstance(vertical, a, b, radius)


# -------------------------------------------------------------------- text


def dumps_doc(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def loads_doc(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"invalid JSON: {e}") from None
    if not isinstance(doc, dict) or "kind" not in doc:
        raise DocumentError("document must be an object with a 'kind' field")
    return doc
