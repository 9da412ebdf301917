"""Discrete harmonic Dirichlet solver on triangulated planar windows and
the punctured-exhaustion scheme with conformality residuals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import cg, spsolve

from .complexes import Region, TriangulatedComplex, _edge_key, region_components

COT_CLAMP = 1e-8


class UniformizeError(ValueError):
    pass


def uniform_weights(window: TriangulatedComplex) -> Dict[Tuple[int, int], float]:
    return {e: 1.0 for e in window.edges}


def cotangent_weights(window: TriangulatedComplex) -> Dict[Tuple[int, int], float]:
    """Half cotangent sum over the triangles adjacent to each edge, clamped
    below so near-degenerate triangles cannot produce nonpositive weights."""
    w = {e: 0.0 for e in window.edges}
    for t, (a, b, c) in window.triangles.items():
        pts = {v: window.coord_float(v) for v in (a, b, c)}
        for apex, (u, v) in (((c), (a, b)), ((a), (b, c)), ((b), (c, a))):
            px, py = pts[apex]
            ux, uy = pts[u]
            vx, vy = pts[v]
            d1 = (ux - px, uy - py)
            d2 = (vx - px, vy - py)
            cross = d1[0] * d2[1] - d1[1] * d2[0]
            dot = d1[0] * d2[0] + d1[1] * d2[1]
            w[_edge_key(u, v)] += 0.5 * dot / abs(cross)
    return {e: max(x, COT_CLAMP) for e, x in w.items()}


@dataclass
class DirichletProblem:
    window: TriangulatedComplex
    boundary_values: Dict[int, float]
    weights: Dict[Tuple[int, int], float]

    def __post_init__(self):
        if not self.boundary_values:
            raise UniformizeError("boundary values required")
        verts = self.window.vertex_set()
        for v in self.boundary_values:
            if v not in verts:
                raise UniformizeError(f"unknown boundary vertex {v}")
        for e, x in self.weights.items():
            if e not in self.window.edges:
                raise UniformizeError(f"unknown edge {e}")
            if not x > 0:
                raise UniformizeError("weights must be positive")


def dirichlet_solve(P: DirichletProblem, method: str = "direct",
                    tol: float = 1e-12) -> Dict[int, float]:
    """Discrete harmonic extension: the unique vertex function matching the
    boundary values and having weighted mean-value zero at free vertices."""
    W = P.window
    if len(region_components(Region(W, set(W.triangles)))) != 1:
        raise UniformizeError("window must be connected")
    verts = sorted(W.vertex_set())
    fixed = P.boundary_values
    free = [v for v in verts if v not in fixed]
    if not free:
        return dict(fixed)
    idx = {v: i for i, v in enumerate(free)}
    rows, cols, vals = [], [], []
    rhs = np.zeros(len(free))
    for (a, b), _tris in W.edges.items():
        w = P.weights[(a, b)]
        for u, v in ((a, b), (b, a)):
            if u in idx:
                i = idx[u]
                rows.append(i)
                cols.append(i)
                vals.append(w)
                if v in idx:
                    rows.append(i)
                    cols.append(idx[v])
                    vals.append(-w)
                else:
                    rhs[i] += w * fixed[v]
    A = coo_matrix((vals, (rows, cols)),
                   shape=(len(free), len(free))).tocsr()
    if method == "direct":
        x = spsolve(A, rhs)
    elif method == "cg":
        x, info = cg(A, rhs, rtol=tol, atol=0.0, maxiter=20 * len(free))
        if info != 0:
            raise UniformizeError(f"cg did not converge (info={info})")
    else:
        raise UniformizeError(f"unknown method {method!r}")
    out = dict(fixed)
    for v, i in idx.items():
        out[v] = float(x[i])
    return out


def _window_boundary_vertices(W):
    out = {v for e in W.boundary_edges() for v in e}
    return out | W.on_frontier


def _puncture_data(W, z0):
    """Remove the puncture vertex; its link becomes the inner boundary,
    carrying Re(1/z) and Im(1/z) in the flat coordinate centered there."""
    bverts = _window_boundary_vertices(W)
    if z0 in bverts:
        raise UniformizeError("puncture on the window boundary")
    if z0 not in W.vertex_set():
        raise UniformizeError("puncture not a window vertex")
    x0, y0 = W.coord_float(z0)
    keep = [t for t, vs in W.triangles.items() if z0 not in vs]
    link = {v for t, vs in W.triangles.items() if z0 in vs
            for v in vs if v != z0}
    inner_u, inner_v = {}, {}
    for v in link:
        x, y = W.coord_float(v)
        zx, zy = x - x0, y - y0
        r2 = zx * zx + zy * zy
        inner_u[v] = zx / r2          # Re(1/z)
        inner_v[v] = -zy / r2         # Im(1/z)
    verts = sorted(W.vertex_set() - {z0})
    from .complexes import build_complex
    sub = build_complex(
        [(v,) + W.coord(v) + (v in W.on_frontier,) for v in verts],
        [(t,) + W.triangles[t] for t in keep])
    return sub, inner_u, inner_v, bverts


@dataclass
class UniformizingStage:
    window: TriangulatedComplex   # the punctured window actually solved on
    u: Dict[int, float]
    v: Dict[int, float]


@dataclass
class UniformizingReport:
    sup_diff_u: List[float]       # per consecutive pair, on common vertices
    sup_diff_v: List[float]


def uniformizing_sequence(windows: Sequence[TriangulatedComplex],
                          puncture_at: Tuple[float, float] = (0.0, 0.0),
                          outer_data: Optional[Callable] = None,
                          weights: str = "cotangent"):
    """Per exhaustion stage, solve the punctured Dirichlet pair (u_n, v_n)
    with inner data Re(1/z), Im(1/z) at the puncture link and the given
    outer data (default zero) on the stage boundary.

    The puncture is the vertex at `puncture_at` in each window.
    `outer_data` is a callable (x, y) -> value used for both solves, or a
    pair of callables (one for u, one for v).  Returns (stages, report);
    the report lists sup |u_{n+1} - u_n| (and for v) over vertices shared
    between consecutive stages, matched by coordinates.
    """
    if not windows:
        raise UniformizeError("no windows")
    if outer_data is None:
        outer_data = lambda x, y: 0.0
    if callable(outer_data):
        outer_data = (outer_data, outer_data)
    outer_u_fn, outer_v_fn = outer_data
    mk_weights = {"cotangent": cotangent_weights,
                  "uniform": uniform_weights}.get(weights)
    if mk_weights is None:
        raise UniformizeError(f"unknown weight scheme {weights!r}")
    stages = []
    for W in windows:
        z0 = next((v for v in W.vertex_set()
                   if W.coord_float(v) == tuple(map(float, puncture_at))),
                  None)
        if z0 is None:
            raise UniformizeError("puncture vertex missing from a window")
        sub, inner_u, inner_v, bverts = _puncture_data(W, z0)
        wts = mk_weights(sub)
        outer_vs = [v for v in _window_boundary_vertices(sub)
                    if v not in inner_u]
        outer_u = {v: outer_u_fn(*sub.coord_float(v)) for v in outer_vs}
        outer_v = {v: outer_v_fn(*sub.coord_float(v)) for v in outer_vs}
        u = dirichlet_solve(DirichletProblem(sub, {**outer_u, **inner_u}, wts))
        v = dirichlet_solve(DirichletProblem(sub, {**outer_v, **inner_v}, wts))
        stages.append(UniformizingStage(sub, u, v))
    du, dv = [], []
    for s1, s2 in zip(stages, stages[1:]):
        c1 = {s1.window.coord(v): v for v in s1.window.vertex_set()}
        c2 = {s2.window.coord(v): v for v in s2.window.vertex_set()}
        common = set(c1) & set(c2)
        du.append(max((abs(s1.u[c1[p]] - s2.u[c2[p]]) for p in common),
                      default=0.0))
        dv.append(max((abs(s1.v[c1[p]] - s2.v[c2[p]]) for p in common),
                      default=0.0))
    return stages, UniformizingReport(du, dv)


def triangle_gradient(W, t, f):
    """Gradient of the affine interpolant of f on triangle t."""
    a, b, c = W.triangles[t]
    (xa, ya), (xb, yb), (xc, yc) = (W.coord_float(v) for v in (a, b, c))
    det = (xb - xa) * (yc - ya) - (xc - xa) * (yb - ya)
    if det == 0:
        raise UniformizeError(f"degenerate triangle {t}")
    fb, fc = f[b] - f[a], f[c] - f[a]
    gx = (fb * (yc - ya) - fc * (yb - ya)) / det
    gy = (fc * (xb - xa) - fb * (xc - xa)) / det
    return gx, gy


def conformal_residual(u: Dict[int, float], v: Dict[int, float],
                       window: TriangulatedComplex) -> Dict[int, float]:
    """Per triangle, the norm of grad(u) - rot_{-90}(grad(v)); zero exactly
    when the affine pair satisfies the discrete Cauchy-Riemann equations."""
    out = {}
    for t in window.triangles:
        ux, uy = triangle_gradient(window, t, u)
        vx, vy = triangle_gradient(window, t, v)
        rx, ry = vy, -vx
        out[t] = math.hypot(ux - rx, uy - ry)
    return out
