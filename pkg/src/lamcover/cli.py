"""Command-line interface: instance generation, pipeline runs, SVG
rendering, and document verification.

Commands: generate, run, render, verify.  Exit codes: 0 all certificates
pass, 1 certificate failure, 2 input error.  All output is deterministic
for a fixed (config, seed).
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import docio
from .complexes import ComplexError, Region
from .covering import (CoveringError, covering_from_hyperfinite, suspend,
                       validate_local_homeo)
from .docio import DocumentError
from .envelope import strong_filtration
from .generators import block_filtration, grid_window
from .relations import FinitePartition, Filtration, RelationError
from .uniformize import (DirichletProblem, UniformizeError, cotangent_weights,
                         dirichlet_solve, uniform_weights)

EXIT_PASS, EXIT_CERT, EXIT_INPUT = 0, 1, 2


class CliInputError(ValueError):
    pass


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CliInputError(f"cannot read {path}: {e}") from None


def _parse_blocks(text, radius):
    if text is None:
        out = []
        b = 1
        while b <= radius:
            out.append(b)
            b *= 2
        return out
    try:
        out = [int(x) for x in text.split(",")]
    except ValueError:
        raise CliInputError(f"bad --blocks value {text!r}") from None
    if not out or any(b < 1 for b in out):
        raise CliInputError("--blocks entries must be positive")
    return out


def _parse_slope(text):
    if text is None:
        text = "99/70,99/70"
    try:
        parts = [Fraction(p) for p in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise CliInputError(f"bad --slope value {text!r}") from None
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2:
        raise CliInputError("--slope takes one or two fractions")
    return parts


# ---------------------------------------------------------------- generate


def _cmd_generate(args):
    kind = args.kind
    radius = args.radius
    if kind == "grid_window":
        doc = docio.complex_to_doc(grid_window(radius))
    elif kind == "block_filtration":
        W = grid_window(radius)
        blocks = _parse_blocks(args.blocks, radius)
        try:
            F = block_filtration(W, blocks)
        except RelationError as e:
            raise CliInputError(f"invalid block schedule {blocks}: {e}") from None
        doc = docio.filtration_to_doc(F, W)
    elif kind == "linear_foliation_window":
        alpha, beta = _parse_slope(args.slope)
        q = (alpha.denominator * beta.denominator
             // __import__("math").gcd(alpha.denominator, beta.denominator))
        vertical = tuple(range(q))
        a = {t: (t + alpha.numerator * (q // alpha.denominator)) % q
             for t in vertical}
        b = {t: (t + beta.numerator * (q // beta.denominator)) % q
             for t in vertical}
        S_doc = docio.suspension_to_doc(
            docio.suspension_from_doc(
                {"vertical": [str(t) for t in vertical],
                 "a": {str(t): str(a[t]) for t in vertical},
                 "b": {str(t): str(b[t]) for t in vertical},
                 "radius": radius}))
        from .covering import orbits
        S = docio.suspension_from_doc(S_doc)
        orbit_of = {}
        for i, orb in enumerate(sorted(orbits(S), key=min)):
            for t in orb:
                orbit_of[t] = i
        doc = {"kind": "linear_foliation_window",
               "slope": [str(alpha), str(beta)],
               "window": docio.complex_to_doc(grid_window(radius)),
               "action": S_doc,
               "orbit_partition": docio.partition_to_doc(
                   FinitePartition(set(S.vertical), orbit_of))["partition"]}
    elif kind == "suspension":
        rng = random.Random(args.seed)
        n = args.size
        perm = list(range(n))
        rng.shuffle(perm)
        sigma = {i: perm[i] for i in range(n)}
        # powers of one permutation commute; the pair stays commuting
        k = rng.randrange(1, n)
        b = {i: i for i in range(n)}
        for _ in range(k):
            b = {i: sigma[b[i]] for i in range(n)}
        S = docio.suspension_from_doc(
            {"vertical": [str(i) for i in range(n)],
             "a": {str(i): str(sigma[i]) for i in range(n)},
             "b": {str(i): str(b[i]) for i in range(n)},
             "radius": radius})
        doc = docio.suspension_to_doc(S)
    else:
        raise CliInputError(f"unknown kind {kind!r}")
    _write(args.output, docio.dumps_doc(doc))
    return EXIT_PASS


# --------------------------------------------------------------------- run


def _report_covering(rep):
    lines = [f"pipeline: covering_from_hyperfinite",
             f"status: {'pass' if rep.ok else 'fail'}",
             f"vacuous: {rep.vacuous}",
             f"stage: {rep.stage}"]
    if rep.detail:
        lines.append(f"detail: {rep.detail}")
    if rep.q_values is not None:
        lines.append("q_values: " + ",".join(str(q) for q in rep.q_values))
    if rep.covering is not None:
        cov = rep.covering
        for i, cert in enumerate(cov.radius_certificates, start=1):
            lines.append(f"stage {i} radius certificate: "
                         + ("none" if cert is None else f"{cert:.6f}"))
        lines.append(f"extension exact: {cov.extension_exact}")
        lines.append(f"torus surjective: {cov.torus_surjective}")
    return "\n".join(lines) + "\n"


def _run_filtration(doc, args):
    F, window = docio.filtration_from_doc(doc)
    q_values = None
    if args.qmax is not None:
        q_values = [] if args.qmax < 1 else None
    rep = covering_from_hyperfinite(F, window, q_values=q_values,
                                    retries=args.retries)
    if (rep.covering is not None and args.qmax
            and rep.q_values and max(rep.q_values) > args.qmax):
        rep = covering_from_hyperfinite(
            F, window, q_values=[q for q in rep.q_values if q <= args.qmax],
            retries=args.retries)
    svg_text = None
    if args.svg and rep.covering and rep.covering.developments:
        from .svg import render_development
        svg_text = render_development(rep.covering.developments[-1])
    return _report_covering(rep), svg_text, \
        EXIT_PASS if rep.ok else EXIT_CERT


def _run_suspension(doc, args):
    S = docio.suspension_from_doc(doc)
    res = suspend(S)
    ok = all(validate_local_homeo(d).ok for d in res.developments.values())
    lines = ["pipeline: suspend",
             f"status: {'pass' if ok else 'fail'}",
             f"orbits: {len(res.orbits)}"]
    for key in sorted(res.developments, key=repr):
        rep = validate_local_homeo(res.developments[key])
        lines.append(f"leaf {key}: local homeomorphism "
                     f"{'pass' if rep.ok else 'fail'}")
    svg_text = None
    if args.svg and res.developments:
        from .svg import render_development
        first = sorted(res.developments, key=repr)[0]
        svg_text = render_development(res.developments[first])
    return "\n".join(lines) + "\n", svg_text, EXIT_PASS if ok else EXIT_CERT


def _run_region(doc, args):
    R = docio.region_from_doc(doc)
    qmax = args.qmax if args.qmax is not None else len(R.host.triangles)
    qs = sorted({q for q in (qmax // 4, qmax // 2, qmax) if q >= 1})
    out, srep = strong_filtration([R], qs)
    lines = ["pipeline: strong_filtration",
             f"status: {'pass' if srep.ok else 'fail'}"]
    if srep.detail:
        lines.append(f"detail: {srep.detail}")
    for q, reg in out:
        lines.append(f"q={q}: {len(reg.triangles)} triangles")
    svg_text = None
    if args.svg and out:
        from .svg import render_region
        svg_text = render_region(out[-1][1])
    return "\n".join(lines) + "\n", svg_text, \
        EXIT_PASS if srep.ok else EXIT_CERT


def _run_complex(doc, args):
    """Dirichlet certificate: with the chosen weights, solve with affine
    boundary data and report the reproduction error."""
    W = docio.complex_from_doc(doc)
    mk = cotangent_weights if args.weights == "cotangent" else uniform_weights
    bverts = {v for e in W.boundary_edges() for v in e} | W.on_frontier
    errs = []
    for f in (lambda x, y: x, lambda x, y: y):
        bv = {v: f(*W.coord_float(v)) for v in bverts}
        sol = dirichlet_solve(DirichletProblem(W, bv, mk(W)))
        errs.append(max(abs(sol[v] - f(*W.coord_float(v)))
                        for v in W.vertex_set()))
    ok = args.weights != "cotangent" or max(errs) < 1e-9
    lines = ["pipeline: dirichlet_solve",
             f"status: {'pass' if ok else 'fail'}",
             f"weights: {args.weights}",
             f"affine reproduction error: {max(errs):.3e}"]
    return "\n".join(lines) + "\n", None, EXIT_PASS if ok else EXIT_CERT


def _cmd_run(args):
    doc = docio.loads_doc(_read(args.input))
    kind = doc["kind"]
    if kind == "filtration":
        report, svg_text, code = _run_filtration(doc, args)
    elif kind in ("suspension",):
        report, svg_text, code = _run_suspension(doc, args)
    elif kind == "linear_foliation_window":
        report, svg_text, code = _run_suspension(doc["action"], args)
    elif kind == "region":
        report, svg_text, code = _run_region(doc, args)
    elif kind == "complex":
        report, svg_text, code = _run_complex(doc, args)
    else:
        raise CliInputError(f"cannot run documents of kind {kind!r}")
    _write(args.output, report)
    if args.svg and svg_text is not None:
        _write(args.svg, svg_text)
    return code


# ------------------------------------------------------------------ render


def _cmd_render(args):
    doc = docio.loads_doc(_read(args.input))
    kind = doc["kind"]
    from .svg import (render_development, render_envelope_overlay,
                      render_region)
    if kind == "complex":
        C = docio.complex_from_doc(doc)
        text = render_region(Region(C, set(C.triangles)))
    elif kind == "region":
        R = docio.region_from_doc(doc)
        from .envelope import envelope
        text = render_envelope_overlay(R, envelope(R).region)
    elif kind == "development":
        text = render_development(docio.development_from_doc(doc))
    elif kind == "filtration":
        F, window = docio.filtration_from_doc(doc)
        text = render_region(Region(window, set(window.triangles)),
                             classes=F.steps[-1].class_of)
    else:
        raise CliInputError(f"cannot render documents of kind {kind!r}")
    _write(args.output, text)
    return EXIT_PASS


# ------------------------------------------------------------------ verify


_VERIFIERS = {
    "complex": docio.complex_from_doc,
    "region": docio.region_from_doc,
    "filtration": lambda d: docio.filtration_from_doc(d),
    "development": docio.development_from_doc,
    "suspension": docio.suspension_from_doc,
    "partition": docio.partition_from_doc,
    "linear_foliation_window": lambda d: (
        docio.complex_from_doc(d["window"]),
        docio.suspension_from_doc(d["action"])),
}


def _cmd_verify(args):
    doc = docio.loads_doc(_read(args.input))
    kind = doc["kind"]
    builder = _VERIFIERS.get(kind)
    if builder is None:
        raise CliInputError(f"unknown document kind {kind!r}")
    try:
        builder(doc)
    except (ComplexError, RelationError, CoveringError, UniformizeError,
            KeyError) as e:
        _write(args.output, f"verify: fail\nkind: {kind}\ndetail: {e}\n")
        return EXIT_CERT
    _write(args.output, f"verify: pass\nkind: {kind}\n")
    return EXIT_PASS


# -------------------------------------------------------------------- main


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="lamcover",
        description="Finite triangulated laminations: instance generation, "
                    "covering pipelines, rendering, verification.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="emit an instance document")
    g.add_argument("kind", choices=["grid_window", "block_filtration",
                                    "linear_foliation_window", "suspension"])
    g.add_argument("--output", default=None)
    g.add_argument("--radius", type=int, default=4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--blocks", default=None,
                   help="comma list of block sizes (default: powers of 2)")
    g.add_argument("--slope", default=None,
                   help="rational slope approximants 'p/q[,p/q]'")
    g.add_argument("--size", type=int, default=12,
                   help="vertical size for generated suspensions")
    g.set_defaults(fn=_cmd_generate)

    r = sub.add_parser("run", help="execute the pipeline for a document")
    r.add_argument("--input", required=True)
    r.add_argument("--output", default=None)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--qmax", type=int, default=None)
    r.add_argument("--retries", type=int, default=4)
    r.add_argument("--weights", choices=["cotangent", "uniform"],
                   default="cotangent")
    r.add_argument("--svg", default=None)
    r.set_defaults(fn=_cmd_run)

    d = sub.add_parser("render", help="render a document as SVG")
    d.add_argument("--input", required=True)
    d.add_argument("--output", default=None)
    d.set_defaults(fn=_cmd_render)

    v = sub.add_parser("verify", help="validate a document's invariants")
    v.add_argument("--input", required=True)
    v.add_argument("--output", default=None)
    v.set_defaults(fn=_cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (CliInputError, DocumentError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    except (ComplexError, RelationError, CoveringError, UniformizeError) as e:
        sys.stderr.write(f"certificate failure: {e}\n")
        return EXIT_CERT


if __name__ == "__main__":
    sys.exit(main())
