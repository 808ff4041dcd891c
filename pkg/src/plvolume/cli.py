"""Command-line interface.

Every command prints one JSON object on stdout.  Exit codes: 0 ok,
1 verification failure, 2 input error.  Errors carry an ``error`` field
``{"type": ..., "message": ...}``.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from .documents import parse_chain, parse_mesh, read_mesh, write_chain, write_mesh
from .equalizer import STRATEGIES, equalize, evaluate_chain
from .exceptions import ParseError, PLVolumeError, ValidationError
from .forms import diff_cocycle
from .generators import GENERATORS, generate
from .render import render_svg
from .simplicial import is_coherent, orient
from .transfer import TransferSpec, solve_transfer, verify_transfer

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2


class CliError(PLVolumeError):
    pass


def _emit(payload: dict, out) -> None:
    out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write(path: str | None, text: str, out) -> None:
    if path in (None, "-"):
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _rat(x) -> str:
    return str(Fraction(x))


def _point(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise CliError(f"bad point {text!r}; use comma-separated rationals like 1/3,1/4") from None


# -- commands ---------------------------------------------------------------

def cmd_check(args, out) -> int:
    doc = parse_mesh(_read(args.mesh), orient_if_missing=False, check_intersections=not args.fast)
    K = doc.complex
    report = {
        "ok": True,
        "dimension": K.dim,
        "ambient_dimension": K.ambient_dim,
        "vertices": len(K.vertices),
        "cells": K.n_cells,
        "pseudomanifold": K.is_pseudomanifold,
        "closed": K.is_closed,
        "components": len(K.components()),
        "euler_characteristic": K.euler_characteristic,
    }
    if not K.is_pseudomanifold:
        report.update(ok=False, error={"type": "NonPseudomanifold", "message": "a facet lies in more than two cells"})
        _emit(report, out)
        return EXIT_VERIFY
    try:
        oriented = K if K.oriented else orient(K)
        report["orientable"] = True
        report["orientation"] = [c.orientation for c in oriented.cells]
        report["coherent"] = is_coherent(oriented)
    except PLVolumeError as exc:
        report.update(ok=False, orientable=False, error={"type": type(exc).__name__, "message": str(exc)})
        _emit(report, out)
        return EXIT_VERIFY
    if args.closed and not K.is_closed:
        report.update(ok=False, error={"type": "NotClosed", "message": "complex has boundary"})
        _emit(report, out)
        return EXIT_VERIFY
    _emit(report, out)
    return EXIT_OK


def cmd_cocycle(args, out) -> int:
    doc = read_mesh(args.mesh)
    form = doc[args.name]
    payload = {
        "ok": True,
        "name": args.name,
        "cocycle": [_rat(x) for x in form.values],
        "total": _rat(form.total),
        "density": [round(d, 12) for d in form.densities()],
    }
    if args.minus:
        other = doc[args.minus]
        payload["diff"] = [_rat(x) for x in diff_cocycle(other, form).values]
        payload["totals_match"] = other.total == form.total
    _emit(payload, out)
    return EXIT_OK


def cmd_canonical(args, out) -> int:
    doc = parse_mesh(_read(args.mesh), orient_if_missing=not args.keep_unoriented)
    _write(args.out, write_mesh(doc), out)
    return EXIT_OK


def cmd_equalize(args, out) -> int:
    doc = read_mesh(args.mesh)
    omega2, omega1 = doc[args.from_], doc[args.to]
    chain, cert = equalize(doc.complex, omega1, omega2, args.strategy, args.closed_only)
    text = write_chain(chain, omega1, omega2, cert)
    if args.out:
        _write(args.out, text, out)
    _emit({
        "ok": cert.passed,
        "steps": len(chain),
        "iterations": cert.iterations,
        "bound": cert.bound,
        "final_diff_zero": not any(cert.final_diff),
        "failures": cert.failures,
        "out": args.out,
    }, out)
    return EXIT_OK if cert.passed else EXIT_VERIFY


def cmd_verify(args, out) -> int:
    doc = parse_chain(_read(args.chain))
    cert = doc.certificate
    failures = list(cert.failures)
    if args.mesh:
        mesh = read_mesh(args.mesh)
        if mesh.complex != doc.chain.complex:
            failures.append("chain was built on a different complex")
        if args.from_ and mesh[args.from_].values != doc.omega2.values:
            failures.append("chain does not start at the given form")
        if args.to and mesh[args.to].values != doc.omega1.values:
            failures.append("chain does not end at the given form")
    ok = not failures
    _emit({
        "ok": ok,
        "steps": len(doc.chain),
        "iterations": cert.iterations,
        "bound": cert.bound,
        "failures": failures,
    }, out)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_eval(args, out) -> int:
    doc = parse_chain(_read(args.chain))
    if not doc.certificate.passed:
        _emit({"ok": False, "error": {"type": "VerificationFailed", "message": "; ".join(doc.certificate.failures)}}, out)
        return EXIT_VERIFY
    p = _point(args.point)
    img = evaluate_chain(doc.chain, p, args.inverse)
    _emit({
        "ok": True,
        "point": [_rat(x) for x in p],
        "image": [_rat(x) for x in img],
        "image_float": [float(x) for x in img],
        "inverse": args.inverse,
    }, out)
    return EXIT_OK


def cmd_render(args, out) -> int:
    doc = read_mesh(args.mesh)
    form = doc[args.cocycle] if args.cocycle else None
    chain = parse_chain(_read(args.chain)).chain if args.chain else None
    _write(args.out, render_svg(doc.complex, form, chain), out)
    return EXIT_OK


def cmd_gen(args, out) -> int:
    params: dict = {}
    base = None
    if args.kind == "random-cocycle":
        if not args.mesh:
            raise CliError("random-cocycle needs --mesh")
        base = read_mesh(args.mesh)
        try:
            params = {"seed": args.seed, "total": Fraction(args.total), "name": args.name}
        except (ValueError, ZeroDivisionError):
            raise CliError(f"bad total {args.total!r}") from None
    else:
        for key in ("m", "k", "n"):
            val = getattr(args, key)
            if val is not None:
                params[key] = val
    _write(args.out, write_mesh(generate(args.kind, params, base)), out)
    return EXIT_OK


def cmd_transfer(args, out) -> int:
    doc = read_mesh(args.mesh)
    form = doc[args.form]
    try:
        amount = Fraction(args.amount)
    except (ValueError, ZeroDivisionError):
        raise CliError(f"bad amount {args.amount!r}") from None
    step = solve_transfer(doc.complex, form, TransferSpec(args.sigma, args.tau, amount))
    report = verify_transfer(step, form)
    K = doc.complex
    _emit({
        "ok": report.passed,
        "points": {name: [_rat(x) for x in K.coords(getattr(step, name))]
                   for name in ("v", "w", "u_sigma", "u_tau")},
        "volumes_after": [_rat(x) for x in step.result_volumes],
        "checks": report.checks,
    }, out)
    return EXIT_OK if report.passed else EXIT_VERIFY


_PHIS = {
    "id": lambda x: x,
    "2x": lambda x: 2 * x,
    "x2": lambda x: x * x,
    "sinh": np.sinh,
}
_DENSITIES = {
    "1": lambda x, y: np.ones_like(x),
    "c": lambda x, y: 2.5 * np.ones_like(x),
    "1+x/2": lambda x, y: 1 + x / 2,
}


def cmd_lab(args, out) -> int:
    from . import lab

    if args.lab_command == "mollifier":
        m = lab.make_mollifier(args.delta)
        _emit({"ok": True, "delta": m.delta, "mass": m.mass, "integral": m.integral()}, out)
    elif args.lab_command == "interpolate":
        interp = lab.interpolate_to_identity(_PHIS[args.phi], args.R)
        head, tail = interp.endpoint_errors()
        if args.csv:
            interp.write_csv(args.csv, args.samples)
        xs = interp.grid(args.samples)
        _emit({
            "ok": True, "eps": interp.eps, "delta": interp.delta, "r": interp.r,
            "head_error": head, "tail_error": tail,
            "min_increment": float(np.min(np.diff(interp(xs)))),
            "smoothing_gap": interp.smoothing_gap(),
        }, out)
    else:
        fr = lab.fiber_rescale(_DENSITIES[args.F])
        pts = fr.grid(args.spacing, margin=args.spacing)
        F = _DENSITIES[args.F](pts[:, 0], pts[:, 1])
        dev = float(np.max(np.abs(fr.jacobian_det(pts) - F)))
        _emit({"ok": dev <= args.tol, "points": int(len(pts)), "max_jacobian_error": dev,
               "image_area": fr.image_area()}, out)
        return EXIT_OK if dev <= args.tol else EXIT_VERIFY
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plvolume", description="Exact equalization of piecewise-constant volume forms.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="validate a mesh: complex axioms, pseudomanifold, orientability")
    s.add_argument("--mesh", required=True)
    s.add_argument("--closed", action="store_true", help="also require a closed pseudomanifold")
    s.add_argument("--fast", action="store_true", help="skip the pairwise intersection test")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("cocycle", help="show a named cocycle, optionally minus another")
    s.add_argument("--mesh", required=True)
    s.add_argument("--name", required=True)
    s.add_argument("--minus")
    s.set_defaults(func=cmd_cocycle)

    s = sub.add_parser("canonical", help="rewrite a mesh document in canonical form")
    s.add_argument("--mesh", required=True)
    s.add_argument("--out")
    s.add_argument("--keep-unoriented", action="store_true")
    s.set_defaults(func=cmd_canonical)

    s = sub.add_parser("equalize", help="build a transfer chain pulling one form back to another")
    s.add_argument("--mesh", required=True)
    s.add_argument("--from", dest="from_", required=True, help="cocycle that is pulled back")
    s.add_argument("--to", required=True, help="cocycle to reach")
    s.add_argument("--out")
    s.add_argument("--strategy", choices=sorted(STRATEGIES), default="bfs")
    s.add_argument("--closed-only", action="store_true")
    s.set_defaults(func=cmd_equalize)

    s = sub.add_parser("verify", help="re-verify a chain document from scratch")
    s.add_argument("--chain", required=True)
    s.add_argument("--mesh")
    s.add_argument("--from", dest="from_")
    s.add_argument("--to")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("eval", help="evaluate a chain at a point")
    s.add_argument("--chain", required=True)
    s.add_argument("--point", required=True)
    s.add_argument("--inverse", action="store_true")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("render", help="draw a 2-dimensional mesh as SVG")
    s.add_argument("--mesh", required=True)
    s.add_argument("--cocycle")
    s.add_argument("--chain")
    s.add_argument("--out")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("gen", help="generate a test mesh or cocycle")
    s.add_argument("kind", choices=GENERATORS)
    s.add_argument("--m", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--mesh")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--total", default="1")
    s.add_argument("--name", default="random")
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("transfer", help="solve and verify one volume transfer")
    s.add_argument("--mesh", required=True)
    s.add_argument("--form", required=True)
    s.add_argument("--sigma", type=int, required=True, help="receiving cell")
    s.add_argument("--tau", type=int, required=True, help="giving cell")
    s.add_argument("--amount", required=True, help="new volume of the giving cell")
    s.set_defaults(func=cmd_transfer)

    s = sub.add_parser("lab", help="numerical experiments (mollifier, interpolation, fiber rescaling)")
    lsub = s.add_subparsers(dest="lab_command", required=True)
    t = lsub.add_parser("mollifier")
    t.add_argument("--delta", type=float, default=1.0)
    t = lsub.add_parser("interpolate")
    t.add_argument("--phi", choices=sorted(_PHIS), default="2x")
    t.add_argument("--R", type=float, default=1.0)
    t.add_argument("--samples", type=int, default=201)
    t.add_argument("--csv")
    t = lsub.add_parser("fiber")
    t.add_argument("--F", choices=sorted(_DENSITIES), default="1+x/2")
    t.add_argument("--spacing", type=float, default=1e-2)
    t.add_argument("--tol", type=float, default=1e-4)
    s.set_defaults(func=cmd_lab)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except PLVolumeError as exc:
        error = {"type": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ParseError) and exc.line is not None:
            error.update(line=exc.line, column=exc.column)
        if isinstance(exc, ValidationError) and exc.cause is not None:
            error["cause"] = exc.kind
        _emit({"ok": False, "error": error}, out)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
