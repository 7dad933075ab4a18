"""Command-line front end: expansion, verification sweeps, and the oracles.

Report files are split into a metadata envelope (timestamps, versions)
and a deterministic report payload: identical configurations produce
byte-identical payloads, so reports can be diffed across runs.

Exit codes: 0 all checks passed, 1 a verification or oracle comparison
failed, 2 configuration or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

REPORT_SCHEMA = 1


@dataclass
class SweepConfig:
    n_range: range = field(default_factory=lambda: range(3, 13))
    k_min: int = 1
    ell_range: range = field(default_factory=lambda: range(1, 7))
    theorems: tuple[str, ...] = ("factorization", "MMstar", "LG", "bezout", "kernel")
    j_value: Fraction = Fraction(1)
    output: Path | None = None
    fmt: str = "json"


def _emit_report(payload: dict, output: Path | None) -> None:
    doc = {
        "meta": {"generated_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                 "tool": "formlap"},
        "report": payload,
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def report_payload_bytes(path: Path) -> bytes:
    """The deterministic payload of a written report (for diffing)."""
    doc = json.loads(path.read_text())
    return (json.dumps(doc["report"], indent=2, sort_keys=True) + "\n").encode()


# -- expand ---------------------------------------------------------------------


def cmd_expand(args: argparse.Namespace) -> int:
    from .coeffring import render_ratj
    from .factory import build_L_definition, closed_factors
    from .forms import FormAlgebraError, proportionality

    try:
        expanded = build_L_definition(args.n, args.k, args.ell)
        factored = closed_factors(args.n, args.k, args.ell)
    except FormAlgebraError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    c = proportionality(factored.product(), expanded)
    assert c is not None
    if args.format == "text":
        print(f"definition expansion: {expanded.render()}")
        print("factors: [" + ", ".join(f.render() for f in factored.factors) + "]")
        print(f"factored = ({render_ratj(c)}) * definition")
    elif args.format == "latex":
        print(expanded.render(latex=True))
        print(" \\cdot ".join("\\left(" + f.render(latex=True) + "\\right)"
                              for f in factored.factors))
    else:
        payload = {
            "schema": REPORT_SCHEMA,
            "params": {"n": args.n, "k": args.k, "ell": args.ell},
            "definition": {m: str(v) for m, v in expanded.monomials().items()},
            "factors": [{m: str(v) for m, v in f.monomials().items()}
                        for f in factored.factors],
            "proportionality": render_ratj(c),
        }
        _emit_report(payload, args.output)
    return 0


# -- verify ---------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    from .verify import run_sweep

    cfg = SweepConfig(
        n_range=range(args.n_min, args.n_max + 1),
        ell_range=range(1, args.ell_max + 1),
        theorems=tuple(args.theorems),
        j_value=Fraction(args.j_value),
        output=args.output,
    )
    reports = run_sweep(list(cfg.theorems), cfg.n_range, args.ell_max, cfg.j_value)
    failures = [r for r in reports if not r.passed]
    payload = {
        "schema": REPORT_SCHEMA,
        "config": {
            "n_range": [cfg.n_range.start, cfg.n_range.stop - 1],
            "ell_max": args.ell_max,
            "theorems": sorted(cfg.theorems),
            "j_value": str(cfg.j_value),
        },
        "results": [r.as_json() for r in reports],
        "summary": {"checks": len(reports), "failed": len(failures)},
    }
    try:
        _emit_report(payload, cfg.output)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    for r in failures[:10]:
        print(f"FAIL {r.theorem} {r.params}: {r.witness}", file=sys.stderr)
    return 0 if not failures else 1


# -- oracles ---------------------------------------------------------------------


def cmd_oracle_torus(args: argparse.Namespace) -> int:
    from .torus import compare_pipelines, random_modes

    cells = []
    status_ok = True
    for n in args.n:
        for k in range(1, n // 2 + 1):
            for ell in range(1, args.ell_max + 1):
                modes = random_modes(n, args.modes, args.seed)
                rep = compare_pipelines(n, k, ell, modes)
                cells.append(rep)
                status_ok &= rep["status"] == "pass"
    payload = {
        "schema": REPORT_SCHEMA,
        "config": {"n": list(args.n), "ell_max": args.ell_max,
                   "modes": args.modes, "seed": args.seed},
        "results": cells,
        "summary": {"cells": len(cells),
                    "max_discrepancy": max(c["max_discrepancy"] for c in cells)},
    }
    try:
        _emit_report(payload, args.output)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    if not status_ok:
        bad = [c for c in cells if c["status"] != "pass"]
        print(f"torus oracle mismatch in {len(bad)} cells, e.g. {bad[0]}", file=sys.stderr)
        return 1
    return 0


def cmd_oracle_dec(args: argparse.Namespace) -> int:
    from .dec import (MeshError, betti_numbers, build_mesh_cached, compare_sphere_spectrum,
                      dec_import_model, subdivide_barycentric, unit_sphere_edge_scale)
    from .spectral import sphere_preset

    try:
        if args.mesh == "torus3-grid" and (args.size is None or args.size < 3):
            raise MeshError("torus3-grid needs --size m with m >= 3")
        mesh = build_mesh_cached(args.mesh, args.size)
    except MeshError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    if args.subdivide:
        mesh = subdivide_barycentric(mesh, project_radius=1.0 if args.mesh != "torus3-grid" else None)
    payload: dict = {
        "schema": REPORT_SCHEMA,
        "config": {"mesh": args.mesh, "size": args.size, "k": args.k,
                   "eigs": args.eigs, "subdivide": bool(args.subdivide)},
        "betti": list(betti_numbers(mesh)),
    }
    ok = True
    if args.mesh in ("cell600", "boundary-4-simplex"):
        ref = sphere_preset(3, args.k, j_max=4)
        reference = [(p.kind, p.eigenvalue, p.multiplicity) for p in ref.points
                     if p.kind != "harmonic"]
        cmp = compare_sphere_spectrum(mesh, args.k, args.eigs, reference)
        payload["sphere_comparison"] = cmp
        ok &= cmp["max_rel_error"] <= args.rtol
        if args.promote is not None:
            model = dec_import_model(mesh, args.k, args.eigs, rtol=args.rtol)
            model.save(args.promote)
            payload["promoted_to"] = str(args.promote)
    try:
        _emit_report(payload, args.output)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    return 0 if ok else 1


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="formlap", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="expanded and factored operator for one (n, k, ell)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--format", choices=("text", "json", "latex"), default="text")
    p.add_argument("--output", type=Path, default=None)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("verify", help="verification sweep over a parameter grid")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--ell-max", type=int, default=6)
    p.add_argument("--theorems", nargs="+", default=["factorization", "MMstar", "LG", "bezout", "kernel"],
                   choices=["factorization", "MMstar", "LG", "bezout", "kernel"])
    p.add_argument("--j-value", default="1")
    p.add_argument("--output", type=Path, default=None)
    p.set_defaults(func=cmd_verify)

    po = sub.add_parser("oracle", help="numerical oracles")
    osub = po.add_subparsers(dest="oracle_kind", required=True)

    p = osub.add_parser("torus", help="flat-torus mode-matrix comparison")
    p.add_argument("--n", type=int, nargs="+", default=[3, 4, 5])
    p.add_argument("--ell-max", type=int, default=3)
    p.add_argument("--modes", type=int, default=20)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--output", type=Path, default=None)
    p.set_defaults(func=cmd_oracle_torus)

    p = osub.add_parser("dec", help="simplicial mesh oracle")
    p.add_argument("--mesh", choices=("cell600", "boundary-4-simplex", "torus3-grid"),
                   required=True)
    p.add_argument("--size", type=int, default=None, help="grid size for torus3-grid")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--eigs", type=int, default=40)
    p.add_argument("--rtol", type=float, default=0.10)
    p.add_argument("--subdivide", action="store_true")
    p.add_argument("--promote", type=Path, default=None,
                   help="write a dec-import spectral model file after matching")
    p.add_argument("--output", type=Path, default=None)
    p.set_defaults(func=cmd_oracle_dec)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
