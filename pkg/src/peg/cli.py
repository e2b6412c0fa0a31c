"""Command-line driver: curve checks, rectangle searches, obstruction tests.

JSON is written for every command (stdout or --out); tables additionally as
CSV, geometry optionally as SVG.  Exit codes: 0 = success (any verdict,
including PreconditionFailed), 2 = usage error, 3 = internal error.
Timing goes to stderr so that exact-wing JSON stays byte-identical across
runs and worker counts.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .curves import PlaneCurve, circle, ellipse, is_simple, lipschitz_certificate, lipschitz_perturbed_circle
from .dinvariants import d_table, smooth_mobius_obstruction, spinc_classes
from .lattices import two_bridge_check
from .linking import find_obstructed_k, form_from_presentation, mobius_obstruction_topological, my_check, torus_sigma_matrix
from .rectangles import SearchConfig, find_rectangles, sweep, verify_rectangle
from .report import exact
from .seifert import PairCertificate, build_Mk, extend_certificate, gamma4_bounds
from .exactmat import IntMatrix


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("PEG_WORKERS", "1")))
    except ValueError:
        return 1


def load_curve(spec: str, samples: int) -> PlaneCurve:
    if spec.startswith("preset:"):
        parts = spec.split(":")
        name = parts[1]
        args = [float(x) for x in parts[2].split(",")] if len(parts) > 2 and parts[2] else []
        if name == "circle":
            return circle(*(args or [1.0]), samples=samples)
        if name == "ellipse":
            return ellipse(*(args or [2.0, 1.0]), samples=samples)
        if name in ("lipschitz", "lipschitz_perturbed_circle"):
            seed = int(args[0]) if args else 0
            amp = args[1] if len(args) > 1 else 0.05
            return lipschitz_perturbed_circle(seed=seed, amplitude=amp, samples=samples)
        raise ValueError(f"unknown preset {name!r}")
    if spec.endswith(".csv"):
        return PlaneCurve.from_csv(spec)
    return PlaneCurve.from_json(spec)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _bundle(command: str, inputs: dict, results) -> dict:
    return {
        "tool": f"peg {__version__}",
        "command": command,
        "inputs": exact(inputs),
        "results": results,
    }


def write_svg(path: str, curve: PlaneCurve, hits) -> None:
    lo = curve.vertices.min(axis=0)
    hi = curve.vertices.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    margin = 0.05 * float(span.max())
    x0, y0 = lo - margin
    w, h = (hi - lo) + 2 * margin

    def pt(p):
        # flip y so the figure reads with the usual orientation
        return f"{p[0]:.6f},{(2 * y0 + h) - p[1]:.6f}"

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.6f} {y0:.6f} {w:.6f} {h:.6f}">',
        f'<polygon points="{" ".join(pt(v) for v in curve.vertices)}" '
        f'fill="none" stroke="black" stroke-width="{0.002 * max(w, h):.6f}"/>',
    ]
    for hit in hits:
        lines.append(
            f'<polygon points="{" ".join(pt(v) for v in hit.vertices)}" '
            f'fill="none" stroke="red" stroke-width="{0.003 * max(w, h):.6f}"/>'
        )
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_knot(text: str):
    text = text.strip().upper().replace(" ", "")
    if not (text.startswith("T(") and text.endswith(")")):
        raise ValueError(f"cannot parse torus knot {text!r}; expected T(p,q)")
    p, q = (int(x) for x in text[2:-1].split(","))
    even, odd = (p, q) if p % 2 == 0 else (q, p)
    if even % 2 != 0 or odd % 2 == 0 or abs(even - odd) != 1:
        raise ValueError(f"expected a T(2n, 2n+-1) torus knot, got {text!r}")
    n = even // 2
    sign = 1 if odd == even + 1 else -1
    return n, sign


def cmd_curve_check(args) -> dict:
    curve = load_curve(args.curve, args.samples)
    simple = is_simple(curve)
    eps = args.epsilon if args.epsilon is not None else 0.05 * curve.diameter()
    cert = lipschitz_certificate(curve, eps, angle_grid=args.angles)
    failures = [
        {"vertex": r.index, "reason": r.reason}
        for r in cert.failures()[:20]
    ]
    return {
        "curve": curve.source,
        "vertices": len(curve),
        "simple": simple,
        "epsilon": eps,
        "lipschitz_certified": cert.certified,
        "uncertified_vertices": len(cert.failures()),
        "first_failures": failures,
    }


def cmd_rect_find(args) -> dict:
    curve = load_curve(args.curve, args.samples)
    cfg = SearchConfig(grid=args.grid, tolerance=args.tol, max_hits=args.max_hits)
    hits = find_rectangles(curve, args.n, min_diameter=args.min_diameter, cfg=cfg)
    if args.svg:
        write_svg(args.svg, curve, hits)
    return {
        "curve": curve.source,
        "n": args.n,
        "hits": [
            {**h.to_json(), "check_max_residual": verify_rectangle(h, curve).max_residual()}
            for h in hits
        ],
    }


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(x) for x in text.split(",")]


def cmd_rect_sweep(args) -> dict:
    curve = load_curve(args.curve, args.samples)
    cfg = SearchConfig(grid=args.grid, tolerance=args.tol, max_hits=args.max_hits)
    rows = sweep(curve, _parse_range(args.n), cfg=cfg, workers=_workers())
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "k", "aspect", "diameter", "residual"])
            writer.writerows(r.as_tuple() for r in rows)
    return {
        "curve": curve.source,
        "rows": [
            {"n": r.n, "k": r.k, "aspect": r.aspect, "diameter": r.diameter, "residual": r.residual}
            for r in rows
        ],
    }


def cmd_obstruct_torus(args) -> dict:
    n, sign = _parse_knot(args.knot)
    m = torus_sigma_matrix(n, sign)
    form = form_from_presentation(m)
    report = my_check(form, 2 * n + sign)
    report.subject = f"T({2 * n},{2 * n + sign})"
    return report.to_json()


def cmd_obstruct_torus_even(args) -> dict:
    sign = 1 if args.sign in ("+", "+1", "1") else -1
    ks = find_obstructed_k(args.p, sign, args.count, args.bound)
    return {
        "p": args.p,
        "sign": sign,
        "found_k": ks,
        "reports": [mobius_obstruction_topological(args.p, k, sign).to_json() for k in ks],
    }


def cmd_obstruct_smooth_torus(args) -> dict:
    return smooth_mobius_obstruction(args.n).to_json()


def cmd_obstruct_two_bridge(args) -> dict:
    return two_bridge_check(args.p).to_json()


def cmd_genus_torus(args) -> dict:
    bounds = gamma4_bounds(args.n)
    payload = bounds.to_json()
    if args.verify:
        a_txt, b_txt = args.verify.split(":")
        a = tuple(int(x) for x in a_txt.split(","))
        b = tuple(int(x) for x in b_txt.split(","))
        cert = extend_certificate(PairCertificate(a=a, b=b, products=(0, 0, 0, 0)), build_Mk(args.n, 1))
        payload["verify"] = {
            "a": list(cert.a),
            "b": list(cert.b),
            "products": list(cert.products),
            "valid": cert.is_valid(),
        }
    return payload


def cmd_dinv(args) -> dict:
    classes = spinc_classes(args.n)
    payload = {"n": args.n, "class_count": len(classes)}
    if args.table:
        table = d_table(args.n)
        rows = [
            {
                "index": cls.index,
                "representative": list(cls.representative),
                "d": exact(table[cls][0]),
                "eta_max": list(table[cls][1]),
            }
            for cls in classes
        ]
        payload["table"] = rows
        if args.csv:
            with open(args.csv, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["index", "eta1", "eta2", "d", "eta_max1", "eta_max2"])
                for row in rows:
                    writer.writerow(
                        [row["index"], *row["representative"], row["d"], *row["eta_max"]]
                    )
    return payload


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="peg", description=__doc__)
    ap.add_argument("--version", action="version", version=f"peg {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", help="write JSON here instead of stdout")

    def add_curve(p):
        p.add_argument("--curve", required=True, help="preset:name:args or a .json/.csv path")
        p.add_argument("--samples", type=int, default=4096)

    p = sub.add_parser("curve", help="curve validation")
    csub = p.add_subparsers(dest="subcommand", required=True)
    pc = csub.add_parser("check", help="simplicity and Lipschitz certification")
    add_curve(pc)
    pc.add_argument("--epsilon", type=float, default=None)
    pc.add_argument("--angles", type=int, default=64)
    add_out(pc)
    pc.set_defaults(handler=cmd_curve_check, name="curve check")

    p = sub.add_parser("rect", help="inscribed rectangle search")
    rsub = p.add_subparsers(dest="subcommand", required=True)
    pf = rsub.add_parser("find")
    add_curve(pf)
    pf.add_argument("--n", type=int, required=True)
    pf.add_argument("--min-diameter", type=float, default=0.0)
    pf.add_argument("--grid", type=int, default=1024)
    pf.add_argument("--tol", type=float, default=1e-7)
    pf.add_argument("--max-hits", type=int, default=8)
    pf.add_argument("--svg", help="draw the curve and hits to this SVG file")
    add_out(pf)
    pf.set_defaults(handler=cmd_rect_find, name="rect find")
    ps = rsub.add_parser("sweep")
    add_curve(ps)
    ps.add_argument("--n", required=True, help="range like 2..6 or list 2,3,4")
    ps.add_argument("--grid", type=int, default=1024)
    ps.add_argument("--tol", type=float, default=1e-7)
    ps.add_argument("--max-hits", type=int, default=4)
    ps.add_argument("--csv", help="write the table as CSV here")
    add_out(ps)
    ps.set_defaults(handler=cmd_rect_sweep, name="rect sweep")

    p = sub.add_parser("obstruct", help="Moebius-band obstructions")
    osub = p.add_subparsers(dest="subcommand", required=True)
    pt = osub.add_parser("torus", help="linking-form test for T(2n, 2n+-1)")
    pt.add_argument("--knot", required=True, help="e.g. T(4,5)")
    add_out(pt)
    pt.set_defaults(handler=cmd_obstruct_torus, name="obstruct torus")
    pe = osub.add_parser("torus-even", help="constructive family T(2p, 2kp+-1)")
    pe.add_argument("--p", type=int, required=True)
    pe.add_argument("--sign", default="+", choices=["+", "-", "+1", "-1", "1"])
    pe.add_argument("--count", type=int, default=1)
    pe.add_argument("--bound", type=int, default=10**4)
    add_out(pe)
    pe.set_defaults(handler=cmd_obstruct_torus_even, name="obstruct torus-even")
    pst = osub.add_parser("smooth-torus", help="correction-term test for T(2n, 2n+1)")
    pst.add_argument("--n", type=int, required=True)
    add_out(pst)
    pst.set_defaults(handler=cmd_obstruct_smooth_torus, name="obstruct smooth-torus")
    p2 = osub.add_parser("two-bridge", help="lattice-embedding test for K(p/(p-2))")
    p2.add_argument("--p", type=int, required=True)
    add_out(p2)
    p2.set_defaults(handler=cmd_obstruct_two_bridge, name="obstruct two-bridge")

    p = sub.add_parser("genus", help="non-orientable 4-genus bounds")
    gsub = p.add_subparsers(dest="subcommand", required=True)
    pg = gsub.add_parser("torus")
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--verify", help="replay vectors, e.g. '-1,-1,0,1:4,1,2,-4'")
    add_out(pg)
    pg.set_defaults(handler=cmd_genus_torus, name="genus torus")

    pd = sub.add_parser("dinv", help="correction-term table")
    pd.add_argument("--n", type=int, required=True)
    pd.add_argument("--table", action="store_true")
    pd.add_argument("--csv", help="write the table as CSV here")
    add_out(pd)
    pd.set_defaults(handler=cmd_dinv, name="dinv")

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    try:
        results = args.handler(args)
        inputs = {
            k: v
            for k, v in vars(args).items()
            if k not in ("handler", "name", "command", "subcommand", "out") and v is not None
        }
        payload = _bundle(args.name, inputs, results)
        _emit(payload, getattr(args, "out", None))
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception:
        import traceback

        traceback.print_exc()
        return 3
    finally:
        print(f"timing: {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
