"""Command-line entry point: ``nilshape <command> [flags]``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import balls, ccmetric, counterexamples, dido, shape, solvable
from .group import DimensionError, Element, GroupSpec, homogeneous_dimension, load_group, to_exponential
from .polygon import GeometryError, PolygonalNorm
from .quadrature import QuadratureError

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_NUMERIC = 0, 2, 3, 4


class InputError(Exception):
    pass


class BudgetError(Exception):
    pass


def _rat(q) -> str:
    return shape.rational_str(q)


def _real(x) -> str:
    return repr(float(x))


def _parse_points(text: str) -> list[tuple[Fraction, ...]]:
    """``"x,y;x,y"`` with integer, decimal or ``p/q`` entries."""
    pts = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            pts.append(tuple(Fraction(tok.strip()) for tok in chunk.split(",")))
    return pts


def _group(args) -> GroupSpec:
    try:
        return load_group(args.group)
    except (ValueError, OSError) as exc:
        raise InputError(str(exc)) from None


def _gens(args, G: GroupSpec) -> balls.GeneratingSet:
    if args.gens in (None, "standard"):
        return balls.GeneratingSet.standard(G)
    path = Path(args.gens)
    if not path.exists():
        raise InputError(f"generating-set file {args.gens!r} not found")
    return balls.GeneratingSet.load(G, path)


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands --------------------------------------------------------------


def cmd_growth(args) -> int:
    G = _group(args)
    omega = _gens(args, G)
    table = balls.ball_sizes(omega, args.nmax, workers=args.workers, memory_budget=args.memory_budget)
    d = homogeneous_dimension(G.dims)
    if args.format == "json":
        text = json.dumps(
            {
                "group": G.name,
                "d": d,
                "rows": [{"n": n, "ball": b, "sphere": s} for n, b, s in table.rows],
                "truncated": table.truncated,
            },
            indent=1,
            sort_keys=True,
        ) + "\n"
    else:
        text = table.to_csv(d)
    _emit(args, text)
    if table.truncated:
        raise BudgetError(f"memory budget reached after n={table.nmax}")
    return EXIT_OK


def _element(G: GroupSpec, text: str) -> Element:
    vals = [int(Fraction(v)) for v in text.replace(";", ",").replace(" ", ",").split(",") if v]
    if len(vals) == G.m:
        vals += [0] * G.c
    if len(vals) != G.dim:
        raise InputError(f"element needs {G.dim} coordinates")
    return Element.of(vals[: G.m], vals[G.m :])


def cmd_wordlen(args) -> int:
    G = _group(args)
    omega = _gens(args, G)
    res = balls.word_length(omega, _element(G, args.element), args.cap)
    if res is None:
        raise BudgetError(f"word length exceeds the cap {args.cap}")
    _emit(args, f"{res}\n")
    return EXIT_OK


def _shape(args):
    G = _group(args)
    return shape.limit_shape(_gens(args, G))


def cmd_shape(args) -> int:
    sh = _shape(args)
    if args.format == "svg":
        text = shape.mesh_to_svg(shape.shape_boundary_mesh(sh, args.resolution))
    else:
        text = shape.shape_to_json(sh, samples=args.resolution)
    _emit(args, text)
    return EXIT_OK


def cmd_volume(args) -> int:
    sh = _shape(args)
    if isinstance(sh.profile, shape.PolygonProfile):
        text = _rat(sh.profile.volume()) + "\n"
    elif isinstance(sh.profile, shape.H5Profile):
        if args.samples:
            est = shape.h5_volume_monte_carlo(args.samples, seed=args.seed)
        else:
            est = shape.shape_volume_h5(tol=args.tol, workers=args.workers)
        text = f"{_real(est.value)} +- {_real(est.error)}\n"
    else:
        raise InputError("volume is available for planar abelianizations and standard H5")
    _emit(args, text)
    return EXIT_OK


def cmd_ccdist(args) -> int:
    sh = _shape(args)
    G = sh.group
    pts = np.array([[float(v) for v in p] for p in _parse_points(args.point)])
    if pts.shape[1] != G.dim:
        raise InputError(f"points need {G.dim} coordinates")
    if args.normal_form:
        pts = to_exponential(G, pts)
    d = np.atleast_1d(ccmetric.cc_distance(sh, pts))
    _emit(args, "".join(_real(x) + "\n" for x in d))
    return EXIT_OK


def cmd_converge(args) -> int:
    G = _group(args)
    omega = _gens(args, G)
    radii = [int(r) for r in args.radii.split(",")] if args.radii else None
    rep = ccmetric.pansu_convergence(omega, nmax=args.nmax, radii=radii, hausdorff=args.hausdorff, workers=args.workers)
    _emit(args, rep.to_csv())
    return EXIT_OK


def cmd_dido(args) -> int:
    if args.polygon:
        P = PolygonalNorm(_parse_points(args.polygon))
    else:
        G = _group(args)
        P = shape.limit_norm(_gens(args, G))
        if not isinstance(P, PolygonalNorm):
            raise InputError("dido needs a planar norm")
    v = _parse_points(args.point)
    if len(v) != 1 or len(v[0]) != 2:
        raise InputError("--point takes one planar point")
    sol = dido.dido_solve(P, v[0], Fraction(args.length))
    out = {
        "area": _rat(sol.area),
        "multiplicity": "inf" if sol.multiplicity == float("inf") else sol.multiplicity,
        "configurations": [
            {"start_edge": c.start_edge, "corners": c.corners, "scale": _rat(c.r), "center": [_rat(c.c[0]), _rat(c.c[1])]}
            for c in sol.configurations
        ],
    }
    text = json.dumps(out, indent=1, sort_keys=True) + "\n" if args.format == "json" else _rat(sol.area) + "\n"
    _emit(args, text)
    return EXIT_OK


def cmd_cone(args) -> int:
    o0 = [[float(x) for x in p] for p in _parse_points(args.omega0)] if args.omega0 else []
    o1 = [[float(x) for x in p] for p in _parse_points(args.omega1)]
    cs = solvable.cone_shape(o0, o1)
    if args.format == "json":
        text = json.dumps(cs.to_json(), indent=1, sort_keys=True) + "\n"
    else:
        text = f"r0={_real(cs.r0)}\nr1={_real(cs.r1)}\nr2={_real(cs.r2)}\n"
    _emit(args, text)
    return EXIT_OK


def cmd_slowspeed(args) -> int:
    witnesses = [int(w) for w in args.witnesses.split(",")]
    if args.exponents:
        alpha = solvable.LiouvilleAlpha(tuple(int(e) for e in args.exponents.split(",")), tuple(witnesses))
    else:
        alpha = solvable.construct_alpha(witnesses, args.eps)
    certs = solvable.slow_speed_certificate(alpha, args.eps, witnesses)
    _emit(args, solvable.certificates_json(alpha, certs))
    if not certs:
        logging.getLogger(__name__).warning("no radius certified")
    return EXIT_OK


def cmd_bm(args) -> int:
    if args.experiment == "gap":
        ns = tuple(int(n) for n in args.n.split(","))
        text = counterexamples.gap_report(ns)
    else:
        text = counterexamples.bm_no_quasinorm_B(args.N).to_json()
    _emit(args, text)
    return EXIT_OK


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilshape", description="Limit shapes of word metrics on nilpotent groups.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=("csv", "json"), group=True):
        if group:
            sp.add_argument("--group", default="H3", help="H3, H5, H3xZ, Z, Z2 or a group file")
            sp.add_argument("--gens", default="standard", help="generating-set file or 'standard'")
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--format", choices=fmt, default=fmt[0])
        sp.add_argument("--tol", type=float, default=1e-7)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--workers", type=int, default=1)
        return sp

    sp = common(sub.add_parser("growth", help="ball and sphere sizes"))
    sp.add_argument("--nmax", type=int, required=True)
    sp.add_argument("--memory-budget", type=int, default=balls.DEFAULT_MEMORY_BUDGET)
    sp.set_defaults(func=cmd_growth)

    sp = common(sub.add_parser("wordlen", help="word length of one element"), fmt=("csv",))
    sp.add_argument("--element", required=True, help="coordinates, e.g. '0,0,1'")
    sp.add_argument("--cap", type=int, default=64)
    sp.set_defaults(func=cmd_wordlen)

    sp = common(sub.add_parser("shape", help="limit shape export"), fmt=("json", "svg"))
    sp.add_argument("--resolution", type=int, default=8)
    sp.set_defaults(func=cmd_shape)

    sp = common(sub.add_parser("volume", help="volume of the limit shape"), fmt=("csv",))
    sp.add_argument("--samples", type=int, default=0, help="Monte-Carlo samples instead of cubature")
    sp.set_defaults(func=cmd_volume)

    sp = common(sub.add_parser("ccdist", help="limit CC distance from the identity"), fmt=("csv",))
    sp.add_argument("--point", required=True, help="points 'x,y,z;...' in exponential coordinates")
    sp.add_argument("--normal-form", action="store_true", help="points are given in normal-form coordinates")
    sp.set_defaults(func=cmd_ccdist)

    sp = common(sub.add_parser("converge", help="Pansu convergence report"), fmt=("csv",))
    sp.add_argument("--nmax", type=int, default=30)
    sp.add_argument("--radii", help="comma-separated radii (default 1..nmax)")
    sp.add_argument("--hausdorff", action="store_true")
    sp.set_defaults(func=cmd_converge)

    sp = common(sub.add_parser("dido", help="maximal balayage area"), fmt=("csv", "json"))
    sp.add_argument("--polygon", help="unit-ball vertices 'x,y;...' (default: limit norm of --gens)")
    sp.add_argument("--point", required=True)
    sp.add_argument("--length", default="1")
    sp.set_defaults(func=cmd_dido)

    sp = common(sub.add_parser("cone", help="cone limit shape radii"), fmt=("csv", "json"), group=False)
    sp.add_argument("--omega0", default="")
    sp.add_argument("--omega1", required=True)
    sp.set_defaults(func=cmd_cone)

    sp = common(sub.add_parser("slowspeed", help="slow-speed certificates"), fmt=("json",), group=False)
    sp.add_argument("--witnesses", default="40,70,100")
    sp.add_argument("--exponents", help="exponents n_i of alpha = sum 3^-n_i (default: constructed)")
    sp.add_argument("--eps", type=float, default=1e-3)
    sp.set_defaults(func=cmd_slowspeed)

    sp = common(sub.add_parser("bm", help="Burago-Margulis experiments"), fmt=("json",), group=False)
    sp.add_argument("experiment", choices=("gap", "quasinorm"))
    sp.add_argument("--n", default="1,4,9,16")
    sp.add_argument("--N", type=int, default=64)
    sp.set_defaults(func=cmd_bm)
    return p


INPUT_ERRORS = (
    InputError,
    ValueError,
    GeometryError,
    DimensionError,
    balls.GeneratingSetError,
    dido.DomainError,
    dido.InfeasibleError,
    OSError,
    NotImplementedError,
)
BUDGET_ERRORS = (BudgetError, balls.BudgetExceeded, counterexamples.NotFound, MemoryError, OverflowError)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except QuadratureError as exc:
        print(f"error: numeric non-convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except BUDGET_ERRORS as exc:
        print(f"error: resource budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except INPUT_ERRORS as exc:
        print(f"error: bad input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
