"""Command-line interface: ``klocal {gen,spectrum,moments,estimate,bounds,color}``.

Exit codes: 0 ok, 2 usage/invalid input, 3 dimension limit, 4 enumeration cap,
5 infeasible moment LP, 6 bound violated, 7 internal error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .bounds import verify_bounds
from .errors import BoundViolation, Infeasible, InternalError, KLocalError
from .estimation import ReconstructionConfig, fit_moments, trivial_estimate
from .hamiltonian import DEFAULT_DENSE_LIMIT, GRAPH_KINDS, check_dense_limit, random_instance
from .hypergraph import Hypergraph, equitable_coloring, validate_coloring
from .io import (
    distribution_csv,
    dumps_json,
    fmt,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    moments_csv,
    read_moments_csv,
    table_csv,
)
from .moments import exact_moments, sampled_moments
from .spectrum import diagonalize, esd, wasserstein1

EXIT_USAGE = 2

TERM_ALIASES = {
    "gue": "gue",
    "gue_normalized": "gue",
    "pauli": "pauli",
    "pauli_string": "pauli",
    "diagonal": "diagonal",
    "ising": "ising",
    "projector": "projector",
    "alternating_xz": "alternating_xz",
    "zero": "zero",
}


class UsageError(KLocalError):
    exit_code = EXIT_USAGE


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return value


def _gamma_list(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad gamma list {text!r}") from exc
    if not values or any(g <= 0 for g in values):
        raise argparse.ArgumentTypeError(f"gammas must be positive, got {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--out", help="primary output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), help="output format")
    common.add_argument(
        "--dense-limit", type=int, default=DEFAULT_DENSE_LIMIT, help="max d^n for dense work"
    )

    p = argparse.ArgumentParser(prog="klocal", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"klocal {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a random instance")
    g.add_argument("--graph", choices=GRAPH_KINDS, default="regular")
    g.add_argument("--n", type=_positive_int, required=True)
    g.add_argument("--k", type=_positive_int, default=2)
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--deg", type=_positive_int, help="vertex degree for --graph regular")
    g.add_argument("--m", type=_positive_int, help="edge count for --graph erdos_renyi")
    g.add_argument("--terms", choices=sorted(TERM_ALIASES), default="gue")

    s = sub.add_parser("spectrum", parents=[common], help="exact ESD of an instance")
    s.add_argument("instance")

    mo = sub.add_parser("moments", parents=[common], help="moments of h = H/m")
    mo.add_argument("instance")
    mo.add_argument("--r", type=int, default=4, help="max degree (>= 1)")
    mo.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    mo.add_argument("--samples", type=_positive_int, default=1000)

    es = sub.add_parser("estimate", parents=[common], help="reconstruct ESD of h from moments")
    src = es.add_mutually_exclusive_group(required=True)
    src.add_argument("--instance")
    src.add_argument("--moments", help="moment CSV as written by 'moments'")
    es.add_argument("--r", type=int, default=8)
    es.add_argument("--grid", type=int, default=401)
    es.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    es.add_argument("--samples", type=_positive_int, default=1000)
    es.add_argument("--config", help='JSON {"grid_points":int,"r":int,"tolerances":[...]}')

    b = sub.add_parser("bounds", parents=[common], help="check tail bounds against the exact ESD")
    b.add_argument("instance")
    b.add_argument("--gammas", type=_gamma_list, default=[0.25, 0.5, 0.75, 1.0, 1.5])

    c = sub.add_parser("color", parents=[common], help="equitable hyperedge coloring")
    c.add_argument("instance", help="instance JSON or bare hypergraph JSON")
    return p


def _config(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "out"}


def _emit(args: argparse.Namespace, text: str, suffix: str = "") -> None:
    """Write the primary output with a timestamped metadata sidecar, or a ``suffix`` companion."""
    if args.out is None:
        (sys.stderr if suffix else sys.stdout).write(text)
        return
    path = Path(args.out)
    if suffix:
        path = path.with_name(path.stem + suffix)
    path.write_text(text)
    if suffix:
        return
    meta = {
        "config": _config(args),
        "seed": args.seed,
        "version": __version__,
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }
    path.with_name(path.name + ".meta.json").write_text(dumps_json(meta))


def cmd_gen(args) -> int:
    if args.graph == "regular" and args.deg is None:
        raise UsageError("--graph regular needs --deg")
    if args.graph == "erdos_renyi" and args.m is None:
        raise UsageError("--graph erdos_renyi needs --m")
    h = random_instance(
        args.n,
        args.d,
        args.k,
        graph=args.graph,
        terms=TERM_ALIASES[args.terms],
        seed=args.seed,
        degree=args.deg,
        num_edges=args.m,
    )
    data = instance_to_dict(h)
    data["config"] = _config(args)
    _emit(args, dumps_json(data))
    return 0


def cmd_spectrum(args) -> int:
    h = load_instance(args.instance)
    eig = diagonalize(h, args.dense_limit)
    dist = esd(eig, h.d, h.n)
    if args.format == "json":
        _emit(args, dumps_json({"config": _config(args), "atoms": dist.atoms}))
    else:
        _emit(args, distribution_csv(dist))
    summary = {
        "config": _config(args),
        "n": h.n,
        "d": h.d,
        "m": h.m,
        "mu": dist.mean,
        "variance": dist.variance,
        "min_eigenvalue": float(eig.eigenvalues[0]),
        "max_eigenvalue": float(eig.eigenvalues[-1]),
        "atoms": len(dist.locations),
    }
    _emit(args, dumps_json(summary), ".summary.json")
    return 0


def _moments(args, h):
    if args.r < 1:
        raise UsageError("--r must be >= 1 (moment degrees start at 1)")
    if args.mode == "exact":
        return exact_moments(h, args.r)
    return sampled_moments(h, args.r, args.samples, args.seed)


def cmd_moments(args) -> int:
    h = load_instance(args.instance)
    mv = _moments(args, h)
    if args.format == "json":
        payload = {"config": _config(args), "values": list(mv.values), "error_bounds": list(mv.error_bounds)}
        _emit(args, dumps_json(payload))
    else:
        _emit(args, moments_csv(mv))
    return 0


def cmd_estimate(args) -> int:
    if args.config:
        cfg = ReconstructionConfig.from_dict(json.loads(Path(args.config).read_text()))
    else:
        if args.grid < 2:
            raise UsageError("--grid must be >= 2")
        if args.r < 1:
            raise UsageError("--r must be >= 1")
        cfg = ReconstructionConfig(grid_points=args.grid, r=args.r)
    h = None
    if args.instance:
        h = load_instance(args.instance)
        args.r = cfg.r
        mv = _moments(args, h)
    else:
        with open(args.moments) as f:
            mv = read_moments_csv(f)
    fit = fit_moments(mv, cfg)
    summary = {
        "config": _config(args),
        "reconstruction": cfg.to_dict(),
        "scale": "h = H/m",
        "slack": fit.slack,
        "excess": list(fit.excess),
        "allowance": list(fit.allowance),
        "w1_reconstruction": None,
        "w1_trivial": None,
    }
    if not fit.within_allowance:
        _emit(args, dumps_json(summary), ".summary.json")
        raise Infeasible(f"moment LP infeasible; minimal total slack {fit.slack:.3e}", fit.slack)
    if h is not None:
        try:
            check_dense_limit(h.dim, args.dense_limit)
        except KLocalError:
            pass
        else:
            exact = esd(diagonalize(h, args.dense_limit), h.d, h.n).scaled(1.0 / h.m)
            summary["w1_reconstruction"] = wasserstein1(fit.distribution, exact)
            summary["w1_trivial"] = wasserstein1(trivial_estimate(h, rescaled=True), exact)
    if args.format == "json":
        _emit(args, dumps_json({"config": _config(args), "atoms": fit.distribution.atoms}))
    else:
        _emit(args, distribution_csv(fit.distribution))
    _emit(args, dumps_json(summary), ".summary.json")
    return 0


REPORT_COLUMNS = [
    "gamma",
    "mu",
    "m",
    "exact_lower_tail",
    "exact_upper_tail",
    "chebyshev",
    "chernoff_prop1",
    "chernoff_cor",
    "lemma2_sum",
    "ks_bound",
    "anshu_exponent",
    "all_satisfied",
]


def cmd_bounds(args) -> int:
    h = load_instance(args.instance)
    reports = verify_bounds(h, args.gammas, dense_limit=args.dense_limit)
    if args.format == "csv":
        rows = [
            [getattr(r, c) for c in REPORT_COLUMNS[:-1]] + [str(r.all_satisfied).lower()]
            for r in reports
        ]
        _emit(args, table_csv(["instance"] + REPORT_COLUMNS, [[args.instance] + row for row in rows]))
    else:
        _emit(args, dumps_json([r.to_dict() for r in reports]))
    bad = [(r.gamma, name) for r in reports for name in r.violations()]
    if bad:
        detail = ", ".join(f"gamma={fmt(gm)}: {name}" for gm, name in bad)
        raise BoundViolation(f"bound violated (implementation bug): {detail}")
    return 0


def cmd_color(args) -> int:
    data = json.loads(Path(args.instance).read_text())
    g = instance_from_dict(data).graph if "terms" in data else Hypergraph.from_dict(data)
    coloring = equitable_coloring(g, seed=args.seed)
    ok, problems = validate_coloring(g, coloring)
    if not ok:
        raise InternalError("; ".join(problems))
    payload = {
        "config": _config(args),
        "m": g.m,
        "r": coloring.r,
        "floor_m_over_r": g.m // coloring.r,
        "min_class_size": min(coloring.sizes),
        "sizes": list(coloring.sizes),
        "classes": [list(c) for c in coloring.classes],
    }
    _emit(args, dumps_json(payload))
    return 0


COMMANDS = {
    "gen": cmd_gen,
    "spectrum": cmd_spectrum,
    "moments": cmd_moments,
    "estimate": cmd_estimate,
    "bounds": cmd_bounds,
    "color": cmd_color,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except KLocalError as exc:
        print(f"klocal {args.command}: error: {exc}", file=sys.stderr)
        if getattr(exc, "exit_code", 1) == 4:
            print("hint: rerun with --mode sampled", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"klocal {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
