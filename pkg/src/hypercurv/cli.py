"""Command-line interface.

One binary with subcommands for hypergraph curvature reports, bounds,
distance and walk dumps, generated-family checks, and the model-surface
validation harness.  Reports go to stdout (or ``--out``) as JSON or CSV;
optional figures render next to the report.  Exit codes: 0 on success,
1 on computation errors, 2 on usage errors (including unreadable
input); errors print a machine-readable object with a stable code.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import report as rep
from .curvature import (
    chain_hyperpath,
    common_neighbor_mass,
    common_neighbor_upper_bound,
    complete_uniform,
    curvature_report,
    hyperedge_curvature,
    hyperpath_lower_bound,
    validate_hyperpath,
)
from .entropic import EntropicConfig
from .errors import HypercurvError
from .hypergraph import parse_hypergraph
from .manifold import (
    empirical_coarse_scalar,
    empirical_pair_ricci,
    mc_moment,
    mc_ricci_moment,
)
from .metric import distance_matrix
from .surfaces import ModelSurface, ball_mean_distance_expansion
from .walks import all_walks

_SURFACES = ("sphere", "torus", "hyperbolic")


def _add_output_flags(sp: argparse.ArgumentParser, plot: bool = True) -> None:
    sp.add_argument("--output", choices=("json", "csv"), default="json",
                    help="report format (default json)")
    sp.add_argument("--out", metavar="PATH", default=None,
                    help="write the report to PATH instead of stdout")
    if plot:
        sp.add_argument("--plot", metavar="PATH", nargs="?", const=True, default=None,
                        help="render a figure (default path derives from --out)")
    sp.add_argument("--timings", action="store_true",
                    help="include wall-clock fields (breaks byte determinism)")


def _add_solver_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--method", choices=("exact", "entropic"), default="exact")
    sp.add_argument("--epsilon", type=float, default=None,
                    help="entropic regularization strength (entropic only)")
    sp.add_argument("--tol", type=float, default=1e-4,
                    help="entropic marginal tolerance")
    sp.add_argument("--max-iter", type=int, default=20000)
    sp.add_argument("--support-cap", type=int, default=2_000_000)
    sp.add_argument("--jobs", type=int, default=None,
                    help="parallel per-edge solves (default $HYPERCURV_JOBS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypercurv",
        description="Hyperedge curvature via multi-marginal optimal transport.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curvature", help="per-edge transport values and curvatures")
    p.add_argument("file", help="hyperedge-list input")
    p.add_argument("--dedupe", action="store_true", help="collapse duplicate edges")
    _add_solver_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("bounds", help="dual lower bounds and curvature upper bounds")
    p.add_argument("file")
    p.add_argument("--dedupe", action="store_true")
    _add_output_flags(p, plot=False)

    p = sub.add_parser("distances", help="all-pairs chain distance matrix")
    p.add_argument("file")
    p.add_argument("--dedupe", action="store_true")
    _add_output_flags(p, plot=False)

    p = sub.add_parser("walks", help="random-walk distributions per vertex")
    p.add_argument("file")
    p.add_argument("--dedupe", action="store_true")
    _add_output_flags(p, plot=False)

    p = sub.add_parser("complete-uniform", help="check the complete uniform closed form")
    p.add_argument("--vertices", type=int, required=True, metavar="N")
    p.add_argument("--edge-size", type=int, required=True, metavar="n")
    p.add_argument("--all-edges", action="store_true",
                   help="solve every edge instead of one representative")
    _add_solver_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("hyperpath-check", help="validate hyperpath curvature lower bounds")
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--sizes", default=None,
                   help="comma-separated edge sizes of a chain to build instead of a file")
    _add_solver_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("manifold-check", help="model-surface validation harness")
    p.add_argument("--surface", choices=_SURFACES, required=True)
    p.add_argument("--radius", type=float, default=1.0, help="sphere/hyperbolic radius")
    p.add_argument("--period", type=float, default=1.0, help="torus period")
    p.add_argument("--eps", type=float, required=True, help="ball radius")
    p.add_argument("--mode", choices=("coarse-scalar", "moment", "pair-ricci"),
                   default="coarse-scalar")
    p.add_argument("--trials", type=int, default=20,
                   help="trials (coarse-scalar) or seeds (pair-ricci)")
    p.add_argument("--n-pts", type=int, default=10, help="hyperedge size per trial")
    p.add_argument("--cloud-size", type=int, default=200,
                   help="empirical cloud size per walk")
    p.add_argument("--samples", type=int, default=1_000_000,
                   help="sample count for moment mode")
    p.add_argument("--delta", type=float, default=0.05,
                   help="center separation for pair-ricci mode")
    p.add_argument("--seed", type=int, default=0)
    _add_output_flags(p)
    return parser


def _emit(args, text: str, default_plot_stem: str):
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return _plot_path(args, default_plot_stem)


def _plot_path(args, default_stem: str) -> str | None:
    plot = getattr(args, "plot", None)
    if plot is None:
        return None
    if plot is not True:
        return plot
    if args.out:
        stem = os.path.splitext(args.out)[0]
        return stem + ".png"
    return default_stem + ".png"


def _error_object(code: str, message: str) -> str:
    return json.dumps({"code": code, "message": message}) + "\n"


def _load(args):
    with open(args.file, "rb") as fh:
        data = fh.read()
    return parse_hypergraph(data, dedupe=getattr(args, "dedupe", False))


def _jobs(args) -> int:
    if getattr(args, "jobs", None) is not None:
        return max(1, args.jobs)
    env = os.environ.get("HYPERCURV_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _entropic_cfg(args) -> EntropicConfig | None:
    if args.method != "entropic":
        return None
    return EntropicConfig(epsilon=args.epsilon, max_iter=args.max_iter, tol=args.tol)


def _check_method_flags(parser, args) -> None:
    if not hasattr(args, "method"):
        return
    if args.method == "entropic" and args.epsilon is None:
        parser.error("--epsilon is required with --method entropic")
    if args.method != "entropic" and args.epsilon is not None:
        parser.error("--epsilon only applies to --method entropic")


def _cmd_curvature(args) -> int:
    h = _load(args)
    records = curvature_report(
        h,
        args.method,
        entropic_cfg=_entropic_cfg(args),
        support_cap=args.support_cap,
        jobs=_jobs(args),
    )
    payload = rep.curvature_payload(
        records,
        file=args.file,
        n_vertices=h.num_vertices,
        method=args.method,
        epsilon=args.epsilon,
        include_timings=args.timings,
    )
    text = rep.render_json(payload) if args.output == "json" else rep.curvature_csv(payload)
    plot = _emit(args, text, "hypercurv-curvature")
    if plot:
        rep.render_curvature_figure(payload, plot)
    return 0


def _cmd_bounds(args) -> int:
    h = _load(args)
    dm = distance_matrix(h)
    rows = []
    for e in range(h.num_edges):
        m = common_neighbor_mass(h, None, e)
        rows.append(
            {
                "id": e,
                "vertices": list(h.edge_labels(e)),
                "n": h.edge_size(e),
                "w_lower_bound": 1.0 - m,
                "kappa_upper_bound": common_neighbor_upper_bound(h, None, e),
            }
        )
    payload = rep.bounds_payload(rows, file=args.file, n_vertices=h.num_vertices)
    text = rep.render_json(payload) if args.output == "json" else rep.bounds_csv(payload)
    _emit(args, text, "hypercurv-bounds")
    return 0


def _cmd_distances(args) -> int:
    h = _load(args)
    payload = rep.distances_payload(h, distance_matrix(h), file=args.file)
    text = rep.render_json(payload) if args.output == "json" else rep.distances_csv(payload)
    _emit(args, text, "hypercurv-distances")
    return 0


def _cmd_walks(args) -> int:
    h = _load(args)
    payload = rep.walks_payload(h, all_walks(h), file=args.file)
    text = rep.render_json(payload) if args.output == "json" else rep.walks_csv(payload)
    _emit(args, text, "hypercurv-walks")
    return 0


def _cmd_complete_uniform(args) -> int:
    h, predicted = complete_uniform(args.vertices, args.edge_size)
    dm = distance_matrix(h)
    edge_ids = range(h.num_edges) if args.all_edges else [0]
    records = [
        hyperedge_curvature(
            h, dm, e, args.method,
            entropic_cfg=_entropic_cfg(args), support_cap=args.support_cap,
        )
        for e in edge_ids
    ]
    payload = rep.curvature_payload(
        records,
        file=None,
        n_vertices=h.num_vertices,
        method=args.method,
        epsilon=args.epsilon,
        include_timings=args.timings,
    )
    payload["meta"]["predicted_kappa"] = predicted
    payload["meta"]["max_abs_error"] = max(
        abs(r.kappa - predicted) for r in records
    )
    text = rep.render_json(payload) if args.output == "json" else rep.curvature_csv(payload)
    plot = _emit(args, text, "hypercurv-complete-uniform")
    if plot:
        rep.render_curvature_figure(payload, plot)
    return 0


def _cmd_hyperpath(args, parser) -> int:
    if (args.file is None) == (args.sizes is None):
        parser.error("provide exactly one of FILE or --sizes")
    if args.sizes is not None:
        sizes = [int(tok) for tok in args.sizes.split(",") if tok.strip()]
        h = chain_hyperpath(sizes)
        source = f"chain:{args.sizes}"
    else:
        h = _load(args)
        source = args.file
    validate_hyperpath(h)
    dm = distance_matrix(h)
    rows = []
    for e in range(h.num_edges):
        beta, bound = hyperpath_lower_bound(h, e)
        rec = hyperedge_curvature(
            h, dm, e, args.method,
            entropic_cfg=_entropic_cfg(args), support_cap=args.support_cap,
        )
        rows.append(
            {
                "id": e,
                "vertices": list(h.edge_labels(e)),
                "n": rec.n,
                "beta": beta,
                "lower_bound": bound,
                "kappa": rec.kappa,
                "satisfied": bool(rec.kappa >= bound - 1e-9),
            }
        )
    payload = {
        "edges": rows,
        "meta": {
            "file": source,
            "N": h.num_vertices,
            "num_edges": h.num_edges,
            "method": args.method,
            "all_satisfied": all(r["satisfied"] for r in rows),
        },
    }
    if args.output == "json":
        text = rep.render_json(payload)
    else:
        import csv as _csv
        import io as _io

        buf = _io.StringIO()
        writer = _csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", "vertices", "n", "beta", "lower_bound", "kappa", "satisfied"])
        for r in rows:
            writer.writerow(
                [r["id"], " ".join(r["vertices"]), r["n"], r["beta"],
                 r["lower_bound"], r["kappa"], r["satisfied"]]
            )
        text = buf.getvalue()
    plot = _emit(args, text, "hypercurv-hyperpath")
    if plot:
        rep.render_hyperpath_figure(payload, plot)
    return 0


def _surface(args) -> ModelSurface:
    if args.surface == "sphere":
        return ModelSurface.sphere(args.radius)
    if args.surface == "torus":
        return ModelSurface.flat_torus(args.period)
    return ModelSurface.hyperbolic(args.radius)


def _cmd_manifold(args) -> int:
    m = _surface(args)
    surface = m.describe()
    if args.mode == "coarse-scalar":
        result = empirical_coarse_scalar(
            m, args.eps, args.n_pts, args.cloud_size, args.trials, args.seed
        )
        payload = rep.coarse_scalar_payload(result, surface)
        renderer = rep.render_manifold_figure
    elif args.mode == "moment":
        est = mc_moment(m, args.eps, args.samples, args.seed)
        rest = mc_ricci_moment(m, args.eps, args.samples, args.seed)
        expansions = {
            "expansion_trace": ball_mean_distance_expansion(m, args.eps, "trace"),
            "expansion_average": ball_mean_distance_expansion(m, args.eps, "average"),
        }
        payload = rep.moment_payload(est, rest, surface, expansions)
        renderer = rep.render_moment_figure
    else:
        estimates = [
            empirical_pair_ricci(m, args.eps, args.delta, args.cloud_size, seed)
            for seed in range(args.seed, args.seed + args.trials)
        ]
        prediction = args.eps**2 * m.ricci / (2.0 * (m.dim + 2))
        payload = rep.pair_ricci_payload(estimates, surface, prediction)
        renderer = rep.render_pair_ricci_figure
    text = rep.render_json(payload)
    plot = _emit(args, text, f"hypercurv-manifold-{args.mode}")
    if plot:
        renderer(payload, plot)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_method_flags(parser, args)
    t0 = time.perf_counter()
    try:
        if args.command == "curvature":
            code = _cmd_curvature(args)
        elif args.command == "bounds":
            code = _cmd_bounds(args)
        elif args.command == "distances":
            code = _cmd_distances(args)
        elif args.command == "walks":
            code = _cmd_walks(args)
        elif args.command == "complete-uniform":
            code = _cmd_complete_uniform(args)
        elif args.command == "hyperpath-check":
            code = _cmd_hyperpath(args, parser)
        else:
            code = _cmd_manifold(args)
    except FileNotFoundError as exc:
        sys.stdout.write(_error_object("io_not_found", str(exc)))
        return 2
    except IsADirectoryError as exc:
        sys.stdout.write(_error_object("io_not_found", str(exc)))
        return 2
    except PermissionError as exc:
        sys.stdout.write(_error_object("io_not_found", str(exc)))
        return 2
    except HypercurvError as exc:
        sys.stdout.write(_error_object(exc.code, str(exc)))
        return 1
    except ValueError as exc:
        sys.stdout.write(_error_object("invalid_value", str(exc)))
        return 1
    print(
        f"hypercurv: {args.command} completed in {(time.perf_counter() - t0) * 1000.0:.1f} ms",
        file=sys.stderr,
    )
    return code


if __name__ == "__main__":
    sys.exit(main())
