"""Report payloads, delimited output, and figure rendering.

JSON payloads are plain dicts with a fixed key order, so serializing
the same computation twice yields byte-identical text.  Wall-clock
fields are null unless timings are explicitly requested, keeping the
default reports deterministic.  Figures are rendered to files next to
the delimited output and never feed back into it.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Sequence

from .curvature import CurvatureRecord
from .hypergraph import Hypergraph
from .manifold import CoarseScalarResult, MomentEstimate, PairRicciEstimate
from .metric import DistanceMatrix

CURVATURE_COLUMNS = (
    "id",
    "vertices",
    "n",
    "W",
    "kappa",
    "upper_bound",
    "method",
    "iterations",
    "runtime_ms",
)

_NUM_OR_NULL = {"type": ["number", "null"]}
_INT_OR_NULL = {"type": ["integer", "null"]}

CURVATURE_REPORT_SCHEMA = {
    "type": "object",
    "required": ["edges", "meta"],
    "properties": {
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": list(CURVATURE_COLUMNS),
                "properties": {
                    "id": {"type": "integer"},
                    "vertices": {"type": "array", "items": {"type": "string"}},
                    "n": {"type": "integer", "minimum": 2},
                    "W": _NUM_OR_NULL,
                    "kappa": _NUM_OR_NULL,
                    "upper_bound": _NUM_OR_NULL,
                    "method": {"type": "string"},
                    "iterations": _INT_OR_NULL,
                    "runtime_ms": _NUM_OR_NULL,
                    "error": {"type": "string"},
                },
                "additionalProperties": False,
            },
        },
        "meta": {
            "type": "object",
            "required": ["file", "N", "num_edges", "method", "epsilon"],
            "properties": {
                "file": {"type": ["string", "null"]},
                "N": {"type": "integer"},
                "num_edges": {"type": "integer"},
                "method": {"type": "string"},
                "epsilon": _NUM_OR_NULL,
            },
        },
    },
}

MANIFOLD_REPORT_SCHEMA = {
    "type": "object",
    "required": ["trials", "aggregate"],
    "properties": {
        "trials": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "surface", "eps", "n_pts", "k", "seed", "trial",
                    "kappa_hat", "ci_low", "ci_high",
                ],
                "properties": {
                    "surface": {"type": "string"},
                    "eps": {"type": "number"},
                    "n_pts": {"type": "integer"},
                    "k": {"type": "integer"},
                    "seed": {"type": "integer"},
                    "trial": {"type": "integer"},
                    "kappa_hat": {"type": "number"},
                    "ci_low": _NUM_OR_NULL,
                    "ci_high": _NUM_OR_NULL,
                },
                "additionalProperties": False,
            },
        },
        "aggregate": {
            "type": "object",
            "required": [
                "surface", "eps", "n_pts", "k", "trials", "seed",
                "mean_kappa_hat", "std", "ci_low", "ci_high",
            ],
        },
    },
}


def render_json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _record_row(rec: CurvatureRecord, include_timings: bool) -> dict:
    row = {
        "id": rec.edge_id,
        "vertices": list(rec.vertices),
        "n": rec.n,
        "W": rec.w,
        "kappa": rec.kappa,
        "upper_bound": rec.upper_bound,
        "method": rec.method,
        "iterations": rec.iterations,
        "runtime_ms": rec.runtime_ms if include_timings else None,
    }
    if rec.error is not None:
        row["error"] = rec.error
    return row


def curvature_payload(
    records: Sequence[CurvatureRecord],
    *,
    file: str | None,
    n_vertices: int,
    method: str,
    epsilon: float | None,
    include_timings: bool = False,
) -> dict:
    return {
        "edges": [_record_row(r, include_timings) for r in records],
        "meta": {
            "file": file,
            "N": n_vertices,
            "num_edges": len(records),
            "method": method,
            "epsilon": epsilon,
        },
    }


def curvature_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CURVATURE_COLUMNS)
    for row in payload["edges"]:
        writer.writerow(
            [
                row["id"],
                " ".join(row["vertices"]),
                row["n"],
                row["W"],
                row["kappa"],
                row["upper_bound"],
                row["method"],
                row["iterations"],
                row["runtime_ms"],
            ]
        )
    return buf.getvalue()


def bounds_payload(rows: Sequence[dict], *, file: str | None, n_vertices: int) -> dict:
    return {
        "edges": list(rows),
        "meta": {"file": file, "N": n_vertices, "num_edges": len(rows)},
    }


def bounds_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "vertices", "n", "w_lower_bound", "kappa_upper_bound"])
    for row in payload["edges"]:
        writer.writerow(
            [
                row["id"],
                " ".join(row["vertices"]),
                row["n"],
                row["w_lower_bound"],
                row["kappa_upper_bound"],
            ]
        )
    return buf.getvalue()


def distances_payload(h: Hypergraph, dm: DistanceMatrix, *, file: str | None) -> dict:
    matrix = []
    for i in range(dm.n):
        row = []
        for j in range(dm.n):
            v = dm.get(i, j)
            row.append(None if v == float("inf") else int(v))
        matrix.append(row)
    return {
        "labels": list(h.labels),
        "matrix": matrix,
        "meta": {"file": file, "N": dm.n},
    }


def distances_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["vertex"] + payload["labels"])
    for label, row in zip(payload["labels"], payload["matrix"]):
        writer.writerow([label] + ["" if v is None else v for v in row])
    return buf.getvalue()


def walks_payload(h: Hypergraph, walks, *, file: str | None) -> dict:
    table = {
        h.labels[w.owner]: {h.labels[j]: p for j, p in w.mass.items()} for w in walks
    }
    return {"walks": table, "meta": {"file": file, "N": h.num_vertices}}


def walks_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["owner", "target", "mass"])
    for owner, row in payload["walks"].items():
        for target, mass in row.items():
            writer.writerow([owner, target, mass])
    return buf.getvalue()


def coarse_scalar_payload(result: CoarseScalarResult, surface: dict) -> dict:
    trials = [
        {
            "surface": surface["kind"],
            "eps": result.eps,
            "n_pts": result.n_pts,
            "k": result.k,
            "seed": result.seed,
            "trial": rec["trial"],
            "kappa_hat": rec["kappa_hat"],
            "ci_low": None,
            "ci_high": None,
        }
        for rec in result.records
    ]
    return {
        "trials": trials,
        "aggregate": {
            "surface": surface["kind"],
            "surface_params": surface,
            "eps": result.eps,
            "n_pts": result.n_pts,
            "k": result.k,
            "trials": result.trials,
            "seed": result.seed,
            "mean_kappa_hat": result.mean,
            "std": result.std,
            "ci_low": result.ci_low,
            "ci_high": result.ci_high,
        },
    }


def moment_payload(
    est: MomentEstimate,
    ricci_est: MomentEstimate,
    surface: dict,
    expansions: dict,
) -> dict:
    return {
        "surface": surface["kind"],
        "surface_params": surface,
        "k": est.k,
        "seed": est.seed,
        "moment": {
            "estimate": est.mean,
            "stderr": est.stderr,
            "closed_form": est.closed_form,
            **expansions,
        },
        "ricci_moment": {
            "estimate": ricci_est.mean,
            "stderr": ricci_est.stderr,
            "closed_form": ricci_est.closed_form,
        },
    }


def pair_ricci_payload(estimates: Sequence[PairRicciEstimate], surface: dict, prediction: float) -> dict:
    vals = [e.estimate for e in estimates]
    return {
        "surface": surface["kind"],
        "surface_params": surface,
        "eps": estimates[0].eps,
        "delta": estimates[0].delta,
        "k": estimates[0].k,
        "seeds": [e.seed for e in estimates],
        "estimates": vals,
        "mean": sum(vals) / len(vals),
        "prediction": prediction,
    }


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_curvature_figure(payload: dict, path: str) -> None:
    """Bar chart of per-edge curvature with the neighborhood upper bounds."""
    plt = _pyplot()
    rows = [r for r in payload["edges"] if r["kappa"] is not None]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.8 * len(rows)), 3.2))
    xs = range(len(rows))
    ax.bar(xs, [r["kappa"] for r in rows], color="#4878d0", label="curvature")
    ax.plot(
        xs,
        [r["upper_bound"] for r in rows],
        "v",
        color="#d65f5f",
        label="upper bound",
    )
    ax.set_xticks(list(xs))
    ax.set_xticklabels([f"E{r['id']}" for r in rows])
    ax.axhline(0.0, color="black", linewidth=0.6)
    ax.set_ylabel("kappa")
    ax.set_title(f"hyperedge curvature ({payload['meta']['method']})")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_manifold_figure(payload: dict, path: str) -> None:
    """Per-trial curvature estimates with the aggregate confidence band."""
    plt = _pyplot()
    agg = payload["aggregate"]
    vals = [t["kappa_hat"] for t in payload["trials"]]
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    ax.plot(range(len(vals)), vals, "o", color="#4878d0", label="trial estimate")
    ax.axhline(agg["mean_kappa_hat"], color="#d65f5f", label="mean")
    ax.axhspan(agg["ci_low"], agg["ci_high"], color="#d65f5f", alpha=0.15, label="95% CI")
    ax.axhline(0.0, color="black", linewidth=0.6)
    ax.set_xlabel("trial")
    ax.set_ylabel("kappa estimate")
    ax.set_title(f"{agg['surface']} eps={agg['eps']}")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_hyperpath_figure(payload: dict, path: str) -> None:
    """Edge curvatures against their hyperpath lower bounds."""
    plt = _pyplot()
    rows = payload["edges"]
    xs = range(len(rows))
    fig, ax = plt.subplots(figsize=(max(4.0, 0.8 * len(rows)), 3.2))
    ax.bar(xs, [r["kappa"] for r in rows], color="#4878d0", label="curvature")
    ax.plot(xs, [r["lower_bound"] for r in rows], "^", color="#6acc64", label="lower bound")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([f"E{r['id']}" for r in rows])
    ax.axhline(0.0, color="black", linewidth=0.6)
    ax.set_ylabel("kappa")
    ax.set_title("hyperpath curvature vs lower bound")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_pair_ricci_figure(payload: dict, path: str) -> None:
    plt = _pyplot()
    vals = payload["estimates"]
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    ax.plot(range(len(vals)), vals, "o", color="#4878d0", label="seed estimate")
    ax.axhline(payload["mean"], color="#d65f5f", label="mean")
    ax.axhline(payload["prediction"], color="#6acc64", label="prediction")
    ax.axhline(0.0, color="black", linewidth=0.6)
    ax.set_xlabel("seed")
    ax.set_ylabel("pair curvature estimate")
    ax.set_title(f"{payload['surface']} eps={payload['eps']} delta={payload['delta']:.3g}")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_moment_figure(payload: dict, path: str) -> None:
    plt = _pyplot()
    mom = payload["moment"]
    fig, ax = plt.subplots(figsize=(4.4, 3.2))
    ax.errorbar(
        [0],
        [mom["estimate"]],
        yerr=[3 * mom["stderr"]],
        fmt="o",
        color="#4878d0",
        label="estimate (3 SE)",
    )
    ax.plot([0], [mom["closed_form"]], "_", markersize=24, color="#d65f5f", label="closed form")
    ax.plot([0], [mom["expansion_trace"]], "_", markersize=24, color="#6acc64", label="expansion")
    ax.set_xticks([])
    ax.set_ylabel("mean ball distance")
    ax.set_title(f"{payload['surface']} k={payload['k']}")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
