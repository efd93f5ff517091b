"""Batch command line front end.

Four subcommands mirror the analysis workflow: ``ensemble`` fits a null
model to an edge list (or rewires it), ``diagnose`` writes the correlation
and homogeneity curves, ``communities`` partitions the graph, and
``consensus`` repeats the partition pipeline over randomized rankings.

Outputs are plain CSV (for plotting) and JSON (for structure).  Every file
embeds the tool version, the seed, and a short hash of the full
configuration, and contains no timestamps, so identical invocations
produce byte-identical files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import RRConfig, newman_girvan, rr_randomize
from .communities import (
    modularity_value,
    recursive_partition,
    soft_modularity_matrix,
    standard_modularity_matrix,
)
from .consensus import ME1, NG, ModelRecipe, cooccurrence, invariant_cores, randomized_rank_runs
from .diagnostics import (
    aggregate_knn_deviation,
    detect_cutoff_from_ipr,
    ipr_curve,
    knn_data,
    knn_ensemble,
    uncorrelated_knn,
    variation_curve,
)
from .ensemble import (
    LinkProbabilityModel,
    entropy_fast,
    expected_multiedge_pairs,
    total_probability,
    verify_soft_constraints,
)
from .errors import (
    EdgeListError,
    InfeasibleConstraints,
    InfeasibleNG,
    PowerIterationError,
    SingularWeights,
)
from .graph import ME2, ME3, cutoff_degree, kplus_from_graph, load_edge_list, rank_nodes
from .search import SearchConfig, greedy_search

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_PARSE = 3
EXIT_NUMERICAL = 4

_ENSEMBLE_MODELS = (ME1, ME2, ME3)


def _config_hash(args):
    # fingerprint the analysis, not the output plumbing: the same input,
    # model, and seed must hash identically wherever the files land
    skip = ("func", "out", "format")
    cfg = {k: v for k, v in vars(args).items() if k not in skip}
    canonical = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def _meta(args):
    return {
        "tool": "richnull",
        "version": __version__,
        "seed": args.seed,
        "config": _config_hash(args),
        "command": args.command,
    }


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(args, out_dir, name, header, rows):
    if args.format == "json":
        return
    meta = _meta(args)
    lines = [
        f"# richnull {meta['version']} seed={meta['seed']} config={meta['config']}",
        ",".join(header),
    ]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    (out_dir / name).write_text("\n".join(lines) + "\n")


def _write_json(args, out_dir, name, payload):
    if args.format == "csv":
        return
    doc = {"meta": _meta(args), **payload}
    (out_dir / name).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _load_graph(args):
    text = Path(args.input).read_text()
    return load_edge_list(text, allow_string_ids=args.string_ids)


def _out_dir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _ranked_model(g, tag, args):
    """Deterministic ranking plus the requested ensemble; search result too."""
    ranking = rank_nodes(g)
    k = g.degrees[ranking.order]
    result = None
    if tag == ME1:
        kp = kplus_from_graph(g, ranking)
    else:
        cfg = SearchConfig(
            mode=tag,
            direction=args.direction,
            seed=args.seed,
            stall_limit=args.stall_limit,
        )
        result = greedy_search(k, cfg)
        kp = result.kplus
    return LinkProbabilityModel(k, kp.values, tag=tag), ranking, result


def cmd_ensemble(args):
    g = _load_graph(args)
    out = _out_dir(args)

    if args.model in ("rr1", "rr2"):
        randomized = rr_randomize(g, RRConfig(args.model, seed=args.seed))
        meta = _meta(args)
        lines = [f"# richnull {meta['version']} seed={meta['seed']} config={meta['config']}"]
        if args.model == "rr2":
            lines.append("# multigraph: repeated lines are parallel links")
        lines.extend(
            f"{randomized.label_of(i)} {randomized.label_of(j)}"
            for i, j in sorted(randomized.edges)
        )
        (out / "randomized.edges").write_text("\n".join(lines) + "\n")
        simple = randomized.is_simple() if args.model == "rr2" else True
        _write_json(
            args,
            out,
            "summary.json",
            {
                "model": args.model,
                "nodes": g.n,
                "links": len(randomized.edges),
                "degrees_preserved": bool(
                    np.array_equal(np.sort(randomized.degrees), np.sort(g.degrees))
                ),
                "simple": bool(simple),
            },
        )
        return EXIT_OK

    if args.model == NG:
        model = newman_girvan(g)
        _write_csv(
            args,
            out,
            "sequences.csv",
            ("node", "degree"),
            [(g.label_of(i), int(g.degrees[i])) for i in range(g.n)],
        )
        if args.dump_probabilities:
            e = model.expected_matrix()
            rows = [
                (g.label_of(i), g.label_of(j), float(e[i, j]))
                for i in range(g.n)
                for j in range(i + 1, g.n)
            ]
            _write_csv(args, out, "expected.csv", ("i", "j", "expected_links"), rows)
        _write_json(
            args,
            out,
            "summary.json",
            {
                "model": NG,
                "nodes": g.n,
                "links": model.links,
                "max_degree": int(g.degrees.max()),
                "cutoff_degree": cutoff_degree(g),
            },
        )
        return EXIT_OK

    model, ranking, search = _ranked_model(g, args.model, args)
    residuals = verify_soft_constraints(model)
    rows = [
        (
            r,
            g.label_of(int(ranking.order[r])),
            int(model.k[r]),
            int(model.kplus.values[r]),
            model.expected_degree(r),
        )
        for r in range(g.n)
    ]
    _write_csv(
        args,
        out,
        "sequences.csv",
        ("rank", "node", "degree", "kplus", "expected_degree"),
        rows,
    )
    if args.dump_probabilities:
        prows = []
        for i in range(g.n):
            p = model.upper_row(i)
            prows.extend(
                (i, i + 1 + off, float(p[off]), float(model.links * p[off]))
                for off in range(p.size)
            )
        _write_csv(
            args, out, "probabilities.csv", ("rank_i", "rank_j", "p", "expected"), prows
        )
    summary = {
        "model": args.model,
        "nodes": g.n,
        "links": model.links,
        "entropy": entropy_fast(model.k, model.kplus.values),
        "total_probability": total_probability(model),
        "residual_degree": residuals.degree,
        "residual_rich_club": residuals.rich_club,
        "cutoff_degree": cutoff_degree(g),
        "multi_link_pairs": len(expected_multiedge_pairs(model)),
    }
    if search is not None:
        summary["search"] = {
            "direction": args.direction,
            "proposals_used": search.proposals_used,
            "accepted_moves": search.accepted_count,
            "entropy_initial": search.trace[0],
            "entropy_final": search.entropy,
        }
    _write_json(args, out, "summary.json", summary)
    return EXIT_OK


def cmd_diagnose(args):
    g = _load_graph(args)
    out = _out_dir(args)
    model, _, _ = _ranked_model(g, args.model, args)

    data_curve = knn_data(g)
    model_curve = knn_ensemble(model)
    baseline = uncorrelated_knn(g)
    knn_rows = data_curve.rows() + model_curve.rows()
    knn_rows += [(float(x), baseline, "uncorrelated", "knn") for x in data_curve.x]
    _write_csv(args, out, "knn.csv", ("degree", "value", "source", "label"), knn_rows)

    ipr = ipr_curve(model)
    _write_csv(args, out, "ipr.csv", ("degree", "value", "source", "label"), ipr.rows())
    cv = variation_curve(model)
    _write_csv(args, out, "cv.csv", ("degree", "value", "source", "label"), cv.rows())

    cutoff = detect_cutoff_from_ipr(ipr)
    _write_json(
        args,
        out,
        "diagnostics.json",
        {
            "model": args.model,
            "uncorrelated_knn": baseline,
            "knn_deviation": aggregate_knn_deviation(model_curve, baseline),
            "ipr_cutoff_degree": cutoff,
            "single_link_cutoff_degree": cutoff_degree(g),
            "curves": {
                "knn_data": data_curve.rows(),
                "knn_model": model_curve.rows(),
                "ipr": ipr.rows(),
                "cv": cv.rows(),
            },
        },
    )
    return EXIT_OK


def _build_matrix(g, args):
    if args.model2 is not None:
        model1, ranking, _ = _ranked_model(g, args.model, args)
        model2, _, _ = _ranked_model(g, args.model2, args)
        return soft_modularity_matrix(model1, model2, ranking, ranking)
    if args.model == NG:
        return standard_modularity_matrix(g, newman_girvan(g))
    model, ranking, _ = _ranked_model(g, args.model, args)
    return standard_modularity_matrix(g, model, ranking=ranking)


def cmd_communities(args):
    g = _load_graph(args)
    out = _out_dir(args)
    matrix = _build_matrix(g, args)
    dendrogram, partition = recursive_partition(matrix, strict=args.strict_splits)

    _write_csv(
        args,
        out,
        "partition.csv",
        ("node", "community"),
        [(g.label_of(i), int(partition.assignment[i])) for i in range(g.n)],
    )
    if args.dump_matrix:
        rows = [
            (g.label_of(i), g.label_of(j), float(matrix.matrix[i, j]))
            for i in range(g.n)
            for j in range(i + 1, g.n)
        ]
        _write_csv(args, out, "matrix.csv", ("i", "j", "m"), rows)
    _write_json(
        args,
        out,
        "dendrogram.json",
        {
            "model": args.model,
            "model2": args.model2,
            "kind": matrix.kind,
            "clamped_pairs": matrix.clamped_pairs,
            "n_communities": partition.n_communities,
            "q": modularity_value(matrix, partition),
            "q_trace": dendrogram.q_trace,
            "dendrogram": dendrogram.to_dict(labels=g.labels),
        },
    )
    return EXIT_OK


def cmd_consensus(args):
    g = _load_graph(args)
    out = _out_dir(args)
    recipe = ModelRecipe(
        null=args.model,
        null2=args.model2,
        direction=args.direction,
        stall_limit=args.stall_limit,
        strict_splits=args.strict_splits,
    )
    runs = randomized_rank_runs(g, recipe, runs=args.runs, master_seed=args.seed)
    report = {
        "model": args.model,
        "model2": args.model2,
        "runs_requested": runs.run_count,
        "runs_successful": runs.successful,
        "failures": [
            {"run": f.index, "error": f.error, "message": f.message}
            for f in runs.failures
        ],
        "partitions": [
            {
                "run": i,
                "communities": [
                    sorted(g.label_of(v) for v in part.members(c))
                    for c in range(part.n_communities)
                ],
            }
            for i, part in enumerate(runs.partitions)
        ],
    }
    _write_json(args, out, "runs.json", report)
    if runs.successful == 0:
        first = runs.failures[0]
        print(
            f"richnull: every consensus run failed; first: {first.error}: {first.message}",
            file=sys.stderr,
        )
        return EXIT_INFEASIBLE

    cm = cooccurrence(runs.partitions)
    rows = [
        (g.label_of(i), g.label_of(j), int(cm.counts[i, j]))
        for i in range(g.n)
        for j in range(i + 1, g.n)
    ]
    _write_csv(args, out, "cooccurrence.csv", ("i", "j", "count"), rows)
    cores = invariant_cores(cm, g, threshold=args.threshold)
    _write_json(
        args,
        out,
        "cores.json",
        {
            "run_count": cm.run_count,
            "threshold": args.threshold,
            "cores": [sorted(g.label_of(i) for i in core) for core in cores],
        },
    )
    return EXIT_OK


def _add_common(sp, models, with_model2=False):
    sp.add_argument("--input", required=True, help="edge-list file (u v per line)")
    sp.add_argument(
        "--string-ids",
        action="store_true",
        help="accept arbitrary string node ids instead of integers",
    )
    sp.add_argument("--model", required=True, choices=models)
    if with_model2:
        sp.add_argument(
            "--model2",
            choices=_ENSEMBLE_MODELS,
            default=None,
            help="second ensemble; switches to the soft contrast matrix",
        )
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--direction", choices=("maximize", "minimize"), default="maximize")
    sp.add_argument("--stall-limit", type=int, default=None)
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--format", choices=("csv", "json", "both"), default="both")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="richnull",
        description="Degree- and rich-club-constrained network null models",
    )
    parser.add_argument("--version", action="version", version=f"richnull {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("ensemble", help="fit a null model or rewire the graph")
    _add_common(sp, _ENSEMBLE_MODELS + (NG, "rr1", "rr2"))
    sp.add_argument("--dump-probabilities", action="store_true")
    sp.set_defaults(func=cmd_ensemble)

    sp = sub.add_parser("diagnose", help="correlation and homogeneity curves")
    _add_common(sp, _ENSEMBLE_MODELS)
    sp.set_defaults(func=cmd_diagnose)

    sp = sub.add_parser("communities", help="recursive spectral partition")
    _add_common(sp, _ENSEMBLE_MODELS + (NG,), with_model2=True)
    sp.add_argument("--strict-splits", action="store_true")
    sp.add_argument("--dump-matrix", action="store_true")
    sp.set_defaults(func=cmd_communities)

    sp = sub.add_parser("consensus", help="partition stability over random rankings")
    _add_common(sp, _ENSEMBLE_MODELS + (NG,), with_model2=True)
    sp.add_argument("--runs", type=int, default=100)
    sp.add_argument("--threshold", type=float, default=1.0)
    sp.add_argument("--strict-splits", action="store_true")
    sp.set_defaults(func=cmd_consensus)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EdgeListError as exc:
        print(f"richnull: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"richnull: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InfeasibleNG, InfeasibleConstraints, SingularWeights) as exc:
        print(f"richnull: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except PowerIterationError as exc:
        print(f"richnull: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
