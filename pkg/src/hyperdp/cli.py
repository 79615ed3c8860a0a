"""Command line front end.

Every randomized command takes ``--seed`` and produces byte-identical
output for identical inputs and flags.  Output is assembled in full
before anything is written, so a failing run never emits a partial
artifact.  Exit codes: 0 success, 1 validation or model errors (the
symbolic error name appears in the JSON output), 2 I/O errors.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import json
import sys

import numpy as np

from .dp import DPParams, SamplerConfig, bayes_cdf, dp_posterior, sample_dp
from .errors import HyperDPError, NotConnected, NotDecomposable
from .graphs import is_connected, is_decomposable, perfect_ordering
from .hdp import (
    build_hdp,
    check_refinement,
    hdp_posterior,
    verify_sample_markov,
    verify_sample_refinement,
)
from .measures import is_consistent, is_markov, markov_combination, markov_combination_seq
from .mixture import gibbs_chain, identity_likelihood
from .reconcile import ReconcileStrategy, reconcile, suggested_gamma
from . import serialize as ser

_STRATEGY_FLAGS = {
    "rescale-min": "rescale-min",
    "rescale-convex": "rescale-convex",
    "condition-a": "condition-on-a",
    "condition-b": "condition-on-b",
    "average": "weighted-average",
    "kl": "kl-compromise",
}


class _Failure(Exception):
    """A fully-formed report whose verdict is negative."""

    def __init__(self, text):
        super().__init__("diagnostics failed")
        self.text = text


def _sampler_config(args):
    return SamplerConfig(seed=args.seed, eps=args.eps, max_atoms=args.max_atoms)


def _replicate_line(params, cfg, seed, replicate):
    theta = sample_dp(params, cfg, replicate)
    return ser.atoms_to_json_line(theta, seed, replicate)


def _sample_lines(params, args):
    if args.replicates < 1:
        raise ValueError("--replicates must be at least 1")
    cfg = _sampler_config(args)
    reps = range(args.replicates)
    if args.parallel > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.parallel) as pool:
            lines = list(
                pool.map(_replicate_line, *zip(*[(params, cfg, args.seed, r) for r in reps]))
            )
    else:
        lines = [_replicate_line(params, cfg, args.seed, r) for r in reps]
    return "\n".join(lines)


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_check_graph(args):
    g = ser.graph_from_dict(ser.load_json(args.graph))
    out = {"decomposable": is_decomposable(g), "connected": is_connected(g)}
    if out["decomposable"] and out["connected"]:
        out.update(ser.decomposition_to_dict(perfect_ordering(g)))
    return json.dumps(out)


def cmd_combine(args):
    mu = ser.measure_from_dict(ser.load_json(args.mu))
    lam = ser.measure_from_dict(ser.load_json(args.lam))
    return json.dumps(ser.measure_to_dict(markov_combination(mu, lam, args.tol)))


def cmd_check_consistency(args):
    mu = ser.measure_from_dict(ser.load_json(args.mu))
    lam = ser.measure_from_dict(ser.load_json(args.lam))
    report = is_consistent(mu, lam, args.tol)
    out = report.as_dict()
    out["tol"] = args.tol
    return json.dumps(out)


def cmd_sample(args):
    base = ser.measure_from_dict(ser.load_json(args.base))
    return _sample_lines(DPParams(args.nu, base), args)


def cmd_posterior(args):
    base = ser.measure_from_dict(ser.load_json(args.base))
    params = DPParams(args.nu, base)
    data = ser.load_data_csv(args.data, base.space)
    post = dp_posterior(params, data)
    return json.dumps({"nu": post.nu, "base": ser.measure_to_dict(post.base)})


def cmd_build_hdp(args):
    graph, nu, bases = ser.hdp_spec_from_dict(ser.load_json(args.spec))
    spec = build_hdp(graph, bases, nu)
    return json.dumps(
        {
            "nu": spec.nu,
            "decomposition": ser.decomposition_to_dict(spec.decomposition),
            "combined_base": ser.measure_to_dict(spec.combined.base),
        }
    )


def cmd_sample_hdp(args):
    graph, nu, bases = ser.hdp_spec_from_dict(ser.load_json(args.spec))
    spec = build_hdp(graph, bases, nu)
    return _sample_lines(spec.combined, args)


def cmd_posterior_hdp(args):
    graph, nu, bases = ser.hdp_spec_from_dict(ser.load_json(args.spec))
    spec = build_hdp(graph, bases, nu)
    data = ser.load_data_csv(args.data, spec.combined.base.space)
    post = hdp_posterior(spec, data)
    return json.dumps(ser.hdp_spec_to_dict(post.graph, post.nu, post.clique_bases))


def cmd_diagnose(args):
    graph, nu, bases = ser.hdp_spec_from_dict(ser.load_json(args.spec))
    checks = []
    error = None
    witness = None

    def fail(name, exc, extra=None):
        nonlocal error, witness
        entry = {"name": name, "passed": False, "detail": str(exc)}
        if extra:
            entry.update(extra)
        checks.append(entry)
        if error is None:
            error = type(exc).__name__
            witness = getattr(exc, "report", None)
            witness = witness.first_witness() if witness is not None else None

    decomp = None
    try:
        decomp = perfect_ordering(graph)
        checks.append({"name": "graph", "passed": True})
    except (NotDecomposable, NotConnected) as exc:
        fail("graph", exc)

    combined = None
    if decomp is not None:
        consistent = True
        for i in range(len(bases)):
            for j in range(i + 1, len(bases)):
                report = is_consistent(bases[i], bases[j])
                entry = {
                    "name": f"consistency of clique bases {i + 1} and {j + 1}",
                    "passed": report.consistent,
                    "marginal_gap": report.marginal_gap,
                    "mass_gap": report.mass_gap,
                }
                checks.append(entry)
                if not report.consistent:
                    consistent = False
                    if error is None:
                        error = "Inconsistent"
        if consistent and len(bases) == len(decomp.cliques):
            combined = markov_combination_seq(decomp, bases)
            checks.append(
                {
                    "name": "combined base factorizes over the cliques",
                    "passed": is_markov(combined, decomp),
                }
            )
            for k, clique in enumerate(decomp.cliques[1:], start=1):
                sep = decomp.separators[k - 1]
                report = check_refinement(combined, sep, clique)
                check = report.checks[0]
                entry = {
                    "name": f"degenerate completion of clique {list(clique)} "
                    f"given separator {list(sep)}",
                    "passed": check.passed,
                }
                if not check.passed:
                    entry["witness"] = check.witness
                    entry["conditional"] = check.conditional
                    if error is None:
                        error = "RefinementViolated"
                        witness = check.witness
                checks.append(entry)

    passed = all(c["passed"] for c in checks)
    if passed and combined is not None and args.samples > 0:
        cfg = SamplerConfig(seed=args.seed, eps=args.eps, max_atoms=args.max_atoms)
        params = DPParams(nu, combined)
        markov_ok = 0
        refinement_ok = 0
        for r in range(args.samples):
            theta = sample_dp(params, cfg, r)
            if verify_sample_markov(theta, decomp):
                markov_ok += 1
            if all(
                verify_sample_refinement(theta, s, c)
                for s, c in zip(decomp.separators, decomp.cliques[1:])
            ):
                refinement_ok += 1
        checks.append(
            {
                "name": f"sampled measures factorize ({args.samples} draws)",
                "passed": markov_ok == args.samples,
                "passing": markov_ok,
            }
        )
        checks.append(
            {
                "name": f"sampled atoms respect degeneracy ({args.samples} draws)",
                "passed": refinement_ok == args.samples,
                "passing": refinement_ok,
            }
        )
        passed = all(c["passed"] for c in checks)

    out = {"passed": passed, "checks": checks}
    if not passed:
        if error is not None:
            out["error"] = error
        if witness is not None:
            out["witness"] = witness
        raise _Failure(json.dumps(out))
    return json.dumps(out)


def cmd_reconcile(args):
    mu = ser.measure_from_dict(ser.load_json(args.mu))
    lam = ser.measure_from_dict(ser.load_json(args.lam))
    kind = _STRATEGY_FLAGS[args.strategy]
    gamma = args.gamma
    if kind == "weighted-average" and gamma is None:
        gamma = suggested_gamma(mu, lam)
    if kind in ("rescale-convex",) and gamma is None:
        raise ValueError("--gamma is required for rescale-convex")
    strategy = ReconcileStrategy(
        kind, gamma if kind in ("rescale-convex", "weighted-average") else None
    )
    result = reconcile(mu, lam, strategy)
    if isinstance(result, tuple):
        out = {
            "strategy": kind,
            "mu": ser.measure_to_dict(result[0]),
            "lambda": ser.measure_to_dict(result[1]),
        }
    else:
        out = {"strategy": kind, "measure": ser.measure_to_dict(result)}
    if gamma is not None:
        out["gamma"] = gamma
    return json.dumps(out)


def cmd_mixture(args):
    base = ser.measure_from_dict(ser.load_json(args.base))
    data = ser.load_data_csv(args.data, base.space)
    if args.likelihood is not None:
        table = ser.load_json(args.likelihood)
        likelihood = ser.likelihood_from_dict(table, base.space, base.space)
    else:
        likelihood = identity_likelihood
    cfg = SamplerConfig(seed=args.seed)
    values, history = gibbs_chain(data, likelihood, args.a, base, args.sweeps, cfg)
    labels = {}
    assignments = [labels.setdefault(v, len(labels)) for v in values]
    classes = []
    for value, label in labels.items():
        size = sum(1 for lbl in assignments if lbl == label)
        classes.append(
            {
                "label": label,
                "size": size,
                "value": dict(zip(base.space.variables, value)),
            }
        )
    out = json.dumps(
        {
            "assignments": assignments,
            "class_counts": [c["size"] for c in classes],
            "classes": classes,
        }
    )
    if args.plot_csv:
        counts = {}
        for sweep_labels in history:
            k = len(set(sweep_labels))
            counts[k] = counts.get(k, 0) + 1
        lines = ["n_classes,sweeps"]
        lines += [f"{k},{counts[k]}" for k in sorted(counts)]
        _write_text(args.plot_csv, "\n".join(lines) + "\n")
    return out


def _parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("--t-grid must look like LO:HI:STEPS")
    lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if steps < 2 or hi <= lo:
        raise ValueError("--t-grid needs HI > LO and at least 2 steps")
    return [float(t) for t in np.linspace(lo, hi, steps)]


def cmd_cdf_estimate(args):
    if args.t is None and args.t_grid is None:
        raise ValueError("one of --t or --t-grid is required")
    base = ser.measure_from_dict(ser.load_json(args.base))
    if len(base.space.variables) != 1:
        raise ValueError("cdf estimates need a base over exactly one variable")
    params = DPParams(args.nu, base)
    var = base.space.variables[0]
    with open(args.data, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or var not in reader.fieldnames:
            raise ValueError(f"data CSV needs a column named {var!r}")
        data = [float(row[var]) for row in reader]
    if args.t is not None:
        return json.dumps({"t": args.t, "estimate": bayes_cdf(params, data, args.t)})
    grid = _parse_grid(args.t_grid)
    points = [{"t": t, "estimate": bayes_cdf(params, data, t)} for t in grid]
    if args.plot_csv:
        lines = ["t,estimate"] + [f"{p['t']!r},{p['estimate']!r}" for p in points]
        _write_text(args.plot_csv, "\n".join(lines) + "\n")
    return json.dumps({"points": points})


def _add_sampling_flags(p):
    p.add_argument("--replicates", type=int, default=1, help="number of draws")
    p.add_argument("--seed", type=int, required=True, help="64-bit stream seed")
    p.add_argument("--eps", type=float, default=1e-10, help="leftover-mass cutoff")
    p.add_argument("--max-atoms", type=int, default=10_000, help="atom budget per draw")
    p.add_argument(
        "--parallel",
        type=int,
        default=1,
        metavar="N",
        help="worker processes; replicate r always uses the (seed, r) stream, "
        "so output bytes do not depend on N",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hyperdp",
        description="Dirichlet process priors with graph-structured base measures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-graph", help="decomposability report for a graph JSON")
    p.add_argument("graph", help="graph JSON: {vertices: [...], edges: [[u, v], ...]}")
    p.set_defaults(func=cmd_check_graph)

    p = sub.add_parser("combine", help="fuse two consistent measures")
    p.add_argument("--mu", required=True, help="first measure JSON")
    p.add_argument("--lambda", dest="lam", required=True, help="second measure JSON")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("check-consistency", help="agreement report for two measures")
    p.add_argument("--mu", required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_check_consistency)

    p = sub.add_parser(
        "sample",
        help="stick-breaking draws; JSONL, one "
        '{"atoms", "weights", "residual", "seed", "replicate"} object per line',
    )
    p.add_argument("--base", required=True, help="base measure JSON")
    p.add_argument("--nu", type=float, required=True, help="precision")
    _add_sampling_flags(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("posterior", help="conjugate update of one process")
    p.add_argument("--base", required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--data", required=True, help="CSV, one column per variable")
    p.set_defaults(func=cmd_posterior)

    p = sub.add_parser("build-hdp", help="validate clique bases and fuse them")
    p.add_argument(
        "--spec",
        required=True,
        help="spec JSON: {graph, nu, clique_bases: [measure, ...]} in perfect order",
    )
    p.set_defaults(func=cmd_build_hdp)

    p = sub.add_parser("sample-hdp", help="draws from a graph-structured prior")
    p.add_argument("--spec", required=True)
    _add_sampling_flags(p)
    p.set_defaults(func=cmd_sample_hdp)

    p = sub.add_parser("posterior-hdp", help="clique-wise conjugate update")
    p.add_argument("--spec", required=True)
    p.add_argument("--data", required=True, help="CSV, one column per vertex variable")
    p.set_defaults(func=cmd_posterior_hdp)

    p = sub.add_parser("diagnose", help="full validation report for a spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--samples", type=int, default=0, help="extra sampled-draw checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float, default=1e-10)
    p.add_argument("--max-atoms", type=int, default=10_000)
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("reconcile", help="merge two disagreeing measures")
    p.add_argument("--mu", required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument(
        "--strategy", required=True, choices=sorted(_STRATEGY_FLAGS)
    )
    p.add_argument(
        "--gamma",
        type=float,
        default=None,
        help="mixing weight; for 'average' it defaults to the mass-proportional one",
    )
    p.set_defaults(func=cmd_reconcile)

    p = sub.add_parser("mixture", help="latent-class assignment by collapsed sweeps")
    p.add_argument("--data", required=True, help="CSV, one column per variable")
    p.add_argument("--base", required=True, help="base measure JSON")
    p.add_argument("--a", type=float, required=True, help="precision")
    p.add_argument("--sweeps", type=int, default=200)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument(
        "--likelihood",
        default=None,
        help='table JSON {"entries": [{"x", "pi", "prob"}, ...]}; '
        "default: observation equals the latent value",
    )
    p.add_argument(
        "--plot-csv",
        default=None,
        help="write a per-sweep class-count histogram (columns: n_classes,sweeps)",
    )
    p.set_defaults(func=cmd_mixture)

    p = sub.add_parser(
        "cdf-estimate", help="posterior-mean distribution function estimates"
    )
    p.add_argument("--base", required=True, help="one-variable base measure JSON")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--data", required=True, help="CSV with the variable's column")
    p.add_argument("--t", type=float, default=None, help="single threshold")
    p.add_argument("--t-grid", default=None, help="LO:HI:STEPS evaluation grid")
    p.add_argument(
        "--plot-csv",
        default=None,
        help="write the grid estimates (columns: t,estimate)",
    )
    p.set_defaults(func=cmd_cdf_estimate)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
    except _Failure as failure:
        print(failure.text)
        return 1
    except HyperDPError as exc:
        print(json.dumps(exc.payload()))
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": "IOError", "detail": str(exc)}))
        return 2
    except (ValueError, TypeError) as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}))
        return 1
    print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
