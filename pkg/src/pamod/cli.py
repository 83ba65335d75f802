"""Command line interface.

Subcommands: gen, expand, mod, certify, lemma2, sweep.  Exit codes:
0 on success, 1 when a deterministic inequality is violated, 2 on usage
errors (argparse errors and invalid parameters).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from pamod import certify as cert
from pamod import cut_events as events
from pamod import cuts, modularity, models
from pamod.experiment import TASKS, ExperimentConfig, emit_report, run_experiment

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _frac_str(x) -> str:
    if x == math.inf:
        return "inf"
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _write_or_print(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    _log, graph = models.generate(
        models.Model(args.model), args.h, args.n, args.seed
    )
    text = json.dumps(models.graph_to_json(graph)) + "\n"
    _write_or_print(text, args.out)
    return EXIT_OK


def _cmd_expand(args) -> int:
    graph = models.load_graph(args.graph)
    if args.subset:
        subset = [int(v) for v in args.subset.split(",")]
        report = cuts.edge_boundary(graph, subset)
        payload = {
            "subset": sorted(report.subset),
            "e_inner": report.e_inner,
            "e_boundary": report.e_boundary,
            "vol": report.vol,
            "ratio": None if report.ratio is None else _frac_str(report.ratio),
        }
    else:
        u = Fraction(args.u)
        if args.trials:
            res = cuts.sampled_expansion(graph, u, args.trials, args.seed)
        else:
            res = cuts.exact_expansion(graph, u, limit=args.limit)
        payload = {
            "u": _frac_str(res.u),
            "alpha": _frac_str(res.alpha),
            "witness": None if res.witness is None else sorted(res.witness),
            "method": res.method.value,
        }
    _write_or_print(json.dumps(payload) + "\n", args.out)
    return EXIT_OK


def _cmd_mod(args) -> int:
    graph = models.load_graph(args.graph)
    if args.greedy:
        q, parts = modularity.greedy_modularity(graph, seed=args.seed)
        method = "greedy"
    else:
        q, parts = modularity.exact_modularity(graph, limit=args.limit)
        method = "exact"
    payload = {
        "q": _frac_str(q),
        "method": method,
        "partition": [sorted(p) for p in parts],
    }
    _write_or_print(json.dumps(payload) + "\n", args.out)
    return EXIT_OK


def _cmd_certify(args) -> int:
    result = cert.certify_modularity_bound(
        grid_step=args.grid_step,
        precision=args.precision,
        with_trace=bool(args.trace),
    )
    payload = {
        "bound": result.bound,
        "minimizer_u": result.minimizer_u,
        "minimizer_delta": result.minimizer_delta,
        "grid_step": result.grid_step,
        "delta_precision": result.delta_precision,
        "constant_ok": cert.check_expansion_constant(),
        "constant_value": float(f"{cert.expansion_constant_value(0.03418):.12g}"),
    }
    _write_or_print(json.dumps(payload) + "\n", args.out)
    if args.trace:
        lines = ["u,delta,term"]
        for u_s, delta, term in result.trace:
            lines.append(f"{u_s:.12g},{delta:.12g},{term:.12g}")
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_lemma2(args) -> int:
    model = models.Model(args.model)
    raw = json.loads(args.spec)
    try:
        subset = frozenset(int(v) for v in raw["S"])
        arrivals = frozenset(int(t) for t in raw["A"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f'spec must look like {{"S": [...], "A": [...]}}: {exc}')
    spec = events.CutEventSpec(h=args.h, n=args.n, subset=subset, arrivals=arrivals)
    payload: dict = {
        "model": model.value,
        "h": args.h,
        "n": args.n,
        "S": sorted(subset),
        "A": sorted(arrivals),
        "bound": _frac_str(events.spec_bound(spec)),
    }
    violated = False
    if args.trials:
        est = events.estimate_cut_event(model, spec, args.trials, args.seed)
        payload.update(
            {
                "method": "mc",
                "trials": est.trials,
                "hits": est.hits,
                "p_hat": float(f"{est.p_hat:.12g}"),
                "std_err": float(f"{est.std_err:.12g}"),
            }
        )
    else:
        p = events.exact_cut_event(model, spec)
        payload["method"] = "exact"
        payload["p"] = _frac_str(p)
        violated = p > events.spec_bound(spec)
        payload["violated"] = bool(violated)
    _write_or_print(json.dumps(payload) + "\n", args.out)
    return EXIT_VIOLATION if violated else EXIT_OK


def _cmd_sweep(args) -> int:
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    else:
        payload = {}
    overrides = {
        "model": args.model,
        "h_list": _int_list(args.h_list),
        "n_list": _int_list(args.n_list),
        "trials": args.trials,
        "root_seed": args.root_seed,
        "tasks": args.tasks.split(",") if args.tasks else None,
    }
    for key, val in overrides.items():
        if val is not None:
            payload[key] = val
    config = ExperimentConfig.from_dict(payload)
    report = run_experiment(config)
    if args.out_json:
        _write_or_print(emit_report(report, "json"), args.out_json)
    if args.out_csv:
        _write_or_print(emit_report(report, "csv"), args.out_csv)
    if not args.out_json and not args.out_csv:
        _write_or_print(emit_report(report, "json"), None)
    if report.summary["status"] != "ok":
        print("deterministic inequality violated; see report", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _int_list(text: str | None):
    if text is None:
        return None
    return [int(x) for x in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pamod",
        description=(
            "Preferential attachment multigraphs: generation, exact expansion "
            "and modularity, bound certification, cut-event checks."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a graph and write its JSON form")
    p.add_argument("--model", choices=[m.value for m in models.Model], required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("expand", help="edge boundary of a subset, or alpha_u")
    p.add_argument("--graph", required=True, help="graph JSON path")
    p.add_argument("--subset", help="comma-separated vertices; reports the cut")
    p.add_argument("--u", default="1/2", help="size fraction, e.g. 1/2 or 0.25")
    p.add_argument("--trials", type=int, help="sampled search instead of exhaustive")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled search")
    p.add_argument("--limit", type=int, default=cuts.EXACT_SUBSET_LIMIT)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_expand)

    p = sub.add_parser("mod", help="maximum modularity, exact or greedy")
    p.add_argument("--graph", required=True)
    p.add_argument("--greedy", action="store_true")
    p.add_argument("--seed", type=int, default=0, help="greedy tie-break seed")
    p.add_argument("--limit", type=int, default=modularity.EXACT_PARTITION_LIMIT)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_mod)

    p = sub.add_parser("certify", help="certify the modularity bound constant")
    p.add_argument("--grid-step", type=float, default=1e-4)
    p.add_argument("--precision", type=float, default=1e-5)
    p.add_argument("--trace", help="write the per-gridpoint CSV trace here")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("lemma2", help="cut-event probability against its bound")
    p.add_argument("--model", choices=[m.value for m in models.Model], required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--spec", required=True, help='JSON {"S": [...], "A": [...]}')
    p.add_argument("--trials", type=int, help="Monte-Carlo instead of exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_lemma2)

    p = sub.add_parser("sweep", help="run a sweep and write reports")
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--model", choices=[m.value for m in models.Model])
    p.add_argument("--h-list", help="comma-separated, e.g. 2,3")
    p.add_argument("--n-list", help="comma-separated, e.g. 8,10,12")
    p.add_argument("--trials", type=int)
    p.add_argument("--root-seed", type=int)
    p.add_argument("--tasks", help=f"comma-separated from {','.join(TASKS)}")
    p.add_argument("--out-json")
    p.add_argument("--out-csv")
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
