"""Reproducible sweeps over generated graphs, with reports.

A sweep runs per-trial analyses over a (h, n) grid for one model.  Each
row's seed is derived from the root seed by the documented counter
scheme (``derive_seed(root_seed, row_index)``), so any row can be
regenerated in isolation; sub-streams for the sampled-expansion and
greedy tie-break randomness hang off the row seed the same way.

Deterministic inequalities (exact q* against the exact bounds, and the
exhaustive cut-event scans) are flagged per row and counted in the
summary; a run with any such violation is marked FAILED.  Monte-Carlo
quantities (sampled expansion, greedy scores, cut-event frequencies at
h*n > 8) are reported with their method labels and never counted as
violations.  Large-n behavior such as "expansion at least 0.03418*h" is
likewise summarized as empirical frequencies only; no pass/fail
threshold is attached to it.

Reports serialize to JSON (config + rows + summary) and CSV (rows
only).  Floats are canonicalized to 12 significant digits when rows are
built, rationals render as "p/q" strings, so identical configs yield
byte-identical reports.  ``PAMOD_THREADS`` sets the worker count for
trial-level parallelism; the report does not depend on it.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from pamod.cut_events import (
    EXACT_EVENT_LIMIT,
    CutEventSpec,
    estimate_cut_event,
    scan_cut_events,
)
from pamod.cuts import SearchMethod, expansion_profile, sampled_expansion
from pamod.models import Model, _check_model, _check_seed, derive_seed, generate
from pamod.modularity import (
    bound_from_expansion_profile,
    exact_modularity,
    expansion_modularity_bound,
    greedy_modularity,
)

EXPANSION_CONSTANT = 0.03418
CERTIFIED_BOUND = 0.92383

TASKS = ("expansion", "modularity", "bounds", "lemma2")

ROW_COLUMNS = (
    "seed",
    "h",
    "n",
    "model",
    "alpha",
    "alpha_method",
    "q",
    "q_method",
    "profile_bound",
    "global_bound",
    "q_above_profile",
    "q_above_global",
)


def _round12(x: float) -> float:
    return float(f"{x:.12g}")


def _frac_str(x: Fraction | None) -> str | None:
    if x is None:
        return None
    if x == math.inf:
        return "inf"
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ExperimentConfig:
    model: Model
    h_list: tuple[int, ...]
    n_list: tuple[int, ...]
    trials: int
    root_seed: int
    tasks: tuple[str, ...] = ("expansion", "modularity", "bounds")
    exact_expansion_limit: int = 16
    exact_modularity_limit: int = 12
    sample_trials: int = 64
    event_trials: int = 20000

    def __post_init__(self) -> None:
        object.__setattr__(self, "model", _check_model(self.model))
        object.__setattr__(self, "h_list", tuple(int(h) for h in self.h_list))
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        object.__setattr__(
            self, "tasks", tuple(dict.fromkeys(str(t) for t in self.tasks))
        )
        if not self.h_list or min(self.h_list) < 1:
            raise ValueError("h_list must be nonempty with h >= 1")
        if not self.n_list or min(self.n_list) < 1:
            raise ValueError("n_list must be nonempty with n >= 1")
        if self.trials < 1:
            raise ValueError(f"need trials >= 1, got {self.trials}")
        _check_seed(self.root_seed)
        bad = [t for t in self.tasks if t not in TASKS]
        if bad:
            raise ValueError(f"unknown tasks {bad}; valid tasks are {TASKS}")
        if not self.tasks:
            raise ValueError("tasks must be nonempty")

    def to_dict(self) -> dict:
        return {
            "model": self.model.value,
            "h_list": list(self.h_list),
            "n_list": list(self.n_list),
            "trials": self.trials,
            "root_seed": self.root_seed,
            "tasks": list(self.tasks),
            "exact_expansion_limit": self.exact_expansion_limit,
            "exact_modularity_limit": self.exact_modularity_limit,
            "sample_trials": self.sample_trials,
            "event_trials": self.event_trials,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentConfig":
        known = {
            "model",
            "h_list",
            "n_list",
            "trials",
            "root_seed",
            "tasks",
            "exact_expansion_limit",
            "exact_modularity_limit",
            "sample_trials",
            "event_trials",
        }
        unknown = set(payload) - known
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        missing = {"model", "h_list", "n_list", "trials", "root_seed"} - set(payload)
        if missing:
            raise ValueError(f"missing config keys {sorted(missing)}")
        return cls(**payload)


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    rows: tuple[dict, ...]
    summary: dict


def _compute_row(args) -> dict:
    config, h, n, seed = args
    _log, graph = generate(config.model, h, n, seed)
    row: dict = {
        "seed": seed,
        "h": h,
        "n": n,
        "model": config.model.value,
        "alpha": None,
        "alpha_method": None,
        "q": None,
        "q_method": None,
        "profile_bound": None,
        "global_bound": None,
        "q_above_profile": None,
        "q_above_global": None,
    }
    alpha = None
    alpha_exact = False
    profile = None
    if "expansion" in config.tasks or "bounds" in config.tasks:
        if n <= config.exact_expansion_limit:
            profile = expansion_profile(graph, limit=config.exact_expansion_limit)
            half = n // 2
            if half >= 1:
                alpha = profile[half]
                alpha_exact = True
            else:
                alpha = math.inf
                alpha_exact = True
            method = SearchMethod.EXHAUSTIVE
        else:
            res = sampled_expansion(
                graph,
                Fraction(1, 2),
                trials=config.sample_trials,
                seed=derive_seed(seed, 1),
            )
            alpha = res.alpha
            method = SearchMethod.SAMPLED
        if "expansion" in config.tasks:
            row["alpha"] = (
                "inf" if alpha == math.inf else _frac_str(alpha)
            )
            row["alpha_method"] = method.value
    q = None
    q_exact = False
    if "modularity" in config.tasks:
        if n <= config.exact_modularity_limit:
            q, _parts = exact_modularity(graph, limit=config.exact_modularity_limit)
            q_exact = True
            row["q_method"] = "exact"
        else:
            q, _parts = greedy_modularity(graph, seed=derive_seed(seed, 2))
            row["q_method"] = "greedy"
        row["q"] = _frac_str(q)
    if "bounds" in config.tasks:
        if profile is not None and n >= 2:
            pbound = bound_from_expansion_profile(profile, h, n)
            row["profile_bound"] = _frac_str(pbound)
            if q is not None and q_exact:
                row["q_above_profile"] = bool(q > pbound)
        if alpha is not None and alpha_exact:
            gbound = expansion_modularity_bound(graph, alpha)
            row["global_bound"] = _frac_str(gbound)
            if q is not None and q_exact:
                row["q_above_global"] = bool(q > gbound)
    return row


def _cut_event_cell(config: ExperimentConfig, h: int, n: int, index: int) -> dict:
    cell: dict = {"h": h, "n": n}
    if h * n <= EXACT_EVENT_LIMIT and n >= 2:
        scan = scan_cut_events(config.model, h, n)
        cell["mode"] = "exact"
        cell["pairs_checked"] = scan.pairs_checked
        cell["violations"] = len(scan.violations)
    else:
        arrivals = frozenset({h * n}) if h >= 2 else frozenset()
        spec = CutEventSpec(h=h, n=n, subset=frozenset({n}), arrivals=arrivals)
        est = estimate_cut_event(
            config.model,
            spec,
            trials=config.event_trials,
            seed=derive_seed(config.root_seed, 10**6 + index),
        )
        cell["mode"] = "mc"
        cell["trials"] = est.trials
        cell["p_hat"] = _round12(est.p_hat)
        cell["bound"] = _frac_str(est.bound)
        cell["exceeds_3se"] = bool(
            est.p_hat > float(est.bound) + 3.0 * est.std_err
        )
    return cell


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run the sweep; deterministic for a fixed config.

    Row order follows h_list x n_list x trials.  Worker count comes
    from PAMOD_THREADS (default 1) and does not affect the report.
    """
    jobs = []
    index = 0
    for h in config.h_list:
        for n in config.n_list:
            for _trial in range(config.trials):
                jobs.append((config, h, n, derive_seed(config.root_seed, index)))
                index += 1
    threads = int(os.environ.get("PAMOD_THREADS", "1"))
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_compute_row, jobs, chunksize=4))
    else:
        rows = [_compute_row(job) for job in jobs]
    cells = []
    if "lemma2" in config.tasks:
        for i, (h, n) in enumerate(
            (h, n) for h in config.h_list for n in config.n_list
        ):
            cells.append(_cut_event_cell(config, h, n, i))
    summary = _summarize(config, rows, cells)
    return ExperimentReport(config=config, rows=tuple(rows), summary=summary)


def _summarize(config: ExperimentConfig, rows, cells) -> dict:
    viol_profile = sum(1 for r in rows if r["q_above_profile"] is True)
    viol_global = sum(1 for r in rows if r["q_above_global"] is True)
    viol_events = sum(c.get("violations", 0) for c in cells)
    alpha_ratios = []
    alpha_hits = 0
    alpha_count = 0
    for r in rows:
        if r["alpha"] in (None, "inf"):
            continue
        a = float(Fraction(r["alpha"]))
        alpha_ratios.append(a / r["h"])
        alpha_count += 1
        if a >= EXPANSION_CONSTANT * r["h"]:
            alpha_hits += 1
    qs_exact = [
        float(Fraction(r["q"]))
        for r in rows
        if r["q"] is not None and r["q_method"] == "exact"
    ]
    qs_all = [float(Fraction(r["q"])) for r in rows if r["q"] is not None]
    summary: dict = {
        "rows": len(rows),
        "violations": {
            "q_above_profile_bound": viol_profile,
            "q_above_global_bound": viol_global,
            "cut_event": viol_events,
        },
        "status": "ok"
        if (viol_profile + viol_global + viol_events) == 0
        else "FAILED",
        "min_alpha_over_h": _round12(min(alpha_ratios)) if alpha_ratios else None,
        "mean_alpha_over_h": _round12(sum(alpha_ratios) / len(alpha_ratios))
        if alpha_ratios
        else None,
        "max_q": _round12(max(qs_all)) if qs_all else None,
        "frac_alpha_ge_constant_h": _round12(alpha_hits / alpha_count)
        if alpha_count
        else None,
        "frac_exact_q_le_certified": _round12(
            sum(1 for q in qs_exact if q <= CERTIFIED_BOUND) / len(qs_exact)
        )
        if qs_exact
        else None,
        "expansion_constant": EXPANSION_CONSTANT,
        "certified_bound": CERTIFIED_BOUND,
    }
    if cells:
        summary["cut_event_cells"] = cells
    return summary


def emit_report(report: ExperimentReport, fmt: str = "json") -> str:
    """Serialize a report; "json" carries config+rows+summary, "csv" rows."""
    if fmt == "json":
        payload = {
            "config": report.config.to_dict(),
            "rows": list(report.rows),
            "summary": report.summary,
        }
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(ROW_COLUMNS)
        for row in report.rows:
            out = []
            for col in ROW_COLUMNS:
                val = row[col]
                if val is None:
                    out.append("")
                elif isinstance(val, bool):
                    out.append("1" if val else "0")
                else:
                    out.append(str(val))
            writer.writerow(out)
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")


def parse_report_json(text: str) -> ExperimentReport:
    payload = json.loads(text)
    config = ExperimentConfig.from_dict(payload["config"])
    return ExperimentReport(
        config=config,
        rows=tuple(payload["rows"]),
        summary=payload["summary"],
    )
