"""Preferential attachment multigraphs and their expansion/modularity analysis.

The package has three layers:

* ``models``: two preferential attachment multigraph processes, built as
  mini-vertex trees and merged into multigraphs on n vertices.
* ``cuts`` and ``modularity``: exact (rational) edge expansion, modularity
  scores, and the deterministic inequalities connecting them.
* ``certify`` and ``cut_events``: floating-point certification of the
  expansion constant 0.03418*h and the modularity upper bound 0.92383,
  plus exact/Monte-Carlo checks of the cut-event probability bound.

``experiment`` and ``cli`` wrap everything into reproducible sweeps.
"""

from pamod.models import (
    ArrivalLog,
    Model,
    MultiGraph,
    derive_seed,
    exact_small_t_distribution,
    generate,
    load_graph,
    merge,
    save_graph,
)
from pamod.cuts import (
    CutReport,
    ExpansionResult,
    SearchMethod,
    edge_boundary,
    exact_expansion,
    expansion_profile,
    sampled_expansion,
)
from pamod.modularity import (
    ModularityScore,
    baseline_expansion_bound,
    bound_from_expansion_profile,
    exact_modularity,
    expansion_modularity_bound,
    greedy_modularity,
    modularity_score,
    negative_relative_modularity,
    profile_modularity_bound,
    worst_part_bound,
)
from pamod.certify import (
    BoundCertificate,
    TailParams,
    TailSum,
    certify_modularity_bound,
    check_expansion_constant,
    check_rate_condition,
    complement_term_dominates,
    expansion_constant_value,
    large_h_modularity_bound,
    log_tail_term,
    max_certified_delta,
    union_bound_sum,
    verify_unimodality,
)
from pamod.cut_events import (
    CutEventScan,
    CutEventSpec,
    MCEstimate,
    cut_event_bound,
    estimate_cut_event,
    exact_cut_event,
    scan_cut_events,
    spec_bound,
)
from pamod.experiment import (
    ExperimentConfig,
    ExperimentReport,
    emit_report,
    run_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "ArrivalLog",
    "BoundCertificate",
    "CutEventScan",
    "CutEventSpec",
    "CutReport",
    "ExpansionResult",
    "ExperimentConfig",
    "ExperimentReport",
    "MCEstimate",
    "Model",
    "ModularityScore",
    "MultiGraph",
    "SearchMethod",
    "TailParams",
    "TailSum",
    "baseline_expansion_bound",
    "bound_from_expansion_profile",
    "certify_modularity_bound",
    "check_expansion_constant",
    "check_rate_condition",
    "complement_term_dominates",
    "cut_event_bound",
    "derive_seed",
    "edge_boundary",
    "emit_report",
    "estimate_cut_event",
    "exact_cut_event",
    "exact_expansion",
    "exact_modularity",
    "exact_small_t_distribution",
    "expansion_constant_value",
    "expansion_modularity_bound",
    "expansion_profile",
    "generate",
    "greedy_modularity",
    "large_h_modularity_bound",
    "load_graph",
    "log_tail_term",
    "max_certified_delta",
    "merge",
    "modularity_score",
    "negative_relative_modularity",
    "profile_modularity_bound",
    "run_experiment",
    "sampled_expansion",
    "save_graph",
    "scan_cut_events",
    "spec_bound",
    "union_bound_sum",
    "verify_unimodality",
    "worst_part_bound",
]
