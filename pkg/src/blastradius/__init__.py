"""blastradius: lateral-movement risk metrics over network snapshots.

Builds privilege-weighted K-hop compromise-probability matrices from a
snapshot of assets, reachable services, and per-service pivot probabilities;
reduces them to the LMS and BRE deployment metrics; brackets them with
analytic bounds; and ranks segmentation cuts by how much risk they remove.
"""

from .bounds import (
    BestPathResult,
    BoundsReport,
    best_path_lower_bound,
    compute_bounds,
    neumann_upper_bound,
    series_upper_bound,
    spectral_radius,
)
from .closure import (
    ClosureResult,
    IterationConfig,
    Mode,
    bool_reachability,
    default_hops,
    init_p1,
    khop_closure,
    max_compose,
    prob_compose,
    prob_union,
)
from .fixtures import FIXTURE_NAMES, fixture_path, load_fixture
from .lifting import (
    build_lifted_transition,
    collapse_classes,
    lifted_closure,
    lifted_init,
)
from .metrics import MetricsReport, bre, lms, summarize, threshold_filter
from .snapshot import (
    Asset,
    Edge,
    NetworkSnapshot,
    PivotPolicy,
    ServiceSpec,
    SnapshotError,
    build_adjacency,
    build_class_adjacencies,
    build_class_adjacency,
    build_pivot_matrix,
    default_pivot_policy,
    parse_policy,
    parse_snapshot,
    resolve_pivot,
    serialize_snapshot,
)
from .whatif import (
    CutImpact,
    CutKind,
    CutSpec,
    apply_cut,
    apply_cuts,
    evaluate_cut,
    evaluate_cuts,
    parse_cut_spec,
    rank_cuts,
    ranking_notes,
)

__version__ = "0.1.0"

__all__ = [
    "Asset",
    "BestPathResult",
    "BoundsReport",
    "ClosureResult",
    "CutImpact",
    "CutKind",
    "CutSpec",
    "Edge",
    "FIXTURE_NAMES",
    "IterationConfig",
    "MetricsReport",
    "Mode",
    "NetworkSnapshot",
    "PivotPolicy",
    "ServiceSpec",
    "SnapshotError",
    "apply_cut",
    "apply_cuts",
    "best_path_lower_bound",
    "bool_reachability",
    "bre",
    "build_adjacency",
    "build_class_adjacencies",
    "build_class_adjacency",
    "build_lifted_transition",
    "build_pivot_matrix",
    "collapse_classes",
    "compute_bounds",
    "default_hops",
    "default_pivot_policy",
    "evaluate_cut",
    "evaluate_cuts",
    "fixture_path",
    "init_p1",
    "khop_closure",
    "lifted_closure",
    "lifted_init",
    "lms",
    "load_fixture",
    "max_compose",
    "neumann_upper_bound",
    "parse_cut_spec",
    "parse_policy",
    "parse_snapshot",
    "prob_compose",
    "prob_union",
    "rank_cuts",
    "ranking_notes",
    "resolve_pivot",
    "serialize_snapshot",
    "series_upper_bound",
    "spectral_radius",
    "summarize",
    "threshold_filter",
]
