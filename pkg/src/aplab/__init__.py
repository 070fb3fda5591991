"""Exact deciders, hypergraph structure and Monte Carlo experiments for
colouring properties of arithmetic-progression systems."""

__version__ = "0.1.0"

from .colourings import (
    APClass,
    APCounts,
    Colouring,
    classify_ap,
    count_coloured_aps,
    is_alpha_bounded,
    is_merging,
    merge_colours,
    normalize,
)
from .cycles import (
    BudgetExceededError,
    CycleStructureReport,
    HypergraphCycle,
    IncidenceGraph,
    cycle_span,
    cycle_structure_report,
    enumerate_minimal_cycles,
    girth,
    has_girth_at_least,
    incidence_graph,
    validate_cycle,
)
from .deciders import (
    DecisionResult,
    certificate_refutes_alpharb,
    certificate_refutes_alphasz,
    certificate_refutes_can,
    certificate_refutes_rkvdw,
    is_alpha_k_rb,
    is_alpha_k_sz,
    is_can_k_vdw,
    is_r_k_vdw,
    max_ap_free_subset,
)
from .montecarlo import (
    AlphaRb,
    AlphaSz,
    CanVdW,
    GirthAtLeast,
    RkVdW,
    ScalingResult,
    SearchOutcome,
    SizeAtLeast,
    ThresholdDiagnosticError,
    ThresholdResult,
    TrialOutcome,
    TrialPlan,
    estimate_probability,
    run_plan,
    sample_binomial_set,
    scaling_experiment,
    search_sparse_canvdw,
    threshold_bisect,
    wilson_interval,
)
from .progressions import (
    ArithmeticProgression,
    GroundSet,
    UniformHypergraph,
    aps_through_element,
    aps_through_pair,
    build_ap_hypergraph,
    count_aps_in_interval,
    enumerate_aps,
)
from .rainbow import (
    ContainerStructure,
    DegreeBoundReport,
    RainbowHypergraph,
    VertexSubset,
    build_rainbow_hypergraph,
    colour_set,
    count_rainbow_edges_in,
    embed_coloured_set,
    extract_container_structure,
    max_degree,
    project,
    verify_degree_bounds,
)
