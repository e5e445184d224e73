from __future__ import annotations

__version__ = "0.1.0"

from .words import (
    EMPTY,
    Alphabet,
    Presentation,
    Word,
    formal_inverse,
    free_reduce,
    is_freely_reduced,
    shortlex_key,
    symmetrize,
)

from .rewriting import (
    Rule,
    RewritingSystem,
    check_minimal,
    check_unique_normal_forms,
    critical_pairs,
    gamma,
    gamma_prefix,
    gamma_table,
    normal_form,
    normal_form_trace,
    prefix_rewrite_sequence,
    rewrite_once,
    rewriting_presentation,
)

from .cayley import (
    CayleyBall,
    ball_stabilizes,
    build_ball,
    check_almost_convex,
    check_fellow_traveler,
    enumerate_identity_words,
    shortlex_geodesic,
    sphere,
)

from .flow import (
    FlowFunction,
    FlowReport,
    ac_flow,
    ac_presentation,
    export_triples,
    fellow_presentation,
    flow_presentation,
    rewriting_flow,
    verify_flow,
)

from .diagram import (
    CoarseProfile,
    DiagramBuilder,
    VanKampenDiagram,
    check_normal_form_paths,
    coarse_profile_extrinsic,
    coarse_profile_intrinsic,
    validate,
)

from .filling import (
    DiagramCombing,
    EdgeCombing,
    NDiagramBuilder,
    build_catalog,
    build_finite_filling,
    build_ndiagram,
    build_thin_diagram,
    geodesic_combing,
    seashell,
)

from .tameness import (
    BoundSuite,
    StepFunction,
    check_diameter_bound,
    compute_Le,
    compute_kappas,
    compute_mus,
    compute_t_functions,
    k_r_prime,
    measure_tameness,
    rsgrowth_bound,
)

from .presets import PresetEntry, bs1p_nf_member, catalog, preset, thompson_nf_member

from .textformat import format_presentation, parse_presentation_file

from .config import Budgets, RunConfig, budgets, budgets_from_env

from .result import Err, Ok, Result, Matcher

from .safe import safe, grow, growth_config, GrowthConfig

from .error import TaggedError, UnhandledException, is_panic, panic, Panic


__all__ = [
    # Words and presentations
    "EMPTY",
    "Alphabet",
    "Presentation",
    "Word",
    "formal_inverse",
    "free_reduce",
    "is_freely_reduced",
    "shortlex_key",
    "symmetrize",
    # Rewriting
    "Rule",
    "RewritingSystem",
    "check_minimal",
    "check_unique_normal_forms",
    "critical_pairs",
    "gamma",
    "gamma_prefix",
    "gamma_table",
    "normal_form",
    "normal_form_trace",
    "prefix_rewrite_sequence",
    "rewrite_once",
    "rewriting_presentation",
    # Cayley balls
    "CayleyBall",
    "ball_stabilizes",
    "build_ball",
    "check_almost_convex",
    "check_fellow_traveler",
    "enumerate_identity_words",
    "shortlex_geodesic",
    "sphere",
    # Flow functions
    "FlowFunction",
    "FlowReport",
    "ac_flow",
    "ac_presentation",
    "export_triples",
    "fellow_presentation",
    "flow_presentation",
    "rewriting_flow",
    "verify_flow",
    # Diagrams
    "CoarseProfile",
    "DiagramBuilder",
    "VanKampenDiagram",
    "check_normal_form_paths",
    "coarse_profile_extrinsic",
    "coarse_profile_intrinsic",
    "validate",
    # Fillings
    "DiagramCombing",
    "EdgeCombing",
    "NDiagramBuilder",
    "build_catalog",
    "build_finite_filling",
    "build_ndiagram",
    "build_thin_diagram",
    "geodesic_combing",
    "seashell",
    # Tameness
    "BoundSuite",
    "StepFunction",
    "check_diameter_bound",
    "compute_Le",
    "compute_kappas",
    "compute_mus",
    "compute_t_functions",
    "k_r_prime",
    "measure_tameness",
    "rsgrowth_bound",
    # Presets and files
    "PresetEntry",
    "bs1p_nf_member",
    "catalog",
    "preset",
    "thompson_nf_member",
    "format_presentation",
    "parse_presentation_file",
    # Configuration
    "Budgets",
    "RunConfig",
    "budgets",
    "budgets_from_env",
    # Result types
    "Err",
    "Ok",
    "Result",
    "Matcher",
    # Safe functions
    "safe",
    "grow",
    "growth_config",
    "GrowthConfig",
    # Error types
    "TaggedError",
    "UnhandledException",
    "is_panic",
    "panic",
    "Panic",
]
