"""Variable impedance control with retrieval-augmented in-context parameter
generation: Python surface over the C++ core."""

from ._core import (  # noqa: F401
    BackendTag,
    Bank,
    BankConfig,
    BankIoError,
    BankStats,
    ControllerSettings,
    EpisodeResult,
    Exemplar,
    Frame,
    Gains6,
    GeneratorBackend,
    GeneratorOutput,
    HashEmbedder,
    HeuristicConfig,
    ImpedanceParams,
    ImpedanceRange,
    InsertReport,
    MethodKind,
    OutcomeLabel,
    ParseError,
    Phase,
    PhaseLabeler,
    PhaseThresholds,
    Pose,
    PromptBundle,
    QueryContext,
    RagRecord,
    RetrievalConfig,
    SuiteCell,
    SuiteResult,
    Twist,
    Wrench,
    adjoint_twist_to_world,
    baseline_params,
    brute_force_retrieve,
    build_prompt,
    clamp_params,
    cosine_sim,
    damping_from_stiffness,
    evaluate_fixtures,
    expand_gains,
    fixture_names,
    heuristic_generate,
    impedance_wrench,
    label_outcome,
    mix_seed,
    parse_response,
    pose_error,
    render_output,
    retrieve,
    run_fixture_episode,
    wrench_to_world_compensated,
)

__all__ = [name for name in dir() if not name.startswith("_")]
