"""Goal recognition from fact observation probabilities over STRIPS domains."""

from .bench import (
    EvaluationReport,
    RecognitionInstance,
    build_problem,
    load_instance,
    precision,
    prepare_instance,
    run_benchmark,
    spread,
    timing_profile,
)
from .grounding import GroundAction, GroundFact, GroundProblem, ground
from .negation import compile_negations
from .pddl import DomainAst, Literal, ProblemAst, parse_domain, parse_problem
from .probability import FactProbabilityTable, estimate, exact_oracle, not_observed
from .recognition import (
    ObservationEvent,
    RecognitionResult,
    RecognitionTrace,
    direction,
    heuristic,
    map_probs,
    map_state,
    odot,
    progress,
    recognize,
    recognize_online,
)
from .relaxed import (
    RelaxedPlanningGraph,
    RelaxedState,
    build_rpg,
    relaxed_apply,
    relaxed_reachable,
)
from .sampling import (
    SamplerState,
    SupporterSampleSet,
    generate_goal_supporters,
    sample_subgoal_supporters,
)

__all__ = [
    "DomainAst",
    "EvaluationReport",
    "FactProbabilityTable",
    "GroundAction",
    "GroundFact",
    "GroundProblem",
    "Literal",
    "ObservationEvent",
    "ProblemAst",
    "RecognitionInstance",
    "RecognitionResult",
    "RecognitionTrace",
    "RelaxedPlanningGraph",
    "RelaxedState",
    "SamplerState",
    "SupporterSampleSet",
    "build_problem",
    "build_rpg",
    "compile_negations",
    "direction",
    "estimate",
    "exact_oracle",
    "generate_goal_supporters",
    "ground",
    "heuristic",
    "load_instance",
    "map_probs",
    "map_state",
    "not_observed",
    "odot",
    "parse_domain",
    "parse_problem",
    "precision",
    "prepare_instance",
    "progress",
    "recognize",
    "recognize_online",
    "relaxed_apply",
    "relaxed_reachable",
    "run_benchmark",
    "sample_subgoal_supporters",
    "spread",
    "timing_profile",
]
