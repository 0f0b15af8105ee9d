"""Vector mappings, the ranking heuristic, and the recognition loop.

A goal's score is the l2 length of the direction from the masked initial
state to the probability vector, minus the same length computed from the
currently observed relaxed state.  Observed facts with positive
probability shrink the second term; observed facts the goal assigns zero
probability to enlarge it, punishing the goal.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

import numpy as np

from .errors import UnknownIdError
from .grounding import GroundProblem
from .probability import FactProbabilityTable
from .relaxed import RelaxedState


@dataclass(frozen=True)
class ObservationEvent:
    """Either one observed action or one observed set of state facts."""

    action_id: int | None = None
    state_facts: frozenset[int] | None = None

    def __post_init__(self):
        if (self.action_id is None) == (self.state_facts is None):
            raise ValueError("exactly one of action_id/state_facts must be set")

    @classmethod
    def action(cls, action_id: int) -> "ObservationEvent":
        return cls(action_id=action_id)

    @classmethod
    def state(cls, facts) -> "ObservationEvent":
        return cls(state_facts=frozenset(facts))


def map_state(state: frozenset[int], fact_count: int) -> np.ndarray:
    """0/1 indicator vector of a planning state."""
    v = np.zeros(fact_count)
    ids = sorted(state)
    if ids and (ids[0] < 0 or ids[-1] >= fact_count):
        raise UnknownIdError("state contains fact ids outside the problem")
    v[ids] = 1.0
    return v


def map_probs(table: FactProbabilityTable) -> np.ndarray:
    return np.array(table.p, dtype=float)


def odot(s: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Masked elementwise product: s*v where v > 0, s elsewhere."""
    if s.shape != v.shape:
        raise ValueError(f"length mismatch: {s.shape} vs {v.shape}")
    return np.where(v > 0, s * v, s)


def direction(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    return y - x


def heuristic(s0v: np.ndarray, stv: np.ndarray, pv: np.ndarray) -> float:
    covered_start = float(np.linalg.norm(direction(odot(s0v, pv), pv)))
    covered_now = float(np.linalg.norm(direction(odot(stv, pv), pv)))
    return covered_start - covered_now


def progress(
    state: RelaxedState, obs: ObservationEvent, problem: GroundProblem
) -> RelaxedState:
    """Fold one observation into the observed relaxed state.

    Preconditions of observed actions are not enforced: observation
    sequences may be incomplete and intermediate states unknown.
    """
    if obs.action_id is not None:
        if not 0 <= obs.action_id < len(problem.actions):
            raise UnknownIdError(f"unknown action id: {obs.action_id}")
        return state.union(problem.actions[obs.action_id].add)
    if any(f < 0 or f >= problem.fact_count for f in obs.state_facts):
        raise UnknownIdError("observed state contains unknown fact ids")
    return state.union(obs.state_facts)


@dataclass
class RecognitionResult:
    heuristic: dict[int, float]  # goal index -> score
    recognized: frozenset[int]  # argmax set
    t: int  # number of observations folded in


@dataclass
class TraceStep:
    t: int
    heuristic: list[float]
    recognized: list[int]
    elapsed_ns: int


@dataclass
class RecognitionTrace:
    steps: list[TraceStep]

    def final_recognized(self) -> frozenset[int]:
        return frozenset(self.steps[-1].recognized) if self.steps else frozenset()

    def to_json(self, include_timings: bool = True) -> str:
        # Timings can be dropped so outputs stay byte-identical per seed.
        steps = []
        for s in self.steps:
            step = {"t": s.t, "h": s.heuristic, "recognized": s.recognized}
            if include_timings:
                step["elapsed_ns"] = s.elapsed_ns
            steps.append(step)
        return json.dumps(steps, indent=2)


def _argmax_set(scores: list[float]) -> frozenset[int]:
    top = max(scores)
    return frozenset(i for i, h in enumerate(scores) if h == top)


def recognize(
    problem: GroundProblem,
    tables: list[FactProbabilityTable],
    observations: list[ObservationEvent],
) -> RecognitionResult:
    """Score every goal against the observed relaxed state; ties all win."""
    if len(tables) != len(problem.goals):
        raise ValueError("one probability table per goal is required")
    state = RelaxedState(problem.s0)
    for obs in observations:
        state = progress(state, obs, problem)
    s0v = map_state(problem.s0, problem.fact_count)
    stv = map_state(state.facts, problem.fact_count)
    scores = [heuristic(s0v, stv, map_probs(table)) for table in tables]
    return RecognitionResult(
        heuristic=dict(enumerate(scores)),
        recognized=_argmax_set(scores),
        t=len(observations),
    )


def recognize_online(
    problem: GroundProblem,
    tables: list[FactProbabilityTable],
    observations: list[ObservationEvent],
) -> RecognitionTrace:
    """Incremental recognition: state carried forward, tables mapped once."""
    if len(tables) != len(problem.goals):
        raise ValueError("one probability table per goal is required")
    pvs = [map_probs(table) for table in tables]
    s0v = map_state(problem.s0, problem.fact_count)
    state = RelaxedState(problem.s0)
    steps: list[TraceStep] = []
    for t, obs in enumerate(observations, start=1):
        start_ns = time.perf_counter_ns()
        state = progress(state, obs, problem)
        stv = map_state(state.facts, problem.fact_count)
        scores = [heuristic(s0v, stv, pv) for pv in pvs]
        recognized = sorted(_argmax_set(scores))
        elapsed = time.perf_counter_ns() - start_ns
        steps.append(TraceStep(t, scores, recognized, elapsed))
    return RecognitionTrace(steps)
