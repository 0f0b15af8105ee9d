"""Delete-relaxation semantics and relaxed planning graph construction."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InapplicableActionError, UnknownIdError
from .grounding import GroundAction, GroundProblem


@dataclass(frozen=True)
class RelaxedState:
    """A planning state under delete relaxation; only ever grows."""

    facts: frozenset[int]

    def __contains__(self, fact_id: int) -> bool:
        return fact_id in self.facts

    def union(self, fact_ids) -> "RelaxedState":
        return RelaxedState(self.facts | frozenset(fact_ids))


def relaxed_apply(state: RelaxedState, action: GroundAction) -> RelaxedState:
    """Apply an action ignoring its delete list."""
    if not action.pre <= state.facts:
        missing = sorted(action.pre - state.facts)
        raise InapplicableActionError(
            f"action {action.name} inapplicable; unmet preconditions: {missing}"
        )
    return state.union(action.add)


@dataclass
class RelaxedPlanningGraph:
    """First-appearance levels of facts and actions under delete relaxation.

    fact_levels[f] is the first level at which f becomes true (0 = initial);
    action_levels[t] holds the actions first applicable at level t.
    """

    fact_levels: dict[int, int]
    action_levels: list[frozenset[int]]
    levels: int
    goal: frozenset[int]
    fact_count: int
    unreachable: bool = False
    unreached_goal_facts: frozenset[int] = field(default_factory=frozenset)

    def action_level(self, t: int) -> frozenset[int]:
        if t >= len(self.action_levels):
            return frozenset()
        return self.action_levels[t]

    def dump(self, problem: GroundProblem) -> str:
        lines = []
        by_level: dict[int, list[str]] = {}
        for fact, level in self.fact_levels.items():
            by_level.setdefault(level, []).append(problem.fact_name(fact))
        for level in range(self.levels + 1):
            names = ", ".join(sorted(by_level.get(level, [])))
            lines.append(f"level {level} facts: {names}")
            if level < len(self.action_levels):
                acts = ", ".join(
                    sorted(problem.actions[a].name for a in self.action_levels[level])
                )
                lines.append(f"level {level} actions: {acts}")
        if self.unreachable:
            unreached = ", ".join(
                sorted(problem.fact_name(f) for f in self.unreached_goal_facts)
            )
            lines.append(f"unreachable goal facts: {unreached}")
        return "\n".join(lines)


def build_rpg(problem: GroundProblem, goal: frozenset[int]) -> RelaxedPlanningGraph:
    """Expand levels until all goal facts are reached or a fixpoint occurs.

    Unreachable goals yield a flagged graph rather than an error, so a
    recognizer can still assign such hypotheses an all-zero table.
    """
    fact_levels = {f: 0 for f in problem.s0}
    action_levels: list[frozenset[int]] = []
    seen_actions: set[int] = set()
    reached = set(problem.s0)
    level = 0

    while not goal <= reached:
        new_actions = frozenset(
            a.id
            for a in problem.actions
            if a.id not in seen_actions and a.pre <= reached
        )
        new_facts = set()
        for aid in new_actions:
            new_facts |= problem.actions[aid].add - reached
        if not new_facts:
            # Fixpoint; record the last applicable batch for completeness.
            if new_actions:
                action_levels.append(new_actions)
                seen_actions |= new_actions
            return RelaxedPlanningGraph(
                fact_levels,
                action_levels,
                level,
                goal,
                problem.fact_count,
                unreachable=True,
                unreached_goal_facts=frozenset(goal - reached),
            )
        action_levels.append(new_actions)
        seen_actions |= new_actions
        level += 1
        for f in sorted(new_facts):
            fact_levels[f] = level
        reached |= new_facts

    return RelaxedPlanningGraph(fact_levels, action_levels, level, goal, problem.fact_count)


def relaxed_reachable(rpg: RelaxedPlanningGraph, fact_id: int) -> bool:
    if not 0 <= fact_id < rpg.fact_count:
        raise UnknownIdError(f"unknown fact id: {fact_id}")
    return fact_id in rpg.fact_levels
