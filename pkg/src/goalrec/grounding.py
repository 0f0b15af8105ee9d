"""Grounding of typed schemas into dense, lexicographically indexed facts/actions.

Predicates that never occur in any add or delete effect are static: they
restrict instantiation against the initial state and are then dropped, so
the fact universe only contains fluent facts.  No reachability pruning is
applied; grounding is exhaustive and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import GroundingError
from .pddl import ROOT_TYPE, DomainAst, Literal, ProblemAst


def type_ancestors(domain: DomainAst) -> dict[str, set[str]]:
    """Map each type to itself plus all its ancestors (up to object)."""
    parents = domain.type_parents()
    out: dict[str, set[str]] = {}
    for typ in parents:
        chain = set()
        cur: str | None = typ
        while cur is not None:
            chain.add(cur)
            cur = parents.get(cur)
        out[typ] = chain
    return out


def objects_by_type(domain: DomainAst, problem: ProblemAst) -> dict[str, list[str]]:
    """Sorted object lists per type, honoring the type hierarchy."""
    ancestors = type_ancestors(domain)
    out: dict[str, list[str]] = {typ: [] for typ in ancestors}
    for obj, typ in sorted(problem.objects):
        for anc in ancestors.get(typ, {ROOT_TYPE}):
            out.setdefault(anc, []).append(obj)
    return out


def ground_instantiations(params, universe: dict[str, list[str]]):
    """All type-consistent argument tuples for a typed parameter list."""
    pools = [universe.get(typ, []) for _, typ in params]
    return product(*pools)


def atom_name(predicate: str, args: tuple[str, ...]) -> str:
    inner = " ".join((predicate,) + args) if args else predicate
    return f"({inner})"


@dataclass(frozen=True)
class GroundFact:
    id: int
    name: str


@dataclass(frozen=True)
class GroundAction:
    id: int
    name: str
    pre: frozenset[int]
    add: frozenset[int]
    delete: frozenset[int]
    cost: Fraction = Fraction(1)


@dataclass
class GroundProblem:
    facts: list[GroundFact]
    actions: list[GroundAction]
    s0: frozenset[int]
    goals: list[frozenset[int]]
    fact_ids: dict[str, int] = field(repr=False, default_factory=dict)
    action_ids: dict[str, int] = field(repr=False, default_factory=dict)

    @property
    def fact_count(self) -> int:
        return len(self.facts)

    def fact_name(self, fact_id: int) -> str:
        return self.facts[fact_id].name

    def fact_id(self, name: str) -> int:
        try:
            return self.fact_ids[name]
        except KeyError:
            raise GroundingError(f"unknown fact: {name}") from None

    def action_id(self, name: str) -> int:
        try:
            return self.action_ids[name]
        except KeyError:
            raise GroundingError(f"unknown action: {name}") from None


def static_predicates(domain: DomainAst) -> frozenset[str]:
    fluent = set()
    for schema in domain.schemas:
        fluent.update(lit.predicate for lit in schema.add)
        fluent.update(lit.predicate for lit in schema.delete)
    return frozenset(p.name for p in domain.predicates) - fluent


def ground(
    domain: DomainAst,
    problem: ProblemAst,
    hypotheses: list[frozenset[Literal]] | None = None,
) -> GroundProblem:
    """Ground a compiled (negation-free) domain/problem pair.

    Each hypothesis literal set becomes one goal description; when none
    are given, the problem's own goal is the single hypothesis.
    """
    if hypotheses is None:
        hypotheses = [problem.goal]
    if not hypotheses:
        raise GroundingError("at least one goal hypothesis is required")

    for schema in domain.schemas:
        if any(lit.negated for lit in schema.pre):
            raise GroundingError(
                f"schema {schema.name} has negated preconditions; compile negations first"
            )

    universe = objects_by_type(domain, problem)
    statics = static_predicates(domain)

    fact_names: list[str] = []
    for pred in domain.predicates:
        if pred.name in statics:
            continue
        for args in ground_instantiations(pred.params, universe):
            fact_names.append(atom_name(pred.name, tuple(args)))
    fact_names.sort()
    fact_ids = {name: i for i, name in enumerate(fact_names)}
    facts = [GroundFact(i, name) for i, name in enumerate(fact_names)]

    static_truth = {
        atom_name(lit.predicate, lit.args)
        for lit in problem.init
        if lit.predicate in statics
    }

    grounded: list[tuple[str, frozenset[int], frozenset[int], frozenset[int], Fraction]] = []
    for schema in domain.schemas:
        var_index = {var: i for i, (var, _) in enumerate(schema.params)}

        def bind(lit: Literal, binding: tuple[str, ...]) -> str:
            args = tuple(
                binding[var_index[a]] if a.startswith("?") else a for a in lit.args
            )
            return atom_name(lit.predicate, args)

        for binding in ground_instantiations(schema.params, universe):
            binding = tuple(binding)
            pre: set[int] = set()
            applicable = True
            for lit in schema.pre:
                name = bind(lit, binding)
                if lit.predicate in statics:
                    if name not in static_truth:
                        applicable = False
                        break
                else:
                    pre.add(fact_ids[name])
            if not applicable:
                continue
            add = frozenset(fact_ids[bind(lit, binding)] for lit in schema.add)
            delete = frozenset(fact_ids[bind(lit, binding)] for lit in schema.delete)
            name = atom_name(schema.name, binding)
            grounded.append((name, frozenset(pre), add, delete - add, schema.cost))

    grounded.sort(key=lambda item: item[0])
    actions = [
        GroundAction(i, name, pre, add, delete, cost)
        for i, (name, pre, add, delete, cost) in enumerate(grounded)
    ]
    action_ids = {a.name: a.id for a in actions}

    s0 = frozenset(
        fact_ids[atom_name(lit.predicate, lit.args)]
        for lit in problem.init
        if lit.predicate not in statics
    )

    goals: list[frozenset[int]] = []
    for hyp in hypotheses:
        ids = set()
        for lit in hyp:
            if lit.negated:
                raise GroundingError(
                    f"hypothesis literal {lit.canonical()} is negated; compile negations first"
                )
            name = atom_name(lit.predicate, lit.args)
            if name not in fact_ids:
                raise GroundingError(f"hypothesis literal not groundable: {name}")
            ids.add(fact_ids[name])
        goals.append(frozenset(ids))

    return GroundProblem(facts, actions, s0, goals, fact_ids, action_ids)
