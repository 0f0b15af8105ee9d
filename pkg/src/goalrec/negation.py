"""Compiling negated preconditions and goals away.

For every predicate p appearing negated anywhere, a complement predicate
not-p is introduced; adds of p delete not-p and deletes of p add not-p.
The initial state is closed so that exactly one of p/not-p holds per
ground instantiation.
"""

from __future__ import annotations

from dataclasses import replace

from .errors import ValidationError
from .grounding import ground_instantiations, objects_by_type
from .pddl import DomainAst, Literal, Predicate, ProblemAst

COMPLEMENT_PREFIX = "not-"


def negated_predicates(domain: DomainAst, problem: ProblemAst) -> frozenset[str]:
    names = {
        lit.predicate
        for schema in domain.schemas
        for lit in schema.pre
        if lit.negated
    }
    names |= {lit.predicate for lit in problem.goal if lit.negated}
    return frozenset(names)


def complement_literal(lit: Literal) -> Literal:
    """Rewrite a negated literal to its positive complement atom."""
    if not lit.negated:
        return lit
    return Literal(COMPLEMENT_PREFIX + lit.predicate, lit.args)


def compile_negations(
    domain: DomainAst, problem: ProblemAst
) -> tuple[DomainAst, ProblemAst]:
    """Total transformation; identity when no negations occur."""
    negated = negated_predicates(domain, problem)
    if not negated:
        return domain, problem

    preds = domain.predicate_map()
    for name in negated:
        if COMPLEMENT_PREFIX + name in preds:
            raise ValidationError(
                f"predicate {COMPLEMENT_PREFIX + name} collides with negation compilation"
            )

    new_predicates = list(domain.predicates)
    for name in sorted(negated):
        base = preds[name]
        new_predicates.append(Predicate(COMPLEMENT_PREFIX + name, base.params))

    new_schemas = []
    for schema in domain.schemas:
        pre = tuple(
            complement_literal(lit) if lit.negated else lit for lit in schema.pre
        )
        add = list(schema.add)
        delete = list(schema.delete)
        for lit in schema.add:
            if lit.predicate in negated:
                delete.append(Literal(COMPLEMENT_PREFIX + lit.predicate, lit.args))
        for lit in schema.delete:
            if lit.predicate in negated:
                add.append(Literal(COMPLEMENT_PREFIX + lit.predicate, lit.args))
        new_schemas.append(
            replace(schema, pre=pre, add=tuple(add), delete=tuple(delete))
        )

    new_domain = replace(
        domain, predicates=tuple(new_predicates), schemas=tuple(new_schemas)
    )

    # Closed-world completion: needs the object universe, hence done here
    # rather than at parse time.
    universe = objects_by_type(new_domain, problem)
    init = set(problem.init)
    for name in sorted(negated):
        base = preds[name]
        for args in ground_instantiations(base.params, universe):
            if Literal(name, tuple(args)) not in problem.init:
                init.add(Literal(COMPLEMENT_PREFIX + name, tuple(args)))

    goal = frozenset(
        complement_literal(lit) if lit.negated else lit for lit in problem.goal
    )
    new_problem = replace(problem, init=frozenset(init), goal=goal)
    return new_domain, new_problem


def compile_hypothesis(
    hypothesis: frozenset[Literal], negated: frozenset[str]
) -> frozenset[Literal]:
    """Apply the same rewrite to an external goal hypothesis."""
    out = set()
    for lit in hypothesis:
        if lit.negated:
            if lit.predicate not in negated:
                raise ValidationError(
                    f"negated hypothesis literal {lit.canonical()} has no complement; "
                    "include it in the compiled problem goal"
                )
            out.add(complement_literal(lit))
        else:
            out.add(lit)
    return frozenset(out)
