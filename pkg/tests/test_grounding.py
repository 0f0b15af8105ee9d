"""Grounding: dense ids, static-predicate handling, determinism."""

import pytest

from goalrec.bench import build_problem, parse_hypothesis_line
from goalrec.errors import GroundingError
from goalrec.gridgen import DOMAIN_TEXT, example_grid, template_text
from goalrec.grounding import ground
from goalrec.negation import compile_negations
from goalrec.pddl import Literal, parse_domain, parse_problem

SPEC = example_grid()


def _grid_problem():
    hyps = (
        parse_hypothesis_line("(is-at c1)"),
        parse_hypothesis_line("(is-at c5)"),
    )
    return build_problem(DOMAIN_TEXT, template_text(SPEC), hyps)


class TestGridGrounding:
    def test_fact_universe_is_25_cells(self):
        problem = _grid_problem()
        assert problem.fact_count == 25
        assert {f.name for f in problem.facts} == {
            f"(is-at c{i})" for i in range(1, 26)
        }

    def test_move_action_shape(self):
        problem = _grid_problem()
        aid = problem.action_id("(m c23 c22)")
        action = problem.actions[aid]
        assert action.pre == {problem.fact_id("(is-at c23)")}
        assert action.add == {problem.fact_id("(is-at c22)")}
        assert action.delete == {problem.fact_id("(is-at c23)")}

    def test_move_count_matches_open_adjacency(self):
        # Independent count: directed 4-connected edges between open cells.
        open_cells = set(SPEC.open_cells())
        edges = 0
        for cell in open_cells:
            row, col = SPEC.coords(cell)
            for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                r, c = row + dr, col + dc
                if 1 <= r <= 5 and 1 <= c <= 5 and SPEC.cell(r, c) in open_cells:
                    edges += 1
        problem = _grid_problem()
        assert len(problem.actions) == edges
        assert edges == 2 * (edges // 2)  # directed edges pair up

    def test_goals_resolve_to_fact_ids(self):
        problem = _grid_problem()
        assert problem.goals[0] == {problem.fact_id("(is-at c1)")}
        assert problem.goals[1] == {problem.fact_id("(is-at c5)")}
        assert problem.s0 == {problem.fact_id("(is-at c23)")}


class TestGroundProblemContracts:
    def test_fact_id_bijection(self):
        problem = _grid_problem()
        for fact in problem.facts:
            assert problem.fact_id(fact.name) == fact.id
            assert problem.fact_name(fact.id) == fact.name
        assert [f.id for f in problem.facts] == list(range(problem.fact_count))

    def test_ids_follow_lexicographic_names(self):
        problem = _grid_problem()
        names = [f.name for f in problem.facts]
        assert names == sorted(names)
        assert [a.name for a in problem.actions] == sorted(
            a.name for a in problem.actions
        )

    def test_grounding_is_deterministic(self):
        a, b = _grid_problem(), _grid_problem()
        assert [f.name for f in a.facts] == [f.name for f in b.facts]
        assert [(x.name, x.pre, x.add, x.delete) for x in a.actions] == [
            (x.name, x.pre, x.add, x.delete) for x in b.actions
        ]
        assert a.s0 == b.s0 and a.goals == b.goals

    def test_add_delete_disjoint(self):
        problem = _grid_problem()
        for action in problem.actions:
            assert not action.add & action.delete

    def test_unknown_names_raise(self):
        problem = _grid_problem()
        with pytest.raises(GroundingError):
            problem.fact_id("(is-at c99)")
        with pytest.raises(GroundingError):
            problem.action_id("(m c1 c25)")


class TestHypothesisGrounding:
    def test_ungroundable_hypothesis_rejected(self):
        domain = parse_domain(DOMAIN_TEXT)
        problem = parse_problem(
            template_text(SPEC).replace("<HYPOTHESIS>", "(is-at c1)"), domain
        )
        bad = [frozenset({Literal("adj", ("c1", "c2"))})]  # static, not a fact
        with pytest.raises(GroundingError, match="not groundable"):
            ground(domain, problem, bad)

    def test_empty_hypothesis_list_rejected(self):
        domain = parse_domain(DOMAIN_TEXT)
        problem = parse_problem(
            template_text(SPEC).replace("<HYPOTHESIS>", "(is-at c1)"), domain
        )
        with pytest.raises(GroundingError):
            ground(domain, problem, [])

    def test_negated_hypothesis_requires_compilation(self):
        domain = parse_domain(DOMAIN_TEXT)
        problem = parse_problem(
            template_text(SPEC).replace("<HYPOTHESIS>", "(is-at c1)"), domain
        )
        bad = [frozenset({Literal("is-at", ("c1",), negated=True)})]
        with pytest.raises(GroundingError, match="negated"):
            ground(domain, problem, bad)


class TestNegationSoundness:
    DOMAIN = """\
(define (domain doors)
  (:requirements :strips :negative-preconditions)
  (:predicates (locked ?d) (open ?d))
  (:action push
    :parameters (?d)
    :precondition (not (locked ?d))
    :effect (open ?d))
  (:action lock
    :parameters (?d)
    :precondition (and)
    :effect (locked ?d))
  (:action unlock
    :parameters (?d)
    :precondition (locked ?d)
    :effect (not (locked ?d))))
"""
    PROBLEM = """\
(define (problem p)
  (:domain doors)
  (:objects d1 d2)
  (:init (locked d2))
  (:goal (open d1)))
"""

    def test_exclusivity_preserved_under_application(self):
        domain = parse_domain(self.DOMAIN)
        problem = parse_problem(self.PROBLEM, domain)
        gp = ground(*compile_negations(domain, problem))
        pairs = [
            (gp.fact_id(f"(locked {d})"), gp.fact_id(f"(not-locked {d})"))
            for d in ("d1", "d2")
        ]

        def exclusive(state):
            return all((p in state) != (q in state) for p, q in pairs)

        frontier = [gp.s0]
        seen = {gp.s0}
        while frontier:
            state = frontier.pop()
            assert exclusive(state)
            for action in gp.actions:
                if action.pre <= state:
                    succ = frozenset((state - action.delete) | action.add)
                    if succ not in seen:
                        seen.add(succ)
                        frontier.append(succ)
        assert len(seen) > 1


class TestTypedGrounding:
    def test_logistics_static_link_restricts_drives(self, logistics):
        problem, _ = logistics
        drives = [a for a in problem.actions if a.name.startswith("(drive")]
        # 4 directed links, 1 truck.
        assert len(drives) == 4
        assert "(drive t1 l1 l3)" not in {a.name for a in problem.actions}

    def test_logistics_fact_universe_excludes_statics(self, logistics):
        problem, _ = logistics
        names = {f.name for f in problem.facts}
        assert not any(n.startswith("(link") for n in names)
        # at-truck: 1x3, at-pkg: 2x3, in: 2x1
        assert problem.fact_count == 3 + 6 + 2
