"""Walk through goal recognition on the bundled 5x5 grid instance.

An agent starts at c23 and may be heading for c1 (goal 0) or c5 (goal 1).
After observing two moves toward the left wall, the heuristic separates
the goals: facts observed so far have positive probability only under
goal 0.
"""

from pathlib import Path

from goalrec import exact_oracle, load_instance, prepare_instance, recognize_online

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main() -> None:
    instance = load_instance(FIXTURES / "grid")
    problem, events = prepare_instance(instance)
    print(f"instance: {instance.name}")
    print(f"facts: {problem.fact_count}, actions: {len(problem.actions)}")
    print(f"hypotheses: {[sorted(problem.fact_name(f) for f in g) for g in problem.goals]}")
    print(f"observations: {instance.observations}")
    print()

    tables = [exact_oracle(problem, i) for i in range(len(problem.goals))]
    print("exact observation probabilities (nonzero rows):")
    for i, table in enumerate(tables):
        rows = [
            f"  {problem.fact_name(f)}: {table.p[f]:.1f}"
            for f in range(problem.fact_count)
            if table.p[f] > 0
        ]
        print(f"goal {i}:")
        print("\n".join(rows))
    print()

    trace = recognize_online(problem, tables, events)
    for step in trace.steps:
        scores = ", ".join(f"{h:+.4f}" for h in step.heuristic)
        print(f"after observation {step.t}: h = [{scores}], recognized = {step.recognized}")
    print()
    print(f"final recognized goal set: {sorted(trace.final_recognized())}")
    print(f"true goal index: {instance.true_goal_index}")


if __name__ == "__main__":
    main()
