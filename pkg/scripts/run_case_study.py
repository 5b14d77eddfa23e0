#!/usr/bin/env python3
"""Print every pipeline artifact for the bundled inventory model (or another model)."""

import argparse

from ucmbt import load_model
from ucmbt.contracts import extract_test_goals, render_goal, scenario_contract, system_contract
from ucmbt.executor import execute_all
from ucmbt.export import chart_to_text, seqdiags_to_text, table_to_text
from ucmbt.guards import render_guard
from ucmbt.loader import bundled_model_path
from ucmbt.synthesis import build_state_chart, derive_sequence_diagrams, generate_transition_table


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("model", nargs="?", default=str(bundled_model_path()))
    ap.add_argument("--usecase", default="PR")
    args = ap.parse_args()

    model = load_model(args.model)
    uc = model.usecases[args.usecase]

    print("system contract:", render_guard(system_contract(model)))
    print(f"{uc.id} contract:", render_guard(scenario_contract(uc).body))
    print()
    goals = extract_test_goals(uc)
    for g in goals:
        print(render_goal(g))
    print()
    diagrams = derive_sequence_diagrams(uc)
    print(seqdiags_to_text(diagrams))
    table = generate_transition_table(diagrams)
    print(table_to_text(table))
    chart = build_state_chart(table)
    print(chart_to_text(chart))
    runs, cov = execute_all(chart, goals)
    for r in runs:
        print(f"{r.goal_id}: {r.verdict} completed={r.completed} steps={len(r.trace)}")
    print(f"state coverage {cov.state_coverage:.2f}, transition coverage {cov.transition_coverage:.2f}")


if __name__ == "__main__":
    main()
