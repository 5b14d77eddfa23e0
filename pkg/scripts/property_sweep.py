#!/usr/bin/env python3
"""Run the contract/goal and execution properties over many random scenarios.

Exclusive mode gives each atom to one step, so the contract DNF must equal the
goal family exactly. Free mode reuses atoms; there the DNF is compared with
the goal family after dropping contradictory and subsumed goals.
"""

import argparse
import random
import time
from dataclasses import dataclass

from ucmbt.contracts import extract_test_goals, scenario_contract
from ucmbt.executor import execute_all
from ucmbt.generate import random_scenario
from ucmbt.guards import GuardLiteral, to_dnf
from ucmbt.model import UseCase
from ucmbt.synthesis import synthesize_chart


@dataclass
class SweepConfig:
    n: int = 3000
    seed: int = 0
    max_steps: int = 20
    max_branch: int = 3
    max_atoms: int = 12
    free: bool = False


def reduce_family(sets):
    consistent = {s for s in sets if not any(GuardLiteral(l.atom, not l.positive) in s for l in s)}
    return {s for s in consistent if not any(o < s for o in consistent)}


def sweep(cfg: SweepConfig) -> int:
    rng = random.Random(cfg.seed)
    failures = 0
    most = 0
    start = time.perf_counter()
    for k in range(cfg.n):
        sc = random_scenario(
            rng, cfg.max_steps, cfg.max_branch, cfg.max_atoms, exclusive=not cfg.free
        )
        uc = UseCase(f"G{k}", "generated", sc)
        goals = extract_test_goals(uc)
        most = max(most, len(goals))
        family = {frozenset(g.literals) for g in goals}
        expected = reduce_family(family) if cfg.free else family
        runs, cov = execute_all(synthesize_chart(uc), goals)
        ok = (
            to_dnf(scenario_contract(uc).body) == expected
            and all(r.passed and r.completed for r in runs)
            and cov.state_coverage == cov.transition_coverage == 1.0
        )
        if not ok:
            failures += 1
            print(f"counterexample at index {k}")
    took = time.perf_counter() - start
    print(f"{cfg.n} scenarios, {failures} failures, max {most} goals, {took:.1f}s")
    return failures


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    for name, default in vars(SweepConfig()).items():
        if isinstance(default, bool):
            ap.add_argument(f"--{name.replace('_', '-')}", action="store_true")
        else:
            ap.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    cfg = SweepConfig(**vars(ap.parse_args()))
    raise SystemExit(1 if sweep(cfg) else 0)


if __name__ == "__main__":
    main()
