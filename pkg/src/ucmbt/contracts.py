"""Execution contracts, the system-level sequential contract, and test goals."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

from .guards import GuardExpr, GuardLiteral, conjoin, disjoin, render_guard, render_literal
from .model import Edge, Path, SystemModel, UseCase, enumerate_paths

__all__ = [
    "ExecutionContract",
    "TestGoal",
    "EmptyFlow",
    "EmptyContract",
    "fold_guards",
    "system_contract",
    "scenario_contract",
    "extract_test_goals",
    "goal_id",
    "render_goal",
    "goals_to_json",
    "contract_to_dict",
]


class EmptyFlow(ValueError):
    pass


class EmptyContract(ValueError):
    pass


@dataclass(frozen=True)
class ExecutionContract:
    usecase_id: str
    body: GuardExpr
    pre: Optional[GuardExpr] = None
    post: Optional[GuardExpr] = None


@dataclass(frozen=True)
class TestGoal:
    __test__ = False  # keep pytest from collecting this class

    id: str
    literals: tuple[GuardLiteral, ...]
    path: Path

    @property
    def steps(self) -> list[str]:
        return [step for step, _ in self.path]


def fold_guards(entry: str, edges: tuple[Edge, ...]) -> Optional[GuardExpr]:
    """Fold an acyclic guarded graph into one AND/OR expression.

    A linear chain becomes the conjunction of its edge guards and a branch
    becomes the disjunction of its alternatives, each alternative being the
    branch guard conjoined with the fold of the remaining graph. ``None``
    means no guard constrains any path.
    """
    outs: dict[str, list[Edge]] = defaultdict(list)
    for e in edges:
        outs[e.src].append(e)
    memo: dict[str, Optional[GuardExpr]] = {}

    def fold(node: str) -> Optional[GuardExpr]:
        if node in memo:
            return memo[node]
        branches = [conjoin([e.guard, fold(e.dst)]) for e in outs.get(node, ())]
        result = disjoin(branches) if branches else None
        memo[node] = result
        return result

    return fold(entry)


def system_contract(model: SystemModel) -> GuardExpr:
    if model.flow is None:
        raise EmptyFlow("model has no use-case flow")
    expr = fold_guards(model.flow.entry, model.flow.edges)
    if expr is None:
        raise EmptyFlow("use-case flow carries no guards")
    return expr


def scenario_contract(uc: UseCase) -> ExecutionContract:
    body = fold_guards(uc.scenario.entry, uc.scenario.edges)
    if body is None:
        raise EmptyContract(f"scenario of use case {uc.id!r} carries no guards")
    return ExecutionContract(uc.id, body, uc.pre, uc.post)


def goal_id(usecase_id: str, n: int) -> str:
    return f"TG_{usecase_id}_{n}"


def extract_test_goals(uc: UseCase) -> list[TestGoal]:
    """One goal per scenario path, numbered from 1 in path order."""
    return [
        TestGoal(goal_id(uc.id, n), tuple(g for _, g in path if g is not None), path)
        for n, path in enumerate(enumerate_paths(uc.scenario), start=1)
    ]


def render_goal(goal: TestGoal) -> str:
    return f"{goal.id} = [{' and '.join(render_literal(l) for l in goal.literals)}]"


def goals_to_json(goals: list[TestGoal]) -> str:
    payload = [
        {"id": g.id, "literals": [render_literal(l) for l in g.literals], "path": g.steps}
        for g in goals
    ]
    return json.dumps(payload, indent=2) + "\n"


def contract_to_dict(contract: ExecutionContract) -> dict:
    return {
        "usecase": contract.usecase_id,
        "pre": None if contract.pre is None else render_guard(contract.pre),
        "body": render_guard(contract.body),
        "post": None if contract.post is None else render_guard(contract.post),
    }
