"""Running test goals on a statechart and measuring state/transition coverage."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .contracts import TestGoal
from .guards import render_literal
from .synthesis import StateChart, Transition

__all__ = [
    "FailureReason",
    "GoalRun",
    "CoverageReport",
    "execute_goal",
    "execute_all",
    "coverage_of",
    "report_to_dict",
]

PASS = "PASS"
FAIL = "FAIL"


@dataclass(frozen=True)
class FailureReason:
    kind: str  # NoEnabledTransition | AmbiguousUnguarded | LeftoverLiterals | UnguardedCycle
    state: Optional[str] = None
    literal: Optional[str] = None
    count: Optional[int] = None

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.state is not None:
            out["state"] = self.state
        if self.literal is not None:
            out["literal"] = self.literal
        if self.count is not None:
            out["count"] = self.count
        return out


@dataclass(frozen=True)
class GoalRun:
    goal_id: str
    verdict: str
    completed: bool
    trace: tuple[Transition, ...]
    failure_reason: Optional[FailureReason] = None

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def visited_states(self, initial: str) -> list[str]:
        return [initial] + [t.dst for t in self.trace]


@dataclass(frozen=True)
class CoverageReport:
    states_total: int
    states_visited: int
    transitions_total: int
    transitions_visited: int
    uncovered_states: tuple[str, ...] = ()
    uncovered_transitions: tuple[Transition, ...] = field(default=())

    @property
    def state_coverage(self) -> float:
        return self.states_visited / self.states_total if self.states_total else 1.0

    @property
    def transition_coverage(self) -> float:
        return self.transitions_visited / self.transitions_total if self.transitions_total else 1.0


def execute_goal(chart: StateChart, goal: TestGoal) -> GoalRun:
    """Walk ``chart`` from its initial state, consuming the goal's literals.

    A state whose only way out is an unguarded transition is left through it
    without consuming anything. Otherwise the next pending literal must match
    the guard of one outgoing transition. The run passes when every literal
    has been consumed; it is ``completed`` when the walk then ends on a final
    state.
    """
    literals = list(goal.literals)
    pending = 0
    state = chart.initial
    trace: list[Transition] = []
    seen: set[tuple[str, int]] = set()

    def fail(reason: FailureReason) -> GoalRun:
        return GoalRun(goal.id, FAIL, state in chart.finals, tuple(trace), reason)

    while True:
        # an unguarded loop would otherwise walk forever
        if (state, pending) in seen:
            return fail(FailureReason("UnguardedCycle", state=state))
        seen.add((state, pending))
        outs = chart.outgoing(state)
        if not outs:
            break
        unguarded = [t for t in outs if t.guard is None]
        if unguarded:
            if len(outs) > 1:
                return fail(FailureReason("AmbiguousUnguarded", state=state))
            trace.append(unguarded[0])
            state = unguarded[0].dst
            continue
        if pending == len(literals):
            break
        want = literals[pending]
        step = next((t for t in outs if t.guard == want), None)
        if step is None:
            return fail(FailureReason("NoEnabledTransition", state=state, literal=render_literal(want)))
        trace.append(step)
        state = step.dst
        pending += 1

    if pending < len(literals):
        return fail(FailureReason("LeftoverLiterals", state=state, count=len(literals) - pending))
    return GoalRun(goal.id, PASS, state in chart.finals, tuple(trace))


def coverage_of(chart: StateChart, runs: list[GoalRun]) -> CoverageReport:
    states: set[str] = set()
    transitions: set[Transition] = set()
    for run in runs:
        states.update(run.visited_states(chart.initial))
        transitions.update(run.trace)
    return CoverageReport(
        states_total=len(chart.states),
        states_visited=sum(1 for s in chart.states if s in states),
        transitions_total=len(chart.transitions),
        transitions_visited=sum(1 for t in chart.transitions if t in transitions),
        uncovered_states=tuple(s for s in chart.states if s not in states),
        uncovered_transitions=tuple(t for t in chart.transitions if t not in transitions),
    )


def execute_all(chart: StateChart, goals: list[TestGoal]) -> tuple[list[GoalRun], CoverageReport]:
    runs = [execute_goal(chart, g) for g in goals]
    return runs, coverage_of(chart, runs)


def _transition_dict(t: Transition) -> dict:
    return {"src": t.src, "guard": None if t.guard is None else render_literal(t.guard), "dst": t.dst}


def report_to_dict(runs: list[GoalRun], cov: CoverageReport) -> dict:
    return {
        "runs": [
            {
                "goal": r.goal_id,
                "verdict": r.verdict,
                "completed": r.completed,
                "trace": [_transition_dict(t) for t in r.trace],
                "failure_reason": None if r.failure_reason is None else r.failure_reason.to_dict(),
            }
            for r in runs
        ],
        "coverage": {
            "states": {"visited": cov.states_visited, "total": cov.states_total},
            "transitions": {"visited": cov.transitions_visited, "total": cov.transitions_total},
            "state_coverage": cov.state_coverage,
            "transition_coverage": cov.transition_coverage,
            "uncovered": {
                "states": list(cov.uncovered_states),
                "transitions": [_transition_dict(t) for t in cov.uncovered_transitions],
            },
        },
    }
