"""Sequence diagrams, transition tables and statecharts built from scenarios.

Each scenario path becomes one sequence diagram: a list of
``(previous, guard, state)`` records. The records of all diagrams of a use
case are merged into a five-column transition table, and the table is turned
into a guarded state machine.
"""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .guards import GuardLiteral, render_literal
from .model import UseCase, enumerate_paths

__all__ = [
    "SeqNode",
    "SequenceDiagram",
    "TransitionRow",
    "Transition",
    "StateChart",
    "Conflict",
    "ConflictError",
    "StrictTableError",
    "ChartError",
    "NoUniqueInitial",
    "DeterminismViolation",
    "UnreachableState",
    "derive_sequence_diagrams",
    "generate_transition_table",
    "build_state_chart",
    "detect_conflicts",
    "synthesize_chart",
    "table_to_csv",
    "TABLE_HEADER",
]

TABLE_HEADER = ("state", "guard", "next", "alt_state", "alt_guard")


@dataclass(frozen=True)
class SeqNode:
    previous: Optional[str]
    guard: Optional[GuardLiteral]
    state: str


@dataclass(frozen=True)
class SequenceDiagram:
    usecase_id: str
    path_index: int
    nodes: tuple[SeqNode, ...]

    @property
    def name(self) -> str:
        return f"SD_{self.usecase_id}_{self.path_index}"


@dataclass(frozen=True)
class TransitionRow:
    state: str
    guard: Optional[GuardLiteral]
    next: str
    alt_state: Optional[str] = None
    alt_guard: Optional[GuardLiteral] = None


@dataclass(frozen=True)
class Transition:
    src: str
    guard: Optional[GuardLiteral]
    dst: str

    def __str__(self) -> str:
        label = "" if self.guard is None else f" [{render_literal(self.guard)}]"
        return f"{self.src} ->{label} {self.dst}"


@dataclass(frozen=True)
class StateChart:
    states: tuple[str, ...]
    initial: str
    finals: tuple[str, ...]
    transitions: tuple[Transition, ...]

    def outgoing(self, state: str) -> list[Transition]:
        return [t for t in self.transitions if t.src == state]


@dataclass(frozen=True)
class Conflict:
    kind: str  # "nondeterministic" | "mixed-unguarded"
    state: str
    guard: Optional[GuardLiteral]
    targets: tuple[str, ...]

    def __str__(self) -> str:
        targets = ", ".join(self.targets)
        if self.kind == "nondeterministic":
            guard = "<unguarded>" if self.guard is None else render_literal(self.guard)
            return f"state {self.state} under guard {guard} leads to several states: {targets}"
        return f"state {self.state} mixes an unguarded successor with guarded ones: {targets}"


class ConflictError(ValueError):
    def __init__(self, conflicts: list[Conflict]):
        self.conflicts = conflicts
        super().__init__("; ".join(str(c) for c in conflicts))


class StrictTableError(ValueError):
    """A state has more than two successors and spill rows are disabled."""

    def __init__(self, state: str, successors: int):
        self.state = state
        self.successors = successors
        super().__init__(f"state {state} has {successors} successors; the strict table allows at most 2")


class ChartError(ValueError):
    pass


class NoUniqueInitial(ChartError):
    def __init__(self, candidates: list[str]):
        self.candidates = candidates
        super().__init__(f"expected exactly one state without incoming transitions, found {candidates}")


class DeterminismViolation(ChartError):
    def __init__(self, state: str, detail: str):
        self.state = state
        super().__init__(f"state {state}: {detail}")


class UnreachableState(ChartError):
    def __init__(self, states: list[str]):
        self.states = states
        super().__init__(f"states unreachable from the initial state: {states}")


# ---------------------------------------------------------------------------
# sequence diagrams


def derive_sequence_diagrams(uc: UseCase) -> list[SequenceDiagram]:
    diagrams = []
    for index, path in enumerate(enumerate_paths(uc.scenario), start=1):
        nodes = []
        previous = None
        for step_id, guard in path:
            label = uc.scenario.label(step_id)
            nodes.append(SeqNode(previous, guard, label))
            previous = label
        diagrams.append(SequenceDiagram(uc.id, index, tuple(nodes)))
    return diagrams


# ---------------------------------------------------------------------------
# transition table


def _sorted_nodes(diagrams: Iterable[SequenceDiagram]) -> list[SeqNode]:
    # diagram order, then position; identical records collapse to the first
    return list(dict.fromkeys(node for d in diagrams for node in d.nodes))


def _conflicts(nodes: list[SeqNode]) -> list[Conflict]:
    by_pair: dict[tuple[str, Optional[GuardLiteral]], list[str]] = defaultdict(list)
    by_state: dict[str, list[SeqNode]] = defaultdict(list)
    for n in nodes:
        if n.previous is None:
            continue
        by_pair[(n.previous, n.guard)].append(n.state)
        by_state[n.previous].append(n)
    found = []
    for (state, guard), targets in by_pair.items():
        if len(targets) > 1:
            found.append(Conflict("nondeterministic", state, guard, tuple(targets)))
    for state, succ in by_state.items():
        if any(n.guard is None for n in succ) and any(n.guard is not None for n in succ):
            found.append(Conflict("mixed-unguarded", state, None, tuple(n.state for n in succ)))
    return found


def detect_conflicts(diagrams: list[SequenceDiagram]) -> list[Conflict]:
    """Every nondeterministic or mixed guarded/unguarded successor set."""
    return _conflicts(_sorted_nodes(diagrams))


def generate_transition_table(diagrams: list[SequenceDiagram], strict: bool = False) -> list[TransitionRow]:
    """Merge sequence diagrams of one use case into a transition table.

    The first successor seen for a state fills the main columns and the
    second fills the alternative columns. Further successors go to extra
    rows for the same state, unless ``strict`` is set, in which case a
    :class:`StrictTableError` is raised instead.
    """
    if not diagrams:
        raise ValueError("no sequence diagrams given")
    if len({d.usecase_id for d in diagrams}) > 1:
        raise ValueError("sequence diagrams belong to different use cases")
    nodes = _sorted_nodes(diagrams)
    conflicts = _conflicts(nodes)
    if conflicts:
        raise ConflictError(conflicts)

    rows: list[TransitionRow] = []
    main_row: dict[str, int] = {}
    seen: dict[str, int] = defaultdict(int)
    for n in nodes:
        if n.previous is None:
            continue
        k = seen[n.previous]
        seen[n.previous] += 1
        if k == 0:
            main_row[n.previous] = len(rows)
            rows.append(TransitionRow(n.previous, n.guard, n.state))
        elif k == 1:
            i = main_row[n.previous]
            rows[i] = replace(rows[i], alt_state=n.state, alt_guard=n.guard)
        elif strict:
            raise StrictTableError(n.previous, sum(1 for m in nodes if m.previous == n.previous))
        else:
            rows.append(TransitionRow(n.previous, n.guard, n.state))
    return rows


def table_to_csv(rows: list[TransitionRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TABLE_HEADER)

    def lit(g: Optional[GuardLiteral]) -> str:
        return "" if g is None else render_literal(g)

    for r in rows:
        writer.writerow([r.state, lit(r.guard), r.next, r.alt_state or "", lit(r.alt_guard)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# statechart


def build_state_chart(table: list[TransitionRow]) -> StateChart:
    states: dict[str, None] = {}
    transitions: list[Transition] = []
    for r in table:
        if (r.alt_state is None) != (r.alt_guard is None):
            raise ValueError(f"row for {r.state} has only one of alt_state/alt_guard")
        for s in (r.state, r.next, r.alt_state):
            if s is not None:
                states.setdefault(s, None)
        transitions.append(Transition(r.state, r.guard, r.next))
        if r.alt_state is not None:
            transitions.append(Transition(r.state, r.alt_guard, r.alt_state))

    outs: dict[str, list[Transition]] = defaultdict(list)
    for t in transitions:
        outs[t.src].append(t)
    for src, ts in outs.items():
        guards = [t.guard for t in ts]
        if None in guards and len(ts) > 1:
            raise DeterminismViolation(src, "an unguarded transition must be the only one leaving the state")
        dup = {g for g in guards if guards.count(g) > 1}
        if dup:
            raise DeterminismViolation(src, f"guard {render_literal(dup.pop())} labels several transitions")

    targets = {t.dst for t in transitions}
    roots = [s for s in states if s not in targets]
    if len(roots) != 1:
        raise NoUniqueInitial(roots)
    initial = roots[0]

    reach = {initial}
    todo = [initial]
    while todo:
        for t in outs.get(todo.pop(), ()):
            if t.dst not in reach:
                reach.add(t.dst)
                todo.append(t.dst)
    missing = [s for s in states if s not in reach]
    if missing:
        raise UnreachableState(missing)

    finals = tuple(s for s in states if s not in outs)
    return StateChart(tuple(states), initial, finals, tuple(transitions))


def synthesize_chart(uc: UseCase, strict: bool = False) -> StateChart:
    """Scenario to statechart in one call."""
    return build_state_chart(generate_transition_table(derive_sequence_diagrams(uc), strict=strict))
