"""Use cases, the sequential use-case flow, and guarded scenario graphs."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .guards import GuardAtom, GuardExpr, GuardLiteral, literals_of

__all__ = [
    "Edge",
    "ScenarioStep",
    "ScenarioGraph",
    "UseCase",
    "SystemFlow",
    "SystemModel",
    "Diagnostic",
    "CycleDetected",
    "PathStep",
    "Path",
    "validate_model",
    "enumerate_paths",
    "errors_only",
]


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    guard: Optional[GuardLiteral] = None


@dataclass(frozen=True)
class ScenarioStep:
    id: str
    label: str


@dataclass(frozen=True)
class ScenarioGraph:
    steps: tuple[ScenarioStep, ...]
    edges: tuple[Edge, ...]
    entry: str
    finals: tuple[str, ...]

    def step(self, step_id: str) -> ScenarioStep:
        for s in self.steps:
            if s.id == step_id:
                return s
        raise KeyError(step_id)

    def label(self, step_id: str) -> str:
        return self.step(step_id).label

    def outgoing(self, step_id: str) -> list[Edge]:
        return [e for e in self.edges if e.src == step_id]


@dataclass(frozen=True)
class UseCase:
    id: str
    title: str
    scenario: ScenarioGraph
    pre: Optional[GuardExpr] = None
    post: Optional[GuardExpr] = None


@dataclass(frozen=True)
class SystemFlow:
    entry: str
    edges: tuple[Edge, ...] = ()


@dataclass(frozen=True)
class SystemModel:
    name: str
    usecases: dict[str, UseCase] = field(default_factory=dict)
    flow: Optional[SystemFlow] = None

    @property
    def nodes(self) -> list[str]:
        return list(self.usecases)

    def usecase(self, uc_id: str) -> UseCase:
        return self.usecases[uc_id]


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    path: str
    message: str

    @property
    def is_error(self) -> bool:
        return self.severity == "error"

    def __str__(self) -> str:
        return f"{self.severity} {self.code} {self.path}: {self.message}"


def errors_only(diagnostics: Iterable[Diagnostic]) -> list[Diagnostic]:
    return [d for d in diagnostics if d.is_error]


class CycleDetected(ValueError):
    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__("cycle through " + " -> ".join(cycle))


PathStep = tuple[str, Optional[GuardLiteral]]
Path = tuple[PathStep, ...]


# ---------------------------------------------------------------------------
# path enumeration


def enumerate_paths(scenario: ScenarioGraph) -> list[Path]:
    """Every entry-to-leaf path, depth-first with edges in declaration order."""
    out_edges: dict[str, list[Edge]] = defaultdict(list)
    for e in scenario.edges:
        out_edges[e.src].append(e)

    paths: list[Path] = []
    # explicit stack of (node, incoming guard, iterator over its edges)
    trail: list[PathStep] = [(scenario.entry, None)]
    on_trail = {scenario.entry}
    stack = [iter(out_edges.get(scenario.entry, ()))]
    if not out_edges.get(scenario.entry):
        return [tuple(trail)]
    while stack:
        edge = next(stack[-1], None)
        if edge is None:
            stack.pop()
            node, _ = trail.pop()
            on_trail.discard(node)
            continue
        if edge.dst in on_trail:
            names = [n for n, _ in trail]
            raise CycleDetected(names[names.index(edge.dst):] + [edge.dst])
        trail.append((edge.dst, edge.guard))
        on_trail.add(edge.dst)
        nxt = out_edges.get(edge.dst)
        if nxt:
            stack.append(iter(nxt))
        else:
            paths.append(tuple(trail))
            trail.pop()
            on_trail.discard(edge.dst)
    return paths


# ---------------------------------------------------------------------------
# validation


def _find_cycle(nodes: Iterable[str], edges: Iterable[tuple[str, str]]) -> Optional[list[str]]:
    succ: dict[str, list[str]] = defaultdict(list)
    for a, b in edges:
        succ[a].append(b)
    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[str, int] = defaultdict(int)
    for root in nodes:
        if color[root] != WHITE:
            continue
        path = [root]
        color[root] = GREY
        stack = [iter(succ[root])]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                color[path.pop()] = BLACK
                continue
            if color[nxt] == GREY:
                return path[path.index(nxt):] + [nxt]
            if color[nxt] == WHITE:
                color[nxt] = GREY
                path.append(nxt)
                stack.append(iter(succ[nxt]))
    return None


def _reachable(start: str, edges: Iterable[tuple[str, str]]) -> set[str]:
    succ: dict[str, list[str]] = defaultdict(list)
    for a, b in edges:
        succ[a].append(b)
    seen = {start}
    todo = [start]
    while todo:
        for nxt in succ[todo.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


class _Collector:
    def __init__(self) -> None:
        self.items: list[Diagnostic] = []

    def error(self, code: str, path: str, message: str) -> None:
        self.items.append(Diagnostic("error", code, path, message))

    def warning(self, code: str, path: str, message: str) -> None:
        self.items.append(Diagnostic("warning", code, path, message))


def _check_graph(
    diag: _Collector,
    where: str,
    kind: str,
    node_ids: list[str],
    edges: tuple[Edge, ...],
    entry: str,
) -> bool:
    """Shared structural checks for scenario graphs and the use-case flow.

    Returns True when the graph is sound enough for path-level checks.
    """
    known = set(node_ids)
    ok = True
    for i, e in enumerate(edges):
        for end in (e.src, e.dst):
            if end not in known:
                diag.error("E_DANGLING_EDGE", f"{where}.edges[{i}]", f"edge endpoint {end!r} is not a declared {kind}")
                ok = False
    if entry not in known:
        diag.error("E_UNKNOWN_ENTRY", f"{where}.entry", f"entry {entry!r} is not a declared {kind}")
        return False
    if not ok:
        return False

    pairs = [(e.src, e.dst) for e in edges]
    cycle = _find_cycle(node_ids, pairs)
    if cycle is not None:
        diag.error("E_CYCLE", where, "cycle " + " -> ".join(cycle))
        ok = False
    if any(e.dst == entry for e in edges):
        diag.error("E_ENTRY_HAS_INCOMING", f"{where}.entry", f"entry {entry!r} has incoming edges")
        ok = False
    reach = _reachable(entry, pairs)
    for n in node_ids:
        if n not in reach:
            diag.error("E_UNREACHABLE", f"{where}.{n}", f"{kind} {n!r} is not reachable from the entry")
            ok = False

    by_src: dict[str, list[tuple[int, Edge]]] = defaultdict(list)
    for i, e in enumerate(edges):
        by_src[e.src].append((i, e))
    for src, outs in by_src.items():
        if len(outs) < 2:
            continue
        seen: dict[GuardLiteral, int] = {}
        for i, e in outs:
            if e.guard is None:
                diag.error("E_UNGUARDED_BRANCH", f"{where}.edges[{i}]", f"branch out of {src!r} has no guard")
                ok = False
            elif e.guard in seen:
                diag.error(
                    "E_AMBIGUOUS_BRANCH",
                    f"{where}.edges[{i}]",
                    f"guard {e.guard} out of {src!r} duplicates edges[{seen[e.guard]}]",
                )
                ok = False
            else:
                seen[e.guard] = i
    return ok


def _check_scenario(diag: _Collector, where: str, sc: ScenarioGraph) -> None:
    if not sc.steps:
        diag.error("E_EMPTY_SCENARIO", where, "scenario has no steps")
        return
    ids = [s.id for s in sc.steps]
    for step_id, n in Counter(ids).items():
        if n > 1:
            diag.error("E_DUPLICATE_ID", f"{where}.steps.{step_id}", f"step id {step_id!r} declared {n} times")
    labels = Counter(s.label for s in sc.steps)
    for s in sc.steps:
        if not s.label.strip():
            diag.error("E_EMPTY_LABEL", f"{where}.steps.{s.id}", "step label is empty")
    for label, n in labels.items():
        if n > 1 and label.strip():
            diag.error("E_DUPLICATE_LABEL", f"{where}.steps", f"label {label!r} used by {n} steps")

    unique_ids = list(dict.fromkeys(ids))
    sound = _check_graph(diag, where, "step", unique_ids, sc.edges, sc.entry)

    if not sc.finals:
        diag.error("E_NO_FINALS", f"{where}.finals", "scenario declares no final step")
    has_out = {e.src for e in sc.edges}
    for f in sc.finals:
        if f not in set(ids):
            diag.error("E_UNKNOWN_FINAL", f"{where}.finals", f"final {f!r} is not a declared step")
        elif f in has_out:
            diag.error("E_FINAL_HAS_OUTGOING", f"{where}.finals", f"final {f!r} has outgoing edges")
    for step_id in unique_ids:
        if step_id not in has_out and step_id not in sc.finals:
            diag.error("E_DEAD_END", f"{where}.steps.{step_id}", f"step {step_id!r} has no outgoing edges but is not final")
    if sound:
        _check_paths(diag, where, sc)


def _check_paths(diag: _Collector, where: str, sc: ScenarioGraph) -> None:
    goal_sets = []
    for n, path in enumerate(enumerate_paths(sc), start=1):
        lits = frozenset(g for _, g in path if g is not None)
        clash = sorted(str(l.atom) for l in lits if l.negate() in lits)
        if clash:
            diag.warning(
                "W_INFEASIBLE_PATH",
                f"{where}.paths[{n}]",
                f"path requires both polarities of {', '.join(dict.fromkeys(clash))}",
            )
        goal_sets.append((n, lits))
    for n, lits in goal_sets:
        for m, other in goal_sets:
            if m != n and other < lits:
                diag.warning(
                    "W_SUBSUMED_PATH",
                    f"{where}.paths[{n}]",
                    f"guards of path {n} include all guards of path {m}",
                )
                break


def _check_atom_usage(diag: _Collector, model: SystemModel) -> None:
    # a negative guard whose atom is never established anywhere else
    uses: dict[GuardAtom, list[tuple[str, bool]]] = defaultdict(list)

    def note(where: str, expr: Optional[GuardExpr]) -> None:
        if expr is not None:
            for lit in literals_of(expr):
                uses[lit.atom].append((where, lit.positive))

    for uc in model.usecases.values():
        note(f"usecases.{uc.id}.pre", uc.pre)
        note(f"usecases.{uc.id}.post", uc.post)
        for i, e in enumerate(uc.scenario.edges):
            note(f"usecases.{uc.id}.scenario.edges[{i}]", e.guard)
    if model.flow is not None:
        for i, e in enumerate(model.flow.edges):
            note(f"flow.edges[{i}]", e.guard)
    for atom, occ in uses.items():
        if len(occ) == 1 and not occ[0][1]:
            diag.warning(
                "W_SINGLE_USE_ATOM",
                occ[0][0],
                f"atom {atom} appears once, negated, and is never established",
            )


def validate_model(model: SystemModel) -> list[Diagnostic]:
    """Check every structural invariant of ``model``.

    Errors break an invariant. Warnings flag paths whose guards can never
    hold together, paths whose guards are a superset of another path's, and
    negated atoms that occur only once in the whole model.
    """
    diag = _Collector()
    for key, uc in model.usecases.items():
        if key != uc.id:
            diag.error("E_DUPLICATE_ID", f"usecases.{uc.id}", f"use case registered under {key!r}")
        _check_scenario(diag, f"usecases.{uc.id}.scenario", uc.scenario)
    if model.flow is None:
        diag.error("E_NO_FLOW", "flow", "model has no use-case flow")
    else:
        _check_graph(diag, "flow", "use case", list(model.usecases), model.flow.edges, model.flow.entry)
    _check_atom_usage(diag, model)
    return diag.items
