"""Random well-formed scenarios and models for property tests and sweeps."""

from __future__ import annotations

import math
import random
from typing import Optional

from .guards import GuardAtom, GuardLiteral
from .model import Edge, ScenarioGraph, ScenarioStep, SystemFlow, SystemModel, UseCase


def _atom(rng: random.Random, k: int) -> GuardAtom:
    return GuardAtom(f"g{k}", ("i",) if rng.random() < 0.3 else ())


def _shape(rng: random.Random, n: int, max_branch: int, budget: Optional[int]) -> list[list[int]]:
    """Forward adjacency lists for a DAG rooted at 0 where every node is reachable.

    ``budget`` caps the atoms branch guards will need (ceil(k/2) per k-way
    branch); ``None`` leaves it uncapped.
    """
    succ: list[list[int]] = [[] for _ in range(n)]

    def need(deg: int) -> int:
        return math.ceil(deg / 2) if deg >= 2 else 0

    used = 0

    def fits(j: int) -> bool:
        deg = len(succ[j])
        if deg >= max_branch:
            return False
        return budget is None or used - need(deg) + need(deg + 1) <= budget

    for i in range(1, n):
        parents = [j for j in range(i) if fits(j)]
        j = rng.choice(parents)  # i-1 has no successors yet, so never empty
        used += need(len(succ[j]) + 1) - need(len(succ[j]))
        succ[j].append(i)
    for _ in range(rng.randint(0, n)):
        j = rng.randrange(n)
        if j >= n - 1 or not fits(j):
            continue
        k = rng.randrange(j + 1, n)
        if k in succ[j]:
            continue
        used += need(len(succ[j]) + 1) - need(len(succ[j]))
        succ[j].append(k)
    for s in succ:
        rng.shuffle(s)
    return succ


def random_scenario(
    rng: random.Random,
    max_steps: int = 20,
    max_branch: int = 3,
    max_atoms: int = 12,
    exclusive: bool = True,
    min_steps: int = 2,
) -> ScenarioGraph:
    """A random scenario that passes ``validate_model``.

    With ``exclusive`` every atom labels edges of a single step only, so no
    path can contradict itself or carry a superset of another path's guards.
    Without it, literals are drawn freely from ``max_atoms`` atoms and only
    branch guards are kept distinct per step.
    """
    n = rng.randint(min(min_steps, max_steps), max_steps)
    succ = _shape(rng, n, max_branch, max_atoms if exclusive else None)
    atoms_left = list(range(max_atoms))
    rng.shuffle(atoms_left)
    pool = [_atom(rng, k) for k in range(max_atoms)]
    guards: dict[int, list[Optional[GuardLiteral]]] = {}
    # branches first: _shape reserved enough atoms for them
    for j in sorted(range(n), key=lambda j: len(succ[j]) < 2):
        outs = succ[j]
        if not outs:
            continue
        if len(outs) >= 2:
            if exclusive:
                lits: list[GuardLiteral] = []
                while len(lits) < len(outs):
                    atom = pool[atoms_left.pop()]
                    lits += [GuardLiteral(atom, True), GuardLiteral(atom, False)]
                rng.shuffle(lits)
                guards[j] = list(lits[: len(outs)])
            else:
                every = [GuardLiteral(a, p) for a in pool for p in (True, False)]
                guards[j] = list(rng.sample(every, len(outs)))
        elif rng.random() < 0.6 and (atoms_left or not exclusive):
            atom = pool[atoms_left.pop()] if exclusive else rng.choice(pool)
            guards[j] = [GuardLiteral(atom, rng.random() < 0.7)]
        else:
            guards[j] = [None]
    edges = [Edge(f"s{j}", f"s{k}", g) for j in range(n) for k, g in zip(succ[j], guards.get(j, ()))]
    if not any(e.guard is not None for e in edges) and edges:
        # a contract needs at least one guard; the first edge leaves the entry
        atom = pool[atoms_left.pop()] if atoms_left else pool[0]
        first = edges[0]
        edges[0] = Edge(first.src, first.dst, GuardLiteral(atom))
    steps = tuple(ScenarioStep(f"s{j}", f"S{j}") for j in range(n))
    finals = tuple(f"s{j}" for j in range(n) if not succ[j])
    return ScenarioGraph(steps, tuple(edges), "s0", finals)


def random_usecase(rng: random.Random, uc_id: str = "UC", **kwargs) -> UseCase:
    return UseCase(uc_id, f"Use case {uc_id}", random_scenario(rng, **kwargs))


def random_model(rng: random.Random, max_usecases: int = 3, **kwargs) -> SystemModel:
    """A linear flow over a few random use cases."""
    ids = [f"UC{k}" for k in range(rng.randint(1, max_usecases))]
    usecases = {i: random_usecase(rng, i, **kwargs) for i in ids}
    edges = tuple(
        Edge(a, b, GuardLiteral(GuardAtom(f"Completed_{a}")) if rng.random() < 0.8 else None)
        for a, b in zip(ids, ids[1:])
    )
    return SystemModel(f"model{rng.randrange(1000)}", usecases, SystemFlow(ids[0], edges))
