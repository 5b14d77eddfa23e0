"""Text and Graphviz DOT renderings of pipeline artifacts."""

from __future__ import annotations

from typing import Optional

from .guards import GuardLiteral, render_literal
from .synthesis import SequenceDiagram, StateChart, TransitionRow


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _lit(g: Optional[GuardLiteral]) -> str:
    return "" if g is None else render_literal(g)


def chart_to_dot(chart: StateChart, name: str = "statechart") -> str:
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;", "  node [shape=box, style=rounded];"]
    lines.append("  __start [shape=point];")
    for s in chart.states:
        attrs = " [peripheries=2]" if s in chart.finals else ""
        lines.append(f"  {_q(s)}{attrs};")
    lines.append(f"  __start -> {_q(chart.initial)};")
    for t in chart.transitions:
        label = f" [label={_q(render_literal(t.guard))}]" if t.guard is not None else ""
        lines.append(f"  {_q(t.src)} -> {_q(t.dst)}{label};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def seqdiags_to_dot(diagrams: list[SequenceDiagram], name: str = "sequence_diagrams") -> str:
    """All diagrams in one digraph, one cluster per diagram."""
    lines = [f"digraph {_q(name)} {{", "  rankdir=TB;", "  node [shape=box];"]
    for d in diagrams:
        lines.append(f"  subgraph {_q('cluster_' + d.name)} {{")
        lines.append(f"    label={_q(d.name)};")
        ids = [f"{d.name}:{k}" for k in range(len(d.nodes))]
        for node_id, node in zip(ids, d.nodes):
            lines.append(f"    {_q(node_id)} [label={_q(node.state)}];")
        for k in range(1, len(d.nodes)):
            g = d.nodes[k].guard
            label = f" [label={_q(render_literal(g))}]" if g is not None else ""
            lines.append(f"    {_q(ids[k - 1])} -> {_q(ids[k])}{label};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def seqdiags_to_text(diagrams: list[SequenceDiagram]) -> str:
    out = []
    for d in diagrams:
        out.append(f"{d.name}:")
        for n in d.nodes:
            prev = n.previous if n.previous is not None else "-"
            out.append(f"  {prev} --[{_lit(n.guard)}]--> {n.state}")
    return "\n".join(out) + "\n"


def table_to_text(rows: list[TransitionRow]) -> str:
    cells = [["State", "Guard", "Next", "Alt state", "Alt guard"]]
    for r in rows:
        cells.append([r.state, _lit(r.guard), r.next, r.alt_state or "", _lit(r.alt_guard)])
    widths = [max(len(row[i]) for row in cells) for i in range(5)]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells) + "\n"


def chart_to_text(chart: StateChart) -> str:
    out = [
        f"states ({len(chart.states)}): {', '.join(chart.states)}",
        f"initial: {chart.initial}",
        f"finals: {', '.join(chart.finals)}",
        f"transitions ({len(chart.transitions)}):",
    ]
    out.extend(f"  {t}" for t in chart.transitions)
    return "\n".join(out) + "\n"


def chart_to_dict(chart: StateChart) -> dict:
    return {
        "states": list(chart.states),
        "initial": chart.initial,
        "finals": list(chart.finals),
        "transitions": [{"src": t.src, "guard": _lit(t.guard) or None, "dst": t.dst} for t in chart.transitions],
    }


def table_to_dicts(rows: list[TransitionRow]) -> list[dict]:
    return [
        {
            "state": r.state,
            "guard": _lit(r.guard) or None,
            "next": r.next,
            "alt_state": r.alt_state,
            "alt_guard": _lit(r.alt_guard) or None,
        }
        for r in rows
    ]


def seqdiags_to_dicts(diagrams: list[SequenceDiagram]) -> list[dict]:
    return [
        {
            "name": d.name,
            "usecase": d.usecase_id,
            "path_index": d.path_index,
            "nodes": [{"previous": n.previous, "guard": _lit(n.guard) or None, "state": n.state} for n in d.nodes],
        }
        for d in diagrams
    ]
