"""``ucmbt`` command line: one subcommand per pipeline stage.

Exit codes: 0 success, 1 semantic or synthesis error, 2 I/O or parse error,
3 bad arguments.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import contracts, executor, export, synthesis
from .guards import render_guard
from .loader import FormatError, read_model
from .model import Diagnostic, SystemModel, UseCase, errors_only

EXIT_OK, EXIT_SEMANTIC, EXIT_IO, EXIT_ARGS = 0, 1, 2, 3

FORMATS = {
    "validate": ("text", "json"),
    "system-contract": ("text", "json"),
    "contract": ("text", "json"),
    "goals": ("text", "json"),
    "seqdiags": ("text", "json", "dot"),
    "table": ("text", "csv", "json"),
    "statechart": ("text", "json", "dot"),
    "run-goals": ("text", "json"),
    "export": ("text",),
}

# errors the synthesis commands look past so they can name the conflict itself
_SYNTHESIS_TOLERATED = {"E_AMBIGUOUS_BRANCH"}


class CliError(Exception):
    def __init__(self, code: int, message: str, details: Optional[list[str]] = None):
        self.code = code
        self.message = message
        self.details = details or []
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 by default; bad arguments are 3 here
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


def _use_color() -> bool:
    env = os.environ.get("UCMBT_COLOR")
    if env is not None:
        return env == "1"
    return sys.stderr.isatty()


def _paint(d: Diagnostic) -> str:
    text = str(d)
    if not _use_color():
        return text
    color = "\x1b[31m" if d.is_error else "\x1b[33m"
    return text.replace(d.severity, f"{color}{d.severity}\x1b[0m", 1)


def _load(path: str, tolerate: frozenset[str] = frozenset()) -> tuple[SystemModel, list[Diagnostic]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from None
    try:
        model, diagnostics = read_model(text)
    except FormatError as exc:
        raise CliError(EXIT_IO, f"malformed model {path}", exc.problems) from None
    errors = errors_only(diagnostics)
    if errors and not all(d.code in tolerate for d in errors):
        raise CliError(EXIT_SEMANTIC, f"model {path} is invalid", [str(d) for d in errors])
    return model, diagnostics


def _select(model: SystemModel, usecase: Optional[str]) -> list[UseCase]:
    if usecase is not None:
        if usecase not in model.usecases:
            raise CliError(EXIT_ARGS, f"unknown use case {usecase!r}", [f"known: {', '.join(model.usecases)}"])
        return [model.usecases[usecase]]
    # use cases without any scenario guard have no contract and no goals to test
    return [uc for uc in model.usecases.values() if any(e.guard is not None for e in uc.scenario.edges)]


def _single(ucs: list[UseCase], fmt: str) -> UseCase:
    if len(ucs) != 1:
        raise CliError(EXIT_ARGS, f"--format {fmt} needs exactly one use case; pass --usecase")
    return ucs[0]


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _chart(uc: UseCase, strict: bool) -> synthesis.StateChart:
    return synthesis.build_state_chart(_table(uc, strict))


def _table(uc: UseCase, strict: bool) -> list[synthesis.TransitionRow]:
    return synthesis.generate_transition_table(synthesis.derive_sequence_diagrams(uc), strict=strict)


# ---------------------------------------------------------------------------
# commands; each returns the text to emit


def cmd_validate(args) -> str:
    model, diagnostics = _load(args.model)
    for d in diagnostics:
        print(_paint(d), file=sys.stderr)
    if args.format == "json":
        return _dumps(
            {
                "model": model.name,
                "valid": True,
                "diagnostics": [
                    {"severity": d.severity, "code": d.code, "path": d.path, "message": d.message}
                    for d in diagnostics
                ],
            }
        )
    return f"{args.model}: valid ({len(model.usecases)} use cases, {len(diagnostics)} warnings)\n"


def cmd_system_contract(args) -> str:
    model, _ = _load(args.model)
    try:
        expr = contracts.system_contract(model)
    except contracts.EmptyFlow as exc:
        raise CliError(EXIT_SEMANTIC, str(exc)) from None
    if args.format == "json":
        return _dumps({"model": model.name, "contract": render_guard(expr)})
    return f"[{render_guard(expr)}]\n"


def cmd_contract(args) -> str:
    model, _ = _load(args.model)
    items = []
    for uc in _select(model, args.usecase):
        try:
            items.append(contracts.scenario_contract(uc))
        except contracts.EmptyContract as exc:
            raise CliError(EXIT_SEMANTIC, str(exc)) from None
    if args.format == "json":
        return _dumps([contracts.contract_to_dict(c) for c in items])
    out = []
    for c in items:
        out.append(f"{c.usecase_id}:")
        if c.pre is not None:
            out.append(f"  pre:  {render_guard(c.pre)}")
        out.append(f"  body: [{render_guard(c.body)}]")
        if c.post is not None:
            out.append(f"  post: {render_guard(c.post)}")
    return "\n".join(out) + "\n"


def cmd_goals(args) -> str:
    model, _ = _load(args.model)
    goals = [g for uc in _select(model, args.usecase) for g in contracts.extract_test_goals(uc)]
    if args.format == "json":
        return contracts.goals_to_json(goals)
    return "".join(contracts.render_goal(g) + "\n" for g in goals)


def cmd_seqdiags(args) -> str:
    model, _ = _load(args.model, _SYNTHESIS_TOLERATED)
    diagrams = [d for uc in _select(model, args.usecase) for d in synthesis.derive_sequence_diagrams(uc)]
    if args.format == "json":
        return _dumps(export.seqdiags_to_dicts(diagrams))
    if args.format == "dot":
        return export.seqdiags_to_dot(diagrams)
    return export.seqdiags_to_text(diagrams)


def cmd_table(args) -> str:
    model, _ = _load(args.model, _SYNTHESIS_TOLERATED)
    ucs = _select(model, args.usecase)
    if args.format == "csv":
        return synthesis.table_to_csv(_table(_single(ucs, "csv"), args.strict_table))
    tables = [(uc, _table(uc, args.strict_table)) for uc in ucs]
    if args.format == "json":
        return _dumps({uc.id: export.table_to_dicts(rows) for uc, rows in tables})
    return "\n".join(f"{uc.id}:\n{export.table_to_text(rows)}" for uc, rows in tables)


def cmd_statechart(args) -> str:
    model, _ = _load(args.model, _SYNTHESIS_TOLERATED)
    charts = [(uc, _chart(uc, args.strict_table)) for uc in _select(model, args.usecase)]
    if args.format == "json":
        return _dumps({uc.id: export.chart_to_dict(c) for uc, c in charts})
    if args.format == "dot":
        return "".join(export.chart_to_dot(c, uc.id) for uc, c in charts)
    return "\n".join(f"{uc.id}:\n{export.chart_to_text(c)}" for uc, c in charts)


def _run(uc: UseCase, strict: bool):
    chart = _chart(uc, strict)
    return executor.execute_all(chart, contracts.extract_test_goals(uc))


def _runs_text(uc: UseCase, runs, cov) -> str:
    out = [f"{uc.id}:"]
    for r in runs:
        status = "completed" if r.completed else "not completed"
        line = f"  {r.goal_id} {r.verdict} ({status})"
        if r.failure_reason is not None:
            line += f" {r.failure_reason.kind} {json.dumps(r.failure_reason.to_dict())}"
        out.append(line)
        if r.trace:
            out.append("    " + " -> ".join([r.trace[0].src] + [t.dst for t in r.trace]))
    out.append(
        f"  state coverage {cov.states_visited}/{cov.states_total} = {cov.state_coverage:.3f}; "
        f"transition coverage {cov.transitions_visited}/{cov.transitions_total} = {cov.transition_coverage:.3f}"
    )
    for s in cov.uncovered_states:
        out.append(f"  uncovered state {s}")
    for t in cov.uncovered_transitions:
        out.append(f"  uncovered transition {t}")
    return "\n".join(out) + "\n"


def cmd_run_goals(args) -> str:
    model, _ = _load(args.model, _SYNTHESIS_TOLERATED)
    results = [(uc, *_run(uc, args.strict_table)) for uc in _select(model, args.usecase)]
    if args.format == "json":
        if len(results) == 1:
            _, runs, cov = results[0]
            return _dumps(executor.report_to_dict(runs, cov))
        return _dumps({uc.id: executor.report_to_dict(runs, cov) for uc, runs, cov in results})
    return "".join(_runs_text(uc, runs, cov) for uc, runs, cov in results)


def cmd_export(args) -> str:
    if not args.output:
        raise CliError(EXIT_ARGS, "export needs --output DIR")
    model, _ = _load(args.model, _SYNTHESIS_TOLERATED)
    ucs = _select(model, args.usecase)
    files: dict[str, str] = {}
    try:
        files["system_contract.txt"] = f"[{render_guard(contracts.system_contract(model))}]\n"
    except contracts.EmptyFlow:
        pass
    for uc in ucs:
        contract = contracts.scenario_contract(uc)
        goals = contracts.extract_test_goals(uc)
        diagrams = synthesis.derive_sequence_diagrams(uc)
        rows = synthesis.generate_transition_table(diagrams, strict=args.strict_table)
        chart = synthesis.build_state_chart(rows)
        runs, cov = executor.execute_all(chart, goals)
        files[f"{uc.id}.contract.json"] = _dumps(contracts.contract_to_dict(contract))
        files[f"{uc.id}.goals.txt"] = "".join(contracts.render_goal(g) + "\n" for g in goals)
        files[f"{uc.id}.goals.json"] = contracts.goals_to_json(goals)
        files[f"{uc.id}.seqdiags.dot"] = export.seqdiags_to_dot(diagrams)
        files[f"{uc.id}.table.csv"] = synthesis.table_to_csv(rows)
        files[f"{uc.id}.statechart.dot"] = export.chart_to_dot(chart, uc.id)
        files[f"{uc.id}.runs.json"] = _dumps(executor.report_to_dict(runs, cov))
    out_dir = Path(args.output)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (out_dir / name).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write to {out_dir}: {exc}") from None
    return "".join(f"{out_dir / name}\n" for name in files)


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "system-contract": cmd_system_contract,
    "contract": cmd_contract,
    "goals": cmd_goals,
    "seqdiags": cmd_seqdiags,
    "table": cmd_table,
    "statechart": cmd_statechart,
    "run-goals": cmd_run_goals,
    "export": cmd_export,
}

_HELP = {
    "validate": "check a model and list diagnostics",
    "system-contract": "sequential contract of the use-case flow",
    "contract": "execution contract of each scenario",
    "goals": "test goals, one per scenario path",
    "seqdiags": "sequence diagrams, one per scenario path",
    "table": "statechart transition table",
    "statechart": "statechart synthesized from the transition table",
    "run-goals": "execute the test goals on the statechart and report coverage",
    "export": "write every artifact into a directory",
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ucmbt", description="Test artifacts from guarded use-case scenario models.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, formats in FORMATS.items():
        p = sub.add_parser(name, help=_HELP[name])
        p.add_argument("model", help="path to a .ucm.json model")
        p.add_argument("--format", "-f", choices=formats, default=formats[0])
        p.add_argument("--output", "-o", help="output file (directory for export); default stdout")
        if name != "validate" and name != "system-contract":
            p.add_argument("--usecase", "-u", help="restrict to one use case id")
        if name in ("table", "statechart", "run-goals", "export"):
            p.add_argument(
                "--strict-table",
                action="store_true",
                help="fail on states with more than two successors instead of adding extra rows",
            )
    return parser


def _fail(exc: CliError, fmt: str) -> int:
    if fmt == "json":
        sys.stdout.write(_dumps({"error": {"exit_code": exc.code, "message": exc.message, "details": exc.details}}))
    print(f"ucmbt: {exc.message}", file=sys.stderr)
    for line in exc.details:
        print(f"  {line}", file=sys.stderr)
    return exc.code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    args.usecase = getattr(args, "usecase", None)
    args.strict_table = getattr(args, "strict_table", False)
    try:
        try:
            text = COMMANDS[args.command](args)
        except synthesis.ConflictError as exc:
            raise CliError(EXIT_SEMANTIC, "conflicting transitions", [str(c) for c in exc.conflicts]) from None
        except (synthesis.StrictTableError, synthesis.ChartError) as exc:
            raise CliError(EXIT_SEMANTIC, str(exc)) from None
    except CliError as exc:
        return _fail(exc, args.format)
    if args.output and args.command != "export":
        try:
            Path(args.output).write_text(text, encoding="utf-8", newline="\n")
        except OSError as exc:
            return _fail(CliError(EXIT_IO, f"cannot write {args.output}: {exc}"), args.format)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
