"""Reading and writing ``.ucm.json`` model documents."""

from __future__ import annotations

import json
from collections import Counter
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

import jsonschema

from .guards import GuardExpr, GuardLiteral, GuardSyntaxError, parse_guard, render_guard, render_literal
from .model import (
    Diagnostic,
    Edge,
    ScenarioGraph,
    ScenarioStep,
    SystemFlow,
    SystemModel,
    UseCase,
    errors_only,
    validate_model,
)

__all__ = [
    "MODEL_SCHEMA",
    "FormatError",
    "InvalidModel",
    "read_model",
    "loads_model",
    "load_model",
    "dump_model",
    "bundled_model_path",
]

_GUARD = {"type": ["string", "null"]}
_EDGE = {
    "type": "object",
    "required": ["from", "to"],
    "properties": {"from": {"type": "string"}, "to": {"type": "string"}, "guard": _GUARD},
    "additionalProperties": False,
}

MODEL_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["name", "usecases", "flow"],
    "properties": {
        "version": {"const": 1},
        "name": {"type": "string"},
        "usecases": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "title", "scenario"],
                "properties": {
                    "id": {"type": "string"},
                    "title": {"type": "string"},
                    "pre": _GUARD,
                    "post": _GUARD,
                    "scenario": {
                        "type": "object",
                        "required": ["entry", "finals", "steps", "edges"],
                        "properties": {
                            "entry": {"type": "string"},
                            "finals": {"type": "array", "items": {"type": "string"}},
                            "steps": {
                                "type": "array",
                                "items": {
                                    "type": "object",
                                    "required": ["id", "label"],
                                    "properties": {"id": {"type": "string"}, "label": {"type": "string"}},
                                    "additionalProperties": False,
                                },
                            },
                            "edges": {"type": "array", "items": _EDGE},
                        },
                        "additionalProperties": False,
                    },
                },
                "additionalProperties": False,
            },
        },
        "flow": {
            "type": "object",
            "required": ["entry", "edges"],
            "properties": {"entry": {"type": "string"}, "edges": {"type": "array", "items": _EDGE}},
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

_VALIDATOR = jsonschema.Draft202012Validator(MODEL_SCHEMA)


class FormatError(ValueError):
    """The document is not well-formed JSON or does not match the schema."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


class InvalidModel(ValueError):
    """The document parsed, but the model breaks one or more invariants."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in errors_only(diagnostics)))


def _parse_document(text: str) -> dict:
    if not text.strip():
        raise FormatError(["document is empty"])
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError([f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"]) from None
    problems = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if problems:
        raise FormatError([f"/{'/'.join(map(str, e.absolute_path))}: {e.message}" for e in problems])
    return doc


class _Builder:
    def __init__(self) -> None:
        self.diagnostics: list[Diagnostic] = []

    def error(self, code: str, path: str, message: str) -> None:
        self.diagnostics.append(Diagnostic("error", code, path, message))

    def expr(self, text: Optional[str], path: str) -> Optional[GuardExpr]:
        if text is None:
            return None
        try:
            return parse_guard(text)
        except GuardSyntaxError as exc:
            self.error("E_BAD_GUARD", path, f"{text!r}: {exc}")
            return None

    def literal(self, text: Optional[str], path: str) -> Optional[GuardLiteral]:
        if text is None:
            return None
        try:
            expr = parse_guard(text)
        except GuardSyntaxError as exc:
            self.error("E_BAD_GUARD", path, f"{text!r}: {exc}")
            return None
        if not isinstance(expr, GuardLiteral):
            self.error("E_GUARD_NOT_LITERAL", path, f"edge guard {text!r} must be a single literal")
            return None
        return expr

    def edges(self, raw: list[dict], where: str) -> tuple[Edge, ...]:
        return tuple(
            Edge(e["from"], e["to"], self.literal(e.get("guard"), f"{where}.edges[{i}]"))
            for i, e in enumerate(raw)
        )

    def usecase(self, raw: dict) -> UseCase:
        where = f"usecases.{raw['id']}"
        sc = raw["scenario"]
        scenario = ScenarioGraph(
            steps=tuple(ScenarioStep(s["id"], s["label"]) for s in sc["steps"]),
            edges=self.edges(sc["edges"], f"{where}.scenario"),
            entry=sc["entry"],
            finals=tuple(sc["finals"]),
        )
        return UseCase(
            id=raw["id"],
            title=raw["title"],
            scenario=scenario,
            pre=self.expr(raw.get("pre"), f"{where}.pre"),
            post=self.expr(raw.get("post"), f"{where}.post"),
        )


def read_model(text: str) -> tuple[SystemModel, list[Diagnostic]]:
    """Parse and validate a document.

    Returns the model together with every diagnostic, warnings included. The
    model is only trustworthy when no diagnostic is an error. Raises
    :class:`FormatError` when the text is not a schema-conforming document.
    """
    doc = _parse_document(text)
    b = _Builder()
    ids = Counter(u["id"] for u in doc["usecases"])
    for uc_id, n in ids.items():
        if n > 1:
            b.error("E_DUPLICATE_ID", f"usecases.{uc_id}", f"use case id {uc_id!r} declared {n} times")
    usecases: dict[str, UseCase] = {}
    for raw in doc["usecases"]:
        usecases.setdefault(raw["id"], b.usecase(raw))
    flow = SystemFlow(entry=doc["flow"]["entry"], edges=b.edges(doc["flow"]["edges"], "flow"))
    model = SystemModel(name=doc["name"], usecases=usecases, flow=flow)
    return model, b.diagnostics + validate_model(model)


def loads_model(text: str) -> SystemModel:
    model, diagnostics = read_model(text)
    if errors_only(diagnostics):
        raise InvalidModel(diagnostics)
    return model


def load_model(source: Union[str, Path]) -> SystemModel:
    """Load a model from a file path."""
    return loads_model(Path(source).read_text(encoding="utf-8"))


def _dump_guard(expr: Optional[GuardExpr]) -> Optional[str]:
    return None if expr is None else render_guard(expr)


def _dump_edges(edges: tuple[Edge, ...]) -> list[dict]:
    return [
        {"from": e.src, "to": e.dst, "guard": None if e.guard is None else render_literal(e.guard)}
        for e in edges
    ]


def dump_model(model: SystemModel) -> str:
    """Serialize ``model`` to canonical document text (2-space JSON, LF, trailing newline)."""
    doc = {
        "version": 1,
        "name": model.name,
        "usecases": [
            {
                "id": uc.id,
                "title": uc.title,
                "pre": _dump_guard(uc.pre),
                "post": _dump_guard(uc.post),
                "scenario": {
                    "entry": uc.scenario.entry,
                    "finals": list(uc.scenario.finals),
                    "steps": [{"id": s.id, "label": s.label} for s in uc.scenario.steps],
                    "edges": _dump_edges(uc.scenario.edges),
                },
            }
            for uc in model.usecases.values()
        ],
        "flow": {
            "entry": model.flow.entry if model.flow else "",
            "edges": _dump_edges(model.flow.edges) if model.flow else [],
        },
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def bundled_model_path() -> Path:
    """Path of the inventory-system case-study model shipped with the package."""
    return Path(str(resources.files("ucmbt") / "data" / "inventory_pr.ucm.json"))
