"""Propositional guard expressions: parsing, evaluation, rendering and DNF.

Guards are AND/OR combinations of literals, where a literal is an atom such as
``Validated_User(U)`` optionally prefixed by ``not``. Negation is only allowed
directly in front of an atom, so every expression is in negation normal form
by construction.

Grammar::

    expr    = term , { OR , term } ;
    term    = factor , { AND , factor } ;
    factor  = [ NOT ] , atom | "(" , expr , ")" ;
    atom    = [ "/" ] , IDENT , [ "(" , IDENT , { "," , IDENT } , ")" ] ;

Keywords are case-insensitive; atom names and arguments are not. A leading
``/`` on an atom is accepted and dropped.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "GuardAtom",
    "GuardLiteral",
    "And",
    "Or",
    "GuardExpr",
    "DnfForm",
    "GuardSyntaxError",
    "EmptyExpression",
    "UnboundAtom",
    "parse_guard",
    "parse_literal",
    "eval_guard",
    "eval_dnf",
    "to_dnf",
    "render_guard",
    "render_literal",
    "atoms_of",
    "literals_of",
    "conjoin",
    "disjoin",
    "truth_table",
]

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
KEYWORDS = frozenset({"and", "or", "not"})


@dataclass(frozen=True, order=True)
class GuardAtom:
    name: str
    args: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for ident in (self.name, *self.args):
            if not isinstance(ident, str) or not IDENT_RE.fullmatch(ident):
                raise ValueError(f"invalid identifier in guard atom: {ident!r}")
        if self.name.lower() in KEYWORDS:
            raise ValueError(f"keyword {self.name!r} cannot name an atom")

    def __str__(self) -> str:
        if self.args:
            return f"{self.name}({','.join(self.args)})"
        return self.name


@dataclass(frozen=True, order=True)
class GuardLiteral:
    atom: GuardAtom
    positive: bool = True

    def negate(self) -> GuardLiteral:
        return GuardLiteral(self.atom, not self.positive)

    def __str__(self) -> str:
        return render_literal(self)


@dataclass(frozen=True)
class And:
    operands: tuple[GuardExpr, ...]

    def __post_init__(self) -> None:
        if len(self.operands) < 2:
            raise ValueError("And needs at least two operands")


@dataclass(frozen=True)
class Or:
    operands: tuple[GuardExpr, ...]

    def __post_init__(self) -> None:
        if len(self.operands) < 2:
            raise ValueError("Or needs at least two operands")


GuardExpr = Union[GuardLiteral, And, Or]

# A DNF is a set of clauses; each clause is a conjunction of literals.
DnfForm = frozenset[frozenset[GuardLiteral]]


class GuardSyntaxError(ValueError):
    """Raised when a guard string does not match the grammar.

    ``offset`` is a byte offset into the UTF-8 encoding of the input and
    ``expected`` names the token kinds that would have been accepted there.
    """

    def __init__(self, message: str, text: str, index: int, expected: Iterable[str]):
        self.text = text
        self.index = index
        self.offset = len(text[:index].encode("utf-8", "surrogatepass"))
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at byte {self.offset}"
        if self.expected:
            detail += f" (expected {', '.join(self.expected)})"
        super().__init__(detail)


class EmptyExpression(GuardSyntaxError):
    def __init__(self, text: str = ""):
        super().__init__("empty guard expression", text, 0, ("atom", "'('", "not"))


class UnboundAtom(KeyError):
    def __init__(self, atom: GuardAtom):
        self.atom = atom
        super().__init__(f"no binding for atom {atom}")


# ---------------------------------------------------------------------------
# constructors


def conjoin(parts: Iterable[GuardExpr | None]) -> GuardExpr | None:
    """AND the given parts, flattening nested ANDs and skipping ``None``.

    ``None`` stands for the empty conjunction (true). Returns ``None`` when
    nothing is left and the bare operand when only one is.
    """
    flat: list[GuardExpr] = []
    for part in parts:
        if part is None:
            continue
        if isinstance(part, And):
            flat.extend(part.operands)
        else:
            flat.append(part)
    if not flat:
        return None
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disjoin(parts: Iterable[GuardExpr | None]) -> GuardExpr | None:
    """OR the given parts, flattening nested ORs.

    A ``None`` part is true, which makes the whole disjunction true.
    """
    flat: list[GuardExpr] = []
    for part in parts:
        if part is None:
            return None
        if isinstance(part, Or):
            flat.extend(part.operands)
        else:
            flat.append(part)
    if not flat:
        raise ValueError("disjunction of nothing")
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


# ---------------------------------------------------------------------------
# lexer / parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<punct>[(),/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT, AND, OR, NOT, '(', ')', ',', '/', EOF
    text: str
    index: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise GuardSyntaxError(
                f"unexpected character {text[pos]!r}",
                text,
                pos,
                ("identifier", "'('", "')'", "','", "'/'"),
            )
        if m.lastgroup == "ident":
            word = m.group()
            kind = word.upper() if word.lower() in KEYWORDS else "IDENT"
            tokens.append(_Token(kind, word, pos))
        elif m.lastgroup == "punct":
            tokens.append(_Token(m.group(), m.group(), pos))
        pos = m.end()
    tokens.append(_Token("EOF", "", len(text)))
    return tokens


_DESCRIBE = {
    "IDENT": "identifier",
    "AND": "and",
    "OR": "or",
    "NOT": "not",
    "EOF": "end of input",
}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def fail(self, *expected: str) -> GuardSyntaxError:
        tok = self.tok
        found = _DESCRIBE.get(tok.kind, repr(tok.text)) if tok.kind != "IDENT" else repr(tok.text)
        names = [_DESCRIBE.get(e, f"'{e}'") for e in expected]
        return GuardSyntaxError(f"unexpected {found}", self.text, tok.index, names)

    def expect(self, kind: str) -> _Token:
        if self.tok.kind != kind:
            raise self.fail(kind)
        tok = self.tok
        self.pos += 1
        return tok

    def parse(self) -> GuardExpr:
        expr = self.expr()
        if self.tok.kind != "EOF":
            raise self.fail("AND", "OR", "EOF")
        return expr

    def expr(self) -> GuardExpr:
        terms = [self.term()]
        while self.tok.kind == "OR":
            self.pos += 1
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else Or(tuple(terms))

    def term(self) -> GuardExpr:
        factors = [self.factor()]
        while self.tok.kind == "AND":
            self.pos += 1
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else And(tuple(factors))

    def factor(self) -> GuardExpr:
        if self.tok.kind == "(":
            self.pos += 1
            inner = self.expr()
            self.expect(")")
            return inner
        positive = True
        if self.tok.kind == "NOT":
            self.pos += 1
            positive = False
            if self.tok.kind not in ("/", "IDENT"):
                raise self.fail("/", "IDENT")
        elif self.tok.kind not in ("/", "IDENT"):
            raise self.fail("(", "/", "IDENT", "NOT")
        return GuardLiteral(self.atom(), positive)

    def atom(self) -> GuardAtom:
        if self.tok.kind == "/":
            self.pos += 1
        name = self.expect("IDENT").text
        args: list[str] = []
        if self.tok.kind == "(":
            self.pos += 1
            args.append(self.expect("IDENT").text)
            while self.tok.kind == ",":
                self.pos += 1
                args.append(self.expect("IDENT").text)
            self.expect(")")
        return GuardAtom(name, tuple(args))


def parse_guard(text: str) -> GuardExpr:
    """Parse ``text`` into a guard expression tree.

    Raises :class:`EmptyExpression` for blank input and
    :class:`GuardSyntaxError` for anything outside the grammar.
    """
    if not isinstance(text, str):
        raise TypeError("guard text must be a string")
    if not text.strip():
        raise EmptyExpression(text)
    return _Parser(text).parse()


def parse_literal(text: str) -> GuardLiteral:
    """Parse a guard that must consist of a single (possibly negated) atom."""
    expr = parse_guard(text)
    if not isinstance(expr, GuardLiteral):
        raise GuardSyntaxError("expected a single guard literal", text, 0, ("literal",))
    return expr


# ---------------------------------------------------------------------------
# evaluation


def eval_guard(expr: GuardExpr, env: Mapping[GuardAtom, bool]) -> bool:
    if isinstance(expr, GuardLiteral):
        try:
            value = env[expr.atom]
        except KeyError:
            raise UnboundAtom(expr.atom) from None
        return bool(value) if expr.positive else not value
    if isinstance(expr, And):
        return all(eval_guard(op, env) for op in expr.operands)
    if isinstance(expr, Or):
        return any(eval_guard(op, env) for op in expr.operands)
    raise TypeError(f"not a guard expression: {expr!r}")


def eval_dnf(dnf: DnfForm, env: Mapping[GuardAtom, bool]) -> bool:
    return any(all(eval_guard(lit, env) for lit in clause) for clause in dnf)


def atoms_of(expr: GuardExpr) -> list[GuardAtom]:
    """Distinct atoms of ``expr`` in first-occurrence order."""
    seen: dict[GuardAtom, None] = {}
    for lit in literals_of(expr):
        seen.setdefault(lit.atom, None)
    return list(seen)


def literals_of(expr: GuardExpr) -> Iterator[GuardLiteral]:
    if isinstance(expr, GuardLiteral):
        yield expr
    else:
        for op in expr.operands:
            yield from literals_of(op)


def truth_table(atoms: list[GuardAtom]) -> Iterator[dict[GuardAtom, bool]]:
    """All ``2**len(atoms)`` assignments over ``atoms``."""
    for values in itertools.product((False, True), repeat=len(atoms)):
        yield dict(zip(atoms, values))


# ---------------------------------------------------------------------------
# normal form


def _consistent(clause: frozenset[GuardLiteral]) -> bool:
    return not any(lit.negate() in clause for lit in clause)


def _absorb(clauses: set[frozenset[GuardLiteral]]) -> DnfForm:
    # shortest first, so a clause only needs checking against kept ones
    kept: list[frozenset[GuardLiteral]] = []
    for clause in sorted(clauses, key=len):
        if not any(k <= clause for k in kept):
            kept.append(clause)
    return frozenset(kept)


def to_dnf(expr: GuardExpr) -> DnfForm:
    """Disjunctive normal form with contradictory and absorbed clauses removed.

    An unsatisfiable expression yields the empty set.
    """
    if isinstance(expr, GuardLiteral):
        return frozenset({frozenset({expr})})
    if isinstance(expr, Or):
        out: set[frozenset[GuardLiteral]] = set()
        for op in expr.operands:
            out |= to_dnf(op)
        return _absorb(out)
    if isinstance(expr, And):
        acc: set[frozenset[GuardLiteral]] = {frozenset()}
        for op in expr.operands:
            sub = to_dnf(op)
            acc = {a | b for a in acc for b in sub}
            acc = {c for c in acc if _consistent(c)}
            acc = set(_absorb(acc))
        return frozenset(acc)
    raise TypeError(f"not a guard expression: {expr!r}")


# ---------------------------------------------------------------------------
# rendering


def render_literal(lit: GuardLiteral) -> str:
    return str(lit.atom) if lit.positive else f"not {lit.atom}"


def render_guard(expr: GuardExpr) -> str:
    """Render ``expr`` so that ``parse_guard`` gives back the same tree.

    Compound children are always parenthesized, which keeps nesting such as
    ``And(a, And(b, c))`` intact through a round trip.
    """
    if isinstance(expr, GuardLiteral):
        return render_literal(expr)
    if isinstance(expr, (And, Or)):
        sep = " and " if isinstance(expr, And) else " or "
        parts = []
        for op in expr.operands:
            text = render_guard(op)
            parts.append(text if isinstance(op, GuardLiteral) else f"({text})")
        return sep.join(parts)
    raise TypeError(f"not a guard expression: {expr!r}")
