import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ucmbt.guards import (
    And,
    EmptyExpression,
    GuardAtom,
    GuardLiteral,
    GuardSyntaxError,
    Or,
    UnboundAtom,
    atoms_of,
    eval_dnf,
    eval_guard,
    parse_guard,
    parse_literal,
    render_guard,
    to_dnf,
)

import oracles
from strategies import any_expressions, expressions


def lit(name, *args, positive=True):
    return GuardLiteral(GuardAtom(name, tuple(args)), positive)


a, b, c = lit("a"), lit("b"), lit("c")

PR_CONTRACT = (
    "PR_Request and ((Validated_User(U) and Add_PR(i) and (Exist(i) or (not Exist(i) and Add(i))) "
    "and PR(i)) or (not Validated_User(U) and not PR(i)))"
)


class TestParse:
    def test_slash_prefix_is_dropped(self):
        assert parse_guard("/PR_Request") == lit("PR_Request")

    def test_negated_conjunction(self):
        assert parse_guard("Not /Exist(i) and /Add(i)") == And(
            (lit("Exist", "i", positive=False), lit("Add", "i"))
        )

    def test_and_binds_tighter_than_or(self):
        assert parse_guard("a and (b or c)") == And((a, Or((b, c))))
        assert parse_guard("a or b and c") == Or((a, And((b, c))))

    @pytest.mark.parametrize("text", ["a AND b", "a And b", "a and b", "  a\tand\nb "])
    def test_keywords_case_insensitive(self, text):
        assert parse_guard(text) == And((a, b))

    def test_names_are_case_sensitive(self):
        assert parse_guard("Exist(i)") != parse_guard("exist(i)")

    def test_arguments(self):
        assert parse_guard("/Validated_User (U)") == lit("Validated_User", "U")
        assert parse_guard("f(a, b,c)") == lit("f", "a", "b", "c")

    def test_chain_is_flat(self):
        assert parse_guard("a and b and c") == And((a, b, c))

    def test_parenthesized_group_is_kept(self):
        assert parse_guard("a and (b and c)") == And((a, And((b, c))))
        assert parse_guard("((a))") == a

    @pytest.mark.parametrize("text", ["", "   ", "\n"])
    def test_empty(self, text):
        with pytest.raises(EmptyExpression):
            parse_guard(text)

    @pytest.mark.parametrize(
        "text, offset",
        [
            ("a and", 5),
            ("a b", 2),
            ("(a or b", 7),
            ("not (a)", 4),
            ("a and or b", 6),
            ("f()", 2),
            ("a $ b", 2),
            ("é and", 0),
            ("a and é", 6),
            ("not not a", 4),
        ],
    )
    def test_errors_carry_byte_offset(self, text, offset):
        with pytest.raises(GuardSyntaxError) as info:
            parse_guard(text)
        assert info.value.offset == offset
        assert info.value.expected

    def test_expected_tokens_after_and(self):
        with pytest.raises(GuardSyntaxError) as info:
            parse_guard("a and")
        assert set(info.value.expected) == {"'('", "'/'", "identifier", "not"}

    def test_parse_literal_rejects_compound(self):
        assert parse_literal("not PR(i)") == lit("PR", "i", positive=False)
        with pytest.raises(GuardSyntaxError):
            parse_literal("a or b")

    @given(st.text(max_size=40))
    def test_total_on_arbitrary_text(self, text):
        try:
            parse_guard(text)
        except GuardSyntaxError as exc:
            assert 0 <= exc.offset <= len(text.encode("utf-8", "surrogatepass"))

    @given(st.binary(max_size=40))
    def test_total_on_arbitrary_bytes(self, raw):
        try:
            parse_guard(raw.decode("latin-1"))
        except GuardSyntaxError:
            pass


class TestEval:
    def test_literal(self):
        assert eval_guard(lit("PR_Request"), {GuardAtom("PR_Request"): True}) is True

    def test_negative_literal(self):
        assert eval_guard(lit("Exist", "i", positive=False), {GuardAtom("Exist", ("i",)): True}) is False

    def test_unbound(self):
        with pytest.raises(UnboundAtom):
            eval_guard(And((a, b)), {GuardAtom("a"): True})

    def test_pr_contract_cancel_branch(self):
        expr = parse_guard(PR_CONTRACT)
        env = {atom: False for atom in atoms_of(expr)}
        env[GuardAtom("PR_Request")] = True
        assert eval_guard(expr, env) is True
        # same verdict from the independent evaluator, over the full truth table
        for full in oracles.assignments(atoms_of(expr)):
            assert eval_guard(expr, full) == oracles.evaluate(expr, full)


class TestDnf:
    def test_distribution(self):
        assert to_dnf(And((a, Or((b, c))))) == {frozenset({a, b}), frozenset({a, c})}

    def test_identity(self):
        x = lit("x")
        assert to_dnf(x) == {frozenset({x})}

    def test_contradiction_dropped(self):
        assert to_dnf(And((a, a.negate()))) == frozenset()
        assert to_dnf(Or((And((a, a.negate())), b))) == {frozenset({b})}

    def test_absorption(self):
        assert to_dnf(Or((a, And((a, b))))) == {frozenset({a})}

    def test_pr_contract_has_three_clauses(self):
        dnf = to_dnf(parse_guard(PR_CONTRACT))
        assert len(dnf) == 3
        expected = [
            "PR_Request and Validated_User(U) and Add_PR(i) and Exist(i) and PR(i)",
            "PR_Request and Validated_User(U) and Add_PR(i) and not Exist(i) and Add(i) and PR(i)",
            "PR_Request and not Validated_User(U) and not PR(i)",
        ]
        assert dnf == {frozenset(parse_guard(t).operands) for t in expected}

    def test_pr_contract_against_truth_table(self):
        expr = parse_guard(PR_CONTRACT)
        dnf = to_dnf(expr)
        names = atoms_of(expr)
        assert len(names) == 6
        assert oracles.models_of(lambda env: eval_dnf(dnf, env), names) == oracles.models_of(
            lambda env: oracles.evaluate(expr, env), names
        )

    @given(expressions(max_leaves=10))
    def test_equivalent_on_every_assignment(self, expr):
        dnf = to_dnf(expr)
        names = list(oracles.atoms(expr))
        for env in oracles.assignments(names):
            assert eval_dnf(dnf, env) == oracles.evaluate(expr, env)

    @given(expressions(max_leaves=10))
    def test_clauses_are_consistent_and_minimal(self, expr):
        dnf = to_dnf(expr)
        for clause in dnf:
            assert not any(l.negate() in clause for l in clause)
            assert not any(other < clause for other in dnf)


class TestRender:
    def test_negative_literal(self):
        assert render_guard(lit("PR", "i", positive=False)) == "not PR(i)"

    def test_and(self):
        assert render_guard(And((a, b))) == "a and b"

    def test_precedence_parentheses(self):
        assert render_guard(Or((And((a, b)), c))) == "(a and b) or c"
        assert render_guard(And((Or((a, b)), c))) == "(a or b) and c"

    def test_nested_same_operator(self):
        expr = And((a, And((b, c))))
        assert render_guard(expr) == "a and (b and c)"

    @given(any_expressions)
    def test_round_trip(self, expr):
        assert parse_guard(render_guard(expr)) == expr

    def test_round_trip_pr_contract(self):
        expr = parse_guard(PR_CONTRACT)
        assert parse_guard(render_guard(expr)) == expr


def test_atoms_reject_bad_identifiers():
    with pytest.raises(ValueError):
        GuardAtom("Validated User")
    with pytest.raises(ValueError):
        GuardAtom("and")
    with pytest.raises(ValueError):
        And((a,))
