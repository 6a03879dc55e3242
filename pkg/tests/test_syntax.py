import pytest

from dstit.syntax.exceptions import AgentOutOfRange, FormulaSyntaxError
from dstit.syntax.formula import (
    BOTTOM,
    CACHE_SIZE,
    TOP,
    AgBox,
    AgDia,
    And,
    Atom,
    Box,
    Dia,
    NegAtom,
    Or,
    Ought,
    Perm,
    agents_of,
    complexity,
    conjoin,
    deontic_agents_of,
    implies,
    negate,
    print_formula,
    subformulae,
    variables,
)
from dstit.syntax.parser import parse

p, q, r = Atom("p"), Atom("q"), Atom("r")


def test_negate_swaps_duals():
    phi = And(Box(p), Ought(0, AgDia(1, NegAtom("q"))))
    assert negate(phi) == Or(Dia(NegAtom("p")), Perm(0, AgBox(1, q)))


def test_negate_is_an_involution(random_cases):
    for phi, _, _ in random_cases[:200]:
        assert negate(negate(phi)) == phi


def test_formula_caches_are_bounded():
    for cached in (negate, print_formula):
        assert cached.cache_info().maxsize == CACHE_SIZE


def test_implies_is_negated_antecedent_or_consequent():
    assert implies(Ought(0, p), Dia(AgBox(0, p))) == Or(
        Perm(0, NegAtom("p")), Dia(AgBox(0, p))
    )


def test_conjoin_folds_left_and_defaults_to_top():
    assert conjoin([p, q, r]) == And(And(p, q), r)
    assert conjoin([p]) == p
    assert conjoin([]) == TOP


def test_subformulae_keep_modal_compounds_only():
    phi = Or(AgBox(0, And(p, q)), NegAtom("r"))
    assert subformulae(phi) == frozenset({AgBox(0, And(p, q)), p, q, NegAtom("r")})


def test_complexity_counts_literal_negations():
    assert complexity(p) == 1
    assert complexity(NegAtom("p")) == 2
    assert complexity(Ought(0, Or(p, NegAtom("q")))) == 5


def test_variables_and_agents():
    phi = And(AgBox(1, p), Ought(0, Dia(NegAtom("q"))))
    assert variables(phi) == frozenset({"p", "q"})
    assert agents_of(phi) == frozenset({0, 1})
    assert deontic_agents_of(phi) == frozenset({0})


@pytest.mark.parametrize(
    "text, expected",
    [
        ("p & q | r", Or(And(p, q), r)),
        ("p | q & r", Or(p, And(q, r))),
        ("p -> q -> r", Or(NegAtom("p"), Or(NegAtom("q"), r))),
        ("[0] p & q", And(AgBox(0, p), q)),
        ("dia [0] ~p", Dia(AgBox(0, NegAtom("p")))),
        ("[] p", Box(p)),
        ("<> p", Dia(p)),
        ("<1> p", AgDia(1, p)),
        ("O[1] p", Ought(1, p)),
        ("P[0] (p | q)", Perm(0, Or(p, q))),
        ("!(p & box q)", Or(NegAtom("p"), Dia(NegAtom("q")))),
        ("!O[0] p", Perm(0, NegAtom("p"))),
        ("true", TOP),
        ("false", BOTTOM),
    ],
)
def test_parse(text, expected):
    assert parse(text, 2) == expected


def test_equivalence_is_left_associative():
    assert parse("p <-> q <-> r", 1) == parse("(p <-> q) <-> r", 1)


def test_printed_formulas_parse_back(random_cases):
    for phi, n, _ in random_cases:
        assert parse(print_formula(phi), n) == phi


def test_print_formula():
    assert print_formula(Ought(0, Or(p, NegAtom("q")))) == "O[0] (p | ~q)"
    assert print_formula(Dia(AgDia(1, p))) == "dia <1> p"
    assert print_formula(TOP) == "true"
    assert print_formula(negate(BOTTOM)) == "!false"
    assert parse("!false", 1, allow_reserved=True) == negate(BOTTOM)


@pytest.mark.parametrize("text", ["p &", "(p | q", "[x] p", "p q", "p # q", "box", "~box"])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse(text, 1)


def test_syntax_error_reports_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("p & )", 1)
    assert info.value.position == 4


def test_reserved_variable_needs_permission():
    with pytest.raises(FormulaSyntaxError):
        parse("_t", 1)
    assert parse("_t", 1, allow_reserved=True) == Atom("_t")


def test_agent_out_of_range():
    with pytest.raises(AgentOutOfRange) as info:
        parse("[2] p", 2)
    assert info.value.index == 2
    assert info.value.agent_count == 2
