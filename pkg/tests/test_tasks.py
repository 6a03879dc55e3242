import pytest

from dstit.semantics.model import validate_frame
from dstit.semantics.satisfaction import satisfies
from dstit.syntax.formula import TOP, Atom, Ought, implies, negate
from dstit.syntax.parser import parse
from dstit.tasks.exceptions import KnowledgeBaseError
from dstit.tasks.knowledge_base import (
    KnowledgeBase,
    load_knowledge_base,
    parse_knowledge_base,
)
from dstit.tasks.normative import (
    compliance_check,
    duty_check,
    joint_fulfillment_check,
)


def kb_of(*norms, facts=(), agents=1) -> KnowledgeBase:
    return KnowledgeBase(
        tuple(parse(t, agents) for t in norms),
        tuple(parse(t, agents) for t in facts),
        agents,
    )


def test_parse_knowledge_base(fixtures_dir):
    kb = load_knowledge_base(fixtures_dir / "bicycle.kb")
    assert kb.agent_count == 1
    assert kb.choice_bound == 0
    assert kb.norms == (parse("O[0] n", 1),)
    assert len(kb.facts) == 3
    assert kb.conjunction() == parse(
        "O[0] n & dia [0] ~n & dia [0] f & box (f -> n)", 1
    )


def test_empty_knowledge_base_is_true(fixtures_dir):
    kb = load_knowledge_base(fixtures_dir / "empty.kb")
    assert kb.formulas() == []
    assert kb.conjunction() == TOP


@pytest.mark.parametrize(
    "text, line",
    [
        ("norm: O[0] n\nagents: 1\n", 1),
        ("agents: 1\nrule: p\n", 2),
        ("agents: 1\nfact: p &\n", 2),
        ("agents: 1\nfact: [1] p\n", 2),
        ("agents: two\n", 1),
        ("agents: 0\n", 1),
    ],
)
def test_knowledge_base_errors(text, line):
    with pytest.raises(KnowledgeBaseError) as info:
        parse_knowledge_base(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}: ")


def test_missing_header_and_file():
    with pytest.raises(KnowledgeBaseError):
        parse_knowledge_base("# nothing here\n")
    with pytest.raises(KnowledgeBaseError):
        load_knowledge_base("/nonexistent/kb.txt")


def test_knowledge_base_checks_agents():
    with pytest.raises(KnowledgeBaseError):
        KnowledgeBase((Ought(1, Atom("p")),), (), 1)
    extended = kb_of("O[0] n").extend(parse("n", 1))
    assert extended.facts == (Atom("n"),)


def test_weak_premise_gives_no_duty(fixtures_dir):
    kb = load_knowledge_base(fixtures_dir / "bicycle.kb")
    verdict = duty_check(kb, 0, Atom("f"))
    assert not verdict.answer
    assert verdict.summary == "O[0] f is not a duty"
    assert verdict.question == implies(kb.conjunction(), Ought(0, Atom("f")))
    model, world = verdict.model
    assert len(model.worlds) == 4
    assert validate_frame(model).passed
    assert not satisfies(model, world, verdict.question)
    assert verdict.proof is None


def test_strong_premise_gives_the_duty():
    kb = kb_of("O[0] n", facts=("dia [0] ~n", "dia [0] f", "box (n -> f)"))
    verdict = duty_check(kb, 0, Atom("f"))
    assert verdict.answer
    assert verdict.proof is not None
    assert verdict.model is None


def test_stated_norms_are_duties():
    assert duty_check(kb_of("O[0] f"), 0, Atom("f")).answer
    assert duty_check(kb_of("O[0] n"), 0, parse("n | f", 1)).answer


def test_taking_the_car_complies(fixtures_dir):
    kb = load_knowledge_base(fixtures_dir / "car.kb")
    verdict = compliance_check(kb, 0, Atom("car"))
    assert verdict.answer
    assert verdict.summary == "car by agent 0 is compliant"
    model, world = verdict.model
    assert validate_frame(model).passed


def test_turning_right_breaks_a_duty(fixtures_dir):
    kb = load_knowledge_base(fixtures_dir / "lanes.kb")
    verdict = compliance_check(kb, 0, Atom("right"))
    assert not verdict.answer
    assert verdict.proof is not None
    assert verdict.summary == "right by agent 0 is not compliant"


def test_an_act_complies_with_its_own_duty():
    assert compliance_check(kb_of("O[0] f"), 0, Atom("f")).answer


def test_conflicting_norms_cannot_be_fulfilled(fixtures_dir):
    kb = load_knowledge_base(fixtures_dir / "conflict.kb")
    verdict = joint_fulfillment_check(kb)
    assert not verdict.answer
    assert verdict.proof is not None
    assert verdict.summary == "the knowledge base is not jointly fulfillable"


def test_consistent_bases_can_be_fulfilled(fixtures_dir):
    assert joint_fulfillment_check(load_knowledge_base(fixtures_dir / "empty.kb")).answer
    assert joint_fulfillment_check(kb_of("O[0] n")).answer


GOALS = ("f", "n", "n | f", "~f", "[0] n")
EXTRA_FACTS = ("dia [0] f", "box (n -> f)", "~n", "O[0] ~f", "[0] f")


@pytest.fixture
def knowledge_bases(fixtures_dir) -> list[KnowledgeBase]:
    return [
        load_knowledge_base(fixtures_dir / "bicycle.kb"),
        load_knowledge_base(fixtures_dir / "empty.kb"),
        kb_of("O[0] n"),
        kb_of("O[0] (n & f)", facts=("dia [0] ~f",)),
    ]


def test_duties_survive_new_facts(knowledge_bases):
    for kb in knowledge_bases:
        for text in GOALS:
            goal = parse(text, 1)
            if not duty_check(kb, 0, goal).answer:
                continue
            for fact in EXTRA_FACTS:
                assert duty_check(kb.extend(parse(fact, 1)), 0, goal).answer, (text, fact)


def test_compliance_mirrors_the_contrary_duty(knowledge_bases):
    for kb in knowledge_bases:
        for text in GOALS:
            act = parse(text, 1)
            complies = compliance_check(kb, 0, act)
            contrary = duty_check(kb, 0, negate(act))
            assert complies.answer != contrary.answer, text
            assert complies.question == contrary.question
