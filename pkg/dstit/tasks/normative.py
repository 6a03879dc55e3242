from dataclasses import dataclass

from ..calculus.derivation import Derivation
from ..params.params import SearchParams
from ..search.prover import Invalid, Valid, Verdict, prove
from ..semantics.model import DsModel
from ..syntax.formula import BOTTOM, Formula, Ought, implies, negate, print_formula
from .knowledge_base import KnowledgeBase

_ANSWERS = {
    "duty": ("is a duty", "is not a duty"),
    "comply": ("is compliant", "is not compliant"),
    "fulfill": ("is jointly fulfillable", "is not jointly fulfillable"),
}


@dataclass(frozen=True)
class TaskVerdict:
    """The answer to a normative question with the certificate backing it.

    Attributes:
        task (str): One of "duty", "comply" or "fulfill".
        answer (bool): The answer to the question as asked.
        subject (str): What the answer is about, for reports.
        question (Formula): The formula whose validity was decided.
        verdict (Verdict): The prover verdict on the question.
    """

    task: str
    answer: bool
    subject: str
    question: Formula
    verdict: Verdict

    @property
    def proof(self) -> Derivation | None:
        return self.verdict.proof if isinstance(self.verdict, Valid) else None

    @property
    def model(self) -> tuple[DsModel, str] | None:
        if isinstance(self.verdict, Invalid):
            return self.verdict.model, self.verdict.world
        return None

    @property
    def summary(self) -> str:
        positive, negative = _ANSWERS[self.task]
        return f"{self.subject} {positive if self.answer else negative}"


def duty_check(
    kb: KnowledgeBase, agent: int, goal: Formula, params: SearchParams | None = None
) -> TaskVerdict:
    """Decide whether the knowledge base obliges an agent to see to a goal.

    The question is the validity of (norms and facts) -> O[agent] goal; the
    answer is true exactly when it is valid.
    """
    question = implies(kb.conjunction(), Ought(agent, goal))
    verdict = prove(question, kb.agent_count, kb.choice_bound, params)
    return TaskVerdict(
        "duty",
        isinstance(verdict, Valid),
        f"O[{agent}] {print_formula(goal)}",
        question,
        verdict,
    )


def compliance_check(
    kb: KnowledgeBase, agent: int, act: Formula, params: SearchParams | None = None
) -> TaskVerdict:
    """Decide whether seeing to an act breaks no duty the knowledge base entails.

    The act is compliant exactly when the contrary duty O[agent] ~act is not
    entailed, that is when (norms and facts) -> O[agent] ~act is invalid.
    The countermodel then certifies compliance and a proof certifies the
    contrary duty.
    """
    question = implies(kb.conjunction(), Ought(agent, negate(act)))
    verdict = prove(question, kb.agent_count, kb.choice_bound, params)
    return TaskVerdict(
        "comply",
        isinstance(verdict, Invalid),
        f"{print_formula(act)} by agent {agent}",
        question,
        verdict,
    )


def joint_fulfillment_check(
    kb: KnowledgeBase, params: SearchParams | None = None
) -> TaskVerdict:
    """Decide whether all norms and facts can hold together.

    The knowledge base is jointly fulfillable exactly when
    (norms and facts) -> false is invalid.
    """
    question = implies(kb.conjunction(), BOTTOM)
    verdict = prove(question, kb.agent_count, kb.choice_bound, params)
    return TaskVerdict(
        "fulfill",
        isinstance(verdict, Invalid),
        "the knowledge base",
        question,
        verdict,
    )
