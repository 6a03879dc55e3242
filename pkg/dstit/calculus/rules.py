from dataclasses import dataclass
from enum import Enum

from ..sequent.sequent import Item, Label, item_key
from .exceptions import UnknownRule


class RuleName(Enum):
    """Rules of the calculus, its admissible rules and its structural rules."""

    ID = "Id"
    GEN_ID = "GenId"
    AND = "And"
    OR = "Or"
    BOX = "Box"
    DIA = "Dia"
    AG_BOX = "AgBox"
    AG_DIA = "AgDia"
    OUGHT = "Ought"
    PERM = "Perm"
    REF = "Ref"
    EUC = "Euc"
    D2 = "D2"
    D3 = "D3"
    IOA = "IOA"
    APC = "APC"
    SYM = "Sym"
    TRA = "Tra"
    BOX_STAR = "BoxStar"
    OUGHT_STAR = "OughtStar"
    AG_BOX_STAR = "AgBoxStar"
    AG_DIA_STAR = "AgDiaStar"
    WK = "Wk"
    SUB = "Sub"
    IOA_OP_MACRO = "IoaOpMacro"

    @staticmethod
    def parse(text: str) -> "RuleName":
        try:
            return RuleName(text)
        except ValueError:
            raise UnknownRule(f"unknown rule {text!r}")


AGENT_INDEXED = {
    RuleName.REF,
    RuleName.EUC,
    RuleName.D2,
    RuleName.D3,
    RuleName.APC,
    RuleName.SYM,
    RuleName.TRA,
}

LEAF_RULES = {RuleName.ID, RuleName.GEN_ID}


@dataclass(frozen=True)
class RuleApplication:
    """A rule together with the data that instantiates its schema.

    Attributes:
        rule (RuleName): The rule.
        agent (int | None): The agent of agent-indexed rules.
        principal (tuple[Item, ...]): Atoms and labeled formulas of the
            conclusion the rule acts on.
        targets (tuple[Label, ...]): Further labels the rule is applied to, such
            as the witness of (Dia), the tuple of (APC) or the relabel target of
            (BoxStar).
        fresh (tuple[Label, ...]): Eigenvariables introduced by the premise.
        substitution (tuple[Label, Label] | None): For (Sub), the pair (w, u)
            such that the conclusion is the premise with u replaced by w.
    """

    rule: RuleName
    agent: int | None = None
    principal: tuple[Item, ...] = ()
    targets: tuple[Label, ...] = ()
    fresh: tuple[Label, ...] = ()
    substitution: tuple[Label, Label] | None = None

    def __str__(self) -> str:
        if self.agent is not None and self.rule in AGENT_INDEXED:
            return f"{self.rule.value}({self.agent})"
        return self.rule.value

    def describe(self) -> str:
        principal = "; ".join(str(p) for p in sorted(self.principal, key=item_key))
        fresh = ",".join(str(label) for label in self.fresh)
        return f"{self} principal={principal or '-'} fresh={fresh or '-'}"
