import re
from dataclasses import dataclass, field
from pathlib import Path

from ..syntax.exceptions import AgentOutOfRange, FormulaSyntaxError
from ..syntax.formula import Formula, agents_of, conjoin
from ..syntax.parser import parse
from .exceptions import KnowledgeBaseError

_LINE = re.compile(r"^(agents|choices|norm|fact)\s*:\s*(.*)$")


@dataclass(frozen=True)
class KnowledgeBase:
    """Norms and facts of a normative situation, for n agents and bound k.

    The split between norms and facts is kept for reporting; the logic treats
    both alike.
    """

    norms: tuple[Formula, ...] = field(default_factory=tuple)
    facts: tuple[Formula, ...] = field(default_factory=tuple)
    agent_count: int = 1
    choice_bound: int = 0

    def __post_init__(self):
        if self.agent_count < 1:
            raise KnowledgeBaseError("a knowledge base needs at least one agent")
        if self.choice_bound < 0:
            raise KnowledgeBaseError("the choice bound cannot be negative")
        for phi in self.formulas():
            used = agents_of(phi)
            if used and max(used) >= self.agent_count:
                raise KnowledgeBaseError(
                    f"agent {max(used)} is out of range for {self.agent_count} agent(s)"
                )

    def formulas(self) -> list[Formula]:
        return [*self.norms, *self.facts]

    def conjunction(self) -> Formula:
        """Norms then facts, left-folded; the empty base gives true."""
        return conjoin(self.formulas())

    def extend(self, *facts: Formula) -> "KnowledgeBase":
        return KnowledgeBase(
            self.norms, self.facts + tuple(facts), self.agent_count, self.choice_bound
        )


def __natural(text: str, key: str, line: int) -> int:
    if not text.isdigit():
        raise KnowledgeBaseError(f"'{key}' needs a natural number, got {text!r}", line)
    return int(text)


def parse_knowledge_base(text: str) -> KnowledgeBase:
    """Parse the line-oriented knowledge base format.

    Lines are `agents: <n>`, `choices: <k>`, `norm: <formula>`,
    `fact: <formula>` or `# comment`. The `agents` header must come before
    the first formula; `choices` defaults to 0.

    Raises:
        KnowledgeBaseError: On unknown line kinds, missing headers or
            formulas that do not parse.
    """
    agents: int | None = None
    choices = 0
    norms: list[Formula] = []
    facts: list[Formula] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        match = _LINE.match(line)
        if match is None:
            raise KnowledgeBaseError(f"unknown line {line!r}", number)
        kind, body = match.group(1), match.group(2).strip()
        if kind == "agents":
            agents = __natural(body, kind, number)
            if agents == 0:
                raise KnowledgeBaseError("'agents' must be positive", number)
            continue
        if kind == "choices":
            choices = __natural(body, kind, number)
            continue
        if agents is None:
            raise KnowledgeBaseError("the 'agents' header must come first", number)
        try:
            phi = parse(body, agents)
        except (FormulaSyntaxError, AgentOutOfRange) as e:
            raise KnowledgeBaseError(str(e), number)
        (norms if kind == "norm" else facts).append(phi)
    if agents is None:
        raise KnowledgeBaseError("the 'agents' header is missing")
    return KnowledgeBase(tuple(norms), tuple(facts), agents, choices)


def load_knowledge_base(path: str | Path) -> KnowledgeBase:
    try:
        text = Path(path).read_text()
    except FileNotFoundError:
        raise KnowledgeBaseError(f"{path} does not exist.")
    return parse_knowledge_base(text)
