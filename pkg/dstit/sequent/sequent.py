import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from ..syntax.formula import Formula, formula_key, print_formula
from ..syntax.parser import parse
from .disjoint_set import DisjointSet
from .exceptions import ItemSyntaxError


class LabelOrigin(Enum):
    """Rule that introduced a label."""

    ROOT = "Root"
    BY_BOX = "ByBox"
    BY_OUGHT = "ByOught"
    BY_D2 = "ByD2"
    BY_AGBOX = "ByAgBox"
    BY_AGBOX_STAR = "ByAgBoxStar"
    BY_IOA = "ByIOA"


@dataclass(frozen=True, order=True)
class Label:
    """A sequent label, identified by its creation index.

    The origin tag is bookkeeping for the search and takes no part in equality.
    """

    index: int
    origin: LabelOrigin = field(default=LabelOrigin.ROOT, compare=False)

    def __str__(self) -> str:
        return f"w{self.index}"

    @staticmethod
    def parse(text: str) -> "Label":
        match = re.fullmatch(r"w(\d+)", text.strip())
        if match is None:
            raise ItemSyntaxError(f"{text!r} is not a label")
        return Label(int(match.group(1)))


@dataclass(frozen=True, order=True)
class ChoiceAtom:
    """The relational atom R[agent] source target."""

    agent: int
    source: Label
    target: Label

    def __str__(self) -> str:
        return f"R[{self.agent}] {self.source} {self.target}"

    @property
    def labels(self) -> tuple[Label, ...]:
        return (self.source, self.target)


@dataclass(frozen=True, order=True)
class IdealAtom:
    """The relational atom I[agent] label."""

    agent: int
    label: Label

    def __str__(self) -> str:
        return f"I[{self.agent}] {self.label}"

    @property
    def labels(self) -> tuple[Label, ...]:
        return (self.label,)


RelAtom = ChoiceAtom | IdealAtom


@dataclass(frozen=True)
class LabeledFormula:
    label: Label
    formula: Formula

    def __str__(self) -> str:
        return f"{self.label} : {print_formula(self.formula)}"

    @property
    def labels(self) -> tuple[Label, ...]:
        return (self.label,)


Item = RelAtom | LabeledFormula


def atom_key(atom: RelAtom) -> tuple:
    if isinstance(atom, ChoiceAtom):
        return (0, atom.agent, atom.source.index, atom.target.index)
    return (1, atom.agent, atom.label.index, -1)


def labeled_key(entry: LabeledFormula) -> tuple[int, str]:
    return (entry.label.index, formula_key(entry.formula))


def item_key(item: Item) -> tuple:
    if isinstance(item, LabeledFormula):
        return (1,) + labeled_key(item)
    return (0,) + atom_key(item)


@dataclass(frozen=True)
class Sequent:
    """A labeled sequent: relational atoms on the left, labeled formulas right."""

    relations: frozenset[RelAtom] = frozenset()
    formulas: frozenset[LabeledFormula] = frozenset()

    def __str__(self) -> str:
        left = ", ".join(str(a) for a in sorted(self.relations, key=atom_key))
        right = ", ".join(str(f) for f in sorted(self.formulas, key=labeled_key))
        return f"{left} => {right}"

    def items(self) -> frozenset[Item]:
        return self.relations | self.formulas

    def extend(
        self,
        relations: Iterable[RelAtom] = (),
        formulas: Iterable[LabeledFormula] = (),
    ) -> "Sequent":
        return Sequent(self.relations | set(relations), self.formulas | set(formulas))

    def without(self, items: Iterable[Item]) -> "Sequent":
        removed = set(items)
        return Sequent(self.relations - removed, self.formulas - removed)


def labels_of(s: Sequent) -> frozenset[Label]:
    """Return every label occurring in a sequent."""
    found: set[Label] = set()
    for item in s.items():
        found.update(item.labels)
    return frozenset(found)


def restrict(gamma: Iterable[LabeledFormula], w: Label) -> frozenset[Formula]:
    """Return the formulas prefixed with label `w`."""
    return frozenset(entry.formula for entry in gamma if entry.label == w)


def choice_classes(relations: Iterable[RelAtom], agent: int) -> DisjointSet[Label]:
    """Build the union-find of the undirected agent-`agent` choice graph."""
    classes: DisjointSet[Label] = DisjointSet()
    for atom in relations:
        if isinstance(atom, ChoiceAtom) and atom.agent == agent:
            classes.union(atom.source, atom.target)
    return classes


def ri_path(relations: Iterable[RelAtom], agent: int, w: Label, u: Label) -> bool:
    """Decide whether an agent-`agent` path of choice atoms links two labels.

    Args:
        relations (Iterable[RelAtom]): The relational atoms.
        agent (int): The agent whose choice atoms are followed.
        w (Label): The first label.
        u (Label): The second label.

    Returns:
        bool: True if `w` equals `u` or the two are connected in the undirected
            graph of the agent's choice atoms.
    """
    if w == u:
        return True
    return choice_classes(relations, agent).connected(w, u)


_CHOICE_RE = re.compile(r"R\[(\d+)\]\s+(w\d+)\s+(w\d+)")
_IDEAL_RE = re.compile(r"I\[(\d+)\]\s+(w\d+)")
_LABELED_RE = re.compile(r"(w\d+)\s*:\s*(.+)", re.DOTALL)


def parse_atom(text: str, agent_count: int) -> RelAtom:
    text = text.strip()
    if match := _CHOICE_RE.fullmatch(text):
        agent = _checked_agent(match.group(1), agent_count, text)
        return ChoiceAtom(
            agent, Label.parse(match.group(2)), Label.parse(match.group(3))
        )
    if match := _IDEAL_RE.fullmatch(text):
        agent = _checked_agent(match.group(1), agent_count, text)
        return IdealAtom(agent, Label.parse(match.group(2)))
    raise ItemSyntaxError(f"{text!r} is not a relational atom")


def parse_labeled_formula(text: str, agent_count: int) -> LabeledFormula:
    match = _LABELED_RE.fullmatch(text.strip())
    if match is None:
        raise ItemSyntaxError(f"{text!r} is not a labeled formula")
    formula = parse(match.group(2), agent_count, allow_reserved=True)
    return LabeledFormula(Label.parse(match.group(1)), formula)


def parse_item(text: str, agent_count: int) -> Item:
    """Parse either a relational atom or a labeled formula."""
    if _LABELED_RE.fullmatch(text.strip()):
        return parse_labeled_formula(text, agent_count)
    return parse_atom(text, agent_count)


def _checked_agent(text: str, agent_count: int, context: str) -> int:
    agent = int(text)
    if agent >= agent_count:
        raise ItemSyntaxError(f"agent {agent} out of range in {context!r}")
    return agent
