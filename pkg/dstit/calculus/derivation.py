from dataclasses import dataclass
from typing import Callable, Iterator

from ..sequent.sequent import Sequent
from .rules import RuleApplication, RuleName


@dataclass(frozen=True, eq=False, repr=False)
class Derivation:
    """A derivation tree: a conclusion, the rule applied and its sub-derivations."""

    conclusion: Sequent
    application: RuleApplication
    premises: tuple["Derivation", ...] = ()

    @property
    def rule(self) -> RuleName:
        return self.application.rule

    def __repr__(self) -> str:
        return f"Derivation({self.application}, premises={len(self.premises)})"

    def walk(self) -> Iterator[tuple[tuple[int, ...], "Derivation"]]:
        """Yield (path, node) pairs in preorder without recursion."""
        stack: list[tuple[tuple[int, ...], Derivation]] = [((), self)]
        while stack:
            path, node = stack.pop()
            yield path, node
            for index in reversed(range(len(node.premises))):
                stack.append((path + (index,), node.premises[index]))

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def rules_used(self) -> set[RuleName]:
        return {node.rule for _, node in self.walk()}


def rebuild(
    d: Derivation,
    transform: Callable[[Derivation, tuple[Derivation, ...]], Derivation],
) -> Derivation:
    """Rebuild a derivation bottom-up without recursion.

    Args:
        d (Derivation): The derivation to rebuild.
        transform: Called on every node with its already rebuilt premises.

    Returns:
        Derivation: The rebuilt root.
    """
    order = [node for _, node in d.walk()]
    rebuilt: dict[int, Derivation] = {}
    for node in reversed(order):
        premises = tuple(rebuilt[id(p)] for p in node.premises)
        rebuilt[id(node)] = transform(node, premises)
    return rebuilt[id(d)]


def chain(
    steps: list[tuple[Sequent, RuleApplication]], top: Derivation
) -> Derivation:
    """Stack a list of unary steps, lowest first, under a derivation."""
    d = top
    for conclusion, application in reversed(steps):
        d = Derivation(conclusion, application, (d,))
    return d
