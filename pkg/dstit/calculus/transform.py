from collections import defaultdict

from ..sequent.sequent import ChoiceAtom, Item, Label, Sequent
from .derivation import Derivation, rebuild
from .rules import RuleApplication, RuleName

# Steps whose premises need not contain their conclusion.
_NON_MONOTONE = {RuleName.WK, RuleName.SUB}


def _added(node: Derivation, premise: Derivation) -> frozenset[Item]:
    return premise.conclusion.items() - node.conclusion.items()


def _monotone(node: Derivation) -> bool:
    if node.rule in _NON_MONOTONE:
        return False
    items = node.conclusion.items()
    return all(items <= p.conclusion.items() for p in node.premises)


def trim_derivation(d: Derivation) -> Derivation:
    """Drop steps whose additions no rule further up relies on.

    A unary step is dropped when nothing above it uses the atoms or formulas
    it adds; a branching step is replaced by a premise that does not use its
    own additions. Every kept sequent loses the additions of the dropped steps
    below it, which leaves each remaining step an instance of its rule.

    Args:
        d (Derivation): A derivation that passes the checker.

    Returns:
        Derivation: An equivalent derivation of the same end sequent.
    """
    order = [node for _, node in d.walk()]
    used: dict[int, frozenset[Item]] = {}
    # For a dropped step, the index of the premise that replaces it.
    replacement: dict[int, int] = {}

    for node in reversed(order):
        if not node.premises:
            used[id(node)] = frozenset(node.application.principal)
            continue
        if _monotone(node):
            for index, premise in enumerate(node.premises):
                if not used[id(premise)] & _added(node, premise):
                    replacement[id(node)] = index
                    used[id(node)] = used[id(premise)]
                    break
        if id(node) in replacement:
            continue
        if node.rule in _NON_MONOTONE:
            used[id(node)] = node.conclusion.items()
            continue
        needed: set[Item] = set(node.application.principal)
        for premise in node.premises:
            needed |= used[id(premise)] - _added(node, premise)
        used[id(node)] = frozenset(needed)

    # Additions of dropped steps, removed from every sequent above them.
    removed: dict[int, frozenset[Item]] = {id(d): frozenset()}
    stack = [d]
    while stack:
        node = stack.pop()
        if id(node) in replacement:
            premise = node.premises[replacement[id(node)]]
            removed[id(premise)] = removed[id(node)] | _added(node, premise)
            stack.append(premise)
            continue
        for premise in node.premises:
            removed[id(premise)] = removed[id(node)]
            stack.append(premise)

    def skip(node: Derivation) -> Derivation:
        while id(node) in replacement:
            node = node.premises[replacement[id(node)]]
        return node

    def shrink(node: Derivation, premises: tuple[Derivation, ...]) -> Derivation:
        conclusion = node.conclusion.without(removed.get(id(node), frozenset()))
        return Derivation(conclusion, node.application, premises)

    rebuilt: dict[int, Derivation] = {}
    for node in reversed(order):
        if id(node) in replacement:
            continue
        premises = tuple(rebuilt[id(skip(p))] for p in node.premises)
        rebuilt[id(node)] = shrink(node, premises)
    return rebuilt[id(skip(d))]


def expand_ioa_macros(d: Derivation) -> Derivation:
    """Rewrite every IoaOpMacro step as a chain of single (IOA) steps."""

    def expand(node: Derivation, premises: tuple[Derivation, ...]) -> Derivation:
        if node.rule != RuleName.IOA_OP_MACRO:
            return Derivation(node.conclusion, node.application, premises)
        (premise,) = premises
        groups: dict[Label, dict[int, Label]] = defaultdict(dict)
        for atom in premise.conclusion.relations - node.conclusion.relations:
            if isinstance(atom, ChoiceAtom):
                groups[atom.target][atom.agent] = atom.source
        steps: list[tuple[Sequent, RuleApplication]] = []
        current = node.conclusion
        for fresh in sorted(groups):
            sources = groups[fresh]
            app = RuleApplication(
                RuleName.IOA,
                targets=tuple(sources[i] for i in sorted(sources)),
                fresh=(fresh,),
            )
            steps.append((current, app))
            current = current.extend(
                relations=[ChoiceAtom(i, w, fresh) for i, w in sources.items()]
            )
        result = premise
        for conclusion, app in reversed(steps):
            result = Derivation(conclusion, app, (result,))
        return result

    return rebuild(d, expand)
