from dataclasses import dataclass
from functools import lru_cache, reduce

RESERVED_VARIABLE = "_t"


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class NegAtom:
    name: str


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    """Settledness: the body holds at every world of the moment."""

    body: "Formula"


@dataclass(frozen=True)
class Dia:
    body: "Formula"


@dataclass(frozen=True)
class AgBox:
    """Agent `agent` sees to it that the body holds."""

    agent: int
    body: "Formula"


@dataclass(frozen=True)
class AgDia:
    agent: int
    body: "Formula"


@dataclass(frozen=True)
class Ought:
    """Agent `agent` ought to see to it that the body holds."""

    agent: int
    body: "Formula"


@dataclass(frozen=True)
class Perm:
    agent: int
    body: "Formula"


Formula = Atom | NegAtom | And | Or | Box | Dia | AgBox | AgDia | Ought | Perm
Literal = Atom | NegAtom
Binary = And | Or
Modal = Box | Dia | AgBox | AgDia | Ought | Perm
Agentive = AgBox | AgDia | Ought | Perm

TOP: Formula = Or(Atom(RESERVED_VARIABLE), NegAtom(RESERVED_VARIABLE))
BOTTOM: Formula = And(Atom(RESERVED_VARIABLE), NegAtom(RESERVED_VARIABLE))

# Entries kept by the negation and printing caches.
CACHE_SIZE = 65536


@lru_cache(maxsize=CACHE_SIZE)
def negate(phi: Formula) -> Formula:
    """Return the negation normal form of the negation of a formula.

    Every connective is replaced by its dual and atoms swap polarity.

    Args:
        phi (Formula): The formula to negate.

    Returns:
        Formula: The NNF formula equivalent to the negation of `phi`.
    """
    match phi:
        case Atom(name):
            return NegAtom(name)
        case NegAtom(name):
            return Atom(name)
        case And(left, right):
            return Or(negate(left), negate(right))
        case Or(left, right):
            return And(negate(left), negate(right))
        case Box(body):
            return Dia(negate(body))
        case Dia(body):
            return Box(negate(body))
        case AgBox(agent, body):
            return AgDia(agent, negate(body))
        case AgDia(agent, body):
            return AgBox(agent, negate(body))
        case Ought(agent, body):
            return Perm(agent, negate(body))
        case Perm(agent, body):
            return Ought(agent, negate(body))
    raise TypeError(f"not a formula: {phi!r}")


def implies(antecedent: Formula, consequent: Formula) -> Formula:
    return Or(negate(antecedent), consequent)


def iff(left: Formula, right: Formula) -> Formula:
    return And(implies(left, right), implies(right, left))


def conjoin(formulas: list[Formula]) -> Formula:
    """Left-fold a list of formulas into a conjunction.

    Args:
        formulas (list[Formula]): The conjuncts, in order.

    Returns:
        Formula: The conjunction, or TOP for an empty list.
    """
    if not formulas:
        return TOP
    return reduce(And, formulas)


def is_literal(phi: Formula) -> bool:
    return isinstance(phi, (Atom, NegAtom))


def subformulae(phi: Formula) -> frozenset[Formula]:
    """Compute the subformula set of a formula.

    Literals map to themselves, modal formulas contain themselves plus the
    subformulae of their body, and binary formulas are the union of the
    subformulae of their operands without the compound itself.

    Args:
        phi (Formula): The formula.

    Returns:
        frozenset[Formula]: The subformula set.
    """
    match phi:
        case Atom() | NegAtom():
            return frozenset({phi})
        case And(left, right) | Or(left, right):
            return subformulae(left) | subformulae(right)
        case Box(body) | Dia(body):
            return frozenset({phi}) | subformulae(body)
        case AgBox(_, body) | AgDia(_, body) | Ought(_, body) | Perm(_, body):
            return frozenset({phi}) | subformulae(body)
    raise TypeError(f"not a formula: {phi!r}")


def complexity(phi: Formula) -> int:
    """Count the symbols of a formula, negation signs of literals included."""
    match phi:
        case Atom():
            return 1
        case NegAtom():
            return 2
        case And(left, right) | Or(left, right):
            return 1 + complexity(left) + complexity(right)
        case Box(body) | Dia(body):
            return 1 + complexity(body)
        case AgBox(_, body) | AgDia(_, body) | Ought(_, body) | Perm(_, body):
            return 1 + complexity(body)
    raise TypeError(f"not a formula: {phi!r}")


def variables(phi: Formula) -> frozenset[str]:
    match phi:
        case Atom(name) | NegAtom(name):
            return frozenset({name})
        case And(left, right) | Or(left, right):
            return variables(left) | variables(right)
        case _:
            return variables(phi.body)


def agents_of(phi: Formula) -> frozenset[int]:
    """Return the agent indices occurring in a formula."""
    match phi:
        case Atom() | NegAtom():
            return frozenset()
        case And(left, right) | Or(left, right):
            return agents_of(left) | agents_of(right)
        case Box(body) | Dia(body):
            return agents_of(body)
        case _:
            return frozenset({phi.agent}) | agents_of(phi.body)


def deontic_agents_of(phi: Formula) -> frozenset[int]:
    """Return the agent indices occurring under an ought or permission."""
    match phi:
        case Atom() | NegAtom():
            return frozenset()
        case And(left, right) | Or(left, right):
            return deontic_agents_of(left) | deontic_agents_of(right)
        case Ought(agent, body) | Perm(agent, body):
            return frozenset({agent}) | deontic_agents_of(body)
        case _:
            return deontic_agents_of(phi.body)


_SPECIAL_TEXT = {
    TOP: "true",
    BOTTOM: "false",
    negate(TOP): "!true",
    negate(BOTTOM): "!false",
}


@lru_cache(maxsize=CACHE_SIZE)
def print_formula(phi: Formula) -> str:
    """Render a formula in the concrete ASCII grammar.

    Binary connectives are always parenthesized so that parsing the result
    yields the very same tree.

    Args:
        phi (Formula): The formula to render.

    Returns:
        str: The formula text.
    """
    special = _SPECIAL_TEXT.get(phi)
    if special is not None:
        return special
    match phi:
        case Atom(name):
            return name
        case NegAtom(name):
            return f"~{name}"
        case And(left, right):
            return f"({print_formula(left)} & {print_formula(right)})"
        case Or(left, right):
            return f"({print_formula(left)} | {print_formula(right)})"
        case Box(body):
            return f"box {print_formula(body)}"
        case Dia(body):
            return f"dia {print_formula(body)}"
        case AgBox(agent, body):
            return f"[{agent}] {print_formula(body)}"
        case AgDia(agent, body):
            return f"<{agent}> {print_formula(body)}"
        case Ought(agent, body):
            return f"O[{agent}] {print_formula(body)}"
        case Perm(agent, body):
            return f"P[{agent}] {print_formula(body)}"
    raise TypeError(f"not a formula: {phi!r}")


def formula_key(phi: Formula) -> str:
    """Key of the formula-structural order used for scheduling and rendering."""
    return print_formula(phi)
