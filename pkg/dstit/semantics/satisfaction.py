from typing import Mapping

from ..sequent.sequent import ChoiceAtom, Label, RelAtom, Sequent, labels_of
from ..syntax.exceptions import AgentOutOfRange
from ..syntax.formula import (
    AgBox,
    AgDia,
    And,
    Atom,
    Box,
    Dia,
    Formula,
    NegAtom,
    Or,
    Ought,
    Perm,
    agents_of,
)
from .exceptions import IncompleteInterpretation, UnknownWorld
from .model import DsModel


def _evaluate(m: DsModel, w: str, phi: Formula) -> bool:
    match phi:
        case Atom(name):
            return m.holds(name, w)
        case NegAtom(name):
            return not m.holds(name, w)
        case And(left, right):
            return _evaluate(m, w, left) and _evaluate(m, w, right)
        case Or(left, right):
            return _evaluate(m, w, left) or _evaluate(m, w, right)
        case Box(body):
            return all(_evaluate(m, u, body) for u in m.worlds)
        case Dia(body):
            return any(_evaluate(m, u, body) for u in m.worlds)
        case AgBox(agent, body):
            return all(_evaluate(m, u, body) for u in m.cell(agent, w))
        case AgDia(agent, body):
            return any(_evaluate(m, u, body) for u in m.cell(agent, w))
        case Ought(agent, body):
            return all(_evaluate(m, u, body) for u in m.ideal_worlds(agent))
        case Perm(agent, body):
            return any(_evaluate(m, u, body) for u in m.ideal_worlds(agent))
    raise TypeError(f"not a formula: {phi!r}")


def _check_agents(m: DsModel, phi: Formula):
    for agent in agents_of(phi):
        if agent >= m.agent_count:
            raise AgentOutOfRange(agent, m.agent_count)


def satisfies(m: DsModel, w: str, phi: Formula) -> bool:
    """Decide whether a formula holds at a world of a model.

    Settledness ranges over all worlds, choice operators over the agent's
    choice cell at `w`, and ought/permission over the agent's ideal worlds.

    Args:
        m (DsModel): The model.
        w (str): The world of evaluation.
        phi (Formula): The formula.

    Returns:
        bool: True if `phi` holds at `w`.

    Raises:
        UnknownWorld: If `w` is not a world of `m`.
        AgentOutOfRange: If `phi` mentions an agent the model does not have.
    """
    if w not in m.worlds:
        raise UnknownWorld(f"{w} is not a world of the model")
    _check_agents(m, phi)
    return _evaluate(m, w, phi)


def valid_on_model(m: DsModel, phi: Formula) -> bool:
    """Decide whether a formula holds at every world of a model."""
    _check_agents(m, phi)
    return all(_evaluate(m, w, phi) for w in m.worlds)


def _atom_holds(m: DsModel, itp: Mapping[Label, str], atom: RelAtom) -> bool:
    if isinstance(atom, ChoiceAtom):
        return itp[atom.target] in m.cell(atom.agent, itp[atom.source])
    return itp[atom.label] in m.ideal_worlds(atom.agent)


def satisfies_sequent(m: DsModel, itp: Mapping[Label, str], s: Sequent) -> bool:
    """Decide whether a model and interpretation satisfy a labeled sequent.

    Args:
        m (DsModel): The model.
        itp (Mapping[Label, str]): Maps every label of `s` to a world.
        s (Sequent): The sequent.

    Returns:
        bool: True if some labeled formula holds whenever all atoms hold.

    Raises:
        IncompleteInterpretation: If a label of `s` is not mapped.
        UnknownWorld: If a label is mapped outside the model.
    """
    missing = sorted(labels_of(s) - set(itp))
    if missing:
        raise IncompleteInterpretation(f"label {missing[0]} is not interpreted")
    for label, world in itp.items():
        if world not in m.worlds:
            raise UnknownWorld(f"{label} is mapped to unknown world {world}")
    if not all(_atom_holds(m, itp, atom) for atom in s.relations):
        return True
    return any(
        satisfies(m, itp[entry.label], entry.formula) for entry in s.formulas
    )
