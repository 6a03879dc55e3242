from ..semantics.model import DsModel
from ..sequent.disjoint_set import DisjointSet
from ..sequent.sequent import ChoiceAtom, Label
from ..syntax.formula import NegAtom, variables
from .blocking import DirectlyBlocked, block_statuses, is_blocked
from .exceptions import UnstableState
from .saturation import unsatisfied_conditions
from .state import SearchState


def extract_stability_model(state: SearchState) -> tuple[DsModel, str]:
    """Read a countermodel off a stable search state.

    Worlds are the unblocked labels. An agent's choice relation is the
    equivalence generated by the atoms between unblocked labels, where an
    atom into a directly blocked label is redirected to its loop ancestor.
    A variable holds at a world exactly when its negation is written there.

    Args:
        state (SearchState): A search state that passes every saturation
            condition.

    Raises:
        UnstableState: If the state violates some saturation condition.

    Returns:
        tuple[DsModel, str]: The model and the world of the root label.
    """
    statuses = block_statuses(state)
    failed = unsatisfied_conditions(state, statuses)
    if failed:
        raise UnstableState(f"the state violates {', '.join(failed)}")

    worlds = [label for label in state.labels if not is_blocked(statuses[label])]
    present = set(worlds)

    choice = {}
    for i in range(state.agents):
        classes: DisjointSet[Label] = DisjointSet()
        for w in worlds:
            classes.add(w)
        for atom in state.relations:
            if not isinstance(atom, ChoiceAtom) or atom.agent != i:
                continue
            if atom.source not in present:
                continue
            target = atom.target
            status = statuses[target]
            if isinstance(status, DirectlyBlocked):
                target = status.loop_ancestor
            if target in present:
                classes.union(atom.source, target)
        choice[i] = frozenset(
            (str(w), str(u))
            for cell in classes.classes()
            for w in cell
            for u in cell
        )

    ideal = {
        i: frozenset(str(w) for w in worlds if w in state.ideal[i])
        for i in range(state.agents)
    }
    names = set()
    for entry in state.formulas:
        names |= variables(entry.formula)
    valuation = {
        p: frozenset(str(w) for w in worlds if state.has(w, NegAtom(p)))
        for p in sorted(names)
    }
    model = DsModel(
        worlds=tuple(str(w) for w in worlds),
        choice=choice,
        ideal=ideal,
        valuation=valuation,
        agent_count=state.agents,
        choice_bound=state.choices,
    )
    return model, str(state.root)
