from itertools import product

from ..sequent.sequent import ChoiceAtom, Label, LabelOrigin
from .blocking import UNBLOCKED, BlockStatus, block_statuses, is_blocked
from .state import SearchState


def __class_representatives(
    state: SearchState, agent: int, statuses: dict[Label, BlockStatus]
) -> dict[Label, Label]:
    """Map each live choice class to its oldest non-IOA label.

    A class is live when it holds an unblocked label; classes made of blocked
    labels only have no world in the stability model.
    """
    classes = state.classes[agent]
    live = {
        classes.find(label)
        for label in state.labels
        if not is_blocked(statuses.get(label, UNBLOCKED))
    }
    representatives: dict[Label, Label] = {}
    for label in state.labels:
        root = classes.find(label)
        if root in live and not state.is_ioa(label):
            representatives.setdefault(root, label)
    return representatives


def unsatisfied_tuples(
    state: SearchState, statuses: dict[Label, BlockStatus] | None = None
) -> list[tuple[Label, ...]]:
    """List the tuples of choice classes no IOA label is compatible with yet.

    A tuple picks one live class per agent among the classes of labels that
    were not introduced by IoaOp. It is satisfied when some IOA label lies in
    the picked class of every agent. Each tuple is reported by the oldest
    label of each picked class.

    Args:
        state (SearchState): The search state.
        statuses (dict | None): Precomputed blocking statuses.
    """
    statuses = statuses if statuses is not None else block_statuses(state)
    per_agent = [
        __class_representatives(state, i, statuses) for i in range(state.agents)
    ]
    satisfied = {
        tuple(state.classes[i].find(u) for i in range(state.agents))
        for u in state.ioa_sources
    }
    ordered = [
        sorted(reps, key=lambda root: reps[root].index) for reps in per_agent
    ]
    missing = []
    for roots in product(*ordered):
        if roots not in satisfied:
            missing.append(tuple(per_agent[i][root] for i, root in enumerate(roots)))
    return missing


def apply_ioa_op(
    state: SearchState, statuses: dict[Label, BlockStatus] | None = None
) -> tuple[Label, ...]:
    """Add one IOA label per unsatisfied tuple, in place.

    Every new label u gets the atom R_i w_i u for the representative w_i of
    each agent, so it satisfies its own tuple and no other.

    Returns:
        tuple[Label, ...]: The labels added, oldest first.
    """
    added = []
    for sources in unsatisfied_tuples(state, statuses):
        u = state.new_label(LabelOrigin.BY_IOA)
        for i, w in enumerate(sources):
            state.add_atom(ChoiceAtom(i, w, u))
        state.ioa_sources[u] = sources
        added.append(u)
    return tuple(added)


def ioa_op(state: SearchState) -> SearchState:
    """Return a copy of the state extended by one round of IoaOp."""
    extended = state.copy()
    apply_ioa_op(extended)
    return extended
