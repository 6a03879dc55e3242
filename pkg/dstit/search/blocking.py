from dataclasses import dataclass

from ..sequent.sequent import Label
from .state import SearchState


@dataclass(frozen=True)
class Unblocked:
    pass


@dataclass(frozen=True)
class DirectlyBlocked:
    """The label repeats its loop ancestor: same ideal flags, same formulas."""

    loop_ancestor: Label


@dataclass(frozen=True)
class IndirectlyBlocked:
    """Some proper ancestor of the label is directly blocked."""

    loop_node: Label


BlockStatus = Unblocked | DirectlyBlocked | IndirectlyBlocked

UNBLOCKED = Unblocked()


def is_blocked(status: BlockStatus) -> bool:
    return not isinstance(status, Unblocked)


def __signature(state: SearchState, label: Label) -> tuple:
    return state.ideal_flags(label), state.restrict(label)


def __loop_ancestor(state: SearchState, label: Label) -> Label | None:
    """Nearest proper non-root ancestor with the same signature, if any."""
    if label == state.root:
        return None
    signature = __signature(state, label)
    for ancestor in state.tree.ancestors(label):
        if ancestor == state.root:
            return None
        if __signature(state, ancestor) == signature:
            return ancestor
    return None


def block_statuses(state: SearchState) -> dict[Label, BlockStatus]:
    """Compute the blocking status of every label of a search state.

    A label with a directly blocked proper ancestor counts as indirectly
    blocked even when it also repeats an ancestor of its own, so that the
    loop ancestor of a directly blocked label is always unblocked. Labels
    outside the generation tree, and every label when loop checking is off,
    are unblocked.

    Args:
        state (SearchState): The search state.

    Returns:
        dict[Label, BlockStatus]: The status of each label.
    """
    if not state.loop_check:
        return {label: UNBLOCKED for label in state.labels}
    loops = {
        label: __loop_ancestor(state, label)
        for label in state.labels
        if label in state.tree
    }
    statuses: dict[Label, BlockStatus] = {}
    for label in state.labels:
        if label not in state.tree:
            statuses[label] = UNBLOCKED
            continue
        blocked_ancestor = next(
            (a for a in state.tree.ancestors(label) if loops[a] is not None), None
        )
        if blocked_ancestor is not None:
            statuses[label] = IndirectlyBlocked(blocked_ancestor)
        elif loops[label] is not None:
            statuses[label] = DirectlyBlocked(loops[label])
        else:
            statuses[label] = UNBLOCKED
    return statuses


def block_status(label: Label, state: SearchState) -> BlockStatus:
    return block_statuses(state)[label]
