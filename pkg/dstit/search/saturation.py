from ..syntax.formula import AgBox, AgDia, And, Box, Dia, Or, Ought, Perm, negate
from .blocking import UNBLOCKED, block_statuses, is_blocked
from .ioa import unsatisfied_tuples
from .state import SearchState


def unsatisfied_conditions(
    state: SearchState, statuses: dict | None = None
) -> list[str]:
    """Name every saturation condition the top sequent of a thread violates.

    Args:
        state (SearchState): The search state.
        statuses (dict | None): Precomputed blocking statuses.

    Returns:
        list[str]: Condition names such as "C_or" or "C_IOA", without
            repetitions, in a fixed order.
    """
    statuses = statuses if statuses is not None else block_statuses(state)
    failed: list[str] = []

    def fail(name: str):
        if name not in failed:
            failed.append(name)

    def unblocked(label) -> bool:
        return not is_blocked(statuses.get(label, UNBLOCKED))

    labels = state.labels
    for _, _, entry in state.entries:
        w, phi = entry.label, entry.formula
        if negate(phi) in state.by_label[w]:
            fail("C_id")
        match phi:
            case Or(left, right):
                if not (state.has(w, left) and state.has(w, right)):
                    fail("C_or")
            case And(left, right):
                if not (state.has(w, left) or state.has(w, right)):
                    fail("C_and")
            case Dia(body):
                if not all(state.has(u, body) for u in labels):
                    fail("C_dia")
            case Box(body):
                if not any(unblocked(u) for u in state.holders.get(body, ())):
                    fail("C_box")
            case AgDia(i, body):
                for u in state.successors[i][w]:
                    if not (state.has(u, body) and state.has(u, phi)):
                        fail("C_agdia")
            case AgBox(i, body):
                if unblocked(w) and not any(
                    state.has(u, body) for u in state.successors[i][w]
                ):
                    fail("C_agbox")
            case Perm(i, body):
                if not all(state.has(u, body) for u in state.ideal[i]):
                    fail("C_perm")
            case Ought(i, body):
                if not any(
                    unblocked(u) and state.has(u, body) for u in state.ideal[i]
                ):
                    fail("C_ought")

    for i in range(state.agents):
        successors = state.successors[i]
        if not all(w in successors[w] for w in labels):
            fail("C_ref")
        if any(
            v not in successors[u]
            for w in labels
            for u in successors[w]
            for v in successors[w]
        ):
            fail("C_euc")
        if not any(unblocked(u) for u in state.ideal[i]):
            fail("C_D2")
        if any(
            u not in state.ideal[i]
            for w in state.ideal[i]
            for u in successors[w]
        ):
            fail("C_D3")

    if state.choices > 0:
        for i in range(state.agents):
            # Counted on path classes; exact once C_ref and C_euc hold.
            if len(state.classes[i].classes()) > state.choices:
                fail("C_APC")

    if state.agents > 1 and unsatisfied_tuples(state, statuses):
        fail("C_IOA")
    return failed


def is_stable(state: SearchState) -> bool:
    return not unsatisfied_conditions(state)
