import logging
from itertools import product
from typing import Callable, Iterator

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
    deontic_agents_of,
    variables,
)
from .model import DsModel

logger = logging.getLogger(__name__)

# A frame is (choice cells per agent, ideal mask per agent); world j is bit j.
Frame = tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]
Evaluator = Callable[[Frame, dict[str, int], int], int]


def _compile(phi: Formula) -> Evaluator:
    """Compile a formula into a function returning its truth set as a bitmask."""
    match phi:
        case Atom(name):
            return lambda frame, val, full: val[name]
        case NegAtom(name):
            return lambda frame, val, full: full & ~val[name]
        case And(left, right):
            lf, rf = _compile(left), _compile(right)
            return lambda frame, val, full: lf(frame, val, full) & rf(frame, val, full)
        case Or(left, right):
            lf, rf = _compile(left), _compile(right)
            return lambda frame, val, full: lf(frame, val, full) | rf(frame, val, full)
        case Box(body):
            bf = _compile(body)
            return lambda frame, val, full: full if bf(frame, val, full) == full else 0
        case Dia(body):
            bf = _compile(body)
            return lambda frame, val, full: full if bf(frame, val, full) else 0
        case AgBox(agent, body):
            bf = _compile(body)

            def agbox(frame, val, full):
                s = bf(frame, val, full)
                return sum(c for c in frame[0][agent] if c & ~s == 0)

            return agbox
        case AgDia(agent, body):
            bf = _compile(body)

            def agdia(frame, val, full):
                s = bf(frame, val, full)
                return sum(c for c in frame[0][agent] if c & s)

            return agdia
        case Ought(agent, body):
            bf = _compile(body)
            return lambda frame, val, full: (
                full if frame[1][agent] & ~bf(frame, val, full) == 0 else 0
            )
        case Perm(agent, body):
            bf = _compile(body)
            return lambda frame, val, full: (
                full if frame[1][agent] & bf(frame, val, full) else 0
            )
    raise TypeError(f"not a formula: {phi!r}")


def _partitions(m: int) -> Iterator[tuple[int, ...]]:
    """Enumerate set partitions of {0..m-1} as tuples of block bitmasks.

    Partitions come in restricted-growth-string order.
    """

    def grow(prefix: list[int], blocks: int) -> Iterator[list[int]]:
        if len(prefix) == m:
            yield prefix
            return
        for b in range(blocks + 1):
            yield from grow(prefix + [b], max(blocks, b + 1))

    for assignment in grow([], 0):
        masks = [0] * (max(assignment) + 1)
        for world, block in enumerate(assignment):
            masks[block] |= 1 << world
        yield tuple(masks)


def _independent(cells: tuple[tuple[int, ...], ...], full: int) -> bool:
    for selection in product(*cells):
        common = full
        for cell in selection:
            common &= cell
        if not common:
            return False
    return True


def _ideal_options(cells: tuple[int, ...]) -> list[int]:
    options = []
    for chosen in range(1, 1 << len(cells)):
        options.append(sum(c for i, c in enumerate(cells) if chosen >> i & 1))
    return options


def _frames(m: int, n: int, k: int, phi: Formula) -> Iterator[Frame]:
    full = (1 << m) - 1
    used = agents_of(phi)
    deontic = deontic_agents_of(phi)
    all_partitions = [p for p in _partitions(m) if k == 0 or len(p) <= k]
    per_agent = [all_partitions if i in used else [(full,)] for i in range(n)]
    for cells in product(*per_agent):
        if not _independent(cells, full):
            continue
        ideals = [
            _ideal_options(cells[i]) if i in deontic else [full] for i in range(n)
        ]
        for ideal in product(*ideals):
            yield cells, ideal


def _to_model(
    m: int, n: int, k: int, frame: Frame, val: dict[str, int]
) -> DsModel:
    worlds = tuple(str(j) for j in range(m))

    def members(mask: int) -> list[str]:
        return [worlds[j] for j in range(m) if mask >> j & 1]

    choice = {}
    for agent, cells in enumerate(frame[0]):
        pairs = set()
        for cell in cells:
            pairs.update(product(members(cell), repeat=2))
        choice[agent] = frozenset(pairs)
    ideal = {agent: frozenset(members(mask)) for agent, mask in enumerate(frame[1])}
    valuation = {name: frozenset(members(mask)) for name, mask in val.items()}
    return DsModel(worlds, choice, ideal, valuation, n, k)


def find_countermodel_bounded(
    phi: Formula, n: int, k: int, max_worlds: int
) -> DsModel | None:
    """Search exhaustively for a small model falsifying a formula at world "0".

    Models are enumerated by number of worlds, then frame, then valuation.
    Agents absent from `phi` get the one-cell partition and agents without an
    ought or permission in `phi` get every world as ideal; a counter-model
    exists within the bound iff one exists in this restricted enumeration.

    Args:
        phi (Formula): The formula to falsify.
        n (int): Number of agents.
        k (int): Choice bound, 0 meaning unlimited.
        max_worlds (int): Largest number of worlds to try.

    Returns:
        DsModel | None: The first counter-model found, or None.
    """
    evaluate = _compile(phi)
    names = sorted(variables(phi))
    for m in range(1, max_worlds + 1):
        full = (1 << m) - 1
        for frame in _frames(m, n, k, phi):
            for masks in product(range(1 << m), repeat=len(names)):
                val = dict(zip(names, masks))
                if not evaluate(frame, val, full) & 1:
                    logger.debug("counter-model found with %d world(s)", m)
                    return _to_model(m, n, k, frame, val)
    return None
