from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product

from .exceptions import MalformedModel

CONDITIONS = ("C1", "C2", "C3", "D1", "D2", "D3")


@dataclass(frozen=True)
class DsModel:
    """A finite model of DS_n^k.

    Attributes:
        worlds (tuple[str, ...]): The world identifiers, in presentation order.
        choice (dict[int, frozenset[tuple[str, str]]]): Choice relation per agent.
        ideal (dict[int, frozenset[str]]): Ideal worlds per agent.
        valuation (dict[str, frozenset[str]]): Worlds where each variable holds.
        agent_count (int): Number of agents n.
        choice_bound (int): Maximal number of choices k, 0 meaning unlimited.
    """

    worlds: tuple[str, ...]
    choice: dict[int, frozenset[tuple[str, str]]]
    ideal: dict[int, frozenset[str]]
    valuation: dict[str, frozenset[str]]
    agent_count: int
    choice_bound: int = 0

    @cached_property
    def successors(self) -> dict[int, dict[str, frozenset[str]]]:
        result = {}
        for agent in range(self.agent_count):
            table: dict[str, set[str]] = {w: set() for w in self.worlds}
            for source, target in self.choice.get(agent, frozenset()):
                table.setdefault(source, set()).add(target)
            result[agent] = {w: frozenset(us) for w, us in table.items()}
        return result

    def cell(self, agent: int, w: str) -> frozenset[str]:
        """Return the worlds R_[agent]-accessible from `w`."""
        return self.successors[agent].get(w, frozenset())

    def ideal_worlds(self, agent: int) -> frozenset[str]:
        return self.ideal.get(agent, frozenset())

    def holds(self, variable: str, w: str) -> bool:
        return w in self.valuation.get(variable, frozenset())


@dataclass(frozen=True)
class ConditionResult:
    name: str
    passed: bool
    agent: int | None = None
    witness: tuple[str, ...] = ()
    detail: str = ""


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the frame conditions C1-C3 and D1-D3 on a model."""

    results: dict[str, ConditionResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def failures(self) -> list[ConditionResult]:
        return [r for r in self.results.values() if not r.passed]

    def __getitem__(self, name: str) -> ConditionResult:
        return self.results[name]


def check_well_formed(m: DsModel):
    """Raise MalformedModel if the model mentions unknown worlds or agents."""
    if not m.worlds:
        raise MalformedModel("a model needs at least one world")
    if len(set(m.worlds)) != len(m.worlds):
        raise MalformedModel("world identifiers must be unique")
    if m.agent_count < 1:
        raise MalformedModel("a model needs at least one agent")
    known = set(m.worlds)
    for agent, pairs in m.choice.items():
        if not 0 <= agent < m.agent_count:
            raise MalformedModel(f"choice relation for unknown agent {agent}")
        for pair in pairs:
            unknown = [w for w in pair if w not in known]
            if unknown:
                raise MalformedModel(f"R[{agent}] mentions unknown world {unknown[0]}")
    for agent, worlds in m.ideal.items():
        if not 0 <= agent < m.agent_count:
            raise MalformedModel(f"ideal set for unknown agent {agent}")
        unknown = sorted(set(worlds) - known)
        if unknown:
            raise MalformedModel(f"I[{agent}] mentions unknown world {unknown[0]}")
    for variable, worlds in m.valuation.items():
        unknown = sorted(set(worlds) - known)
        if unknown:
            raise MalformedModel(f"V({variable}) mentions unknown world {unknown[0]}")


def _is_equivalence(m: DsModel, agent: int) -> ConditionResult:
    relation = m.choice.get(agent, frozenset())
    order = {w: i for i, w in enumerate(m.worlds)}
    for w in m.worlds:
        if (w, w) not in relation:
            return ConditionResult("C1", False, agent, (w, w), "not reflexive")
    pairs = sorted(relation, key=lambda p: (order[p[0]], order[p[1]]))
    for u, v in pairs:
        if (v, u) not in relation:
            return ConditionResult("C1", False, agent, (u, v), "not symmetric")
    for u, v in pairs:
        for x in sorted(m.cell(agent, v), key=order.get):
            if (u, x) not in relation:
                return ConditionResult("C1", False, agent, (u, v, x), "not transitive")
    return ConditionResult("C1", True, agent)


def _choice_cells(m: DsModel, agent: int) -> list[frozenset[str]]:
    cells: list[frozenset[str]] = []
    for w in m.worlds:
        cell = m.cell(agent, w)
        if cell not in cells:
            cells.append(cell)
    return cells


def _independence(m: DsModel) -> ConditionResult:
    representatives = []
    for agent in range(m.agent_count):
        seen: dict[frozenset[str], str] = {}
        for w in m.worlds:
            seen.setdefault(m.cell(agent, w), w)
        representatives.append(list(seen.items()))
    for selection in product(*representatives):
        common = frozenset(m.worlds)
        for cell, _ in selection:
            common &= cell
        if not common:
            witness = tuple(w for _, w in selection)
            return ConditionResult("C2", False, None, witness, "empty intersection")
    return ConditionResult("C2", True)


def _limited_choice(m: DsModel, equivalences: dict[int, bool]) -> ConditionResult:
    k = m.choice_bound
    if k == 0:
        return ConditionResult("C3", True, detail="unlimited choices")
    for agent in range(m.agent_count):
        if equivalences[agent]:
            cells = _choice_cells(m, agent)
            if len(cells) > k:
                witness = tuple(
                    next(w for w in m.worlds if w in cell) for cell in cells[: k + 1]
                )
                return ConditionResult("C3", False, agent, witness, "too many choices")
            continue
        relation = m.choice.get(agent, frozenset())
        for group in combinations(m.worlds, k + 1):
            if not any(
                (u, v) in relation or (v, u) in relation
                for u, v in combinations(group, 2)
            ):
                return ConditionResult("C3", False, agent, group, "unrelated worlds")
    return ConditionResult("C3", True)


def _ideal_conditions(m: DsModel) -> tuple[ConditionResult, ConditionResult]:
    for agent in range(m.agent_count):
        if not m.ideal_worlds(agent):
            non_empty = ConditionResult("D2", False, agent, (), "no ideal world")
            break
    else:
        non_empty = ConditionResult("D2", True)
    order = {w: i for i, w in enumerate(m.worlds)}
    for agent in range(m.agent_count):
        ideal = m.ideal_worlds(agent)
        for w in sorted(ideal, key=order.get):
            for v in sorted(m.cell(agent, w), key=order.get):
                if v not in ideal:
                    return non_empty, ConditionResult(
                        "D3", False, agent, (w, v), "ideal set not closed"
                    )
    return non_empty, ConditionResult("D3", True)


def validate_frame(m: DsModel) -> ConditionReport:
    """Check the frame conditions of a model.

    Args:
        m (DsModel): The model to check.

    Returns:
        ConditionReport: One result per condition, with a witness on failure.

    Raises:
        MalformedModel: If the model mentions unknown worlds or agents.
    """
    check_well_formed(m)
    results: dict[str, ConditionResult] = {}
    equivalences = {}
    first_failure = None
    for agent in range(m.agent_count):
        result = _is_equivalence(m, agent)
        equivalences[agent] = result.passed
        if not result.passed and first_failure is None:
            first_failure = result
    results["C1"] = first_failure or ConditionResult("C1", True)
    results["C2"] = _independence(m)
    results["C3"] = _limited_choice(m, equivalences)
    # Ideal sets were range-checked by check_well_formed.
    results["D1"] = ConditionResult("D1", True)
    results["D2"], results["D3"] = _ideal_conditions(m)
    return ConditionReport(results)
