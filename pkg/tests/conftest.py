import random
from itertools import product
from pathlib import Path

import pytest

from dstit.semantics.model import DsModel
from dstit.syntax.formula import (
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
    complexity,
)

FIXTURES = Path(__file__).parent / "fixtures"

VARIABLES = ("p", "q")
SEED = 20240517


def random_formula(rng: random.Random, agents: int, size: int) -> Formula:
    """Draw a formula with at most `size` connectives and literals."""
    if size <= 1:
        name = rng.choice(VARIABLES)
        return Atom(name) if rng.random() < 0.5 else NegAtom(name)
    kind = rng.choice(("and", "or", "box", "dia", "agbox", "agdia", "ought", "perm"))
    if kind in ("and", "or"):
        left_size = rng.randint(1, max(1, size - 2))
        left = random_formula(rng, agents, left_size)
        right = random_formula(rng, agents, size - 1 - left_size)
        return And(left, right) if kind == "and" else Or(left, right)
    body = random_formula(rng, agents, size - 1)
    agent = rng.randrange(agents)
    match kind:
        case "box":
            return Box(body)
        case "dia":
            return Dia(body)
        case "agbox":
            return AgBox(agent, body)
        case "agdia":
            return AgDia(agent, body)
        case "ought":
            return Ought(agent, body)
    return Perm(agent, body)


def random_corpus(
    count: int, max_complexity: int, seed: int = SEED
) -> list[tuple[Formula, int, int]]:
    """Seeded formulas with their (agents, choice bound) settings."""
    rng = random.Random(seed)
    cases = []
    while len(cases) < count:
        agents = rng.randint(1, 2)
        choices = rng.randint(0, 2)
        phi = random_formula(rng, agents, rng.randint(1, max_complexity))
        if complexity(phi) <= max_complexity:
            cases.append((phi, agents, choices))
    return cases


@pytest.fixture(scope="session")
def random_cases() -> list[tuple[Formula, int, int]]:
    return random_corpus(500, 6)


@pytest.fixture
def bicycle_model() -> DsModel:
    """Four worlds with one choice each; only z is ideal."""
    worlds = ("w", "u", "v", "z")
    return DsModel(
        worlds=worlds,
        choice={0: frozenset((w, w) for w in worlds)},
        ideal={0: frozenset({"z"})},
        valuation={"n": frozenset({"w", "v", "z"}), "f": frozenset({"v"})},
        agent_count=1,
    )


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def random_model(rng: random.Random, agents: int, choices: int = 0) -> DsModel:
    """Draw a model where every combination of choices has one or two worlds.

    Agent i gets up to `choices` cells (two when unlimited) and an ideal
    set made of a nonempty selection of its cells, so the frame conditions
    hold by construction.
    """
    limit = choices or 2
    cell_counts = [rng.randint(1, limit) for _ in range(agents)]
    placements = []
    for combination in product(*(range(c) for c in cell_counts)):
        placements.extend([combination] * rng.randint(1, 2))
    worlds = tuple(f"w{j}" for j in range(len(placements)))
    choice, ideal = {}, {}
    for agent, count in enumerate(cell_counts):
        cells = [
            [w for w, at in zip(worlds, placements) if at[agent] == c]
            for c in range(count)
        ]
        choice[agent] = frozenset(
            pair for cell in cells for pair in product(cell, repeat=2)
        )
        chosen = rng.sample(range(count), rng.randint(1, count))
        ideal[agent] = frozenset(w for c in chosen for w in cells[c])
    valuation = {
        name: frozenset(w for w in worlds if rng.random() < 0.5) for name in VARIABLES
    }
    return DsModel(worlds, choice, ideal, valuation, agents, choices)


@pytest.fixture(scope="session")
def random_triples() -> list[tuple[DsModel, str, Formula]]:
    """Seeded (model, world, formula) triples for semantic property tests."""
    rng = random.Random(SEED)
    triples = []
    for _ in range(1000):
        agents = rng.randint(1, 2)
        model = random_model(rng, agents, rng.randint(0, 2))
        phi = random_formula(rng, agents, rng.randint(1, 6))
        triples.append((model, rng.choice(model.worlds), phi))
    return triples
