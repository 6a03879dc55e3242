from pathlib import Path
from typing import Any

import toml

from .exceptions import ModelFileError
from .model import DsModel


def _world_list(value: Any, where: str) -> frozenset[str]:
    if not isinstance(value, list) or not all(isinstance(w, str) for w in value):
        raise ModelFileError(f"{where} must be a list of world identifiers")
    return frozenset(value)


def _agent_key(key: str, where: str) -> int:
    try:
        return int(key)
    except ValueError:
        raise ModelFileError(f"{where} key {key!r} is not an agent index")


def model_from_dict(data: dict) -> DsModel:
    """Build a model from the decoded content of a model file.

    Args:
        data (dict): Mapping with keys `agents`, `choices`, `worlds`, `rel`,
            `ideal` and `val`.

    Returns:
        DsModel: The model, not yet validated against the frame conditions.

    Raises:
        ModelFileError: If a field is missing or has the wrong shape.
    """
    for required in ("agents", "worlds", "rel", "ideal"):
        if required not in data:
            raise ModelFileError(f"model file lacks the '{required}' field")
    agents = data["agents"]
    choices = data.get("choices", 0)
    if not isinstance(agents, int) or not isinstance(choices, int):
        raise ModelFileError("'agents' and 'choices' must be integers")
    worlds = data["worlds"]
    if not isinstance(worlds, list) or not all(isinstance(w, str) for w in worlds):
        raise ModelFileError("'worlds' must be a list of world identifiers")
    for table in ("rel", "ideal", "val"):
        if not isinstance(data.get(table, {}), dict):
            raise ModelFileError(f"'{table}' must be a table")

    choice = {}
    for key, pairs in data["rel"].items():
        agent = _agent_key(key, "rel")
        if not isinstance(pairs, list) or not all(
            isinstance(p, list) and len(p) == 2 for p in pairs
        ):
            raise ModelFileError(f"rel.{key} must be a list of world pairs")
        choice[agent] = frozenset((str(p[0]), str(p[1])) for p in pairs)
    ideal = {
        _agent_key(key, "ideal"): _world_list(worlds_, f"ideal.{key}")
        for key, worlds_ in data["ideal"].items()
    }
    valuation = {
        name: _world_list(worlds_, f"val.{name}")
        for name, worlds_ in data.get("val", {}).items()
    }
    return DsModel(tuple(worlds), choice, ideal, valuation, agents, choices)


def model_to_dict(model: DsModel) -> dict:
    order = {w: i for i, w in enumerate(model.worlds)}

    def ordered(worlds: frozenset[str]) -> list[str]:
        return sorted(worlds, key=order.get)

    return {
        "agents": model.agent_count,
        "choices": model.choice_bound,
        "worlds": list(model.worlds),
        "rel": {
            str(agent): [
                list(p)
                for p in sorted(pairs, key=lambda p: (order[p[0]], order[p[1]]))
            ]
            for agent, pairs in sorted(model.choice.items())
        },
        "ideal": {
            str(agent): ordered(worlds) for agent, worlds in sorted(model.ideal.items())
        },
        "val": {name: ordered(worlds) for name, worlds in sorted(model.valuation.items())},
    }


def load_model(path: str | Path) -> tuple[DsModel, dict]:
    """Read a model file.

    Args:
        path (str | Path): Path to the TOML model file.

    Returns:
        tuple[DsModel, dict]: The model and the optional certificate fields
            (`formula`, `root`) found at top level.

    Raises:
        ModelFileError: If the file is missing, invalid, or incomplete.
    """
    try:
        data = toml.load(path)
    except FileNotFoundError:
        raise ModelFileError(f"{path} does not exist.")
    except toml.decoder.TomlDecodeError as e:
        raise ModelFileError(f"{path} is not a valid model file: {e}")
    extras = {key: data[key] for key in ("formula", "root") if key in data}
    return model_from_dict(data), extras


def dump_model(
    model: DsModel,
    path: str | Path,
    formula: str | None = None,
    root: str | None = None,
):
    """Write a model file, optionally recording the falsified claim."""
    data: dict[str, Any] = {}
    if formula is not None:
        data["formula"] = formula
    if root is not None:
        data["root"] = root
    data.update(model_to_dict(model))
    Path(path).write_text(toml.dumps(data))


AGENT_COLORS = ["blue", "red", "darkgreen", "orange", "purple"]


def to_dot(model: DsModel, root: str | None = None) -> str:
    """Render a model in Graphviz DOT.

    Choice cells are drawn as undirected chains per agent, ideal worlds are
    double circles, and each world lists the variables true at it.
    """
    lines = ["graph model {", "  node [shape=circle];"]
    for w in model.worlds:
        true_vars = sorted(v for v in model.valuation if model.holds(v, w))
        ideal_for = [str(a) for a in sorted(model.ideal) if w in model.ideal[a]]
        label = w
        if true_vars:
            label += "\\n" + ", ".join(true_vars)
        if ideal_for:
            label += "\\nideal " + ",".join(ideal_for)
        shape = "doublecircle" if ideal_for else "circle"
        style = ", style=bold" if w == root else ""
        lines.append(f'  "{w}" [label="{label}", shape={shape}{style}];')
    for agent in range(model.agent_count):
        color = AGENT_COLORS[agent % len(AGENT_COLORS)]
        seen: set[str] = set()
        for w in model.worlds:
            if w in seen:
                continue
            cell = [u for u in model.worlds if u in model.cell(agent, w)]
            seen.update(cell)
            for u, v in zip(cell, cell[1:]):
                lines.append(f'  "{u}" -- "{v}" [color={color}, label="R{agent}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
