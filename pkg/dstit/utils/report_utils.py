from ..calculus.derivation import Derivation
from ..search.prover import SearchStats
from ..semantics.model import DsModel


def model_lines(model: DsModel, root: str | None = None) -> list[str]:
    """Describe a model in a few lines: worlds, choice cells, ideals, valuation."""
    order = {w: i for i, w in enumerate(model.worlds)}

    def listed(worlds) -> str:
        return "{" + ", ".join(sorted(worlds, key=order.get)) + "}"

    marker = f" (root {root})" if root is not None else ""
    lines = [f"worlds: {listed(model.worlds)}{marker}"]
    for agent in range(model.agent_count):
        cells = []
        seen: set[str] = set()
        for w in model.worlds:
            if w not in seen:
                cell = model.cell(agent, w)
                seen |= cell
                cells.append(listed(cell))
        lines.append(f"choices of agent {agent}: {' '.join(cells)}")
        lines.append(f"ideal for agent {agent}: {listed(model.ideal_worlds(agent))}")
    for name in sorted(model.valuation):
        lines.append(f"{name} holds at: {listed(model.valuation[name])}")
    return lines


def proof_lines(proof: Derivation) -> list[str]:
    rules = sorted(rule.value for rule in proof.rules_used())
    return [f"proof: {proof.size()} nodes", f"rules: {', '.join(rules)}"]


def stats_to_dict(stats: SearchStats) -> dict:
    return {
        "steps": stats.steps,
        "threads": stats.threads,
        "labels_created": stats.labels_created,
        "max_labels": stats.max_labels,
        "max_firings": stats.max_firings,
    }
