import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from ..sequent.exceptions import ItemSyntaxError
from ..sequent.sequent import (
    Label,
    LabeledFormula,
    Sequent,
    atom_key,
    labeled_key,
    parse_atom,
    parse_item,
    parse_labeled_formula,
)
from ..syntax.exceptions import AgentOutOfRange, FormulaSyntaxError
from .derivation import Derivation
from .exceptions import CertificateError
from .rules import RuleApplication, RuleName

CERTIFICATE_FORMAT = "dstit-proof"
CERTIFICATE_VERSION = 1


@dataclass(frozen=True)
class ProofCertificate:
    """A derivation together with the claim and calculus it was produced for."""

    derivation: Derivation
    agents: int
    choices: int
    formula: str
    root: Sequent


def sequent_to_dict(s: Sequent) -> dict[str, list[str]]:
    return {
        "relations": [str(a) for a in sorted(s.relations, key=atom_key)],
        "formulas": [str(f) for f in sorted(s.formulas, key=labeled_key)],
    }


def sequent_from_dict(data: dict, agents: int) -> Sequent:
    relations = frozenset(parse_atom(text, agents) for text in data["relations"])
    formulas = frozenset(
        parse_labeled_formula(text, agents) for text in data["formulas"]
    )
    return Sequent(relations, formulas)


def _application_to_dict(app: RuleApplication) -> dict[str, Any]:
    return {
        "name": app.rule.value,
        "agent": app.agent,
        "principal": [str(item) for item in app.principal],
        "targets": [str(label) for label in app.targets],
        "fresh": [str(label) for label in app.fresh],
        "substitution": (
            [str(label) for label in app.substitution] if app.substitution else None
        ),
    }


def _application_from_dict(data: dict, agents: int) -> RuleApplication:
    substitution = data.get("substitution")
    if substitution is not None:
        w, u = (Label.parse(text) for text in substitution)
        substitution = (w, u)
    return RuleApplication(
        rule=RuleName.parse(data["name"]),
        agent=data.get("agent"),
        principal=tuple(parse_item(text, agents) for text in data.get("principal", [])),
        targets=tuple(Label.parse(text) for text in data.get("targets", [])),
        fresh=tuple(Label.parse(text) for text in data.get("fresh", [])),
        substitution=substitution,
    )


def certificate_to_dict(certificate: ProofCertificate) -> dict[str, Any]:
    """Encode a certificate with its derivation as a flat, preorder node list."""
    nodes = []
    ids: dict[int, int] = {}
    walk = [node for _, node in certificate.derivation.walk()]
    for index, node in enumerate(walk):
        ids[id(node)] = index
    for node in walk:
        nodes.append(
            {
                "id": ids[id(node)],
                "sequent": sequent_to_dict(node.conclusion),
                "rule": _application_to_dict(node.application),
                "premises": [ids[id(p)] for p in node.premises],
            }
        )
    return {
        "format": CERTIFICATE_FORMAT,
        "version": CERTIFICATE_VERSION,
        "agents": certificate.agents,
        "choices": certificate.choices,
        "formula": certificate.formula,
        "root": sequent_to_dict(certificate.root),
        "nodes": nodes,
    }


def certificate_from_dict(data: dict) -> ProofCertificate:
    """Decode a certificate.

    Raises:
        CertificateError: If the data does not describe a derivation tree.
        UnknownRule: If a node names a rule outside the calculus.
    """
    if data.get("format") != CERTIFICATE_FORMAT:
        raise CertificateError("not a proof certificate")
    try:
        agents = int(data["agents"])
        choices = int(data["choices"])
        root = sequent_from_dict(data["root"], agents)
        records = {int(node["id"]): node for node in data["nodes"]}
        built: dict[int, Derivation] = {}
        used: set[int] = set()
        for node_id in sorted(records, reverse=True):
            record = records[node_id]
            premises = []
            for premise_id in record["premises"]:
                if premise_id <= node_id or premise_id not in built:
                    raise CertificateError(f"node {node_id} has a bad premise reference")
                if premise_id in used:
                    raise CertificateError(f"node {premise_id} is shared")
                used.add(premise_id)
                premises.append(built[premise_id])
            built[node_id] = Derivation(
                sequent_from_dict(record["sequent"], agents),
                _application_from_dict(record["rule"], agents),
                tuple(premises),
            )
        if 0 not in built:
            raise CertificateError("the certificate has no root node")
    except (KeyError, TypeError, ValueError) as e:
        raise CertificateError(f"malformed certificate: {e}")
    except (ItemSyntaxError, FormulaSyntaxError, AgentOutOfRange) as e:
        raise CertificateError(f"malformed certificate entry: {e}")
    return ProofCertificate(built[0], agents, choices, data.get("formula", ""), root)


def write_certificate(certificate: ProofCertificate, path: str | Path):
    Path(path).write_text(
        json.dumps(certificate_to_dict(certificate), indent=1, sort_keys=True) + "\n"
    )


def read_certificate(path: str | Path) -> ProofCertificate:
    """Read a proof certificate file.

    Raises:
        CertificateError: If the file is missing, empty or malformed.
    """
    try:
        text = Path(path).read_text().strip()
    except FileNotFoundError:
        raise CertificateError(f"{path} does not exist.")
    if not text:
        raise CertificateError(f"{path} is empty.")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise CertificateError(f"{path} is not valid JSON: {e}")
    return certificate_from_dict(data)


def root_sequent(formula_entry: LabeledFormula) -> Sequent:
    return Sequent(frozenset(), frozenset({formula_entry}))
