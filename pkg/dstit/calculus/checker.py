from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable

from ..sequent.sequent import (
    ChoiceAtom,
    IdealAtom,
    Item,
    Label,
    LabeledFormula,
    RelAtom,
    Sequent,
    labels_of,
)
from ..syntax.formula import (
    AgBox,
    AgDia,
    And,
    Box,
    Dia,
    Or,
    Ought,
    Perm,
    agents_of,
    is_literal,
    negate,
)
from .derivation import Derivation
from .rules import LEAF_RULES, RuleApplication, RuleName


@dataclass(frozen=True)
class Session:
    """Calculus parameters a derivation is checked against."""

    agents: int
    choices: int
    expand_genid: bool = False


@dataclass(frozen=True)
class StepCheck:
    ok: bool
    reason: str = ""


@dataclass(frozen=True)
class DerivationCheck:
    """Verdict of a derivation check, with the path of the first failing node."""

    ok: bool
    reason: str = ""
    path: tuple[int, ...] = ()


class _Reject(Exception):
    pass


def _require(condition: bool, reason: str):
    if not condition:
        raise _Reject(reason)


def _premise_count(premises: list[Sequent], count: int):
    _require(
        len(premises) == count,
        f"expected {count} premise(s), found {len(premises)}",
    )


def _principal(
    c: Sequent, app: RuleApplication, kinds: tuple[type, ...]
) -> tuple[Item, ...]:
    _require(
        len(app.principal) == len(kinds),
        f"expected {len(kinds)} principal item(s), found {len(app.principal)}",
    )
    for item, kind in zip(app.principal, kinds):
        _require(isinstance(item, kind), f"principal {item} has the wrong kind")
        _require(item in c.items(), f"principal {item} is not in the conclusion")
    return app.principal


def _principal_formula(c: Sequent, app: RuleApplication, kind: type) -> LabeledFormula:
    (entry,) = _principal(c, app, (LabeledFormula,))
    _require(
        isinstance(entry.formula, kind),
        f"principal {entry} is not a {kind.__name__} formula",
    )
    return entry


def _fresh(c: Sequent, app: RuleApplication, count: int = 1) -> tuple[Label, ...]:
    _require(len(app.fresh) == count, f"expected {count} eigenvariable(s)")
    _require(len(set(app.fresh)) == count, "eigenvariables must be distinct")
    present = labels_of(c)
    for label in app.fresh:
        _require(label not in present, f"eigenvariable {label} occurs in the conclusion")
    return app.fresh


def _targets(app: RuleApplication, count: int) -> tuple[Label, ...]:
    _require(len(app.targets) == count, f"expected {count} target label(s)")
    return app.targets


def _agent(app: RuleApplication) -> int:
    _require(app.agent is not None, "the rule needs an agent")
    return app.agent


def _extends(
    c: Sequent,
    p: Sequent,
    atoms: Iterable[RelAtom] = (),
    formulas: Iterable[LabeledFormula] = (),
    droppable: Iterable[LabeledFormula] = (),
):
    """Check that a premise is the conclusion plus the given additions.

    A droppable principal formula may be absent from the premise.
    """
    atoms, formulas = set(atoms), set(formulas)
    _require(
        p.relations == c.relations | atoms,
        "premise atoms do not match the rule schema",
    )
    expected = c.formulas | formulas
    reduced = (c.formulas - set(droppable)) | formulas
    _require(
        p.formulas == expected or p.formulas == reduced,
        "premise formulas do not match the rule schema",
    )


def _initial(c: Sequent, app: RuleApplication, premises: list[Sequent], s: Session):
    _premise_count(premises, 0)
    first, second = _principal(c, app, (LabeledFormula, LabeledFormula))
    _require(first.label == second.label, "the pair must share a label")
    _require(second.formula == negate(first.formula), "the pair is not complementary")
    if app.rule == RuleName.ID or s.expand_genid:
        _require(is_literal(first.formula), "an initial sequent needs a literal pair")


def _and(c, app, premises, s):
    _premise_count(premises, 2)
    entry = _principal_formula(c, app, And)
    w, phi = entry.label, entry.formula
    _extends(c, premises[0], formulas=[LabeledFormula(w, phi.left)], droppable=[entry])
    _extends(c, premises[1], formulas=[LabeledFormula(w, phi.right)], droppable=[entry])


def _or(c, app, premises, s):
    _premise_count(premises, 1)
    entry = _principal_formula(c, app, Or)
    w, phi = entry.label, entry.formula
    added = [LabeledFormula(w, phi.left), LabeledFormula(w, phi.right)]
    _extends(c, premises[0], formulas=added, droppable=[entry])


def _box(c, app, premises, s):
    _premise_count(premises, 1)
    entry = _principal_formula(c, app, Box)
    (u,) = _fresh(c, app)
    added = [LabeledFormula(u, entry.formula.body)]
    _extends(c, premises[0], formulas=added, droppable=[entry])


def _dia(c, app, premises, s):
    _premise_count(premises, 1)
    entry = _principal_formula(c, app, Dia)
    (u,) = _targets(app, 1)
    _extends(c, premises[0], formulas=[LabeledFormula(u, entry.formula.body)])


def _ag_box(c, app, premises, s):
    _premise_count(premises, 1)
    entry = _principal_formula(c, app, AgBox)
    (u,) = _fresh(c, app)
    i = entry.formula.agent
    _extends(
        c,
        premises[0],
        atoms=[ChoiceAtom(i, entry.label, u)],
        formulas=[LabeledFormula(u, entry.formula.body)],
        droppable=[entry],
    )


def _ag_dia(c, app, premises, s):
    _premise_count(premises, 1)
    entry, atom = _principal(c, app, (LabeledFormula, ChoiceAtom))
    _require(isinstance(entry.formula, AgDia), f"principal {entry} is not an AgDia formula")
    i = entry.formula.agent
    _require(
        atom.agent == i and atom.source == entry.label,
        f"atom {atom} does not leave {entry.label} for agent {i}",
    )
    added = [LabeledFormula(atom.target, entry.formula.body)]
    if app.rule == RuleName.AG_DIA_STAR:
        added.append(LabeledFormula(atom.target, entry.formula))
    _extends(c, premises[0], formulas=added)


def _ought(c, app, premises, s):
    _premise_count(premises, 1)
    entry = _principal_formula(c, app, Ought)
    (u,) = _fresh(c, app)
    _extends(
        c,
        premises[0],
        atoms=[IdealAtom(entry.formula.agent, u)],
        formulas=[LabeledFormula(u, entry.formula.body)],
        droppable=[entry],
    )


def _perm(c, app, premises, s):
    _premise_count(premises, 1)
    entry, atom = _principal(c, app, (LabeledFormula, IdealAtom))
    _require(isinstance(entry.formula, Perm), f"principal {entry} is not a Perm formula")
    _require(atom.agent == entry.formula.agent, "ideal atom of the wrong agent")
    _extends(c, premises[0], formulas=[LabeledFormula(atom.label, entry.formula.body)])


def _ref(c, app, premises, s):
    _premise_count(premises, 1)
    (w,) = _targets(app, 1)
    _extends(c, premises[0], atoms=[ChoiceAtom(_agent(app), w, w)])


def _choice_principal(c, app, count) -> tuple[ChoiceAtom, ...]:
    atoms = _principal(c, app, (ChoiceAtom,) * count)
    i = _agent(app)
    _require(all(a.agent == i for a in atoms), "principal atoms of the wrong agent")
    return atoms


def _euc(c, app, premises, s):
    _premise_count(premises, 1)
    first, second = _choice_principal(c, app, 2)
    _require(first.source == second.source, "Euclideanity needs a common source")
    _extends(c, premises[0], atoms=[ChoiceAtom(first.agent, first.target, second.target)])


def _sym(c, app, premises, s):
    _premise_count(premises, 1)
    (atom,) = _choice_principal(c, app, 1)
    _extends(c, premises[0], atoms=[ChoiceAtom(atom.agent, atom.target, atom.source)])


def _tra(c, app, premises, s):
    _premise_count(premises, 1)
    first, second = _choice_principal(c, app, 2)
    _require(first.target == second.source, "transitivity needs a shared label")
    _extends(c, premises[0], atoms=[ChoiceAtom(first.agent, first.source, second.target)])


def _d2(c, app, premises, s):
    _premise_count(premises, 1)
    (u,) = _fresh(c, app)
    _extends(c, premises[0], atoms=[IdealAtom(_agent(app), u)])


def _d3(c, app, premises, s):
    _premise_count(premises, 1)
    ideal, choice = _principal(c, app, (IdealAtom, ChoiceAtom))
    i = _agent(app)
    _require(ideal.agent == i and choice.agent == i, "principal atoms of the wrong agent")
    _require(choice.source == ideal.label, "the choice atom must leave the ideal label")
    _extends(c, premises[0], atoms=[IdealAtom(i, choice.target)])


def _ioa(c, app, premises, s):
    _premise_count(premises, 1)
    sources = _targets(app, s.agents)
    (u,) = _fresh(c, app)
    added = [ChoiceAtom(i, w, u) for i, w in enumerate(sources)]
    _extends(c, premises[0], atoms=added)


def _apc(c, app, premises, s):
    _require(s.choices > 0, "APC only exists for a positive choice bound")
    k = s.choices
    i = _agent(app)
    labels = _targets(app, k + 1)
    pairs = [(m, j) for m in range(k) for j in range(m + 1, k + 1)]
    _premise_count(premises, len(pairs))
    for (m, j), premise in zip(pairs, premises):
        _extends(c, premise, atoms=[ChoiceAtom(i, labels[m], labels[j])])


def _relabel(kind: type) -> Callable:
    def check(c, app, premises, s):
        _premise_count(premises, 1)
        entry = _principal_formula(c, app, kind)
        (w,) = _targets(app, 1)
        added = [LabeledFormula(w, entry.formula)]
        _extends(c, premises[0], formulas=added, droppable=[entry])

    return check


def _ag_box_star(c, app, premises, s):
    _premise_count(premises, 1)
    entry, atom = _principal(c, app, (LabeledFormula, ChoiceAtom))
    _require(isinstance(entry.formula, AgBox), f"principal {entry} is not an AgBox formula")
    i = entry.formula.agent
    _require(
        atom.agent == i and atom.target == entry.label,
        f"atom {atom} does not reach {entry.label} for agent {i}",
    )
    (v,) = _fresh(c, app)
    _extends(
        c,
        premises[0],
        atoms=[ChoiceAtom(i, atom.source, v)],
        formulas=[LabeledFormula(v, entry.formula.body)],
        droppable=[entry],
    )


def _weakening(c, app, premises, s):
    _premise_count(premises, 1)
    p = premises[0]
    _require(
        p.relations <= c.relations and p.formulas <= c.formulas,
        "the premise is not contained in the conclusion",
    )


def _rename(item: Item, old: Label, new: Label) -> Item:
    def swap(label: Label) -> Label:
        return new if label == old else label

    if isinstance(item, ChoiceAtom):
        return ChoiceAtom(item.agent, swap(item.source), swap(item.target))
    if isinstance(item, IdealAtom):
        return IdealAtom(item.agent, swap(item.label))
    return LabeledFormula(swap(item.label), item.formula)


def _substitution(c, app, premises, s):
    _premise_count(premises, 1)
    _require(app.substitution is not None, "Sub needs a substitution")
    w, u = app.substitution
    p = premises[0]
    renamed = {_rename(item, u, w) for item in p.items()}
    _require(renamed == set(c.items()), "the conclusion is not the renamed premise")


def _ioa_macro(c, app, premises, s):
    _premise_count(premises, 1)
    p = premises[0]
    _require(p.formulas == c.formulas, "IoaOp adds no formulas")
    _require(c.relations <= p.relations, "IoaOp deletes no atoms")
    added = p.relations - c.relations
    _require(bool(added), "IoaOp adds at least one label")
    present = labels_of(c)
    groups: dict[Label, dict[int, Label]] = defaultdict(dict)
    for atom in added:
        _require(isinstance(atom, ChoiceAtom), f"{atom} is not a choice atom")
        _require(atom.target not in present, f"{atom.target} is not fresh")
        _require(atom.source in present, f"{atom.source} does not occur below")
        _require(atom.agent not in groups[atom.target], f"two atoms for {atom.target}")
        groups[atom.target][atom.agent] = atom.source
    for label, sources in groups.items():
        _require(len(sources) == s.agents, f"{label} lacks an atom for some agent")
    _require(set(groups) == set(app.fresh), "eigenvariables do not match the atoms")


def _original_sources(c: Sequent, premise: Sequent, ioa_labels: frozenset[Label]):
    for atom in premise.relations - c.relations:
        _require(
            atom.source not in ioa_labels,
            f"{atom.source} was introduced by IoaOp and cannot be a source",
        )


_HANDLERS: dict[RuleName, Callable] = {
    RuleName.ID: _initial,
    RuleName.GEN_ID: _initial,
    RuleName.AND: _and,
    RuleName.OR: _or,
    RuleName.BOX: _box,
    RuleName.DIA: _dia,
    RuleName.AG_BOX: _ag_box,
    RuleName.AG_DIA: _ag_dia,
    RuleName.AG_DIA_STAR: _ag_dia,
    RuleName.OUGHT: _ought,
    RuleName.PERM: _perm,
    RuleName.REF: _ref,
    RuleName.EUC: _euc,
    RuleName.SYM: _sym,
    RuleName.TRA: _tra,
    RuleName.D2: _d2,
    RuleName.D3: _d3,
    RuleName.IOA: _ioa,
    RuleName.APC: _apc,
    RuleName.BOX_STAR: _relabel(Box),
    RuleName.OUGHT_STAR: _relabel(Ought),
    RuleName.AG_BOX_STAR: _ag_box_star,
    RuleName.WK: _weakening,
    RuleName.SUB: _substitution,
    RuleName.IOA_OP_MACRO: _ioa_macro,
}


def _agents_in_range(app: RuleApplication, agents: int):
    if app.agent is not None:
        _require(0 <= app.agent < agents, f"agent {app.agent} out of range")
    for item in app.principal:
        if isinstance(item, LabeledFormula):
            used = agents_of(item.formula)
        else:
            used = {item.agent}
        _require(all(a < agents for a in used), f"{item} uses an unknown agent")


def check_step(
    conclusion: Sequent,
    application: RuleApplication,
    premises: list[Sequent],
    session: Session,
    ioa_labels: frozenset[Label] = frozenset(),
) -> StepCheck:
    """Check one rule application against its schema.

    Args:
        conclusion (Sequent): The conclusion of the step.
        application (RuleApplication): The rule and its instantiation data.
        premises (list[Sequent]): The premises, in schema order.
        session (Session): Agent count, choice bound and leaf policy.
        ioa_labels (frozenset[Label]): Labels introduced by IoaOp or (IOA)
            below the step; IoaOp may not use them as sources.

    Returns:
        StepCheck: The verdict, with a diagnostic when the step is rejected.
    """
    handler = _HANDLERS.get(application.rule)
    if handler is None:
        return StepCheck(False, f"rule {application.rule} cannot be checked")
    try:
        _agents_in_range(application, session.agents)
        handler(conclusion, application, premises, session)
        if application.rule == RuleName.IOA_OP_MACRO:
            _original_sources(conclusion, premises[0], ioa_labels)
    except _Reject as e:
        return StepCheck(False, f"{application}: {e}")
    return StepCheck(True)


def check_derivation(
    d: Derivation, claimed_root: Sequent, session: Session
) -> DerivationCheck:
    """Check a whole derivation and its end sequent.

    Args:
        d (Derivation): The derivation.
        claimed_root (Sequent): The sequent the derivation must prove.
        session (Session): Agent count, choice bound and leaf policy.

    Returns:
        DerivationCheck: The verdict with the first failing node path.
    """
    if d.conclusion != claimed_root:
        return DerivationCheck(False, "the end sequent differs from the claimed root")
    stack: list[tuple[tuple[int, ...], Derivation, frozenset[Label]]] = [
        ((), d, frozenset())
    ]
    while stack:
        path, node, ioa_labels = stack.pop()
        if not node.premises and node.rule not in LEAF_RULES:
            return DerivationCheck(False, f"open leaf {node.application}", path)
        verdict = check_step(
            node.conclusion,
            node.application,
            [p.conclusion for p in node.premises],
            session,
            ioa_labels,
        )
        if not verdict.ok:
            return DerivationCheck(False, verdict.reason, path)
        if node.rule in (RuleName.IOA, RuleName.IOA_OP_MACRO):
            ioa_labels = ioa_labels | frozenset(node.application.fresh)
        for index in reversed(range(len(node.premises))):
            stack.append((path + (index,), node.premises[index], ioa_labels))
    return DerivationCheck(True)
