import json

import pytest

from dstit.calculus.certificate import (
    ProofCertificate,
    certificate_to_dict,
    read_certificate,
    root_sequent,
    write_certificate,
)
from dstit.calculus.checker import Session, check_derivation, check_step
from dstit.calculus.derivation import Derivation
from dstit.calculus.exceptions import CertificateError, UnknownRule
from dstit.calculus.rules import RuleApplication, RuleName
from dstit.calculus.transform import expand_ioa_macros, trim_derivation
from dstit.sequent.sequent import ChoiceAtom, Label, LabeledFormula, Sequent
from dstit.syntax.formula import AgBox, AgDia, Atom, NegAtom, Or

w0, w1 = Label(0), Label(1)
p, not_p = Atom("p"), NegAtom("p")
EXCLUDED_MIDDLE = LabeledFormula(w0, Or(p, not_p))
ONE_AGENT = Session(1, 0)


def sequent(*entries, relations=()) -> Sequent:
    return Sequent(frozenset(relations), frozenset(entries))


def id_leaf(s: Sequent, label: Label = w0) -> Derivation:
    principal = (LabeledFormula(label, not_p), LabeledFormula(label, p))
    return Derivation(s, RuleApplication(RuleName.ID, principal=principal))


def excluded_middle_proof(with_ref: bool = False) -> Derivation:
    """Proof of w0 : p | ~p, optionally with an unused reflexivity step first."""
    top = sequent(EXCLUDED_MIDDLE, LabeledFormula(w0, p), LabeledFormula(w0, not_p))
    or_step = RuleApplication(RuleName.OR, principal=(EXCLUDED_MIDDLE,))
    if not with_ref:
        return Derivation(sequent(EXCLUDED_MIDDLE), or_step, (id_leaf(top),))
    reflexive = ChoiceAtom(0, w0, w0)
    top = Sequent(frozenset({reflexive}), top.formulas)
    middle = sequent(EXCLUDED_MIDDLE, relations=[reflexive])
    ref_step = RuleApplication(RuleName.REF, agent=0, targets=(w0,))
    return Derivation(
        sequent(EXCLUDED_MIDDLE),
        ref_step,
        (Derivation(middle, or_step, (id_leaf(top),)),),
    )


def test_excluded_middle_checks():
    proof = excluded_middle_proof()
    result = check_derivation(proof, sequent(EXCLUDED_MIDDLE), ONE_AGENT)
    assert result.ok
    assert proof.size() == 2
    assert proof.rules_used() == {RuleName.OR, RuleName.ID}


def test_wrong_root_is_rejected():
    result = check_derivation(
        excluded_middle_proof(), sequent(LabeledFormula(w0, p)), ONE_AGENT
    )
    assert not result.ok


def test_open_leaf_is_rejected():
    leaf = Derivation(
        sequent(EXCLUDED_MIDDLE),
        RuleApplication(RuleName.OR, principal=(EXCLUDED_MIDDLE,)),
    )
    result = check_derivation(leaf, sequent(EXCLUDED_MIDDLE), ONE_AGENT)
    assert not result.ok
    assert "open leaf" in result.reason


def test_bad_premise_reports_the_node_path():
    top = sequent(EXCLUDED_MIDDLE, LabeledFormula(w0, p), LabeledFormula(w0, not_p))
    bad = Derivation(
        sequent(EXCLUDED_MIDDLE),
        RuleApplication(RuleName.OR, principal=(EXCLUDED_MIDDLE,)),
        (Derivation(top, RuleApplication(RuleName.ID, principal=(EXCLUDED_MIDDLE,))),),
    )
    result = check_derivation(bad, sequent(EXCLUDED_MIDDLE), ONE_AGENT)
    assert not result.ok
    assert result.path == (0,)


def test_or_may_drop_its_principal():
    premise = sequent(LabeledFormula(w0, p), LabeledFormula(w0, not_p))
    step = RuleApplication(RuleName.OR, principal=(EXCLUDED_MIDDLE,))
    assert check_step(sequent(EXCLUDED_MIDDLE), step, [premise], ONE_AGENT).ok
    assert not check_step(
        sequent(EXCLUDED_MIDDLE), step, [sequent(LabeledFormula(w0, p))], ONE_AGENT
    ).ok


def test_general_initial_sequents():
    box = LabeledFormula(w0, AgBox(0, not_p))
    dia = LabeledFormula(w0, AgDia(0, p))
    c = sequent(box, dia)
    app = RuleApplication(RuleName.GEN_ID, principal=(box, dia))
    assert check_step(c, app, [], ONE_AGENT).ok
    assert not check_step(c, app, [], Session(1, 0, expand_genid=True)).ok
    literal_only = RuleApplication(RuleName.ID, principal=app.principal)
    assert not check_step(c, literal_only, [], ONE_AGENT).ok


def test_ag_box_needs_a_fresh_label():
    entry = LabeledFormula(w0, AgBox(0, p))
    c = sequent(entry, LabeledFormula(w1, not_p))
    premise = sequent(
        entry, LabeledFormula(w1, not_p), LabeledFormula(w1, p),
        relations=[ChoiceAtom(0, w0, w1)],
    )
    stale = RuleApplication(RuleName.AG_BOX, principal=(entry,), fresh=(w1,))
    assert not check_step(c, stale, [premise], ONE_AGENT).ok
    w2 = Label(2)
    fresh = RuleApplication(RuleName.AG_BOX, principal=(entry,), fresh=(w2,))
    good = sequent(
        entry, LabeledFormula(w1, not_p), LabeledFormula(w2, p),
        relations=[ChoiceAtom(0, w0, w2)],
    )
    assert check_step(c, fresh, [good], ONE_AGENT).ok


def test_apc_branches_per_pair():
    c = sequent(EXCLUDED_MIDDLE)
    app = RuleApplication(RuleName.APC, agent=0, targets=(w0, w1))
    premise = sequent(EXCLUDED_MIDDLE, relations=[ChoiceAtom(0, w0, w1)])
    assert check_step(c, app, [premise], Session(1, 1)).ok
    assert not check_step(c, app, [premise], ONE_AGENT).ok
    w2 = Label(2)
    three = RuleApplication(RuleName.APC, agent=0, targets=(w0, w1, w2))
    premises = [
        sequent(EXCLUDED_MIDDLE, relations=[ChoiceAtom(0, a, b)])
        for a, b in ((w0, w1), (w0, w2), (w1, w2))
    ]
    assert check_step(c, three, premises, Session(1, 2)).ok
    assert not check_step(c, three, premises[::-1], Session(1, 2)).ok


def test_agent_out_of_range_is_rejected():
    app = RuleApplication(RuleName.REF, agent=1, targets=(w0,))
    premise = sequent(EXCLUDED_MIDDLE, relations=[ChoiceAtom(1, w0, w0)])
    assert not check_step(sequent(EXCLUDED_MIDDLE), app, [premise], ONE_AGENT).ok
    assert check_step(sequent(EXCLUDED_MIDDLE), app, [premise], Session(2, 0)).ok


def test_trim_drops_unused_steps():
    proof = excluded_middle_proof(with_ref=True)
    assert proof.rules_used() == {RuleName.REF, RuleName.OR, RuleName.ID}
    trimmed = trim_derivation(proof)
    assert trimmed.rules_used() == {RuleName.OR, RuleName.ID}
    assert check_derivation(trimmed, sequent(EXCLUDED_MIDDLE), ONE_AGENT).ok


def test_ioa_macro_expands_into_single_steps():
    two_agents = Session(2, 0)
    c = sequent(LabeledFormula(w0, p), LabeledFormula(w0, not_p))
    atoms = [ChoiceAtom(0, w0, w1), ChoiceAtom(1, w0, w1)]
    top = Sequent(frozenset(atoms), c.formulas)
    macro = Derivation(
        c,
        RuleApplication(RuleName.IOA_OP_MACRO, fresh=(w1,)),
        (id_leaf(top),),
    )
    assert check_derivation(macro, c, two_agents).ok
    expanded = expand_ioa_macros(macro)
    assert expanded.rules_used() == {RuleName.IOA, RuleName.ID}
    assert expanded.application.targets == (w0, w0)
    assert check_derivation(expanded, c, two_agents).ok


def stacked_ioa_macros(second_sources: tuple[Label, Label]) -> Derivation:
    w2 = Label(2)
    c = sequent(LabeledFormula(w0, p), LabeledFormula(w0, not_p))
    first = [ChoiceAtom(0, w0, w1), ChoiceAtom(1, w0, w1)]
    second = [ChoiceAtom(i, w, w2) for i, w in enumerate(second_sources)]
    middle = Sequent(frozenset(first), c.formulas)
    top = Sequent(frozenset(first + second), c.formulas)
    upper = Derivation(
        middle,
        RuleApplication(RuleName.IOA_OP_MACRO, fresh=(w2,)),
        (id_leaf(top),),
    )
    return Derivation(c, RuleApplication(RuleName.IOA_OP_MACRO, fresh=(w1,)), (upper,))


def test_ioa_macro_sources_precede_ioa_labels():
    two_agents = Session(2, 0)
    root = sequent(LabeledFormula(w0, p), LabeledFormula(w0, not_p))
    assert check_derivation(stacked_ioa_macros((w0, w0)), root, two_agents).ok
    result = check_derivation(stacked_ioa_macros((w1, w0)), root, two_agents)
    assert not result.ok
    assert result.path == (0,)
    assert "w1 was introduced by IoaOp" in result.reason


def test_certificate_file_round_trip(tmp_path):
    path = tmp_path / "proof.json"
    root = root_sequent(EXCLUDED_MIDDLE)
    write_certificate(
        ProofCertificate(excluded_middle_proof(), 1, 0, "p | ~p", root), path
    )
    certificate = read_certificate(path)
    assert certificate.root == root
    assert certificate.formula == "p | ~p"
    assert certificate.derivation.size() == 2
    assert check_derivation(certificate.derivation, root, ONE_AGENT).ok


def test_unknown_rule_in_certificate(tmp_path):
    data = certificate_to_dict(
        ProofCertificate(
            excluded_middle_proof(), 1, 0, "p | ~p", root_sequent(EXCLUDED_MIDDLE)
        )
    )
    data["nodes"][0]["rule"]["name"] = "Cut"
    path = tmp_path / "proof.json"
    path.write_text(json.dumps(data))
    with pytest.raises(UnknownRule):
        read_certificate(path)


def test_broken_certificates(tmp_path):
    with pytest.raises(CertificateError):
        read_certificate(tmp_path / "missing.json")
    empty = tmp_path / "empty.json"
    empty.write_text("")
    with pytest.raises(CertificateError):
        read_certificate(empty)
    other = tmp_path / "other.json"
    other.write_text('{"format": "something else"}')
    with pytest.raises(CertificateError):
        read_certificate(other)
