from dstit.calculus.checker import Session, check_derivation
from dstit.calculus.certificate import root_sequent
from dstit.params.params import SearchParams
from dstit.search.prover import Invalid, Valid, prove
from dstit.semantics.model import validate_frame
from dstit.semantics.oracle import find_countermodel_bounded
from dstit.semantics.satisfaction import satisfies
from dstit.sequent.sequent import Label, LabeledFormula
from dstit.syntax.formula import print_formula


def test_every_verdict_carries_a_certificate(random_cases):
    for phi, n, k in random_cases:
        verdict = prove(phi, n, k)
        text = print_formula(phi)
        if isinstance(verdict, Valid):
            root = root_sequent(LabeledFormula(Label(0), phi))
            result = check_derivation(verdict.proof, root, Session(n, k))
            assert result.ok, f"{text} (n={n}, k={k}): {result.reason}"
        else:
            assert isinstance(verdict, Invalid)
            assert validate_frame(verdict.model).passed, text
            assert not satisfies(verdict.model, verdict.world, phi), text


def test_verdicts_agree_with_the_bounded_oracle(random_cases):
    for phi, n, k in random_cases:
        verdict = prove(phi, n, k)
        text = f"{print_formula(phi)} (n={n}, k={k})"
        if isinstance(verdict, Invalid):
            bound = max(len(verdict.model.worlds), 4)
            assert find_countermodel_bounded(phi, n, k, bound) is not None, text
        else:
            assert find_countermodel_bounded(phi, n, k, 4) is None, text


def test_generating_rules_fire_once_per_target(random_cases):
    cap = SearchParams().label_cap
    for phi, n, k in random_cases:
        stats = prove(phi, n, k).stats
        text = print_formula(phi)
        assert stats.max_firings <= 1, text
        assert all(count <= 1 for count in stats.box_firings.values()), text
        assert all(count <= 1 for count in stats.ought_firings.values()), text
        assert all(count <= 1 for count in stats.d2_firings.values()), text
        assert stats.max_labels < cap, text
