import logging

from ..calculus.checker import Session, check_derivation
from ..sequent.sequent import Label, LabeledFormula, Sequent
from ..semantics.model import validate_frame
from ..semantics.oracle import find_countermodel_bounded
from ..semantics.satisfaction import satisfies
from ..syntax.formula import Formula
from .exceptions import OracleDisagreement
from .prover import Invalid, Valid, Verdict

logger = logging.getLogger(__name__)


def cross_check(phi: Formula, verdict: Verdict, n: int, k: int, bound: int):
    """Re-verify a verdict and compare it with the bounded model finder.

    A proof must pass the checker and no model with at most `bound` worlds
    may falsify the formula. A countermodel must satisfy the frame conditions
    and falsify the formula at its root; if it has at most `bound` worlds the
    model finder must find one as well.

    Raises:
        OracleDisagreement: If any of these checks fails.
    """
    if isinstance(verdict, Valid):
        root = Sequent(frozenset(), frozenset({LabeledFormula(Label(0), phi)}))
        result = check_derivation(verdict.proof, root, Session(n, k))
        if not result.ok:
            raise OracleDisagreement(f"the proof does not check: {result.reason}")
        if find_countermodel_bounded(phi, n, k, bound) is not None:
            raise OracleDisagreement(
                f"a countermodel with at most {bound} worlds exists for a valid formula"
            )
        logger.debug("valid verdict agrees with the oracle up to %d worlds", bound)
        return

    assert isinstance(verdict, Invalid)
    report = validate_frame(verdict.model)
    if not report.passed:
        failed = ", ".join(r.name for r in report.failures())
        raise OracleDisagreement(f"the countermodel violates {failed}")
    if satisfies(verdict.model, verdict.world, phi):
        raise OracleDisagreement("the countermodel satisfies the formula at its root")
    if len(verdict.model.worlds) <= bound:
        if find_countermodel_bounded(phi, n, k, bound) is None:
            raise OracleDisagreement(
                f"the oracle finds no countermodel with at most {bound} worlds"
            )
    logger.debug("invalid verdict agrees with the oracle up to %d worlds", bound)
