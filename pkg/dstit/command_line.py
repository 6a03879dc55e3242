import argparse
import json
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from .calculus.certificate import (
    ProofCertificate,
    read_certificate,
    root_sequent,
    write_certificate,
)
from .calculus.checker import Session, check_derivation
from .calculus.exceptions import CertificateError, UnknownRule
from .params.exceptions import (
    InvalidParameter,
    OracleConfigNotFound,
    OutputConfigNotFound,
    SearchConfigNotFound,
    TomlNotFound,
    TomlNotValid,
)
from .params.params import OUTPUT_MODES, Params, SearchParams
from .search.cross_check import cross_check
from .search.exceptions import (
    BudgetExhausted,
    LabelCapExceeded,
    OracleDisagreement,
    UnstableState,
)
from .search.prover import Invalid, Valid, Verdict, prove
from .semantics.exceptions import (
    IncompleteInterpretation,
    MalformedModel,
    ModelFileError,
    UnknownWorld,
)
from .semantics.model import validate_frame
from .semantics.model_io import dump_model, load_model, model_to_dict, to_dot
from .semantics.satisfaction import satisfies
from .sequent.sequent import Label, LabeledFormula
from .syntax.exceptions import AgentOutOfRange, FormulaSyntaxError
from .syntax.formula import Formula, print_formula
from .syntax.parser import parse
from .tasks.exceptions import KnowledgeBaseError
from .tasks.knowledge_base import load_knowledge_base
from .tasks.normative import (
    TaskVerdict,
    compliance_check,
    duty_check,
    joint_fulfillment_check,
)
from .utils.report_utils import model_lines, proof_lines, stats_to_dict
from .utils.text_styling_utils import Styler

config_file = Path(__file__).parent / "config.toml"
params = Params.from_toml(config_file)

COMMANDS = [
    "prove",
    "check-proof",
    "check-model",
    "mc",
    "duty",
    "comply",
    "fulfill",
]

# Exit code 2: the input or the configuration could not be used.
INPUT_ERRORS = (
    TomlNotFound,
    TomlNotValid,
    SearchConfigNotFound,
    OracleConfigNotFound,
    OutputConfigNotFound,
    InvalidParameter,
    FormulaSyntaxError,
    AgentOutOfRange,
    ModelFileError,
    MalformedModel,
    UnknownWorld,
    IncompleteInterpretation,
    CertificateError,
    KnowledgeBaseError,
)

# Exit code 3: the run failed without reaching a verdict.
INTERNAL_ERRORS = (
    LabelCapExceeded,
    BudgetExhausted,
    OracleDisagreement,
    UnstableState,
)


class UsageError(Exception):
    """Usage error.

    Exception raised when a command is missing an argument it needs.
    """


@dataclass
class RunConfig:
    """Settings of one command run, after command-line overrides.

    Attributes:
        agents (int): Number of agents n.
        choices (int): Choice bound k, 0 meaning unlimited.
        output_mode (str): "human" or "structured".
        certificate_path (Path | None): Where to write the certificate.
        dot_path (Path | None): Where to write a DOT rendering of a countermodel.
        trace (bool): Whether applied rules are logged to stderr.
        color (bool): Whether human output is coloured.
        oracle_bound (int): World bound of the cross-check, 0 to skip it.
        expand_genid (bool): Whether check-proof only accepts literal leaves.
        search (SearchParams): Proof-search settings.
    """

    agents: int
    choices: int
    output_mode: str
    certificate_path: Path | None
    dot_path: Path | None
    trace: bool
    color: bool
    oracle_bound: int
    expand_genid: bool
    search: SearchParams


class Report:
    """Collects a command's output as text lines and as structured data."""

    def __init__(self, config: RunConfig, command: str):
        self.config = config
        self.lines: list[str] = []
        self.data: dict = {"command": command}
        self.styler = Styler(config.color and config.output_mode == "human")

    def line(self, text: str):
        self.lines.append(text)

    def formula(self, text: str) -> str:
        return self.styler.formula(text)

    def verdict(self, word: str, positive: bool) -> str:
        return self.styler.verdict(word, positive)

    def emit(self):
        if self.config.output_mode == "structured":
            print(json.dumps(self.data, sort_keys=True, indent=1))
        else:
            print("\n".join(self.lines))


def _run_config(args: argparse.Namespace) -> RunConfig:
    base = Params.from_toml(Path(args.config)) if args.config else params
    search = base.search
    if args.label_cap is not None:
        search = replace(search, label_cap=args.label_cap)
    if args.budget is not None:
        search = replace(search, step_budget=args.budget)
    if args.no_loopcheck:
        search = replace(search, loop_check=False)
    if args.no_trim:
        search = replace(search, trim_proofs=False)
    if args.expand_ioa:
        search = replace(search, expand_ioa=True)
    if search.label_cap < 1 or search.step_budget < 0:
        raise InvalidParameter("the label cap must be positive and the budget natural.")
    if args.agents < 1:
        raise InvalidParameter("--agents must be at least 1.")
    if args.choices < 0:
        raise InvalidParameter("--choices cannot be negative.")
    return RunConfig(
        agents=args.agents,
        choices=args.choices,
        output_mode=args.out or base.output.mode,
        certificate_path=Path(args.cert) if args.cert else None,
        dot_path=Path(args.dot) if args.dot else None,
        trace=args.trace,
        color=base.output.color and not args.no_color,
        oracle_bound=(
            args.oracle_bound if args.oracle_bound is not None else base.oracle.bound
        ),
        expand_genid=args.expand_genid,
        search=search,
    )


def _write_certificate(
    verdict: Verdict, phi: Formula, n: int, k: int, config: RunConfig
) -> str | None:
    if isinstance(verdict, Invalid) and config.dot_path is not None:
        config.dot_path.write_text(to_dot(verdict.model, verdict.world))
    path = config.certificate_path
    if path is None:
        return None
    if isinstance(verdict, Valid):
        entry = LabeledFormula(Label(0), phi)
        certificate = ProofCertificate(
            verdict.proof, n, k, print_formula(phi), root_sequent(entry)
        )
        write_certificate(certificate, path)
    else:
        dump_model(verdict.model, path, formula=print_formula(phi), root=verdict.world)
    return str(path)


def _report_verdict(report: Report, verdict: Verdict, certificate: str | None):
    report.data["stats"] = stats_to_dict(verdict.stats)
    report.data["certificate"] = certificate
    if isinstance(verdict, Valid):
        report.data["proof"] = {
            "nodes": verdict.proof.size(),
            "rules": sorted(rule.value for rule in verdict.proof.rules_used()),
        }
        report.lines.extend(proof_lines(verdict.proof))
    else:
        report.data["model"] = model_to_dict(verdict.model)
        report.data["world"] = verdict.world
        report.lines.extend(model_lines(verdict.model, verdict.world))
    if certificate is not None:
        report.line(f"certificate: {report.styler.path(certificate)}")


def _decide(phi: Formula, n: int, k: int, config: RunConfig) -> Verdict:
    verdict = prove(phi, n, k, config.search)
    if config.oracle_bound:
        cross_check(phi, verdict, n, k, config.oracle_bound)
    return verdict


def cmd_prove(args: argparse.Namespace, config: RunConfig) -> int:
    phi = parse(args.argument, config.agents)
    verdict = _decide(phi, config.agents, config.choices, config)
    valid = isinstance(verdict, Valid)
    report = Report(config, "prove")
    report.data.update(
        {
            "formula": print_formula(phi),
            "agents": config.agents,
            "choices": config.choices,
            "verdict": "valid" if valid else "invalid",
        }
    )
    word = report.verdict("VALID" if valid else "INVALID", valid)
    report.line(f"{word} {report.formula(print_formula(phi))}")
    certificate = _write_certificate(verdict, phi, config.agents, config.choices, config)
    _report_verdict(report, verdict, certificate)
    report.emit()
    return 0 if valid else 1


def cmd_check_proof(args: argparse.Namespace, config: RunConfig) -> int:
    report = Report(config, "check-proof")
    report.data["path"] = args.argument
    try:
        certificate = read_certificate(args.argument)
    except UnknownRule as e:
        report.data.update({"verified": False, "reason": str(e)})
        report.line(f"{report.verdict('REJECTED', False)} {e}")
        report.emit()
        return 1
    session = Session(certificate.agents, certificate.choices, config.expand_genid)
    reason = ""
    if certificate.formula:
        phi = parse(certificate.formula, certificate.agents, allow_reserved=True)
        if certificate.root != root_sequent(LabeledFormula(Label(0), phi)):
            reason = "the root sequent does not match the formula"
    if not reason:
        result = check_derivation(certificate.derivation, certificate.root, session)
        if not result.ok:
            path = ".".join(map(str, result.path)) or "root"
            reason = f"at node {path}: {result.reason}"
    verified = not reason
    report.data.update({"verified": verified, "reason": reason or None})
    report.data["formula"] = certificate.formula
    if verified:
        report.line(f"{report.verdict('VERIFIED', True)} {report.formula(certificate.formula)}")
    else:
        report.line(f"{report.verdict('REJECTED', False)} {reason}")
    report.emit()
    return 0 if verified else 1


def _model_query(args: argparse.Namespace):
    model, extras = load_model(args.argument)
    text = args.formula or extras.get("formula")
    if not text:
        raise UsageError("no formula given and the model file records none.")
    world = args.world or extras.get("root")
    if not world:
        raise UsageError("no world given and the model file records no root.")
    return model, parse(text, model.agent_count, allow_reserved=True), world


def cmd_check_model(args: argparse.Namespace, config: RunConfig) -> int:
    model, phi, world = _model_query(args)
    frame = validate_frame(model)
    falsified = not satisfies(model, world, phi)
    verified = frame.passed and falsified
    report = Report(config, "check-model")
    report.data.update(
        {
            "formula": print_formula(phi),
            "world": world,
            "conditions": {r.name: r.passed for r in frame.results.values()},
            "falsified": falsified,
            "verified": verified,
        }
    )
    word = "VERIFIED" if verified else "REJECTED"
    report.line(f"{report.verdict(word, verified)} {report.formula(print_formula(phi))} at {world}")
    for result in frame.results.values():
        status = "ok" if result.passed else f"fails ({result.detail})"
        report.line(f"{result.name}: {status}")
    report.line(f"falsified at {world}: {'yes' if falsified else 'no'}")
    report.emit()
    return 0 if verified else 1


def cmd_mc(args: argparse.Namespace, config: RunConfig) -> int:
    model, phi, world = _model_query(args)
    holds = satisfies(model, world, phi)
    report = Report(config, "mc")
    report.data.update({"formula": print_formula(phi), "world": world, "holds": holds})
    report.line("true" if holds else "false")
    report.emit()
    return 0 if holds else 1


def cmd_task(args: argparse.Namespace, config: RunConfig) -> int:
    kb = load_knowledge_base(args.argument)
    search = config.search
    if args.command == "fulfill":
        verdict = joint_fulfillment_check(kb, search)
    else:
        if not args.formula:
            raise UsageError(f"{args.command} needs --formula.")
        if not 0 <= args.agent < kb.agent_count:
            raise AgentOutOfRange(args.agent, kb.agent_count)
        phi = parse(args.formula, kb.agent_count)
        check = duty_check if args.command == "duty" else compliance_check
        verdict = check(kb, args.agent, phi, search)
    if config.oracle_bound:
        cross_check(
            verdict.question, verdict.verdict, kb.agent_count, kb.choice_bound,
            config.oracle_bound,
        )
    return _report_task(config, args.command, verdict, kb.agent_count, kb.choice_bound)


def _report_task(
    config: RunConfig, command: str, verdict: TaskVerdict, n: int, k: int
) -> int:
    report = Report(config, command)
    report.data.update(
        {
            "question": print_formula(verdict.question),
            "answer": verdict.answer,
            "summary": verdict.summary,
            "agents": n,
            "choices": k,
        }
    )
    report.line(f"question: {report.formula(print_formula(verdict.question))}")
    report.line(report.verdict(verdict.summary, verdict.answer))
    certificate = _write_certificate(verdict.verdict, verdict.question, n, k, config)
    _report_verdict(report, verdict.verdict, certificate)
    report.emit()
    return 0 if verdict.answer else 1


def _attach_trace() -> logging.Handler:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger = logging.getLogger("dstit")
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG)
    return handler


def _detach_trace(handler: logging.Handler):
    logger = logging.getLogger("dstit")
    logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)


def _build_parser() -> argparse.ArgumentParser:
    arg_parser = argparse.ArgumentParser(
        prog="dstit",
        description="Decides validity in the deontic STIT logics DS_n^k.",
        formatter_class=argparse.RawTextHelpFormatter,
    )

    arg_parser.add_argument(
        "command",
        choices=COMMANDS,
        help=(
            "Specify the command to execute. Options are:\n"
            "  - prove: Decides a formula and prints VALID or INVALID.\n"
            "  - check-proof: Verifies a proof certificate.\n"
            "  - check-model: Verifies a countermodel file against --formula at --world.\n"
            "  - mc: Evaluates --formula on a model file at --world.\n"
            "  - duty: Checks whether --formula is a duty of --agent under a knowledge base.\n"
            "  - comply: Checks whether --formula by --agent complies with a knowledge base.\n"
            "  - fulfill: Checks whether a knowledge base can be jointly fulfilled."
        ),
    )
    arg_parser.add_argument(
        "argument",
        help="The formula for prove, otherwise the path of the input file.",
    )
    arg_parser.add_argument("--formula", help="Formula for check-model, mc, duty and comply.")
    arg_parser.add_argument("--world", help="World for check-model and mc.")
    arg_parser.add_argument(
        "--agent", type=int, default=0, help="Agent for duty and comply (default 0)."
    )
    arg_parser.add_argument(
        "--agents",
        type=int,
        default=1,
        help="Number of agents n for prove (default 1).\n"
        "Knowledge bases and certificates carry their own.",
    )
    arg_parser.add_argument(
        "--choices",
        type=int,
        default=0,
        help="Choice bound k for prove, 0 meaning unlimited (default 0).",
    )
    arg_parser.add_argument("--out", choices=OUTPUT_MODES, help="Output mode.")
    arg_parser.add_argument(
        "--cert",
        help="Write the certificate here: a JSON proof or a TOML countermodel.",
    )
    arg_parser.add_argument("--dot", help="Write a DOT rendering of a countermodel here.")
    arg_parser.add_argument(
        "--trace", action="store_true", help="Log every applied rule to stderr."
    )
    arg_parser.add_argument("--label-cap", type=int, help="Largest label count per thread.")
    arg_parser.add_argument(
        "--oracle-bound",
        type=int,
        help="Cross-check verdicts with the bounded model finder up to N worlds.",
    )
    arg_parser.add_argument(
        "--no-loopcheck",
        action="store_true",
        help="Disable blocking. Only meant for reproducing divergent runs;\n"
        "combine with --budget.",
    )
    arg_parser.add_argument("--budget", type=int, help="Step budget of the search.")
    arg_parser.add_argument("--no-trim", action="store_true", help="Keep unused proof steps.")
    arg_parser.add_argument(
        "--expand-ioa",
        action="store_true",
        help="Write IoaOp macro steps as single (IOA) steps.",
    )
    arg_parser.add_argument(
        "--expand-genid",
        action="store_true",
        help="In check-proof, only accept initial sequents on literals.",
    )
    arg_parser.add_argument("--config", help="Use this configuration file.")
    arg_parser.add_argument("--no-color", action="store_true", help="Disable colours.")
    return arg_parser


def main(argv: list[str] | None = None):
    """Run the main entry point of the application.

    Exit codes are 0 for the positive answer of a command, 1 for the negative
    one, 2 when the input or configuration is unusable, and 3 when a run
    fails without a verdict.
    """
    args = _build_parser().parse_args(argv)
    handler = _attach_trace() if args.trace else None
    try:
        config = _run_config(args)
        if args.command == "prove":
            code = cmd_prove(args, config)
        elif args.command == "check-proof":
            code = cmd_check_proof(args, config)
        elif args.command == "check-model":
            code = cmd_check_model(args, config)
        elif args.command == "mc":
            code = cmd_mc(args, config)
        else:
            code = cmd_task(args, config)
    except INPUT_ERRORS + (UsageError,) as e:
        print(f"Error: {e}")
        sys.exit(2)
    except INTERNAL_ERRORS as e:
        print(f"Internal error: {e}")
        sys.exit(3)
    finally:
        if handler is not None:
            _detach_trace(handler)
    sys.exit(code)


if __name__ == "__main__":
    main()
