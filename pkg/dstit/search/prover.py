import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable

from ..calculus.derivation import Derivation, chain
from ..calculus.rules import RuleApplication, RuleName
from ..calculus.transform import expand_ioa_macros, trim_derivation
from ..params.params import SearchParams
from ..semantics.model import DsModel
from ..sequent.sequent import (
    ChoiceAtom,
    IdealAtom,
    Label,
    LabeledFormula,
    LabelOrigin,
    RelAtom,
    Sequent,
)
from ..syntax.exceptions import AgentOutOfRange
from ..syntax.formula import (
    AgBox,
    AgDia,
    And,
    Box,
    Dia,
    Formula,
    Or,
    Ought,
    Perm,
    agents_of,
    formula_key,
    is_literal,
    negate,
)
from .blocking import UNBLOCKED, block_statuses, is_blocked
from .exceptions import BudgetExhausted, LabelCapExceeded
from .ioa import apply_ioa_op, unsatisfied_tuples
from .stability_model import extract_stability_model
from .state import SearchState

logger = logging.getLogger(__name__)

Mutation = Callable[[SearchState], None]


@dataclass(frozen=True)
class SearchStats:
    """Counters of one prove run.

    Firing counts are the largest seen on any single thread.

    Attributes:
        steps (int): Rule applications performed, over all threads.
        threads (int): Threads driven to a closed or stable top sequent.
        labels_created (int): Fresh labels introduced, over all threads.
        max_labels (int): Largest label count reached on a thread.
        box_firings (dict[str, int]): (Box) firings per boxed formula.
        ought_firings (dict[str, int]): (Ought) firings per "agent:formula".
        d2_firings (dict[int, int]): (D2) firings per agent.
    """

    steps: int = 0
    threads: int = 0
    labels_created: int = 0
    max_labels: int = 0
    box_firings: dict[str, int] = field(default_factory=dict)
    ought_firings: dict[str, int] = field(default_factory=dict)
    d2_firings: dict[int, int] = field(default_factory=dict)

    @property
    def max_firings(self) -> int:
        counts = [
            *self.box_firings.values(),
            *self.ought_firings.values(),
            *self.d2_firings.values(),
        ]
        return max(counts, default=0)


@dataclass(frozen=True)
class Valid:
    proof: Derivation
    stats: SearchStats = field(default_factory=SearchStats)


@dataclass(frozen=True)
class Invalid:
    """A countermodel read off the first stable sequent the search reached."""

    model: DsModel
    world: str
    stable: Sequent
    stats: SearchStats = field(default_factory=SearchStats)


Verdict = Valid | Invalid


@dataclass(frozen=True)
class _Step:
    application: RuleApplication
    branches: tuple[Mutation, ...]


class _View:
    """A search state with its blocking statuses computed on demand."""

    def __init__(self, state: SearchState):
        self.state = state

    @cached_property
    def statuses(self):
        return block_statuses(self.state)

    def unblocked(self, label: Label) -> bool:
        return not is_blocked(self.statuses.get(label, UNBLOCKED))


def __adding(
    atoms: Iterable[RelAtom] = (), formulas: Iterable[LabeledFormula] = ()
) -> Mutation:
    atoms, formulas = tuple(atoms), tuple(formulas)

    def apply(state: SearchState):
        for atom in atoms:
            state.add_atom(atom)
        for entry in formulas:
            state.add_formula(entry.label, entry.formula)

    return apply


def __unary(application: RuleApplication, mutation: Mutation) -> _Step:
    return _Step(application, (mutation,))


def __fresh(state: SearchState, origin: LabelOrigin) -> Label:
    """The label the next call to new_label on this state will return."""
    return Label(state.fresh_counter, origin)


def __ref(view: _View) -> _Step | None:
    state = view.state
    for w in state.labels:
        for i in range(state.agents):
            if w not in state.successors[i][w]:
                return __unary(
                    RuleApplication(RuleName.REF, agent=i, targets=(w,)),
                    __adding(atoms=[ChoiceAtom(i, w, w)]),
                )
    return None


def __euc(view: _View) -> _Step | None:
    pending = view.state.pending_euclid()
    if pending is None:
        return None
    i, w, u, v = pending
    return __unary(
        RuleApplication(
            RuleName.EUC,
            agent=i,
            principal=(ChoiceAtom(i, w, u), ChoiceAtom(i, w, v)),
        ),
        __adding(atoms=[ChoiceAtom(i, u, v)]),
    )


def __d3(view: _View) -> _Step | None:
    state = view.state
    for i in range(state.agents):
        for w in state.ordered(state.ideal[i]):
            for u in state.ordered(state.successors[i][w]):
                if u not in state.ideal[i]:
                    return __unary(
                        RuleApplication(
                            RuleName.D3,
                            agent=i,
                            principal=(IdealAtom(i, w), ChoiceAtom(i, w, u)),
                        ),
                        __adding(atoms=[IdealAtom(i, u)]),
                    )
    return None


def __apc(view: _View) -> _Step | None:
    state = view.state
    k = state.choices
    if k == 0:
        return None
    for i in range(state.agents):
        classes = state.classes[i].classes()
        if len(classes) <= k:
            continue
        labels = sorted(min(c) for c in classes)[: k + 1]
        pairs = [(m, j) for m in range(k) for j in range(m + 1, k + 1)]
        branches = tuple(
            __adding(atoms=[ChoiceAtom(i, labels[m], labels[j])]) for m, j in pairs
        )
        return _Step(
            RuleApplication(RuleName.APC, agent=i, targets=tuple(labels)), branches
        )
    return None


def __or(view: _View) -> _Step | None:
    state = view.state
    for _, _, entry in state.entries:
        w, phi = entry.label, entry.formula
        if isinstance(phi, Or) and not (
            state.has(w, phi.left) and state.has(w, phi.right)
        ):
            return __unary(
                RuleApplication(RuleName.OR, principal=(entry,)),
                __adding(
                    formulas=[LabeledFormula(w, phi.left), LabeledFormula(w, phi.right)]
                ),
            )
    return None


def __and(view: _View) -> _Step | None:
    state = view.state
    for _, _, entry in state.entries:
        w, phi = entry.label, entry.formula
        if isinstance(phi, And) and not (
            state.has(w, phi.left) or state.has(w, phi.right)
        ):
            return _Step(
                RuleApplication(RuleName.AND, principal=(entry,)),
                (
                    __adding(formulas=[LabeledFormula(w, phi.left)]),
                    __adding(formulas=[LabeledFormula(w, phi.right)]),
                ),
            )
    return None


def __dia(view: _View) -> _Step | None:
    state = view.state
    for _, _, entry in state.entries:
        if not isinstance(entry.formula, Dia):
            continue
        body = entry.formula.body
        for u in state.labels:
            if not state.has(u, body):
                return __unary(
                    RuleApplication(RuleName.DIA, principal=(entry,), targets=(u,)),
                    __adding(formulas=[LabeledFormula(u, body)]),
                )
    return None


def __ag_dia(view: _View) -> _Step | None:
    state = view.state
    for _, _, entry in state.entries:
        w, phi = entry.label, entry.formula
        if not isinstance(phi, AgDia):
            continue
        for u in state.ordered(state.successors[phi.agent][w]):
            if not (state.has(u, phi.body) and state.has(u, phi)):
                return __unary(
                    RuleApplication(
                        RuleName.AG_DIA_STAR,
                        principal=(entry, ChoiceAtom(phi.agent, w, u)),
                    ),
                    __adding(
                        formulas=[LabeledFormula(u, phi.body), LabeledFormula(u, phi)]
                    ),
                )
    return None


def __perm(view: _View) -> _Step | None:
    state = view.state
    for _, _, entry in state.entries:
        phi = entry.formula
        if not isinstance(phi, Perm):
            continue
        for u in state.ordered(state.ideal[phi.agent]):
            if not state.has(u, phi.body):
                return __unary(
                    RuleApplication(
                        RuleName.PERM, principal=(entry, IdealAtom(phi.agent, u))
                    ),
                    __adding(formulas=[LabeledFormula(u, phi.body)]),
                )
    return None


def __relabel(state: SearchState, entry: LabeledFormula) -> _Step | None:
    """Copy a box or ought formula to the root, if it is not there yet."""
    if entry.label == state.root or state.has(state.root, entry.formula):
        return None
    rule = RuleName.BOX_STAR if isinstance(entry.formula, Box) else RuleName.OUGHT_STAR
    return __unary(
        RuleApplication(rule, principal=(entry,), targets=(state.root,)),
        __adding(formulas=[LabeledFormula(state.root, entry.formula)]),
    )


def __box_step(state: SearchState, entry: LabeledFormula) -> _Step:
    relabel = __relabel(state, entry)
    if relabel is not None:
        return relabel
    body = entry.formula.body
    fresh = __fresh(state, LabelOrigin.BY_BOX)

    def apply(s: SearchState):
        u = s.new_label(LabelOrigin.BY_BOX, parent=s.root)
        s.add_formula(u, body)
        s.firings.box[body] += 1

    return __unary(
        RuleApplication(
            RuleName.BOX,
            principal=(LabeledFormula(state.root, entry.formula),),
            fresh=(fresh,),
        ),
        apply,
    )


def __ought_step(state: SearchState, entry: LabeledFormula) -> _Step:
    relabel = __relabel(state, entry)
    if relabel is not None:
        return relabel
    i, body = entry.formula.agent, entry.formula.body
    fresh = __fresh(state, LabelOrigin.BY_OUGHT)

    def apply(s: SearchState):
        u = s.new_label(LabelOrigin.BY_OUGHT, parent=s.root)
        s.add_atom(IdealAtom(i, u))
        s.add_formula(u, body)
        s.firings.ought[(i, body)] += 1

    return __unary(
        RuleApplication(
            RuleName.OUGHT,
            principal=(LabeledFormula(state.root, entry.formula),),
            fresh=(fresh,),
        ),
        apply,
    )


def __d2_step(state: SearchState, agent: int) -> _Step:
    fresh = __fresh(state, LabelOrigin.BY_D2)

    def apply(s: SearchState):
        u = s.new_label(LabelOrigin.BY_D2, parent=s.root)
        s.add_atom(IdealAtom(agent, u))
        s.firings.d2[agent] += 1

    return __unary(RuleApplication(RuleName.D2, agent=agent, fresh=(fresh,)), apply)


def __box(view: _View) -> _Step | None:
    state = view.state
    for _, _, entry in state.entries:
        if isinstance(entry.formula, Box) and not state.holders.get(entry.formula.body):
            return __box_step(state, entry)
    return None


def __ought(view: _View) -> _Step | None:
    state = view.state
    for _, _, entry in state.entries:
        phi = entry.formula
        if isinstance(phi, Ought) and not any(
            state.has(u, phi.body) for u in state.ideal[phi.agent]
        ):
            return __ought_step(state, entry)
    return None


def __d2(view: _View) -> _Step | None:
    state = view.state
    for i in range(state.agents):
        if not state.ideal[i]:
            return __d2_step(state, i)
    return None


def __ag_box(view: _View) -> _Step | None:
    state = view.state
    for _, _, entry in state.entries:
        w, phi = entry.label, entry.formula
        if not isinstance(phi, AgBox) or not view.unblocked(w):
            continue
        i, body = phi.agent, phi.body
        if any(state.has(u, body) for u in state.successors[i][w]):
            continue
        if state.is_ioa(w) and state.loop_check:
            source = state.ioa_sources[w][i]
            fresh = __fresh(state, LabelOrigin.BY_AGBOX_STAR)
            application = RuleApplication(
                RuleName.AG_BOX_STAR,
                principal=(entry, ChoiceAtom(i, source, w)),
                fresh=(fresh,),
            )
            origin, parent = LabelOrigin.BY_AGBOX_STAR, source
        else:
            fresh = __fresh(state, LabelOrigin.BY_AGBOX)
            application = RuleApplication(
                RuleName.AG_BOX, principal=(entry,), fresh=(fresh,)
            )
            origin = LabelOrigin.BY_AGBOX
            parent = w if w in state.tree else state.ioa_sources[w][i]
            source = w

        def apply(s: SearchState):
            z = s.new_label(origin, parent=parent)
            s.add_atom(ChoiceAtom(i, source, z))
            s.add_formula(z, body)

        return __unary(application, apply)
    return None


def __ioa(view: _View) -> _Step | None:
    state = view.state
    if state.agents == 1:
        return None
    statuses = view.statuses
    count = len(unsatisfied_tuples(state, statuses))
    if not count:
        return None
    fresh = tuple(
        Label(state.fresh_counter + j, LabelOrigin.BY_IOA) for j in range(count)
    )

    def apply(s: SearchState):
        apply_ioa_op(s, statuses)

    return __unary(RuleApplication(RuleName.IOA_OP_MACRO, fresh=fresh), apply)


def __unblocked_witness(view: _View) -> _Step | None:
    """Fire (Box), (Ought) or (D2) again when only blocked labels witness them."""
    state = view.state
    if not state.loop_check:
        return None
    for _, _, entry in state.entries:
        phi = entry.formula
        if isinstance(phi, Box) and not any(
            view.unblocked(u) for u in state.holders.get(phi.body, ())
        ):
            return __box_step(state, entry)
        if isinstance(phi, Ought) and not any(
            view.unblocked(u) and state.has(u, phi.body)
            for u in state.ideal[phi.agent]
        ):
            return __ought_step(state, entry)
    for i in range(state.agents):
        if not any(view.unblocked(u) for u in state.ideal[i]):
            return __d2_step(state, i)
    return None


# The order in which rules are tried on the top sequent of a thread.
_LINES = (
    __ref,
    __euc,
    __d3,
    __apc,
    __or,
    __and,
    __dia,
    __ag_dia,
    __perm,
    __box,
    __ought,
    __d2,
    __ag_box,
    __ioa,
    __unblocked_witness,
)


def next_step(state: SearchState) -> _Step | None:
    """The first applicable rule instance on an open thread, if any."""
    view = _View(state)
    for line in _LINES:
        step = line(view)
        if step is not None:
            return step
    return None


def _closing_leaf(state: SearchState) -> Derivation:
    entry = state.clashes[0]
    complement = LabeledFormula(entry.label, negate(entry.formula))
    rule = RuleName.ID if is_literal(entry.formula) else RuleName.GEN_ID
    return Derivation(
        state.sequent(),
        RuleApplication(rule, principal=(complement, entry)),
    )


class Prover:
    """Proof search for DS_n^k with loop checking.

    Args:
        agents (int): Number of agents n.
        choices (int): Choice bound k, 0 meaning unlimited.
        params (SearchParams | None): Search settings.
    """

    def __init__(self, agents: int, choices: int, params: SearchParams | None = None):
        if agents < 1:
            raise ValueError("at least one agent is needed")
        if choices < 0:
            raise ValueError("the choice bound cannot be negative")
        self.agents = agents
        self.choices = choices
        self.params = params or SearchParams()
        self.__reset()

    def __reset(self):
        self.__steps = 0
        self.__threads = 0
        self.__labels_created = 0
        self.__max_labels = 0
        self.__box: dict[str, int] = {}
        self.__ought: dict[str, int] = {}
        self.__d2: dict[int, int] = {}

    def __stats(self) -> SearchStats:
        return SearchStats(
            steps=self.__steps,
            threads=self.__threads,
            labels_created=self.__labels_created,
            max_labels=self.__max_labels,
            box_firings=dict(self.__box),
            ought_firings=dict(self.__ought),
            d2_firings=dict(self.__d2),
        )

    def prove(self, phi: Formula) -> Verdict:
        """Decide the validity of a formula.

        Raises:
            AgentOutOfRange: If the formula mentions an agent index >= n.
            LabelCapExceeded: If a thread grows past the label cap.
            BudgetExhausted: If the step budget runs out.

        Returns:
            Verdict: Valid with a derivation of the goal sequent, or Invalid
                with the stability model of the first stable thread.
        """
        used = agents_of(phi)
        if used and max(used) >= self.agents:
            raise AgentOutOfRange(max(used), self.agents)
        self.__reset()
        state = SearchState.initial(phi, self.agents, self.choices, self.params.loop_check)
        result = self.__search(state)
        stats = self.__stats()
        if isinstance(result, Derivation):
            proof = result
            if self.params.trim_proofs:
                proof = trim_derivation(proof)
            if self.params.expand_ioa:
                proof = expand_ioa_macros(proof)
            logger.info("valid after %d steps, proof of %d nodes", stats.steps, proof.size())
            return Valid(proof, stats)
        model, world = extract_stability_model(result)
        logger.info(
            "invalid after %d steps, countermodel of %d worlds",
            stats.steps,
            len(model.worlds),
        )
        return Invalid(model, world, result.sequent(), stats)

    def __finish(self, state: SearchState):
        self.__threads += 1
        self.__max_labels = max(self.__max_labels, state.label_count())
        firings = state.firings
        for phi, count in firings.box.items():
            key = formula_key(phi)
            self.__box[key] = max(self.__box.get(key, 0), count)
        for (agent, phi), count in firings.ought.items():
            key = f"{agent}:{formula_key(phi)}"
            self.__ought[key] = max(self.__ought.get(key, 0), count)
        for agent, count in firings.d2.items():
            self.__d2[agent] = max(self.__d2.get(agent, 0), count)

    def __check_limits(self, state: SearchState):
        if state.label_count() > self.params.label_cap:
            raise LabelCapExceeded(
                f"a thread grew past {self.params.label_cap} labels"
            )
        budget = self.params.step_budget
        if budget and self.__steps > budget:
            raise BudgetExhausted(self.__steps, state.label_count())

    def __search(self, state: SearchState) -> Derivation | SearchState:
        """Expand a thread; return a closed derivation or the stable top state."""
        steps: list[tuple[Sequent, RuleApplication]] = []
        while True:
            if state.clashes:
                self.__finish(state)
                return chain(steps, _closing_leaf(state))
            step = next_step(state)
            if step is None:
                self.__finish(state)
                return state
            self.__steps += 1
            self.__labels_created += len(step.application.fresh)
            logger.debug("step %d: %s", self.__steps, step.application.describe())
            conclusion = state.sequent()
            if len(step.branches) == 1:
                step.branches[0](state)
                self.__check_limits(state)
                steps.append((conclusion, step.application))
                continue
            premises = []
            for branch in step.branches:
                child = state.copy()
                branch(child)
                self.__check_limits(child)
                result = self.__search(child)
                if isinstance(result, SearchState):
                    return result
                premises.append(result)
            return chain(steps, Derivation(conclusion, step.application, tuple(premises)))


def prove(
    phi: Formula, n: int, k: int, params: SearchParams | None = None
) -> Verdict:
    return Prover(n, k, params).prove(phi)
