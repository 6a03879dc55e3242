from bisect import insort
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from ..sequent.disjoint_set import DisjointSet
from ..sequent.sequent import (
    ChoiceAtom,
    Label,
    LabeledFormula,
    LabelOrigin,
    RelAtom,
    Sequent,
    labels_of,
)
from ..syntax.formula import Formula, formula_key, negate


class GenerationTree:
    """Records which label generated which; the substrate for blocking."""

    def __init__(self, root: Label):
        self.root = root
        self.__parent: dict[Label, Label | None] = {root: None}

    def copy(self) -> "GenerationTree":
        clone = GenerationTree(self.root)
        clone.__parent = dict(self.__parent)
        return clone

    def __contains__(self, label: Label) -> bool:
        return label in self.__parent

    @property
    def vertices(self) -> frozenset[Label]:
        return frozenset(self.__parent)

    @property
    def edges(self) -> frozenset[tuple[Label, Label]]:
        return frozenset(
            (parent, child) for child, parent in self.__parent.items() if parent
        )

    def add_child(self, parent: Label, child: Label):
        if parent not in self.__parent:
            raise KeyError(f"{parent} is not in the generation tree")
        if child in self.__parent:
            raise KeyError(f"{child} is already in the generation tree")
        self.__parent[child] = parent

    def parent(self, label: Label) -> Label | None:
        return self.__parent[label]

    def ancestors(self, label: Label) -> Iterator[Label]:
        """Yield the proper ancestors of a label, nearest first."""
        current = self.__parent[label]
        while current is not None:
            yield current
            current = self.__parent[current]

    def is_tree(self) -> bool:
        for label in self.__parent:
            seen = {label}
            for ancestor in self.ancestors(label):
                if ancestor in seen:
                    return False
                seen.add(ancestor)
            if label != self.root and self.root not in seen:
                return False
        return True


@dataclass
class FiringCounts:
    """Per-thread firing counts of the rules applied at most once per target."""

    box: Counter = field(default_factory=Counter)
    ought: Counter = field(default_factory=Counter)
    d2: Counter = field(default_factory=Counter)

    def copy(self) -> "FiringCounts":
        return FiringCounts(Counter(self.box), Counter(self.ought), Counter(self.d2))


class SearchState:
    """The top sequent of a search thread plus its provenance data.

    Atoms and labeled formulas are only ever added. Indexes over them
    (successors, ideal labels, choice classes, formula holders) are kept in
    step with every addition.
    """

    def __init__(self, agents: int, choices: int, loop_check: bool = True):
        self.agents = agents
        self.choices = choices
        self.loop_check = loop_check
        self.root = Label(0, LabelOrigin.ROOT)
        self.tree = GenerationTree(self.root)
        self.labels: list[Label] = []
        self.relations: set[RelAtom] = set()
        self.formulas: set[LabeledFormula] = set()
        self.entries: list[tuple[int, str, LabeledFormula]] = []
        self.by_label: dict[Label, set[Formula]] = {}
        self.holders: dict[Formula, set[Label]] = {}
        self.successors: list[dict[Label, set[Label]]] = [{} for _ in range(agents)]
        self.ideal: list[set[Label]] = [set() for _ in range(agents)]
        self.classes: list[DisjointSet[Label]] = [DisjointSet() for _ in range(agents)]
        # Pending (Euc) instances (agent, w, u, v): R w u and R w v give R u v.
        self.euclid_queue: deque[tuple[int, Label, Label, Label]] = deque()
        self.ioa_sources: dict[Label, tuple[Label, ...]] = {}
        self.clashes: list[LabeledFormula] = []
        self.fresh_counter = 1
        self.firings = FiringCounts()
        self._register(self.root)

    @classmethod
    def initial(
        cls, phi: Formula, agents: int, choices: int, loop_check: bool = True
    ) -> "SearchState":
        """Build the state of the goal sequent with the formula at the root."""
        state = cls(agents, choices, loop_check)
        state.add_formula(state.root, phi)
        return state

    @classmethod
    def from_sequent(
        cls,
        sequent: Sequent,
        agents: int,
        choices: int,
        tree_edges: Iterable[tuple[Label, Label]] = (),
        ioa_sources: dict[Label, tuple[Label, ...]] | None = None,
        loop_check: bool = True,
    ) -> "SearchState":
        """Rebuild a state from a sequent whose root label is w0.

        Args:
            sequent (Sequent): The top sequent.
            agents (int): Number of agents.
            choices (int): Choice bound.
            tree_edges (Iterable[tuple[Label, Label]]): Generation-tree edges,
                parents before children.
            ioa_sources (dict | None): Labels introduced by IoaOp, mapped to
                their per-agent source labels.
            loop_check (bool): Whether blocking is in force.
        """
        state = cls(agents, choices, loop_check)
        ioa_sources = ioa_sources or {}
        for label in sorted(labels_of(sequent)):
            if label != state.root:
                origin = LabelOrigin.BY_IOA if label in ioa_sources else label.origin
                state._register(Label(label.index, origin))
        for parent, child in tree_edges:
            state.tree.add_child(parent, child)
        state.ioa_sources = dict(ioa_sources)
        state.fresh_counter = max(l.index for l in state.labels) + 1
        for atom in sequent.relations:
            state.add_atom(atom)
        for entry in sequent.formulas:
            state.add_formula(entry.label, entry.formula)
        return state

    def copy(self) -> "SearchState":
        clone = SearchState.__new__(SearchState)
        clone.agents = self.agents
        clone.choices = self.choices
        clone.loop_check = self.loop_check
        clone.root = self.root
        clone.tree = self.tree.copy()
        clone.labels = list(self.labels)
        clone.relations = set(self.relations)
        clone.formulas = set(self.formulas)
        clone.entries = list(self.entries)
        clone.by_label = {w: set(fs) for w, fs in self.by_label.items()}
        clone.holders = {phi: set(ws) for phi, ws in self.holders.items()}
        clone.successors = [
            {w: set(us) for w, us in table.items()} for table in self.successors
        ]
        clone.ideal = [set(ws) for ws in self.ideal]
        clone.classes = [c.copy() for c in self.classes]
        clone.euclid_queue = deque(self.euclid_queue)
        clone.ioa_sources = dict(self.ioa_sources)
        clone.clashes = list(self.clashes)
        clone.fresh_counter = self.fresh_counter
        clone.firings = self.firings.copy()
        return clone

    def _register(self, label: Label):
        self.labels.append(label)
        self.by_label[label] = set()
        for i in range(self.agents):
            self.successors[i][label] = set()
            self.classes[i].add(label)

    def new_label(self, origin: LabelOrigin, parent: Label | None = None) -> Label:
        """Create a fresh label, optionally as a generation-tree child."""
        label = Label(self.fresh_counter, origin)
        self.fresh_counter += 1
        self._register(label)
        if parent is not None:
            self.tree.add_child(parent, label)
        return label

    def add_atom(self, atom: RelAtom) -> bool:
        if atom in self.relations:
            return False
        self.relations.add(atom)
        if isinstance(atom, ChoiceAtom):
            i, w, u = atom.agent, atom.source, atom.target
            self.successors[i][w].add(u)
            self.classes[i].union(w, u)
            for v in self.ordered(self.successors[i][w]):
                self.euclid_queue.append((i, w, u, v))
                if v != u:
                    self.euclid_queue.append((i, w, v, u))
        else:
            self.ideal[atom.agent].add(atom.label)
        return True

    def add_formula(self, label: Label, phi: Formula) -> bool:
        entry = LabeledFormula(label, phi)
        if entry in self.formulas:
            return False
        self.formulas.add(entry)
        self.by_label[label].add(phi)
        self.holders.setdefault(phi, set()).add(label)
        insort(self.entries, (label.index, formula_key(phi), entry))
        if negate(phi) in self.by_label[label]:
            self.clashes.append(entry)
        return True

    def has(self, label: Label, phi: Formula) -> bool:
        return phi in self.by_label[label]

    def sequent(self) -> Sequent:
        return Sequent(frozenset(self.relations), frozenset(self.formulas))

    def restrict(self, label: Label) -> frozenset[Formula]:
        return frozenset(self.by_label[label])

    def is_ioa(self, label: Label) -> bool:
        return label in self.ioa_sources

    def ideal_flags(self, label: Label) -> tuple[bool, ...]:
        return tuple(label in self.ideal[i] for i in range(self.agents))

    def related(self, agent: int, w: Label, u: Label) -> bool:
        """Whether w and u are linked by an agent-`agent` path."""
        return w == u or self.classes[agent].connected(w, u)

    def pending_euclid(self) -> tuple[int, Label, Label, Label] | None:
        """Return the oldest (Euc) instance whose conclusion is still missing.

        Instances whose conclusion has been added meanwhile are dropped.
        """
        queue = self.euclid_queue
        while queue:
            i, _, u, v = queue[0]
            if v not in self.successors[i][u]:
                return queue[0]
            queue.popleft()
        return None

    def ordered(self, labels: Iterable[Label]) -> list[Label]:
        return sorted(labels, key=lambda label: label.index)

    def label_count(self) -> int:
        return len(self.labels)
