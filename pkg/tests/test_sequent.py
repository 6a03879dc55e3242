import random

import pytest

from dstit.sequent.disjoint_set import DisjointSet
from dstit.sequent.exceptions import ItemSyntaxError
from dstit.sequent.sequent import (
    ChoiceAtom,
    IdealAtom,
    Label,
    LabeledFormula,
    LabelOrigin,
    Sequent,
    labels_of,
    parse_atom,
    parse_item,
    restrict,
    ri_path,
)
from dstit.syntax.formula import AgBox, Atom, Ought

w0, w1, w2, w3 = (Label(i) for i in range(4))


def test_disjoint_set_merges_classes():
    classes: DisjointSet[int] = DisjointSet()
    for x in range(5):
        classes.add(x)
    assert classes.union(0, 1)
    assert classes.union(3, 4)
    assert not classes.union(1, 0)
    assert classes.connected(0, 1)
    assert not classes.connected(1, 3)
    assert classes.classes() == [[0, 1], [2], [3, 4]]


def test_disjoint_set_copy_is_independent():
    classes: DisjointSet[int] = DisjointSet()
    classes.union(0, 1)
    clone = classes.copy()
    clone.union(1, 2)
    assert clone.connected(0, 2)
    assert not classes.connected(0, 2)


def test_label_equality_ignores_origin():
    assert Label(3, LabelOrigin.BY_IOA) == Label(3)
    assert str(Label(3)) == "w3"
    assert Label.parse("w12") == Label(12)
    with pytest.raises(ItemSyntaxError):
        Label.parse("x1")


def test_rendering():
    s = Sequent(
        frozenset({ChoiceAtom(0, w0, w1), IdealAtom(1, w1)}),
        frozenset({LabeledFormula(w1, AgBox(0, Atom("p")))}),
    )
    assert str(s) == "R[0] w0 w1, I[1] w1 => w1 : [0] p"


def test_labels_and_restriction():
    gamma = {LabeledFormula(w0, Atom("p")), LabeledFormula(w2, Atom("q"))}
    s = Sequent(frozenset({ChoiceAtom(0, w0, w1)}), frozenset(gamma))
    assert labels_of(s) == frozenset({w0, w1, w2})
    assert restrict(gamma, w2) == frozenset({Atom("q")})
    assert restrict(gamma, w1) == frozenset()


def test_extend_and_without():
    entry = LabeledFormula(w0, Atom("p"))
    atom = IdealAtom(0, w0)
    s = Sequent().extend([atom], [entry])
    assert s.items() == frozenset({atom, entry})
    assert s.without([atom]) == Sequent(frozenset(), frozenset({entry}))


def test_ri_path_follows_undirected_choice_atoms():
    relations = [ChoiceAtom(0, w0, w1), ChoiceAtom(0, w2, w1), ChoiceAtom(1, w2, w3)]
    assert ri_path(relations, 0, w0, w2)
    assert ri_path(relations, 0, w3, w3)
    assert not ri_path(relations, 0, w0, w3)
    assert ri_path(relations, 1, w3, w2)


def test_parse_items():
    assert parse_atom("R[1] w0 w2", 2) == ChoiceAtom(1, w0, w2)
    assert parse_atom("I[0] w3", 1) == IdealAtom(0, w3)
    assert parse_item("w1 : O[0] p", 1) == LabeledFormula(w1, Ought(0, Atom("p")))
    with pytest.raises(ItemSyntaxError):
        parse_atom("R[2] w0 w1", 2)
    with pytest.raises(ItemSyntaxError):
        parse_item("S w0", 1)


def equivalence_closure(relations, agent, labels) -> set[tuple[Label, Label]]:
    pairs = {(w, w) for w in labels}
    for atom in relations:
        if isinstance(atom, ChoiceAtom) and atom.agent == agent:
            pairs |= {(atom.source, atom.target), (atom.target, atom.source)}
    while True:
        joined = {(w, v) for w, u in pairs for x, v in pairs if u == x}
        if joined <= pairs:
            return pairs
        pairs |= joined


def test_ri_path_agrees_with_the_equivalence_closure():
    rng = random.Random(20240517)
    labels = [Label(i) for i in range(6)]
    for _ in range(200):
        relations = [
            ChoiceAtom(rng.randrange(2), rng.choice(labels), rng.choice(labels))
            for _ in range(rng.randint(0, 6))
        ]
        relations.append(IdealAtom(0, rng.choice(labels)))
        for agent in range(2):
            closure = equivalence_closure(relations, agent, labels)
            for w in labels:
                for u in labels:
                    assert ri_path(relations, agent, w, u) == ((w, u) in closure)
