import json

import pytest

from ratdensity import automata as fa, catalog
from ratdensity.errors import MonoidTooLarge
from ratdensity.monoid import (choose_r_class, eggbox_dot, green_structure, is_aperiodic,
                               j_class_of_shift, transition_monoid)

import oracles


def naive(d):
    table = {(q, a): d.delta[q][k] for q in range(d.n_states)
             for k, a in enumerate(d.alphabet) if d.delta[q][k] is not None}
    maps = oracles.maps_of(table, d.alphabet, d.n_states)
    return oracles.naive_monoid(d.alphabet, maps, d.n_states)


@pytest.mark.parametrize("make, size", [
    (catalog.golden_code_automaton, 6),
    (catalog.abc_code_automaton, 27),
    (catalog.parity_automaton, 19),
    (catalog.rank_one_automaton, 15),
])
def test_monoid_sizes_match_naive_closure(make, size):
    d = make()
    m = transition_monoid(d)
    assert len(m) == size == len(naive(d))


@pytest.mark.parametrize("make", [catalog.golden_code_automaton, catalog.abc_code_automaton,
                                  catalog.parity_automaton, catalog.rank_one_automaton])
def test_green_classes_match_ideal_definition(make):
    d = make()
    m = transition_monoid(d)
    g = green_structure(m)
    R, L, J = oracles.naive_green([s.images for s in m.elements])
    as_sets = lambda classes: {frozenset(m.elements[i].images for i in c) for c in classes}
    assert as_sets(g.r_classes) == R
    assert as_sets(g.l_classes) == L
    assert as_sets(g.j_classes) == J


def test_words_are_shortlex_representatives():
    m = transition_monoid(catalog.parity_automaton())
    for i, w in enumerate(m.words):
        assert m.element_of(w) == i
    assert m.words[0] == ""
    lengths = [len(w) for w in m.words]
    assert lengths == sorted(lengths)


def test_jclass_sizes():
    sizes = lambda d: sorted(len(c) for c in green_structure(transition_monoid(d)).j_classes)
    assert sizes(catalog.rank_one_automaton()) == [1, 1, 4, 9]
    assert sizes(catalog.abc_code_automaton()) == [1, 1, 9, 16]


def test_golden_jx():
    m = transition_monoid(catalog.golden_code_automaton())
    r = j_class_of_shift(m, catalog.fibonacci_shift())
    assert m.element_of("a") in r.j_x
    assert r.d == 1 and r.x_degree == 1


def test_abc_jx_is_three_by_three():
    m = transition_monoid(catalog.abc_code_automaton())
    g = green_structure(m)
    r = j_class_of_shift(m, catalog.abc_orbit(), g)
    assert len(r.j_x) == 9 and r.d == 1 and r.x_degree == 2
    box = g.eggbox(g.j_of[r.j_x[0]])
    assert len(box) == 3 and all(len(row) == 3 for row in box)
    accepting = set(m.accepting_elements()) & set(r.j_x)
    assert len(accepting) == 5


def test_parity_jx_fibonacci():
    m = transition_monoid(catalog.parity_automaton())
    r = j_class_of_shift(m, catalog.fibonacci_shift())
    assert r.d == 2 and len(r.j_x) == 8
    R = choose_r_class(r, m)
    assert sorted(m.words[i] for i in R) == ["a", "aa", "aab", "ab"]
    assert r.horizon_conditional


def test_aperiodicity():
    assert is_aperiodic(transition_monoid(catalog.ab_ba_star()))
    assert not is_aperiodic(transition_monoid(catalog.z2_automaton()))
    assert not is_aperiodic(transition_monoid(catalog.parity_automaton()))


def test_report_json():
    m = transition_monoid(catalog.parity_automaton())
    data = json.loads(j_class_of_shift(m, catalog.fibonacci_shift()).to_json(m))
    assert data["d"] == 2 and data["x_degree"] == 2


def test_eggbox_dot_marks_idempotents():
    g = green_structure(transition_monoid(catalog.parity_automaton()))
    dot = eggbox_dot(g)
    assert dot.startswith("digraph") and "*1<" in dot
    assert "<TD>*a, aa</TD><TD>*ab, aab</TD>" in dot and "<TD>b, bab</TD>" in dot


def test_size_limit():
    d = fa.to_dfa("(a|b)*a(a|b)(a|b)(a|b)", "ab")
    with pytest.raises(MonoidTooLarge):
        transition_monoid(d, max_elements=10)
