"""Bundled automata, shifts and measures used by the tests and the CLI.

State 0 is always the initial state.  Automata drawn as partial maps are
flagged with ``treat_sink_as_undefined`` so their transition monoids
contain the empty map as a zero.
"""

from __future__ import annotations

from fractions import Fraction as F

from .automata import Dfa, to_dfa
from .shift import FullShift, PeriodicOrbit, Substitution


def golden_code_automaton() -> Dfa:
    """Two states; minimal automaton of {a, ba}*."""
    return Dfa.from_transitions("ab", 2, 0, {0},
                                [(0, "a", 0), (0, "b", 1), (1, "a", 0)],
                                treat_sink_as_undefined=True)


def abc_code_automaton() -> Dfa:
    """Four states; minimal automaton of {a, bc, cab}*."""
    return Dfa.from_transitions("abc", 4, 0, {0},
                                [(0, "a", 0), (0, "b", 1), (1, "c", 0),
                                 (0, "c", 2), (2, "a", 3), (3, "b", 0)],
                                treat_sink_as_undefined=True)


def parity_automaton() -> Dfa:
    """Three states; recognizes {aa, aba, b}* with state 0 initial and final."""
    return Dfa.from_transitions("ab", 3, 0, {0},
                                [(0, "b", 0), (0, "a", 1), (1, "a", 0),
                                 (1, "b", 2), (2, "a", 0)],
                                treat_sink_as_undefined=True)


def rank_one_automaton() -> Dfa:
    """Three states 1, 2, 3 (ids 0, 1, 2) with 1 -a-> 2 -b-> 1 -b-> 3 -a-> 1.

    Its transition monoid has J-classes of sizes 1, 4, 9 and 1.
    """
    return Dfa.from_transitions("ab", 3, 0, {0},
                                [(0, "a", 1), (1, "b", 0), (0, "b", 2), (2, "a", 0)],
                                treat_sink_as_undefined=True)


def z2_automaton(alphabet="ab", odd="a") -> Dfa:
    """Parity of the number of letters from ``odd``; state 0 = even."""
    trans = []
    for q in (0, 1):
        for a in alphabet:
            trans.append((q, a, 1 - q if a in odd else q))
    return Dfa.from_transitions(alphabet, 2, 0, {0}, trans)


def abc_parity_automaton() -> Dfa:
    """Parity of the number of b's and c's over {a, b, c}."""
    return z2_automaton("abc", odd="bc")


def fibonacci_shift(horizon=2**16) -> Substitution:
    return Substitution({"a": "ab", "b": "a"}, horizon)


def thue_morse_shift(horizon=2**16) -> Substitution:
    return Substitution({"a": "ab", "b": "ba"}, horizon)


def abc_orbit() -> PeriodicOrbit:
    return PeriodicOrbit("abc")


def ab_orbit() -> PeriodicOrbit:
    """X = {(ab)^∞, (ba)^∞}."""
    return PeriodicOrbit("ab")


def full_shift(alphabet="ab") -> FullShift:
    return FullShift(alphabet)


def ab_ba_star() -> Dfa:
    return to_dfa("(ab|ba)*", "ab")


def three_state_projection_data():
    """(v, M, letter map) of the three-state chain projected by 1->a, 2,3->b."""
    v = [F(1, 3)] * 3
    M = [[F(0), F(2, 3), F(1, 3)],
         [F(2, 3), F(1, 3), F(0)],
         [F(1, 3), F(0), F(2, 3)]]
    return v, M, {0: "a", 1: "b", 2: "b"}
