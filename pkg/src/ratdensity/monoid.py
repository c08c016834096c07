"""Transition monoids, Green's relations and the J-class of a shift.

Elements are partial maps on the states of an automaton, acting on the
right: the map of a word ``uv`` is "first u, then v".  Elements are
numbered in shortlex order of their shortest representative word, so the
identity is always element 0.

Green's relations are read off the Cayley graphs: s R t iff s and t are
mutually reachable by right multiplication, symmetrically for L, and J is
mutual reachability in the union of both graphs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import automata as fa
from .automata import Dfa
from .errors import MonoidTooLarge, NoUsableRClass, NotIrreducible, UndecidedAtHorizon
from .numeric import strongly_connected

DEFAULT_MAX_ELEMENTS = 10**6


@dataclass(frozen=True)
class PartialTransformation:
    """Partial map on ``range(len(images))``; ``None`` means undefined."""

    images: tuple

    @property
    def arity(self) -> int:
        return len(self.images)

    def __call__(self, q):
        return None if q is None else self.images[q]

    def then(self, other: "PartialTransformation") -> "PartialTransformation":
        """Apply self, then other."""
        img = other.images
        return PartialTransformation(tuple(None if q is None else img[q] for q in self.images))

    @property
    def rank(self) -> int:
        return len({q for q in self.images if q is not None})

    @property
    def is_empty(self) -> bool:
        return all(q is None for q in self.images)

    def __str__(self):
        return "[" + " ".join("-" if q is None else str(q) for q in self.images) + "]"


class TransitionMonoid:
    """Finite monoid generated by one partial map per symbol."""

    def __init__(self, alphabet, generators: Iterable[PartialTransformation],
                 max_elements: int = DEFAULT_MAX_ELEMENTS, dfa: Dfa | None = None,
                 state_map=None):
        self.alphabet = tuple(alphabet)
        gens = list(generators)
        if len(gens) != len(self.alphabet):
            raise ValueError("one generator per symbol is required")
        self.dfa = dfa
        self.state_map = state_map  # dfa state -> monoid state (or None)
        n = gens[0].arity if gens else (dfa.n_states if dfa else 0)
        ident = PartialTransformation(tuple(range(n)))
        self.elements: list[PartialTransformation] = [ident]
        self.words: list[str] = [""]
        self.index: dict[PartialTransformation, int] = {ident: 0}
        self.right: list[list[int]] = []
        i = 0
        while i < len(self.elements):
            s = self.elements[i]
            row = []
            for k, g in enumerate(gens):
                t = s.then(g)
                j = self.index.get(t)
                if j is None:
                    if len(self.elements) >= max_elements:
                        raise MonoidTooLarge(f"more than {max_elements} elements")
                    j = len(self.elements)
                    self.index[t] = j
                    self.elements.append(t)
                    self.words.append(self.words[i] + self.alphabet[k])
                row.append(j)
            self.right.append(row)
            i += 1
        self.generators = {a: self.right[0][k] for k, a in enumerate(self.alphabet)}
        self.left = [[self.index[g.then(s)] for g in gens] for s in self.elements]

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"TransitionMonoid({len(self)} elements over {''.join(self.alphabet)!r})"

    @property
    def identity(self) -> int:
        return 0

    def mul(self, i: int, j: int) -> int:
        """Product s_i s_j, walking the right Cayley graph along j's word."""
        for a in self.words[j]:
            i = self.right[i][self.alphabet.index(a)]
        return i

    def element_of(self, word: str) -> int:
        i = 0
        for a in word:
            i = self.right[i][self.alphabet.index(a)]
        return i

    def rank(self, i: int) -> int:
        return self.elements[i].rank

    def is_idempotent(self, i: int) -> bool:
        return self.mul(i, i) == i

    def power(self, i: int, k: int) -> int:
        r = 0
        for _ in range(k):
            r = self.mul(r, i)
        return r

    @property
    def zero(self):
        """The absorbing element if there is one (e.g. the empty map)."""
        for z in range(len(self)):
            if all(t == z for t in self.right[z]) and all(t == z for t in self.left[z]):
                return z
        return None

    def preimage_dfa(self, targets: Iterable[int]) -> Dfa:
        """DFA of φ⁻¹(P) on the right Cayley graph (not minimized)."""
        return Dfa(self.alphabet, len(self), 0, frozenset(targets),
                   tuple(tuple(r) for r in self.right))

    def accepting_elements(self) -> list[int]:
        """Elements mapping the automaton's initial state to a final state."""
        if self.dfa is None:
            raise ValueError("monoid was not built from an automaton")
        q0 = self.state_map[self.dfa.initial]
        finals = {self.state_map[f] for f in self.dfa.finals if self.state_map[f] is not None}
        if q0 is None:
            return []
        return [i for i, s in enumerate(self.elements) if s(q0) in finals]

    def word_key(self, i: int):
        """Lexicographic sort key of the representative word (alphabet order)."""
        return [self.alphabet.index(a) for a in self.words[i]]


def transition_monoid(d: Dfa, max_elements: int = DEFAULT_MAX_ELEMENTS) -> TransitionMonoid:
    """Transition monoid of ``d``.

    When ``d.treat_sink_as_undefined`` is set, a non-final trap state is
    removed first so that its transitions become undefined.
    """
    drop = fa.find_sink(d) if d.treat_sink_as_undefined else None
    keep = [q for q in range(d.n_states) if q != drop]
    ren = {q: i for i, q in enumerate(keep)}
    state_map = [ren.get(q) for q in range(d.n_states)]
    gens = []
    for k in range(len(d.alphabet)):
        gens.append(PartialTransformation(tuple(
            None if d.delta[q][k] is None else ren.get(d.delta[q][k]) for q in keep)))
    return TransitionMonoid(d.alphabet, gens, max_elements, dfa=d, state_map=state_map)


def monoid_from_maps(alphabet, maps: dict) -> TransitionMonoid:
    """Monoid generated by explicit maps, e.g. ``{"a": (1, None, 0)}``."""
    gens = [PartialTransformation(tuple(maps[a])) for a in alphabet]
    return TransitionMonoid(alphabet, gens)


# ------------------------------------------------------------ Green


@dataclass
class GreenStructure:
    monoid: TransitionMonoid
    r_of: list[int]
    l_of: list[int]
    j_of: list[int]
    h_of: list[int]
    r_classes: list[list[int]]
    l_classes: list[list[int]]
    j_classes: list[list[int]]
    h_classes: list[list[int]]
    idempotent: list[bool]
    below: list[int] = field(repr=False)  # bitmask of J-classes in M s M

    def eggbox(self, j: int) -> list[list[list[int]]]:
        """Rows are R-classes, columns L-classes, cells H-classes (element ids)."""
        members = self.j_classes[j]
        rows = sorted({self.r_of[s] for s in members}, key=lambda r: self.r_classes[r][0])
        cols = sorted({self.l_of[s] for s in members}, key=lambda c: self.l_classes[c][0])
        grid = [[[] for _ in cols] for _ in rows]
        rpos = {r: i for i, r in enumerate(rows)}
        cpos = {c: i for i, c in enumerate(cols)}
        for s in members:
            grid[rpos[self.r_of[s]]][cpos[self.l_of[s]]].append(s)
        return grid

    def j_leq(self, s: int, t: int) -> bool:
        """s ≤_J t, i.e. s ∈ MtM."""
        return bool(self.below[self.j_of[t]] >> self.j_of[s] & 1)

    def ideal(self, t: int) -> set[int]:
        """MtM as a set of elements."""
        mask = self.below[self.j_of[t]]
        return {s for s in range(len(self.monoid)) if mask >> self.j_of[s] & 1}

    def is_regular(self, j: int) -> bool:
        return any(self.idempotent[s] for s in self.j_classes[j])

    def h_size(self, j: int) -> int:
        return len(self.h_classes[self.h_of[self.j_classes[j][0]]])


def _classes(labels, n):
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(int(labels[i]), []).append(i)
    ordered = sorted(groups.values(), key=lambda g: g[0])
    of = [0] * n
    for c, g in enumerate(ordered):
        for i in g:
            of[i] = c
    return ordered, of


def green_structure(m: TransitionMonoid) -> GreenStructure:
    n = len(m)
    r_classes, r_of = _classes(strongly_connected(m.right, n), n)
    l_classes, l_of = _classes(strongly_connected(m.left, n), n)
    both = [m.right[i] + m.left[i] for i in range(n)]
    j_classes, j_of = _classes(strongly_connected(both, n), n)
    hkey: dict[tuple[int, int], list[int]] = {}
    for i in range(n):
        hkey.setdefault((r_of[i], l_of[i]), []).append(i)
    h_classes, h_of = _classes([min(hkey[(r_of[i], l_of[i])]) for i in range(n)], n)
    idem = [m.mul(i, i) == i for i in range(n)]
    # J-order: bitmask of classes reachable in the condensed two-sided graph
    succ = [set() for _ in j_classes]
    for i in range(n):
        for t in both[i]:
            if j_of[t] != j_of[i]:
                succ[j_of[i]].add(j_of[t])
    below: list[int | None] = [None] * len(j_classes)

    def visit(c):
        stack = [(c, iter(succ[c]))]
        while stack:
            node, it = stack[-1]
            nxt = next((x for x in it if below[x] is None), None)
            if nxt is not None:
                below[nxt] = -1  # in progress marker; DAG so never revisited
                stack.append((nxt, iter(succ[nxt])))
                continue
            mask = 1 << node
            for x in succ[node]:
                mask |= below[x]
            below[node] = mask
            stack.pop()

    for c in range(len(j_classes)):
        if below[c] is None:
            below[c] = -1
            visit(c)
    return GreenStructure(m, r_of, l_of, j_of, h_of, r_classes, l_classes,
                          j_classes, h_classes, idem, below)


def is_aperiodic(m: TransitionMonoid) -> bool:
    """All H-classes trivial, tested as s^k = s^(k+1) with k = |M|."""
    n = len(m)
    for i in range(n):
        x = m.power(i, n) if n < 64 else _fast_power(m, i, n)
        if m.mul(x, i) != x:
            return False
    return True


def _fast_power(m, i, k):
    result, base = 0, i
    while k:
        if k & 1:
            result = m.mul(result, base)
        base = m.mul(base, base)
        k >>= 1
    return result


# ------------------------------------------------------------ shifts


@dataclass
class ShiftImage:
    """Elements φ(u) for u in the factor language.

    ``conditional`` is True when the shift is only explored up to a horizon
    and some elements were not witnessed (they are treated as absent).
    """

    elements: frozenset[int]
    conditional: bool = False


def shift_image(m: TransitionMonoid, x, strict: bool = False) -> ShiftImage:
    """{ s : φ⁻¹(s) ∩ ℒ(X) ≠ ∅ }.

    For sofic-type shifts this walks the product of the right Cayley graph
    with the factor DFA.  For substitution shifts the factors of the horizon
    words are scanned; with ``strict`` an incomplete image raises
    :class:`UndecidedAtHorizon`.
    """
    if tuple(x.alphabet) != m.alphabet:
        raise ValueError(f"alphabet mismatch: monoid {m.alphabet}, shift {tuple(x.alphabet)}")
    if not x.is_substitution:
        fd = x.factor_dfa()
        start = (0, fd.initial)
        seen = {start}
        stack = [start]
        found = set()
        while stack:
            s, q = stack.pop()
            if q in fd.finals:
                found.add(s)
            for k in range(len(m.alphabet)):
                t = fd.delta[q][k]
                if t is None:
                    continue
                nxt = (m.right[s][k], t)
                if nxt not in seen and t in fd.finals:
                    seen.add(nxt)
                    stack.append(nxt)
        return ShiftImage(frozenset(found))
    right = np.asarray(m.right, dtype=np.int64)
    found = np.zeros(len(m), dtype=bool)
    for word in x.horizon_words():
        cur = np.zeros(len(m), dtype=bool)
        for a in map(m.alphabet.index, word):
            cur[0] = True
            found |= cur
            nxt = np.zeros(len(m), dtype=bool)
            nxt[right[cur, a]] = True
            cur = nxt
        found |= cur
    elements = frozenset(int(i) for i in np.flatnonzero(found))
    conditional = len(elements) < len(m)
    if strict and conditional:
        raise UndecidedAtHorizon(
            f"{len(m) - len(elements)} elements not witnessed up to the horizon", x.horizon)
    return ShiftImage(elements, conditional)


@dataclass
class JClassReport:
    j_x: list[int]
    k_x: list[int]
    d: int
    r_classes: list[list[int]]  # R-classes of J_X meeting the shift image
    x_degree: int
    image: list[int]
    horizon_conditional: bool = False

    def to_dict(self, m: TransitionMonoid) -> dict:
        word = lambda i: m.words[i] or "1"
        return {
            "monoid_size": len(m),
            "j_x": [word(i) for i in self.j_x],
            "j_x_ids": self.j_x,
            "k_x_ids": self.k_x,
            "d": self.d,
            "x_degree": self.x_degree,
            "r_classes_meeting_image": [[word(i) for i in r] for r in self.r_classes],
            "image_ids": self.image,
            "horizon_conditional": self.horizon_conditional,
        }

    def to_json(self, m: TransitionMonoid) -> str:
        return json.dumps(self.to_dict(m), indent=2, ensure_ascii=False)


def j_class_of_shift(m: TransitionMonoid, x, green: GreenStructure | None = None) -> JClassReport:
    """K_X(M), J_X(M), the H-class size d inside J_X and the X-degree."""
    if not x.is_irreducible():
        raise NotIrreducible(f"{x!r} is not irreducible")
    g = green or green_structure(m)
    img = shift_image(m, x)
    if not img.elements:
        raise ValueError("empty shift image")
    mask = -1
    for s in img.elements:
        mask &= g.below[g.j_of[s]]
    k_x = [s for s in range(len(m)) if mask >> g.j_of[s] & 1]
    candidates = [j for j in range(len(g.j_classes)) if g.below[j] == mask]
    if len(candidates) != 1:
        raise AssertionError("K_X is not a principal ideal; is the shift irreducible?")
    jx = candidates[0]
    members = g.j_classes[jx]
    rows = sorted({g.r_of[s] for s in members if s in img.elements},
                  key=lambda r: min(g.monoid.word_key(s) for s in g.r_classes[r]))
    return JClassReport(
        j_x=list(members),
        k_x=k_x,
        d=g.h_size(jx),
        r_classes=[list(g.r_classes[r]) for r in rows],
        x_degree=min(m.rank(s) for s in img.elements),
        image=sorted(img.elements),
        horizon_conditional=img.conditional,
    )


def choose_r_class(report: JClassReport, m: TransitionMonoid) -> list[int]:
    """The R-class of J_X meeting the image whose least representative word
    is lexicographically smallest."""
    if not report.r_classes:
        raise NoUsableRClass("no R-class of J_X meets the shift image")
    return report.r_classes[0]


# ------------------------------------------------------------ rendering


def eggbox_dot(g: GreenStructure, name: str = "eggbox") -> str:
    """Graphviz source: one cluster per J-class, a table of H-cells inside.

    Idempotent cells are starred and cells list representative words.
    """
    m = g.monoid
    esc = lambda s: s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    lines = [f"digraph {name} {{", "  node [shape=plaintext];"]
    for j in range(len(g.j_classes)):
        lines.append(f"  subgraph cluster_{j} {{")
        lines.append(f'    label="J{j}";')
        rows = []
        for row in g.eggbox(j):
            cells = []
            for cell in row:
                star = "*" if any(g.idempotent[s] for s in cell) else ""
                words = ", ".join(m.words[s] or "1" for s in cell)
                cells.append(f"<TD>{star}{esc(words)}</TD>")
            rows.append("<TR>" + "".join(cells) + "</TR>")
        table = '<TABLE BORDER="0" CELLBORDER="1" CELLSPACING="0">' + "".join(rows) + "</TABLE>"
        lines.append(f"    j{j} [label=<{table}>];")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
