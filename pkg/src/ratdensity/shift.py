"""Shift spaces and questions about their factor languages.

Sofic-type shifts (full, finite type, periodic orbit, sofic) are handled
exactly through the minimal DFA of their factor language.  Substitution
shifts are handled through long iterates of the morphism; any negative
answer there is only as good as the horizon, so those procedures raise
:class:`UndecidedAtHorizon` instead of answering "no".
"""

from __future__ import annotations

from collections import deque
from functools import cached_property

import numpy as np

from . import automata as fa
from .automata import Dfa
from .errors import NotPrimitive, Unsupported, UndecidedAtHorizon
from .numeric import is_primitive, perron_vector, strongly_connected

DEFAULT_HORIZON = 2**16


def _graph_language(alphabet, n_vertices, edges) -> Dfa:
    """Minimal DFA of all path labels of a labeled graph.

    Every vertex is both initial and final, so when every vertex lies on a
    bi-infinite path the result is the factor language of the sofic shift
    presented by the graph.
    """
    nfa = fa._Nfa(alphabet)
    index = {a: k for k, a in enumerate(alphabet)}
    for _ in range(n_vertices):
        nfa.new_state()
    for p, a, q in edges:
        nfa.add(p, index[a], q)
    nfa.initials = set(range(n_vertices))
    nfa.finals = set(range(n_vertices))
    if not n_vertices:
        return fa.empty_language(alphabet)
    return fa.minimize(nfa.determinize())


def _essential(n_vertices, edges) -> set[int]:
    """Vertices lying on a bi-infinite path (reach a cycle and are reached from one)."""
    alive = set(range(n_vertices))
    while True:
        has_out = {p for p, _, q in edges if p in alive and q in alive}
        has_in = {q for p, _, q in edges if p in alive and q in alive}
        keep = alive & has_out & has_in
        if keep == alive:
            return alive
        alive = keep


class ShiftSpace:
    """Base class.  Subclasses fix :attr:`alphabet`."""

    alphabet: tuple[str, ...]
    is_substitution = False

    def factor_dfa(self) -> Dfa:
        raise NotImplementedError

    def factor_member(self, w: str) -> bool:
        return self.factor_dfa().accepts(w)

    def factors(self, n: int) -> list[str]:
        """ℒₙ(X) in lexicographic order."""
        return fa.enumerate_words(self.factor_dfa(), n)

    def intersect_nonempty(self, d: Dfa) -> bool:
        d = fa.with_alphabet(d, self.alphabet)
        return not fa.is_empty(fa.intersect(self.factor_dfa(), d))

    def witness(self, d: Dfa) -> str | None:
        """A shortest (then least) word of ℒ(X) ∩ L(d), or None."""
        inter = fa.intersect(self.factor_dfa(), fa.with_alphabet(d, self.alphabet))
        return _shortest_word(inter)

    def is_irreducible(self) -> bool:
        return _dfa_language_irreducible(self.factor_dfa())


class FullShift(ShiftSpace):
    def __init__(self, alphabet):
        self.alphabet = tuple(alphabet)

    def factor_dfa(self) -> Dfa:
        return fa.universal(self.alphabet)

    def __repr__(self):
        return f"FullShift({''.join(self.alphabet)!r})"


class Sft(ShiftSpace):
    """Shift of finite type given by a finite set of forbidden blocks."""

    def __init__(self, alphabet, forbidden):
        self.alphabet = tuple(alphabet)
        self.forbidden = tuple(sorted(set(forbidden)))
        for w in self.forbidden:
            if not w or set(w) - set(self.alphabet):
                raise ValueError(f"bad forbidden block {w!r}")

    @cached_property
    def _dfa(self):
        k = max((len(w) for w in self.forbidden), default=1)
        # vertices: allowed words of length k-1, edges: allowed k-windows
        bad = fa.left_ideal_closure(fa.right_ideal_closure(
            fa.from_words(self.forbidden, self.alphabet)))
        ok = fa.complement(bad)
        blocks = fa.enumerate_words(ok, k - 1)
        ids = {u: i for i, u in enumerate(blocks)}
        edges = []
        for u in blocks:
            for a in self.alphabet:
                if ok.accepts(u + a):
                    edges.append((ids[u], a, ids[(u + a)[1:]]))
        alive = _essential(len(blocks), edges)
        keep = sorted(alive)
        ren = {v: i for i, v in enumerate(keep)}
        edges = [(ren[p], a, ren[q]) for p, a, q in edges if p in alive and q in alive]
        return _graph_language(self.alphabet, len(keep), edges)

    def factor_dfa(self) -> Dfa:
        return self._dfa

    def __repr__(self):
        return f"Sft({''.join(self.alphabet)!r}, forbidden={list(self.forbidden)})"


class Sofic(ShiftSpace):
    """Shift given directly by a DFA of its factor language.

    The language must be factorial and extendable on both sides; this is
    checked at construction.
    """

    def __init__(self, dfa: Dfa):
        self.alphabet = dfa.alphabet
        self._dfa = fa.minimize(dfa)
        _check_shift_language(self._dfa)

    @classmethod
    def from_graph(cls, alphabet, n_vertices, edges) -> "Sofic":
        """Shift presented by a labeled graph (non-essential vertices are pruned)."""
        alive = _essential(n_vertices, edges)
        keep = sorted(alive)
        ren = {v: i for i, v in enumerate(keep)}
        edges = [(ren[p], a, ren[q]) for p, a, q in edges if p in alive and q in alive]
        return cls(_graph_language(tuple(alphabet), len(keep), edges))

    def factor_dfa(self) -> Dfa:
        return self._dfa

    def __repr__(self):
        return f"Sofic({self._dfa!r})"


def least_rotation(w: str) -> str:
    return min(w[i:] + w[:i] for i in range(len(w)))


def primitive_root(w: str) -> str:
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p]
    return w


class PeriodicOrbit(ShiftSpace):
    """The finite shift made of the orbit of w^∞.

    ``word`` is stored as the least rotation of its primitive root, so
    ``PeriodicOrbit("cabcab")`` equals ``PeriodicOrbit("abc")``.
    """

    def __init__(self, word: str, alphabet=None):
        if not word:
            raise ValueError("periodic word must be nonempty")
        self.word = least_rotation(primitive_root(word))
        self.alphabet = tuple(alphabet) if alphabet else tuple(sorted(set(word)))
        if set(word) - set(self.alphabet):
            raise ValueError("word uses symbols outside the alphabet")

    @cached_property
    def _dfa(self):
        p = len(self.word)
        edges = [(i, self.word[i], (i + 1) % p) for i in range(p)]
        return _graph_language(self.alphabet, p, edges)

    def factor_dfa(self) -> Dfa:
        return self._dfa

    def is_irreducible(self) -> bool:
        return True

    def __eq__(self, other):
        return (isinstance(other, PeriodicOrbit) and other.word == self.word
                and other.alphabet == self.alphabet)

    def __hash__(self):
        return hash((self.word, self.alphabet))

    def __repr__(self):
        return f"PeriodicOrbit({self.word!r})"


class SubstitutionMorphism:
    """A letter-to-word morphism; the alphabet order is the rule order."""

    def __init__(self, rules: dict[str, str]):
        self.rules = dict(rules)
        self.alphabet = tuple(self.rules)
        for a, img in self.rules.items():
            if len(a) != 1 or not img:
                raise ValueError(f"bad rule {a!r} -> {img!r}")
            if set(img) - set(self.alphabet):
                raise ValueError(f"rule for {a!r} leaves the alphabet")
        if not is_primitive(self.incidence):
            raise NotPrimitive(f"substitution {self.rules} is not primitive")
        if all(len(img) == 1 for img in self.rules.values()):
            raise ValueError("substitution must be growing")

    @cached_property
    def incidence(self) -> list[list[int]]:
        """M[a][b] = number of b in σ(a); letter counts evolve as c ↦ cM."""
        return [[self.rules[a].count(b) for b in self.alphabet] for a in self.alphabet]

    @property
    def max_stretch(self) -> int:
        return max(len(v) for v in self.rules.values())

    def apply(self, w: str) -> str:
        return "".join(self.rules[a] for a in w)

    def iterate(self, a: str, n: int) -> str:
        w = a
        for _ in range(n):
            w = self.apply(w)
        return w

    def expand_to(self, a: str, length: int) -> str:
        """σⁿ(a) for the least n with |σⁿ(a)| ≥ length (and n ≥ 1)."""
        w = self.apply(a)
        while len(w) < length:
            w = self.apply(w)
        return w

    def __repr__(self):
        return "SubstitutionMorphism(" + ", ".join(
            f"{a}->{b}" for a, b in self.rules.items()) + ")"


class Substitution(ShiftSpace):
    """Shift X(σ) of a primitive substitution, explored up to a horizon.

    ``horizon`` is the length of the iterates σⁿ(a) that are scanned.
    """

    is_substitution = True

    def __init__(self, morphism, horizon: int = DEFAULT_HORIZON):
        if isinstance(morphism, dict):
            morphism = SubstitutionMorphism(morphism)
        self.morphism = morphism
        self.alphabet = morphism.alphabet
        self.horizon = int(horizon)

    def horizon_words(self, length=None) -> list[str]:
        length = max(self.horizon if length is None else length, 1)
        return [self._expand(a, length) for a in self.alphabet]

    def _expand(self, a, length):
        cache = self.__dict__.setdefault("_cache", {})
        w = cache.get(a)
        if w is None or len(w) < length:
            w = self.morphism.expand_to(a, length)
            cache[a] = w
        return w

    def factor_dfa(self) -> Dfa:
        raise Unsupported("substitution shifts have no finite factor automaton; "
                          "use factor_member or factors")

    def factor_member(self, w: str) -> bool:
        need = max(self.horizon, 2 * len(w) * self.morphism.max_stretch)
        return any(w in word for word in self.horizon_words(need))

    def factors(self, n: int) -> list[str]:
        """ℒₙ(X) as seen in the horizon words, in lexicographic order."""
        if n == 0:
            return [""]
        need = max(self.horizon, 2 * n * self.morphism.max_stretch)
        text, sa, lcp, valid = self._suffix_index(need)
        out = []
        prev = None
        for r, p in enumerate(sa):
            if valid[p] < n:
                continue
            if prev is None or lcp[r] < n:
                out.append(text[p:p + n])
            prev = p
        return out

    def _suffix_index(self, need):
        """Suffix array and LCP of the horizon words joined by separators."""
        cached = self.__dict__.get("_sa")
        if cached is not None and cached[0] >= need:
            return cached[1]
        words = self.horizon_words(need)
        k = len(self.alphabet)
        codes, text, valid = [], [], []
        for i, w in enumerate(words):
            codes.extend(self.alphabet.index(a) for a in w)
            codes.append(k + i)  # separators sort after every letter
            text.append(w + "#")
            valid.extend(range(len(w), -1, -1))
        text = "".join(text)
        sa = _suffix_array(np.asarray(codes, dtype=np.int64))
        lcp = _kasai(codes, sa)
        data = (text, sa.tolist(), lcp, valid)
        self.__dict__["_sa"] = (need, data)
        return data

    def witness(self, d: Dfa) -> str | None:
        """Shortest accepted factor of the horizon words, None if there is none."""
        d = fa.with_alphabet(d, self.alphabet)
        if d.n_states == 0:
            return None
        if d.initial in d.finals:
            return ""
        best = None
        for word in self.horizon_words():
            # earliest start position of a factor ending here, per state
            start: dict[int, int] = {}
            for j, a in enumerate(word):
                k = d.symbol_index(a)
                nxt: dict[int, int] = {}
                start[d.initial] = j
                for q, i in start.items():
                    t = d.delta[q][k]
                    if t is not None and (t not in nxt or i > nxt[t]):
                        nxt[t] = i  # latest start gives the shortest factor
                start = nxt
                for q, i in start.items():
                    if q in d.finals:
                        cand = word[i:j + 1]
                        if best is None or len(cand) < len(best) or (
                                len(cand) == len(best) and cand < best):
                            best = cand
                if best is not None and len(best) == 1:
                    return best
        return best

    def intersect_nonempty(self, d: Dfa) -> bool:
        if self.witness(d) is not None:
            return True
        raise UndecidedAtHorizon(
            f"no witness among factors of σⁿ(a) up to length {self.horizon}",
            self.horizon)

    def is_irreducible(self) -> bool:
        return True

    def letter_frequencies(self):
        _, v = perron_vector(self.morphism.incidence)
        return dict(zip(self.alphabet, v))

    def __repr__(self):
        return f"Substitution({self.morphism!r}, horizon={self.horizon})"


# ------------------------------------------------------------------ helpers


def _shortest_word(d: Dfa) -> str | None:
    if d.n_states == 0:
        return None
    prev = {d.initial: ""}
    queue = deque([d.initial])
    while queue:
        q = queue.popleft()
        if q in d.finals:
            return prev[q]
        for k, t in enumerate(d.delta[q]):
            if t is not None and t not in prev:
                prev[t] = prev[q] + d.alphabet[k]
                queue.append(t)
    return None


def _live_states(d: Dfa) -> list[int]:
    return sorted(set(fa.reachable_states(d)) & fa.coaccessible_states(d))


def _check_shift_language(d: Dfa):
    """Raise ValueError unless L(d) is nonempty, factorial and bi-extendable."""
    if fa.is_empty(d):
        raise ValueError("empty factor language")
    live = set(_live_states(d))
    # prefix-closed: in a minimal DFA every live state must be final
    if live - d.finals:
        raise ValueError("factor language is not prefix-closed")
    mirrored = fa.mirror(d)
    if set(_live_states(mirrored)) - mirrored.finals:
        raise ValueError("factor language is not suffix-closed")
    for dd in (d, mirrored):
        alive = set(_live_states(dd))
        for q in alive:
            if not any(t in alive for t in dd.delta[q] if t is not None):
                raise ValueError("factor language is not extendable")


def _dfa_language_irreducible(d: Dfa) -> bool:
    """For every live state q, every word of the language must be readable
    after some detour from q.  It suffices to test one state per terminal
    strongly connected component of the live part."""
    live = _live_states(d)
    if not live:
        return False
    ids = {q: i for i, q in enumerate(live)}
    rows = [[ids[t] for t in d.delta[q] if t is not None and t in ids] for q in live]
    labels = strongly_connected(rows, len(live))
    terminal = set(labels)
    for i, row in enumerate(rows):
        if any(labels[j] != labels[i] for j in row):
            terminal.discard(labels[i])
    full = fa.minimize(d)
    for comp in terminal:
        members = [live[i] for i in range(len(live)) if labels[i] == comp]
        nfa, _ = fa._Nfa.from_dfa(d)
        nfa.initials = set(members)
        nfa.finals = set(live)
        if not fa.equivalent(fa.minimize(nfa.determinize()), full):
            return False
    return True



def _suffix_array(codes: np.ndarray) -> np.ndarray:
    """Prefix doubling on integer codes; O(n log^2 n) with numpy sorts."""
    n = len(codes)
    rank = codes.copy()
    k = 1
    sa = np.argsort(rank, kind="stable")
    while True:
        second = np.full(n, -1, dtype=np.int64)
        second[:n - k] = rank[k:]
        sa = np.lexsort((second, rank))
        key_r, key_s = rank[sa], second[sa]
        change = np.empty(n, dtype=bool)
        change[0] = False
        change[1:] = (key_r[1:] != key_r[:-1]) | (key_s[1:] != key_s[:-1])
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[sa] = np.cumsum(change)
        rank = new_rank
        if rank.max() == n - 1 or k >= n:
            return sa
        k *= 2


def _kasai(codes, sa) -> list[int]:
    """lcp[r] = longest common prefix of suffixes sa[r-1] and sa[r] (lcp[0] = 0)."""
    n = len(codes)
    sa = list(sa)
    rank = [0] * n
    for r, p in enumerate(sa):
        rank[p] = r
    lcp = [0] * n
    h = 0
    for p in range(n):
        r = rank[p]
        if r == 0:
            h = 0
            continue
        q = sa[r - 1]
        while p + h < n and q + h < n and codes[p + h] == codes[q + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return lcp
