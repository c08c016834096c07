"""Deterministic automata and the language constructions built on them.

Symbols are single characters and words are plain ``str``.  The alphabet
order given at construction time is the order used for every canonical
choice (state numbering, enumeration, representative words).

Nondeterministic automata appear only as an internal intermediate
(Thompson construction, reversal, concatenation).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import LimitExceeded, RegexSyntaxError

ENUMERATION_LIMIT = 2**22
EPSILON_CHARS = ("ε",)
EMPTY_CHARS = ("∅",)


# ---------------------------------------------------------------- DFA type


@dataclass(frozen=True, eq=False)
class Dfa:
    """A deterministic automaton, possibly partial.

    ``delta[q][k]`` is the target of state ``q`` on ``alphabet[k]`` or
    ``None``.  ``treat_sink_as_undefined`` asks the monoid code to read a
    non-final trap state as "undefined" so that transition monoids come out
    as monoids of partial maps with a zero.
    """

    alphabet: tuple[str, ...]
    n_states: int
    initial: int
    finals: frozenset[int]
    delta: tuple[tuple[int | None, ...], ...]
    treat_sink_as_undefined: bool = False
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("repeated symbol in alphabet")
        if len(self.delta) != self.n_states:
            raise ValueError("transition table size does not match state count")
        if self.n_states and not 0 <= self.initial < self.n_states:
            raise ValueError("initial state out of range")
        for row in self.delta:
            if len(row) != len(self.alphabet):
                raise ValueError("transition row has wrong width")
            for t in row:
                if t is not None and not 0 <= t < self.n_states:
                    raise ValueError(f"transition target {t} out of range")
        object.__setattr__(self, "_index", {a: k for k, a in enumerate(self.alphabet)})

    @classmethod
    def from_transitions(cls, alphabet, n_states, initial, finals, transitions,
                         treat_sink_as_undefined=False) -> "Dfa":
        """Build from an iterable of ``(source, symbol, target)`` triples."""
        alphabet = tuple(alphabet)
        index = {a: k for k, a in enumerate(alphabet)}
        table = [[None] * len(alphabet) for _ in range(n_states)]
        for p, a, q in transitions:
            if a not in index:
                raise ValueError(f"symbol {a!r} not in alphabet")
            k = index[a]
            if table[p][k] is not None and table[p][k] != q:
                raise ValueError(f"nondeterministic transition on ({p}, {a!r})")
            table[p][k] = q
        return cls(alphabet, n_states, initial, frozenset(finals),
                   tuple(tuple(r) for r in table), treat_sink_as_undefined)

    def symbol_index(self, a: str) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise ValueError(f"symbol {a!r} not in alphabet {self.alphabet}") from None

    def step(self, q, a):
        if q is None:
            return None
        return self.delta[q][self.symbol_index(a)]

    def run(self, word: str, start=None):
        """State reached from ``start`` (default: initial) or None."""
        q = self.initial if start is None else start
        if self.n_states == 0:
            return None
        for a in word:
            q = self.delta[q][self.symbol_index(a)]
            if q is None:
                return None
        return q

    def accepts(self, word: str) -> bool:
        q = self.run(word)
        return q is not None and q in self.finals

    __contains__ = accepts

    @property
    def is_complete(self) -> bool:
        return all(t is not None for row in self.delta for t in row)

    def transitions(self) -> Iterator[tuple[int, str, int]]:
        for p, row in enumerate(self.delta):
            for k, q in enumerate(row):
                if q is not None:
                    yield p, self.alphabet[k], q

    def __repr__(self):
        return (f"Dfa(alphabet={''.join(self.alphabet)!r}, states={self.n_states}, "
                f"initial={self.initial}, finals={sorted(self.finals)})")


# ------------------------------------------------------------------ regex


@dataclass(frozen=True)
class Regex:
    pass


@dataclass(frozen=True)
class Empty(Regex):
    pass


@dataclass(frozen=True)
class Epsilon(Regex):
    pass


@dataclass(frozen=True)
class Sym(Regex):
    symbol: str


@dataclass(frozen=True)
class Union(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Concat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


class _Parser:
    def __init__(self, text, alphabet):
        self.text = text
        self.alphabet = set(alphabet)
        self.pos = 0

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else None

    def expect(self, ch):
        if self.peek() != ch:
            found = "end of input" if self.peek() is None else repr(self.peek())
            raise RegexSyntaxError(f"expected {ch!r}, found {found}", self.pos)
        self.pos += 1

    def parse(self):
        node = self.expr()
        if self.peek() is not None:
            raise RegexSyntaxError(f"unexpected {self.peek()!r}", self.pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek() == "|":
            self.pos += 1
            node = Union(node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek() is not None and self.peek() not in "|)":
            node = Concat(node, self.factor())
        return node

    def factor(self):
        node = self.atom()
        while self.peek() == "*":
            self.pos += 1
            if not isinstance(node, Star):
                node = Star(node)
        return node

    def atom(self):
        ch = self.peek()
        if ch is None:
            raise RegexSyntaxError("unexpected end of input", self.pos)
        if ch == "(":
            self.pos += 1
            node = self.expr()
            self.expect(")")
            return node
        if ch in EPSILON_CHARS:
            self.pos += 1
            return Epsilon()
        if ch in EMPTY_CHARS:
            self.pos += 1
            return Empty()
        if ch in "|)*":
            raise RegexSyntaxError(f"unexpected {ch!r}", self.pos)
        if ch not in self.alphabet:
            raise RegexSyntaxError(f"symbol {ch!r} not in alphabet", self.pos)
        self.pos += 1
        return Sym(ch)


def parse_regex(text: str, alphabet: Iterable[str]) -> Regex:
    """Parse ``text`` with ``|`` for union, juxtaposition, postfix ``*``,
    parentheses, ``ε`` and ``∅``.  Whitespace is ignored."""
    return _Parser(text, tuple(alphabet)).parse()


# --------------------------------------------------- internal NFA plumbing


class _Nfa:
    """Mutable epsilon-NFA used only inside this module."""

    def __init__(self, alphabet):
        self.alphabet = tuple(alphabet)
        self.trans: list[dict[int, set[int]]] = []
        self.eps: list[set[int]] = []
        self.initials: set[int] = set()
        self.finals: set[int] = set()

    def new_state(self):
        self.trans.append({})
        self.eps.append(set())
        return len(self.trans) - 1

    def add(self, p, k, q):
        self.trans[p].setdefault(k, set()).add(q)

    def closure(self, states):
        seen = set(states)
        stack = list(states)
        while stack:
            p = stack.pop()
            for q in self.eps[p]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return frozenset(seen)

    @classmethod
    def from_dfa(cls, d: Dfa, offset_into=None):
        nfa = cls(d.alphabet) if offset_into is None else offset_into
        base = len(nfa.trans)
        for _ in range(d.n_states):
            nfa.new_state()
        for p, row in enumerate(d.delta):
            for k, q in enumerate(row):
                if q is not None:
                    nfa.add(base + p, k, base + q)
        return nfa, base

    def determinize(self) -> Dfa:
        """Subset construction; only nonempty subsets become states."""
        start = self.closure(self.initials)
        ids = {start: 0}
        order = [start]
        table = []
        i = 0
        while i < len(order):
            subset = order[i]
            row = []
            for k in range(len(self.alphabet)):
                step = set()
                for p in subset:
                    step |= self.trans[p].get(k, set())
                if not step:
                    row.append(None)
                    continue
                target = self.closure(step)
                if target not in ids:
                    ids[target] = len(order)
                    order.append(target)
                row.append(ids[target])
            table.append(tuple(row))
            i += 1
        finals = frozenset(i for i, s in enumerate(order) if s & self.finals)
        return Dfa(self.alphabet, len(order), 0, finals, tuple(table))


def _thompson(node: Regex, nfa: _Nfa, index) -> tuple[int, int]:
    s = nfa.new_state()
    t = nfa.new_state()
    if isinstance(node, Empty):
        pass
    elif isinstance(node, Epsilon):
        nfa.eps[s].add(t)
    elif isinstance(node, Sym):
        nfa.add(s, index[node.symbol], t)
    elif isinstance(node, Union):
        for part in (node.left, node.right):
            a, b = _thompson(part, nfa, index)
            nfa.eps[s].add(a)
            nfa.eps[b].add(t)
    elif isinstance(node, Concat):
        a1, b1 = _thompson(node.left, nfa, index)
        a2, b2 = _thompson(node.right, nfa, index)
        nfa.eps[s].add(a1)
        nfa.eps[b1].add(a2)
        nfa.eps[b2].add(t)
    elif isinstance(node, Star):
        a, b = _thompson(node.inner, nfa, index)
        nfa.eps[s] |= {a, t}
        nfa.eps[b] |= {a, t}
    else:
        raise TypeError(f"not a regex node: {node!r}")
    return s, t


def to_dfa(r: Regex | str, alphabet: Iterable[str] | None = None) -> Dfa:
    """Minimal complete DFA of a regex (a string is parsed first)."""
    if isinstance(r, str):
        if alphabet is None:
            raise ValueError("an alphabet is required when passing regex text")
        r = parse_regex(r, alphabet)
    if alphabet is None:
        alphabet = sorted(_regex_symbols(r))
    alphabet = tuple(alphabet)
    nfa = _Nfa(alphabet)
    s, t = _thompson(r, nfa, {a: k for k, a in enumerate(alphabet)})
    nfa.initials = {s}
    nfa.finals = {t}
    return minimize(nfa.determinize())


def _regex_symbols(r):
    if isinstance(r, Sym):
        return {r.symbol}
    if isinstance(r, (Union, Concat)):
        return _regex_symbols(r.left) | _regex_symbols(r.right)
    if isinstance(r, Star):
        return _regex_symbols(r.inner)
    return set()


# ---------------------------------------------------------- basic closure


def complete(d: Dfa) -> Dfa:
    """Add a non-final sink for undefined transitions (no-op if complete)."""
    if d.is_complete and d.n_states > 0:
        return d
    sink = d.n_states
    table = [tuple(sink if t is None else t for t in row) for row in d.delta]
    table.append(tuple([sink] * len(d.alphabet)))
    initial = d.initial if d.n_states else sink
    return Dfa(d.alphabet, d.n_states + 1, initial, d.finals, tuple(table),
               d.treat_sink_as_undefined)


def reachable_states(d: Dfa) -> list[int]:
    """States reachable from the initial one, in BFS order by alphabet."""
    if d.n_states == 0:
        return []
    seen = {d.initial}
    order = [d.initial]
    queue = deque(order)
    while queue:
        p = queue.popleft()
        for q in d.delta[p]:
            if q is not None and q not in seen:
                seen.add(q)
                order.append(q)
                queue.append(q)
    return order


def coaccessible_states(d: Dfa) -> set[int]:
    """States from which some final state can be reached."""
    back = [[] for _ in range(d.n_states)]
    for p, _, q in d.transitions():
        back[q].append(p)
    seen = set(d.finals)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for p in back[q]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def minimize(d: Dfa) -> Dfa:
    """Canonical minimal complete DFA.

    Moore refinement on the reachable part of the completion, then states are
    renumbered in BFS order from the initial state, scanning symbols in
    alphabet order.  Two automata for the same language over the same
    alphabet therefore minimize to identical tables.
    """
    c = complete(d)
    reach = reachable_states(c)
    block = {q: int(q in c.finals) for q in reach}
    n_blocks = len(set(block.values()))
    while True:
        sigs = {}
        new_block = {}
        for q in reach:
            sig = (block[q],) + tuple(block[t] for t in c.delta[q])
            new_block[q] = sigs.setdefault(sig, len(sigs))
        block = new_block
        if len(sigs) == n_blocks:
            break
        n_blocks = len(sigs)
    # canonical numbering
    rep = {}
    for q in reach:
        rep.setdefault(block[q], q)
    ids = {block[c.initial]: 0}
    order = [block[c.initial]]
    queue = deque(order)
    while queue:
        b = queue.popleft()
        for t in c.delta[rep[b]]:
            bt = block[t]
            if bt not in ids:
                ids[bt] = len(order)
                order.append(bt)
                queue.append(bt)
    table = tuple(tuple(ids[block[t]] for t in c.delta[rep[b]]) for b in order)
    finals = frozenset(ids[b] for b in order if rep[b] in c.finals)
    return Dfa(c.alphabet, len(order), 0, finals, table, d.treat_sink_as_undefined)


def trim(d: Dfa) -> Dfa:
    """Partial DFA keeping only accessible and coaccessible states.

    The empty language trims to a single non-final state with no edges.
    """
    useful = set(reachable_states(d)) & coaccessible_states(d)
    if d.initial not in useful:
        return Dfa(d.alphabet, 1, 0, frozenset(), (tuple([None] * len(d.alphabet)),))
    keep = [q for q in reachable_states(d) if q in useful]
    ids = {q: i for i, q in enumerate(keep)}
    table = tuple(tuple(ids.get(t) if t is not None else None for t in d.delta[q])
                  for q in keep)
    finals = frozenset(ids[q] for q in keep if q in d.finals)
    return Dfa(d.alphabet, len(keep), 0, finals, table, d.treat_sink_as_undefined)


def find_sink(d: Dfa):
    """A non-final state all of whose edges loop on itself, or None."""
    for q, row in enumerate(d.delta):
        if q not in d.finals and all(t == q for t in row):
            return q
    return None


def with_alphabet(d: Dfa, alphabet: Iterable[str]) -> Dfa:
    """Re-express ``d`` over a larger alphabet; new symbols are undefined."""
    alphabet = tuple(alphabet)
    missing = set(d.alphabet) - set(alphabet)
    if missing:
        raise ValueError(f"alphabet lacks symbols {sorted(missing)}")
    if alphabet == d.alphabet:
        return d
    table = tuple(tuple(row[d.symbol_index(a)] if a in d._index else None
                        for a in alphabet) for row in d.delta)
    return Dfa(alphabet, d.n_states, d.initial, d.finals, table,
               d.treat_sink_as_undefined)


# --------------------------------------------------------- boolean algebra


def _product(d1: Dfa, d2: Dfa, accept) -> Dfa:
    if d1.alphabet != d2.alphabet:
        raise ValueError("automata over different alphabets")
    c1, c2 = complete(d1), complete(d2)
    start = (c1.initial, c2.initial)
    ids = {start: 0}
    order = [start]
    table = []
    i = 0
    while i < len(order):
        p1, p2 = order[i]
        row = []
        for k in range(len(c1.alphabet)):
            t = (c1.delta[p1][k], c2.delta[p2][k])
            if t not in ids:
                ids[t] = len(order)
                order.append(t)
            row.append(ids[t])
        table.append(tuple(row))
        i += 1
    finals = frozenset(i for i, (p, q) in enumerate(order)
                       if accept(p in c1.finals, q in c2.finals))
    return minimize(Dfa(c1.alphabet, len(order), 0, finals, tuple(table)))


def intersect(d1: Dfa, d2: Dfa) -> Dfa:
    return _product(d1, d2, lambda x, y: x and y)


def union(d1: Dfa, d2: Dfa) -> Dfa:
    return _product(d1, d2, lambda x, y: x or y)


def difference(d1: Dfa, d2: Dfa) -> Dfa:
    return _product(d1, d2, lambda x, y: x and not y)


def complement(d: Dfa) -> Dfa:
    c = complete(d)
    finals = frozenset(range(c.n_states)) - c.finals
    return minimize(Dfa(c.alphabet, c.n_states, c.initial, finals, c.delta))


def is_empty(d: Dfa) -> bool:
    return not (set(reachable_states(d)) & d.finals)


def equivalent(d1: Dfa, d2: Dfa) -> bool:
    return is_empty(difference(d1, d2)) and is_empty(difference(d2, d1))


def reverse_determinize(d: Dfa) -> Dfa:
    """Minimal DFA of the mirror language."""
    nfa = _Nfa(d.alphabet)
    for _ in range(d.n_states):
        nfa.new_state()
    for p, row in enumerate(d.delta):
        for k, q in enumerate(row):
            if q is not None:
                nfa.add(q, k, p)
    nfa.initials = set(d.finals)
    if d.n_states:
        nfa.finals = {d.initial}
    if not nfa.initials:
        return empty_language(d.alphabet)
    return minimize(nfa.determinize())


mirror = reverse_determinize


# ----------------------------------------------------------- constructors


def empty_language(alphabet) -> Dfa:
    alphabet = tuple(alphabet)
    return Dfa(alphabet, 1, 0, frozenset(), (tuple([0] * len(alphabet)),))


def universal(alphabet) -> Dfa:
    """A*"""
    alphabet = tuple(alphabet)
    return Dfa(alphabet, 1, 0, frozenset({0}), (tuple([0] * len(alphabet)),))


def from_words(words: Iterable[str], alphabet) -> Dfa:
    """Minimal DFA of a finite language (prefix-tree construction)."""
    alphabet = tuple(alphabet)
    index = {a: k for k, a in enumerate(alphabet)}
    table = [[None] * len(alphabet)]
    finals = set()
    for w in words:
        q = 0
        for a in w:
            k = index[a]
            if table[q][k] is None:
                table.append([None] * len(alphabet))
                table[q][k] = len(table) - 1
            q = table[q][k]
        finals.add(q)
    return minimize(Dfa(alphabet, len(table), 0, frozenset(finals),
                        tuple(tuple(r) for r in table)))


def concat(d1: Dfa, d2: Dfa) -> Dfa:
    """Minimal DFA of the product language L1·L2."""
    if d1.alphabet != d2.alphabet:
        raise ValueError("automata over different alphabets")
    nfa, b1 = _Nfa.from_dfa(d1)
    _, b2 = _Nfa.from_dfa(d2, offset_into=nfa)
    nfa.initials = {b1 + d1.initial} if d1.n_states else set()
    for f in d1.finals:
        nfa.eps[b1 + f].add(b2 + d2.initial)
    nfa.finals = {b2 + f for f in d2.finals}
    if not nfa.initials:
        return empty_language(d1.alphabet)
    return minimize(nfa.determinize())


def concat_word(d: Dfa, w: str) -> Dfa:
    """L·{w}"""
    return concat(d, from_words([w], d.alphabet))


def prepend_word(w: str, d: Dfa) -> Dfa:
    """{w}·L"""
    return concat(from_words([w], d.alphabet), d)


# ------------------------------------------------------ ideals and roots


def right_ideal_closure(d: Dfa) -> Dfa:
    """L·A*, via a product with a one-bit "already accepted" flag."""
    c = complete(d)
    start = (c.initial, c.initial in c.finals)
    ids = {start: 0}
    order = [start]
    table = []
    i = 0
    while i < len(order):
        q, seen = order[i]
        row = []
        for t in c.delta[q]:
            nxt = (t, seen or t in c.finals)
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            row.append(ids[nxt])
        table.append(tuple(row))
        i += 1
    finals = frozenset(i for i, (_, seen) in enumerate(order) if seen)
    return minimize(Dfa(c.alphabet, len(order), 0, finals, tuple(table)))


def left_ideal_closure(d: Dfa) -> Dfa:
    """A*·L"""
    return mirror(right_ideal_closure(mirror(d)))


def two_sided_ideal_closure(d: Dfa) -> Dfa:
    """A*·L·A*"""
    return left_ideal_closure(right_ideal_closure(d))


def is_right_ideal(d: Dfa) -> bool:
    return equivalent(d, right_ideal_closure(d))


def is_left_ideal(d: Dfa) -> bool:
    return equivalent(d, left_ideal_closure(d))


def is_two_sided_ideal(d: Dfa) -> bool:
    return equivalent(d, two_sided_ideal_closure(d))


def prefix_root(d: Dfa) -> Dfa:
    """D = L' minus L'A+ for L' = LA*, a prefix code with DA* = LA*."""
    r = complete(right_ideal_closure(d))
    sink = r.n_states
    table = [tuple(sink for _ in row) if q in r.finals else row
             for q, row in enumerate(r.delta)]
    table.append(tuple([sink] * len(r.alphabet)))
    return minimize(Dfa(r.alphabet, r.n_states + 1, r.initial, r.finals, tuple(table)))


def suffix_root(d: Dfa) -> Dfa:
    """G = L' minus A+L' for L' = A*L, a suffix code with A*G = A*L."""
    return mirror(prefix_root(mirror(d)))


def is_prefix_code(d: Dfa) -> bool:
    """No accepted word is a proper prefix of another accepted word."""
    t = trim(d)
    for f in t.finals:
        # any nonempty path from f reaching a final state?
        stack = [q for q in t.delta[f] if q is not None]
        seen = set(stack)
        while stack:
            q = stack.pop()
            if q in t.finals:
                return False
            for r in t.delta[q]:
                if r is not None and r not in seen:
                    seen.add(r)
                    stack.append(r)
    return True


def is_suffix_code(d: Dfa) -> bool:
    return is_prefix_code(mirror(d))


# ------------------------------------------------------------ enumeration


def enumerate_words(d: Dfa, n: int, limit: int = ENUMERATION_LIMIT) -> list[str]:
    """Accepted words of length exactly ``n`` in lexicographic order
    (with respect to the alphabet order)."""
    if n < 0:
        raise ValueError("length must be nonnegative")
    if d.n_states == 0:
        return []
    # live[k]: states that reach a final state in exactly k steps
    live = [set(d.finals)]
    for _ in range(n):
        prev = live[-1]
        live.append({q for q, row in enumerate(d.delta)
                     if any(t is not None and t in prev for t in row)})
    out: list[str] = []
    if d.initial not in live[n]:
        return out
    stack = [(d.initial, "")]
    while stack:
        q, w = stack.pop()
        rest = n - len(w)
        if rest == 0:
            out.append(w)
            if len(out) > limit:
                raise LimitExceeded(f"more than {limit} words of length {n}")
            continue
        for k in reversed(range(len(d.alphabet))):
            t = d.delta[q][k]
            if t is not None and t in live[rest - 1]:
                stack.append((t, w + d.alphabet[k]))
    return out


def count_words(d: Dfa, n: int) -> int:
    """Number of accepted words of length n (no enumeration)."""
    counts = [0] * d.n_states
    if d.n_states:
        counts[d.initial] = 1
    for _ in range(n):
        nxt = [0] * d.n_states
        for p, row in enumerate(d.delta):
            if counts[p]:
                for t in row:
                    if t is not None:
                        nxt[t] += counts[p]
        counts = nxt
    return sum(counts[f] for f in d.finals)


# --------------------------------------------------------------- text I/O


def parse_dfa_text(text: str) -> Dfa:
    """Read the line format ``alphabet: a b``, ``states: n``, ``initial: i``,
    ``finals: i j``, ``trans: i a j`` (repeatable).  Blank lines and lines
    starting with ``#`` are skipped.  An optional ``partial: true`` line sets
    ``treat_sink_as_undefined``."""
    alphabet = n = initial = None
    finals: list[int] = []
    trans = []
    partial = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition(":")
        key, parts = key.strip(), value.split()
        try:
            if key == "alphabet":
                alphabet = tuple(parts)
            elif key == "states":
                n = int(parts[0])
            elif key == "initial":
                initial = int(parts[0])
            elif key == "finals":
                finals = [int(p) for p in parts]
            elif key == "trans":
                p, a, q = parts
                trans.append((int(p), a, int(q)))
            elif key == "partial":
                partial = parts[0].lower() in ("true", "yes", "1")
            else:
                raise ValueError(f"unknown key {key!r}")
        except (ValueError, IndexError) as exc:
            raise ValueError(f"line {lineno}: {exc or 'malformed'}") from None
    if alphabet is None or n is None or initial is None:
        raise ValueError("DFA text needs alphabet, states and initial lines")
    return Dfa.from_transitions(alphabet, n, initial, finals, trans, partial)


def format_dfa_text(d: Dfa) -> str:
    lines = [f"alphabet: {' '.join(d.alphabet)}",
             f"states: {d.n_states}",
             f"initial: {d.initial}",
             f"finals: {' '.join(str(f) for f in sorted(d.finals))}"]
    if d.treat_sink_as_undefined:
        lines.append("partial: true")
    lines += [f"trans: {p} {a} {q}" for p, a, q in d.transitions()]
    return "\n".join(lines) + "\n"
