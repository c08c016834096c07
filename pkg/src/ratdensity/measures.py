"""Shift-invariant measures given by their values on cylinders.

``mu(w)`` is the measure of the cylinder of ``w``.  Bernoulli, Markov and
sofic measures are exact whenever their parameters are rational and expose
a linear representation (λ, φ, γ) with μ(w) = λ φ(w) γ.  Measures of
primitive substitution shifts are computed from Perron vectors of the
block substitutions and are exact only when that Perron data is rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

import numpy as np
from scipy.sparse import csr_matrix

from .errors import InvalidMeasure, NotSofic
from .numeric import (ApproxReal, STOCHASTIC_TOL, error_of, is_exact, is_primitive,
                      parse_scalar, perron_vector, recurrent_classes, to_float,
                      vecmat)
from .shift import DEFAULT_HORIZON, FullShift, Sft, Sofic, Substitution, SubstitutionMorphism


def _scalars(values, exact):
    return [parse_scalar(v, exact) for v in values]


def _matrix(rows, exact):
    return [_scalars(r, exact) for r in rows]


def _all_exact(*blocks) -> bool:
    ok = True
    for b in blocks:
        for v in b:
            if isinstance(v, (list, tuple)):
                ok &= _all_exact(v)
            elif isinstance(v, float):
                return False
    return ok


@dataclass(frozen=True)
class LinearRepresentation:
    """μ(w) = λ φ(w₀)…φ(w_{n-1}) γ."""

    alphabet: tuple[str, ...]
    lam: tuple
    phi: dict
    gamma: tuple

    @property
    def dimension(self) -> int:
        return len(self.lam)

    @property
    def exact(self) -> bool:
        return all(is_exact(x) for x in self.lam) and all(
            is_exact(x) for a in self.alphabet for row in self.phi[a] for x in row)

    def transfer(self):
        """P = Σ_a φ(a)."""
        n = self.dimension
        zero = Fraction(0) if self.exact else 0.0
        P = [[zero] * n for _ in range(n)]
        for a in self.alphabet:
            for i, row in enumerate(self.phi[a]):
                for j, v in enumerate(row):
                    P[i][j] += v
        return P

    def row(self, w: str):
        """λ φ(w) as a row vector."""
        x = list(self.lam)
        for a in w:
            x = vecmat(x, self.phi[a])
        return x

    def __call__(self, w: str):
        x = self.row(w)
        return sum((xi * g for xi, g in zip(x, self.gamma)), Fraction(0) if self.exact else 0.0)


class Measure:
    alphabet: tuple[str, ...]
    exact: bool = True
    is_sofic = True

    def mu(self, w: str):
        raise NotImplementedError

    __call__ = lambda self, w: self.mu(w)

    def linear_representation(self) -> LinearRepresentation:
        raise NotSofic(f"{type(self).__name__} has no linear representation")

    def support(self):
        raise NotImplementedError

    def is_ergodic(self) -> bool:
        """A sufficient test; False means "not established"."""
        return False

    def is_mixing(self) -> bool:
        return False

    def sample_path(self, n: int, seed=None) -> str:
        raise NotImplementedError

    def _check_word(self, w):
        bad = set(w) - set(self.alphabet)
        if bad:
            raise ValueError(f"symbols {sorted(bad)} not in alphabet {self.alphabet}")


class Bernoulli(Measure):
    def __init__(self, weights: dict):
        self.alphabet = tuple(weights)
        self.exact = _all_exact(list(weights.values()))
        self.weights = dict(zip(self.alphabet, _scalars(weights.values(), self.exact)))
        if any(v < 0 for v in self.weights.values()):
            raise InvalidMeasure("negative letter weight")
        total = sum(self.weights.values())
        if (total != 1) if self.exact else abs(total - 1) > STOCHASTIC_TOL:
            raise InvalidMeasure(f"letter weights sum to {total}, not 1")

    def mu(self, w):
        self._check_word(w)
        r = Fraction(1) if self.exact else 1.0
        for a in w:
            r *= self.weights[a]
        return r

    def linear_representation(self):
        one = Fraction(1) if self.exact else 1.0
        return LinearRepresentation(self.alphabet, (one,),
                                    {a: [[p]] for a, p in self.weights.items()}, (one,))

    def support(self):
        dead = [a for a, p in self.weights.items() if p == 0]
        return Sft(self.alphabet, dead) if dead else FullShift(self.alphabet)

    def is_ergodic(self):
        return True

    def is_mixing(self):
        return True

    def sample_path(self, n, seed=None):
        rng = np.random.default_rng(seed)
        p = np.array([to_float(self.weights[a]) for a in self.alphabet])
        idx = rng.choice(len(p), size=n, p=p / p.sum())
        return "".join(self.alphabet[i] for i in idx)

    def __repr__(self):
        return "Bernoulli(" + ", ".join(f"{a}={p}" for a, p in self.weights.items()) + ")"


class Markov(Measure):
    """First-order Markov measure: μ(w) = v[w₀] M[w₀,w₁] ⋯ M[w_{n-2},w_{n-1}].

    State i carries the symbol ``alphabet[i]``.
    """

    def __init__(self, v, M, alphabet=None):
        self.exact = _all_exact(list(v), [list(r) for r in M])
        self.v = _scalars(v, self.exact)
        self.M = _matrix(M, self.exact)
        n = len(self.v)
        self.alphabet = tuple(alphabet) if alphabet else tuple("abcdefghijklmnopqrstuvwxyz"[:n])
        if len(self.alphabet) != n or any(len(r) != n for r in self.M):
            raise InvalidMeasure("dimension mismatch between v, M and the alphabet")
        self._index = {a: i for i, a in enumerate(self.alphabet)}

    def mu(self, w):
        self._check_word(w)
        if not w:
            return Fraction(1) if self.exact else 1.0
        idx = [self._index[a] for a in w]
        r = self.v[idx[0]]
        for i, j in zip(idx, idx[1:]):
            r *= self.M[i][j]
        return r

    def linear_representation(self):
        n = len(self.v)
        zero = Fraction(0) if self.exact else 0.0
        one = Fraction(1) if self.exact else 1.0
        phi = {a: [[self.M[i][j] if j == k else zero for j in range(n)] for i in range(n)]
               for k, a in enumerate(self.alphabet)}
        return LinearRepresentation(self.alphabet, tuple(self.v), phi, (one,) * n)

    def _live(self):
        return [i for i, x in enumerate(self.v) if x > 0]

    def support(self):
        live = set(self._live())
        edges = [(i, self.alphabet[j], j) for i in live for j in live if self.M[i][j] > 0]
        return Sofic.from_graph(self.alphabet, len(self.v), edges)

    def is_ergodic(self):
        live = self._live()
        sub = [[self.M[i][j] for j in live] for i in live]
        closed, transient = recurrent_classes(sub)
        return len(closed) == 1 and not transient

    def is_mixing(self):
        live = self._live()
        return self.is_ergodic() and is_primitive([[self.M[i][j] for j in live] for i in live])

    def sample_path(self, n, seed=None):
        rng = np.random.default_rng(seed)
        v = np.array([to_float(x) for x in self.v])
        M = np.array([[to_float(x) for x in r] for r in self.M])
        if n == 0:
            return ""
        cum = np.cumsum(M / M.sum(axis=1, keepdims=True), axis=1)
        u = rng.random(n)
        s = int(np.searchsorted(np.cumsum(v / v.sum()), u[0], side="right"))
        out = [s]
        for t in range(1, n):
            s = min(int(np.searchsorted(cum[s], u[t], side="right")), len(v) - 1)
            out.append(s)
        return "".join(self.alphabet[i] for i in out)

    def __repr__(self):
        return f"Markov(alphabet={''.join(self.alphabet)!r}, v={[str(x) for x in self.v]})"


class SoficMeasure(Measure):
    def __init__(self, rep: LinearRepresentation):
        self.rep = rep
        self.alphabet = rep.alphabet
        self.exact = rep.exact

    @classmethod
    def from_arrays(cls, alphabet, lam, phi: dict, gamma=None):
        flat = [list(lam)] + [list(r) for a in alphabet for r in phi[a]]
        if gamma is not None:
            flat.append(list(gamma))
        exact = _all_exact(*flat)
        lam = tuple(_scalars(lam, exact))
        gamma = tuple(_scalars(gamma, exact)) if gamma is not None else (
            (Fraction(1) if exact else 1.0,) * len(lam))
        return cls(LinearRepresentation(tuple(alphabet), lam,
                                        {a: _matrix(phi[a], exact) for a in alphabet}, gamma))

    @classmethod
    def from_markov_projection(cls, v, M, letter_of: dict, alphabet=None):
        """Image of the Markov chain (v, M) under the state-to-letter map.

        φ(a)[i, j] = M[i, j] when state j carries the letter a.
        """
        alphabet = tuple(alphabet) if alphabet else tuple(sorted(set(letter_of.values())))
        n = len(v)
        zero = 0
        phi = {a: [[M[i][j] if letter_of[j] == a else zero for j in range(n)]
                   for i in range(n)] for a in alphabet}
        return cls.from_arrays(alphabet, v, phi)

    def mu(self, w):
        self._check_word(w)
        return self.rep(w)

    def linear_representation(self):
        return self.rep

    def _live(self):
        return [i for i, x in enumerate(self.rep.lam) if x > 0]

    def support(self):
        live = set(self._live())
        edges = [(i, a, j) for a in self.alphabet for i in live for j in live
                 if self.rep.phi[a][i][j] > 0]
        return Sofic.from_graph(self.alphabet, self.rep.dimension, edges)

    def is_ergodic(self):
        live = self._live()
        P = self.rep.transfer()
        closed, transient = recurrent_classes([[P[i][j] for j in live] for i in live])
        return len(closed) == 1 and not transient

    def is_mixing(self):
        live = self._live()
        P = self.rep.transfer()
        return self.is_ergodic() and is_primitive([[P[i][j] for j in live] for i in live])

    def sample_path(self, n, seed=None):
        rng = np.random.default_rng(seed)
        d = self.rep.dimension
        lam = np.array([to_float(x) for x in self.rep.lam])
        # joint (letter, next state) table per state
        table = np.array([[[to_float(self.rep.phi[a][i][j]) for j in range(d)]
                           for a in self.alphabet] for i in range(d)])
        flat = table.reshape(d, -1)
        cum = np.cumsum(flat / flat.sum(axis=1, keepdims=True), axis=1)
        u = rng.random(n + 1)
        s = int(np.searchsorted(np.cumsum(lam / lam.sum()), u[n], side="right"))
        out = []
        for t in range(n):
            k = min(int(np.searchsorted(cum[s], u[t], side="right")), flat.shape[1] - 1)
            out.append(self.alphabet[k // d])
            s = k % d
        return "".join(out)

    def __repr__(self):
        return f"SoficMeasure(dim={self.rep.dimension}, alphabet={''.join(self.alphabet)!r})"


def periodic_measure(word: str, alphabet=None) -> SoficMeasure:
    """Uniform measure on the orbit of word^∞, with one hidden state per position."""
    p = len(word)
    alphabet = tuple(alphabet) if alphabet else tuple(sorted(set(word)))
    phi = {a: [[Fraction(1) if j == (i + 1) % p and word[i] == a else Fraction(0)
                for j in range(p)] for i in range(p)] for a in alphabet}
    return SoficMeasure.from_arrays(alphabet, [Fraction(1, p)] * p, phi)


class SubstitutionFrequency(Measure):
    """The unique invariant measure of a primitive substitution shift.

    The frequencies of n-blocks are the normalized Perron left vector of
    the n-block substitution: each n-block u = u₀⋯u_{n-1} is sent to the
    |σ(u₀)| blocks of length n starting inside σ(u₀) in σ(u).
    """

    is_sofic = False

    def __init__(self, morphism, precision: float = 1e-9, horizon: int = DEFAULT_HORIZON):
        if isinstance(morphism, dict):
            morphism = SubstitutionMorphism(morphism)
        self.morphism = morphism
        self.alphabet = morphism.alphabet
        self.precision = precision
        self.shift = Substitution(morphism, horizon)
        self._tables: dict[int, dict[str, object]] = {}
        _, letters = perron_vector(morphism.incidence)
        self.exact = all(is_exact(x) for x in letters)
        self._tables[1] = dict(zip(self.alphabet, letters))

    def block_frequencies(self, n: int) -> dict:
        """{u: μ(u)} for every u ∈ ℒₙ(X)."""
        if n == 0:
            return {"": Fraction(1)}
        table = self._tables.get(n)
        if table is None:
            table = self._compute(n)
            self._tables[n] = table
        return table

    def _compute(self, n):
        blocks = self.shift.factors(n)
        index = {u: i for i, u in enumerate(blocks)}
        rows, cols = [], []
        for i, u in enumerate(blocks):
            img = self.morphism.apply(u)
            for s in range(len(self.morphism.rules[u[0]])):
                j = index.get(img[s:s + n])
                if j is None:
                    raise AssertionError(f"block {img[s:s + n]!r} missing at length {n}; "
                                         "horizon too short")
                rows.append(i)
                cols.append(j)
        A = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(blocks),) * 2)
        _, vec = perron_vector(A)
        return dict(zip(blocks, vec))

    def mu(self, w):
        self._check_word(w)
        table = self.block_frequencies(len(w))
        v = table.get(w)
        if v is not None:
            return v
        return Fraction(0) if self.exact else ApproxReal(0.0, 0.0)

    def linear_representation(self):
        raise NotSofic("substitution measures are not in the sofic class")

    def support(self):
        return self.shift

    def is_ergodic(self):
        return True

    def sample_path(self, n, seed=None, offset=None):
        """A prefix of σᵏ(a) for the first letter a (any orbit is generic).

        With ``offset`` the window starts there instead (used for sampling
        windows at random positions)."""
        start = offset or 0
        w = self.morphism.expand_to(self.alphabet[0], start + n)
        return w[start:start + n]

    def __repr__(self):
        return f"SubstitutionFrequency({self.morphism!r})"


# ------------------------------------------------------------ validation


def _close(x, y, tol=STOCHASTIC_TOL) -> bool:
    if is_exact(x) and is_exact(y):
        return x == y
    return abs(to_float(x) - to_float(y)) <= tol + error_of(x) + error_of(y)


def validate(m: Measure, depth: int = 4) -> dict:
    """Check the cylinder identities up to ``depth`` and raise on the first failure.

    Returns a small report with the number of identities checked.
    """
    checked = 0
    if isinstance(m, Markov):
        _stochastic_or_raise(m.M, "transition matrix")
        if not _vector_close(vecmat(m.v, m.M), m.v):
            raise InvalidMeasure("not invariant: vM ≠ v")
        if not _close(sum(m.v), 1):
            raise InvalidMeasure("initial vector does not sum to 1")
    if isinstance(m, SoficMeasure):
        P = m.rep.transfer()
        _stochastic_or_raise(P, "Σ φ(a)")
        if not _vector_close(vecmat(list(m.rep.lam), P), list(m.rep.lam)):
            raise InvalidMeasure("not invariant: λP ≠ λ")
        if any(x < 0 for x in m.rep.lam) or any(
                x < 0 for a in m.alphabet for r in m.rep.phi[a] for x in r):
            raise InvalidMeasure("negative entry in the linear representation")
    if not _close(m.mu(""), 1):
        raise InvalidMeasure(f"μ(ε) = {m.mu('')} ≠ 1")
    for n in range(depth):
        for t in iproduct(m.alphabet, repeat=n):
            w = "".join(t)
            mw = m.mu(w)
            if mw < 0:
                raise InvalidMeasure(f"μ({w!r}) < 0")
            right = sum((m.mu(w + a) for a in m.alphabet[1:]), m.mu(w + m.alphabet[0]))
            if not _close(right, mw):
                raise InvalidMeasure(f"Σ_a μ({w!r}a) = {right} ≠ μ({w!r}) = {mw}")
            left = sum((m.mu(a + w) for a in m.alphabet[1:]), m.mu(m.alphabet[0] + w))
            if not _close(left, mw):
                raise InvalidMeasure(f"not invariant: Σ_a μ(a{w!r}) = {left} ≠ μ({w!r}) = {mw}")
            checked += 2
    return {"ok": True, "identities_checked": checked, "depth": depth,
            "exact": bool(m.exact)}


def _vector_close(x, y) -> bool:
    return all(_close(a, b) for a, b in zip(x, y))


def _stochastic_or_raise(P, what):
    for i, row in enumerate(P):
        if any(x < 0 for x in row):
            raise InvalidMeasure(f"{what} has a negative entry in row {i}")
        if not _close(sum(row), 1):
            raise InvalidMeasure(f"{what} row {i} sums to {sum(row)}")


def language_mass(m: Measure, words) -> object:
    """Σ μ(w) over a finite set of words."""
    total = Fraction(0) if m.exact else 0.0
    for w in words:
        total = total + m.mu(w)
    return total


__all__ = ["LinearRepresentation", "Measure", "Bernoulli", "Markov", "SoficMeasure",
           "SubstitutionFrequency", "periodic_measure", "validate", "language_mass"]
