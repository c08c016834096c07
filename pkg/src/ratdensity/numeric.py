"""Scalars and the small amount of linear algebra the density engine needs.

Two scalar modes are supported.  Exact mode uses :class:`fractions.Fraction`
throughout (always reduced, positive denominator).  Approximate mode uses
:class:`ApproxReal`, a float carrying an absolute error bound that is
propagated through arithmetic.

Matrices are plain lists of rows.  Every routine here works on either
Fractions or floats; a matrix is treated as exact when all of its entries
are ``int`` or ``Fraction``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np
from scipy.sparse import csr_matrix, issparse
from scipy.sparse.csgraph import connected_components

from .errors import NotPrimitive, NotStochastic, SingularSystem

STOCHASTIC_TOL = 1e-9
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ApproxReal:
    """A double together with a nonnegative absolute error bound."""

    value: float
    error: float = 0.0

    def __post_init__(self):
        if not self.error >= 0:
            raise ValueError("error bound must be nonnegative")

    @staticmethod
    def lift(x) -> "ApproxReal":
        if isinstance(x, ApproxReal):
            return x
        return ApproxReal(float(x), 0.0)

    def _round(self, v):
        return _EPS * abs(v)

    def __add__(self, other):
        o = ApproxReal.lift(other)
        v = self.value + o.value
        return ApproxReal(v, self.error + o.error + self._round(v))

    __radd__ = __add__

    def __neg__(self):
        return ApproxReal(-self.value, self.error)

    def __sub__(self, other):
        return self + (-ApproxReal.lift(other))

    def __rsub__(self, other):
        return ApproxReal.lift(other) - self

    def __mul__(self, other):
        o = ApproxReal.lift(other)
        v = self.value * o.value
        err = (abs(self.value) * o.error + abs(o.value) * self.error
               + self.error * o.error + self._round(v))
        return ApproxReal(v, err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = ApproxReal.lift(other)
        if abs(o.value) <= o.error:
            raise ZeroDivisionError("divisor interval contains zero")
        v = self.value / o.value
        lo = abs(o.value) - o.error
        err = (self.error + abs(v) * o.error) / lo + self._round(v)
        return ApproxReal(v, err)

    def __rtruediv__(self, other):
        return ApproxReal.lift(other) / self

    def __float__(self):
        return self.value

    def __abs__(self):
        return ApproxReal(abs(self.value), self.error)

    def __lt__(self, other):
        return self.value < float(other)

    def __le__(self, other):
        return self.value <= float(other)

    def __gt__(self, other):
        return self.value > float(other)

    def __ge__(self, other):
        return self.value >= float(other)

    def contains(self, x, slack=0.0) -> bool:
        return abs(self.value - float(x)) <= self.error + slack

    def __str__(self):
        return f"{self.value:.12g}±{self.error:.2g}"


def parse_scalar(text, exact=True):
    """Parse ``"p/q"``, a decimal string or a number into a scalar."""
    if isinstance(text, (Fraction, int)):
        q = Fraction(text)
    elif isinstance(text, float):
        q = Fraction(str(text))
    else:
        q = Fraction(str(text).strip())
    return q if exact else float(q)


def is_exact(x) -> bool:
    return isinstance(x, (int, Rational)) and not isinstance(x, bool)


def is_exact_matrix(A) -> bool:
    return all(is_exact(v) for row in A for v in row)


def to_float(x) -> float:
    return float(x)


def error_of(x) -> float:
    return x.error if isinstance(x, ApproxReal) else 0.0


def format_scalar(x, error=None) -> str:
    """``"p/q"`` for exact values, ``"d.ddd±e"`` otherwise."""
    if isinstance(x, Fraction) or (isinstance(x, int) and not isinstance(x, bool)):
        return str(Fraction(x))
    err = error if error is not None else error_of(x)
    return f"{float(x):.12g}±{float(err):.3g}"


def identity(n, exact=True):
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(A, B):
    n, k = len(A), len(B[0]) if B else 0
    inner = len(B)
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(k):
            s = 0
            for t in range(inner):
                a = Ai[t]
                if a:
                    s += a * B[t][j]
            row.append(s)
        out.append(row)
    return out


def vecmat(x, A):
    """Row vector times matrix."""
    k = len(A[0]) if A else 0
    out = [0] * k
    for i, xi in enumerate(x):
        if xi:
            row = A[i]
            for j in range(k):
                if row[j]:
                    out[j] += xi * row[j]
    return out


def matvec(A, y):
    return [sum((a * b for a, b in zip(row, y) if a), 0) for row in A]


def _gauss_jordan(A, B, exact):
    """Solve ``A X = B`` with ``B`` given as a list of rows (n x k)."""
    n = len(A)
    M = [list(A[i]) + list(B[i]) for i in range(n)]
    k = len(B[0]) if n else 0
    scale = max((abs(v) for row in A for v in row), default=0) or 1
    for col in range(n):
        if exact:
            piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        else:
            piv = max(range(col, n), key=lambda r: abs(M[r][col]))
            if abs(M[piv][col]) <= 1e-12 * scale:
                piv = None
        if piv is None:
            raise SingularSystem(f"matrix is singular (column {col})")
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        prow = [v / p for v in M[col]]
        M[col] = prow
        for r in range(n):
            if r != col:
                f = M[r][col]
                if f:
                    row = M[r]
                    M[r] = [a - f * b for a, b in zip(row, prow)]
    return [row[n:n + k] for row in M]


def solve_linear(A, b):
    """Return ``x`` with ``A x = b``; exact Gaussian elimination over Q when possible."""
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("solve_linear needs a square system")
    exact = is_exact_matrix(A) and all(is_exact(v) for v in b)
    if exact:
        A = [[Fraction(v) for v in row] for row in A]
        b = [Fraction(v) for v in b]
    X = _gauss_jordan(A, [[v] for v in b], exact)
    return [row[0] for row in X]


def _check_stochastic(P, exact):
    for i, row in enumerate(P):
        if any(v < 0 for v in row):
            raise NotStochastic(f"row {i} has a negative entry")
        s = sum(row)
        if exact:
            if s != 1:
                raise NotStochastic(f"row {i} sums to {s}, not 1")
        elif abs(float(s) - 1.0) > STOCHASTIC_TOL:
            raise NotStochastic(f"row {i} sums to {float(s)!r}, not 1")


def strongly_connected(support_rows, n):
    """SCC labels of the digraph given by adjacency lists ``support_rows``."""
    rows, cols = [], []
    for i, targets in enumerate(support_rows):
        for j in targets:
            rows.append(i)
            cols.append(j)
    g = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    _, labels = connected_components(g, directed=True, connection="strong")
    return labels


def recurrent_classes(P):
    """Closed communicating classes of a stochastic matrix, plus transient states."""
    n = len(P)
    support = [[j for j, v in enumerate(row) if v] for row in P]
    labels = strongly_connected(support, n)
    members: dict[int, list[int]] = {}
    for i, c in enumerate(labels):
        members.setdefault(int(c), []).append(i)
    closed = []
    transient = []
    for c, states in members.items():
        if all(labels[j] == c for i in states for j in support[i]):
            closed.append(sorted(states))
        else:
            transient.extend(states)
    closed.sort()
    return closed, sorted(transient)


def stationary_distribution(Q):
    """The unique stationary vector of an irreducible stochastic matrix."""
    n = len(Q)
    exact = is_exact_matrix(Q)
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    # pi (Q - I) = 0, sum pi = 1; transpose and overwrite the last equation.
    A = [[Q[j][i] - (one if i == j else zero) for j in range(n)] for i in range(n)]
    A[-1] = [one] * n
    b = [zero] * (n - 1) + [one]
    return solve_linear(A, b)


def cesaro_projector(P):
    """Limit in average of the powers of a row-stochastic matrix.

    Computed structurally: closed classes get their stationary vectors,
    transient states mix them with their absorption probabilities.
    """
    n = len(P)
    exact = is_exact_matrix(P)
    if exact:
        P = [[Fraction(v) for v in row] for row in P]
    else:
        P = [[float(v) for v in row] for row in P]
    _check_stochastic(P, exact)
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    closed, transient = recurrent_classes(P)
    Pi = [[zero] * n for _ in range(n)]
    stationary = []
    for states in closed:
        Q = [[P[i][j] for j in states] for i in states]
        pi = stationary_distribution(Q)
        stationary.append(pi)
        for i in states:
            for j, v in zip(states, pi):
                Pi[i][j] = v
    if transient:
        t_index = {s: k for k, s in enumerate(transient)}
        m = len(transient)
        A = [[(one if a == b else zero) - P[s][t] for b, t in enumerate(transient)]
             for a, s in enumerate(transient)]
        S = [[sum((P[s][j] for j in states), zero) for states in closed]
             for s in transient]
        B = _gauss_jordan(A, S, exact) if m else []
        for s in transient:
            brow = B[t_index[s]]
            for c, states in enumerate(closed):
                w = brow[c]
                if w:
                    for j, v in zip(states, stationary[c]):
                        Pi[s][j] += w * v
    return Pi


def _as_csr(M):
    if issparse(M):
        return csr_matrix(M, dtype=float)
    return csr_matrix(np.asarray([[float(v) for v in row] for row in M]))


def is_primitive(M) -> bool:
    """Irreducible and aperiodic support graph (period via BFS levels)."""
    A = _as_csr(M)
    n = A.shape[0]
    if n == 0:
        return False
    if A.nnz and (A.data < 0).any():
        return False
    ncomp, _ = connected_components(A, directed=True, connection="strong")
    if ncomp != 1:
        return False
    level = [-1] * n
    level[0] = 0
    frontier = [0]
    indptr, indices = A.indptr, A.indices
    g = 0
    while frontier:
        nxt = []
        for u in frontier:
            for v in indices[indptr[u]:indptr[u + 1]]:
                if level[v] < 0:
                    level[v] = level[u] + 1
                    nxt.append(v)
        frontier = nxt
    for u in range(n):
        for v in indices[indptr[u]:indptr[u + 1]]:
            g = math.gcd(g, level[u] + 1 - level[v])
    return g == 1


def _power_iteration(A, tol=1e-15, max_iter=20000):
    n = A.shape[0]
    AT = A.T.tocsr()
    v = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        w = AT @ v
        w /= w.sum()
        # Lazy averaging damps any residual periodic component.
        w = 0.5 * (w + v)
        if np.abs(w - v).max() < tol:
            v = w
            break
        v = w
    w = AT @ v
    theta = w.sum() / v.sum()
    return theta, v / v.sum()


def _rationalize(values, max_den):
    return [Fraction(float(x)).limit_denominator(max_den) for x in values]


def _exact_entries(M, A):
    """Nonzero entries as exact ``(i, j, Fraction)`` triples, or None."""
    if not issparse(M) and is_exact_matrix(M):
        return [(i, j, Fraction(v)) for i, row in enumerate(M)
                for j, v in enumerate(row) if v]
    coo = A.tocoo()
    if all(float(x).is_integer() for x in coo.data):
        return [(int(i), int(j), Fraction(int(a)))
                for i, j, a in zip(coo.row, coo.col, coo.data)]
    return None


def _certify_exact(entries, n, theta, v):
    """Exact check of ``v A = theta v`` with ``v`` positive and summing to 1."""
    if sum(v) != 1 or any(x <= 0 for x in v):
        return False
    out = [Fraction(0)] * n
    for i, j, a in entries:
        out[j] += v[i] * a
    return all(out[j] == theta * v[j] for j in range(n))


def perron_data(M, exact=True):
    """Dominant eigenvalue and normalized left eigenvector.

    Returns ``(theta, vector, error, is_exact)``.  In the exact case theta
    and the entries are Fractions and ``error`` is 0; otherwise theta is a
    float, the vector a numpy array and ``error`` bounds both.
    """
    A = _as_csr(M)
    if not is_primitive(A):
        raise NotPrimitive("matrix is not primitive")
    theta, v = _power_iteration(A)
    AT = A.T.tocsr()
    w = AT @ v
    nz = v > 0
    ratios = w[nz] / v[nz]
    cw_width = float(ratios.max() - ratios.min()) if nz.any() else math.inf
    residual = float(np.abs(w - theta * v).max())
    entries = _exact_entries(M, A) if exact else None
    if entries is not None:
        n = A.shape[0]
        theta_q = Fraction(float(theta)).limit_denominator(10**6)
        for max_den in (10**6, 10**9):
            vq = _rationalize(v, max_den)
            s = sum(vq)
            if s:
                vq = [x / s for x in vq]
            if _certify_exact(entries, n, theta_q, vq):
                return theta_q, vq, 0, True
        if n <= 80 and not issparse(M):
            vq = _exact_left_nullvector(M, theta_q)
            if vq is not None:
                return theta_q, vq, 0, True
    err = float(max(cw_width, residual) * 10 + 64 * _EPS)
    return float(theta), v, err, False


def _exact_left_nullvector(M, theta):
    n = len(M)
    Mq = [[Fraction(x) for x in row] for row in M]
    A = [[Mq[j][i] - (theta if i == j else 0) for j in range(n)] for i in range(n)]
    A[-1] = [Fraction(1)] * n
    b = [Fraction(0)] * (n - 1) + [Fraction(1)]
    try:
        v = solve_linear(A, b)
    except SingularSystem:
        return None
    if any(x <= 0 for x in v):
        return None
    check = vecmat(v, Mq)
    if any(check[j] != theta * v[j] for j in range(n)):
        return None
    return v


def perron_vector(M, exact=True):
    """Perron root and normalized positive left eigenvector of a primitive matrix.

    Exact (Fractions) when the data are rational and certify exactly,
    otherwise :class:`ApproxReal` values with a residual-based bound.
    """
    theta, v, err, ok = perron_data(M, exact=exact)
    if ok:
        return theta, list(v)
    return ApproxReal(theta, err), [ApproxReal(float(x), err) for x in v]
