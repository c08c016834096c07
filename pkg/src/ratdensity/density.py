"""Densities of rational languages.

The density of L under μ is the Cesàro limit of μ(L ∩ Aⁿ).  Several routes
are offered:

* closed forms for right, left, quasi- and two-sided ideals, using the
  prefix root D and the suffix root G of the language;
* the exact Cesàro engine for measures with a linear representation: the
  measure and the automaton are multiplied into one stochastic matrix whose
  Cesàro projector gives the density;
* the aperiodic sum Σ μ(D_m) μ(G_m) over the elements of J_X(M);
* the skew-product formula δ(A*L) δ(LA*) / d, valid when the weighted
  counting measure is ergodic;
* truncated Cesàro averages and Monte Carlo estimates.

Every result carries its method, the assumptions it rests on and an error
bound (zero for exact methods).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import automata as fa
from .automata import Dfa
from .errors import (DensityError, ElementNotInJClass, LimitExceeded, NotACode,
                     NotAperiodic, NotLeftIdeal, NotRightIdeal, NotSofic,
                     NotTwoSidedIdeal, UndecidedAtHorizon, Unsupported)
from .measures import Measure, SubstitutionFrequency, validate
from .monoid import (TransitionMonoid, green_structure, is_aperiodic, j_class_of_shift,
                     transition_monoid)
from .numeric import ApproxReal, cesaro_projector, error_of, format_scalar, is_exact, to_float

TRUNCATION_LIMIT = 10**6
DISAGREEMENT_SLACK = 0.02


class Method(str, enum.Enum):
    RIGHT_IDEAL = "RightIdeal"
    LEFT_IDEAL = "LeftIdeal"
    QUASI_IDEAL = "QuasiIdeal"
    TWO_SIDED_IDEAL = "TwoSidedIdeal"
    APERIODIC = "Aperiodic"
    ERGODIC_SKEW = "ErgodicSkewFormula"
    EXACT_CESARO = "ExactCesaro"
    TRUNCATED_CESARO = "TruncatedCesaro"
    MONTE_CARLO = "MonteCarlo"

    def __str__(self):
        return self.value


@dataclass
class DensityResult:
    value: object
    method: Method
    assumptions: list[str] = field(default_factory=list)
    error_bound: float = 0.0
    strong_sense: bool | None = None
    refuted: bool = False

    @property
    def is_exact(self) -> bool:
        return is_exact(self.value) and self.error_bound == 0

    def __float__(self):
        return to_float(self.value)

    def to_dict(self) -> dict:
        if self.is_exact:
            value = str(Fraction(self.value))
        else:
            value = format_scalar(to_float(self.value), self.error_bound)
        out = {"value": value, "method": str(self.method),
               "assumptions": list(self.assumptions),
               "error_bound": "0" if self.error_bound == 0 else f"{self.error_bound:.3g}"}
        if self.strong_sense is not None:
            out["strong_sense"] = self.strong_sense
        if self.refuted:
            out["refuted"] = True
        return out

    def __str__(self):
        d = self.to_dict()
        return f"{d['value']} ({d['method']})"


def _value_and_error(x):
    """Split a scalar into (exact-or-float value, error bound)."""
    if isinstance(x, ApproxReal):
        return x.value, x.error
    return x, 0.0


def _align(mu: Measure, L: Dfa) -> Dfa:
    if L.alphabet == mu.alphabet:
        return L
    return fa.with_alphabet(L, mu.alphabet)


# ---------------------------------------------------------- exact Cesàro


def _product_chain(rep, L: Dfa):
    """Reachable part of (representation index × DFA state).

    Returns (pairs, P, x, y) with P stochastic, x the start row and y the
    end column, so that μ(L ∩ Aⁿ) = x Pⁿ y.
    """
    c = fa.complete(L)
    exact = rep.exact
    zero = Fraction(0) if exact else 0.0
    n = rep.dimension
    start = [(i, c.initial) for i in range(n) if rep.lam[i] != 0]
    ids = {p: k for k, p in enumerate(start)}
    pairs = list(start)
    edges: list[dict[int, object]] = []
    k = 0
    while k < len(pairs):
        i, q = pairs[k]
        row: dict[int, object] = {}
        for s, a in enumerate(rep.alphabet):
            q2 = c.delta[q][s]
            for j, w in enumerate(rep.phi[a][i]):
                if w == 0:
                    continue
                key = (j, q2)
                if key not in ids:
                    ids[key] = len(pairs)
                    pairs.append(key)
                t = ids[key]
                row[t] = row.get(t, zero) + w
        edges.append(row)
        k += 1
    m = len(pairs)
    P = [[zero] * m for _ in range(m)]
    for r, row in enumerate(edges):
        for t, w in row.items():
            P[r][t] = w
    x = [rep.lam[i] if (i, q) in ids and k < len(start) else zero
         for k, (i, q) in enumerate(pairs)]
    y = [rep.gamma[j] if q in c.finals else zero for (j, q) in pairs]
    return pairs, P, x, y


def density_exact_cesaro(mu: Measure, L: Dfa) -> DensityResult:
    """x Π y where Π is the Cesàro projector of the product chain."""
    rep = mu.linear_representation()
    L = _align(mu, L)
    _, P, x, y = _product_chain(rep, L)
    if not P:
        return DensityResult(Fraction(0) if rep.exact else 0.0, Method.EXACT_CESARO)
    Pi = cesaro_projector(P)
    xPi = [sum((x[i] * Pi[i][j] for i in range(len(x)) if x[i]), 0 * x[0])
           for j in range(len(x))]
    value = sum((a * b for a, b in zip(xPi, y)), 0 * x[0])
    if not rep.exact:
        return DensityResult(float(value), Method.EXACT_CESARO,
                             ["floating-point measure parameters"], 1e-9)
    return DensityResult(Fraction(value), Method.EXACT_CESARO)


# ------------------------------------------------------------ code mass


def _truncated_code_mass(mu: SubstitutionFrequency, C: Dfa, reverse: bool,
                         tol: float, max_len: int = 4096):
    """Σ μ(w) over w ∈ C ∩ ℒ(X), by increasing length.

    Words of ℒₙ₊₁(X) are tracked through their DFA state, obtained from
    the state of their prefix (or suffix when ``reverse``; then C must be
    the mirror automaton).  Stops once 8 consecutive lengths added less
    than tol/4 in total; the returned bound is heuristic.
    """
    states = {"": C.initial}
    total = Fraction(0) if mu.exact else ApproxReal(0.0)
    if C.initial in C.finals:
        total = total + 1
    quiet = 0
    last = 0.0
    for n in range(1, max_len + 1):
        table = mu.block_frequencies(n)
        added = Fraction(0) if mu.exact else ApproxReal(0.0)
        nxt = {}
        for w, p in table.items():
            if reverse:
                prev, a = states.get(w[1:]), w[0]
            else:
                prev, a = states.get(w[:-1]), w[-1]
            if prev is None:
                continue
            q = C.delta[prev][C.symbol_index(a)]
            if q is None:
                continue
            nxt[w] = q
            if q in C.finals:
                added = added + p
        states = nxt
        total = total + added
        inc = to_float(added)
        quiet = quiet + 1 if inc < tol / 4 else 0
        last = max(last, inc) if quiet else 0.0
        if not states or quiet >= 8:
            err = last * 8 + tol / 4 if states else 0.0
            value, perr = _value_and_error(total)
            return value, err + perr
    raise LimitExceeded(f"code mass did not stagnate within length {max_len}")


def mu_of_code(mu: Measure, C: Dfa):
    """μ(C) = Σ_{w ∈ C} μ(w) for a prefix or suffix code C.

    Returns ``(value, error_bound)``.
    """
    C = _align(mu, C)
    prefix = fa.is_prefix_code(C)
    if not prefix and not fa.is_suffix_code(C):
        raise NotACode("language is neither a prefix code nor a suffix code")
    if mu.is_sofic:
        ideal = fa.right_ideal_closure(C) if prefix else fa.left_ideal_closure(C)
        r = density_exact_cesaro(mu, ideal)
        return r.value, r.error_bound
    if isinstance(mu, SubstitutionFrequency):
        if prefix:
            return _truncated_code_mass(mu, fa.trim(fa.minimize(C)), False, mu.precision)
        return _truncated_code_mass(mu, fa.trim(fa.mirror(C)), True, mu.precision)
    raise Unsupported(f"no code-mass routine for {type(mu).__name__}")


# ----------------------------------------------------------------- ideals


def _product_result(a, b, method, assumptions, strong=None):
    (va, ea), (vb, eb) = a, b
    value = va * vb
    err = ea * to_float(vb) + eb * to_float(va) + ea * eb
    return DensityResult(value, method, assumptions, err, strong)


def density_right_ideal(mu: Measure, L: Dfa) -> DensityResult:
    L = _align(mu, L)
    if not fa.is_right_ideal(L):
        raise NotRightIdeal("L·A* differs from L")
    value, err = mu_of_code(mu, fa.prefix_root(L))
    return DensityResult(value, Method.RIGHT_IDEAL, [], err, True)


def density_left_ideal(mu: Measure, L: Dfa) -> DensityResult:
    L = _align(mu, L)
    if not fa.is_left_ideal(L):
        raise NotLeftIdeal("A*·L differs from L")
    validate(mu, depth=1)
    value, err = mu_of_code(mu, fa.suffix_root(L))
    return DensityResult(value, Method.LEFT_IDEAL, ["μ shift-invariant"], err, True)


def density_quasi_ideal(mu: Measure, right: Dfa, left: Dfa, mixing: bool = False) -> DensityResult:
    """δ(L ∩ K) = μ(D) μ(G) for a right ideal L and a left ideal K (μ ergodic).

    The density holds in the strong sense only under mixing, which the
    caller asserts with ``mixing=True``.
    """
    right, left = _align(mu, right), _align(mu, left)
    if not fa.is_right_ideal(right):
        raise NotRightIdeal("first argument is not a right ideal")
    if not fa.is_left_ideal(left):
        raise NotLeftIdeal("second argument is not a left ideal")
    d = mu_of_code(mu, fa.prefix_root(right))
    g = mu_of_code(mu, fa.suffix_root(left))
    assumptions = ["μ ergodic"] + (["μ mixing"] if mixing else [])
    return _product_result(d, g, Method.QUASI_IDEAL, assumptions, True if mixing else None)


def density_two_sided_ideal(mu: Measure, L: Dfa, x=None) -> DensityResult:
    """1 if L meets ℒ(X), else 0 (μ ergodic with support X).

    For substitution shifts a missing witness is only known up to the
    horizon; the result is then 0 with a horizon-conditional assumption.
    """
    L = _align(mu, L)
    if not fa.is_two_sided_ideal(L):
        raise NotTwoSidedIdeal("A*LA* differs from L")
    x = x if x is not None else mu.support()
    assumptions = ["μ ergodic with support X"]
    try:
        hit = x.intersect_nonempty(L)
    except UndecidedAtHorizon as exc:
        hit = False
        assumptions.append(f"horizon-conditional: no witness up to length {exc.horizon}")
    return DensityResult(Fraction(int(hit)), Method.TWO_SIDED_IDEAL, assumptions, 0.0, True)


# ------------------------------------------------------- monoid formulas


def _element_language(m: TransitionMonoid, s: int) -> Dfa:
    return fa.minimize(m.preimage_dfa([s]))


def _element_roots(mu, m, s):
    pre = _element_language(m, s)
    return mu_of_code(mu, fa.prefix_root(pre)), mu_of_code(mu, fa.suffix_root(pre))


def _sum_results(parts):
    value, err = 0, 0.0
    for v, e in parts:
        value = value + v
        err += e
    return value, err


def density_aperiodic(mu: Measure, L: Dfa, x=None) -> DensityResult:
    """Σ_{m ∈ P ∩ J_X(M)} μ(D_m) μ(G_m) over the accepting elements P."""
    L = _align(mu, L)
    x = x if x is not None else mu.support()
    m = transition_monoid(L)
    if not is_aperiodic(m):
        raise NotAperiodic(f"transition monoid ({len(m)} elements) has a nontrivial group")
    report = j_class_of_shift(m, x)
    jx = set(report.j_x)
    parts = []
    for s in m.accepting_elements():
        if s in jx:
            d, g = _element_roots(mu, m, s)
            r = _product_result(d, g, Method.APERIODIC, [])
            parts.append((r.value, r.error_bound))
    value, err = _sum_results(parts)
    if not parts:
        value = Fraction(0) if mu.exact else 0.0
    assumptions = ["μ ergodic with support X"]
    if report.horizon_conditional:
        assumptions.append("horizon-conditional shift image")
    return DensityResult(value, Method.APERIODIC, assumptions, err,
                         True if mu.is_mixing() else None)


def density_ergodic_formula(mu: Measure, L: Dfa | None = None, x=None, *,
                            monoid: TransitionMonoid | None = None,
                            element: int | None = None, report=None) -> DensityResult:
    """δ(L) = δ(A*L) δ(LA*) / d for L = φ⁻¹(m), m ∈ J_X(M).

    Pass ``monoid`` and ``element`` to fix the morphism; otherwise the
    syntactic monoid of L is used and L must be a single element preimage.
    """
    x = x if x is not None else mu.support()
    if monoid is None:
        if L is None:
            raise ValueError("need a language or a monoid element")
        L = _align(mu, L)
        monoid = transition_monoid(fa.minimize(L))
        acc = monoid.accepting_elements()
        if len(acc) != 1:
            raise ValueError(f"L is the preimage of {len(acc)} elements, not one")
        element = acc[0]
    report = report or j_class_of_shift(monoid, x)
    assumptions = ["weighted counting measure ergodic"]
    if report.horizon_conditional:
        assumptions.append("horizon-conditional shift image")
    if element not in report.j_x:
        return DensityResult(Fraction(0), Method.ERGODIC_SKEW,
                             ["element outside J_X(M): density 0 in the strong sense"],
                             0.0, True)
    d, g = _element_roots(mu, monoid, element)
    r = _product_result(d, g, Method.ERGODIC_SKEW, assumptions)
    r.value = r.value / report.d
    r.error_bound /= report.d
    return r


def check_in_j_class(monoid, element, report):
    if element not in report.j_x:
        raise ElementNotInJClass(f"element {monoid.words[element] or '1'} is not in J_X(M)")


# ------------------------------------------------------------- estimates


def _cesaro_bound(partials: list[float]) -> float:
    tail = partials[-max(1, len(partials) // 10):]
    return max(tail) - min(tail)


def density_truncated_cesaro(mu: Measure, L: Dfa, N: int,
                             limit: int = TRUNCATION_LIMIT) -> DensityResult:
    """(1/N) Σ_{i<N} μ(L ∩ Aⁱ), with an oscillation-based error estimate."""
    if N <= 0:
        raise ValueError("N must be positive")
    L = fa.complete(_align(mu, L))
    seq = level_masses(mu, L, N, limit)
    partial, running = [], 0.0
    for i, v in enumerate(seq):
        running += v
        partial.append(running / (i + 1))
    value = partial[-1]
    err = _cesaro_bound(partial)
    if isinstance(mu, SubstitutionFrequency) and not mu.exact:
        err += _table_error(mu, N - 1)
    return DensityResult(value, Method.TRUNCATED_CESARO,
                         [f"finite horizon N={N}", "heuristic error bound"], err)


def _table_error(mu, n):
    t = mu.block_frequencies(max(n, 1))
    return sum(error_of(p) for p in t.values())


def level_masses(mu: Measure, L: Dfa, N: int, limit: int = TRUNCATION_LIMIT) -> list[float]:
    """Floats μ(L ∩ Aⁱ) for i < N."""
    L = fa.complete(_align(mu, L))
    if isinstance(mu, SubstitutionFrequency):
        return _substitution_levels(mu, L, N, limit)
    if not mu.is_sofic:
        raise Unsupported(f"no truncation routine for {type(mu).__name__}")
    rep = mu.linear_representation()
    n, Q = rep.dimension, L.n_states
    if N * n * Q > limit * 64:
        raise LimitExceeded(f"N·dim = {N * n * Q} is too large")
    phi = {a: np.array([[to_float(v) for v in r] for r in rep.phi[a]]) for a in rep.alphabet}
    targets = {a: np.array([L.delta[q][k] for q in range(Q)])
               for k, a in enumerate(rep.alphabet)}
    gamma = np.array([to_float(v) for v in rep.gamma])
    finals = np.zeros(Q)
    finals[list(L.finals)] = 1.0
    x = np.zeros((n, Q))
    x[:, L.initial] = [to_float(v) for v in rep.lam]
    out = []
    for _ in range(N):
        out.append(float(gamma @ x @ finals))
        nxt = np.zeros_like(x)
        for a in rep.alphabet:
            y = phi[a].T @ x
            np.add.at(nxt.T, targets[a], y.T)
        x = nxt
    return out


def _substitution_levels(mu, L, N, limit):
    if N - 1 > limit:
        raise LimitExceeded(f"horizon {N} above limit {limit}")
    length = max(N - 1, 1)
    table = mu.block_frequencies(length)
    sums = np.zeros(N)
    for w, p in table.items():
        pv = to_float(p)
        q = L.initial
        if q in L.finals:
            sums[0] += pv
        for i in range(1, N):
            q = L.delta[q][L.symbol_index(w[i - 1])]
            if q in L.finals:
                sums[i] += pv
    return sums.tolist()


def density_monte_carlo(mu: Measure, L: Dfa, samples: int = 1000, N: int = 200,
                        seed: int = 0) -> DensityResult:
    """Average of Cesàro means of the indicator of L along sampled windows.

    The target is the truncated average (1/N) Σ_{i<N} μ(L ∩ Aⁱ); its
    distance to the limit (O(1/N) for sofic measures) is not part of the
    reported bound.
    """
    L = fa.complete(_align(mu, L))
    rng = np.random.default_rng(seed)
    sym = {a: k for k, a in enumerate(L.alphabet)}
    paths = np.empty((samples, max(N - 1, 1)), dtype=np.intp)
    if isinstance(mu, SubstitutionFrequency):
        word = mu.shift.horizon_words(max(mu.shift.horizon, 8 * N))[0]
        codes = np.array([sym[a] for a in word], dtype=np.intp)
        offsets = rng.integers(0, len(word) - N, size=samples)
        for k, off in enumerate(offsets):
            paths[k] = codes[off:off + paths.shape[1]]
    else:
        for k in range(samples):
            path = mu.sample_path(paths.shape[1], seed=int(rng.integers(2**63)))
            paths[k] = [sym[a] for a in path]
    delta = np.array(L.delta, dtype=np.intp)
    final = np.zeros(L.n_states, dtype=bool)
    final[list(L.finals)] = True
    q = np.full(samples, L.initial, dtype=np.intp)
    hits = final[q].astype(float)
    for i in range(N - 1):
        q = delta[q, paths[:, i]]
        hits += final[q]
    means = hits / N
    se = float(means.std(ddof=1) / np.sqrt(samples)) if samples > 1 else float("inf")
    return DensityResult(float(means.mean()), Method.MONTE_CARLO,
                         [f"{samples} samples", f"horizon N={N}", "error bound is 3 standard errors"],
                         3 * se)


# ------------------------------------------------------ generating series


def _poly_trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _poly_divmod(p, q):
    p, q = _poly_trim(p), _poly_trim(q)
    if len(p) < len(q):
        return [Fraction(0)], p
    quot = [Fraction(0)] * (len(p) - len(q) + 1)
    rem = list(p)
    for k in range(len(quot) - 1, -1, -1):
        c = rem[k + len(q) - 1] / q[-1]
        quot[k] = c
        for j, b in enumerate(q):
            rem[k + j] -= c * b
    return quot, _poly_trim(rem[:len(q) - 1] or [Fraction(0)])


def _poly_gcd(p, q):
    p, q = _poly_trim(p), _poly_trim(q)
    while any(q):
        _, r = _poly_divmod(p, q)
        p, q = q, r
    return [c / p[-1] for c in p]


def berlekamp_massey(seq):
    """Shortest connection polynomial C (C[0] = 1) and its length ℓ."""
    C, B = [Fraction(1)], [Fraction(1)]
    ell, shift, b = 0, 1, Fraction(1)
    for n, s in enumerate(seq):
        d = s + sum(C[i] * seq[n - i] for i in range(1, min(len(C), n + 1)))
        if d == 0:
            shift += 1
            continue
        coef = d / b
        T = list(C)
        need = len(B) + shift
        if len(C) < need:
            C = C + [Fraction(0)] * (need - len(C))
        for i, v in enumerate(B):
            C[i + shift] -= coef * v
        if 2 * ell <= n:
            ell, B, b, shift = n + 1 - ell, T, d, 1
        else:
            shift += 1
    return _poly_trim(C), ell


def _poly_str(p, var="z"):
    terms = []
    for k, c in enumerate(p):
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            if mag == 1:
                body = mono
            elif mag.denominator == 1:
                body = f"{mag}{mono}"
            else:
                body = f"({mag}){mono}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        s += f" {sign} {body}"
    return s


@dataclass
class GeneratingSeries:
    """f(z) = numerator(z) / denominator(z), coefficients listed from z⁰ up."""

    numerator: list
    denominator: list

    def coefficients(self, n: int) -> list:
        """First n Taylor coefficients."""
        out = []
        q0 = self.denominator[0]
        for k in range(n):
            acc = self.numerator[k] if k < len(self.numerator) else 0
            for i in range(1, min(k, len(self.denominator) - 1) + 1):
                acc -= self.denominator[i] * out[k - i]
            out.append(acc / q0)
        return out

    def density(self):
        """lim (1 - z) f(z) at z = 1, which is the Cesàro limit of the coefficients."""
        if not any(self.numerator):
            return Fraction(0)
        q1 = sum(self.denominator)
        if q1 != 0:
            return Fraction(0)
        r, rem = _poly_divmod(self.denominator, [Fraction(1), Fraction(-1)])
        if any(rem):
            raise ArithmeticError("1 is not a root of the denominator")
        return sum(self.numerator) / sum(r)

    def __str__(self):
        num = _poly_str(self.numerator)
        den = _poly_str(self.denominator)
        if den == "1":
            return num
        if len([c for c in self.numerator if c]) > 1:
            num = f"({num})"
        return f"{num}/({den})"


def generating_series(mu: Measure, L: Dfa) -> GeneratingSeries:
    """Rational form of Σ μ(L ∩ Aⁿ) zⁿ, exact over the rationals.

    Coefficients come from the product chain; the denominator is the
    Berlekamp–Massey connection polynomial of the first 2·dim + 2 terms.
    """
    rep = mu.linear_representation()
    if not rep.exact:
        raise NotSofic("generating series needs exact measure parameters")
    L = _align(mu, L)
    _, P, x, y = _product_chain(rep, L)
    dim = len(P)
    seq = []
    row = list(x)
    for _ in range(2 * dim + 2):
        seq.append(sum((a * b for a, b in zip(row, y)), Fraction(0)))
        row = [sum((row[i] * P[i][j] for i in range(dim) if row[i]), Fraction(0))
               for j in range(dim)]
    if not any(seq):
        return GeneratingSeries([Fraction(0)], [Fraction(1)])
    C, ell = berlekamp_massey(seq)
    num = _poly_mul(seq[:max(ell, 1)], C)[:max(ell, 1)]
    num = _poly_trim(num)
    g = _poly_gcd(num, C)
    if len(g) > 1:
        num, _ = _poly_divmod(num, g)
        C, _ = _poly_divmod(C, g)
    c0 = C[0]
    return GeneratingSeries([c / c0 for c in _poly_trim(num)], [c / c0 for c in _poly_trim(C)])


# ------------------------------------------------------------- dispatch


def _is_quasi_ideal(L: Dfa) -> bool:
    return fa.equivalent(L, fa.intersect(fa.right_ideal_closure(L), fa.left_ideal_closure(L)))


def density(mu: Measure, L: Dfa, x=None, *, cross_check_N: int = 2000) -> DensityResult:
    """Pick the strongest applicable method.

    Order: ideal closed forms (two-sided first, since it is exact even for
    substitution measures), exact Cesàro (sofic measures), the aperiodic
    sum, the skew-product formula (cross-checked against a truncated
    average), and finally a truncated average.
    """
    L = _align(mu, fa.minimize(L))
    x = x if x is not None else mu.support()
    if mu.is_ergodic() and fa.is_two_sided_ideal(L):
        return density_two_sided_ideal(mu, L, x)
    if fa.is_right_ideal(L):
        return density_right_ideal(mu, L)
    if fa.is_left_ideal(L):
        return density_left_ideal(mu, L)
    if mu.is_ergodic() and _is_quasi_ideal(L):
        return density_quasi_ideal(mu, fa.right_ideal_closure(L), fa.left_ideal_closure(L),
                                   mixing=mu.is_mixing())
    if mu.is_sofic:
        return density_exact_cesaro(mu, L)
    if not mu.is_ergodic():
        return density_truncated_cesaro(mu, L, cross_check_N)
    m = transition_monoid(L)
    if is_aperiodic(m):
        return density_aperiodic(mu, L, x)
    formula = ergodic_formula_total(mu, m, x)
    check = density_truncated_cesaro(mu, L, cross_check_N)
    gap = abs(to_float(formula.value) - to_float(check.value))
    if gap > formula.error_bound + check.error_bound + DISAGREEMENT_SLACK:
        check.assumptions.append(
            f"weighted counting measure ergodicity refuted (formula gave "
            f"{to_float(formula.value):.6g})")
        check.refuted = True
        return check
    formula.assumptions.append(f"agrees with truncated average at N={cross_check_N} "
                               f"(gap {gap:.2g})")
    return formula


def ergodic_formula_total(mu, m: TransitionMonoid, x, elements=None) -> DensityResult:
    """Sum of the skew-product formula over the accepting elements."""
    report = j_class_of_shift(m, x)
    elements = m.accepting_elements() if elements is None else elements
    parts, assumptions = [], ["weighted counting measure ergodic"]
    if report.horizon_conditional:
        assumptions.append("horizon-conditional shift image")
    for s in elements:
        r = density_ergodic_formula(mu, x=x, monoid=m, element=s, report=report)
        parts.append((r.value, r.error_bound))
    value, err = _sum_results(parts)
    return DensityResult(value, Method.ERGODIC_SKEW, assumptions, err)


def densities_by_element(mu: Measure, d: Dfa, x=None) -> dict[int, DensityResult]:
    """δ(φ⁻¹(m)) for every element m of the transition monoid of d."""
    x = x if x is not None else mu.support()
    d = _align(mu, d)
    m = transition_monoid(d)
    report = j_class_of_shift(m, x)
    jx = set(report.j_x)
    aperiodic = is_aperiodic(m)
    out = {}
    for s in range(len(m)):
        if s not in jx:
            out[s] = DensityResult(Fraction(0), Method.ERGODIC_SKEW,
                                   ["element outside J_X(M): density 0 in the strong sense"],
                                   0.0, True)
        elif mu.is_sofic:
            out[s] = density_exact_cesaro(mu, _element_language(m, s))
        elif aperiodic:
            dm, gm = _element_roots(mu, m, s)
            out[s] = _product_result(dm, gm, Method.APERIODIC, ["μ ergodic with support X"])
        else:
            out[s] = density_ergodic_formula(mu, x=x, monoid=m, element=s, report=report)
    return out


__all__ = ["Method", "DensityResult", "GeneratingSeries", "density", "densities_by_element",
           "density_right_ideal", "density_left_ideal", "density_quasi_ideal",
           "density_two_sided_ideal", "density_aperiodic", "density_ergodic_formula",
           "density_exact_cesaro", "density_truncated_cesaro", "density_monte_carlo",
           "generating_series", "mu_of_code", "level_masses", "berlekamp_massey",
           "DensityError"]
