"""Skew products (R ∪ {0}) ⋊ X and their weighted counting measure.

A point is a pair (r, x) with r in a fixed R-class R of J_X(M) (or the
absorbing 0, written ``None`` here) and x a two-sided word.  The map is
T(r, x) = (r·φ(x₀), Sx) where r·m = rm when rm stays in R and 0 otherwise.

The weighted counting measure gives a cylinder {r} × [u·v] the mass
(1/d) Σ μ(G_s u v) over s in R with sφ(u) = r.  G_s is the suffix code
generating the left ideal φ⁻¹(Ms), and the G_H (one per H-class of R)
together form a suffix code of mass 1.  That last fact is what makes exact
sampling possible: the past of a μ-typical point ends in exactly one G_H,
and given that H the element r is uniform over H.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import automata as fa
from .automata import Dfa
from .density import DensityResult, Method, mu_of_code
from .errors import InvarianceViolation
from .measures import Measure, SubstitutionFrequency
from .monoid import (GreenStructure, JClassReport, TransitionMonoid, choose_r_class,
                     green_structure, j_class_of_shift)
from .numeric import error_of, to_float

ZERO = None
PAST = 256
LOOKAHEAD = 64


@dataclass(frozen=True)
class SkewProduct:
    monoid: TransitionMonoid
    R: tuple[int, ...]
    shift: object
    report: JClassReport
    action: dict = field(repr=False)  # (r, symbol) -> element of R or None

    @property
    def d(self) -> int:
        return self.report.d

    def act(self, r, a: str):
        if r is ZERO:
            return ZERO
        return self.action[r, a]

    def act_word(self, r, w: str):
        for a in w:
            r = self.act(r, a)
        return r

    def orbit(self, r, word: str) -> list:
        """States r₀, r₁, … along ``word`` (length len(word) + 1)."""
        out = [r]
        for a in word:
            r = self.act(r, a)
            out.append(r)
        return out

    def label(self, r) -> str:
        return "0" if r is ZERO else (self.monoid.words[r] or "1")


def build(m: TransitionMonoid, x, jreport: JClassReport | None = None) -> SkewProduct:
    """Skew product over the deterministic R-class choice of :func:`choose_r_class`."""
    jreport = jreport or j_class_of_shift(m, x)
    R = tuple(choose_r_class(jreport, m))
    members = set(R)
    action = {}
    for r in R:
        for k, a in enumerate(m.alphabet):
            t = m.right[r][k]
            action[r, a] = t if t in members else ZERO
    return SkewProduct(m, R, x, jreport, action)


class WeightedCountingMeasure:
    """ν on the skew product, evaluated on cylinders {r} × [u·v].

    ``d`` can be overridden, which only makes sense for negative tests.
    """

    def __init__(self, sp: SkewProduct, mu: Measure, d: int | None = None,
                 green: GreenStructure | None = None):
        self.sp = sp
        self.mu = mu
        self.d = d if d is not None else sp.d
        m = sp.monoid
        g = green or green_structure(m)
        self.h_of = {r: g.h_of[r] for r in sp.R}
        self.G = {}
        by_h = {}
        for s in sp.R:
            h = self.h_of[s]
            if h not in by_h:
                left = {m.mul(t, s) for t in range(len(m))}
                pre = fa.with_alphabet(fa.minimize(m.preimage_dfa(left)), mu.alphabet)
                by_h[h] = fa.trim(fa.minimize(fa.suffix_root(pre)))
            self.G[s] = by_h[h]
        self.h_classes = {}
        for s in sp.R:
            self.h_classes.setdefault(self.h_of[s], []).append(s)
        self._mirrors = {h: fa.trim(fa.mirror(self.G[members[0]]))
                         for h, members in self.h_classes.items()}
        self._cache = {}

    def mass_of_code_word(self, s: int, w: str):
        """μ(G_s w) with its error bound."""
        h = self.h_of[s]
        key = (h, w)
        if key not in self._cache:
            self._cache[key] = mu_of_code(self.mu, fa.concat_word(self.G[s], w))
        return self._cache[key]

    def cylinder(self, r, u: str = "", v: str = ""):
        """ν({r} × [u·v]), returned as (value, error bound)."""
        if r is ZERO:
            return Fraction(0), 0.0
        value, err = 0, 0.0
        for s in self.sp.R:
            if self.sp.act_word(s, u) == r:
                val, e = self.mass_of_code_word(s, u + v)
                value = value + val
                err += e
        if value == 0:
            value = Fraction(0) if self.mu.exact else 0.0
        return value / self.d, err / self.d

    def __call__(self, r, u="", v=""):
        return self.cylinder(r, u, v)[0]

    def marginal(self) -> dict:
        """ν({r} × X) for r in R."""
        return {r: self(r) for r in self.sp.R}

    # sampling -------------------------------------------------------

    def _past_class(self, past: str):
        """H-class whose G_H is a suffix of ``past`` (None if none fits)."""
        for h, md in self._mirrors.items():
            q = md.initial
            if q in md.finals:
                return h
            for a in reversed(past):
                q = md.step(q, a)
                if q is None:
                    break
                if q in md.finals:
                    return h
        return None

    def sample_point(self, rng, n: int, past: int = PAST):
        """A ν-distributed start (r₀, window).

        Returns (r₀, word, origin) where word[origin:] is x₀x₁… and the
        part before ``origin`` is the past used to locate the G-suffix.
        """
        for _ in range(64):
            w = sample_window(self.mu, past + n, rng)
            h = self._past_class(w[:past])
            if h is not None:
                members = self.h_classes[h]
                return members[int(rng.integers(len(members)))], w, past
            past *= 2
        raise RuntimeError("no G-suffix found in sampled pasts")


def nu_cylinder(w: WeightedCountingMeasure, r, u: str, v: str):
    """(1/d) Σ_{s: sφ(u) = r} μ(G_s u v)."""
    return w(r, u, v)


def sample_window(mu: Measure, n: int, rng) -> str:
    if isinstance(mu, SubstitutionFrequency):
        offset = int(rng.integers(0, mu.shift.horizon))
        return mu.sample_path(n, offset=offset)
    return mu.sample_path(n, seed=int(rng.integers(2**63)))


# ------------------------------------------------------------ invariance


def _close(a, b, tol):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(to_float(a) - to_float(b)) <= tol


def check_invariance(w: WeightedCountingMeasure, depth: int = 3) -> dict:
    """ν(T⁻¹B) = ν(B) and Σ_r ν({r} × [u·v]) = μ(uv) for |u| + |v| ≤ depth.

    Only words of the shift's language are visited (other cylinders are
    null on both sides).  Raises :class:`InvarianceViolation`.
    """
    sp, mu = w.sp, w.mu
    tol = 1e-8
    checked = 0
    total = sum((w(r) for r in sp.R), Fraction(0) if mu.exact else 0.0)
    if not _close(total, Fraction(1) if mu.exact else 1.0, tol):
        raise InvarianceViolation(f"total mass {total} ≠ 1", cylinder=("*", "", ""))
    for n in range(0, depth + 1):
        for word in _factors(sp.shift, n):
            mass = mu.mu(word) if word else (Fraction(1) if mu.exact else 1.0)
            for cut in range(n + 1):
                u, v = word[:cut], word[cut:]
                proj = sum((w(r, u, v) for r in sp.R), 0 * mass)
                if not _close(proj, mass, tol + error_of(mass)):
                    raise InvarianceViolation(
                        f"projection of ν on [{u}·{v}] is {proj}, μ gives {mass}",
                        cylinder=("*", u, v))
                for r in sp.R:
                    lhs = w(r, u, v)
                    rhs = _preimage_mass(w, r, u, v)
                    if not _close(lhs, rhs, tol):
                        raise InvarianceViolation(
                            f"ν(T⁻¹B) = {rhs} but ν(B) = {lhs} for B = "
                            f"{{{sp.label(r)}}} × [{u}·{v}]", cylinder=(sp.label(r), u, v))
                    checked += 1
    return {"cylinders_checked": checked, "depth": depth, "d": w.d, "status": "pass"}


def _factors(x, n):
    return [""] if n == 0 else sorted(x.factors(n))


def _preimage_mass(w, r, u, v):
    sp = w.sp
    acc = 0
    if u:
        a = u[-1]
        for s in sp.R:
            if sp.act(s, a) == r:
                acc = acc + w(s, u[:-1], a + v)
    else:
        for a in sp.monoid.alphabet:
            for s in sp.R:
                if sp.act(s, a) == r:
                    acc = acc + w(s, "", a + v)
    return acc


# --------------------------------------------------------------- Birkhoff


def _prefix_hits(C: Dfa, word: str, start: int, horizon: int) -> bool:
    q = C.initial
    if q in C.finals:
        return True
    for a in word[start:start + horizon]:
        q = C.step(q, a)
        if q is None:
            return False
        if q in C.finals:
            return True
    return False


def birkhoff_estimate(sp: SkewProduct, mu: Measure, L: Dfa | None = None, m: int | None = None,
                      samples: int = 32, N: int = 10_000, seed: int = 0,
                      nu: WeightedCountingMeasure | None = None) -> DensityResult:
    """Σ_{r: rm ∈ R} ν̂(U_{r,[L]}) ν̂(U_{rm,X}) from orbit averages.

    Each sample starts at a ν-distributed point and follows N steps of T.
    The per-sample values are averaged; the error bound is three standard
    errors.  ``L`` defaults to φ⁻¹(m).
    """
    monoid = sp.monoid
    if L is None:
        L = monoid.preimage_dfa([m])
    if m is None:
        acc = monoid.accepting_elements()
        if len(acc) != 1:
            raise ValueError("L must be the preimage of a single element")
        m = acc[0]
    nu = nu or WeightedCountingMeasure(sp, mu)
    C = fa.trim(fa.minimize(fa.prefix_root(fa.with_alphabet(fa.minimize(L), mu.alphabet))))
    pairs = [(r, monoid.mul(r, m)) for r in sp.R if monoid.mul(r, m) in sp.R]
    rng = np.random.default_rng(seed)
    values = np.empty(samples)
    for t in range(samples):
        r, word, origin = nu.sample_point(rng, N + LOOKAHEAD)
        states = sp.orbit(r, word[origin:origin + N])[:N]
        hits = {a: 0 for a, _ in pairs}
        visits = {}
        for i, s in enumerate(states):
            visits[s] = visits.get(s, 0) + 1
            if s in hits and _prefix_hits(C, word, origin + i, LOOKAHEAD):
                hits[s] += 1
        values[t] = sum(hits[a] / N * visits.get(b, 0) / N for a, b in pairs)
    se = float(values.std(ddof=1) / np.sqrt(samples)) if samples > 1 else float("inf")
    return DensityResult(float(values.mean()), Method.MONTE_CARLO,
                         ["orbit averages of the skew product", f"{samples} samples",
                          f"N={N}", "error bound is 3 standard errors"], 3 * se)


# --------------------------------------------------------------- probing


@dataclass
class ProbeReport:
    verdict: str
    max_deviation: float
    pairs: list[dict]

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "max_deviation": self.max_deviation,
                "pairs": self.pairs}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)


def _cylinder_pool(sp, nu, max_len=2):
    pool = []
    for n in range(1, max_len + 1):
        for word in _factors(sp.shift, n):
            for cut in range(n + 1):
                for r in sp.R:
                    p = to_float(nu(r, word[:cut], word[cut:]))
                    if p > 0:
                        pool.append((r, word[:cut], word[cut:], p))
    return pool


def ergodicity_probe(sp: SkewProduct, mu: Measure, trials: int = 32, N: int = 10_000,
                     seed: int = 0, pairs: int = 64, floor: float | None = None,
                     nu: WeightedCountingMeasure | None = None) -> ProbeReport:
    """Compare Cesàro correlations of cylinder pairs with ν(U)ν(V).

    Each trial draws a ν-distributed point and records the time averages
    A_U and A_V along its orbit; the mean of A_U·A_V estimates
    lim (1/N) Σ ν(U ∩ T⁻ⁱV), which equals ν(U)ν(V) for ergodic ν.  A pair
    refutes ergodicity when the gap exceeds 3 standard errors plus a floor
    of 1/√N absorbing the finite-horizon bias.
    """
    nu = nu or WeightedCountingMeasure(sp, mu)
    floor = 1 / np.sqrt(N) if floor is None else floor
    rng = np.random.default_rng(seed)
    pool = _cylinder_pool(sp, nu)
    all_pairs = list(itertools.product(range(len(pool)), repeat=2))
    if len(all_pairs) > pairs:
        idx = rng.choice(len(all_pairs), size=pairs, replace=False)
        chosen = [all_pairs[i] for i in sorted(idx)]
    else:
        chosen = all_pairs
    used = sorted({i for p in chosen for i in p})
    averages = np.zeros((trials, len(pool)))
    for t in range(trials):
        r, word, origin = nu.sample_point(rng, N + LOOKAHEAD)
        states = sp.orbit(r, word[origin:origin + N])[:N]
        for k in used:
            cr, u, v, _ = pool[k]
            count = 0
            for i, s in enumerate(states):
                if s != cr:
                    continue
                j = origin + i
                if word.startswith(v, j) and word[j - len(u):j] == u:
                    count += 1
            averages[t, k] = count / N
    rows = []
    verdict = "consistent"
    worst = 0.0
    for a, b in chosen:
        prod = averages[:, a] * averages[:, b]
        target = pool[a][3] * pool[b][3]
        est = float(prod.mean())
        se = float(prod.std(ddof=1) / np.sqrt(trials)) if trials > 1 else float("inf")
        dev = abs(est - target)
        worst = max(worst, dev)
        flag = dev > 3 * se + floor
        if flag:
            verdict = "refuted"
        rows.append({"U": _cyl_str(sp, pool[a]), "V": _cyl_str(sp, pool[b]),
                     "estimate": est, "product": target, "deviation": dev,
                     "stderr": se, "flagged": bool(flag)})
    if verdict == "consistent" and any(3 * row["stderr"] > 0.05 for row in rows):
        verdict = "inconclusive"
    return ProbeReport(verdict, worst, rows)


def _cyl_str(sp, c):
    r, u, v, _ = c
    return f"{{{sp.label(r)}}}x[{u}.{v}]"


__all__ = ["SkewProduct", "WeightedCountingMeasure", "ProbeReport", "build", "nu_cylinder",
           "check_invariance", "birkhoff_estimate", "ergodicity_probe", "sample_window", "ZERO"]
