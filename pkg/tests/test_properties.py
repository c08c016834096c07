"""Property-based checks of the algebraic and measure-theoretic invariants."""

import re
from fractions import Fraction as F

from hypothesis import HealthCheck, assume, given, settings, strategies as st

from ratdensity import automata as fa
from ratdensity import density as dn
from ratdensity.errors import MonoidTooLarge
from ratdensity.measures import Markov, SoficMeasure, validate
from ratdensity.monoid import green_structure, j_class_of_shift, transition_monoid
from ratdensity.numeric import cesaro_projector, matmul, perron_vector

import oracles

SETTINGS = settings(max_examples=40, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow])


@st.composite
def dfas(draw, max_states=5, alphabets=("ab", "abc")):
    alphabet = draw(st.sampled_from(alphabets))
    n = draw(st.integers(1, max_states))
    table = {(q, a): draw(st.integers(0, n - 1)) for q in range(n) for a in alphabet}
    finals = draw(st.sets(st.integers(0, n - 1)))
    return alphabet, n, table, finals


def to_dfa(spec):
    alphabet, n, table, finals = spec
    return fa.Dfa.from_transitions(alphabet, n, 0, finals,
                                   [(q, a, t) for (q, a), t in table.items()])


@st.composite
def chains(draw, k):
    """Irreducible rational stochastic matrix on k states with its stationary vector."""
    rows = []
    for i in range(k):
        w = [draw(st.integers(0, 4)) for _ in range(k)]
        w[(i + 1) % k] += 1  # keep the cycle 0 → 1 → … → 0
        s = sum(w)
        rows.append([F(x, s) for x in w])
    return oracles.exact_stationary(rows), rows


@st.composite
def markov_on(draw, alphabet):
    v, M = draw(chains(len(alphabet)))
    return Markov(v, M, alphabet), v, M


@st.composite
def hidden_on(draw, alphabet, max_states=4):
    k = draw(st.integers(1, max_states))
    v, M = draw(chains(k))
    letters = [draw(st.sampled_from(alphabet)) for _ in range(k)]
    return SoficMeasure.from_markov_projection(v, M, dict(enumerate(letters)), alphabet), v, M, letters


# ------------------------------------------------------------- automata


REGEX_ATOMS = st.sampled_from(["a", "b", "ε"])


def regexes():
    return st.recursive(REGEX_ATOMS, lambda inner: st.one_of(
        st.tuples(inner, inner).map(lambda t: f"({t[0]}|{t[1]})"),
        st.tuples(inner, inner).map(lambda t: f"{t[0]}{t[1]}"),
        inner.map(lambda r: f"({r})*")), max_leaves=8)


@SETTINGS
@given(regexes())
def test_regex_matches_python_re(rx):
    d = fa.to_dfa(rx, "ab")
    pattern = re.compile(rx.replace("ε", ""))
    for n in range(6):
        for w in oracles.words("ab", n):
            assert d.accepts(w) == bool(pattern.fullmatch(w)), (rx, w)


@SETTINGS
@given(dfas())
def test_minimize_canonical(spec):
    d = to_dfa(spec)
    m = fa.minimize(d)
    assert fa.equivalent(d, m)
    assert m.n_states <= d.n_states
    assert fa.format_dfa_text(fa.minimize(m)) == fa.format_dfa_text(m)


@SETTINGS
@given(dfas(max_states=4))
def test_roots_generate_the_ideals(spec):
    d = to_dfa(spec)
    right = fa.right_ideal_closure(d)
    D = fa.prefix_root(right)
    assert fa.is_prefix_code(D)
    assert fa.equivalent(fa.right_ideal_closure(D), right)
    left = fa.left_ideal_closure(d)
    G = fa.suffix_root(left)
    assert fa.is_suffix_code(G)
    assert fa.equivalent(fa.left_ideal_closure(G), left)


# ---------------------------------------------------------------- monoids


@SETTINGS
@given(dfas(max_states=4))
def test_green_invariants(spec):
    try:
        m = transition_monoid(to_dfa(spec), max_elements=500)
    except MonoidTooLarge:
        assume(False)
    g = green_structure(m)
    for h in g.h_classes:
        assert len({g.r_of[s] for s in h}) == 1 and len({g.l_of[s] for s in h}) == 1
    for j, members in enumerate(g.j_classes):
        sizes = {len(g.h_classes[g.h_of[s]]) for s in members}
        assert len(sizes) == 1  # Green's lemma: all H-classes of a J-class are equipotent
        if g.is_regular(j):
            for s in members:
                assert any(g.idempotent[t] for t in g.r_classes[g.r_of[s]])
                assert any(g.idempotent[t] for t in g.l_classes[g.l_of[s]])
    for s in range(len(m)):
        for t in range(len(m)):
            st_, ts = m.mul(s, t), m.mul(t, s)
            if g.j_of[st_] == g.j_of[s]:
                assert g.r_of[st_] == g.r_of[s]  # stability
            if g.j_of[ts] == g.j_of[s]:
                assert g.l_of[ts] == g.l_of[s]


# --------------------------------------------------------------- numeric


@SETTINGS
@given(st.integers(1, 4).flatmap(chains))
def test_cesaro_projector_identities(chain):
    _, M = chain
    Pi = cesaro_projector(M)
    assert matmul(Pi, M) == Pi == matmul(M, Pi)
    assert matmul(Pi, Pi) == Pi


@SETTINGS
@given(st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(st.integers(1, 6), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_perron_vector_is_eigenvector(A):
    theta, v = perron_vector(A)
    n = len(A)
    for j in range(n):
        lhs = sum(float(v[i]) * A[i][j] for i in range(n))
        assert abs(lhs - float(theta) * float(v[j])) < 1e-8


# ---------------------------------------------------------------- measures


@SETTINGS
@given(st.sampled_from(["ab", "abc"]).flatmap(markov_on))
def test_markov_identities(data):
    mu, v, M = data
    assert validate(mu, depth=4)["ok"]
    for w in ("", "a", "ab", "ba", "aab"):
        if set(w) <= set(mu.alphabet):
            assert mu(w) == oracles.markov_mu(v, M, mu.alphabet, w)


# ---------------------------------------------------------------- densities


@SETTINGS
@given(st.data())
def test_additivity_and_concentration(data):
    spec = data.draw(dfas(max_states=4))
    mu, *_ = data.draw(hidden_on(spec[0]))
    d = to_dfa(spec)
    try:
        m = transition_monoid(d, max_elements=200)
    except MonoidTooLarge:
        assume(False)
    assume(mu.support().is_irreducible())
    out = dn.densities_by_element(mu, d)
    assert sum(r.value for r in out.values()) == 1
    jx = set(j_class_of_shift(m, mu.support()).j_x)
    assert sum(out[s].value for s in jx) == 1
    assert all(isinstance(r.value, F) for r in out.values())


@SETTINGS
@given(st.data())
def test_complement(data):
    spec = data.draw(dfas())
    mu, *_ = data.draw(hidden_on(spec[0]))
    d = to_dfa(spec)
    a = dn.density_exact_cesaro(mu, d).value
    b = dn.density_exact_cesaro(mu, fa.complement(d)).value
    assert a + b == 1


@SETTINGS
@given(st.data())
def test_ideal_formulas_agree_with_exact_cesaro(data):
    spec = data.draw(dfas(max_states=4))
    mu, *_ = data.draw(hidden_on(spec[0]))
    d = to_dfa(spec)
    right = fa.right_ideal_closure(d)
    left = fa.left_ideal_closure(d)
    assert dn.density_right_ideal(mu, right).value == dn.density_exact_cesaro(mu, right).value
    assert dn.density_left_ideal(mu, left).value == dn.density_exact_cesaro(mu, left).value
    if mu.is_ergodic():
        q = dn.density_quasi_ideal(mu, right, left).value
        both = dn.density_exact_cesaro(mu, fa.intersect(right, left)).value
        if mu.is_mixing():
            assert q == both


@SETTINGS
@given(st.data())
def test_exact_cesaro_against_dp_oracle(data):
    spec = data.draw(dfas())
    alphabet, n, table, finals = spec
    mu, v, M, letters = data.draw(hidden_on(alphabet))
    value = dn.density_exact_cesaro(mu, to_dfa(spec)).value
    N = 2000
    seq = oracles.hidden_level_dp(v, M, letters, table, 0, finals, N)
    assert abs(float(value) - oracles.cesaro(seq)) <= 10 / N


@SETTINGS
@given(st.data())
def test_generating_series_coefficients(data):
    spec = data.draw(dfas(max_states=3, alphabets=("ab",)))
    mu, v, M, letters = data.draw(hidden_on(spec[0], max_states=3))
    s = dn.generating_series(mu, to_dfa(spec))
    alphabet, n, table, finals = spec
    muw = lambda w: oracles.hidden_markov_mu(v, M, letters, w) if w else 1
    expected = [oracles.brute_level(muw, alphabet, table, 0, finals, k) for k in range(9)]
    assert s.coefficients(9) == expected
    assert s.density() == dn.density_exact_cesaro(mu, to_dfa(spec)).value
