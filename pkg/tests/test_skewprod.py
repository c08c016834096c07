from fractions import Fraction as F

import numpy as np
import pytest

from ratdensity import automata as fa, catalog, skewprod as sk
from ratdensity import density as dn
from ratdensity.errors import InvarianceViolation
from ratdensity.measures import Bernoulli, Markov, SubstitutionFrequency
from ratdensity.monoid import transition_monoid
from ratdensity.shift import SubstitutionMorphism

GOLDEN = (5 ** 0.5 - 1) / 2
ABC_ORBIT = Markov([F(1, 3)] * 3, [[0, 1, 0], [0, 0, 1], [1, 0, 0]], "abc")
HALF = Bernoulli({"a": F(1, 2), "b": F(1, 2)})


@pytest.fixture(scope="module")
def fib():
    return SubstitutionFrequency(SubstitutionMorphism({"a": "ab", "b": "a"}))


@pytest.fixture(scope="module")
def parity(fib):
    m = transition_monoid(catalog.parity_automaton())
    sp = sk.build(m, fib.support())
    return m, sp, sk.WeightedCountingMeasure(sp, fib)


@pytest.fixture(scope="module")
def abc_group():
    m = transition_monoid(catalog.abc_parity_automaton())
    sp = sk.build(m, ABC_ORBIT.support())
    return m, sp, sk.WeightedCountingMeasure(sp, ABC_ORBIT)


def test_build_parity(parity):
    m, sp, _ = parity
    assert sorted(m.words[r] for r in sp.R) == ["a", "aa", "aab", "ab"]
    assert sp.d == 2
    # action law: r·φ(a) is rφ(a) inside R, else 0
    for r in sp.R:
        for a in "ab":
            t = m.mul(r, m.element_of(a))
            assert sp.act(r, a) == (t if t in sp.R else None)
    assert sp.act(None, "a") is None


def test_build_abc_orbit_row():
    m = transition_monoid(catalog.abc_code_automaton())
    sp = sk.build(m, ABC_ORBIT.support())
    assert len(sp.R) == 3


def test_group_case_never_hits_zero(abc_group):
    _, sp, _ = abc_group
    assert len(sp.R) == 2
    assert all(sp.act(r, a) is not None for r in sp.R for a in "abc")


def test_nu_total_mass_and_zero_part(parity):
    m, sp, nu = parity
    total = sum(float(nu(r)) for r in sp.R)
    assert abs(total - 1) < 1e-9
    assert nu(None) == 0
    # Y₀ = ({αβ, α²β} × [b]) ∪ ({0} × X) is null
    for w in ("ab", "aab"):
        assert float(nu(m.element_of(w), "", "b")) == 0


def test_nu_empty_sum(abc_group):
    m, sp, nu = abc_group
    # no s with s·φ(u) = r when u is not a factor
    assert nu(sp.R[0], "aa", "") == 0


def test_g_union_is_suffix_code_of_mass_one(parity, abc_group):
    """G = ∪ G_H is a suffix code on the factor language and has mass 1.

    Outside ℒ(X) it need not be one: for the parity example b ∈ G_{αβ} is a
    suffix of bb ∈ G_α, but bb is not a Fibonacci factor.
    """
    for _, sp, nu in (parity, abc_group):
        reps = [members[0] for members in nu.h_classes.values()]
        G = nu.G[reps[0]]
        for s in reps[1:]:
            G = fa.union(G, nu.G[s])
        x = sp.shift
        code = [w for n in range(11) for w in fa.enumerate_words(G, n) if x.factor_member(w)]
        assert code
        for w in code:
            assert not any(u != w and w.endswith(u) for u in code)
        parts = [dn.mu_of_code(nu.mu, nu.G[s]) for s in reps]
        value, err = sum(float(v) for v, _ in parts), sum(e for _, e in parts)
        assert abs(value - 1) <= err + 1e-9
    m, sp, nu = parity
    G = fa.union(nu.G[m.element_of("a")], nu.G[m.element_of("ab")])
    assert not fa.is_suffix_code(G)


def test_invariance(parity, abc_group):
    assert sk.check_invariance(parity[2], 3)["status"] == "pass"
    assert sk.check_invariance(abc_group[2], 3)["status"] == "pass"


def test_corrupted_d_detected():
    m = transition_monoid(catalog.abc_code_automaton())
    sp = sk.build(m, ABC_ORBIT.support())
    with pytest.raises(InvarianceViolation):
        sk.check_invariance(sk.WeightedCountingMeasure(sp, ABC_ORBIT, d=2), 2)


def test_birkhoff(parity, fib):
    m, sp, nu = parity
    r = sk.birkhoff_estimate(sp, fib, m=m.element_of("a"), samples=16, N=4000, nu=nu)
    assert abs(r.value - GOLDEN ** 2 / 2) < 0.01
    mk = transition_monoid(catalog.abc_code_automaton())
    spk = sk.build(mk, ABC_ORBIT.support())
    r = sk.birkhoff_estimate(spk, ABC_ORBIT, m=mk.element_of("bc"), N=3000)
    assert abs(r.value - 1 / 9) < 0.01


def test_birkhoff_group_full_shift():
    z = transition_monoid(catalog.z2_automaton())
    sp = sk.build(z, HALF.support())
    r = sk.birkhoff_estimate(sp, HALF, m=0, samples=16, N=4000)
    assert abs(r.value - 0.5) < 0.01


def test_probe_verdicts(parity, abc_group, fib):
    assert sk.ergodicity_probe(parity[1], fib, nu=parity[2]).verdict == "consistent"
    assert sk.ergodicity_probe(abc_group[1], ABC_ORBIT, nu=abc_group[2]).verdict == "refuted"
    trivial = transition_monoid(fa.universal("ab"))
    sp = sk.build(trivial, HALF.support())
    assert sk.ergodicity_probe(sp, HALF, N=2000).verdict == "consistent"


def test_intertwining_with_group_skew_product(parity, fib):
    """π(g, x) lands on T-orbits: π∘T̃ = T∘π along sampled orbits."""
    m, sp, _ = parity
    alpha, alpha2 = m.element_of("a"), m.element_of("aa")
    ab = m.element_of("ab")
    abab = m.mul(ab, ab)

    def pi(g, prev):
        if prev == "a":
            return alpha2 if g == 0 else alpha
        return abab if g == 0 else ab

    rng = np.random.default_rng(5)
    for _ in range(5):
        w = sk.sample_window(fib, 1001, rng)
        g = int(rng.integers(2))
        for i in range(1, 1000):
            lhs = pi((g + (w[i] == "a")) % 2, w[i])
            rhs = sp.act(pi(g, w[i - 1]), w[i])
            assert lhs == rhs
            g = (g + (w[i] == "a")) % 2
