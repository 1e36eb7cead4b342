import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oscix.amplitude import parse_amplitude
from oscix.core import DomainError, parse_phase, phase_canonicalize
from oscix.expansion import (Expansion, ExpansionTerm, eval_expansion, expand, expand_1d,
                             expansion_from_dict, expansion_to_dict, preset, quadratic,
                             stationary_phase_expansion)
from reference_values import EXPANSIONS


def _phase(name):
    return parse_phase(name) if ":" in name else preset(name)


@pytest.mark.parametrize("key", sorted(EXPANSIONS))
def test_against_brute_force_reference(key):
    name, amp, n1 = key
    ph = _phase(name)
    e = expand(ph, parse_amplitude(amp, ph.n), n1)
    ref = EXPANSIONS[key]
    assert [str(t.exponent) for t in e.terms] == [q for q, _ in ref]
    for t, (_, c) in zip(e.terms, ref):
        assert abs(t.coefficient - c) <= 1e-12 * (1 + abs(c))


def test_single_gaussian_anchor():
    e = expand(parse_phase("2:+"), parse_amplitude("1", 1), 5)
    assert len(e.terms) == 1
    t = e.terms[0]
    assert t.exponent == Fraction(1, 2)
    assert abs(t.coefficient - math.sqrt(math.pi) * cmath.exp(0.25j * math.pi)) < 1e-15
    assert e.remainder_order == 2


def test_mixed_signature_anchor():
    e = expand(parse_phase("2:+,2:-"), parse_amplitude("1", 2), 5)
    assert [(t.exponent, t.coefficient) for t in e.terms][0][0] == 1
    assert abs(e.terms[0].coefficient - math.pi) < 1e-14


def test_e8_with_gauss():
    e8 = preset("E8")
    assert expand(e8, parse_amplitude("gauss", 3), 8).terms == ()
    e = expand(e8, parse_amplitude("gauss", 3), 11)
    assert [t.exponent for t in e.terms] == [Fraction(31, 30)]


def test_keep_zeros_retains_parity_zeros():
    ph = parse_phase("2:+")
    e = expand(ph, parse_amplitude("x", 1), 6, keep_zeros=True)
    assert [t.exponent for t in e.terms] == [Fraction(1, 2), 1, Fraction(3, 2), 2]
    assert all(t.coefficient == 0 for t in e.terms)
    assert expand(ph, parse_amplitude("x", 1), 6).terms == ()


@given(st.integers(2, 6), st.sampled_from([1, -1]), st.integers(1, 8),
       st.sampled_from(["rational 1", "gauss", "(exp x)", "(div x (add 2 x))", "poly 1@0 3@1 -1@4"]))
def test_one_variable_route_agrees(m, s, extra, amp):
    a = parse_amplitude(amp, 1)
    e1 = expand_1d(m, s, a, m + extra, keep_zeros=True)
    en = expand(phase_canonicalize([(m, s)]), a, m + extra, keep_zeros=True)
    assert [(t.exponent, t.coefficient) for t in e1.terms] == [(t.exponent, t.coefficient) for t in en.terms]
    assert [t.exponent for t in e1.terms] == [Fraction(k + 1, m) for k in range(extra)]


REAL_AMPS = ["gauss", "rational 1", "(exp x1)", "(mul x1 (gauss))", "poly 1@0 2@1 -3@2"]


def _random_case(rng):
    n = rng.randint(1, 3)
    monos = [(rng.randint(2, 5), rng.choice([1, -1])) for _ in range(n)]
    ph = phase_canonicalize(monos)
    n1 = ph.exponents[0] + rng.randint(1, 6)
    ks = [rng.randint(1, 2) for _ in range(n)]
    return monos, ph, n1, ks


@pytest.mark.parametrize("seed", range(20))
def test_conjugation_is_exact(seed):
    rng = random.Random(seed)
    monos, ph, n1, ks = _random_case(rng)
    amp = rng.choice(["gauss", "rational " + " ".join(map(str, ks)), "(exp x1)"])
    a = parse_amplitude(amp, ph.n)
    e = expand(ph, a, n1, keep_zeros=True)
    f = expand(ph.flipped(), a, n1, keep_zeros=True)
    assert [t.exponent for t in e.terms] == [t.exponent for t in f.terms]
    assert all(t.coefficient == u.coefficient.conjugate() for t, u in zip(e.terms, f.terms))


@pytest.mark.parametrize("seed", range(20))
def test_axis_permutation_is_exact(seed):
    rng = random.Random(100 + seed)
    monos, ph, n1, ks = _random_case(rng)
    perm = list(range(len(monos)))
    rng.shuffle(perm)
    a1 = parse_amplitude("rational " + " ".join(map(str, ks)), len(monos))
    a2 = parse_amplitude("rational " + " ".join(str(ks[i]) for i in perm), len(monos))
    e1 = expand(ph, a1, n1)
    e2 = expand(phase_canonicalize([monos[i] for i in perm]), a2, n1)
    assert [(t.exponent, t.coefficient) for t in e1.terms] == [(t.exponent, t.coefficient) for t in e2.terms]


@pytest.mark.parametrize("seed", range(10))
def test_parity_vanishing_is_exact(seed):
    rng = random.Random(200 + seed)
    n = rng.randint(1, 3)
    monos = [(2 * rng.randint(1, 3), rng.choice([1, -1]))] + [(rng.randint(2, 5), 1) for _ in range(n - 1)]
    ph = phase_canonicalize(monos)
    # odd in x1, whose degree is even: every term must vanish
    a = parse_amplitude("(mul x1 (gauss))", n)
    e = expand(ph, a, ph.exponents[0] + rng.randint(2, 7), keep_zeros=True)
    assert all(t.coefficient == 0 for t in e.terms)


def test_stationary_phase_matches_expand():
    g = parse_amplitude("gauss", 2)
    sp = stationary_phase_expansion(2, 1, g, 8)
    ex = expand(quadratic(2, 1), g, 8)
    assert [t.exponent for t in sp.terms] == [t.exponent for t in ex.terms]
    for s, e in zip(sp.terms, ex.terms):
        assert abs(s.coefficient - e.coefficient) <= 1e-12


@pytest.mark.parametrize("n,p", [(1, 0), (1, 1), (2, 0), (2, 2), (3, 1), (3, 2)])
def test_stationary_leading_prefactor(n, p):
    a = parse_amplitude("rational 1", n)
    sp = stationary_phase_expansion(n, p, a, n + 5)
    lead = sp.terms[0]
    assert lead.exponent == Fraction(n, 2)
    want = math.pi ** (n / 2) * cmath.exp(0.25j * math.pi * (2 * p - n))
    assert abs(lead.coefficient - want) <= 1e-13
    ex = expand(quadratic(n, p), a, n + 5)
    for s, e in zip(sp.terms, ex.terms):
        assert s.exponent == e.exponent and abs(s.coefficient - e.coefficient) <= 1e-12


def test_serialization_round_trip_is_bitwise():
    ph = parse_phase("2:-,3:+")
    e = expand(ph, parse_amplitude("rational 1 2", 2), 9)
    d = expansion_to_dict(e)
    assert d["permutation"] == [2, 1]
    assert d["phase"] == [{"m": 2, "sign": -1}, {"m": 3, "sign": 1}]
    back = expansion_from_dict(d)
    for lam in (1.0, 7.5, 1234.5):
        assert eval_expansion(back, lam) == eval_expansion(e, lam)
    with pytest.raises(DomainError):
        expansion_from_dict({"phase": []})


def test_expansion_invariants():
    ph = parse_phase("2:+")
    with pytest.raises(DomainError):
        Expansion(ph, 5, (ExpansionTerm(Fraction(1), 1j), ExpansionTerm(Fraction(1, 2), 1j)), Fraction(2))
    with pytest.raises(DomainError):
        Expansion(ph, 5, (ExpansionTerm(Fraction(2), 1j),), Fraction(2))
    e = expand(ph, parse_amplitude("1", 1), 5)
    with pytest.raises(DomainError):
        eval_expansion(e, 0.0)
    with pytest.raises(DomainError):
        eval_expansion(e, float("nan"))


def test_domain_errors():
    with pytest.raises(DomainError):
        expand(parse_phase("3:+"), parse_amplitude("1", 1), 3)
    with pytest.raises(DomainError):
        expand(parse_phase("3:+"), parse_amplitude("gauss", 2), 6)
    with pytest.raises(DomainError):
        expand(parse_phase("2:+"), parse_amplitude("1", 1, delta=1.0), 6)
    with pytest.raises(DomainError):
        stationary_phase_expansion(2, 3, parse_amplitude("1", 2), 6)


@pytest.mark.parametrize("name,monos", [
    ("A_3", ((4, 1), (2, 1), (2, 1))), ("A_2-", ((3, -1), (2, 1), (2, 1))),
    ("E6", ((4, 1), (3, 1), (2, 1))), ("E6-", ((4, -1), (3, 1), (2, 1))),
    ("E8", ((5, 1), (3, 1), (2, 1))), ("quadratic(3,1)", ((2, 1), (2, -1), (2, -1))),
])
def test_presets(name, monos):
    assert preset(name).monomials == monos


def test_unknown_preset():
    with pytest.raises(DomainError):
        preset("D4")
    with pytest.raises(DomainError):
        preset("A_0")


def test_e8_constant_amplitude_needs_n1_10_for_first_term():
    e8 = preset("E8")
    one = parse_amplitude("1", 3)
    small = expand(e8, one, 6)
    assert small.terms == () and small.remainder_order == Fraction(2, 5)
    first = expand(e8, one, 10)
    assert [t.exponent for t in first.terms] == [Fraction(31, 30)]
    from oscix.coeffs import c_one_dim
    want = c_one_dim(5, 0, 1) * c_one_dim(3, 0, 1) * c_one_dim(2, 0, 1)
    assert abs(first.terms[0].coefficient - want) <= 1e-14
