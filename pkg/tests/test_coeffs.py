import cmath
import math

import pytest
from hypothesis import given, strategies as st

from oscix.coeffs import FresnelParams, c_one_dim, c_one_dim_fourcase, fresnel_general
from oscix.core import DomainError
from reference_values import C_ONE_DIM, FRESNEL


@pytest.mark.parametrize("key", sorted(FRESNEL))
def test_fresnel_against_ray_quadrature(key):
    p, q, s = key
    assert abs(fresnel_general(FresnelParams(p, q, s)) - FRESNEL[key]) <= 1e-13 * abs(FRESNEL[key])


@pytest.mark.parametrize("key", sorted(C_ONE_DIM))
def test_both_coefficient_forms_against_ray_quadrature(key):
    m, k, s = key
    ref = C_ONE_DIM[key]
    tol = 1e-13 * (1 + abs(ref))
    assert abs(c_one_dim(m, k, s) - ref) <= tol
    assert abs(c_one_dim_fourcase(m, k, s) - ref) <= tol


def test_quadratic_anchor():
    assert abs(c_one_dim(2, 0, 1) - math.sqrt(math.pi) * cmath.exp(0.25j * math.pi)) < 1e-15


@given(st.integers(1, 8).map(lambda h: 2 * h), st.integers(0, 20).map(lambda b: 2 * b + 1),
       st.sampled_from([1, -1]))
def test_even_degree_odd_power_is_exact_zero(m, k, s):
    assert c_one_dim(m, k, s) == 0j
    assert c_one_dim_fourcase(m, k, s) == 0j


@given(st.integers(2, 8), st.integers(0, 40), st.sampled_from([1, -1]))
def test_sign_flip_conjugates(m, k, s):
    a = c_one_dim_fourcase(m, k, s)
    b = c_one_dim_fourcase(m, k, -s)
    assert a == b.conjugate()


@given(st.integers(2, 8), st.integers(0, 40))
def test_odd_degree_pure_real_or_imaginary(m, k):
    if m % 2 == 0:
        return
    c = c_one_dim_fourcase(m, k, 1)
    if k % 2 == 0:
        assert c.imag == 0.0
    else:
        assert c.real == 0.0


@given(st.floats(1.0, 8.0), st.floats(0.1, 20.0))
def test_fresnel_modulus(p, q):
    z = fresnel_general(FresnelParams(p, q, 1))
    assert abs(z) == pytest.approx(math.gamma(q / p) / p, rel=1e-14)


def test_domain_errors():
    with pytest.raises(DomainError):
        FresnelParams(0, 1)
    with pytest.raises(DomainError):
        FresnelParams(1, -1)
    with pytest.raises(DomainError):
        FresnelParams(1, 60)
    with pytest.raises(DomainError):
        c_one_dim(0, 1, 1)
    with pytest.raises(DomainError):
        c_one_dim(2, -1, 1)
    with pytest.raises(DomainError):
        c_one_dim(2, 200, 1)
    with pytest.raises(DomainError):
        c_one_dim(2, 0, 0)


@given(st.fractions(min_value=-50, max_value=50, max_denominator=24))
def test_unit_pi(r):
    from oscix.coeffs import unit_pi
    z = unit_pi(r)
    assert abs(z - cmath.exp(1j * math.pi * float(r))) <= 1e-13 * max(1.0, abs(float(r)))
    assert unit_pi(-r) == z.conjugate()
    if r.denominator <= 2:
        assert z.real in (-1.0, 0.0, 1.0) and z.imag in (-1.0, 0.0, 1.0)


@pytest.mark.parametrize("m,k", [(3, 2), (3, 5), (3, 38), (5, 4), (5, 9), (7, 6)])
def test_odd_degree_cancellations_are_exact(m, k):
    # (k+1)/m odd with k even, or even with k odd: the two half-axes cancel
    assert c_one_dim(m, k, 1) == 0
    assert c_one_dim_fourcase(m, k, -1) == 0
