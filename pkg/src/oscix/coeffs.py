"""One-dimensional expansion coefficients and generalized Fresnel integrals.

For ``m >= 1`` and ``k >= 0`` the coefficient

    c_k(m, s) = m**-1 * (exp(s*i*pi/2*(k+1)/m)
                         + (-1)**k * exp(s*(-1)**m*i*pi/2*(k+1)/m)) * Gamma((k+1)/m)

is the value of ``Os-int_R exp(i*s*x**m) x**k dx``.  It is available in the
exponential-sum form (:func:`c_one_dim`) and through the equivalent parity
table (:func:`c_one_dim_fourcase`), which returns literal zeros.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .core import DomainError, NumericalError, parse_sign
from .special import gamma_pos

ZERO_SNAP = 1e-15
MAX_GAMMA_ARG = 50.0


@dataclass(frozen=True)
class FresnelParams:
    p: float
    q: float
    sign: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.p) and self.p > 0):
            raise DomainError(f"Fresnel p must be finite and > 0, got {self.p}")
        if not (math.isfinite(self.q) and self.q > 0):
            raise DomainError(f"Fresnel q must be finite and > 0, got {self.q}")
        if self.q / self.p > MAX_GAMMA_ARG:
            raise DomainError(f"q/p = {self.q / self.p} exceeds {MAX_GAMMA_ARG}")
        object.__setattr__(self, "sign", parse_sign(self.sign))


def fresnel_general(params: FresnelParams) -> complex:
    """``int_0^inf exp(+-i x**p) x**(q-1) dx = exp(+-i pi q/(2p)) Gamma(q/p) / p``."""
    r = params.q / params.p
    return cmath.exp(params.sign * 0.5j * math.pi * r) * gamma_pos(r) / params.p


def unit_pi(r: Fraction) -> complex:
    """``exp(i*pi*r)`` for rational ``r``, exact at multiples of 1/2.

    ``r`` is reduced into (-1, 1] first, so large arguments lose nothing and
    ``unit_pi(-r)`` is the exact conjugate of ``unit_pi(r)``.
    """
    r = r - 2 * math.floor((r + 1) / 2)
    if r == -1:
        r = Fraction(1)
    if r.denominator <= 2:
        return {Fraction(0): 1 + 0j, Fraction(1, 2): 1j, Fraction(1): -1 + 0j, Fraction(-1, 2): -1j}[r]
    x = math.pi * (abs(r.numerator) / r.denominator)
    c, s = math.cos(x), math.sin(x)
    return complex(c, s if r > 0 else -s)


def _check(m: int, k: int) -> float:
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise DomainError(f"monomial degree must be an int >= 1, got {m!r}")
    if isinstance(k, bool) or not isinstance(k, int) or k < 0:
        raise DomainError(f"derivative order must be an int >= 0, got {k!r}")
    r = (k + 1) / m
    if r > MAX_GAMMA_ARG:
        raise DomainError(f"(k+1)/m = {r} exceeds {MAX_GAMMA_ARG}")
    return r


def c_one_dim(m: int, k: int, sign) -> complex:
    """Exponential-sum form of the one-dimensional coefficient."""
    r = _check(m, k)
    s = parse_sign(sign)
    half_turns = Fraction(k + 1, 2 * m)
    reflected = s * (-1) ** m
    z = (unit_pi(s * half_turns) + (-1) ** k * unit_pi(reflected * half_turns)) * gamma_pos(r) / m
    if m % 2 == 0 and k % 2 == 1:
        if abs(z) > ZERO_SNAP:
            raise NumericalError(f"parity cancellation failed for m={m}, k={k}: |c|={abs(z):.3e}")
        return 0j
    return z


def c_one_dim_fourcase(m: int, k: int, sign) -> complex:
    """Parity-table form of the same coefficient."""
    _check(m, k)
    s = parse_sign(sign)
    if m % 2 == 0:
        half = m // 2
        if k % 2 == 1:
            return 0j
        beta = k // 2
        arg = Fraction(2 * beta + 1, m)
        return unit_pi(s * arg / 2) * gamma_pos(float(arg)) / half
    if k % 2 == 0:
        beta = k // 2
        cos = unit_pi(Fraction(2 * beta + 1, 2 * m)).real
        val = 2.0 / m * cos * gamma_pos((2 * beta + 1) / m)
        return complex(val, 0.0)
    beta = (k - 1) // 2
    sin = unit_pi(Fraction(beta + 1, m)).imag
    val = 2.0 / m * sin * gamma_pos((2 * beta + 2) / m)
    return complex(0.0, s * val)
