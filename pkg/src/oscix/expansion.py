"""Asymptotic expansions for separable monomial phases.

Every term is ``coefficient * lambda**(-exponent)`` with an exact rational
exponent; terms that share an exponent are merged exactly.
"""

from __future__ import annotations

import cmath
import math
import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .amplitude import Amplitude, taylor_at_zero
from .coeffs import c_one_dim_fourcase
from .core import (DomainError, MultiIndex, Phase, RationalExponent, exponent_of, format_fraction,
                   parse_fraction, parse_sign, phase_canonicalize)
from .index_set import OmegaSpec, enumerate_omega, remainder_order

PRUNE_RELATIVE = 1e-14


@dataclass(frozen=True)
class ExpansionTerm:
    exponent: RationalExponent
    coefficient: complex
    contributors: tuple[MultiIndex, ...] = ()


@dataclass(frozen=True)
class Expansion:
    phase: Phase
    n1: int
    terms: tuple[ExpansionTerm, ...]
    remainder_order: RationalExponent
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        exps = [t.exponent for t in self.terms]
        if any(a >= b for a, b in zip(exps, exps[1:])):
            raise DomainError("expansion exponents must be strictly increasing")
        if exps and exps[-1] >= self.remainder_order:
            raise DomainError("expansion term at or beyond the remainder order")

    @property
    def leading(self) -> ExpansionTerm | None:
        return self.terms[0] if self.terms else None

    def __call__(self, lam: float) -> complex:
        return eval_expansion(self, lam)


def _to_number(v) -> complex | float:
    return complex(v) if isinstance(v, complex) else float(v)


def _merge(phase: Phase, n1: int, contributions: Iterable, *, keep_zeros: bool,
           rem: RationalExponent, meta: dict | None = None) -> Expansion:
    """contributions: (exponent, coefficient, user-order alpha) triples."""
    groups: dict = defaultdict(list)
    for q, c, alpha in contributions:
        groups[q].append((c, alpha))
    terms = []
    for q in sorted(groups):
        items = groups[q]
        # fsum is exactly rounded, so the merged value does not depend on the
        # order in which contributions arrive.
        coef = complex(math.fsum(c.real for c, _ in items), math.fsum(c.imag for c, _ in items))
        alphas = tuple(sorted(a for c, a in items if c != 0 or keep_zeros))
        terms.append(ExpansionTerm(q, coef, alphas))
    if not keep_zeros:
        scale = max((abs(t.coefficient) for t in terms), default=0.0)
        terms = [t for t in terms if t.coefficient != 0 and abs(t.coefficient) >= PRUNE_RELATIVE * scale]
    return Expansion(phase, n1, tuple(terms), rem, dict(meta or {}))


def _check_amplitude(phase: Phase, a: Amplitude):
    if a.dim != phase.n:
        raise DomainError(f"amplitude dimension {a.dim} does not match phase dimension {phase.n}")
    a.check_class(phase)


def _factor_product(phase: Phase, alpha, factor) -> complex:
    """``prod_j c(m_j, alpha_j, s_j)`` in an order that makes symmetries bit-exact.

    Factors are grouped by ``(m, k)``; a group with p plus and q minus signs is
    ``(g * conj(g))**min(p, q)`` (exactly real) times the leftover powers of
    ``g`` or ``conj(g)``.  Groups multiply in sorted order, so relabelling axes
    leaves the result unchanged and flipping every sign conjugates it exactly.
    """
    groups: dict = defaultdict(lambda: [0, 0])
    for m, s, k in zip(phase.exponents, phase.signs, alpha):
        groups[(m, k)][0 if s > 0 else 1] += 1
    c = complex(1.0)
    for (m, k), (plus, minus) in sorted(groups.items()):
        g = factor(m, k, 1)
        pair = g * g.conjugate()
        for _ in range(min(plus, minus)):
            c = c * pair
        rest = g if plus > minus else g.conjugate()
        for _ in range(abs(plus - minus)):
            c = c * rest
    return c


def expand(phase: Phase, a: Amplitude, n1: int, *, keep_zeros: bool = False) -> Expansion:
    """Truncated expansion ``sum_{alpha in Omega} c_alpha lambda^(-sum (alpha_j+1)/m_j)``.

    ``c_alpha = prod_j c(m_j, alpha_j, sign_j) * d^alpha a(0) / alpha!`` with
    the jet taken in user coordinates and remapped through the phase
    permutation.
    """
    spec = OmegaSpec(phase, n1)
    _check_amplitude(phase, a)
    omega = enumerate_omega(spec)
    order = max((al.order for al in omega), default=0)
    jet = taylor_at_zero(a, order)
    factor_cache: dict = {}

    def factor(m, k, s):
        key = (m, k, s)
        if key not in factor_cache:
            factor_cache[key] = c_one_dim_fourcase(m, k, s)
        return factor_cache[key]

    contributions = []
    for alpha in omega:
        user_alpha = phase.alpha_to_user(alpha)
        taylor = jet[user_alpha]
        c = _factor_product(phase, alpha, factor)
        c = c * _to_number(taylor) if taylor != 0 else 0j
        contributions.append((exponent_of(alpha, phase), c, tuple(user_alpha)))
    return _merge(phase, n1, contributions, keep_zeros=keep_zeros, rem=remainder_order(spec),
                  meta={"amplitude": a.label, "kind": "multivariable"})


def expand_1d(m: int, sign, a: Amplitude, n: int, *, keep_zeros: bool = False) -> Expansion:
    """One-variable expansion ``sum_{k=0}^{N-m-1} c_k a^(k)(0)/k! lambda^(-(k+1)/m)``."""
    phase = phase_canonicalize([(m, sign)])
    spec = OmegaSpec(phase, n)
    _check_amplitude(phase, a)
    s = phase.signs[0]
    top = n - m - 1
    jet = taylor_at_zero(a, top)
    contributions = []
    for k in range(top + 1):
        taylor = jet[(k,)]
        c = complex(1.0) * c_one_dim_fourcase(m, k, s)
        c = c * _to_number(taylor) if taylor != 0 else 0j
        contributions.append((Fraction(k + 1, m), c, (k,)))
    return _merge(phase, n, contributions, keep_zeros=keep_zeros, rem=remainder_order(spec),
                  meta={"amplitude": a.label, "kind": "one-variable"})


_I_POWERS = (1 + 0j, 1j, -1 + 0j, -1j)


def _betas(n: int, bound: int):
    """All beta in Z_{>=0}^n with 2|beta| < bound."""
    if n == 0:
        yield ()
        return
    b = 0
    while 2 * b < bound:
        for rest in _betas(n - 1, bound - 2 * b):
            yield (b,) + rest
        b += 1


def stationary_phase_expansion(n: int, p: int, a: Amplitude, big_n: int, *,
                               keep_zeros: bool = False) -> Expansion:
    """Classical expansion for ``sum_{j<=p} x_j^2 - sum_{j>p} x_j^2``.

    Terms ``pi^(n/2) e^(i pi (2p-n)/4) (-1)^(sum_{j>p} beta_j) i^|beta|
    d^(2 beta) a(0) / (4^|beta| beta!) lambda^(-|beta|-n/2)`` for
    ``|beta| < (N-n-1)/2``.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"dimension must be an int >= 1, got {n!r}")
    if not (0 <= p <= n):
        raise DomainError(f"signature p must satisfy 0 <= p <= n, got p={p}, n={n}")
    if big_n <= 2:
        raise DomainError(f"N must exceed 2, got {big_n}")
    phase = quadratic(n, p)
    _check_amplitude(phase, a)
    bound = big_n - n - 1
    betas = list(_betas(n, bound))
    order = 2 * max((sum(b) for b in betas), default=0)
    jet = taylor_at_zero(a, order)
    prefactor = math.pi ** (n / 2) * cmath.exp(0.25j * math.pi * (2 * p - n))
    contributions = []
    for beta in betas:
        two_beta = tuple(2 * b for b in beta)
        taylor = jet[two_beta]
        if taylor == 0:
            contributions.append((Fraction(sum(beta)) + Fraction(n, 2), 0j, two_beta))
            continue
        # d^(2beta) a(0) = (2beta)! * jet coefficient
        weight = Fraction(MultiIndex(two_beta).factorial, 4 ** sum(beta) * MultiIndex(beta).factorial)
        unit = _I_POWERS[sum(beta) % 4] * (-1) ** sum(beta[p:])
        c = prefactor * unit * _to_number(weight * taylor)
        contributions.append((Fraction(sum(beta)) + Fraction(n, 2), c, two_beta))
    rem = remainder_order(OmegaSpec(phase, big_n))
    return _merge(phase, big_n, contributions, keep_zeros=keep_zeros, rem=rem,
                  meta={"amplitude": a.label, "kind": "stationary-phase"})


def eval_expansion(e: Expansion, lam: float) -> complex:
    """``sum coefficient * lam**(-exponent)``."""
    lam = float(lam)
    if not (math.isfinite(lam) and lam > 0):
        raise DomainError(f"lambda must be a finite positive number, got {lam}")
    vals = [t.coefficient * lam ** (-float(t.exponent)) for t in e.terms]
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


# --------------------------------------------------------------------------- presets


def preset_a(k: int, sign=1) -> Phase:
    """A_k germ ``+-x1^(k+1) + x2^2 + x3^2``."""
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise DomainError(f"A_k needs an integer k >= 1, got {k!r}")
    return phase_canonicalize([(k + 1, parse_sign(sign)), (2, 1), (2, 1)])


def preset_e6(sign=1) -> Phase:
    return phase_canonicalize([(4, parse_sign(sign)), (3, 1), (2, 1)])


def preset_e8() -> Phase:
    return phase_canonicalize([(5, 1), (3, 1), (2, 1)])


def quadratic(n: int, p: int) -> Phase:
    """``sum_{j<=p} x_j^2 - sum_{j>p} x_j^2``."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1 or not (0 <= p <= n):
        raise DomainError(f"quadratic(n, p) needs n >= 1 and 0 <= p <= n, got ({n}, {p})")
    return phase_canonicalize([(2, 1)] * p + [(2, -1)] * (n - p))


_PRESET_RE = [
    (re.compile(r"^A_?(\d+)\s*([+-])?$"), lambda g: preset_a(int(g[0]), g[1] or "+")),
    (re.compile(r"^E_?6\s*([+-])?$"), lambda g: preset_e6(g[0] or "+")),
    (re.compile(r"^E_?8$"), lambda g: preset_e8()),
    (re.compile(r"^quadratic\(\s*(\d+)\s*,\s*(\d+)\s*\)$"), lambda g: quadratic(int(g[0]), int(g[1]))),
]

PRESET_HELP = {
    "A_k[+|-]": "+-x1^(k+1) + x2^2 + x3^2, k >= 1 (e.g. A_2, A_3-)",
    "E6[+|-]": "+-x1^4 + x2^3 + x3^2",
    "E8": "x1^5 + x2^3 + x3^2",
    "quadratic(n,p)": "sum_{j<=p} x_j^2 - sum_{j>p} x_j^2",
}


def preset(name: str) -> Phase:
    """Resolve a preset name such as ``A_3``, ``A_2-``, ``E6``, ``E8`` or ``quadratic(3,2)``."""
    text = name.strip()
    for rx, build in _PRESET_RE:
        m = rx.match(text)
        if m:
            return build(m.groups())
    raise DomainError(f"unknown preset {name!r}; known forms: {', '.join(PRESET_HELP)}")


# --------------------------------------------------------------------------- serialization


def expansion_to_dict(e: Expansion) -> dict:
    return {
        "phase": [{"m": m, "sign": s} for m, s in e.phase.user_monomials],
        "N1": e.n1,
        "terms": [
            {
                "exponent": format_fraction(t.exponent),
                "re": t.coefficient.real,
                "im": t.coefficient.imag,
                "alphas": [list(a) for a in t.contributors],
            }
            for t in e.terms
        ],
        "remainder_order": format_fraction(e.remainder_order),
        "canonical_phase": [{"m": m, "sign": s} for m, s in e.phase.monomials],
        "permutation": [axis + 1 for axis in e.phase.permutation],
        **({"amplitude": e.meta["amplitude"]} if "amplitude" in e.meta else {}),
    }


def expansion_from_dict(d: dict) -> Expansion:
    try:
        phase = phase_canonicalize([(int(t["m"]), t["sign"]) for t in d["phase"]])
        terms = tuple(
            ExpansionTerm(parse_fraction(t["exponent"]), complex(float(t["re"]), float(t["im"])),
                          tuple(MultiIndex(a) for a in t.get("alphas", [])))
            for t in d["terms"]
        )
        return Expansion(phase, int(d["N1"]), terms, parse_fraction(d["remainder_order"]),
                         {"amplitude": d["amplitude"]} if "amplitude" in d else {})
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed expansion document: {exc}") from None
