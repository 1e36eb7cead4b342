"""The finite set of multi-indices kept in a truncated expansion."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import DomainError, MultiIndex, Phase, RationalExponent


@dataclass(frozen=True)
class OmegaSpec:
    phase: Phase
    n1: int

    def __post_init__(self):
        if isinstance(self.n1, bool) or not isinstance(self.n1, int):
            raise DomainError(f"N1 must be an integer, got {self.n1!r}")
        m1 = self.phase.exponents[0]
        if self.n1 <= m1:
            raise DomainError(f"N1 must exceed the largest monomial degree m1={m1}, got N1={self.n1}")


def remainder_order(spec: OmegaSpec) -> RationalExponent:
    """``(N1 - m1 + 1) / m1``: the truncation error is O(lambda**-this)."""
    m1 = spec.phase.exponents[0]
    return Fraction(spec.n1 - m1 + 1, m1)


def enumerate_omega(spec: OmegaSpec) -> list[MultiIndex]:
    """All alpha (canonical order) with ``sum_j (alpha_j + 1 - [j == 1]) / m_j < N1/m1 - 1``.

    Returned in lexicographic order.  Coordinates are filled left to right while
    tracking the remaining rational budget, so only admissible prefixes are
    ever extended; the per-axis cap ``alpha_j <= N1 - m_j - 1`` bounds the walk.
    """
    ms = spec.phase.exponents
    n = len(ms)
    budget = Fraction(spec.n1, ms[0]) - 1
    # The unshifted axes each cost at least 1/m_j even with alpha_j = 0.
    base = [Fraction(0 if j == 0 else 1, m) for j, m in enumerate(ms)]
    tail_min = [sum(base[j:], Fraction(0)) for j in range(n + 1)]
    out: list[MultiIndex] = []

    def walk(j: int, prefix: list[int], used: Fraction):
        if j == n:
            out.append(MultiIndex(prefix))
            return
        cap = spec.n1 - ms[j] - 1 if j else spec.n1 - ms[0] - 1
        a = 0
        while a <= cap:
            cost = used + base[j] + Fraction(a, ms[j])
            if cost + tail_min[j + 1] >= budget:
                break
            walk(j + 1, prefix + [a], cost)
            a += 1

    walk(0, [], Fraction(0))
    return out
