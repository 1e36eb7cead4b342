"""Shared domain types: signed monomial phases, multi-indices, exact exponents."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

# Exponents are exact reduced fractions; Fraction already normalises sign and gcd.
RationalExponent = Fraction


class OscixError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(OscixError, ValueError):
    """An input violates a documented precondition."""


class NumericalError(OscixError, ArithmeticError):
    """A numerical procedure failed to deliver a trustworthy value."""


def parse_sign(sign) -> int:
    if sign in (1, "+", "+1"):
        return 1
    if sign in (-1, "-", "-1"):
        return -1
    raise DomainError(f"sign must be +1/-1 or '+'/'-', got {sign!r}")


def sign_char(sign: int) -> str:
    return "+" if sign > 0 else "-"


def ensure_finite(z: complex, what: str = "value") -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NumericalError(f"non-finite {what}: {z!r}")
    return z


class MultiIndex(tuple):
    """Tuple of non-negative integers ``(a_1, ..., a_n)``."""

    def __new__(cls, entries: Iterable[int] = ()):
        entries = tuple(entries)
        for e in entries:
            if not isinstance(e, (int,)) or isinstance(e, bool) or e < 0:
                raise DomainError(f"multi-index entries must be non-negative ints, got {entries!r}")
        return super().__new__(cls, entries)

    @property
    def order(self) -> int:
        return sum(self)

    @property
    def factorial(self) -> int:
        out = 1
        for e in self:
            out *= math.factorial(e)
        return out

    def __repr__(self) -> str:
        return f"MultiIndex({tuple(self)!r})"


@dataclass(frozen=True)
class Phase:
    """Separable phase ``sum_j sign_j * x_j**m_j`` stored in canonical order.

    ``monomials`` is sorted by descending exponent (stable).  ``permutation[i]``
    is the 0-based user axis that sits at canonical position ``i``.
    """

    monomials: tuple[tuple[int, int], ...]
    permutation: tuple[int, ...]

    def __post_init__(self):
        if not self.monomials:
            raise DomainError("phase needs at least one monomial")
        if len(self.permutation) != len(self.monomials):
            raise DomainError("permutation length does not match phase dimension")
        if sorted(self.permutation) != list(range(len(self.monomials))):
            raise DomainError(f"permutation {self.permutation!r} is not a bijection")
        ms = [m for m, _ in self.monomials]
        if any(m < 2 for m in ms):
            raise DomainError(f"every exponent must be >= 2, got {ms}")
        if any(a < b for a, b in zip(ms, ms[1:])):
            raise DomainError("monomials must be stored in descending exponent order")

    @property
    def n(self) -> int:
        return len(self.monomials)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(m for m, _ in self.monomials)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(s for _, s in self.monomials)

    @property
    def mu(self) -> int:
        """Smallest monomial degree."""
        return min(self.exponents)

    @property
    def user_monomials(self) -> tuple[tuple[int, int], ...]:
        out: list = [None] * self.n
        for i, axis in enumerate(self.permutation):
            out[axis] = self.monomials[i]
        return tuple(out)

    def alpha_to_user(self, alpha: Sequence[int]) -> MultiIndex:
        out = [0] * self.n
        for i, axis in enumerate(self.permutation):
            out[axis] = alpha[i]
        return MultiIndex(out)

    def alpha_to_canonical(self, alpha: Sequence[int]) -> MultiIndex:
        return MultiIndex(alpha[axis] for axis in self.permutation)

    def flipped(self) -> "Phase":
        """Same phase with every sign reversed."""
        return Phase(tuple((m, -s) for m, s in self.monomials), self.permutation)

    def __call__(self, x: Sequence) -> complex:
        """Evaluate the phase at a point given in user order."""
        return sum(s * x[axis] ** m for (m, s), axis in zip(self.monomials, self.permutation))

    def describe(self) -> str:
        return " ".join(f"{sign_char(s)}x{j + 1}^{m}" for j, (m, s) in enumerate(self.user_monomials))


def phase_canonicalize(raw: Iterable) -> Phase:
    """Build a :class:`Phase` from ``(m, sign)`` pairs given in user order."""
    pairs = []
    for item in raw:
        try:
            m, s = item
        except (TypeError, ValueError):
            raise DomainError(f"phase entries must be (m, sign) pairs, got {item!r}") from None
        if isinstance(m, bool) or not isinstance(m, int):
            raise DomainError(f"monomial exponent must be an int, got {m!r}")
        if m < 2:
            raise DomainError(f"monomial exponent must be >= 2, got {m}")
        pairs.append((m, parse_sign(s)))
    if not pairs:
        raise DomainError("phase needs at least one monomial")
    order = sorted(range(len(pairs)), key=lambda i: -pairs[i][0])
    return Phase(tuple(pairs[i] for i in order), tuple(order))


def parse_phase(text: str) -> Phase:
    """Parse the inline grammar ``m:sign[,m:sign...]``, e.g. ``"4:+,2:-"``."""
    raw = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            raise DomainError(f"empty monomial in phase text {text!r}")
        m_txt, sep, s_txt = chunk.partition(":")
        try:
            m = int(m_txt)
        except ValueError:
            raise DomainError(f"bad monomial exponent in {chunk!r}") from None
        raw.append((m, s_txt.strip() if sep else "+"))
    return phase_canonicalize(raw)


def exponent_of(alpha: Sequence[int], phase: Phase) -> RationalExponent:
    """Exact ``sum_j (alpha_j + 1) / m_j`` with alpha in canonical order."""
    if len(alpha) != phase.n:
        raise DomainError(f"multi-index of length {len(alpha)} for a phase of dimension {phase.n}")
    return sum((Fraction(a + 1, m) for a, m in zip(alpha, phase.exponents)), Fraction(0))


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"not a rational number: {text!r}") from None
