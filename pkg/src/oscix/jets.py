"""Truncated multivariate Taylor series about the origin.

A :class:`Jet` holds the coefficients ``d^alpha f(0) / alpha!`` for
``|alpha| <= order``.  Coefficients may be ``int``, ``Fraction``, ``float`` or
``complex``; arithmetic keeps exact types exact, so jets of polynomials and
rational functions with rational constants come out as exact fractions.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Number

from .core import NumericalError


def _zero_key(dim: int) -> tuple:
    return (0,) * dim


class Jet:
    __slots__ = ("dim", "order", "coeffs")

    def __init__(self, dim: int, order: int, coeffs: dict | None = None):
        self.dim = dim
        self.order = order
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v != 0 and sum(k) <= order}

    @classmethod
    def constant(cls, value, dim: int, order: int) -> "Jet":
        return cls(dim, order, {_zero_key(dim): value})

    @classmethod
    def variable(cls, axis: int, dim: int, order: int) -> "Jet":
        if order == 0:
            return cls(dim, order)
        key = tuple(1 if j == axis else 0 for j in range(dim))
        return cls(dim, order, {key: 1})

    @property
    def constant_term(self):
        return self.coeffs.get(_zero_key(self.dim), 0)

    def _like(self, coeffs: dict) -> "Jet":
        return Jet(self.dim, self.order, coeffs)

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            if (other.dim, other.order) != (self.dim, self.order):
                raise ValueError("jets of different shape")
            return other
        if isinstance(other, Number):
            return Jet.constant(other, self.dim, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return self._like({k: v * other for k, v in self.coeffs.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        right = sorted(((sum(k), k, v) for k, v in other.coeffs.items()), key=lambda t: t[0])
        out: dict = {}
        for ka, va in self.coeffs.items():
            room = self.order - sum(ka)
            for db, kb, vb in right:
                if db > room:
                    break
                key = tuple(a + b for a, b in zip(ka, kb))
                out[key] = out.get(key, 0) + va * vb
        return self._like(out)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        c0 = self.constant_term
        if c0 == 0:
            raise NumericalError("division by a jet with zero constant term")
        inv = Fraction(1, 1) / c0 if isinstance(c0, (int, Fraction)) else 1 / c0
        d = (self - c0) * inv
        # 1/(c0 (1 + d)) = inv * sum_k (-d)^k; d is nilpotent beyond `order`.
        acc = Jet.constant(1, self.dim, self.order)
        for _ in range(self.order):
            acc = 1 - d * acc
        return acc * inv

    def __truediv__(self, other):
        if isinstance(other, Number):
            if other == 0:
                raise NumericalError("division of a jet by zero")
            if isinstance(other, (int, Fraction)):
                return self * (Fraction(1) / other)
            return self * (1 / other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("jets support integer powers only")
        if k < 0:
            return self.reciprocal() ** (-k)
        result = Jet.constant(1, self.dim, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def exp(self) -> "Jet":
        c0 = self.constant_term
        if c0 == 0:
            e0 = 1
        elif isinstance(c0, complex):
            e0 = cmath.exp(c0)
        else:
            e0 = math.exp(c0)
        f = self - c0
        acc = Jet.constant(1, self.dim, self.order)
        for k in range(self.order, 0, -1):
            acc = 1 + f * acc * Fraction(1, k)
        return acc * e0

    def __getitem__(self, key):
        return self.coeffs.get(tuple(key), 0)

    def __repr__(self) -> str:
        return f"Jet(dim={self.dim}, order={self.order}, coeffs={self.coeffs!r})"
