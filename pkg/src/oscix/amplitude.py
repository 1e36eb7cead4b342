"""Amplitude functions: expression trees, evaluation and Taylor jets at 0.

Text syntax (prefix, whitespace separated)::

    expr    := number | var | "(" op expr* ")" | builtin
    number  := integer, decimal or ratio literal: 2, -0.5, 1/3, 1e-3
    var     := x | x1 | x2 | ...          (x is x1; indices are 1-based)
    op      := add | sub | mul | div | neg | exp
             | pow expr INT               integer power, may be negative
             | polyval expr c0 c1 ...     c0 + c1*e + c2*e^2 + ...
    builtin := gauss [c]                  exp(-c * sum_j x_j^2), c > 0, default 1
             | rational k1 [k2 ...]       prod_j (1 + x_j^2)^(-k_j); one k is broadcast
             | poly TERM...               TERM = coef@e1,e2,...  e.g. "poly 1@0,0 -2@2,1"
             | bump [k]                   prod_j (1 - x_j^2)^k on the unit cube, else 0

A builtin may stand alone (``gauss 2``) or be nested in parentheses
(``(mul x (gauss))``).  Numbers are parsed exactly, so jets of rational
expressions carry exact fractions.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import DomainError, MultiIndex, NumericalError, Phase
from .jets import Jet

MAX_JET_ORDER = 40
QUARTER_PI = math.pi / 4
HALF_PI = math.pi / 2


class SectorError(DomainError):
    """A complex evaluation point lies outside the declared analyticity sector."""


# --------------------------------------------------------------------------- nodes


class Node:
    polynomial = False
    real_only = False

    def evaluate(self, xs: Sequence[np.ndarray]):
        raise NotImplementedError

    def jet(self, dim: int, order: int) -> Jet:
        raise NotImplementedError

    def text(self) -> str:
        raise NotImplementedError

    def children(self) -> tuple["Node", ...]:
        return ()

    def max_axis(self) -> int:
        return max((c.max_axis() for c in self.children()), default=-1)

    def is_polynomial(self) -> bool:
        return self.polynomial and all(c.is_polynomial() for c in self.children())

    def is_real_only(self) -> bool:
        return self.real_only or any(c.is_real_only() for c in self.children())


def _num_text(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return repr(v)


@dataclass(frozen=True)
class Const(Node):
    value: Fraction
    polynomial = True

    def evaluate(self, xs):
        return float(self.value)

    def jet(self, dim, order):
        return Jet.constant(self.value, dim, order)

    def text(self):
        return _num_text(self.value)


@dataclass(frozen=True)
class Var(Node):
    axis: int
    polynomial = True

    def evaluate(self, xs):
        return xs[self.axis]

    def jet(self, dim, order):
        return Jet.variable(self.axis, dim, order)

    def text(self):
        return f"x{self.axis + 1}"

    def max_axis(self):
        return self.axis


@dataclass(frozen=True)
class Add(Node):
    args: tuple[Node, ...]
    polynomial = True

    def evaluate(self, xs):
        out = self.args[0].evaluate(xs)
        for a in self.args[1:]:
            out = out + a.evaluate(xs)
        return out

    def jet(self, dim, order):
        out = self.args[0].jet(dim, order)
        for a in self.args[1:]:
            out = out + a.jet(dim, order)
        return out

    def text(self):
        return "(add " + " ".join(a.text() for a in self.args) + ")"

    def children(self):
        return self.args


@dataclass(frozen=True)
class Sub(Node):
    left: Node
    right: Node
    polynomial = True

    def evaluate(self, xs):
        return self.left.evaluate(xs) - self.right.evaluate(xs)

    def jet(self, dim, order):
        return self.left.jet(dim, order) - self.right.jet(dim, order)

    def text(self):
        return f"(sub {self.left.text()} {self.right.text()})"

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Neg(Node):
    arg: Node
    polynomial = True

    def evaluate(self, xs):
        return -self.arg.evaluate(xs)

    def jet(self, dim, order):
        return -self.arg.jet(dim, order)

    def text(self):
        return f"(neg {self.arg.text()})"

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Mul(Node):
    args: tuple[Node, ...]
    polynomial = True

    def evaluate(self, xs):
        out = self.args[0].evaluate(xs)
        for a in self.args[1:]:
            out = out * a.evaluate(xs)
        return out

    def jet(self, dim, order):
        out = self.args[0].jet(dim, order)
        for a in self.args[1:]:
            out = out * a.jet(dim, order)
        return out

    def text(self):
        return "(mul " + " ".join(a.text() for a in self.args) + ")"

    def children(self):
        return self.args


def _guarded_inverse(den):
    if np.any(np.asarray(den) == 0):
        raise NumericalError("singular evaluation: denominator vanishes")
    return 1.0 / den


@dataclass(frozen=True)
class Div(Node):
    num: Node
    den: Node

    def evaluate(self, xs):
        return self.num.evaluate(xs) * _guarded_inverse(self.den.evaluate(xs))

    def jet(self, dim, order):
        return self.num.jet(dim, order) / self.den.jet(dim, order)

    def text(self):
        return f"(div {self.num.text()} {self.den.text()})"

    def children(self):
        return (self.num, self.den)


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    k: int

    def is_polynomial(self):
        return self.k >= 0 and self.base.is_polynomial()

    def evaluate(self, xs):
        b = self.base.evaluate(xs)
        if self.k < 0:
            return _guarded_inverse(b) ** (-self.k)
        return b ** self.k

    def jet(self, dim, order):
        return self.base.jet(dim, order) ** self.k

    def text(self):
        return f"(pow {self.base.text()} {self.k})"

    def children(self):
        return (self.base,)


@dataclass(frozen=True)
class Exp(Node):
    arg: Node

    def evaluate(self, xs):
        with np.errstate(over="ignore"):
            return np.exp(self.arg.evaluate(xs))

    def jet(self, dim, order):
        return self.arg.jet(dim, order).exp()

    def text(self):
        return f"(exp {self.arg.text()})"

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Polyval(Node):
    arg: Node
    coeffs: tuple[Fraction, ...]
    polynomial = True

    def evaluate(self, xs):
        e = self.arg.evaluate(xs)
        out = float(self.coeffs[-1])
        for c in reversed(self.coeffs[:-1]):
            out = out * e + float(c)
        return out

    def jet(self, dim, order):
        e = self.arg.jet(dim, order)
        out = Jet.constant(self.coeffs[-1], dim, order)
        for c in reversed(self.coeffs[:-1]):
            out = out * e + c
        return out

    def text(self):
        return f"(polyval {self.arg.text()} " + " ".join(_num_text(c) for c in self.coeffs) + ")"

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Gauss(Node):
    """``exp(-c * sum_j x_j^2)`` over every coordinate of the point."""

    c: Fraction = Fraction(1)

    def evaluate(self, xs):
        s = sum(x * x for x in xs)
        return np.exp(-float(self.c) * s)

    def jet(self, dim, order):
        s = sum((Jet.variable(j, dim, order) ** 2 for j in range(dim)), Jet(dim, order))
        return (s * (-self.c)).exp()

    def text(self):
        return "(gauss)" if self.c == 1 else f"(gauss {_num_text(self.c)})"


@dataclass(frozen=True)
class Rational(Node):
    """``prod_j (1 + x_j^2)^(-k_j)``; a single k applies to every axis."""

    ks: tuple[int, ...]

    def _ks(self, dim):
        if len(self.ks) == 1:
            return self.ks * dim
        if len(self.ks) != dim:
            raise DomainError(f"rational needs 1 or {dim} exponents, got {len(self.ks)}")
        return self.ks

    def evaluate(self, xs):
        out = 1.0
        for x, k in zip(xs, self._ks(len(xs))):
            out = out * _guarded_inverse(1.0 + x * x) ** k
        return out

    def jet(self, dim, order):
        out = Jet.constant(1, dim, order)
        for j, k in enumerate(self._ks(dim)):
            out = out * (1 + Jet.variable(j, dim, order) ** 2) ** (-k)
        return out

    def text(self):
        return "(rational " + " ".join(str(k) for k in self.ks) + ")"

    def max_axis(self):
        return len(self.ks) - 1 if len(self.ks) > 1 else -1


@dataclass(frozen=True)
class Poly(Node):
    terms: tuple[tuple[Fraction, tuple[int, ...]], ...]
    polynomial = True

    def _check(self, dim):
        for _, e in self.terms:
            if len(e) != dim:
                raise DomainError(f"poly term exponent {e} does not match dimension {dim}")

    def evaluate(self, xs):
        self._check(len(xs))
        out = 0.0
        for c, e in self.terms:
            t = float(c)
            for x, p in zip(xs, e):
                t = t * x ** p
            out = out + t
        return out

    def jet(self, dim, order):
        self._check(dim)
        return Jet(dim, order, {tuple(e): c for c, e in self.terms})

    def text(self):
        parts = [f"{_num_text(c)}@{','.join(str(p) for p in e)}" for c, e in self.terms]
        return "(poly " + " ".join(parts) + ")"

    def max_axis(self):
        return max((len(e) for _, e in self.terms), default=0) - 1


@dataclass(frozen=True)
class Bump(Node):
    """``prod_j (1 - x_j^2)^k`` inside the unit cube, zero outside."""

    k: int = 3
    real_only = True

    def evaluate(self, xs):
        out = 1.0
        for x in xs:
            x = np.asarray(x)
            inside = np.abs(x) < 1
            out = out * np.where(inside, (1.0 - x * x) ** self.k, 0.0)
        return out

    def jet(self, dim, order):
        out = Jet.constant(1, dim, order)
        for j in range(dim):
            out = out * (1 - Jet.variable(j, dim, order) ** 2) ** self.k
        return out

    def text(self):
        return f"(bump {self.k})"


# --------------------------------------------------------------------------- parser

_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_VAR = re.compile(r"^x(\d*)$")
_BUILTINS = ("gauss", "rational", "poly", "bump")


def _number(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"expected a number, got {tok!r}") from None


def _int(tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise DomainError(f"expected an integer, got {tok!r}") from None


def _builtin(name: str, args: list[str]) -> Node:
    if name == "gauss":
        if len(args) > 1:
            raise DomainError("gauss takes at most one width parameter")
        c = _number(args[0]) if args else Fraction(1)
        if c <= 0:
            raise DomainError("gauss width parameter must be > 0")
        return Gauss(c)
    if name == "rational":
        if not args:
            raise DomainError("rational needs at least one exponent")
        ks = tuple(_int(a) for a in args)
        if any(k < 1 for k in ks):
            raise DomainError("rational exponents must be >= 1")
        return Rational(ks)
    if name == "poly":
        terms = []
        for a in args:
            coef, sep, exps = a.partition("@")
            if not sep:
                raise DomainError(f"poly term must look like coef@e1,e2,...; got {a!r}")
            e = tuple(_int(p) for p in exps.split(","))
            if any(p < 0 for p in e):
                raise DomainError("poly exponents must be >= 0")
            terms.append((_number(coef), e))
        if not terms:
            raise DomainError("poly needs at least one term")
        return Poly(tuple(terms))
    if name == "bump":
        if len(args) > 1:
            raise DomainError("bump takes at most one exponent")
        k = _int(args[0]) if args else 3
        if k < 1:
            raise DomainError("bump exponent must be >= 1")
        return Bump(k)
    raise DomainError(f"unknown builtin {name!r}")


class _Parser:
    def __init__(self, text: str):
        self.toks = _TOKEN.findall(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise DomainError("unexpected end of amplitude expression")
        self.pos += 1
        return tok

    def atoms_until_close(self) -> list[str]:
        out = []
        while self.peek() not in (")", None):
            tok = self.take()
            if tok == "(":
                raise DomainError("builtin arguments must be plain literals")
            out.append(tok)
        return out

    def expr(self) -> Node:
        tok = self.take()
        if tok == ")":
            raise DomainError("unexpected ')'")
        if tok != "(":
            m = _VAR.match(tok)
            if m:
                idx = int(m.group(1)) if m.group(1) else 1
                if idx < 1:
                    raise DomainError("variable indices start at 1")
                return Var(idx - 1)
            if tok in _BUILTINS:
                return _builtin(tok, [])
            return Const(_number(tok))
        op = self.take()
        if op in _BUILTINS:
            node = _builtin(op, self.atoms_until_close())
        elif op in ("add", "mul"):
            args = self.args()
            if not args:
                raise DomainError(f"{op} needs at least one argument")
            node = (Add if op == "add" else Mul)(tuple(args))
        elif op in ("sub", "div"):
            args = self.args()
            if len(args) != 2:
                raise DomainError(f"{op} takes exactly two arguments")
            node = Sub(*args) if op == "sub" else Div(*args)
        elif op in ("neg", "exp"):
            args = self.args()
            if len(args) != 1:
                raise DomainError(f"{op} takes exactly one argument")
            node = Neg(args[0]) if op == "neg" else Exp(args[0])
        elif op == "pow":
            base = self.expr()
            node = Pow(base, _int(self.take()))
        elif op == "polyval":
            arg = self.expr()
            coeffs = tuple(_number(t) for t in self.atoms_until_close())
            if not coeffs:
                raise DomainError("polyval needs at least one coefficient")
            node = Polyval(arg, coeffs)
        else:
            raise DomainError(f"unknown operator {op!r}")
        if self.take() != ")":
            raise DomainError(f"missing ')' after {op}")
        return node

    def args(self) -> list[Node]:
        out = []
        while self.peek() not in (")", None):
            out.append(self.expr())
        return out


def parse_expression(text: str) -> Node:
    text = text.strip()
    if not text:
        raise DomainError("empty amplitude expression")
    head, *rest = text.split()
    if head in _BUILTINS and "(" not in text:
        return _builtin(head, rest)
    p = _Parser(text)
    node = p.expr()
    if p.peek() is not None:
        raise DomainError(f"trailing tokens in amplitude expression: {p.toks[p.pos:]}")
    return node


# --------------------------------------------------------------------------- amplitude


@dataclass(frozen=True)
class JetTable:
    """Taylor coefficients ``d^alpha a(0) / alpha!`` for ``|alpha| <= order``."""

    dim: int
    order: int
    coeffs: dict = field(default_factory=dict)

    def __getitem__(self, alpha):
        alpha = MultiIndex(alpha)
        if len(alpha) != self.dim:
            raise DomainError(f"multi-index {alpha} does not match dimension {self.dim}")
        if alpha.order > self.order:
            raise DomainError(f"|alpha|={alpha.order} beyond jet order {self.order}")
        return self.coeffs.get(tuple(alpha), 0)

    def derivative(self, alpha) -> object:
        """``d^alpha a(0)``."""
        return self[alpha] * MultiIndex(alpha).factorial


@dataclass(frozen=True)
class Amplitude:
    """An amplitude in user coordinates ``x1..x_dim``.

    ``sector[j]`` is the half-angle (radians) of the double sector
    ``|arg z| <= theta`` or ``|arg(-z)| <= theta`` on which the function is
    analytic and evaluable, or ``None`` when only real points are allowed.
    ``support`` is a per-axis radius outside which the function vanishes.
    """

    expr: Node
    dim: int
    tau: float = 0.0
    delta: float = 0.0
    sector: tuple = ()
    support: float | None = None
    label: str = ""

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError("amplitude dimension must be >= 1")
        if self.expr.max_axis() >= self.dim:
            raise DomainError(
                f"amplitude uses x{self.expr.max_axis() + 1} but the phase has dimension {self.dim}")
        if not self.delta >= -1:
            raise DomainError(f"class parameter delta must be >= -1, got {self.delta}")
        if not self.sector:
            object.__setattr__(self, "sector", (_default_sector(self.expr),) * self.dim)
        if len(self.sector) != self.dim:
            raise DomainError("sector must list one half-angle per coordinate")
        if not self.label:
            object.__setattr__(self, "label", self.expr.text())

    def check_class(self, phase: Phase):
        if not self.delta < phase.mu - 1:
            raise DomainError(
                f"amplitude class needs delta < min m_j - 1 = {phase.mu - 1}, got delta={self.delta}")

    def __call__(self, *xs):
        return evaluate(self, xs)

    def text(self) -> str:
        return self.expr.text()


def _default_sector(expr: Node):
    if expr.is_real_only():
        return None
    if expr.is_polynomial():
        return HALF_PI
    return QUARTER_PI


def _class_defaults(expr: Node) -> tuple[float, float]:
    if isinstance(expr, (Gauss, Rational, Bump)):
        return 0.0, -1.0
    if isinstance(expr, Poly):
        return float(max(sum(e) for _, e in expr.terms)), -1.0
    return 0.0, 0.0


def parse_amplitude(text: str, dim: int, *, tau=None, delta=None, sector=None) -> Amplitude:
    """Parse amplitude text for a phase of dimension ``dim``.

    ``sector`` overrides the analyticity half-angle: a float applies to every
    axis, the string ``"real"`` restricts evaluation to real points.
    """
    expr = parse_expression(text)
    t0, d0 = _class_defaults(expr)
    support = 1.0 if isinstance(expr, Bump) else None
    if sector == "real":
        sec = (None,) * dim
    elif sector is None:
        sec = ()
    else:
        sec = (float(sector),) * dim
    return Amplitude(expr, dim, t0 if tau is None else float(tau), d0 if delta is None else float(delta),
                     sec, support, text.strip())


def constant_amplitude(value, dim: int) -> Amplitude:
    return Amplitude(Const(Fraction(value)), dim)


def gauss(dim: int, c=1) -> Amplitude:
    return Amplitude(Gauss(Fraction(c)), dim, 0.0, -1.0)


def rational(dim: int, *ks: int) -> Amplitude:
    return Amplitude(Rational(tuple(ks) or (1,)), dim, 0.0, -1.0)


def _folded_angle(z: np.ndarray) -> np.ndarray:
    a = np.abs(np.angle(z))
    return np.minimum(a, np.pi - a)


def evaluate(a: Amplitude, x: Sequence) -> np.ndarray | complex | float:
    """Evaluate ``a`` at a point (or broadcastable arrays of points) in user order."""
    if len(x) != a.dim:
        raise DomainError(f"point has {len(x)} coordinates, amplitude expects {a.dim}")
    xs = []
    for j, xj in enumerate(x):
        arr = np.asarray(xj)
        if np.iscomplexobj(arr):
            nonreal = arr.imag != 0
            if np.any(nonreal):
                theta = a.sector[j]
                if theta is None:
                    raise SectorError(f"amplitude {a.label!r} is real-axis only (x{j + 1} is complex)")
                if np.any(_folded_angle(arr[nonreal]) > theta + 1e-12):
                    raise SectorError(
                        f"x{j + 1} outside the declared sector of half-angle {theta:.6g} rad")
            else:
                arr = arr.real
        xs.append(arr)
    with np.errstate(over="ignore", invalid="ignore"):
        val = a.expr.evaluate(xs)
    val = np.asarray(val)
    if not np.all(np.isfinite(val)):
        raise NumericalError(f"amplitude {a.label!r} produced a non-finite value")
    if val.ndim == 0:
        return val.item()
    return val


def taylor_at_zero(a: Amplitude, order: int) -> JetTable:
    """Exact-order Taylor coefficients at the origin via jet arithmetic."""
    if isinstance(order, bool) or not isinstance(order, int) or order < 0:
        raise DomainError(f"jet order must be a non-negative int, got {order!r}")
    if order > MAX_JET_ORDER:
        raise DomainError(f"jet order {order} exceeds the supported maximum {MAX_JET_ORDER}")
    jet = a.expr.jet(a.dim, order)
    for v in jet.coeffs.values():
        if not math.isfinite(abs(complex(v))):
            raise NumericalError("non-finite Taylor coefficient")
    return JetTable(a.dim, order, dict(jet.coeffs))


# --------------------------------------------------------------------------- seminorm


@dataclass(frozen=True)
class ProbeGrid:
    r_min: float = 1e-2
    r_max: float = 1e2
    n_radii: int = 60
    n_random_directions: int = 8
    seed: int = 0
    fd_step: float = 1e-3

    def directions(self, dim: int) -> np.ndarray:
        if dim == 1:
            return np.array([[1.0], [-1.0]])
        eye = np.eye(dim)
        dirs = [eye, -eye, np.ones((1, dim)) / math.sqrt(dim), -np.ones((1, dim)) / math.sqrt(dim)]
        if self.n_random_directions:
            rng = np.random.default_rng(self.seed)
            g = rng.standard_normal((self.n_random_directions, dim))
            dirs.append(g / np.linalg.norm(g, axis=1, keepdims=True))
        return np.vstack(dirs)


@dataclass(frozen=True)
class SeminormReport:
    value: float
    value_abs_weight: float
    growth_detected: bool
    note: str


_WEIGHT_NOTE = ("weight <x>^(-tau-delta|alpha|) used for the reported value; "
                "the |x|^(-tau-delta|alpha|) variant is reported alongside and differs near x = 0")


def _multi_indices(dim: int, l: int):
    if dim == 0:
        yield ()
        return
    for a in range(l + 1):
        for rest in _multi_indices(dim - 1, l - a):
            yield (a,) + rest


def _fd_derivative(a: Amplitude, pts: np.ndarray, alpha: tuple, h: np.ndarray) -> np.ndarray:
    """Tensor central differences of order alpha with per-point step h."""
    stencils = []
    for k in alpha:
        stencils.append([((k / 2 - i), (-1) ** i * math.comb(k, i)) for i in range(k + 1)])
    out = np.zeros(pts.shape[0])
    for combo in itertools.product(*stencils):
        shift = np.array([s for s, _ in combo])
        w = math.prod(c for _, c in combo)
        p = pts + shift[None, :] * h[:, None]
        out = out + w * np.asarray(a.expr.evaluate([p[:, j] for j in range(a.dim)]), dtype=float)
    return out / h ** sum(alpha)


def seminorm_report(a: Amplitude, tau: float, delta: float, l: int,
                    grid: ProbeGrid = ProbeGrid()) -> SeminormReport:
    if l < 0:
        raise DomainError("seminorm order l must be >= 0")
    radii = np.geomspace(grid.r_min, grid.r_max, grid.n_radii)
    dirs = grid.directions(a.dim)
    pts = (radii[:, None, None] * dirs[None, :, :]).reshape(-1, a.dim)
    r = np.repeat(radii, dirs.shape[0])
    h = grid.fd_step * np.maximum(1.0, r)
    bracket = np.sqrt(1.0 + r * r)
    best_b = np.zeros_like(r)
    best_a = np.zeros_like(r)
    with np.errstate(all="ignore"):
        for alpha in _multi_indices(a.dim, l):
            d = np.abs(_fd_derivative(a, pts, alpha, h))
            expo = -tau - delta * sum(alpha)
            best_b = np.maximum(best_b, np.nan_to_num(d * bracket ** expo, nan=np.inf))
            best_a = np.maximum(best_a, np.nan_to_num(d * r ** expo, nan=np.inf))
    per_radius = best_b.reshape(grid.n_radii, -1).max(axis=1)
    tail = max(2, grid.n_radii // 5)
    outer = per_radius[-tail:].max()
    inner = per_radius[-2 * tail:-tail].max()
    growth = not np.isfinite(outer) or outer > 2.0 * max(inner, 1e-300) and outer > 1e-12
    if growth:
        return SeminormReport(math.inf, math.inf, True, _WEIGHT_NOTE)
    return SeminormReport(float(best_b.max()), float(best_a.max()), False, _WEIGHT_NOTE)


def seminorm_probe(a: Amplitude, tau: float, delta: float, l: int,
                   grid: ProbeGrid = ProbeGrid()) -> float:
    """Sampled estimate of ``max_{|alpha|<=l} sup_x <x>^(-tau-delta|alpha|) |d^alpha a(x)|``.

    Diagnostic only; ``math.inf`` signals detected growth.
    """
    return seminorm_report(a, tau, delta, l, grid).value
