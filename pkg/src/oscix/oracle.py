"""Numerical reference values for ``Os-int exp(i lam phi(x)) a(x) dx``.

Two independent routes:

* rotated contour: every half-axis ``x = +-t`` is turned onto the ray of angle
  ``+-pi/(2m)`` on which ``exp(i lam s x^m)`` becomes ``exp(-lam t^m)``; the
  decaying integrand is handled by composite Gauss-Legendre panels, tensorised
  over axes for several variables;
* regularized limit (one variable): the absolutely convergent real-axis
  integral with a Schwartz cutoff ``chi(eps x)`` is computed by adaptive
  quadrature for a decreasing ``eps`` sequence and extrapolated to ``eps -> 0``.
"""

from __future__ import annotations

import cmath
import itertools
import math
import os
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .amplitude import Amplitude, Const, SectorError, evaluate
from .core import DomainError, NumericalError, Phase, parse_sign, phase_canonicalize

DEFAULT_MAX_EVALS = 16_000_000
TAIL_EXPONENT = 40.0  # exp(-40) ~ 4e-18


class CostGuardError(DomainError):
    """A tensor grid would exceed the configured evaluation budget."""


def max_evals_from_env() -> int:
    raw = os.environ.get("OSCIX_MAX_EVALS")
    if not raw:
        return DEFAULT_MAX_EVALS
    try:
        value = int(float(raw))
    except ValueError:
        raise DomainError(f"OSCIX_MAX_EVALS must be an integer, got {raw!r}") from None
    if value < 1:
        raise DomainError("OSCIX_MAX_EVALS must be positive")
    return value


@dataclass(frozen=True)
class QuadratureConfig:
    nodes: int = 200
    panels: int = 8
    nodes_nd: int | None = None  # None: largest grid that fits max_evals
    panels_nd: int = 4
    target_error: float = 1e-10
    max_refinements: int = 3
    ray_length: float | None = None  # None: from the tail bound
    max_evals: int | None = None  # None: OSCIX_MAX_EVALS or 16e6

    def __post_init__(self):
        if self.nodes < 16:
            raise DomainError(f"at least 16 nodes per axis are required, got {self.nodes}")
        if self.nodes_nd is not None and self.nodes_nd < 16:
            raise DomainError(f"at least 16 nodes per axis are required, got {self.nodes_nd}")
        if self.panels < 1 or self.panels_nd < 1:
            raise DomainError("panel counts must be >= 1")
        if self.ray_length is not None and not self.ray_length > 0:
            raise DomainError("ray truncation T must be > 0")
        if not self.target_error > 0:
            raise DomainError("target error must be > 0")

    @property
    def budget(self) -> int:
        return self.max_evals if self.max_evals is not None else max_evals_from_env()


@dataclass(frozen=True)
class OracleResult:
    value: complex
    error: float
    method: str
    lam: float
    extras: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {"re": self.value.real, "im": self.value.imag, "error": self.error,
                "method": self.method, "lambda": self.lam, **self.extras}


def _check_lambda(lam) -> float:
    lam = float(lam)
    if not (math.isfinite(lam) and lam > 0):
        raise DomainError(f"lambda must be a finite positive number, got {lam}")
    return lam


# --------------------------------------------------------------------------- rotated contour


@lru_cache(maxsize=64)
def _legendre(k: int):
    return np.polynomial.legendre.leggauss(k)


def _panel_rule(length: float, nodes: int, panels: int):
    k = max(2, -(-nodes // panels))
    x, w = _legendre(k)
    h = length / panels
    left = np.arange(panels) * h
    t = (left[:, None] + 0.5 * h * (x[None, :] + 1.0)).ravel()
    wt = np.tile(0.5 * h * w, panels)
    return t, wt


def _ray_angle(m: int, sign: int, half: int) -> float:
    """Rotation angle for the half-axis ``x = half * y``, y > 0."""
    eff = sign if half > 0 else sign * (-1) ** m
    return eff * math.pi / (2 * m)


def _check_sector(a: Amplitude, axis: int, angle: float):
    theta = a.sector[axis]
    if theta is None:
        raise SectorError(f"amplitude {a.label!r} is real-axis only; use the regularized oracle")
    if abs(angle) > theta + 1e-12:
        raise SectorError(f"rotation by {abs(angle):.6g} rad on x{axis + 1} exceeds the declared "
                          f"analyticity sector {theta:.6g} rad")


def _ray_length(a: Amplitude, axis: int, m: int, lam: float, cfg: QuadratureConfig,
                angles: Sequence[tuple[int, float]]) -> float:
    """Ray truncation from |a| exp(-lam t^m) < 1e-16 * peak along the rays of one axis."""
    if cfg.ray_length is not None:
        return cfg.ray_length
    t0 = (TAIL_EXPONENT / lam) ** (1.0 / m)
    t = np.linspace(0.0, 4.0 * t0, 401)
    envelope = np.zeros_like(t)
    for half, ang in angles:
        point = [np.zeros_like(t) for _ in range(a.dim)]
        point[axis] = half * t * np.exp(1j * ang)
        vals = np.abs(np.broadcast_to(evaluate(a, point), t.shape))
        envelope = np.maximum(envelope, vals * np.exp(-lam * t ** m))
    peak = envelope.max()
    if peak == 0.0:
        return t0
    significant = np.nonzero(envelope > 1e-17 * peak)[0]
    return max(t0, 1.05 * t[significant[-1]])


def _half_line_1d(m, sign, a: Amplitude, lam, length, nodes, panels) -> complex:
    """Rotated rule on both half-axes; returns (value, sum of |terms|)."""
    total, magnitude = 0j, 0.0
    t, w = _panel_rule(length, nodes, panels)
    decay = np.exp(-lam * t ** m)
    for half in (1, -1):
        ang = _ray_angle(m, sign, half)
        rot = np.exp(1j * ang)
        terms = w * decay * np.broadcast_to(evaluate(a, [half * t * rot]), t.shape)
        total += rot * np.sum(terms)
        magnitude += float(np.sum(np.abs(terms)))
    return complex(total), magnitude


def oracle_1d_rotated(m: int, sign, a: Amplitude, lam: float,
                      cfg: QuadratureConfig = QuadratureConfig()) -> OracleResult:
    """``Os-int_R exp(i sign lam x^m) a(x) dx`` by contour rotation.

    The value is the ``2n``-node rule; the error estimate is its distance to
    the ``n``-node rule.  Nodes double until the estimate meets the target.
    """
    s = parse_sign(sign)
    if isinstance(m, bool) or not isinstance(m, int) or m < 2:
        raise DomainError(f"monomial degree must be an int >= 2, got {m!r}")
    if a.dim != 1:
        raise DomainError("oracle_1d_rotated needs a one-dimensional amplitude")
    lam = _check_lambda(lam)
    angles = [(h, _ray_angle(m, s, h)) for h in (1, -1)]
    for _, ang in angles:
        _check_sector(a, 0, ang)
    length = _ray_length(a, 0, m, lam, cfg, angles)
    nodes = cfg.nodes
    coarse, _ = _half_line_1d(m, s, a, lam, length, nodes, cfg.panels)
    for _ in range(cfg.max_refinements + 1):
        fine, magnitude = _half_line_1d(m, s, a, lam, length, 2 * nodes, cfg.panels)
        # rounding in the sum is a floor under the doubling difference
        err = max(abs(fine - coarse), 4 * np.finfo(float).eps * magnitude)
        if err <= cfg.target_error:
            break
        coarse, nodes = fine, 2 * nodes
    else:
        raise NumericalError(f"rotated 1-D quadrature did not reach {cfg.target_error:g} "
                             f"(estimate {err:.3e} with {2 * nodes} nodes)")
    return OracleResult(fine, float(err), "rotated-contour", lam,
                        {"nodes": 2 * nodes, "ray_length": float(length)})


def _auto_nodes_nd(n: int, cfg: QuadratureConfig) -> int:
    budget = cfg.budget
    per = int((budget / (2 ** n * (1 + 2 * n))) ** (1.0 / n))
    per = min(cfg.nodes, per)
    per -= per % cfg.panels_nd
    return max(per, 16)


def _grid_cost(n: int, nodes: int) -> int:
    return 2 ** n * nodes ** n * (1 + 2 * n)


def _orthant_sum(a: Amplitude, rules, halves, angles) -> complex:
    n = len(rules)
    coords = []
    weight = None
    for j, ((t, w, decay), half, ang) in enumerate(zip(rules, halves, angles)):
        shape = [1] * n
        shape[j] = t.size
        rot = np.exp(1j * ang)
        coords.append((half * t * rot).reshape(shape))
        wj = (rot * w * decay).reshape(shape)
        weight = wj if weight is None else weight * wj
    terms = np.broadcast_to(evaluate(a, coords), weight.shape) * weight
    return complex(np.sum(terms)), float(np.sum(np.abs(terms)))


def oracle_nd_rotated(phase: Phase, a: Amplitude, lam: float,
                      cfg: QuadratureConfig = QuadratureConfig()) -> OracleResult:
    """Tensor-product contour quadrature over the ``2^n`` orthants.

    Returns the base-grid value; the error estimate sums, over axes, the change
    caused by doubling that axis alone.
    """
    lam = _check_lambda(lam)
    n = phase.n
    if a.dim != n:
        raise DomainError(f"amplitude dimension {a.dim} does not match phase dimension {n}")
    monos = phase.user_monomials
    axis_angles = []
    for j, (m, s) in enumerate(monos):
        angs = [(h, _ray_angle(m, s, h)) for h in (1, -1)]
        for _, ang in angs:
            _check_sector(a, j, ang)
        axis_angles.append(angs)
    explicit = cfg.nodes_nd is not None
    nodes = cfg.nodes_nd if explicit else _auto_nodes_nd(n, cfg)
    if _grid_cost(n, nodes) > cfg.budget:
        raise CostGuardError(
            f"{n}-D grid with {nodes} nodes per axis needs {_grid_cost(n, nodes):,} evaluations, "
            f"above the budget of {cfg.budget:,} (raise OSCIX_MAX_EVALS to override)")
    lengths = [_ray_length(a, j, m, lam, cfg, axis_angles[j]) for j, (m, _) in enumerate(monos)]

    def rule(j, k):
        t, w = _panel_rule(lengths[j], k, cfg.panels_nd)
        return t, w, np.exp(-lam * t ** monos[j][0])

    def integrate_grid(node_counts):
        rules = [rule(j, k) for j, k in enumerate(node_counts)]
        parts, magnitude = [], 0.0
        for halves in itertools.product((1, -1), repeat=n):
            angs = [dict(axis_angles[j])[h] for j, h in enumerate(halves)]
            part, mag = _orthant_sum(a, rules, halves, angs)
            parts.append(part)
            magnitude += mag
        value = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
        return value, magnitude

    if isinstance(a.expr, Const) and a.expr.value == 0:
        return OracleResult(0j, 0.0, "rotated-contour", lam, {"nodes": nodes})

    for _ in range(cfg.max_refinements + 1):
        base, magnitude = integrate_grid([nodes] * n)
        err = 4 * n * np.finfo(float).eps * magnitude
        for j in range(n):
            counts = [nodes] * n
            counts[j] = 2 * nodes
            err += abs(integrate_grid(counts)[0] - base)
        if err <= cfg.target_error:
            break
        if explicit or _grid_cost(n, 2 * nodes) > cfg.budget:
            raise NumericalError(f"{n}-D rotated quadrature estimate {err:.3e} above target "
                                 f"{cfg.target_error:g} at the largest affordable grid ({nodes} per axis)")
        nodes *= 2
    else:
        raise NumericalError(f"{n}-D rotated quadrature did not reach {cfg.target_error:g}")
    return OracleResult(base, float(err), "rotated-contour", lam,
                        {"nodes": nodes, "ray_length": [float(v) for v in lengths]})


def oracle_rotated(phase: Phase, a: Amplitude, lam: float,
                   cfg: QuadratureConfig = QuadratureConfig()) -> OracleResult:
    """Dispatch to the 1-D or tensor rotated oracle."""
    if phase.n == 1:
        m, s = phase.monomials[0]
        return oracle_1d_rotated(m, s, a, lam, cfg)
    return oracle_nd_rotated(phase, a, lam, cfg)


# --------------------------------------------------------------------------- regularized limit


def _chi_gauss(y):
    return math.exp(-y * y)


def _chi_quartic(y):
    return math.exp(-(y ** 4))


def _chi_sech(y):
    return 1.0 / math.cosh(y) if abs(y) < 700 else 0.0


# name -> (cutoff, order of its first non-vanishing Taylor term beyond chi(0) = 1)
CUTOFFS: dict[str, tuple[Callable[[float], float], int]] = {
    "gauss": (_chi_gauss, 2),
    "quartic": (_chi_quartic, 4),
    "sech": (_chi_sech, 2),
}

DEFAULT_EPS_LEVELS = tuple(range(2, 13))


def _quad(f, lo, hi, **kw):
    """scipy quad returning (value, abserr, flagged); flagged when QUADPACK warned.

    A flagged abserr is not trusted (the Fourier-tail rule reports huge bounds
    for slowly decaying integrands even when its extrapolated value is right);
    the caller then relies on the eps-extrapolation spread and the cutoff
    cross-check instead.
    """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        val, err = integrate.quad(f, lo, hi, **kw)
    flagged = any(issubclass(w.category, integrate.IntegrationWarning) for w in caught)
    return val, err, flagged


def _quad_complex(f, lo, hi, **kw):
    re, re_err, re_flag = _quad(lambda x: f(x).real, lo, hi, **kw)
    im, im_err, im_flag = _quad(lambda x: f(x).imag, lo, hi, **kw)
    return complex(re, im), re_err + im_err, re_flag or im_flag


def _regularized_half(m, s, amp, lam, chi, eps, support):
    """int_0^inf exp(i s lam y^m) amp(y) chi(eps y) dy with real-valued amp.

    Returns (value, trusted error bound, number of flagged quadratures).
    """
    f = lambda y: cmath.exp(1j * s * lam * y ** m) * amp(y) * chi(eps * y)
    if support is not None:
        val, err, flag = _quad_complex(f, 0.0, support, limit=400, epsabs=1e-14, epsrel=1e-13)
        return val, (0.0 if flag else err), int(flag)
    x0 = min(1.0, (2 * math.pi / lam) ** (1.0 / m))
    head, head_err, head_flag = _quad_complex(f, 0.0, x0, limit=400, epsabs=1e-15, epsrel=1e-13)
    # u = y^m makes the oscillation uniform; QUADPACK's Fourier rule handles the tail.
    g = lambda u: amp(u ** (1.0 / m)) * chi(eps * u ** (1.0 / m)) * u ** (1.0 / m - 1.0) / m
    c, c_err, c_flag = _quad(g, x0 ** m, np.inf, weight="cos", wvar=lam, limlst=200, epsabs=1e-15)
    sn, s_err, s_flag = _quad(g, x0 ** m, np.inf, weight="sin", wvar=lam, limlst=200, epsabs=1e-15)
    trusted = sum(e for e, fl in ((head_err, head_flag), (c_err, c_flag), (s_err, s_flag)) if not fl)
    return head + complex(c, s * sn), trusted, head_flag + c_flag + s_flag


def _regularized_at(m, s, a: Amplitude, lam, chi, eps):
    def amp_pos(y):
        return float(evaluate(a, [y]))

    def amp_neg(y):
        return float(evaluate(a, [-y]))

    right, e1, f1 = _regularized_half(m, s, amp_pos, lam, chi, eps, a.support)
    left, e2, f2 = _regularized_half(m, s * (-1) ** m, amp_neg, lam, chi, eps, a.support)
    return right + left, e1 + e2, f1 + f2


def _extrapolate(eps: Sequence[float], vals: Sequence[complex], p: int) -> complex:
    """Fit I0 + c1 eps^p + c2 eps^(p+1) + ... through the points; return I0."""
    k = len(eps)
    A = np.array([[1.0] + [e ** (p + i) for i in range(k - 1)] for e in eps])
    return complex(np.linalg.solve(A, np.array(vals, dtype=complex))[0])


def _regularized_run(m, s, a, lam, chi_name, levels):
    chi, p = CUTOFFS[chi_name]
    eps = [2.0 ** -k for k in levels]
    vals, quad_err, n_warn = [], 0.0, 0
    for e in eps:
        v, err, flagged = _regularized_at(m, s, a, lam, chi, e)
        vals.append(v)
        quad_err = max(quad_err, err)
        n_warn += flagged
    if len(vals) < 5:
        raise DomainError("the eps sequence needs at least 5 levels")
    scale = max(abs(v) for v in vals)
    steps = [abs(b - a_) for a_, b in zip(vals, vals[1:])]
    noise = 1e-12 * max(scale, 1e-300)
    if steps[-1] > noise and steps[-1] > steps[0]:
        raise NumericalError(f"regularized values do not settle as eps -> 0 (spread {steps[-1]:.3e} "
                             f"after {steps[0]:.3e}); amplitude may be outside the admissible class")
    best = _extrapolate(eps[-4:], vals[-4:], p)
    prev = _extrapolate(eps[-5:-1], vals[-5:-1], p)
    spread = abs(best - prev)
    return best, spread, quad_err, vals, n_warn


def oracle_1d_regularized(m: int, sign, a: Amplitude, lam: float, chi: str = "gauss",
                          eps_levels: Sequence[int] = DEFAULT_EPS_LEVELS,
                          check_chi: str | None = "auto") -> OracleResult:
    """``lim_{eps->0} int_R exp(i sign lam x^m) a(x) chi(eps x) dx`` on the real axis.

    ``eps`` runs over ``2**-k`` for ``k`` in ``eps_levels``; the limit comes
    from a Richardson fit on the smallest four ``eps``.  The computation is
    repeated with a second cutoff (``check_chi``; ``"auto"`` picks one that
    differs from ``chi``) and the discrepancy is folded into the error.
    """
    s = parse_sign(sign)
    if isinstance(m, bool) or not isinstance(m, int) or m < 2:
        raise DomainError(f"monomial degree must be an int >= 2, got {m!r}")
    if a.dim != 1:
        raise DomainError("the regularized oracle is one-dimensional")
    if chi not in CUTOFFS:
        raise DomainError(f"unknown cutoff {chi!r}; choose from {sorted(CUTOFFS)}")
    lam = _check_lambda(lam)
    levels = sorted(set(int(k) for k in eps_levels))
    value, spread, quad_err, vals, n_warn = _regularized_run(m, s, a, lam, chi, levels)
    extras = {"chi": chi, "eps_levels": levels, "quad_warnings": n_warn,
              "raw_smallest_eps": [vals[-1].real, vals[-1].imag]}
    discrepancy = 0.0
    if check_chi == "auto":
        check_chi = "quartic" if chi != "quartic" else "gauss"
    if check_chi:
        if check_chi not in CUTOFFS:
            raise DomainError(f"unknown cutoff {check_chi!r}")
        other, *_ = _regularized_run(m, s, a, lam, check_chi, levels)
        discrepancy = abs(other - value)
        extras.update({"check_chi": check_chi, "chi_discrepancy": discrepancy})
    floor = 4 * np.finfo(float).eps * max(abs(value), 1.0)
    error = max(spread, quad_err, discrepancy, floor)
    return OracleResult(value, float(error), "regularized-limit", lam, extras)


def plain_integral_1d(m: int, sign, a: Amplitude, lam: float) -> complex:
    """Ordinary integral over the support of a compactly supported amplitude."""
    if a.support is None:
        raise DomainError("plain integral needs a compactly supported amplitude")
    s = parse_sign(sign)
    f = lambda x: cmath.exp(1j * s * lam * x ** m) * float(evaluate(a, [x]))
    val, _, _ = _quad_complex(f, -a.support, a.support, limit=400, epsabs=1e-15, epsrel=1e-13)
    return val


def single_axis_phase(m: int, sign) -> Phase:
    return phase_canonicalize([(m, sign)])
