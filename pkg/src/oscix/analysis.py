"""Empirical remainder orders: |oracle - truncated expansion| over a lambda grid."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .amplitude import Amplitude
from .core import DomainError, NumericalError, OscixError, Phase, format_fraction
from .expansion import Expansion, eval_expansion, expand
from .oracle import OracleResult, QuadratureConfig, oracle_1d_regularized, oracle_rotated

NOISE_FACTOR = 10.0
MIN_FIT_ROWS = 4
MIN_GRID = 6


class NoiseFloorError(NumericalError):
    """Too few rows lie above the quadrature noise floor to fit a slope."""


def geometric_grid(start: float, stop: float, count: int) -> np.ndarray:
    if count < 2:
        raise DomainError(f"a lambda grid needs at least 2 points, got {count}")
    if not (0 < start < stop and math.isfinite(stop)):
        raise DomainError(f"need 0 < start < stop for a geometric grid, got {start}, {stop}")
    return np.geomspace(start, stop, count)


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:count`` -> geometric grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"grid must look like start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise DomainError(f"malformed grid {text!r}") from None
    return geometric_grid(start, stop, count)


@dataclass(frozen=True)
class ConvergenceRow:
    lam: float
    oracle: complex | None
    expansion: complex
    oracle_error: float
    failure: str | None = None

    @property
    def diff(self) -> float:
        if self.oracle is None:
            return math.nan
        return abs(self.oracle - self.expansion)


@dataclass
class ConvergenceTable:
    rows: list[ConvergenceRow]
    predicted_order: Fraction
    method: str
    meta: dict = field(default_factory=dict)
    fitted_slope: float | None = None
    slope_stderr: float | None = None
    fit_rows: int = 0
    fit_note: str = ""

    def __post_init__(self):
        lams = [r.lam for r in self.rows]
        if any(b <= a for a, b in zip(lams, lams[1:])):
            raise DomainError("lambda values must be strictly increasing")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# predicted_order: {format_fraction(self.predicted_order)}\n")
        buf.write(f"# predicted_slope: {-float(self.predicted_order):.17g}\n")
        if self.fitted_slope is None:
            buf.write(f"# fitted_slope: none ({self.fit_note})\n")
        else:
            buf.write(f"# fitted_slope: {self.fitted_slope:.17g}\n")
            buf.write(f"# slope_stderr: {self.slope_stderr:.17g}\n")
            buf.write(f"# fit_rows: {self.fit_rows}\n")
        buf.write(f"# oracle: {self.method}\n")
        for key, value in self.meta.items():
            buf.write(f"# {key}: {value}\n")
        buf.write("lambda,oracle_re,oracle_im,expansion_re,expansion_im,abs_diff,oracle_error,status\n")
        for r in self.rows:
            o = r.oracle if r.oracle is not None else complex(math.nan, math.nan)
            status = "ok" if r.failure is None else "gap: " + r.failure.replace(",", ";")
            cells = [r.lam, o.real, o.imag, r.expansion.real, r.expansion.imag, r.diff, r.oracle_error]
            buf.write(",".join(f"{v:.17g}" for v in cells) + f",{status}\n")
        return buf.getvalue()


def _oracle_for(phase: Phase, a: Amplitude, method: str, cfg: QuadratureConfig
                ) -> Callable[[float], OracleResult]:
    if method == "rotated":
        return lambda lam: oracle_rotated(phase, a, lam, cfg)
    if method == "regularized":
        if phase.n != 1:
            raise DomainError("the regularized oracle is one-dimensional")
        m, s = phase.monomials[0]
        return lambda lam: oracle_1d_regularized(m, s, a, lam)
    raise DomainError(f"unknown oracle {method!r}; use 'rotated' or 'regularized'")


def remainder_series(phase: Phase, a: Amplitude, n1: int, lams: Sequence[float],
                     method: str = "rotated", cfg: QuadratureConfig = QuadratureConfig(),
                     *, fit: bool = True) -> ConvergenceTable:
    """Tabulate |oracle(lam) - expansion(lam)| and fit the decay exponent.

    A failing oracle leaves a gap row (NaN) instead of aborting the study.
    """
    lams = [float(x) for x in lams]
    if not lams:
        raise DomainError("empty lambda grid")
    if len(lams) < MIN_GRID:
        raise DomainError(f"a convergence study needs at least {MIN_GRID} lambda values, got {len(lams)}")
    e: Expansion = expand(phase, a, n1)
    oracle = _oracle_for(phase, a, method, cfg)
    rows = []
    for lam in lams:
        partial = eval_expansion(e, lam)
        try:
            res = oracle(lam)
        except NumericalError as exc:
            rows.append(ConvergenceRow(lam, None, partial, math.nan, str(exc)))
            continue
        rows.append(ConvergenceRow(lam, res.value, partial, res.error))
    table = ConvergenceTable(rows, e.remainder_order, method,
                             {"phase": phase.describe(), "amplitude": a.label, "N1": n1,
                              "terms": len(e.terms)})
    if fit:
        try:
            slope, stderr, used = fit_order(table)
            table.fitted_slope, table.slope_stderr, table.fit_rows = slope, stderr, used
        except OscixError as exc:
            table.fit_note = str(exc)
    return table


def fit_order(table: ConvergenceTable) -> tuple[float, float, int]:
    """Least-squares slope of log|diff| against log lambda.

    Rows whose difference does not exceed ``10 x`` the oracle error estimate
    (or that are gaps) are dropped.  Returns (slope, stderr, rows used).
    """
    usable = [r for r in table.rows
              if r.oracle is not None and r.diff > 0 and r.diff > NOISE_FACTOR * r.oracle_error]
    if len(usable) < MIN_FIT_ROWS:
        raise NoiseFloorError(f"only {len(usable)} of {len(table.rows)} rows lie above the noise floor "
                              f"(10x the oracle error); at least {MIN_FIT_ROWS} are needed")
    x = np.log([r.lam for r in usable])
    y = np.log([r.diff for r in usable])
    fit = stats.linregress(x, y)
    return float(fit.slope), float(fit.stderr), len(usable)


def synthetic_table(lams: Sequence[float], diffs: Sequence[float], predicted: Fraction,
                    oracle_error: float = 0.0) -> ConvergenceTable:
    """A table whose oracle column is ``diff`` and expansion column is 0."""
    rows = [ConvergenceRow(float(l), complex(d), 0j, oracle_error) for l, d in zip(lams, diffs)]
    return ConvergenceTable(rows, predicted, "synthetic")
