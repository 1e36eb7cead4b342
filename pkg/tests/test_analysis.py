import math
from fractions import Fraction

import numpy as np
import pytest

from oscix import analysis
from oscix.amplitude import parse_amplitude
from oscix.analysis import (ConvergenceRow, ConvergenceTable, NoiseFloorError, fit_order, geometric_grid,
                            parse_grid, remainder_series, synthetic_table)
from oscix.core import DomainError, NumericalError, parse_phase


def test_exact_power_law():
    lams = geometric_grid(10, 1000, 8)
    slope, stderr, used = fit_order(synthetic_table(lams, lams ** -2.0, Fraction(2)))
    assert slope == pytest.approx(-2.0, abs=1e-12)
    assert stderr < 1e-10 and used == 8


def test_wobbly_power_law():
    lams = geometric_grid(10, 1000, 8)
    diffs = 3 * lams ** -2.5 * (1 + 0.01 * np.sin(np.log(lams)))
    slope, _, _ = fit_order(synthetic_table(lams, diffs, Fraction(5, 2)))
    assert abs(slope + 2.5) < 0.05


def test_noise_floor_flagged():
    lams = geometric_grid(10, 1000, 8)
    table = synthetic_table(lams, np.full(8, 1e-15), Fraction(2), oracle_error=1e-15)
    with pytest.raises(NoiseFloorError):
        fit_order(table)


def test_grids():
    g = parse_grid("20:640:6")
    assert g[0] == pytest.approx(20) and g[-1] == pytest.approx(640) and len(g) == 6
    assert np.allclose(np.diff(np.log(g)), math.log(2))
    for bad in ["20:640", "a:b:c", "640:20:6", "0:10:6", "1:10:1"]:
        with pytest.raises(DomainError):
            parse_grid(bad)


def test_table_invariants():
    rows = [ConvergenceRow(2.0, 1j, 0j, 0.0), ConvergenceRow(1.0, 1j, 0j, 0.0)]
    with pytest.raises(DomainError):
        ConvergenceTable(rows, Fraction(1), "synthetic")


def test_remainder_order_one_variable():
    t = remainder_series(parse_phase("2:+"), parse_amplitude("rational 1", 1), 7, geometric_grid(20, 640, 6))
    assert t.predicted_order == 3
    assert t.fitted_slope <= -3 + 0.15
    assert all(r.diff >= 0 for r in t.rows)


def test_exact_expansion_sits_at_noise_floor():
    t = remainder_series(parse_phase("2:+"), parse_amplitude("1", 1), 5, geometric_grid(20, 640, 6))
    assert t.fitted_slope is None
    assert "noise floor" in t.fit_note
    assert all(r.diff <= 10 * r.oracle_error or r.diff < 1e-14 for r in t.rows)


@pytest.mark.parametrize("phase,amp,n1", [("2:+", "rational 1", 5), ("3:+", "(mul x (gauss))", 5),
                                          ("2:-", "(exp x)", 4), ("4:+", "rational 1", 6)])
def test_raising_n1_by_m1_steepens(phase, amp, n1):
    ph = parse_phase(phase)
    a = parse_amplitude(amp, 1)
    m1 = ph.exponents[0]
    lams = geometric_grid(20, 640, 8)
    low = remainder_series(ph, a, n1, lams)
    high = remainder_series(ph, a, n1 + m1, lams)
    assert low.fitted_slope <= -float(low.predicted_order) + 0.15
    assert high.fitted_slope <= low.fitted_slope - 0.8


def test_failed_rows_leave_gaps(monkeypatch):
    real = analysis._oracle_for

    def flaky(phase, a, method, cfg):
        inner = real(phase, a, method, cfg)

        def call(lam):
            if lam > 300:
                raise NumericalError("synthetic failure")
            return inner(lam)
        return call

    monkeypatch.setattr(analysis, "_oracle_for", flaky)
    t = remainder_series(parse_phase("2:+"), parse_amplitude("rational 1", 1), 7, geometric_grid(20, 640, 8))
    gaps = [r for r in t.rows if r.failure]
    assert len(gaps) == 2 and all(math.isnan(r.diff) for r in gaps)
    assert t.fit_rows == 6
    assert "gap: synthetic failure" in t.to_csv()


def test_csv_layout():
    t = remainder_series(parse_phase("3:+"), parse_amplitude("(mul x (gauss))", 1), 8,
                         geometric_grid(20, 640, 6))
    lines = t.to_csv().splitlines()
    assert lines[0] == "# predicted_order: 2/1"
    assert any(l.startswith("# fitted_slope: -") for l in lines)
    header = [l for l in lines if not l.startswith("#")][0]
    assert header.startswith("lambda,oracle_re,oracle_im,expansion_re,expansion_im,abs_diff")
    assert len([l for l in lines if not l.startswith("#")]) == 7


def test_regularized_series():
    t = remainder_series(parse_phase("3:+"), parse_amplitude("rational 1", 1), 6,
                         geometric_grid(10, 80, 6), method="regularized")
    assert t.fitted_slope <= -float(t.predicted_order) + 0.15


def test_bad_inputs():
    ph, a = parse_phase("2:+"), parse_amplitude("1", 1)
    with pytest.raises(DomainError):
        remainder_series(ph, a, 5, [])
    with pytest.raises(DomainError):
        remainder_series(ph, a, 5, [10, 20, 40])
    with pytest.raises(DomainError):
        remainder_series(ph, a, 5, geometric_grid(10, 100, 6), method="magic")
    with pytest.raises(DomainError):
        remainder_series(parse_phase("2:+,2:+"), parse_amplitude("1", 2), 5, geometric_grid(10, 100, 6),
                         method="regularized")


@pytest.mark.parametrize("name,amp,n1", [("A_2", "gauss", 9), ("2:+,3:-", "rational 1 1", 6)])
def test_multivariable_nonempty_expansion(name, amp, n1):
    from oscix.expansion import preset
    ph = parse_phase(name) if ":" in name else preset(name)
    a = parse_amplitude(amp, ph.n)
    lams = geometric_grid(10, 320, 6)
    low = remainder_series(ph, a, n1, lams)
    high = remainder_series(ph, a, n1 + ph.exponents[0], lams)
    assert low.meta["terms"] >= 1
    assert low.fitted_slope <= -float(low.predicted_order) + 0.15
    assert high.fitted_slope <= -float(high.predicted_order) + 0.15
    assert high.fitted_slope <= low.fitted_slope - 0.8
