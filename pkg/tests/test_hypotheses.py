#!/usr/bin/env python3

"""Finite differences in k, closed-form integrals and the hypothesis reports"""

import math

import numpy as np
import pytest

from periwave.config import Numerics
from periwave.families import Family
from periwave.hypotheses import (
    closed_form_integrals,
    d_dk,
    kdv_phi_combination,
    mkdv_dnsn_m3,
    phi_closed_form,
    phi_components,
    verify,
    verify_sweep,
    wave_integrals,
)
from periwave.utils import AdmissibilityError, UnsupportedCaseError

TWO_PI = 2.0 * math.pi


def test_d_dk_polynomial_and_boundary() -> None:
    assert d_dk(lambda k: k**3, 0.5).value == pytest.approx(0.75, rel=1e-10)

    def bounded(k: float) -> float:
        if not 0.0 < k < 1.0:
            raise AdmissibilityError("outside")
        return math.sin(k)

    # the default stencil leaves (0, 1), smaller steps are tried
    assert d_dk(bounded, 0.99995, h=1e-4).value == pytest.approx(math.cos(0.99995), rel=1e-7)


@pytest.mark.parametrize(
    ("family", "k", "L"),
    (
        (Family(tag="kdv_cnoidal"), 0.8, TWO_PI),
        (Family(tag="kdv_cnoidal"), 0.95, 20.0),
        (Family(tag="mkdv_dnoidal"), 0.3, TWO_PI),
        (Family(tag="mkdv_dnoidal"), 0.9, 10.0),
        (Family(tag="mkdv_dnsn"), 0.2, 30.0),
        (Family(tag="mkdv_dnsn"), 0.7, 30.0),
    ),
    ids=str,
)
def test_closed_form_integrals_match_quadrature(family: Family, k: float, L: float) -> None:
    closed = closed_form_integrals(family, k, L)
    sampled = wave_integrals(family, k, L, 256)
    assert closed.Q == pytest.approx(sampled.Q, rel=1e-7)
    assert closed.V == pytest.approx(sampled.V, rel=1e-7)


def test_closed_form_integrals_unsupported() -> None:
    with pytest.raises(UnsupportedCaseError):
        closed_form_integrals(Family(tag="mbbm_dnsn"), 0.5, 10.0)


@pytest.mark.parametrize("k", (0.75, 0.85, 0.95))
def test_kdv_phi_negative(k: float) -> None:
    family = Family(tag="kdv_cnoidal")
    assert phi_closed_form(family, k, TWO_PI).Phi < 0
    assert kdv_phi_combination(k, TWO_PI) > 0


@pytest.mark.parametrize("k", (0.2, 0.5, 0.8))
def test_mkdv_dnsn_m3_is_period_independent(k: float) -> None:
    assert mkdv_dnsn_m3(k, 30.0) == pytest.approx(mkdv_dnsn_m3(k, 50.0), rel=1e-6)
    assert mkdv_dnsn_m3(k, 30.0) > 0


def test_sampled_phi_agrees_with_closed_form() -> None:
    family = Family(tag="mkdv_dnoidal")
    sampled = phi_components(family, 0.5, TWO_PI)
    closed = phi_closed_form(family, 0.5, TWO_PI)
    assert sampled.Phi == pytest.approx(closed.Phi, rel=1e-6)
    assert sampled.dV_dk == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize(
    ("family", "k", "L"),
    (
        (Family(tag="mkdv_dnoidal"), 0.5, TWO_PI),
        (Family(tag="mkdv_dnsn"), 0.5, 30.0),
        (Family(tag="kdv_cnoidal"), 0.9, TWO_PI),
        (Family(tag="mbbm_dnsn"), 0.5, 10.0),
        (Family(tag="gardner_dn", a=1.0, b=3.0), 0.5, TWO_PI),
    ),
    ids=str,
)
def test_verify_all_hold(family: Family, k: float, L: float) -> None:
    report = verify(family, k, L)
    assert report.all_hold, report.errors
    assert report.errors == []
    assert report.n_negative == 1
    assert report.theta is not None and report.theta < 0
    assert report.Phi is not None and report.Phi < 0


def test_verify_flags_use_p_for_regularized() -> None:
    report = verify(Family(tag="mbbm_dnsn"), 0.5, 10.0)
    assert list(report.flags) == ["P0", "P1", "P2", "P3", "P4"]
    assert list(verify(Family(tag="mkdv_dnoidal"), 0.5, TWO_PI).flags)[0] == "H0"


def test_verify_ilw_uses_pf2() -> None:
    report = verify(Family(tag="ilw", delta=4.8), 0.3, TWO_PI)
    assert report.theta is None
    assert report.pf2 is True
    assert report.H0 and report.H1 and report.H2


def test_verify_inadmissible_point() -> None:
    report = verify(Family(tag="kdv_cnoidal"), 0.5, 10.0)
    assert not report.H0 and not report.all_hold
    assert report.errors and report.errors[0].startswith("H0:")


def test_verify_sweep_sorted(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("PERIWAVE_THREADS", "2")
    reports = verify_sweep(Family(tag="mkdv_dnoidal"), [0.7, 0.3, 0.5], TWO_PI, Numerics(N=128))
    assert [report.k for report in reports] == [0.3, 0.5, 0.7]
    assert all(report.all_hold for report in reports)
    assert verify_sweep(Family(tag="mkdv_dnoidal"), [], TWO_PI) == []


@pytest.mark.slow
@pytest.mark.parametrize(
    ("family", "ks", "L"),
    (
        (Family(tag="mkdv_dnoidal"), np.linspace(0.1, 0.9, 9), TWO_PI),
        (Family(tag="mkdv_dnsn"), np.linspace(0.1, 0.9, 5), 30.0),
        (Family(tag="kdv_cnoidal"), np.linspace(0.75, 0.95, 5), TWO_PI),
        (Family(tag="reg_schamel"), np.linspace(0.1, 0.5, 5), 50.0),
        (Family(tag="mbbm_dnsn"), np.linspace(0.1, 0.9, 9), 30.0),
        (Family(tag="gardner_dnsn", a=1.0, b=3.0), np.linspace(0.4, 0.6, 3), 10.0),
        (Family(tag="gardner_dn", a=1.0, b=3.0), np.linspace(0.4, 0.6, 3), TWO_PI),
    ),
    ids=str,
)
def test_verify_sweeps(family: Family, ks: np.ndarray, L: float) -> None:
    reports = verify_sweep(family, ks.tolist(), L)
    failing = {report.k: report.errors for report in reports if not report.all_hold}
    assert not failing


def test_verify_ilw_grid_with_inadmissible_points() -> None:
    reports = verify_sweep(Family(tag="ilw", delta=4.8), [0.7, 0.3, 0.5], TWO_PI)
    assert [report.k for report in reports] == [0.3, 0.5, 0.7]
    assert reports[0].all_hold, reports[0].errors
    assert reports[0].pf2 is True
    for report in reports[1:]:
        # the strip condition fails: K(k')L/(2K(k)) <= delta
        assert not report.H0 and not report.all_hold
        assert report.errors[0].startswith("H0:")
