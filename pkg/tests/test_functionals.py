#!/usr/bin/env python3

"""Conserved quantities, F_k' and the translation-quotient distance ρ"""

import math

import numpy as np
import pytest

from periwave import fourier
from periwave.elliptic import complementary, complete_E, complete_K
from periwave.families import Nonlinearity, SymbolSpec, WaveProfile
from periwave.functionals import (
    best_shift,
    charge,
    charge_reg,
    energy,
    fk_gradient_residual,
    mean,
    mk_value,
    quadratic_form,
    rho,
    sobolev_norm,
)
from periwave.utils import UnsupportedCaseError

TWO_PI = 2.0 * math.pi
SECOND_DERIVATIVE = SymbolSpec(kind="neg_second_derivative")


def test_mkdv_dnoidal_charge_and_mass(mkdv_profile: WaveProfile) -> None:
    K, E = complete_K(0.5), complete_E(0.5)
    assert charge(mkdv_profile.samples, TWO_PI, SECOND_DERIVATIVE, False) == pytest.approx(
        2.0 * K * E / TWO_PI, rel=1e-12
    )
    assert mean(mkdv_profile.samples, TWO_PI) == pytest.approx(math.pi, rel=1e-12)


def test_kdv_cnoidal_mass(kdv_profile: WaveProfile) -> None:
    k = 0.9
    K, E = complete_K(k), complete_E(k)
    expected = 48.0 * K * (E - complementary(k) ** 2 * K) / TWO_PI
    assert mean(kdv_profile.samples, TWO_PI) == pytest.approx(expected, rel=1e-10)


def test_quadratic_form_and_norm_of_a_cosine() -> None:
    L = 3.0
    u = np.cos(2 * math.pi * fourier.grid(64, L) / L)
    # ∫ u'² = (2π/L)²·L/2
    assert quadratic_form(u, L, SECOND_DERIVATIVE) == pytest.approx(
        (2 * math.pi / L) ** 2 * L / 2, rel=1e-13
    )
    assert sobolev_norm(u, L, 1.0) == pytest.approx(math.sqrt(L), rel=1e-13)
    assert charge_reg(u, L, SECOND_DERIVATIVE) == pytest.approx(
        0.5 * (L / 2 + (2 * math.pi / L) ** 2 * L / 2), rel=1e-13
    )


def test_energy_of_a_constant() -> None:
    cubic = Nonlinearity(kind="polynomial", coefficients=(0.0, 0.0, 0.0, 2.0))
    u = np.full(64, 0.5)
    # F(u) = u⁴/2
    assert energy(u, 2.0, SECOND_DERIVATIVE, cubic) == pytest.approx(-2.0 * 0.5**4 / 2, rel=1e-14)


def test_critical_point(mkdv_profile: WaveProfile, mbbm_profile: WaveProfile) -> None:
    assert fk_gradient_residual(mkdv_profile) < 1e-9
    assert fk_gradient_residual(mbbm_profile) < 1e-8 * max(1.0, float(np.max(mbbm_profile.samples)))


def test_mk_value_needs_symbol_for_regularized(mkdv_profile: WaveProfile) -> None:
    samples = mkdv_profile.samples
    expected = 2.0 * charge(samples, TWO_PI, SECOND_DERIVATIVE, False) - mean(samples, TWO_PI)
    assert mk_value(samples, TWO_PI, 2.0, -1.0) == pytest.approx(expected, rel=1e-14)
    with pytest.raises(UnsupportedCaseError, match="dispersion symbol"):
        mk_value(samples, TWO_PI, 2.0, -1.0, regularized=True)


@pytest.mark.parametrize("r0", (0.0, 0.3, 1.7, -2.9))
def test_rho_vanishes_on_the_orbit(mkdv_profile: WaveProfile, r0: float) -> None:
    u = mkdv_profile.samples
    shifted = fourier.shift(u, TWO_PI, r0)
    distance, shift = best_shift(shifted, u, TWO_PI, 1.0)
    assert distance < 1e-9
    assert math.remainder(shift - r0, TWO_PI) == pytest.approx(0.0, abs=1e-7)


def test_rho_is_bounded_by_the_plain_distance(mkdv_profile: WaveProfile) -> None:
    u = mkdv_profile.samples
    x = mkdv_profile.x
    v = u + 1e-3 * np.cos(3 * x)
    distance = rho(fourier.shift(v, TWO_PI, 0.8), u, TWO_PI, 1.0)
    assert 0.0 < distance <= sobolev_norm(v - u, TWO_PI, 1.0) * (1 + 1e-9)
    assert rho(u, u, TWO_PI, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_rho_rejects_mismatched_grids() -> None:
    with pytest.raises(ValueError):
        rho(np.zeros(64), np.zeros(128), 1.0, 1.0)
