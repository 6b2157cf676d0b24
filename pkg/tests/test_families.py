#!/usr/bin/env python3

"""Wave construction, admissibility and the first-integral oracle"""

import math

import numpy as np
import pytest

from periwave import families, fourier
from periwave.families import (
    Family,
    WaveProfile,
    construct,
    find_kL,
    first_integral,
    gardner_forward,
    gardner_inverse,
    gardner_residual,
    gardner_shift,
    ilw_fourier_profile,
    orbit_roots,
    quadrature_period,
    quadrature_profile,
    residual,
    wave_constants,
)
from periwave.functionals import mean, rho
from periwave.utils import (
    AdmissibilityError,
    PeriodTooSmallError,
    UnsupportedCaseError,
)

TWO_PI = 2.0 * math.pi

ADMISSIBLE = (
    (Family(tag="kdv_cnoidal"), 0.9, TWO_PI),
    (Family(tag="mkdv_dnoidal"), 0.5, TWO_PI),
    (Family(tag="mkdv_dnsn"), 0.5, 20.0),
    (Family(tag="gardner_dn", a=1.0, b=3.0), 0.5, TWO_PI),
    (Family(tag="gardner_dnsn", a=1.0, b=3.0), 0.5, 10.0),
    (Family(tag="ilw", delta=4.8), 0.3, TWO_PI),
    (Family(tag="schamel"), 0.5, 10.0),
    (Family(tag="mbbm_dnsn"), 0.5, 10.0),
    (Family(tag="reg_schamel"), 0.5, 20.0),
)


@pytest.mark.parametrize(("family", "k", "L"), ADMISSIBLE, ids=lambda value: str(value))
def test_profile_equation_residual(family: Family, k: float, L: float) -> None:
    profile = construct(family, k, L, 256)
    scale = max(1.0, float(np.max(np.abs(profile.samples))))
    assert residual(profile) < 1e-8 * scale
    assert profile.N == 256
    assert profile.c > (1.0 if family.regularized else 0.0)


def test_kdv_below_threshold_is_rejected() -> None:
    with pytest.raises(AdmissibilityError, match=r"k\* = 0.7071"):
        construct(Family(tag="kdv_cnoidal"), 0.5, 10.0)


@pytest.mark.parametrize("k", (0.0, 1.0, -0.2))
def test_modulus_outside_open_interval(k: float) -> None:
    with pytest.raises(AdmissibilityError):
        construct(Family(tag="mkdv_dnoidal"), k, TWO_PI)


def test_grid_must_be_power_of_two() -> None:
    with pytest.raises(AdmissibilityError):
        construct(Family(tag="mkdv_dnoidal"), 0.5, TWO_PI, 100)
    with pytest.raises(AdmissibilityError):
        construct(Family(tag="mkdv_dnoidal"), 0.5, TWO_PI, 32)


def test_family_parameters() -> None:
    with pytest.raises(UnsupportedCaseError):
        Family(tag="gardner_dn", a=1.0, b=-6.0)
    with pytest.raises(UnsupportedCaseError):
        Family(tag="gardner_dnsn", a=1.0)
    with pytest.raises(UnsupportedCaseError):
        Family(tag="ilw")
    assert Family(tag="mbbm_dnsn").regularized
    assert not Family(tag="mkdv_dnsn").regularized
    assert Family(tag="reg_schamel").nonlinearity.kind == "three_halves"
    assert Family(tag="ilw", delta=2.0).symbol.s2 == 1.0
    assert Family(tag="kdv_cnoidal").symbol.s2 == 2.0


@pytest.mark.parametrize(
    ("tag", "L"), (("mbbm_dnsn", 10.0), ("mbbm_dnsn", 20.0), ("reg_schamel", 20.0))
)
def test_find_kL(tag: str, L: float) -> None:
    family = Family.model_validate({"tag": tag})
    k_L = find_kL(family, L)
    assert 0.0 < k_L < 1.0
    construct(family, 0.99 * k_L, L)
    with pytest.raises(AdmissibilityError):
        construct(family, min(k_L + 1e-3, 0.999999), L)


def test_find_kL_grows_with_period() -> None:
    family = Family(tag="mbbm_dnsn")
    assert find_kL(family, 10.0) < find_kL(family, 20.0) < find_kL(family, 50.0)


def test_period_too_small() -> None:
    with pytest.raises(PeriodTooSmallError):
        find_kL(Family(tag="mbbm_dnsn"), 6.0)
    with pytest.raises(PeriodTooSmallError):
        construct(Family(tag="reg_schamel"), 0.3, 12.0)
    with pytest.raises(UnsupportedCaseError):
        find_kL(Family(tag="mkdv_dnsn"), 30.0)


def test_speeds_increase_along_mkdv_dnoidal() -> None:
    family = Family(tag="mkdv_dnoidal")
    speeds = [wave_constants(family, k, TWO_PI)[0] for k in (0.1, 0.3, 0.5, 0.7, 0.9)]
    assert speeds == sorted(speeds)


@pytest.mark.parametrize(
    ("family", "k", "L"),
    (
        (Family(tag="kdv_cnoidal"), 0.9, TWO_PI),
        (Family(tag="mkdv_dnoidal"), 0.5, TWO_PI),
        (Family(tag="mkdv_dnsn"), 0.5, 20.0),
        (Family(tag="mbbm_dnsn"), 0.5, 10.0),
        (Family(tag="schamel"), 0.5, 10.0),
    ),
    ids=lambda value: str(value),
)
def test_quadrature_oracle(family: Family, k: float, L: float) -> None:
    profile = construct(family, k, L, 256)
    spec = first_integral(profile)
    root_lo, root_hi = orbit_roots(spec, profile)
    assert quadrature_period(spec, root_lo, root_hi) == pytest.approx(L, rel=1e-9)
    rebuilt = quadrature_profile(spec, root_lo, root_hi, profile.N)
    scale = float(np.max(np.abs(profile.samples)))
    assert float(np.max(np.abs(rebuilt - profile.samples))) < 1e-6 * scale


def test_mkdv_dnsn_roots() -> None:
    profile = construct(Family(tag="mkdv_dnsn"), 0.5, 20.0)
    assert profile.aux["alpha2"] == 0.0
    assert profile.aux["alpha1"] < 0.0 < profile.aux["alpha3"] < profile.aux["alpha4"]
    assert float(np.max(profile.samples)) == pytest.approx(profile.aux["alpha4"], rel=1e-12)
    assert float(np.min(profile.samples)) == pytest.approx(profile.aux["alpha3"], rel=1e-6)
    assert abs(first_integral(profile).B) < 1e-12


def test_gardner_profile_and_transform() -> None:
    a, b = 1.0, 3.0
    gardner = construct(Family(tag="gardner_dn", a=a, b=b), 0.5, TWO_PI)
    mkdv = construct(Family(tag="mkdv_dnoidal"), 0.5, TWO_PI)
    assert gardner_residual(gardner) < 1e-8
    np.testing.assert_allclose(gardner_forward(gardner.samples, a, b), mkdv.samples, atol=1e-13)
    np.testing.assert_allclose(
        gardner_inverse(gardner_forward(gardner.samples, a, b), a, b), gardner.samples, atol=1e-13
    )
    assert gardner.c == pytest.approx(mkdv.c - a**2 / (4 * b), rel=1e-14)
    assert gardner_shift(2.0, a, b) == pytest.approx(1.0 / 6.0)
    with pytest.raises(UnsupportedCaseError):
        gardner_residual(mkdv)


def test_gardner_transform_scales_rho() -> None:
    a, b = 1.0, 3.0
    L = TWO_PI
    x = fourier.grid(256, L)
    u = construct(Family(tag="gardner_dn", a=a, b=b), 0.5, L).samples
    v = u + 0.01 * np.cos(2 * x) + 0.02 * np.sin(3 * x)
    plain = rho(u, v, L, 1.0)
    mapped = rho(gardner_forward(u, a, b), gardner_forward(v, a, b), L, 1.0)
    assert mapped == pytest.approx(math.sqrt(b / 6.0) * plain, rel=1e-9)


def test_ilw_closed_form_matches_fourier_series() -> None:
    profile = construct(Family(tag="ilw", delta=4.8), 0.3, TWO_PI)
    series = ilw_fourier_profile(0.3, TWO_PI, 4.8, profile.x)
    scale = float(np.max(np.abs(series)))
    assert float(np.max(np.abs(profile.samples - series))) < 1e-9 * scale
    assert abs(mean(profile.samples, TWO_PI)) < 1e-9 * scale
    assert profile.A == pytest.approx(float(np.sum(np.abs(profile.fourier) ** 2)), rel=1e-9)


def test_ilw_strip_condition() -> None:
    with pytest.raises(AdmissibilityError, match="strip width"):
        construct(Family(tag="ilw", delta=50.0), 0.3, TWO_PI)


def test_schamel_profile_must_stay_positive(monkeypatch: pytest.MonkeyPatch) -> None:
    data = families.wave_data(Family(tag="schamel"), 0.5, 10.0)
    lowered = data._replace(shape=lambda x: data.shape(x) - 2.0 * float(np.max(data.shape(x))))
    monkeypatch.setattr(families, "wave_data", lambda *_: lowered)
    with pytest.raises(AdmissibilityError, match="negative samples"):
        construct(Family(tag="schamel"), 0.5, 10.0)


def test_profile_document(kdv_profile: WaveProfile) -> None:
    restored = WaveProfile.from_json(kdv_profile.to_json())
    assert restored.family == kdv_profile.family
    assert (restored.k, restored.L, restored.c, restored.A) == (
        kdv_profile.k,
        kdv_profile.L,
        kdv_profile.c,
        kdv_profile.A,
    )
    np.testing.assert_array_equal(restored.samples, kdv_profile.samples)
    with pytest.raises(ValueError):
        kdv_profile.samples[0] = 1.0
