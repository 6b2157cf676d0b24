#!/usr/bin/env python3

"""Galerkin spectrum, Lamé cross-check, θ and the PF(2) test"""

import math

import numpy as np
import pytest

from periwave.families import Family, WaveProfile, construct
from periwave.spectral import (
    assemble,
    eigs,
    ilw_pf2_sequence,
    kernel_residual,
    lame_closed_form,
    neves_theta,
    pf2_check,
)
from periwave.utils import (
    AdmissibilityError,
    DegeneratePhaseError,
    ResolutionError,
    UnsupportedCaseError,
)

TWO_PI = 2.0 * math.pi


@pytest.mark.parametrize("k", np.linspace(0.1, 0.95, 10).tolist())
def test_mkdv_dnoidal_matches_lame(k: float) -> None:
    family = Family(tag="mkdv_dnoidal")
    profile = construct(family, k, TWO_PI, 256)
    closed = lame_closed_form(family, k, TWO_PI)
    report = eigs(assemble(profile), 3)
    a2 = profile.aux["a"] ** 2
    np.testing.assert_allclose(
        np.asarray(report.eigenvalues) / a2, np.asarray(closed.lambdas) / a2, atol=1e-6
    )
    assert closed.lambdas[1] == pytest.approx(0.0, abs=1e-8)
    assert report.eigenvalues[1] == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("k", np.linspace(0.72, 0.98, 10).tolist())
def test_kdv_cnoidal_matches_lame(k: float) -> None:
    family = Family(tag="kdv_cnoidal")
    profile = construct(family, k, TWO_PI, 256)
    closed = lame_closed_form(family, k, TWO_PI)
    report = eigs(assemble(profile), 3)
    b2 = profile.aux["b"] ** 2
    np.testing.assert_allclose(
        np.asarray(report.eigenvalues) / b2, np.asarray(closed.lambdas) / b2, atol=1e-6
    )
    assert closed.lambdas[1] == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize(
    ("family", "L"),
    (
        (Family(tag="gardner_dn", a=1.0, b=3.0), TWO_PI),
        (Family(tag="schamel"), 10.0),
        (Family(tag="reg_schamel"), 20.0),
    ),
    ids=str,
)
def test_other_lame_reductions(family: Family, L: float) -> None:
    profile = construct(family, 0.5, L, 256)
    closed = lame_closed_form(family, 0.5, L)
    report = eigs(assemble(profile), 3)
    scale = max(1.0, abs(closed.lambdas[0]))
    np.testing.assert_allclose(report.eigenvalues, closed.lambdas, atol=1e-7 * scale)


def test_lame_closed_form_unsupported() -> None:
    with pytest.raises(UnsupportedCaseError):
        lame_closed_form(Family(tag="mkdv_dnsn"), 0.5, 20.0)


def test_inertia_of_mkdv_dnoidal(mkdv_profile: WaveProfile) -> None:
    op = assemble(mkdv_profile)
    report = eigs(op)
    assert report.n_negative == 1
    assert report.h1_holds and report.h2_holds
    assert len(report.zero_candidates) == 1
    assert report.kernel_alignment > 0.999999
    assert kernel_residual(op) < 1e-9
    assert op.size == 257


def test_inertia_of_mbbm(mbbm_profile: WaveProfile) -> None:
    report = eigs(assemble(mbbm_profile))
    assert report.h1_holds and report.h2_holds


def test_truncation_limits(mkdv_profile: WaveProfile) -> None:
    with pytest.raises(ResolutionError):
        assemble(mkdv_profile, N_t=129)
    with pytest.raises(ResolutionError):
        assemble(mkdv_profile, N_t=0)
    assert assemble(mkdv_profile, N_t=32).matrix.shape == (65, 65)


def test_theta_negative_for_local_families(mkdv_profile: WaveProfile, kdv_profile: WaveProfile) -> None:
    assert neves_theta(mkdv_profile) < 0
    assert neves_theta(kdv_profile) < 0


def test_theta_reproduces_mkdv_dnsn_reference() -> None:
    profile = construct(Family(tag="mkdv_dnsn"), 0.5, 30.0, 256)
    assert neves_theta(profile) == pytest.approx(-1.382078401e5, rel=1e-3)


def test_theta_reproduces_mbbm_reference() -> None:
    profile = construct(Family(tag="mbbm_dnsn"), 0.4, 20.0, 256)
    assert neves_theta(profile) == pytest.approx(-7976.14, rel=1e-2)


def test_theta_needs_local_dispersion_and_extremum(mkdv_profile: WaveProfile) -> None:
    with pytest.raises(UnsupportedCaseError):
        neves_theta(construct(Family(tag="ilw", delta=4.8), 0.3, TWO_PI))
    x = mkdv_profile.x
    odd = mkdv_profile.with_samples(np.sin(x))
    with pytest.raises(DegeneratePhaseError):
        neves_theta(odd)


def test_pf2_geometric_sequence() -> None:
    n = np.arange(-6, 7)
    assert pf2_check(0.5 ** np.abs(n)).holds
    assert pf2_check(np.exp(-(n**2) / 4.0)).holds


def test_pf2_violations() -> None:
    result = pf2_check(np.array([0.25, 0.5, -1.0, 0.5, 0.25]))
    assert not result.holds and result.violation == (0, 0, 0, 0)
    # not log-concave: 1, 0.1, 1 around the center
    bumpy = np.array([0.2, 1.0, 0.1, 1.0, 0.2])
    assert not pf2_check(bumpy).holds
    with pytest.raises(AdmissibilityError, match="odd length"):
        pf2_check(np.ones(4))
    with pytest.raises(AdmissibilityError):
        pf2_check(np.ones((3, 3)))


def test_ilw_sequence_is_pf2() -> None:
    sequence = ilw_pf2_sequence(0.3, TWO_PI, 4.8, 16)
    assert len(sequence) == 33
    assert sequence[16] == pytest.approx(sequence.max())
    np.testing.assert_allclose(sequence, sequence[::-1], rtol=1e-15)
    assert pf2_check(sequence).holds


@pytest.mark.parametrize(
    ("family", "k", "L"),
    (
        (Family(tag="kdv_cnoidal"), 0.9, TWO_PI),
        (Family(tag="mkdv_dnsn"), 0.5, 20.0),
        (Family(tag="gardner_dn", a=1.0, b=3.0), 0.5, TWO_PI),
        (Family(tag="gardner_dnsn", a=1.0, b=3.0), 0.5, 10.0),
        (Family(tag="ilw", delta=4.8), 0.3, TWO_PI),
        (Family(tag="schamel"), 0.5, 10.0),
        (Family(tag="mbbm_dnsn"), 0.5, 10.0),
        (Family(tag="reg_schamel"), 0.5, 20.0),
    ),
    ids=str,
)
def test_derivative_spans_the_kernel(family: Family, k: float, L: float) -> None:
    op = assemble(construct(family, k, L, 256))
    report = eigs(op, 3)
    scale = max(1.0, abs(report.eigenvalues[0]))
    assert kernel_residual(op) < 1e-8 * scale
    assert report.h2_holds
    assert report.kernel_alignment > 0.99999


def test_eigenvalues_converge_with_truncation(mbbm_profile: WaveProfile) -> None:
    reference = np.asarray(eigs(assemble(mbbm_profile, N_t=64), 3).eigenvalues)
    errors = []
    for N_t in (4, 8, 32):
        values = np.asarray(eigs(assemble(mbbm_profile, N_t=N_t), 3).eigenvalues)
        errors.append(float(np.max(np.abs(values - reference))))
    scale = max(1.0, abs(float(reference[0])))
    assert errors[1] <= errors[0] + 1e-12 * scale
    assert errors[2] < 1e-9 * scale
