#!/usr/bin/env python3

"""Numerical check of the stability hypotheses for one member of a wave family

    H0  the closed form solves the profile equation, c in its admissible range
    H1  L_k has exactly one negative eigenvalue
    H2  zero is a simple eigenvalue (kernel spanned by φ')
    H3  Φ = −∂c/∂k·∂Q/∂k − ∂A/∂k·∂V/∂k < 0
    H4  Ψ = M_k(φ) + ∂c/∂k·Q(φ) ≠ 0, i.e. M_k(φ) ≠ −∂c/∂k·Q(φ)

For regularized families the same checks read P0..P4 with Q the regularized charge.
k-derivatives are central differences with one Richardson extrapolation step.

Copyright (C) 2024 Checkmk GmbH - License: GNU General Public License v2
This file is part of Checkmk (https://checkmk.com). It is subject to the terms and
conditions defined in the file COPYING, which is part of this source code package.
"""

# pylint: disable=invalid-name

import logging
import math
from collections.abc import Callable, Iterable, Sequence
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel

from periwave.config import Numerics
from periwave.elliptic import complete_E, complete_K, complementary, heuman_lambda
from periwave.families import Family, construct, dnsn_quantities, residual, wave_constants
from periwave.functionals import charge, mean, mk_value
from periwave.spectral import assemble, eigs, ilw_pf2_sequence, neves_theta, pf2_check
from periwave.utils import AdmissibilityError, Fatal, UnsupportedCaseError, parallel_map

MAX_STEP_REDUCTIONS = 12
H4_SAFETY = 10.0


def log() -> logging.Logger:
    """Logger for this module"""
    return logging.getLogger("trickkiste.periwave.hypotheses")


class Derivative(NamedTuple):
    """Richardson-extrapolated derivative and the size of the last correction"""

    value: float
    error: float


def d_dk(fn: Callable[[float], float], k: float, h: float = 1e-4) -> Derivative:
    """d@fn/dk at @k from central differences with steps h and h/2,
    R = (4·D(h/2) − D(h))/3. Whenever the stencil leaves the domain of @fn (an
    AdmissibilityError) the step is halved.
    >>> round(d_dk(lambda k: k**2, 0.5).value, 10)
    1.0
    """
    step = h
    for _ in range(MAX_STEP_REDUCTIONS):
        try:
            coarse = (fn(k + step) - fn(k - step)) / (2.0 * step)
            fine = (fn(k + step / 2.0) - fn(k - step / 2.0)) / step
        except AdmissibilityError as exc:
            log().debug("d/dk at k=%.17g: step %g left the domain (%s)", k, step, exc)
            step /= 2.0
            continue
        value = (4.0 * fine - coarse) / 3.0
        return Derivative(value, abs(value - fine))
    raise AdmissibilityError(
        f"no central difference stencil around k={k!r} fits the domain (last step {step:g})"
    )


class WaveIntegrals(NamedTuple):
    """Q(φ) (regularized where applicable) and V(φ)"""

    Q: float
    V: float


def wave_integrals(family: Family, k: float, L: float, N: int = 256) -> WaveIntegrals:
    """Q and V of the constructed profile, by spectral quadrature"""
    profile = construct(family, k, L, N)
    return WaveIntegrals(
        charge(profile.samples, L, family.symbol, family.regularized), mean(profile.samples, L)
    )


class PhiComponents(NamedTuple):
    """Φ together with the four derivatives it is made of"""

    Phi: float
    dc_dk: float
    dA_dk: float
    dQ_dk: float
    dV_dk: float
    error: float
    dc_error: float
    dA_error: float


def _combine(dc: Derivative, dA: Derivative, dQ: Derivative, dV: Derivative) -> PhiComponents:
    phi = -dc.value * dQ.value - dA.value * dV.value
    error = (
        abs(dQ.value) * dc.error
        + abs(dc.value) * dQ.error
        + abs(dV.value) * dA.error
        + abs(dA.value) * dV.error
    )
    return PhiComponents(
        phi, dc.value, dA.value, dQ.value, dV.value, error, dc.error, dA.error
    )


def _constant_derivatives(
    family: Family, k: float, L: float, h: float
) -> tuple[Derivative, Derivative]:
    return (
        d_dk(lambda kk: wave_constants(family, kk, L)[0], k, h),
        d_dk(lambda kk: wave_constants(family, kk, L)[1], k, h),
    )


def phi_components(
    family: Family, k: float, L: float, numerics: None | Numerics = None
) -> PhiComponents:
    """Φ with Q and V taken from the sampled profiles"""
    config = numerics or Numerics()
    dc, dA = _constant_derivatives(family, k, L, config.h)
    dQ = d_dk(lambda kk: wave_integrals(family, kk, L, config.N).Q, k, config.h)
    dV = d_dk(lambda kk: wave_integrals(family, kk, L, config.N).V, k, config.h)
    return _combine(dc, dA, dQ, dV)


def phi_value(family: Family, k: float, L: float, numerics: None | Numerics = None) -> float:
    """Φ = −∂c/∂k·∂Q/∂k − ∂A/∂k·∂V/∂k"""
    return phi_components(family, k, L, numerics).Phi


def _dnsn_integrals(k: float, L: float) -> WaveIntegrals:
    """Q and V of the dnoidal-snoidal mKdV wave by elliptic primitives, with
    α² = −β² < 0 and Π(α², k) expressed through Heuman's Lambda"""
    K, E = complete_K(k), complete_E(k)
    quantities = dnsn_quantities(k)
    beta2, g = quantities["beta2"], quantities["g"]
    alpha2, k2 = -beta2, k * k
    root = math.sqrt(alpha2 * (1.0 - alpha2) * (alpha2 - k2))
    w = math.asin(math.sqrt(beta2 / (k2 + beta2)))
    G = 0.5 * math.pi * heuman_lambda(w, k)
    Pi = k2 * K / (k2 - alpha2) - alpha2 * G / root
    I1 = (k2 - alpha2) * G / root
    eta0 = 1.0 / (2.0 * (alpha2 - 1.0) * (k2 - alpha2))
    V2 = eta0 * (
        alpha2 * E
        + (k2 - alpha2) * K
        + (2.0 * alpha2 * k2 + 2.0 * alpha2 - alpha2**2 - 3.0 * k2) * Pi
    )
    I2 = (k2**2 * K + 2.0 * k2 * (alpha2 - k2) * Pi + (alpha2 - k2) ** 2 * V2) / alpha2**2
    return WaveIntegrals(Q=4.0 * K / (g**2 * L) * I2, V=4.0 / (math.sqrt(2.0) * g) * I1)


def closed_form_integrals(family: Family, k: float, L: float) -> WaveIntegrals:
    """Q(φ) = ½∫φ² and V(φ) = ∫φ in closed form"""
    if family.tag == "kdv_cnoidal":
        K, E, k_prime2 = complete_K(k), complete_E(k), complementary(k) ** 2
        square = (
            768.0 * K**3 / L**3 * ((2.0 - 5.0 * k**2 + 3.0 * k**4) * K + (4.0 * k**2 - 2.0) * E)
        )
        return WaveIntegrals(Q=0.5 * square, V=48.0 * K * (E - k_prime2 * K) / L)
    if family.tag == "mkdv_dnoidal":
        K, E = complete_K(k), complete_E(k)
        return WaveIntegrals(Q=2.0 * K * E / L, V=math.pi)
    if family.tag == "mkdv_dnsn":
        return _dnsn_integrals(k, L)
    raise UnsupportedCaseError(f"no closed-form integrals for {family}")


def phi_closed_form(family: Family, k: float, L: float, h: float = 1e-4) -> PhiComponents:
    """Φ with Q and V from closed_form_integrals()"""
    dc, dA = _constant_derivatives(family, k, L, h)
    dQ = d_dk(lambda kk: closed_form_integrals(family, kk, L).Q, k, h)
    dV = d_dk(lambda kk: closed_form_integrals(family, kk, L).V, k, h)
    return _combine(dc, dA, dQ, dV)


def kdv_phi_combination(k: float, L: float, h: float = 1e-4) -> float:
    """−Φ of the cnoidal KdV wave as the explicit two-product sum
        (16·384/L⁵)·d[(2k²−1)K²]·d[(2−5k²+3k⁴)K⁴ + (4k²−2)EK³]
      + (18432/L⁵)·d[k²k'²K⁴]·d[EK − k'²K²]
    (d = d/dk), Φ < 0 iff this is positive"""

    def speed(kk: float) -> float:
        return (2.0 * kk**2 - 1.0) * complete_K(kk) ** 2

    def square(kk: float) -> float:
        K, E = complete_K(kk), complete_E(kk)
        return (2.0 - 5.0 * kk**2 + 3.0 * kk**4) * K**4 + (4.0 * kk**2 - 2.0) * E * K**3

    def constant(kk: float) -> float:
        return kk**2 * complementary(kk) ** 2 * complete_K(kk) ** 4

    def mass(kk: float) -> float:
        K, E = complete_K(kk), complete_E(kk)
        return E * K - complementary(kk) ** 2 * K**2

    first = d_dk(speed, k, h).value * d_dk(square, k, h).value
    second = d_dk(constant, k, h).value * d_dk(mass, k, h).value
    return 16.0 * 384.0 / L**5 * first + 18432.0 / L**5 * second


def mkdv_dnsn_m3(k: float, L: float = 30.0, h: float = 1e-4) -> float:
    """m₃(k) = −L³·Φ for the dnoidal-snoidal mKdV wave, independent of L"""
    return -(L**3) * phi_closed_form(Family(tag="mkdv_dnsn"), k, L, h).Phi


class HypothesisReport(BaseModel):
    """Outcome of verify() for one (family, k, L); stage errors end up in `errors`"""

    family: str
    k: float
    L: float
    regularized: bool = False
    c: None | float = None
    A: None | float = None
    residual: None | float = None
    dc_dk: None | float = None
    dA_dk: None | float = None
    Q: None | float = None
    V: None | float = None
    dQ_dk: None | float = None
    dV_dk: None | float = None
    Phi: None | float = None
    Phi_error: None | float = None
    Mk: None | float = None
    Psi: None | float = None
    theta: None | float = None
    n_negative: None | int = None
    zero_simple: None | bool = None
    kernel_alignment: None | float = None
    pf2: None | bool = None
    H0: bool = False
    H1: bool = False
    H2: bool = False
    H3: bool = False
    H4: bool = False
    errors: list[str] = []

    @property
    def flags(self) -> dict[str, bool]:
        """H0..H4 resp. P0..P4 for regularized families"""
        prefix = "P" if self.regularized else "H"
        values = (self.H0, self.H1, self.H2, self.H3, self.H4)
        return {f"{prefix}{index}": value for index, value in enumerate(values)}

    @property
    def all_hold(self) -> bool:
        """True if every hypothesis has been confirmed"""
        return all(self.flags.values())


def verify(
    family: Family, k: float, L: float, numerics: None | Numerics = None
) -> HypothesisReport:
    """Runs construct/residual, spectrum and θ (or PF(2)), Φ and Ψ for one wave"""
    config = numerics or Numerics()
    report = HypothesisReport(family=str(family), k=k, L=L, regularized=family.regularized)

    try:
        profile = construct(family, k, L, config.N)
    except Fatal as exc:
        log().info("%s k=%g L=%g: not admissible: %s", family, k, L, exc)
        report.errors.append(f"H0: {exc}")
        return report

    report.c, report.A = profile.c, profile.A
    report.residual = profile_residual = residual(profile)
    scale = max(1.0, float(np.max(np.abs(profile.samples))))
    report.H0 = profile_residual <= config.residual_tol * scale
    if not report.H0:
        report.errors.append(f"H0: residual {profile_residual:.3g} above tolerance")

    try:
        spectrum = eigs(assemble(profile, N_t=config.N_t), config.n_eigs, config.tol_zero)
        report.n_negative = spectrum.n_negative
        report.zero_simple = spectrum.h2_holds
        report.kernel_alignment = spectrum.kernel_alignment
        if family.symbol.kind == "neg_second_derivative":
            theta = neves_theta(profile, rtol=config.theta_rtol)
            report.theta = theta
            report.H1 = spectrum.h1_holds
            report.H2 = spectrum.h2_holds and theta < 0
        else:
            assert family.delta is not None
            pf2 = pf2_check(ilw_pf2_sequence(k, L, family.delta, config.pf2_window)).holds
            report.pf2 = pf2
            report.H1 = spectrum.h1_holds and pf2
            report.H2 = spectrum.h2_holds and pf2
    except (Fatal, ValueError) as exc:
        report.errors.append(f"H1/H2: {exc}")

    try:
        phi = phi_components(family, k, L, config)
        integrals = wave_integrals(family, k, L, config.N)
        mk = mk_value(
            profile.samples, L, phi.dc_dk, phi.dA_dk, family.regularized, family.symbol
        )
        psi = mk + phi.dc_dk * integrals.Q
        report.Mk, report.Psi = mk, psi
        # Ψ = 2·c'·Q + A'·V
        psi_error = 2.0 * abs(integrals.Q) * phi.dc_error + abs(integrals.V) * phi.dA_error
        report.dc_dk, report.dA_dk = phi.dc_dk, phi.dA_dk
        report.Q, report.V = integrals.Q, integrals.V
        report.dQ_dk, report.dV_dk = phi.dQ_dk, phi.dV_dk
        report.Phi, report.Phi_error = phi.Phi, phi.error
        report.H3 = phi.Phi < 0
        report.H4 = abs(psi) > H4_SAFETY * psi_error
    except (Fatal, ValueError) as exc:
        report.errors.append(f"H3/H4: {exc}")

    if not report.all_hold:
        log().info("%s k=%g L=%g: %s %s", family, k, L, report.flags, report.errors)
    return report


def verify_sweep(
    family: Family, ks: Iterable[float], L: float, numerics: None | Numerics = None
) -> Sequence[HypothesisReport]:
    """verify() over a k-grid, run concurrently, sorted by k"""
    reports = parallel_map(lambda k: verify(family, k, L, numerics), sorted(ks))
    return sorted(reports, key=lambda report: report.k)
