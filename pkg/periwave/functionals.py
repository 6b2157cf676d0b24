#!/usr/bin/env python3

"""Conserved quantities, the augmented functional F_k and the translation-quotient
pseudo-metric ρ

    E(u)     = ½∫(u·Mu − 2F(u))         energy
    Q(u)     = ½∫u²                     charge (gKdV form)
    Q_reg(u) = ½∫(u² + u·Mu)            charge (regularized form)
    V(u)     = ∫u                       mass
    ρ(u, v)  = inf_r ‖u − v(· + r)‖_{H^s}

Quadratic forms are evaluated by Parseval, everything else by the periodic trapezoid
rule. The Sobolev weight is (1 + m²)^s on the integer mode index m.

Copyright (C) 2024 Checkmk GmbH - License: GNU General Public License v2
This file is part of Checkmk (https://checkmk.com). It is subject to the terms and
conditions defined in the file COPYING, which is part of this source code package.
"""

# pylint: disable=invalid-name

import logging
import math

import numpy as np
import numpy.typing as npt
from scipy import optimize

from periwave import fourier
from periwave.families import Nonlinearity, SymbolSpec, WaveProfile
from periwave.utils import UnsupportedCaseError

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]


def log() -> logging.Logger:
    """Logger for this module"""
    return logging.getLogger("trickkiste.periwave.functionals")


def quadratic_form(u: FloatArray, L: float, symbol: SymbolSpec) -> float:
    """∫ u·Mu = L·Σ α(m)|û_m|²"""
    u_hat = fourier.coefficients(u)
    return float(L * np.sum(symbol.multiplier(fourier.modes(len(u)), L) * np.abs(u_hat) ** 2))


def energy(u: FloatArray, L: float, symbol: SymbolSpec, nonlinearity: Nonlinearity) -> float:
    """E(u) = ½∫(uMu − 2F(u))"""
    return 0.5 * quadratic_form(u, L, symbol) - fourier.trapezoid(nonlinearity.primitive(u), L)


def charge_plain(u: FloatArray, L: float) -> float:
    """Q(u) = ½∫u²"""
    return 0.5 * fourier.trapezoid(np.asarray(u) ** 2, L)


def charge_reg(u: FloatArray, L: float, symbol: SymbolSpec) -> float:
    """Q(u) = ½∫(u² + uMu)"""
    return charge_plain(u, L) + 0.5 * quadratic_form(u, L, symbol)


def charge(u: FloatArray, L: float, symbol: SymbolSpec, regularized: bool) -> float:
    """The charge variant belonging to the equation form"""
    return charge_reg(u, L, symbol) if regularized else charge_plain(u, L)


def mean(u: FloatArray, L: float) -> float:
    """V(u) = ∫u"""
    return fourier.trapezoid(u, L)


def energy_gradient(
    u: FloatArray, L: float, symbol: SymbolSpec, nonlinearity: Nonlinearity
) -> FloatArray:
    """E'(u) = Mu − f(u)"""
    return symbol.apply(u, L) - nonlinearity.f(u)


def charge_gradient(u: FloatArray, L: float, symbol: SymbolSpec, regularized: bool) -> FloatArray:
    """Q'(u) = u resp. u + Mu"""
    return u + symbol.apply(u, L) if regularized else np.asarray(u, dtype=np.float64)


def fk_gradient(profile: WaveProfile, symbol: None | SymbolSpec = None) -> FloatArray:
    """F_k'(φ) = E'(φ) + c·Q'(φ) + A·V'(φ), with (c − 1)·Q_reg' for regularized families"""
    family = profile.family
    operator = symbol or family.symbol
    phi, L = profile.samples, profile.L
    weight = profile.c - 1.0 if family.regularized else profile.c
    return (
        energy_gradient(phi, L, operator, family.nonlinearity)
        + weight * charge_gradient(phi, L, operator, family.regularized)
        + profile.A * np.ones_like(phi)
    )


def fk_gradient_residual(profile: WaveProfile, symbol: None | SymbolSpec = None) -> float:
    """Sup-norm of F_k'(φ), zero at critical points"""
    return float(np.max(np.abs(fk_gradient(profile, symbol))))


def mk_value(
    u: FloatArray,
    L: float,
    dc_dk: float,
    dA_dk: float,
    regularized: bool = False,
    symbol: None | SymbolSpec = None,
) -> float:
    """M_k(u) = ∂c/∂k·Q(u) + ∂A/∂k·V(u)"""
    if regularized:
        if symbol is None:
            raise UnsupportedCaseError("regularized M_k needs the dispersion symbol")
        quantity = charge_reg(u, L, symbol)
    else:
        quantity = charge_plain(u, L)
    return dc_dk * quantity + dA_dk * mean(u, L)


def sobolev_norm(u: FloatArray, L: float, s: float) -> float:
    """‖u‖_{H^s} with ‖u‖² = L·Σ(1 + m²)^s|û_m|²"""
    u_hat = fourier.coefficients(u)
    return math.sqrt(L * float(np.sum(fourier.sobolev_weight(len(u), s) * np.abs(u_hat) ** 2)))


class _Correlation:
    """C(r) = Re⟨u, v(· + r)⟩_{H^s} as a trigonometric polynomial in r, the Nyquist mode
    (if any) taken as a cosine like fourier.shift() does"""

    def __init__(self, u: FloatArray, v: FloatArray, L: float, s: float) -> None:
        N = len(u)
        self.L = L
        self.u_hat, self.v_hat = fourier.coefficients(u), fourier.coefficients(v)
        self.weight = fourier.sobolev_weight(N, s)
        self.xi = fourier.wavenumbers(N, L)
        self.terms: ComplexArray = L * self.weight * self.u_hat * np.conj(self.v_hat)
        self.main = self.terms.copy()
        self.nyquist, self.xi_n = 0.0, 0.0
        self.nyquist_index: None | int = None
        if N % 2 == 0:
            self.nyquist_index = N // 2
            self.nyquist = float(self.terms[N // 2].real)
            self.xi_n = math.pi * N / L
            self.main[N // 2] = 0.0

    def on_grid(self) -> FloatArray:
        """C at the shifts r_j = j·L/N"""
        return np.asarray(np.fft.fft(self.terms).real, dtype=np.float64)

    def value(self, r: float) -> float:
        """C(r)"""
        phase = np.exp(-1j * self.xi * r)
        return float(np.sum(self.main * phase).real) + self.nyquist * math.cos(self.xi_n * r)

    def slopes(self, r: float) -> tuple[float, float]:
        """(C'(r), C''(r))"""
        phase = np.exp(-1j * self.xi * r)
        first = float(np.sum(-1j * self.xi * self.main * phase).real)
        second = float(np.sum(-(self.xi**2) * self.main * phase).real)
        first -= self.nyquist * self.xi_n * math.sin(self.xi_n * r)
        second -= self.nyquist * self.xi_n**2 * math.cos(self.xi_n * r)
        return first, second

    def distance(self, r: float) -> float:
        """‖u − v(· + r)‖_{H^s} evaluated directly from the phase-rotated difference"""
        rotation = np.exp(1j * self.xi * r)
        if self.nyquist_index is not None:
            rotation[self.nyquist_index] = math.cos(self.xi_n * r)
        difference = self.u_hat - self.v_hat * rotation
        return math.sqrt(self.L * float(np.sum(self.weight * np.abs(difference) ** 2)))


def best_shift(u: FloatArray, v: FloatArray, L: float, s: float) -> tuple[float, float]:
    """Returns (ρ(u, v), r) with r minimizing ‖u − v(· + r)‖_{H^s}"""
    u_arr, v_arr = np.asarray(u, dtype=np.float64), np.asarray(v, dtype=np.float64)
    if u_arr.shape != v_arr.shape or u_arr.ndim != 1:
        raise ValueError(f"rho needs samples on the same grid, got {u_arr.shape} and {v_arr.shape}")
    correlation = _Correlation(u_arr, v_arr, L, s)
    N, spacing = len(u_arr), L / len(u_arr)
    coarse = correlation.on_grid()
    index = int(np.argmax(coarse))
    shift = index * spacing
    try:
        result = optimize.minimize_scalar(
            lambda r: -correlation.value(r),
            bracket=(shift - spacing, shift, shift + spacing),
            method="golden",
            tol=1e-10,
        )
        shift = float(result.x)
    except (ValueError, RuntimeError):
        log().debug("no strict bracket around grid shift %d/%d, keeping it", index, N)
    for _ in range(3):
        first, second = correlation.slopes(shift)
        if second >= 0 or first == 0:
            break
        step = first / second
        if abs(step) > spacing:
            break
        shift -= step
    candidates = [(correlation.distance(shift), shift), (correlation.distance(0.0), 0.0)]
    distance, shift = min(candidates)
    return distance, math.remainder(shift, L)


def rho(u: FloatArray, v: FloatArray, L: float, s: float) -> float:
    """ρ(u, v) = inf_r ‖u − v(· + r)‖_{H^s}"""
    return best_shift(u, v, L, s)[0]
