#!/usr/bin/env python3

"""Pseudospectral helpers on a uniform periodic grid [0, L) with N points

Fourier coefficients are normalized as û_m = (1/N)·Σ u_j e^{−2πi m j/N}, so that
u(x) = Σ_m û_m e^{2πi m x/L} holds exactly for band-limited samples.

Copyright (C) 2024 Checkmk GmbH - License: GNU General Public License v2
This file is part of Checkmk (https://checkmk.com). It is subject to the terms and
conditions defined in the file COPYING, which is part of this source code package.
"""

import math
from collections.abc import Callable

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]


def grid(N: int, L: float) -> FloatArray:
    """Uniform grid on [0, L), endpoint excluded"""
    return np.arange(N, dtype=np.float64) * (L / N)


def modes(N: int) -> FloatArray:
    """Integer Fourier indices in numpy.fft order, e.g. [0, 1, .., N/2-1, -N/2, .., -1]"""
    return np.fft.fftfreq(N, d=1.0 / N)


def wavenumbers(N: int, L: float) -> FloatArray:
    """Physical wavenumbers ξ_m = 2πm/L in numpy.fft order"""
    return 2.0 * math.pi / L * modes(N)


def coefficients(u: FloatArray) -> ComplexArray:
    """Normalized Fourier coefficients of real samples"""
    return np.fft.fft(u) / len(u)


def samples(u_hat: ComplexArray) -> FloatArray:
    """Inverse of coefficients(), imaginary roundoff dropped"""
    return np.asarray(np.fft.ifft(u_hat * len(u_hat)).real, dtype=np.float64)


def apply_multiplier(u: FloatArray, symbol: FloatArray | ComplexArray) -> FloatArray:
    """Applies a Fourier multiplier given per mode (numpy.fft order)"""
    return np.asarray(np.fft.ifft(symbol * np.fft.fft(u)).real, dtype=np.float64)


def derivative(u: FloatArray, L: float, order: int = 1) -> FloatArray:
    """Spectral derivative; the Nyquist mode is dropped for odd orders"""
    N = len(u)
    symbol = (1j * wavenumbers(N, L)) ** order
    if order % 2 == 1 and N % 2 == 0:
        symbol[N // 2] = 0.0
    return apply_multiplier(u, symbol)


def shift(u: FloatArray, L: float, r: float) -> FloatArray:
    """Returns samples of u(· + r) by phase rotation (exact for band-limited u)"""
    N = len(u)
    rotation = np.exp(1j * wavenumbers(N, L) * r)
    if N % 2 == 0:
        # keep the Nyquist mode real
        rotation[N // 2] = math.cos(math.pi * N / L * r)
    return apply_multiplier(u, rotation)


def interpolant(u: FloatArray, L: float) -> Callable[[float], tuple[float, float, float]]:
    """Returns a function x -> (u(x), u'(x), u''(x)) evaluating the trigonometric
    interpolant of @u, with the Nyquist coefficient split symmetrically"""
    N = len(u)
    u_hat = coefficients(u)
    index = modes(N)
    if N % 2 == 0:
        u_hat = np.append(u_hat, u_hat[N // 2] / 2.0)
        u_hat[N // 2] /= 2.0
        index = np.append(index, N / 2.0)
    xi = 2.0 * math.pi / L * index
    first, second = 1j * xi * u_hat, -(xi**2) * u_hat

    def evaluate(x: float) -> tuple[float, float, float]:
        phase = np.exp(1j * xi * x)
        return (
            float(np.dot(u_hat, phase).real),
            float(np.dot(first, phase).real),
            float(np.dot(second, phase).real),
        )

    return evaluate


def trapezoid(u: FloatArray, L: float) -> float:
    """∫₀ᴸ u dx by the periodic trapezoid rule"""
    return float(np.sum(u) * (L / len(u)))


def sobolev_weight(N: int, s: float) -> FloatArray:
    """(1 + m²)^s for integer modes in numpy.fft order"""
    return (1.0 + modes(N) ** 2) ** s


def dealias_mask(N: int) -> FloatArray:
    """2/3-rule mask: modes with |m| > N/3 are zeroed"""
    return np.asarray(np.abs(modes(N)) <= N / 3.0, dtype=np.float64)
