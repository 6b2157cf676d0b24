#!/usr/bin/env python3

"""Elliptic integrals and Jacobi elliptic functions for real modulus 0 <= k < 1

Complete integrals and the Jacobi functions are computed by (descending) arithmetic-
geometric-mean iteration (https://dlmf.nist.gov/19.8, https://dlmf.nist.gov/22.20),
incomplete and third kind integrals by Carlson's symmetric forms.

Copyright (C) 2024 Checkmk GmbH - License: GNU General Public License v2
This file is part of Checkmk (https://checkmk.com). It is subject to the terms and
conditions defined in the file COPYING, which is part of this source code package.
"""

import logging
import math
from functools import lru_cache
from typing import overload

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, model_validator
from scipy import special

from periwave.utils import EllipticDomainError, SingularCaseError

FloatArray = npt.NDArray[np.float64]

MAX_AGM_STEPS = 40


def log() -> logging.Logger:
    """Logger for this module"""
    return logging.getLogger("trickkiste.periwave.elliptic")


class Modulus(BaseModel):
    """Elliptic modulus together with its complementary modulus
    >>> round(Modulus(k=0.6).k_prime, 12)
    0.8
    """

    model_config = ConfigDict(frozen=True)

    k: float

    @model_validator(mode="after")
    def check_range(self) -> "Modulus":
        """Only 0 <= k < 1 is supported"""
        check_modulus(self.k)
        return self

    @property
    def k_prime(self) -> float:
        """sqrt(1 - k²), evaluated without cancellation"""
        return complementary(self.k)

    def __str__(self) -> str:
        return f"k={self.k:.17g}"


def check_modulus(k: float) -> float:
    """Raises EllipticDomainError unless 0 <= @k < 1, returns @k as float"""
    if not math.isfinite(k) or not 0.0 <= k < 1.0:
        raise EllipticDomainError(f"elliptic modulus must satisfy 0 <= k < 1, got k={k!r}")
    return float(k)


def complementary(k: float) -> float:
    """Complementary modulus k' = sqrt((1 - k)(1 + k))"""
    return math.sqrt((1.0 - k) * (1.0 + k))


@lru_cache(maxsize=4096)
def _agm_sequence(k: float) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Returns (a_n, c_n) of the AGM started with a_0=1, b_0=k', c_0=k"""
    a_n, b_n, c_n = 1.0, complementary(k), k
    a_seq, c_seq = [a_n], [c_n]
    for _ in range(MAX_AGM_STEPS):
        if abs(c_n) <= 1e-17 * a_n:
            break
        a_n, b_n, c_n = 0.5 * (a_n + b_n), math.sqrt(a_n * b_n), 0.5 * (a_n - b_n)
        a_seq.append(a_n)
        c_seq.append(c_n)
    log().debug("AGM for k=%.17g converged after %d steps", k, len(a_seq) - 1)
    return tuple(a_seq), tuple(c_seq)


def _complete_k(k: float) -> float:
    a_seq, _ = _agm_sequence(k)
    return math.pi / (2.0 * a_seq[-1])


def _complete_e(k: float) -> float:
    _, c_seq = _agm_sequence(k)
    return _complete_k(k) * (1.0 - sum(2.0 ** (n - 1) * c_n**2 for n, c_n in enumerate(c_seq)))


def complete_K(k: float) -> float:  # pylint: disable=invalid-name
    """Complete elliptic integral of the first kind K(k)
    >>> round(complete_K(0.0), 15) == round(math.pi / 2, 15)
    True
    """
    return _complete_k(check_modulus(k))


def complete_E(k: float) -> float:  # pylint: disable=invalid-name
    """Complete elliptic integral of the second kind E(k)"""
    return _complete_e(check_modulus(k))


@overload
def _scalar_or_array(values: FloatArray, scalar: bool) -> FloatArray: ...


@overload
def _scalar_or_array(values: float, scalar: bool) -> float: ...


def _scalar_or_array(values: FloatArray | float, scalar: bool) -> FloatArray | float:
    if scalar:
        return float(np.asarray(values).reshape(-1)[0])
    return np.asarray(values, dtype=np.float64)


def _amplitude_reduced(x: FloatArray, k: float) -> FloatArray:
    """Amplitude am(x) by descending AGM, meant for |x| <= K"""
    a_seq, c_seq = _agm_sequence(k)
    depth = len(a_seq) - 1
    phi = 2.0**depth * a_seq[-1] * x
    for n in range(depth, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c_seq[n] / a_seq[n] * np.sin(phi)))
    return np.asarray(phi, dtype=np.float64)


def _amplitude(x: FloatArray, k: float) -> FloatArray:
    """am(x) for any real x, using am(x + 2jK) = am(x) + j·π"""
    if k == 0.0:
        return x
    period = 2.0 * _complete_k(k)
    shifts = np.round(x / period)
    return _amplitude_reduced(x - shifts * period, k) + shifts * math.pi


@overload
def amplitude(x: float, k: float) -> float: ...


@overload
def amplitude(x: FloatArray, k: float) -> FloatArray: ...


def amplitude(x: float | FloatArray, k: float) -> float | FloatArray:
    """Jacobi amplitude am(x, k), continuous and increasing in x"""
    check_modulus(k)
    values = np.asarray(x, dtype=np.float64)
    return _scalar_or_array(_amplitude(values, k), values.ndim == 0)


def _jacobi(x: FloatArray, k: float) -> tuple[FloatArray, FloatArray, FloatArray]:
    phi = _amplitude(x, k)
    sn, cn = np.sin(phi), np.cos(phi)
    k_prime = complementary(k)
    # avoids the 0/0 of cos(phi_0)/cos(phi_1 - phi_0) at odd multiples of K
    dn = np.sqrt(cn**2 + k_prime**2 * sn**2)
    return sn, cn, dn


@overload
def jacobi_elliptic(x: float, k: float) -> tuple[float, float, float]: ...


@overload
def jacobi_elliptic(x: FloatArray, k: float) -> tuple[FloatArray, FloatArray, FloatArray]: ...


def jacobi_elliptic(
    x: float | FloatArray, k: float
) -> tuple[float, float, float] | tuple[FloatArray, FloatArray, FloatArray]:
    """Returns (sn, cn, dn) evaluated at @x (scalar or array)"""
    check_modulus(k)
    values = np.asarray(x, dtype=np.float64)
    scalar = values.ndim == 0
    sn, cn, dn = _jacobi(values.reshape(-1) if scalar else values, k)
    if scalar:
        return float(sn[0]), float(cn[0]), float(dn[0])
    return sn, cn, dn


def _incomplete_f(w: FloatArray, k: float) -> FloatArray:
    """F(w, k) for any real w and 0 <= k <= 1, unchecked"""
    turns = np.round(w / math.pi)
    w_r = w - turns * math.pi
    sin_w, cos_w = np.sin(w_r), np.cos(w_r)
    periodic_part = 2.0 * turns * _complete_k(k) if turns.any() else 0.0
    return np.asarray(
        sin_w * special.elliprf(cos_w**2, 1.0 - k**2 * sin_w**2, 1.0) + periodic_part,
        dtype=np.float64,
    )


def _incomplete_e(w: FloatArray, k: float) -> FloatArray:
    """E(w, k) for any real w and 0 <= k <= 1, unchecked"""
    turns = np.round(w / math.pi)
    w_r = w - turns * math.pi
    sin_w, cos_w = np.sin(w_r), np.cos(w_r)
    delta = 1.0 - k**2 * sin_w**2
    periodic_part = 2.0 * turns * _complete_e(k) if turns.any() else 0.0
    return np.asarray(
        sin_w * special.elliprf(cos_w**2, delta, 1.0)
        - k**2 / 3.0 * sin_w**3 * special.elliprd(cos_w**2, delta, 1.0)
        + periodic_part,
        dtype=np.float64,
    )


@overload
def incomplete_F(w: float, k: float) -> float: ...


@overload
def incomplete_F(w: FloatArray, k: float) -> FloatArray: ...


def incomplete_F(w: float | FloatArray, k: float) -> float | FloatArray:  # pylint: disable=invalid-name
    """Incomplete elliptic integral of the first kind F(w, k) = ∫₀ʷ dθ/√(1 − k² sin²θ)"""
    check_modulus(k)
    values = np.asarray(w, dtype=np.float64)
    return _scalar_or_array(_incomplete_f(values, k), values.ndim == 0)


@overload
def incomplete_E(w: float, k: float) -> float: ...


@overload
def incomplete_E(w: FloatArray, k: float) -> FloatArray: ...


def incomplete_E(w: float | FloatArray, k: float) -> float | FloatArray:  # pylint: disable=invalid-name
    """Incomplete elliptic integral of the second kind E(w, k) = ∫₀ʷ √(1 − k² sin²θ) dθ"""
    check_modulus(k)
    values = np.asarray(w, dtype=np.float64)
    return _scalar_or_array(_incomplete_e(values, k), values.ndim == 0)


@overload
def jacobi_zeta(x: float, k: float) -> float: ...


@overload
def jacobi_zeta(x: FloatArray, k: float) -> FloatArray: ...


def jacobi_zeta(x: float | FloatArray, k: float) -> float | FloatArray:
    """Jacobi Zeta function Z(x, k) = E(am x, k) − (E/K)·x, 2K-periodic with zero mean"""
    check_modulus(k)
    values = np.asarray(x, dtype=np.float64)
    if k == 0.0:
        return _scalar_or_array(np.zeros_like(values), values.ndim == 0)
    period = 2.0 * _complete_k(k)
    x_r = values - np.round(values / period) * period
    zeta = _incomplete_e(_amplitude_reduced(x_r, k), k) - _complete_e(k) / _complete_k(k) * x_r
    return _scalar_or_array(zeta, values.ndim == 0)


def heuman_lambda(w: float, k: float) -> float:
    """Heuman's Lambda function
        Λ₀(w, k) = (2/π)·[K(k)E(w, k') − K(k)F(w, k') + E(k)F(w, k')]
    >>> heuman_lambda(0.0, 0.3)
    0.0
    """
    check_modulus(k)
    k_prime = complementary(k)
    if k_prime == 1.0:
        return math.sin(w)
    w_arr = np.asarray([w], dtype=np.float64)
    f_w = float(_incomplete_f(w_arr, k_prime)[0])
    e_w = float(_incomplete_e(w_arr, k_prime)[0])
    big_k, big_e = _complete_k(k), _complete_e(k)
    return 2.0 / math.pi * (big_k * e_w - big_k * f_w + big_e * f_w)


def complete_Pi(alpha2: float, k: float) -> float:  # pylint: disable=invalid-name
    """Complete elliptic integral of the third kind
        Π(α², k) = ∫₀ᴷ ds / (1 − α² sn²(s, k))
    using Π = R_F(0, k'², 1) + (α²/3)·R_J(0, k'², 1, 1 − α²)"""
    check_modulus(k)
    if alpha2 == k * k or alpha2 >= 1.0:
        raise SingularCaseError(
            f"complete_Pi is singular or undefined for alpha2={alpha2!r} with k={k!r}"
        )
    k_prime2 = (1.0 - k) * (1.0 + k)
    return float(
        special.elliprf(0.0, k_prime2, 1.0)
        + alpha2 / 3.0 * special.elliprj(0.0, k_prime2, 1.0, 1.0 - alpha2)
    )
