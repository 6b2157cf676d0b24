#!/usr/bin/env python3

"""Spectrum of the linearized operator around a traveling wave

    L_k u = (M + c)u − f'(φ)u              gKdV form
    L_k u = cMu + (c − 1)u − f'(φ)u        regularized form

is approximated by Fourier-Galerkin truncation to the modes −N_t..N_t: the dispersion
part is diagonal, the potential part is the Toeplitz matrix of the Fourier coefficients
of g = f'(φ). For local dispersion the count of eigenvalues below zero is cross-checked
by the sign of θ = y'(L)/φ''(0), y solving −y'' + Vy = 0, y(0) = −1/φ''(0), y'(0) = 0,
and for Lamé-type potentials by the closed-form band edges from lame.py.

Copyright (C) 2024 Checkmk GmbH - License: GNU General Public License v2
This file is part of Checkmk (https://checkmk.com). It is subject to the terms and
conditions defined in the file COPYING, which is part of this source code package.
"""

# pylint: disable=invalid-name

import logging
import math
from typing import NamedTuple

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict
from scipy import integrate, linalg

from periwave import fourier
from periwave.families import (
    Family,
    SymbolSpec,
    WaveProfile,
    ilw_fourier_coefficients,
    wave_data,
)
from periwave.lame import lame_periodic_eigenvalues
from periwave.utils import (
    AdmissibilityError,
    DegeneratePhaseError,
    ResolutionError,
    UnsupportedCaseError,
)

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]

DEFAULT_TRUNCATION = 128
ALIGNMENT_THRESHOLD = 0.999


def log() -> logging.Logger:
    """Logger for this module"""
    return logging.getLogger("trickkiste.periwave.spectral")


class HillOperator:
    """Galerkin matrix of L_k on the modes −N_t..N_t (row/column index m + N_t)"""

    def __init__(
        self,
        matrix: FloatArray | ComplexArray,
        profile: WaveProfile,
        symbol: SymbolSpec,
        N_t: int,
    ) -> None:
        self.matrix = matrix
        self.profile = profile
        self.symbol = symbol
        self.N_t = N_t

    @property
    def size(self) -> int:
        """2N_t + 1"""
        return 2 * self.N_t + 1

    @property
    def modes(self) -> FloatArray:
        """Integer modes −N_t..N_t in matrix order"""
        return np.arange(-self.N_t, self.N_t + 1, dtype=np.float64)

    def kernel_vector(self) -> ComplexArray:
        """Coefficients of φ' on the truncated basis"""
        profile = self.profile
        coefficients = profile.fourier
        index = self.modes.astype(int)
        values = coefficients[index % profile.N] * (1j * 2.0 * math.pi / profile.L * index)
        if 2 * self.N_t == profile.N:
            # odd derivative of the (real) Nyquist mode vanishes
            values[0] = values[-1] = 0.0
        return np.asarray(values, dtype=np.complex128)

    def __repr__(self) -> str:
        return f"HillOperator<{self.profile}, N_t={self.N_t}>"


def _potential_coefficients(g: FloatArray, span: int) -> ComplexArray:
    """ĝ(j) for j = 0..span of the trigonometric interpolant of g (Nyquist split, zero
    beyond)"""
    N = len(g)
    g_hat = fourier.coefficients(g)
    j = np.arange(span + 1)
    values = np.where(j < N // 2, g_hat[j % N], 0.0).astype(np.complex128)
    if span >= N // 2:
        values[N // 2] = g_hat[N // 2] / 2.0
    return values


def assemble(
    profile: WaveProfile, symbol: None | SymbolSpec = None, N_t: int = DEFAULT_TRUNCATION
) -> HillOperator:
    """Returns the Galerkin matrix M[m,n] = δ_mn·d(m) − ĝ(m − n), d(m) = α(m) + c resp.
    c·α(m) + c − 1, g = f'(φ)"""
    if N_t < 1 or 2 * N_t > profile.N:
        raise ResolutionError(
            f"Galerkin truncation N_t={N_t} needs 1 <= N_t <= N/2 = {profile.N // 2}"
        )
    family = profile.family
    operator = symbol or family.symbol
    g = family.nonlinearity.derivative(profile.samples)
    positive = _potential_coefficients(g, 2 * N_t)
    # ĝ(−j) = conj(ĝ(j)) for real g
    potential = linalg.toeplitz(positive, np.conj(positive))
    if np.max(np.abs(potential.imag), initial=0.0) <= 1e-13 * max(
        np.max(np.abs(potential.real), initial=0.0), 1.0
    ):
        potential = potential.real
    m = np.arange(-N_t, N_t + 1, dtype=np.float64)
    alpha = operator.multiplier(m, profile.L)
    diagonal = (
        profile.c * alpha + profile.c - 1.0 if family.regularized else alpha + profile.c
    )
    matrix = np.diag(diagonal) - potential
    log().debug("assembled %dx%d operator for %s", len(m), len(m), profile)
    return HillOperator(matrix, profile, operator, N_t)


class SpectrumReport(BaseModel):
    """Low spectrum of L_k and the verdicts on a single negative and a simple zero
    eigenvalue"""

    model_config = ConfigDict(frozen=True)

    eigenvalues: list[float]
    n_negative: int
    zero_candidates: list[float]
    kernel_alignment: float
    tol_zero: float
    N_t: int
    h1_holds: bool
    h2_holds: bool


def _alignment(vector: ComplexArray, reference: ComplexArray) -> float:
    norms = float(np.linalg.norm(vector) * np.linalg.norm(reference))
    if norms == 0.0:
        return 0.0
    return min(1.0, abs(complex(np.vdot(reference, vector))) / norms)


def eigs(op: HillOperator, n_eigs: int = 6, tol_zero: None | float = None) -> SpectrumReport:
    """Lowest @n_eigs eigenvalues of @op and the inertia verdicts derived from them"""
    count = max(1, min(n_eigs, op.size))
    values, vectors = linalg.eigh(op.matrix, subset_by_index=[0, count - 1])
    tolerance = 1e-6 * abs(float(values[0])) if tol_zero is None else tol_zero
    n_negative = int(np.sum(values < -tolerance))
    zero_mask = np.abs(values) <= tolerance
    zero_index = int(np.argmin(np.abs(values)))
    alignment = _alignment(vectors[:, zero_index], op.kernel_vector())
    report = SpectrumReport(
        eigenvalues=[float(value) for value in values],
        n_negative=n_negative,
        zero_candidates=[float(value) for value in values[zero_mask]],
        kernel_alignment=alignment,
        tol_zero=tolerance,
        N_t=op.N_t,
        h1_holds=n_negative == 1,
        h2_holds=int(np.sum(zero_mask)) == 1 and alignment > ALIGNMENT_THRESHOLD,
    )
    log().debug(
        "spectrum of %s: %s (n_negative=%d, alignment=%.12f)",
        op.profile,
        ", ".join(f"{value:.6g}" for value in values),
        n_negative,
        alignment,
    )
    return report


def kernel_residual(op: HillOperator) -> float:
    """‖L_k φ'‖/‖φ'‖ on the truncated basis"""
    reference = op.kernel_vector()
    norm = float(np.linalg.norm(reference))
    if norm == 0.0:
        return 0.0
    return float(np.linalg.norm(op.matrix @ reference)) / norm


class LameClosedForm(NamedTuple):
    """Lowest three periodic Lamé eigenvalues h and the matching eigenvalues λ of L_k"""

    h: tuple[float, float, float]
    lambdas: tuple[float, float, float]


def lame_closed_form(family: Family, k: float, L: float) -> LameClosedForm:
    """Closed-form λ₀ ≤ λ₁ ≤ λ₂ for the families whose linearization is a scaled Lamé
    operator −d²/dy² + n(n+1)k²sn²(y)"""
    data = wave_data(family, k, L)
    if family.tag == "kdv_cnoidal":
        b = data.aux["b"]
        degree, scale, offset = 3, b**2, data.c - 12.0 * k**2 * b**2
    elif family.tag in {"mkdv_dnoidal", "gardner_dn"}:
        # the Gardner linearization equals the mKdV one at speed c_mkdv
        a = data.aux["a"]
        c = data.aux.get("c_mkdv", data.c)
        degree, scale, offset = 2, a**2, c - 6.0 * a**2
    elif family.tag in {"schamel", "reg_schamel"}:
        mu, beta = data.aux["mu"], data.aux["beta"]
        degree, scale = 5, mu**2
        shift = 16.0 * mu**2 * data.aux["s"] if family.tag == "reg_schamel" else data.c
        offset = shift - 10.0 * mu**2 * beta - 30.0 * mu**2 * k**2
    else:
        raise UnsupportedCaseError(f"no Lamé reduction for {family}")

    h0, h1, h2 = (float(value) for value in lame_periodic_eigenvalues(degree, k)[:3])
    lambdas = tuple(scale * h + offset for h in (h0, h1, h2))
    if family.tag == "reg_schamel":
        lambdas = tuple(data.c * value for value in lambdas)
    return LameClosedForm((h0, h1, h2), (lambdas[0], lambdas[1], lambdas[2]))


def neves_theta(profile: WaveProfile, regularized: None | bool = None, rtol: float = 1e-10) -> float:
    """θ = y'(L)/φ''(0) for −y'' + V(x)y = 0, y(0) = −1/φ''(0), y'(0) = 0 with
    V = c − f'(φ) (gKdV form) or V = ((c − 1) − f'(φ))/c (regularized form).
    θ < 0 iff zero is the second, simple eigenvalue of L_k."""
    family = profile.family
    if family.symbol.kind != "neg_second_derivative":
        raise UnsupportedCaseError(f"θ needs second order dispersion, {family} is nonlocal")
    use_regularized = family.regularized if regularized is None else regularized
    evaluate = fourier.interpolant(profile.samples, profile.L)
    curvature = evaluate(0.0)[2]
    scale = float(np.max(np.abs(profile.derivative(2))))
    if scale == 0.0 or abs(curvature) <= 1e-10 * scale:
        raise DegeneratePhaseError(
            f"{profile}: φ''(0) = {curvature:.3g} vanishes, the profile has no extremum at 0"
        )
    nonlinearity, c = family.nonlinearity, profile.c

    def potential(x: float) -> float:
        slope = float(nonlinearity.derivative(np.asarray(evaluate(x)[0])))
        return ((c - 1.0) - slope) / c if use_regularized else c - slope

    def rhs(x: float, y: FloatArray) -> list[float]:
        return [y[1], potential(x) * y[0]]

    y0 = -1.0 / curvature
    solution = integrate.solve_ivp(
        rhs,
        (0.0, profile.L),
        [y0, 0.0],
        method="DOP853",
        rtol=rtol,
        atol=1e-12 * abs(y0),
    )
    if not solution.success:
        raise DegeneratePhaseError(f"{profile}: θ integration failed: {solution.message}")
    theta = float(solution.y[1, -1]) / curvature
    log().debug("θ for %s = %.10g (%d rhs evaluations)", profile, theta, solution.nfev)
    return theta


class PF2Result(NamedTuple):
    """Verdict of the discrete PF(2) test on the window −M..M, the first violating index
    quadruple (n₁, n₂, m₁, m₂) if any (for a nonpositive entry (n, n, 0, 0))"""

    holds: bool
    window: int
    violation: None | tuple[int, int, int, int]


def pf2_check(seq: FloatArray, tol: float = 1e-12) -> PF2Result:
    """Checks a sequence given on the modes −M..M (length 2M + 1) for
    (i)  α_n > 0 and
    (ii) α_{n₁−m₁}·α_{n₂−m₂} − α_{n₁−m₂}·α_{n₂−m₁} >= −tol·(|first| + |second|)
    for all n₁ < n₂, m₁ < m₂ with all differences inside the window.
    Condition (ii) only depends on differences, so m₁ = 0 is fixed.
    >>> pf2_check(np.array([0.25, 0.5, 1.0, 0.5, 0.25])).holds
    True
    """
    values = np.asarray(seq, dtype=np.float64)
    if values.ndim != 1 or len(values) % 2 != 1:
        raise AdmissibilityError(
            f"PF(2) sequence needs odd length 2M+1, got shape {values.shape}"
        )
    M = len(values) // 2
    nonpositive = np.flatnonzero(~(values > 0))
    if nonpositive.size:
        n = int(nonpositive[0]) - M
        return PF2Result(False, M, (n, n, 0, 0))

    n1, n2, m2 = np.meshgrid(
        np.arange(-M, M + 1), np.arange(-M, M + 1), np.arange(1, 2 * M + 1), indexing="ij"
    )
    valid = (n1 < n2) & (np.abs(n1 - m2) <= M) & (np.abs(n2 - m2) <= M)
    n1, n2, m2 = n1[valid], n2[valid], m2[valid]
    first = values[n1 + M] * values[n2 - m2 + M]
    second = values[n1 - m2 + M] * values[n2 + M]
    bad = np.flatnonzero(first - second < -tol * (np.abs(first) + np.abs(second)))
    if bad.size:
        index = int(bad[0])
        return PF2Result(False, M, (int(n1[index]), int(n2[index]), 0, int(m2[index])))
    return PF2Result(True, M, None)


def ilw_pf2_sequence(k: float, L: float, delta: float, M: int) -> FloatArray:
    """The positive even sequence b_|n| (n = −M..M) of ILW Fourier coefficients, n = 0
    holding the limit value"""
    terms = ilw_fourier_coefficients(k, L, delta, M)
    return np.concatenate((terms[:0:-1], terms))
