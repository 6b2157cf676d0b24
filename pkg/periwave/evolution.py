#!/usr/bin/env python3

"""Pseudospectral time integration of

    u_t − Mu_x + ∂x f(u) = 0                gKdV form
    u_t + Mu_t + ∂x(u + f(u)) = 0           regularized form

in Fourier space, û_t = Λ·û + 𝒩(û) with
    Λ = iξα(m),          𝒩 = −iξ·f̂(u)                 (gKdV)
    Λ = −iξ/(1 + α(m)),  𝒩 = −iξ·f̂(u)/(1 + α(m))      (regularized)
and perturbation experiments recording ρ(u(t), φ) in H^(s2/2).

exponential_rk4 treats Λ exactly (ETDRK4, coefficients by contour averaging),
implicit_midpoint is the A-stable, quadratic-invariant preserving Gauss scheme solved by
fixed point iteration.

Copyright (C) 2024 Checkmk GmbH - License: GNU General Public License v2
This file is part of Checkmk (https://checkmk.com). It is subject to the terms and
conditions defined in the file COPYING, which is part of this source code package.
"""

# pylint: disable=invalid-name

import logging
import math
from collections.abc import Callable
from typing import Annotated, Literal

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, model_validator

from periwave import fourier
from periwave.families import MIN_GRID, EvolutionForm, WaveProfile
from periwave.functionals import best_shift, charge, energy, mean, quadratic_form
from periwave.utils import AdmissibilityError, IntegratorAbort

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]

CONTOUR_POINTS = 32
CONTOUR_RADIUS = 1.0
MAX_FIXED_POINT_STEPS = 60
PERTURBATION_POLICY = 0.1


def log() -> logging.Logger:
    """Logger for this module"""
    return logging.getLogger("trickkiste.periwave.evolution")


class EvolutionConfig(BaseModel):
    """Discretization of a single run"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    N: int = 256
    dt: float = 1e-2
    T: float = 1.0
    integrator: Literal["exponential_rk4", "implicit_midpoint"] = "exponential_rk4"
    dealias: bool = True
    record_every: int = 10
    blowup_factor: float = 1e6

    @model_validator(mode="after")
    def check_numbers(self) -> "EvolutionConfig":
        """dt and T positive, N a power of two"""
        if not self.dt > 0 or not self.T > 0:
            raise AdmissibilityError(f"dt and T must be positive, got dt={self.dt}, T={self.T}")
        if self.N < MIN_GRID or self.N & (self.N - 1):
            raise AdmissibilityError(f"N must be a power of two >= {MIN_GRID}, got {self.N}")
        if self.record_every < 1:
            raise AdmissibilityError(f"record_every must be positive, got {self.record_every}")
        return self

    @property
    def steps(self) -> int:
        """Number of time steps, T rounded to a multiple of dt"""
        return max(1, round(self.T / self.dt))


class EvolutionTrace:
    """Recorded diagnostics of a run"""

    def __init__(self) -> None:
        self.times: list[float] = []
        self.rho_series: list[float] = []
        self.shifts: list[float] = []
        self.drift_E: list[float] = []
        self.drift_Q: list[float] = []
        self.drift_V: list[float] = []

    def record(
        self, t: float, rho: float, shift: float, drifts: tuple[float, float, float]
    ) -> None:
        """Appends one sample"""
        self.times.append(t)
        self.rho_series.append(rho)
        self.shifts.append(shift)
        self.drift_E.append(drifts[0])
        self.drift_Q.append(drifts[1])
        self.drift_V.append(drifts[2])

    @property
    def sup_rho(self) -> float:
        """max_t ρ(u(t), φ)"""
        return max(self.rho_series, default=0.0)

    @property
    def initial_rho(self) -> float:
        """ρ(u(0), φ)"""
        return self.rho_series[0] if self.rho_series else 0.0

    @property
    def max_drift(self) -> float:
        """Largest relative drift of any conserved quantity"""
        return max(self.drift_E + self.drift_Q + self.drift_V, default=0.0)

    def rows(self) -> list[tuple[float, float, float, float, float]]:
        """(t, rho, drift_E, drift_Q, drift_V) per sample"""
        return list(
            zip(self.times, self.rho_series, self.drift_E, self.drift_Q, self.drift_V)
        )

    def __len__(self) -> int:
        return len(self.times)

    def __repr__(self) -> str:
        return f"EvolutionTrace<{len(self)} samples, sup_rho={self.sup_rho:.3g}>"


class _Problem:
    """Linear part Λ and nonlinear part 𝒩 of one equation on one grid"""

    def __init__(self, form: EvolutionForm, L: float, N: int, dealias: bool) -> None:
        self.form = form
        xi = fourier.wavenumbers(N, L)
        xi[N // 2] = 0.0  # first derivative of the Nyquist mode
        alpha = form.symbol.multiplier(fourier.modes(N), L)
        if form.regularized:
            self.linear: ComplexArray = -1j * xi / (1.0 + alpha)
            self.factor: ComplexArray = -1j * xi / (1.0 + alpha)
        else:
            self.linear = 1j * xi * alpha
            self.factor = -1j * xi + 0j
        if dealias:
            self.factor = self.factor * fourier.dealias_mask(N)

    def nonlinear(self, u_hat: ComplexArray) -> ComplexArray:
        """𝒩(û)"""
        u = np.fft.ifft(u_hat).real
        return np.asarray(self.factor * np.fft.fft(self.form.nonlinearity.f(u)), np.complex128)


def _exponential_rk4(problem: _Problem, dt: float) -> Callable[[ComplexArray], ComplexArray]:
    z = dt * problem.linear
    contour = CONTOUR_RADIUS * np.exp(
        2j * math.pi * (np.arange(1, CONTOUR_POINTS + 1) - 0.5) / CONTOUR_POINTS
    )
    zc = z[:, np.newaxis] + contour[np.newaxis, :]
    full, half = np.exp(z), np.exp(z / 2.0)
    zeta = dt * np.mean((np.exp(zc / 2.0) - 1.0) / zc, axis=1)
    alpha = dt * np.mean((-4.0 - zc + np.exp(zc) * (4.0 - 3.0 * zc + zc**2)) / zc**3, axis=1)
    beta = dt * np.mean((2.0 + zc + np.exp(zc) * (-2.0 + zc)) / zc**3, axis=1)
    gamma = dt * np.mean((-4.0 - 3.0 * zc - zc**2 + np.exp(zc) * (4.0 - zc)) / zc**3, axis=1)

    def step(v: ComplexArray) -> ComplexArray:
        n1 = problem.nonlinear(v)
        a = half * v + zeta * n1
        n2 = problem.nonlinear(a)
        b = half * v + zeta * n2
        n3 = problem.nonlinear(b)
        c = half * a + zeta * (2.0 * n3 - n1)
        n4 = problem.nonlinear(c)
        return full * v + alpha * n1 + 2.0 * beta * (n2 + n3) + gamma * n4

    return step


def _implicit_midpoint(problem: _Problem, dt: float) -> Callable[[ComplexArray], ComplexArray]:
    plus, minus = 1.0 + 0.5 * dt * problem.linear, 1.0 - 0.5 * dt * problem.linear

    def step(v: ComplexArray) -> ComplexArray:
        change = math.inf
        new = (plus * v + dt * problem.nonlinear(v)) / minus
        for _ in range(MAX_FIXED_POINT_STEPS):
            update = (plus * v + dt * problem.nonlinear(0.5 * (v + new))) / minus
            change = float(np.max(np.abs(update - new)))
            new = update
            if change <= 1e-12 * max(float(np.max(np.abs(new))), 1e-300):
                return new
        raise IntegratorAbort(
            f"implicit midpoint fixed point did not converge within {MAX_FIXED_POINT_STEPS}"
            f" iterations (last change {change:.3g}), reduce dt"
        )

    return step


def _relative(value: float, initial: float, scale: float) -> float:
    return abs(value - initial) / scale if scale > 0 else abs(value - initial)


def integrate(
    u0: FloatArray,
    form: EvolutionForm,
    L: float,
    config: EvolutionConfig,
    reference: None | FloatArray = None,
) -> tuple[EvolutionTrace, FloatArray]:
    """Evolves @u0 over [0, T], recording ρ(u(t), reference) (reference defaults to
    @u0) in H^(s2/2) and the relative drift of E, Q and V every record_every steps.
    Returns the trace and the final samples."""
    u_start = np.asarray(u0, dtype=np.float64)
    if len(u_start) != config.N:
        raise AdmissibilityError(f"initial state has {len(u_start)} samples, config N={config.N}")
    target = u_start if reference is None else np.asarray(reference, dtype=np.float64)
    symbol, nonlinearity = form.symbol, form.nonlinearity
    s = symbol.s2 / 2.0
    problem = _Problem(form, L, config.N, config.dealias)
    step = (_exponential_rk4 if config.integrator == "exponential_rk4" else _implicit_midpoint)(
        problem, config.dt
    )

    def invariants(u: FloatArray) -> tuple[float, float, float]:
        return (
            energy(u, L, symbol, nonlinearity),
            charge(u, L, symbol, form.regularized),
            mean(u, L),
        )

    start = invariants(u_start)
    size = float(np.max(np.abs(u_start)))
    # magnitudes of the terms making up E, Q and V, drifts are measured against them
    scales = (
        0.5 * abs(quadratic_form(u_start, L, symbol))
        + fourier.trapezoid(np.abs(nonlinearity.primitive(u_start)), L),
        abs(start[1]),
        fourier.trapezoid(np.abs(u_start), L),
    )
    threshold = config.blowup_factor * (size if size > 0 else 1.0)
    monitor_positivity = nonlinearity.kind == "three_halves"
    trace = EvolutionTrace()

    def record(t: float, u: FloatArray) -> None:
        rho, shift = best_shift(u, target, L, s)
        values = invariants(u)
        trace.record(
            t,
            rho,
            shift,
            (
                _relative(values[0], start[0], scales[0]),
                _relative(values[1], start[1], scales[1]),
                _relative(values[2], start[2], scales[2]),
            ),
        )

    record(0.0, u_start)
    v = np.fft.fft(u_start)
    u = u_start
    steps = config.steps
    log().debug(
        "integrate %s: %d steps of dt=%g (%s)", form.symbol, steps, config.dt, config.integrator
    )
    for n in range(1, steps + 1):
        v = step(v)
        u = np.asarray(np.fft.ifft(v).real, dtype=np.float64)
        t = n * config.dt
        sup = float(np.max(np.abs(u)))
        if not math.isfinite(sup) or sup > threshold:
            raise IntegratorAbort(f"blow-up at t={t:.6g}: sup|u| = {sup:.3g}", trace)
        if monitor_positivity and float(np.min(u)) < 0:
            raise IntegratorAbort(
                f"solution left the positive cone at t={t:.6g}: min u = {np.min(u):.3g}", trace
            )
        if n % config.record_every == 0 or n == steps:
            record(t, u)
        if n % 10000 == 0:
            log().debug("step %d/%d, rho=%.3g", n, steps, trace.rho_series[-1])
    return trace, u


class ModeBump(BaseModel):
    """amplitude·cos(2π·mode·x/L)"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["mode_bump"] = "mode_bump"
    amplitude: float = Field(ge=0.0)
    mode: int = Field(default=1, ge=1)

    def samples(self, N: int, L: float) -> FloatArray:
        """Perturbation on the grid"""
        return np.asarray(
            self.amplitude * np.cos(2.0 * math.pi * self.mode * fourier.grid(N, L) / L),
            dtype=np.float64,
        )


class RandomBump(BaseModel):
    """Random trigonometric polynomial of the modes 1..modes, scaled to sup-norm
    @amplitude, reproducible from @seed"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["random"] = "random"
    amplitude: float = Field(ge=0.0)
    seed: int = 0
    modes: int = Field(default=8, ge=1)

    def samples(self, N: int, L: float) -> FloatArray:
        """Perturbation on the grid"""
        if self.modes >= N // 3:
            raise AdmissibilityError(f"random perturbation needs modes < N/3, got {self.modes}")
        generator = np.random.default_rng(self.seed)
        coefficients = generator.standard_normal(self.modes) + 1j * generator.standard_normal(
            self.modes
        )
        u_hat = np.zeros(N, dtype=np.complex128)
        u_hat[1 : self.modes + 1] = coefficients
        u_hat[N - self.modes :] = np.conj(coefficients[::-1])
        shape = fourier.samples(u_hat)
        return np.asarray(self.amplitude * shape / np.max(np.abs(shape)), dtype=np.float64)


Perturbation = Annotated[ModeBump | RandomBump, Field(discriminator="kind")]


def orbital_experiment(
    profile: WaveProfile, perturbation: ModeBump | RandomBump, config: EvolutionConfig
) -> EvolutionTrace:
    """Evolves φ + perturbation and records ρ(u(t), φ) in H^(s2/2)"""
    if profile.N != config.N:
        raise AdmissibilityError(f"profile has N={profile.N}, config N={config.N}")
    bound = PERTURBATION_POLICY * float(np.max(np.abs(profile.samples)))
    if perturbation.amplitude > bound:
        raise AdmissibilityError(
            f"perturbation amplitude {perturbation.amplitude:g} exceeds"
            f" {PERTURBATION_POLICY:g}·sup|φ| = {bound:.6g}"
        )
    u0 = profile.samples + perturbation.samples(profile.N, profile.L)
    trace, _ = integrate(u0, profile.family.form, profile.L, config, reference=profile.samples)
    log().info(
        "%s, %s: rho(0)=%.3g sup_rho=%.3g over T=%g",
        profile,
        perturbation,
        trace.initial_rho,
        trace.sup_rho,
        config.T,
    )
    return trace


def phase_speed(trace: EvolutionTrace, L: float) -> float:
    """Speed c recovered from the ρ-minimizing shifts r(t) ≈ −ct (mod L)"""
    if len(trace) < 2:
        raise ValueError("phase speed needs at least two samples")
    unwrapped = np.unwrap(np.asarray(trace.shifts) * 2.0 * math.pi / L) * L / (2.0 * math.pi)
    slope = np.polyfit(np.asarray(trace.times), unwrapped, 1)[0]
    return -float(slope)
