#!/usr/bin/env python3

"""Closed-form periodic traveling waves of KdV-type equations

A wave φ of period L and speed c solves the profile equation
    (M + c)·φ − f(φ) + A = 0              gKdV form   u_t − M u_x + ∂x f(u) = 0
    c·Mφ + (c − 1)·φ − f(φ) + A = 0       regularized u_t + M u_t + ∂x(u + f(u)) = 0
with the dispersion operator M given by its Fourier symbol α(m).

Every family is parametrized by the elliptic modulus k for fixed L; construct() samples
the closed form on a uniform grid, residual() measures how well the samples solve the
profile equation, and quadrature_period()/quadrature_profile() rebuild a profile from its
first integral (φ')² = G(φ) as an independent oracle.

Copyright (C) 2024 Checkmk GmbH - License: GNU General Public License v2
This file is part of Checkmk (https://checkmk.com). It is subject to the terms and
conditions defined in the file COPYING, which is part of this source code package.
"""

# pylint: disable=invalid-name

import json
import logging
import math
from collections.abc import Callable, Mapping
from typing import Any, Literal, NamedTuple

import numpy as np
import numpy.typing as npt
from numpy.polynomial import polynomial
from pydantic import BaseModel, ConfigDict, model_validator
from scipy import integrate, optimize

from periwave import fourier
from periwave.elliptic import (
    check_modulus,
    complementary,
    complete_K,
    jacobi_elliptic,
    jacobi_zeta,
)
from periwave.utils import (
    AdmissibilityError,
    DegenerateOrbitError,
    PeriodTooSmallError,
    UnsupportedCaseError,
)

FloatArray = npt.NDArray[np.float64]

FamilyTag = Literal[
    "kdv_cnoidal",
    "mkdv_dnoidal",
    "mkdv_dnsn",
    "gardner_dn",
    "gardner_dnsn",
    "ilw",
    "schamel",
    "mbbm_dnsn",
    "reg_schamel",
]
FAMILY_TAGS: tuple[FamilyTag, ...] = (
    "kdv_cnoidal",
    "mkdv_dnoidal",
    "mkdv_dnsn",
    "gardner_dn",
    "gardner_dnsn",
    "ilw",
    "schamel",
    "mbbm_dnsn",
    "reg_schamel",
)
REGULARIZED: frozenset[str] = frozenset({"mbbm_dnsn", "reg_schamel"})
GARDNER: frozenset[str] = frozenset({"gardner_dn", "gardner_dnsn"})

K_STAR = math.sqrt(2.0) / 2.0
MIN_GRID = 64


def log() -> logging.Logger:
    """Logger for this module"""
    return logging.getLogger("trickkiste.periwave.families")


class SymbolSpec(BaseModel):
    """Fourier symbol α(m) of the dispersion operator M on L-periodic functions"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["neg_second_derivative", "ilw"]
    delta: None | float = None

    @model_validator(mode="after")
    def check_depth(self) -> "SymbolSpec":
        """ILW needs a positive depth parameter"""
        if self.kind == "ilw" and (self.delta is None or not self.delta > 0):
            raise UnsupportedCaseError(f"ILW symbol needs delta > 0, got {self.delta!r}")
        return self

    @property
    def gamma(self) -> float:
        """Lower bound of α"""
        return 0.0

    @property
    def s1(self) -> float:
        """Order of the lower growth bound"""
        return 2.0 if self.kind == "neg_second_derivative" else 1.0

    @property
    def s2(self) -> float:
        """Order of the upper growth bound, the orbital stability norm is H^(s2/2)"""
        return self.s1

    def multiplier(self, m: FloatArray | float, L: float) -> FloatArray:
        """α(m) for integer mode(s) @m on period @L"""
        xi = 2.0 * math.pi / L * np.abs(np.asarray(m, dtype=np.float64))
        if self.kind == "neg_second_derivative":
            return np.asarray(xi**2, dtype=np.float64)
        assert self.delta is not None
        delta = self.delta
        with np.errstate(divide="ignore", invalid="ignore"):
            values = xi / np.tanh(xi * delta) - 1.0 / delta
        return np.asarray(np.where(xi == 0.0, 0.0, values), dtype=np.float64)

    def apply(self, u: FloatArray, L: float) -> FloatArray:
        """M u via Fourier multiplication"""
        return fourier.apply_multiplier(u, self.multiplier(fourier.modes(len(u)), L))

    def __str__(self) -> str:
        return self.kind if self.delta is None else f"{self.kind}(delta={self.delta:g})"


class Nonlinearity(BaseModel):
    """f(u) as polynomial Σ c_j u^j or as |u|^(3/2)"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["polynomial", "three_halves"]
    coefficients: tuple[float, ...] = ()

    def f(self, u: FloatArray) -> FloatArray:
        """The nonlinearity itself"""
        if self.kind == "three_halves":
            return np.asarray(np.abs(u) ** 1.5, dtype=np.float64)
        return np.asarray(polynomial.polyval(u, self.coefficients), dtype=np.float64)

    def derivative(self, u: FloatArray) -> FloatArray:
        """f'(u)"""
        if self.kind == "three_halves":
            return np.asarray(1.5 * np.sign(u) * np.sqrt(np.abs(u)), dtype=np.float64)
        return np.asarray(
            polynomial.polyval(u, polynomial.polyder(self.coefficients)), dtype=np.float64
        )

    def primitive(self, u: FloatArray) -> FloatArray:
        """F(u) = ∫₀ᵘ f(s) ds"""
        if self.kind == "three_halves":
            return np.asarray(0.4 * np.sign(u) * np.abs(u) ** 2.5, dtype=np.float64)
        return np.asarray(
            polynomial.polyval(u, polynomial.polyint(self.coefficients)), dtype=np.float64
        )


class EvolutionForm(BaseModel):
    """Which PDE a profile travels under"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    regularized: bool
    symbol: SymbolSpec
    nonlinearity: Nonlinearity


class Family(BaseModel):
    """A one-parameter family of traveling waves, e.g. Family(tag="gardner_dn", a=1, b=6)"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tag: FamilyTag
    a: None | float = None
    b: None | float = None
    delta: None | float = None

    @model_validator(mode="after")
    def check_parameters(self) -> "Family":
        """Gardner needs a and b > 0, ILW needs delta > 0"""
        if self.tag in GARDNER:
            if self.a is None or self.b is None:
                raise UnsupportedCaseError(f"{self.tag} needs parameters a and b")
            if not self.b > 0:
                raise UnsupportedCaseError(f"{self.tag}: only b > 0 is supported, got b={self.b}")
        if self.tag == "ilw" and (self.delta is None or not self.delta > 0):
            raise UnsupportedCaseError(f"ilw needs delta > 0, got delta={self.delta!r}")
        return self

    @property
    def regularized(self) -> bool:
        """True for families of the regularized (BBM-type) equation"""
        return self.tag in REGULARIZED

    @property
    def symbol(self) -> SymbolSpec:
        """Dispersion symbol of the underlying equation"""
        if self.tag == "ilw":
            return SymbolSpec(kind="ilw", delta=self.delta)
        return SymbolSpec(kind="neg_second_derivative")

    @property
    def nonlinearity(self) -> Nonlinearity:
        """f of the underlying equation"""
        if self.tag in {"schamel", "reg_schamel"}:
            return Nonlinearity(kind="three_halves")
        coefficients: dict[str, tuple[float, ...]] = {
            "kdv_cnoidal": (0.0, 0.0, 0.5),
            "mkdv_dnoidal": (0.0, 0.0, 0.0, 2.0),
            "mkdv_dnsn": (0.0, 0.0, 0.0, 2.0),
            "ilw": (0.0, 0.0, 1.0),
            "mbbm_dnsn": (0.0, 0.0, 0.0, 1.0),
        }
        if self.tag in GARDNER:
            assert self.a is not None and self.b is not None
            return Nonlinearity(kind="polynomial", coefficients=(0.0, 0.0, self.a / 2, self.b / 3))
        return Nonlinearity(kind="polynomial", coefficients=coefficients[self.tag])

    @property
    def form(self) -> EvolutionForm:
        """The PDE this family travels under"""
        return EvolutionForm(
            regularized=self.regularized, symbol=self.symbol, nonlinearity=self.nonlinearity
        )

    def __str__(self) -> str:
        if self.tag in GARDNER:
            return f"{self.tag}(a={self.a:g},b={self.b:g})"
        if self.tag == "ilw":
            return f"ilw(delta={self.delta:g})"
        return self.tag


class WaveData(NamedTuple):
    """Closed-form description of one member of a family"""

    c: float
    A: float
    shape: Callable[[FloatArray], FloatArray]
    aux: Mapping[str, float]


class WaveProfile:
    """A traveling wave sampled on the uniform grid x_j = j·L/N, j < N. Immutable."""

    def __init__(
        self,
        family: Family,
        k: float,
        L: float,
        c: float,
        A: float,
        samples: FloatArray,
        aux: None | Mapping[str, float] = None,
    ) -> None:
        self.family = family
        self.k = float(k)
        self.L = float(L)
        self.c = float(c)
        self.A = float(A)
        self.samples = np.array(samples, dtype=np.float64)
        self.samples.setflags(write=False)
        self.aux: Mapping[str, float] = dict(aux or {})

    @property
    def N(self) -> int:
        """Grid size"""
        return len(self.samples)

    @property
    def x(self) -> FloatArray:
        """Grid points"""
        return fourier.grid(self.N, self.L)

    @property
    def fourier(self) -> npt.NDArray[np.complex128]:
        """Normalized Fourier coefficients, Hermitian-symmetric"""
        return fourier.coefficients(self.samples)

    def derivative(self, order: int = 1) -> FloatArray:
        """Spectral derivative of the samples"""
        return fourier.derivative(self.samples, self.L, order)

    def with_samples(self, samples: FloatArray) -> "WaveProfile":
        """Same wave data, different samples (e.g. a perturbed profile)"""
        return WaveProfile(self.family, self.k, self.L, self.c, self.A, samples, self.aux)

    def to_json(self) -> str:
        """Serialized {family, k, L, c, A, N, samples[]} document"""
        return json.dumps(
            {
                "family": self.family.model_dump(exclude_none=True),
                "k": self.k,
                "L": self.L,
                "c": self.c,
                "A": self.A,
                "N": self.N,
                "aux": dict(self.aux),
                "samples": self.samples.tolist(),
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, document: str | Mapping[str, Any]) -> "WaveProfile":
        """Inverse of to_json()"""
        raw = json.loads(document) if isinstance(document, str) else document
        samples = np.asarray(raw["samples"], dtype=np.float64)
        if len(samples) != raw.get("N", len(samples)):
            raise AdmissibilityError(f"profile document has {len(samples)} samples, N={raw['N']}")
        return cls(
            Family.model_validate(raw["family"]),
            raw["k"],
            raw["L"],
            raw["c"],
            raw["A"],
            samples,
            raw.get("aux"),
        )

    def __str__(self) -> str:
        return f"{self.family} k={self.k:.6g} L={self.L:.6g} c={self.c:.6g} A={self.A:.6g} N={self.N}"

    def __repr__(self) -> str:
        return f"WaveProfile<{self}>"


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise AdmissibilityError(message)


def _kdv_cnoidal(_family: Family, k: float, L: float) -> WaveData:
    _require(k > K_STAR, f"kdv_cnoidal: k={k:.17g} below k* = {K_STAR:.17g} (c(k) must be > 0)")
    b = 2.0 * complete_K(k) / L
    c = 4.0 * b**2 * (2.0 * k**2 - 1.0)
    A = 24.0 * b**4 * k**2 * complementary(k) ** 2

    def shape(x: FloatArray) -> FloatArray:
        _, cn, _ = jacobi_elliptic(b * x, k)
        return 12.0 * k**2 * b**2 * cn**2

    return WaveData(c, A, shape, {"b": b})


def _mkdv_dnoidal(_family: Family, k: float, L: float) -> WaveData:
    a = 2.0 * complete_K(k) / L

    def shape(x: FloatArray) -> FloatArray:
        _, _, dn = jacobi_elliptic(a * x, k)
        return a * dn

    return WaveData(a**2 * (2.0 - k**2), 0.0, shape, {"a": a})


def dnsn_quantities(k: float) -> dict[str, float]:
    """β², g(k), r(k) and s = √(k⁴ − k² + 1) used by the dnoidal-snoidal waves"""
    s = math.sqrt(k**4 - k**2 + 1.0)
    return {
        "s": s,
        "beta2": s + k**2 - 1.0,
        "g": math.sqrt(s - k**2 + 0.5),
        "r": math.sqrt(2.0 * s + 2.0 * k**2 - 1.0),
    }


def _polish_roots(roots: tuple[float, float, float], c: float, A: float) -> tuple[float, ...]:
    """Newton polish of the nonzero roots of P(φ) = −φ⁴ + cφ² + 2Aφ"""

    def quartic(phi: float) -> float:
        return -(phi**4) + c * phi**2 + 2.0 * A * phi

    def slope(phi: float) -> float:
        return -4.0 * phi**3 + 2.0 * c * phi + 2.0 * A

    return tuple(
        float(optimize.newton(quartic, root, fprime=slope, tol=1e-15, maxiter=50, disp=False))
        for root in roots
    )


def _mkdv_dnsn(_family: Family, k: float, L: float) -> WaveData:
    K = complete_K(k)
    quantities = dnsn_quantities(k)
    s, beta2, g = quantities["s"], quantities["beta2"], quantities["g"]
    c = 16.0 * K**2 * s / L**2
    A = (
        -32.0
        * K**3
        / (3.0 * math.sqrt(3.0) * L**3)
        * (s - 2.0 * k**2 + 1.0)
        * math.sqrt(2.0 * s + 2.0 * k**2 - 1.0)
    )
    amplitude = 4.0 * K / (math.sqrt(2.0) * g * L)

    def shape(x: FloatArray) -> FloatArray:
        sn, _, dn = jacobi_elliptic(2.0 * K / L * x, k)
        return amplitude * dn**2 / (1.0 + beta2 * sn**2)

    alpha4 = amplitude
    alpha3 = amplitude * complementary(k) ** 2 / (1.0 + beta2)
    alpha1, alpha3, alpha4 = _polish_roots((-(alpha3 + alpha4), alpha3, alpha4), c, A)
    return WaveData(
        c,
        A,
        shape,
        {**quantities, "alpha1": alpha1, "alpha2": 0.0, "alpha3": alpha3, "alpha4": alpha4},
    )


def gardner_forward(v: FloatArray, a: float, b: float) -> FloatArray:
    """T: Gardner solution v -> mKdV solution √(b/6)·(v + a/2b)"""
    if not b > 0:
        raise UnsupportedCaseError(f"Gardner transform needs b > 0, got b={b}")
    return np.asarray(math.sqrt(b / 6.0) * (np.asarray(v) + a / (2.0 * b)), dtype=np.float64)


def gardner_inverse(u: FloatArray, a: float, b: float) -> FloatArray:
    """T⁻¹: mKdV solution u -> Gardner solution √(6/b)·u − a/2b"""
    if not b > 0:
        raise UnsupportedCaseError(f"Gardner transform needs b > 0, got b={b}")
    return np.asarray(math.sqrt(6.0 / b) * np.asarray(u) - a / (2.0 * b), dtype=np.float64)


def gardner_shift(t: float, a: float, b: float) -> float:
    """Frame shift a²t/4b between a Gardner flow and its mKdV image"""
    return a**2 * t / (4.0 * b)


def _gardner(base: Callable[[Family, float, float], WaveData]) -> Callable[
    [Family, float, float], WaveData
]:
    def build(family: Family, k: float, L: float) -> WaveData:
        assert family.a is not None and family.b is not None
        a, b = family.a, family.b
        mkdv = base(family, k, L)
        c = mkdv.c - a**2 / (4.0 * b)
        _require(c > 0, f"{family}: speed c = c_mkdv − a²/4b = {c:.6g} must be positive")
        A = math.sqrt(6.0 / b) * mkdv.A + c * a / (2.0 * b) + a**3 / (12.0 * b**2)

        def shape(x: FloatArray) -> FloatArray:
            return gardner_inverse(mkdv.shape(x), a, b)

        return WaveData(c, A, shape, {**mkdv.aux, "c_mkdv": mkdv.c, "A_mkdv": mkdv.A})

    return build


def ilw_fourier_coefficients(k: float, L: float, delta: float, n_max: int) -> FloatArray:
    """Coefficients b_n (n = 0..n_max) of the ILW wave φ = Σ_{n≠0} b_|n| e^{2πinx/L},
        b_n = (2π/L)·sinh(nκδ)/sinh(nκΔ),  κ = 2π/L,  Δ = K(k')L/2K(k)
    b_0 holds the n→0 limit (2π/L)·δ/Δ (the wave itself has zero mean)."""
    kappa = 2.0 * math.pi / L
    Delta = complete_K(complementary(k)) * L / (2.0 * complete_K(k))
    n = np.arange(1, n_max + 1, dtype=np.float64)
    ratio = np.exp(-n * kappa * (Delta - delta)) * (
        -np.expm1(-2.0 * n * kappa * delta) / -np.expm1(-2.0 * n * kappa * Delta)
    )
    return np.concatenate(([kappa * delta / Delta], kappa * ratio))


def _ilw_series(k: float, L: float, delta: float) -> FloatArray:
    """ILW coefficients up to the first index where they drop below roundoff"""
    n_max = 16
    terms = ilw_fourier_coefficients(k, L, delta, n_max)
    while terms[-1] > 1e-18 * terms[1] and n_max < 1 << 16:
        n_max *= 2
        terms = ilw_fourier_coefficients(k, L, delta, n_max)
    return terms


def ilw_fourier_profile(k: float, L: float, delta: float, x: FloatArray) -> FloatArray:
    """ILW wave evaluated from its Fourier series"""
    terms = _ilw_series(k, L, delta)
    n = np.arange(1, len(terms))
    return np.asarray(
        2.0 * np.cos(2.0 * math.pi / L * np.outer(x, n)) @ terms[1:], dtype=np.float64
    )


def _ilw(family: Family, k: float, L: float) -> WaveData:
    assert family.delta is not None
    delta = family.delta
    K, k_prime = complete_K(k), complementary(k)
    K_prime = complete_K(k_prime)
    Delta = K_prime * L / (2.0 * K)
    _require(Delta > delta, f"ilw: strip width Δ = {Delta:.6g} must exceed delta = {delta:g}")
    tau = 2.0 * K * delta / L
    sn_t, cn_t, dn_t = jacobi_elliptic(tau, k_prime)
    sn_a, cn_a, dn_a = jacobi_elliptic(2.0 * tau, k_prime)
    mean_shift = 4.0 * math.pi * delta * K / (L**2 * K_prime)
    c = (
        1.0 / delta
        - 2.0 * mean_shift
        - 4.0 * K / L * (jacobi_zeta(2.0 * tau, k_prime) + cn_a * dn_a / sn_a)
    )
    _require(c > 0, f"ilw: speed c(k) = {c:.6g} must be positive, increase k")
    zeta_t = jacobi_zeta(tau, k_prime)

    def shape(x: FloatArray) -> FloatArray:
        _, _, dn = jacobi_elliptic(2.0 * K / L * x, k)
        dn2 = dn**2
        return np.asarray(
            4.0 * K / L * (dn2 * sn_t * cn_t * dn_t / (1.0 - dn2 * sn_t**2) - zeta_t)
            - mean_shift,
            dtype=np.float64,
        )

    terms = _ilw_series(k, L, delta)
    A = float(2.0 * np.sum(terms[1:] ** 2))
    return WaveData(c, A, shape, {"Delta": Delta, "tau": tau})


def _schamel(_family: Family, k: float, L: float) -> WaveData:
    K = complete_K(k)
    mu = 2.0 * K / L
    s = math.sqrt(k**4 - k**2 + 1.0)
    beta = 1.0 - 2.0 * k**2 + s
    P = 20.0 * mu**2 / 3.0
    c = 16.0 * mu**2 * s
    A = P**2 * beta * mu**2 * (
        12.0 * k**2 * complementary(k) ** 2 - 16.0 * s * beta + 20.0 / 3.0 * beta**2
    )

    def shape(x: FloatArray) -> FloatArray:
        _, cn, _ = jacobi_elliptic(mu * x, k)
        return (P * (beta + 3.0 * k**2 * cn**2)) ** 2

    return WaveData(c, A, shape, {"mu": mu, "s": s, "beta": beta, "P": P})


def _regularized_denominator(family: Family, k: float, L: float) -> float:
    factor, minimal = (16.0, 2.0 * math.pi) if family.tag == "mbbm_dnsn" else (64.0, 4.0 * math.pi)
    if not L > minimal:
        raise PeriodTooSmallError(
            f"{family}: period L={L:.17g} must exceed the minimal period {minimal:.17g}"
        )
    m_tilde = L**2 - factor * complete_K(k) ** 2 * math.sqrt(k**4 - k**2 + 1.0)
    _require(
        m_tilde > 0,
        f"{family}: k={k:.17g} is not below k_L(L={L:g}) = {find_kL(family, L):.17g}",
    )
    return m_tilde


def _mbbm_dnsn(family: Family, k: float, L: float) -> WaveData:
    m_tilde = _regularized_denominator(family, k, L)
    c = L**2 / m_tilde
    base = _mkdv_dnsn(family, k, L)
    scale = math.sqrt(2.0 * c)

    def shape(x: FloatArray) -> FloatArray:
        return scale * base.shape(x)

    aux = {key: base.aux[key] for key in ("s", "beta2", "g", "r")}
    return WaveData(c, c * scale * base.A, shape, {**aux, "m_tilde": m_tilde})


def _reg_schamel(family: Family, k: float, L: float) -> WaveData:
    m_tilde = _regularized_denominator(family, k, L)
    c = L**2 / m_tilde
    base = _schamel(family, k, L)

    def shape(x: FloatArray) -> FloatArray:
        return c**2 * base.shape(x)

    return WaveData(c, c**3 * base.A, shape, {**base.aux, "m_tilde": m_tilde})


_BUILDERS: Mapping[str, Callable[[Family, float, float], WaveData]] = {
    "kdv_cnoidal": _kdv_cnoidal,
    "mkdv_dnoidal": _mkdv_dnoidal,
    "mkdv_dnsn": _mkdv_dnsn,
    "gardner_dn": _gardner(_mkdv_dnoidal),
    "gardner_dnsn": _gardner(_mkdv_dnsn),
    "ilw": _ilw,
    "schamel": _schamel,
    "mbbm_dnsn": _mbbm_dnsn,
    "reg_schamel": _reg_schamel,
}


def wave_data(family: Family, k: float, L: float) -> WaveData:
    """Closed-form speed, constant, profile function and metadata, admissibility checked"""
    check_modulus(k)
    _require(k > 0, f"{family}: k must lie in the open interval (0, 1), got k={k!r}")
    _require(math.isfinite(L) and L > 0, f"{family}: period must be positive, got L={L!r}")
    data = _BUILDERS[family.tag](family, k, L)
    if family.regularized:
        _require(data.c > 1, f"{family}: speed c={data.c:.6g} must exceed 1")
    else:
        gamma = family.symbol.gamma
        _require(data.c > -gamma, f"{family}: speed c={data.c:.6g} must exceed -γ = {-gamma:g}")
    return data


def wave_constants(family: Family, k: float, L: float) -> tuple[float, float]:
    """Returns (c(k), A(k)) for the wave of modulus @k and period @L"""
    data = wave_data(family, k, L)
    return data.c, data.A


def construct(family: Family, k: float, L: float, N: int = 256) -> WaveProfile:
    """Samples the closed-form wave of modulus @k and period @L on @N grid points"""
    if N < MIN_GRID or N & (N - 1):
        raise AdmissibilityError(f"grid size must be a power of two >= {MIN_GRID}, got N={N}")
    data = wave_data(family, k, L)
    samples = data.shape(fourier.grid(N, L))
    if family.nonlinearity.kind == "three_halves" and np.any(samples < 0):
        raise AdmissibilityError(
            f"{family}: k={k:g} L={L:g} gives negative samples, min = {np.min(samples):.3g}"
        )
    log().debug("constructed %s k=%.17g L=%.17g c=%.17g A=%.17g", family, k, L, data.c, data.A)
    return WaveProfile(family, k, L, data.c, data.A, samples, data.aux)


def profile_equation(profile: WaveProfile, symbol: None | SymbolSpec = None) -> FloatArray:
    """Pointwise left hand side of the profile equation"""
    family, phi = profile.family, profile.samples
    operator = symbol or family.symbol
    m_phi = operator.apply(phi, profile.L)
    nonlinear = family.nonlinearity.f(phi)
    if family.regularized:
        return profile.c * m_phi + (profile.c - 1.0) * phi - nonlinear + profile.A
    return m_phi + profile.c * phi - nonlinear + profile.A


def residual(profile: WaveProfile, symbol: None | SymbolSpec = None) -> float:
    """Sup-norm of the profile equation evaluated on the samples"""
    return float(np.max(np.abs(profile_equation(profile, symbol))))


def gardner_residual(profile: WaveProfile) -> float:
    """Sup-norm of ψ'' − cψ + (a/2)ψ² + (b/3)ψ³ − A for a Gardner profile ψ"""
    family = profile.family
    if family.tag not in GARDNER or family.a is None or family.b is None:
        raise UnsupportedCaseError(f"not a Gardner profile: {family}")
    psi = profile.samples
    return float(
        np.max(
            np.abs(
                profile.derivative(2)
                - profile.c * psi
                + family.a / 2.0 * psi**2
                + family.b / 3.0 * psi**3
                - profile.A
            )
        )
    )


def find_kL(family: Family, L: float) -> float:
    """Returns k_L, the modulus where the speed of a regularized family becomes singular:
    the root of L² = 16·K²(k)·√(k⁴ − k² + 1) (mBBM) resp. 64·K²(k)·√(k⁴ − k² + 1)
    (regularized Schamel)"""
    if family.tag not in REGULARIZED:
        raise UnsupportedCaseError(f"k_L is only defined for regularized families, not {family}")
    factor, minimal = (16.0, 2.0 * math.pi) if family.tag == "mbbm_dnsn" else (64.0, 4.0 * math.pi)
    if not L > minimal:
        raise PeriodTooSmallError(
            f"{family}: no k_L for L={L:.17g}, the period must exceed {minimal:.17g}"
        )

    def denominator(k: float) -> float:
        return float(L**2 - factor * complete_K(k) ** 2 * math.sqrt(k**4 - k**2 + 1.0))

    k_max = float(np.nextafter(1.0, 0.0))
    if denominator(k_max) > 0:
        log().warning("k_L(L=%g) of %s is not representable below 1, using %r", L, family, k_max)
        return k_max
    root = float(optimize.bisect(denominator, 0.0, k_max, xtol=1e-12, rtol=4 * np.finfo(float).eps))
    log().debug("k_L(L=%g) of %s = %.17g", L, family, root)
    return root


class FirstIntegralSpec(BaseModel):
    """First integral (φ')² = G(φ) of the profile equation, with
        G(φ) = cφ² − 2F(φ) + 2Aφ + B                   gKdV form
        G(φ) = ((c − 1)φ² − 2F(φ) + 2Aφ + B)/c         regularized form
    (local dispersion M = −∂² only)"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    nonlinearity: Nonlinearity
    c: float
    A: float
    B: float
    regularized: bool = False

    def G(self, phi: FloatArray | float) -> FloatArray:
        """Right hand side of (φ')² = G(φ)"""
        values = np.asarray(phi, dtype=np.float64)
        linear = self.c - 1.0 if self.regularized else self.c
        result = (
            linear * values**2
            - 2.0 * self.nonlinearity.primitive(values)
            + 2.0 * self.A * values
            + self.B
        )
        return result / self.c if self.regularized else result

    def dG(self, phi: FloatArray | float) -> FloatArray:
        """G'(φ) = 2φ''"""
        values = np.asarray(phi, dtype=np.float64)
        linear = self.c - 1.0 if self.regularized else self.c
        result = 2.0 * (linear * values - self.nonlinearity.f(values) + self.A)
        return result / self.c if self.regularized else result


def first_integral(profile: WaveProfile) -> FirstIntegralSpec:
    """First integral of a profile with local dispersion, B recovered at x=0 (φ'(0) = 0)"""
    if profile.family.symbol.kind != "neg_second_derivative":
        raise UnsupportedCaseError(f"{profile.family} has no local first integral")
    spec = FirstIntegralSpec(
        nonlinearity=profile.family.nonlinearity,
        c=profile.c,
        A=profile.A,
        B=0.0,
        regularized=profile.family.regularized,
    )
    scale = profile.c if profile.family.regularized else 1.0
    B = -float(spec.G(profile.samples[0])) * scale
    return spec.model_copy(update={"B": B})


def orbit_roots(spec: FirstIntegralSpec, profile: WaveProfile) -> tuple[float, float]:
    """Roots of G bounding the orbit of @profile, Newton-polished from min/max samples"""

    def polish(guess: float) -> float:
        try:
            return float(
                optimize.newton(
                    lambda p: float(spec.G(p)),
                    guess,
                    fprime=lambda p: float(spec.dG(p)),
                    tol=1e-14,
                    maxiter=50,
                    disp=False,
                )
            )
        except (RuntimeError, ZeroDivisionError):
            return guess

    return polish(float(np.min(profile.samples))), polish(float(np.max(profile.samples)))


def _check_orbit(spec: FirstIntegralSpec, root_lo: float, root_hi: float) -> None:
    if not root_hi > root_lo:
        raise DegenerateOrbitError(f"empty root interval [{root_lo}, {root_hi}]")
    slope_lo, slope_hi = float(spec.dG(root_lo)), float(spec.dG(root_hi))
    scale = max(abs(slope_lo), abs(slope_hi))
    if scale == 0 or slope_lo < 1e-8 * scale or -slope_hi < 1e-8 * scale:
        raise DegenerateOrbitError(
            f"G has a non-simple root at the orbit boundary"
            f" (G'({root_lo:.6g})={slope_lo:.3g}, G'({root_hi:.6g})={slope_hi:.3g})"
        )
    if not float(spec.G(0.5 * (root_lo + root_hi))) > 0:
        raise DegenerateOrbitError("G is not positive inside the root interval")


def quadrature_period(spec: FirstIntegralSpec, root_lo: float, root_hi: float) -> float:
    """Period 2∫ dφ/√G(φ) over [root_lo, root_hi], computed after the substitution
    φ = m − h·cos θ which removes the inverse square root singularities"""
    _check_orbit(spec, root_lo, root_hi)
    middle, half = 0.5 * (root_lo + root_hi), 0.5 * (root_hi - root_lo)

    def integrand(theta: float) -> float:
        reduced = float(spec.G(middle - half * math.cos(theta))) / (half * math.sin(theta)) ** 2
        return 1.0 / math.sqrt(reduced)

    value, error = integrate.quad(integrand, 0.0, math.pi, epsabs=0.0, epsrel=1e-12, limit=200)
    log().debug("quadrature period %.17g (error estimate %.3g)", 2 * value, 2 * error)
    return 2.0 * float(value)


def quadrature_profile(
    spec: FirstIntegralSpec, root_lo: float, root_hi: float, N: int
) -> FloatArray:
    """Profile samples on N points of one period, integrating φ'' = G'(φ)/2 from the
    upper root with φ'(0) = 0"""
    period = quadrature_period(spec, root_lo, root_hi)
    scale = max(abs(root_lo), abs(root_hi))
    solution = integrate.solve_ivp(
        lambda _x, y: [y[1], 0.5 * float(spec.dG(y[0]))],
        (0.0, period),
        [root_hi, 0.0],
        method="DOP853",
        t_eval=fourier.grid(N, period),
        rtol=1e-12,
        atol=1e-14 * scale,
    )
    return np.asarray(solution.y[0], dtype=np.float64)
