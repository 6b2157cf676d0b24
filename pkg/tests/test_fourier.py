#!/usr/bin/env python3

"""Pseudospectral helpers"""

import math

import numpy as np
import pytest

from periwave import fourier

L = 5.0
N = 64


def _wave(x: np.ndarray) -> np.ndarray:
    return np.cos(2 * math.pi * 3 * x / L) + 0.5 * np.sin(2 * math.pi * 5 * x / L)


def test_grid_and_modes() -> None:
    assert fourier.grid(4, 2.0).tolist() == [0.0, 0.5, 1.0, 1.5]
    assert fourier.modes(4).tolist() == [0.0, 1.0, -2.0, -1.0]


def test_derivatives_are_exact_for_trigonometric_polynomials() -> None:
    x = fourier.grid(N, L)
    u = _wave(x)
    k3, k5 = 2 * math.pi * 3 / L, 2 * math.pi * 5 / L
    first = -k3 * np.sin(k3 * x) + 0.5 * k5 * np.cos(k5 * x)
    second = -(k3**2) * np.cos(k3 * x) - 0.5 * k5**2 * np.sin(k5 * x)
    np.testing.assert_allclose(fourier.derivative(u, L), first, atol=1e-11)
    np.testing.assert_allclose(fourier.derivative(u, L, 2), second, atol=1e-10)


def test_shift_and_interpolant() -> None:
    x = fourier.grid(N, L)
    u = _wave(x)
    np.testing.assert_allclose(fourier.shift(u, L, 0.37), _wave(x + 0.37), atol=1e-12)
    value, slope, _ = fourier.interpolant(u, L)(1.234)
    assert value == pytest.approx(float(_wave(np.array([1.234]))[0]), abs=1e-12)
    k3, k5 = 2 * math.pi * 3 / L, 2 * math.pi * 5 / L
    assert slope == pytest.approx(-k3 * math.sin(k3 * 1.234) + 0.5 * k5 * math.cos(k5 * 1.234))


def test_coefficients_roundtrip_and_trapezoid() -> None:
    u = _wave(fourier.grid(N, L)) + 2.0
    np.testing.assert_allclose(fourier.samples(fourier.coefficients(u)), u, atol=1e-13)
    assert fourier.trapezoid(u, L) == pytest.approx(2.0 * L, rel=1e-13)


def test_dealias_mask() -> None:
    mask = fourier.dealias_mask(12)
    assert mask.tolist() == [1, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1, 1]
