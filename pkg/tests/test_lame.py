#!/usr/bin/env python3

"""Lamé band edges against their explicit radicals"""

import math

import numpy as np
import pytest

from periwave.lame import lame_matrix, lame_periodic_eigenvalues, periodic_types


@pytest.mark.parametrize("k", (0.0, 0.2, 0.5, 0.8, 0.99))
def test_degree_two(k: float) -> None:
    k2 = k * k
    root = 2.0 * math.sqrt(1.0 - k2 + k2 * k2)
    expected = sorted((2.0 * (1.0 + k2) - root, 4.0 + k2, 2.0 * (1.0 + k2) + root))
    np.testing.assert_allclose(lame_periodic_eigenvalues(2, k), expected, atol=1e-13)


@pytest.mark.parametrize("k", (0.0, 0.3, 0.5, 0.9))
def test_degree_three(k: float) -> None:
    k2 = k * k
    root = 2.0 * math.sqrt(4.0 * k2 * k2 - k2 + 1.0)
    expected = sorted((2.0 + 5.0 * k2 - root, 4.0 * (1.0 + k2), 2.0 + 5.0 * k2 + root))
    np.testing.assert_allclose(lame_periodic_eigenvalues(3, k), expected, atol=1e-12)


def test_degree_five_has_five_periodic_edges() -> None:
    values = lame_periodic_eigenvalues(5, 0.5)
    assert len(values) == 5
    assert np.all(np.diff(values) >= 0)


def test_free_operator_limit() -> None:
    # k = 0: eigenvalues of −d² on π-periodic functions are (2j)²
    np.testing.assert_allclose(lame_periodic_eigenvalues(5, 0.0), [0, 4, 4, 16, 16], atol=1e-12)


def test_matrix_shape_and_degree_check() -> None:
    assert lame_matrix(4, 0.3, "1").shape == (3, 3)
    assert periodic_types(1) == {"d": 0}
    with pytest.raises(ValueError):
        periodic_types(0)
