#!/usr/bin/env python3

"""Band-edge eigenvalues of the Lamé operator
    −d²/dy² + n(n+1)·k²·sn²(y, k)
on 2K(k)-periodic functions.

For integer n the periodic eigenfunctions are Lamé polynomials, i.e. one of
    P(t), sn·cn·P(t)            (n even)
    dn·P(t), sn·cn·dn·P(t)      (n odd)
with t = sn² and P a polynomial. On the monomial basis t^j the operator is tridiagonal
and terminates at the degree fixed by n, so the eigenvalues are those of small
matrices.

Copyright (C) 2024 Checkmk GmbH - License: GNU General Public License v2
This file is part of Checkmk (https://checkmk.com). It is subject to the terms and
conditions defined in the file COPYING, which is part of this source code package.
"""

from collections.abc import Callable
from typing import Literal

import numpy as np
import numpy.typing as npt
from scipy import linalg

from periwave.elliptic import check_modulus

FloatArray = npt.NDArray[np.float64]
LameType = Literal["1", "sc", "d", "scd"]

# (coefficient of t^(j-1), t^j, t^(j+1)) of the image of the j-th basis function,
# given j, k² and N = n(n+1)
_Stencil = Callable[[int, float, int], tuple[float, float, float]]

_STENCILS: dict[LameType, _Stencil] = {
    "1": lambda j, k2, N: (
        -2.0 * j * (2 * j - 1),
        4.0 * j * j * (1.0 + k2),
        k2 * (N - 2 * j * (2 * j + 1)),
    ),
    "sc": lambda j, k2, N: (
        -2.0 * j * (2 * j + 1),
        k2 * (2 * j + 1) ** 2 + 4.0 * (j + 1) ** 2,
        k2 * (N - (2 * j + 2) * (2 * j + 3)),
    ),
    "d": lambda j, k2, N: (
        -2.0 * j * (2 * j - 1),
        k2 * (2 * j + 1) ** 2 + 4.0 * j * j,
        k2 * (N - (2 * j + 1) * (2 * j + 2)),
    ),
    "scd": lambda j, k2, N: (
        -2.0 * j * (2 * j + 1),
        4.0 * (1.0 + k2) * (j + 1) ** 2,
        k2 * (N - (2 * j + 3) * (2 * j + 4)),
    ),
}


def periodic_types(n: int) -> dict[LameType, int]:
    """Maps the 2K-periodic Lamé types for @n to the degree of their polynomial part
    >>> periodic_types(3)
    {'d': 1, 'scd': 0}
    >>> periodic_types(2)
    {'1': 1, 'sc': 0}
    """
    if n < 1:
        raise ValueError(f"Lamé degree must be a positive integer, got {n}")
    if n % 2 == 0:
        return {"1": n // 2, "sc": n // 2 - 1}
    types: dict[LameType, int] = {"d": (n - 1) // 2}
    if n >= 3:
        types["scd"] = (n - 3) // 2
    return types


def lame_matrix(n: int, k: float, kind: LameType) -> FloatArray:
    """Matrix of the Lamé operator on polynomials of type @kind in t = sn²"""
    check_modulus(k)
    degree = periodic_types(n)[kind]
    stencil, k2, big_n = _STENCILS[kind], k * k, n * (n + 1)
    matrix = np.zeros((degree + 1, degree + 1))
    for j in range(degree + 1):
        lower, diagonal, upper = stencil(j, k2, big_n)
        if j > 0:
            matrix[j - 1, j] = lower
        matrix[j, j] = diagonal
        if j < degree:
            matrix[j + 1, j] = upper
    return matrix


def lame_periodic_eigenvalues(n: int, k: float) -> FloatArray:
    """All 2K-periodic eigenvalues h of the Lamé operator, ascending"""
    values = [
        linalg.eigvals(lame_matrix(n, k, kind)).real for kind in periodic_types(n)
    ]
    return np.sort(np.concatenate(values))
