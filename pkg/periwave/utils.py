#!/usr/bin/env python3

"""
Common stuff shared among modules

Copyright (C) 2024 Checkmk GmbH - License: GNU General Public License v2
This file is part of Checkmk (https://checkmk.com). It is subject to the terms and
conditions defined in the file COPYING, which is part of this source code package.
"""

import logging
import os
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from contextlib import suppress
from typing import Any, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "PERIWAVE_THREADS"


class Fatal(RuntimeError):
    """Rien ne va plus - thrown if process cannot continue but still should terminate
    with a decent error message."""

    exit_code = 1


class AdmissibilityError(Fatal):
    """Parameters outside the region a wave family (or a command) is defined on"""

    exit_code = 2


class EllipticDomainError(AdmissibilityError):
    """Elliptic modulus outside [0, 1)"""


class SingularCaseError(EllipticDomainError):
    """Characteristic of a third kind integral hits a pole"""


class PeriodTooSmallError(AdmissibilityError):
    """Period does not exceed the minimal period of a regularized family"""


class UnsupportedCaseError(AdmissibilityError):
    """Family or branch which is deliberately not covered"""


class ToleranceFailure(Fatal):
    """A numerical verdict did not meet its declared tolerance"""

    exit_code = 3


class ResolutionError(ToleranceFailure):
    """Discretization too coarse for the requested operation"""


class DegenerateOrbitError(ToleranceFailure):
    """First integral without two simple roots bounding the orbit"""


class DegeneratePhaseError(ToleranceFailure):
    """Profile is not at an extremum at x=0"""


class IntegratorAbort(Fatal):
    """Time integration had to stop - carries whatever has been recorded so far"""

    exit_code = 4

    def __init__(self, message: str, trace: Any = None) -> None:
        super().__init__(message)
        self.trace = trace


def log() -> logging.Logger:
    """Logger for this module"""
    return logging.getLogger("trickkiste.periwave.utils")


def value_from(raw_str: str) -> str | float | int:
    """Returns an int, a float or the raw input in this order
    >>> value_from("12")
    12
    >>> value_from("1e-3")
    0.001
    >>> value_from("kdv_cnoidal")
    'kdv_cnoidal'
    """
    with suppress(ValueError):
        return int(raw_str)
    with suppress(ValueError):
        return float(raw_str)
    return raw_str


def thread_count() -> int:
    """Returns the number of worker threads sweeps may use, honoring PERIWAVE_THREADS"""
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    value = value_from(raw.strip())
    if not isinstance(value, int) or value < 1:
        raise AdmissibilityError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


def parallel_map(function: Callable[[T], R], items: Iterable[T]) -> Sequence[R]:
    """Maps @function over @items using a thread pool, keeping the input order"""
    work = list(items)
    if len(work) <= 1:
        return [function(item) for item in work]
    workers = min(thread_count(), len(work))
    log().debug("run %d work items on %d threads", len(work), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, work))


def format_float(value: None | float | int | bool) -> str:
    """Formats a value for CSV output
    >>> format_float(0.1)
    '0.10000000000000001'
    >>> format_float(True)
    'true'
    >>> format_float(None)
    ''
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")
