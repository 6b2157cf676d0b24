#!/usr/bin/env python3

"""CSV formatting and the stability verdict"""

import io

from periwave.evolution import EvolutionTrace
from periwave.output import THETA_HEADER, ThetaRow, stable, write_rows


def _trace(*rhos: float) -> EvolutionTrace:
    trace = EvolutionTrace()
    for index, rho in enumerate(rhos):
        trace.record(float(index), rho, 0.0, (0.0, 0.0, 0.0))
    return trace


def test_write_rows() -> None:
    stream = io.StringIO()
    write_rows(
        stream,
        THETA_HEADER,
        [ThetaRow("mbbm_dnsn", 0.4, 20.0, -7976.125), ThetaRow("mbbm_dnsn", 0.4, 1e5, None)],
    )
    assert stream.getvalue().splitlines() == [
        "family,k,L,theta",
        "mbbm_dnsn,0.40000000000000002,20,-7976.125",
        "mbbm_dnsn,0.40000000000000002,100000,",
    ]


def test_stable() -> None:
    assert stable(_trace(0.0, 1e-9, 5e-7), 10.0)
    assert not stable(_trace(0.0, 2e-6), 10.0)
    assert stable(_trace(1e-3, 5e-3, 9.9e-3), 10.0)
    assert not stable(_trace(1e-3, 1.1e-2), 10.0)
    assert stable(_trace(1e-3, 1.9e-3), 2.0)
