#!/usr/bin/env python3

"""CSV / JSON writers and rich console summaries

Every CSV carries a header row, floats are written with 17 significant digits,
booleans as true/false and missing values as empty cells.

Copyright (C) 2024 Checkmk GmbH - License: GNU General Public License v2
This file is part of Checkmk (https://checkmk.com). It is subject to the terms and
conditions defined in the file COPYING, which is part of this source code package.
"""

# pylint: disable=invalid-name

import csv
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import NamedTuple, TextIO

from rich.table import Table

from periwave.evolution import EvolutionTrace
from periwave.families import WaveProfile
from periwave.hypotheses import HypothesisReport
from periwave.spectral import SpectrumReport
from periwave.tables import ReproducedValue
from periwave.utils import format_float

Cell = None | str | float | int | bool

PROFILE_HEADER = ("x", "phi")
THETA_HEADER = ("family", "k", "L", "theta")
HYPOTHESIS_HEADER = (
    "family",
    "k",
    "L",
    "c",
    "A",
    "dc_dk",
    "dA_dk",
    "Q",
    "V",
    "Phi",
    "Mk",
    "Psi",
    "theta",
    "n_neg",
    "zero_simple",
    "H0",
    "H1",
    "H2",
    "H3",
    "H4",
)
TRACE_HEADER = ("t", "rho", "drift_E", "drift_Q", "drift_V")
REPRODUCE_HEADER = (
    "table",
    "k",
    "L",
    "quantity",
    "computed",
    "expected",
    "rel_error",
    "passed",
    "required",
)


def log() -> logging.Logger:
    """Logger for this module"""
    return logging.getLogger("trickkiste.periwave.output")


class ThetaRow(NamedTuple):
    """One θ value of a sweep, theta is None where θ could not be computed"""

    family: str
    k: float
    L: float
    theta: None | float


def _cell(value: Cell) -> str:
    return value if isinstance(value, str) else format_float(value)


def write_rows(stream: TextIO, header: Sequence[str], rows: Iterable[Sequence[Cell]]) -> None:
    """Writes @header and @rows as CSV to @stream"""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(value) for value in row])


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Cell]]) -> Path:
    """Writes @header and @rows to the CSV file @path"""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as stream:
        write_rows(stream, header, rows)
    log().debug("wrote %s", path)
    return path


def profile_rows(profile: WaveProfile) -> list[tuple[float, float]]:
    """(x, φ(x)) per grid point"""
    return list(zip(profile.x.tolist(), profile.samples.tolist()))


def write_profile(profile: WaveProfile, stem: Path) -> tuple[Path, Path]:
    """Writes @profile to <stem>.json and <stem>.csv"""
    json_path, csv_path = stem.with_suffix(".json"), stem.with_suffix(".csv")
    json_path.parent.mkdir(parents=True, exist_ok=True)
    json_path.write_text(profile.to_json(), encoding="utf-8")
    write_csv(csv_path, PROFILE_HEADER, profile_rows(profile))
    return json_path, csv_path


def write_spectrum(report: SpectrumReport, path: Path) -> Path:
    """Writes @report as JSON"""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
    return path


def hypothesis_rows(reports: Iterable[HypothesisReport]) -> list[tuple[Cell, ...]]:
    """CSV rows of @reports, sorted by k"""
    return [
        (
            report.family,
            report.k,
            report.L,
            report.c,
            report.A,
            report.dc_dk,
            report.dA_dk,
            report.Q,
            report.V,
            report.Phi,
            report.Mk,
            report.Psi,
            report.theta,
            report.n_negative,
            report.zero_simple,
            report.H0,
            report.H1,
            report.H2,
            report.H3,
            report.H4,
        )
        for report in sorted(reports, key=lambda report: report.k)
    ]


def trace_rows(trace: EvolutionTrace) -> list[tuple[float, ...]]:
    """CSV rows of @trace"""
    return [tuple(row) for row in trace.rows()]


def reproduce_rows(rows: Iterable[ReproducedValue]) -> list[tuple[Cell, ...]]:
    """CSV rows of a reproduce run"""
    return [
        (
            row.table,
            row.k,
            row.L,
            row.quantity,
            row.computed,
            row.expected,
            row.rel_error,
            row.passed,
            row.required,
        )
        for row in rows
    ]


def _short(value: None | float | int | bool) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "[green]yes[/]" if value else "[red]no[/]"
    if isinstance(value, int):
        return str(value)
    return f"{value:.6g}"


def spectrum_table(report: SpectrumReport) -> Table:
    """Lowest eigenvalues with their classification"""
    table = Table(title=f"spectrum (N_t={report.N_t}, tol_zero={report.tol_zero:.3g})")
    table.add_column("#", justify="right")
    table.add_column("eigenvalue", justify="right")
    table.add_column("class")
    for index, value in enumerate(report.eigenvalues):
        kind = "zero" if abs(value) <= report.tol_zero else "negative" if value < 0 else ""
        table.add_row(str(index), f"{value:.10g}", kind)
    table.caption = (
        f"negative: {report.n_negative}, simple zero: {_short(report.h2_holds)},"
        f" kernel alignment: {report.kernel_alignment:.6f}"
    )
    return table


def theta_table(rows: Iterable[ThetaRow]) -> Table:
    """θ per (k, L)"""
    table = Table(title="θ")
    for name in THETA_HEADER:
        table.add_column(name, justify="left" if name == "family" else "right")
    for row in rows:
        table.add_row(row.family, f"{row.k:g}", f"{row.L:g}", _short(row.theta))
    return table


def hypothesis_table(reports: Sequence[HypothesisReport]) -> Table:
    """Flags and the decisive numbers of a verify sweep"""
    prefix = "P" if reports and reports[0].regularized else "H"
    table = Table(title=reports[0].family if reports else "verify")
    for name in ("k", "L", "c", "Phi", "Psi", "theta", "n_neg"):
        table.add_column(name, justify="right")
    for index in range(5):
        table.add_column(f"{prefix}{index}", justify="center")
    for report in reports:
        table.add_row(
            f"{report.k:g}",
            f"{report.L:g}",
            _short(report.c),
            _short(report.Phi),
            _short(report.Psi),
            _short(report.theta),
            _short(report.n_negative),
            *(_short(flag) for flag in report.flags.values()),
        )
    return table


def trace_table(trace: EvolutionTrace, policy_factor: float) -> Table:
    """Summary of an orbital experiment"""
    table = Table(title="orbital experiment")
    table.add_column("quantity")
    table.add_column("value", justify="right")
    table.add_row("samples", str(len(trace)))
    table.add_row("ρ(0)", f"{trace.initial_rho:.6g}")
    table.add_row("sup ρ", f"{trace.sup_rho:.6g}")
    table.add_row("max drift", f"{trace.max_drift:.3g}")
    table.add_row(f"sup ρ ≤ {policy_factor:g}·ρ(0)", _short(stable(trace, policy_factor)))
    return table


def reproduce_table(rows: Sequence[ReproducedValue]) -> Table:
    """Computed against published values"""
    table = Table(title=rows[0].table if rows else "reproduce")
    for name in ("k", "L", "quantity", "computed", "expected", "rel. error", "ok"):
        table.add_column(name, justify="left" if name == "quantity" else "right")
    for row in rows:
        table.add_row(
            f"{row.k:g}",
            f"{row.L:g}",
            row.quantity if row.required else f"{row.quantity} (not required)",
            _short(row.computed),
            f"{row.expected:.10g}",
            "-" if row.rel_error is None else f"{row.rel_error:.2e}",
            _short(row.passed),
        )
    return table


def stable(trace: EvolutionTrace, policy_factor: float) -> bool:
    """Stability-policy verdict: sup ρ stays within @policy_factor times the initial ρ.
    An unperturbed run (ρ(0) = 0) passes while ρ stays below 1e-6."""
    if trace.initial_rho == 0.0:
        return trace.sup_rho < 1e-6
    return trace.sup_rho <= policy_factor * trace.initial_rho
