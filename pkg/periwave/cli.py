#!/usr/bin/env python3

"""periwave - periodic traveling waves: construct, check hypotheses, evolve

Copyright (C) 2024 Checkmk GmbH - License: GNU General Public License v2
This file is part of Checkmk (https://checkmk.com). It is subject to the terms and
conditions defined in the file COPYING, which is part of this source code package.
"""

# pylint: disable=invalid-name

import logging
import sys
from argparse import ArgumentParser
from argparse import Namespace as Args
from collections.abc import Sequence
from pathlib import Path
from typing import Any, get_args

import rich
from trickkiste.logging_helper import apply_common_logging_cli_args, setup_logging

from periwave.config import (
    COMMAND_CONFIGS,
    ConstructConfig,
    EvolveConfig,
    ReproduceConfig,
    SpectrumConfig,
    ThetaConfig,
    TableId,
    VerifyConfig,
    load_config,
    schema,
)
from periwave.evolution import EvolutionConfig, orbital_experiment
from periwave.families import FamilyTag, construct, residual
from periwave.hypotheses import verify_sweep
from periwave.output import (
    HYPOTHESIS_HEADER,
    REPRODUCE_HEADER,
    THETA_HEADER,
    TRACE_HEADER,
    ThetaRow,
    hypothesis_rows,
    hypothesis_table,
    reproduce_rows,
    reproduce_table,
    spectrum_table,
    stable,
    theta_table,
    trace_rows,
    trace_table,
    write_csv,
    write_profile,
    write_spectrum,
)
from periwave.spectral import assemble, eigs, neves_theta
from periwave.tables import all_required_passed, reproduce
from periwave.utils import (
    AdmissibilityError,
    Fatal,
    IntegratorAbort,
    ToleranceFailure,
    parallel_map,
)
from periwave.version import __version__


def log() -> logging.Logger:
    """Logger for this module"""
    return logging.getLogger("trickkiste.periwave.cli")


def float_list(raw: str) -> list[float]:
    """Comma separated floats, empty string meaning an empty list
    >>> float_list("0.1, 0.2,0.3")
    [0.1, 0.2, 0.3]
    >>> float_list("")
    []
    """
    return [float(value) for value in raw.split(",") if value.strip()]


def parse_args(argv: None | Sequence[str] = None) -> Args:
    """Cool git like multi command argument parser"""
    parser = ArgumentParser(__doc__)
    apply_common_logging_cli_args(parser)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    parser.set_defaults(func=lambda *_: parser.print_usage())
    subparsers = parser.add_subparsers(help="available commands", metavar="CMD")

    def apply_family_args(subparser: ArgumentParser) -> None:
        subparser.add_argument(
            "--config", type=Path, help="JSON document, explicitly given flags override it"
        )
        subparser.add_argument("--family", choices=get_args(FamilyTag))
        subparser.add_argument("--a", type=float, help="Gardner quadratic coefficient")
        subparser.add_argument("--b", type=float, help="Gardner cubic coefficient (> 0)")
        subparser.add_argument("--delta", type=float, help="ILW depth parameter")
        subparser.add_argument("--N", type=int, help="number of grid points (power of two)")
        subparser.add_argument("--output", "-o", type=Path)

    def apply_wave_args(subparser: ArgumentParser, profile: bool) -> None:
        apply_family_args(subparser)
        subparser.add_argument("--k", type=float, help="elliptic modulus")
        subparser.add_argument("--L", type=float, help="period")
        if profile:
            subparser.add_argument(
                "--profile", type=Path, help="profile JSON written by `construct`"
            )

    parser_construct = subparsers.add_parser("construct")
    parser_construct.set_defaults(
        func=_fn_construct,
        help="Samples one wave and writes it as JSON and CSV",
    )
    apply_wave_args(parser_construct, profile=False)

    parser_spectrum = subparsers.add_parser("spectrum")
    parser_spectrum.set_defaults(
        func=_fn_spectrum,
        help="Lowest eigenvalues of the linearized operator",
    )
    apply_wave_args(parser_spectrum, profile=True)
    parser_spectrum.add_argument("--N-t", dest="N_t", type=int, help="Galerkin truncation")
    parser_spectrum.add_argument("--n-eigs", dest="n_eigs", type=int)
    parser_spectrum.add_argument("--tol-zero", dest="tol_zero", type=float)

    parser_theta = subparsers.add_parser("theta")
    parser_theta.set_defaults(
        func=_fn_theta,
        help="θ over a (k, L) grid",
    )
    apply_family_args(parser_theta)
    parser_theta.add_argument("--ks", type=float_list, help="comma separated moduli")
    parser_theta.add_argument("--Ls", type=float_list, help="comma separated periods")
    parser_theta.add_argument("--rtol", type=float)

    parser_verify = subparsers.add_parser("verify")
    parser_verify.set_defaults(
        func=_fn_verify,
        help="Checks all hypotheses over a k-grid at fixed L",
    )
    apply_family_args(parser_verify)
    parser_verify.add_argument("--ks", type=float_list, help="comma separated moduli")
    parser_verify.add_argument("--L", type=float, help="period")
    parser_verify.add_argument("--N-t", dest="N_t", type=int, help="Galerkin truncation")
    parser_verify.add_argument("--h", type=float, help="step of the k-derivatives")

    parser_evolve = subparsers.add_parser("evolve")
    parser_evolve.set_defaults(
        func=_fn_evolve,
        help="Evolves a perturbed wave and tracks its distance to the orbit",
    )
    apply_wave_args(parser_evolve, profile=True)
    parser_evolve.add_argument("--perturbation", choices=("mode_bump", "random"))
    parser_evolve.add_argument("--amplitude", type=float)
    parser_evolve.add_argument("--mode", type=int, help="Fourier mode of a mode_bump")
    parser_evolve.add_argument("--seed", type=int, help="seed of a random perturbation")
    parser_evolve.add_argument("--modes", type=int, help="modes of a random perturbation")
    parser_evolve.add_argument("--dt", type=float)
    parser_evolve.add_argument("--T", type=float, help="final time")
    parser_evolve.add_argument("--periods", type=float, help="final time in periods L/|c|")
    parser_evolve.add_argument(
        "--integrator", choices=get_args(EvolutionConfig.model_fields["integrator"].annotation)
    )
    parser_evolve.add_argument("--record-every", dest="record_every", type=int)
    parser_evolve.add_argument("--policy-factor", dest="policy_factor", type=float)

    parser_reproduce = subparsers.add_parser("reproduce")
    parser_reproduce.set_defaults(
        func=_fn_reproduce,
        help="Recomputes one of the published reference tables",
    )
    parser_reproduce.add_argument("table", nargs="?", choices=get_args(TableId))
    parser_reproduce.add_argument("--config", type=Path)
    parser_reproduce.add_argument(
        "--stretch", action="store_true", default=None, help="include the very large periods"
    )
    parser_reproduce.add_argument("--N", type=int)
    parser_reproduce.add_argument("--output", "-o", type=Path)

    parser_schema = subparsers.add_parser("schema")
    parser_schema.set_defaults(
        func=_fn_schema,
        help="Prints the JSON schema of a command's config",
    )
    parser_schema.add_argument("command", choices=list(COMMAND_CONFIGS))

    subparsers.help = f"[{' '.join(str(c) for c in subparsers.choices)}]"

    return parser.parse_args(argv)


def _overrides(args: Args, *names: str) -> dict[str, Any]:
    return {name: getattr(args, name, None) for name in names}


FAMILY_FLAGS = ("family", "a", "b", "delta", "N", "output")
WAVE_FLAGS = (*FAMILY_FLAGS, "k", "L")


def _fn_construct(args: Args) -> None:
    """Entry function for construct"""
    config = load_config(ConstructConfig, args.config, _overrides(args, *WAVE_FLAGS))
    family = config.to_family()
    profile = construct(family, config.k, config.L, config.N)
    stem = config.output or Path(f"{family.tag}_k{config.k:g}_L{config.L:g}")
    json_path, csv_path = write_profile(profile, stem)
    print(f"{profile}")
    print(f"residual: {residual(profile):.3e}")
    print(f"wrote {json_path} and {csv_path}")


def _fn_spectrum(args: Args) -> None:
    """Entry function for spectrum"""
    config = load_config(
        SpectrumConfig,
        args.config,
        _overrides(args, *WAVE_FLAGS, "profile", "N_t", "n_eigs", "tol_zero"),
    )
    profile = config.load_profile()
    operator = assemble(profile, N_t=min(config.N_t, profile.N // 2))
    report = eigs(operator, config.n_eigs, config.tol_zero)
    rich.print(spectrum_table(report))
    if config.output is not None:
        print(f"wrote {write_spectrum(report, config.output)}")


def _fn_theta(args: Args) -> None:
    """Entry function for theta"""
    config = load_config(
        ThetaConfig, args.config, _overrides(args, *FAMILY_FLAGS, "ks", "Ls", "rtol")
    )
    family = config.to_family()

    def compute(point: tuple[float, float]) -> ThetaRow:
        k, L = point
        try:
            theta: None | float = neves_theta(construct(family, k, L, config.N), rtol=config.rtol)
        except Fatal as exc:
            log().warning("θ(k=%g, L=%g) of %s: %s", k, L, family, exc)
            theta = None
        return ThetaRow(str(family), k, L, theta)

    rows = sorted(
        parallel_map(compute, [(k, L) for k in config.ks for L in config.Ls]),
        key=lambda row: (row.k, row.L),
    )
    rich.print(theta_table(rows))
    if config.output is not None:
        print(f"wrote {write_csv(config.output, THETA_HEADER, rows)}")


def _fn_verify(args: Args) -> None:
    """Entry function for verify"""
    config = load_config(
        VerifyConfig, args.config, _overrides(args, *FAMILY_FLAGS, "ks", "L", "N_t", "h")
    )
    reports = verify_sweep(config.to_family(), config.ks, config.L, config)
    rich.print(hypothesis_table(reports))
    if config.output is not None:
        print(f"wrote {write_csv(config.output, HYPOTHESIS_HEADER, hypothesis_rows(reports))}")
    failing = [report.k for report in reports if not report.all_hold]
    if failing:
        raise ToleranceFailure(f"hypotheses not confirmed for k in {failing}")


def _fn_evolve(args: Args) -> None:
    """Entry function for evolve"""
    perturbation = _overrides(args, "amplitude", "mode", "seed", "modes")
    perturbation["kind"] = args.perturbation or (None if args.config else "mode_bump")
    config = load_config(
        EvolveConfig,
        args.config,
        {
            **_overrides(args, *WAVE_FLAGS, "profile", "periods", "policy_factor"),
            "perturbation": perturbation,
            "evolution": _overrides(args, "dt", "T", "integrator", "record_every"),
        },
    )
    profile = config.load_profile()
    T = config.evolution.T
    if config.periods is not None:
        if profile.c == 0.0:
            raise AdmissibilityError("periods given but the wave does not move (c = 0)")
        T = config.periods * profile.L / abs(profile.c)
    evolution = EvolutionConfig.model_validate(
        {**config.evolution.model_dump(), "N": profile.N, "T": T}
    )
    try:
        trace = orbital_experiment(profile, config.perturbation, evolution)
    except IntegratorAbort as exc:
        if config.output is not None and exc.trace is not None:
            write_csv(config.output, TRACE_HEADER, trace_rows(exc.trace))
            log().warning("partial trace written to %s", config.output)
        raise
    rich.print(trace_table(trace, config.policy_factor))
    if config.output is not None:
        print(f"wrote {write_csv(config.output, TRACE_HEADER, trace_rows(trace))}")
    if not stable(trace, config.policy_factor):
        raise ToleranceFailure(
            f"sup ρ = {trace.sup_rho:.3g} exceeds {config.policy_factor:g}·ρ(0)"
            f" = {config.policy_factor * trace.initial_rho:.3g}"
        )


def _fn_reproduce(args: Args) -> None:
    """Entry function for reproduce"""
    config = load_config(
        ReproduceConfig, args.config, _overrides(args, "table", "stretch", "N", "output")
    )
    rows = reproduce(config.table, config.stretch, config.N)
    rich.print(reproduce_table(rows))
    if config.output is not None:
        print(f"wrote {write_csv(config.output, REPRODUCE_HEADER, reproduce_rows(rows))}")
    if not all_required_passed(rows):
        raise ToleranceFailure(f"{config.table}: required rows outside their tolerance")


def _fn_schema(args: Args) -> None:
    """Entry function for schema"""
    sys.stdout.write(schema(args.command) + "\n")


def main(argv: None | Sequence[str] = None) -> None:
    """Entry point for everything else"""
    try:
        args = parse_args(argv)
        setup_logging(
            logger=log(),
            level=args.log_level,
            show_time=False,
            show_name=False,
            show_funcname=False,
        )
        log().debug("Parsed args: %s", args)
        args.func(args)
    except Fatal as exc:
        print(exc, file=sys.stderr)
        raise SystemExit(exc.exit_code) from exc


if __name__ == "__main__":
    main()
