#!/usr/bin/env python3

"""Command configurations

Every command reads a JSON document (optional) merged with explicitly given flags and
validates the result once against its model. Unknown keys are rejected, the schema is
what `periwave schema <command>` prints.

Copyright (C) 2024 Checkmk GmbH - License: GNU General Public License v2
This file is part of Checkmk (https://checkmk.com). It is subject to the terms and
conditions defined in the file COPYING, which is part of this source code package.
"""

# pylint: disable=invalid-name

import json
import logging
from collections.abc import Mapping
from pathlib import Path
from typing import Any, Literal, TypeVar

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from periwave.evolution import EvolutionConfig, Perturbation
from periwave.families import MIN_GRID, Family, FamilyTag, WaveProfile, construct
from periwave.utils import AdmissibilityError

TableId = Literal["mkdv_theta", "mbbm_theta_table1", "mbbm_phi_psi_table2"]
ModelT = TypeVar("ModelT", bound=BaseModel)


def log() -> logging.Logger:
    """Logger for this module"""
    return logging.getLogger("trickkiste.periwave.config")


class PedanticBaseModel(BaseModel):
    """Rejects unknown keys"""

    model_config = ConfigDict(extra="forbid")


class FamilyConfig(PedanticBaseModel):
    """Selects a wave family, Gardner families need a and b, ILW needs delta"""

    family: None | FamilyTag = None
    a: None | float = None
    b: None | float = None
    delta: None | float = None

    def to_family(self) -> Family:
        """The validated Family"""
        if self.family is None:
            raise AdmissibilityError("no wave family given")
        return Family(tag=self.family, a=self.a, b=self.b, delta=self.delta)


class Numerics(PedanticBaseModel):
    """Resolution and tolerances of the spectral and hypothesis checks"""

    N: int = 256
    N_t: int = 128
    n_eigs: int = 6
    tol_zero: None | float = None
    h: float = 1e-4
    residual_tol: float = 1e-8
    theta_rtol: float = 1e-10
    pf2_window: int = 16

    @model_validator(mode="after")
    def check_resolution(self) -> "Numerics":
        """N a power of two, N_t clipped to N/2"""
        if self.N < MIN_GRID or self.N & (self.N - 1):
            raise AdmissibilityError(f"N must be a power of two >= {MIN_GRID}, got {self.N}")
        if self.N_t > self.N // 2:
            log().debug("clip N_t=%d to N/2=%d", self.N_t, self.N // 2)
            self.N_t = self.N // 2
        if not self.h > 0 or self.n_eigs < 1 or self.pf2_window < 1:
            raise AdmissibilityError("h, n_eigs and pf2_window must be positive")
        return self


class ProfileSource(FamilyConfig):
    """Either a family with (k, L) or a previously written profile document"""

    k: None | float = None
    L: None | float = None
    N: int = 256
    profile: None | Path = None

    @model_validator(mode="after")
    def check_source(self) -> "ProfileSource":
        """Exactly one of profile and (family, k, L)"""
        if self.profile is None and (self.family is None or self.k is None or self.L is None):
            raise AdmissibilityError("need either a profile file or family, k and L")
        if self.profile is not None and self.family is not None:
            raise AdmissibilityError("give either a profile file or a family, not both")
        return self

    def load_profile(self) -> WaveProfile:
        """Reads or constructs the profile"""
        if self.profile is not None:
            return WaveProfile.from_json(self.profile.read_text())
        assert self.k is not None and self.L is not None
        return construct(self.to_family(), self.k, self.L, self.N)


class ConstructConfig(FamilyConfig):
    """construct: sample one wave and write it as JSON and CSV"""

    k: float
    L: float
    N: int = 256
    output: None | Path = None


class SpectrumConfig(ProfileSource):
    """spectrum: low eigenvalues of the linearized operator"""

    N_t: int = 128
    n_eigs: int = 6
    tol_zero: None | float = None
    output: None | Path = None


class ThetaConfig(FamilyConfig):
    """theta: θ over a (k, L) grid"""

    ks: list[float]
    Ls: list[float]
    N: int = 256
    rtol: float = 1e-10
    output: None | Path = None


class VerifyConfig(FamilyConfig, Numerics):
    """verify: hypothesis reports over a k-grid at fixed L"""

    ks: list[float] = []
    L: float
    output: None | Path = None


class EvolveConfig(ProfileSource):
    """evolve: perturbation experiment, T counted in periods L/c when `periods` is given"""

    perturbation: Perturbation
    evolution: EvolutionConfig = EvolutionConfig()
    periods: None | float = None
    policy_factor: float = 10.0
    output: None | Path = None


class ReproduceConfig(PedanticBaseModel):
    """reproduce: recompute one of the reference tables"""

    table: TableId
    stretch: bool = False
    N: int = 256
    output: None | Path = None


COMMAND_CONFIGS: Mapping[str, type[BaseModel]] = {
    "construct": ConstructConfig,
    "spectrum": SpectrumConfig,
    "theta": ThetaConfig,
    "verify": VerifyConfig,
    "evolve": EvolveConfig,
    "reproduce": ReproduceConfig,
}


def _merge(base: dict[str, Any], overrides: Mapping[str, Any]) -> dict[str, Any]:
    """Recursively merges @overrides into @base, None values are skipped"""
    result = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, Mapping) and isinstance(result.get(key), Mapping):
            result[key] = _merge(dict(result[key]), value)
        elif isinstance(value, Mapping):
            result[key] = _merge({}, value)
        else:
            result[key] = value
    return result


def load_config(
    model: type[ModelT], path: None | Path = None, overrides: None | Mapping[str, Any] = None
) -> ModelT:
    """Validates the document at @path (if any) merged with @overrides against @model"""
    document: dict[str, Any] = {}
    if path is not None:
        try:
            document = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise AdmissibilityError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(document, dict):
            raise AdmissibilityError(f"config {path} must hold a JSON object")
    merged = _merge(document, overrides or {})
    log().debug("%s from %s", model.__name__, merged)
    try:
        return model.model_validate(merged)
    except ValidationError as exc:
        raise AdmissibilityError(f"invalid config: {exc}") from exc


def schema(command: str) -> str:
    """Published JSON schema of a command's config"""
    if command not in COMMAND_CONFIGS:
        raise AdmissibilityError(
            f"unknown command {command!r}, choose one of {', '.join(COMMAND_CONFIGS)}"
        )
    return json.dumps(COMMAND_CONFIGS[command].model_json_schema(), indent=2, sort_keys=True)
