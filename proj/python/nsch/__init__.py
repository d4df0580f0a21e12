"""Pseudo-spectral Navier-Stokes-Cahn-Hilliard-Keller-Segel simulator."""

from ._core import (
    ConfigError,
    DataError,
    DivergenceError,
    DomainError,
    IoError,
    NschError,
    ParameterError,
    RegPotential,
    RunConfig,
    StabilityError,
    check_potential,
    compare_forms,
    diagnostics_columns,
    load_config,
    parse_config,
    read_snapshot,
    run,
    twin_run,
    young_gap,
)

__all__ = [
    "ConfigError",
    "DataError",
    "DivergenceError",
    "DomainError",
    "IoError",
    "NschError",
    "ParameterError",
    "RegPotential",
    "RunConfig",
    "StabilityError",
    "check_potential",
    "compare_forms",
    "diagnostics_columns",
    "load_config",
    "parse_config",
    "read_snapshot",
    "run",
    "twin_run",
    "young_gap",
]
