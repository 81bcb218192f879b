"""Time-periodic pulsatile flow of variable power-law fluids."""

from ._smartflow import (
    ConfigError,
    ConvergenceFailure,
    Error,
    ExponentField,
    RunConfig,
    StressModel,
    convergence,
    eoc,
    load_config,
    noneven_shift,
    parse_config,
    preset,
    preset_names,
    selftest,
    solve,
    steady_constant,
    steady_flowrate,
    womersley,
    womersley_flowrate,
)

__all__ = [
    "ConfigError",
    "ConvergenceFailure",
    "Error",
    "ExponentField",
    "RunConfig",
    "StressModel",
    "convergence",
    "eoc",
    "load_config",
    "noneven_shift",
    "parse_config",
    "preset",
    "preset_names",
    "selftest",
    "solve",
    "steady_constant",
    "steady_flowrate",
    "womersley",
    "womersley_flowrate",
]
