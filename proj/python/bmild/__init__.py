"""Mild solutions of the 3D Boussinesq system on a periodic box."""

from ._bmild import (
    BlowUp,
    ConfigError,
    ContractionFailed,
    Error,
    FieldMismatch,
    FormatError,
    KernelUnresolved,
    config_hash,
    divergence,
    heat,
    initial_data,
    leray,
    lp_norm,
    reference,
    run,
    set_threads,
    solve,
    temperature_ladder,
    velocity_ladder,
    weak_lq_norm,
)

__all__ = [
    "BlowUp",
    "ConfigError",
    "ContractionFailed",
    "Error",
    "FieldMismatch",
    "FormatError",
    "KernelUnresolved",
    "config_hash",
    "divergence",
    "heat",
    "initial_data",
    "leray",
    "lp_norm",
    "reference",
    "run",
    "set_threads",
    "solve",
    "temperature_ladder",
    "velocity_ladder",
    "weak_lq_norm",
]
