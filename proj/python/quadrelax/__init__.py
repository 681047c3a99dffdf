# SPDX-License-Identifier: Apache-2.0
"""MIP relaxations of box-bounded MIQCQPs: McCormick, sawtooth, NMDT, D-NMDT."""

from quadrelax._core import (
    ConfigError,
    DomainError,
    Instance,
    Interval,
    MipModel,
    NonFiniteBoundsError,
    ParseError,
    QuadForm,
    QuadTriplet,
    Relaxation,
    ValidationError,
    analyze,
    breakpoint_objective,
    build_relaxation,
    compute_gap,
    max_error_theoretical,
    parse_boxqp,
    parse_native,
    performance_profile,
    primal_recovery,
    sawtooth_value,
    shifted_geomean,
    solve_lp,
    solve_mip,
    tooth_iterate,
    write_native,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "Instance",
    "Interval",
    "MipModel",
    "NonFiniteBoundsError",
    "ParseError",
    "QuadForm",
    "QuadTriplet",
    "Relaxation",
    "ValidationError",
    "analyze",
    "breakpoint_objective",
    "build_relaxation",
    "compute_gap",
    "max_error_theoretical",
    "parse_boxqp",
    "parse_native",
    "performance_profile",
    "primal_recovery",
    "sawtooth_value",
    "shifted_geomean",
    "solve_lp",
    "solve_mip",
    "tooth_iterate",
    "write_native",
]

__version__ = "0.1.0"
