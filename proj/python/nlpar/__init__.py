"""Python bindings for the nlpar nonlocal parabolic toolkit."""

from ._nlpar import (
    ConfigError,
    Grid,
    KernelSpec,
    NlparError,
    SpaceTimeField,
    config_hash,
    heat_kernel,
    phi,
    run,
    solve,
    tail,
    verify_harnack,
)

__all__ = [
    "ConfigError",
    "Grid",
    "KernelSpec",
    "NlparError",
    "SpaceTimeField",
    "config_hash",
    "heat_kernel",
    "phi",
    "run",
    "solve",
    "tail",
    "verify_harnack",
]
