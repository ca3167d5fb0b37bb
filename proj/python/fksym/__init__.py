"""Transition densities, Feynman-Kac expectations and verification suites."""

import json

from ._core import (
    CapabilityError,
    DomainError,
    Error,
    NumericalError,
    ValidityError,
    atoms,
    density,
    entry_names,
    expectation,
    joint_laplace_in_mu,
    log_density,
    parameters,
    resolve,
    suite_names,
    total_mass,
    transform_rhs,
)
from ._core import manifest_json as _manifest_json
from ._core import run_suite_json as _run_suite_json

__all__ = [
    "CapabilityError",
    "DomainError",
    "Error",
    "NumericalError",
    "ValidityError",
    "atoms",
    "density",
    "entry_names",
    "expectation",
    "joint_laplace_in_mu",
    "log_density",
    "manifest",
    "parameters",
    "resolve",
    "run_suite",
    "suite_names",
    "total_mass",
    "transform_rhs",
]


def manifest():
    """The catalog manifest as a dict."""
    return json.loads(_manifest_json())


def run_suite(suite, entry="", paths=100000, steps=2000, seed=7, tolerance_scale=1.0):
    """Run a verification suite; returns the parsed report document."""
    return json.loads(_run_suite_json(suite, entry, paths, steps, seed, tolerance_scale))
