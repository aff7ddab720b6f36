"""EPR-steering witnesses from discrete position/momentum histograms."""

import json

from ._core import (
    EprSteerError,
    __version__,
    conditional_entropy,
    entropy,
    joint_entropy,
    min_resolution,
    mutual_information,
    per_dim_bound,
    pi_e,
)
from . import _core

__all__ = [
    "EprSteerError",
    "__version__",
    "conditional_entropy",
    "default_config",
    "entropy",
    "joint_entropy",
    "load_config",
    "min_resolution",
    "mutual_information",
    "per_dim_bound",
    "pi_e",
    "run_curve",
    "run_map",
    "run_selftest",
    "run_synth",
    "run_witness",
]


def default_config():
    """Run configuration for the default synthetic state, as a dict."""
    return json.loads(_core.default_config())


def load_config(path):
    """Read a run configuration file; relative input paths become absolute."""
    return json.loads(_core.load_config(str(path)))


def run_witness(config):
    """Witness report (dict) for a configuration dict."""
    return json.loads(_core.run_witness(json.dumps(config)))


def run_map(config):
    """Asymmetric downsampling map as CSV text."""
    return _core.run_map(json.dumps(config))


def run_curve(config):
    """Resolution curve as CSV text."""
    return _core.run_curve(json.dumps(config))


def run_synth(config, directory):
    """Write synthetic count files; returns the written paths."""
    return _core.run_synth(json.dumps(config), str(directory))


def run_selftest():
    """List of (name, passed, detail) tuples."""
    return _core.run_selftest()
