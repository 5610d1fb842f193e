"""Pluriharmonic generators on the bidisk: exact obstruction analysis and density experiments."""

from .gaussian import GaussianRational, as_gaussian
from .polyalg import HoloPoly, parse_poly
from .pluriharmonic import PluriharmonicFn, PluriharmonicMap, minor_system, wedge_power_check
from .obstruction import analyze, stratify, find_leaf, leaf_boundary_check, holomorphic_along_curve
from .density import SampleDomain, decay_report, separation_certificate

__all__ = [
    "GaussianRational",
    "as_gaussian",
    "HoloPoly",
    "parse_poly",
    "PluriharmonicFn",
    "PluriharmonicMap",
    "minor_system",
    "wedge_power_check",
    "analyze",
    "stratify",
    "find_leaf",
    "leaf_boundary_check",
    "holomorphic_along_curve",
    "SampleDomain",
    "decay_report",
    "separation_certificate",
]
