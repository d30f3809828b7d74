"""Numerical verification of stationary centers and conserved quantities in
special Poncelet triangle (and n-gon) families."""
from . import conic_core, families, invariants, loci, poncelet, probes, tri_centers
from .errors import GeometryError
from .families import FamilyKind, FamilySpec, build
from .invariants import InvariantId, InvariantReport, measure, verify
from .poncelet import ConicPair, certify, chase, sample_family

__all__ = [
    "conic_core", "families", "invariants", "loci", "poncelet", "probes", "tri_centers",
    "GeometryError", "FamilyKind", "FamilySpec", "build", "InvariantId", "InvariantReport",
    "measure", "verify", "ConicPair", "certify", "chase", "sample_family",
]
