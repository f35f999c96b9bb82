"""Certificates for k-very ampleness of line bundles on blow-ups of abelian and K-trivial surfaces."""

from .certify import BundleQuery, Certificate, SurfaceSpec, Verdict, certify
from .exactmath import Surd, compare
from .obstruction import feasible_vector, search_profiles, search_rho1
from .pell import pell_primitive

__all__ = [
    "BundleQuery",
    "Certificate",
    "Surd",
    "SurfaceSpec",
    "Verdict",
    "certify",
    "compare",
    "feasible_vector",
    "pell_primitive",
    "search_profiles",
    "search_rho1",
]

__version__ = "0.1.0"
