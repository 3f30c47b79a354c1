"""ifsgraph: augmented graphs induced by iterated function systems.

Exact-rational construction of the symbolic quotient space of an IFS of
similitudes, its augmented graphs (X, E) and (X, E◇), certified cylinder
intersection verdicts, hyperbolicity diagnostics, and the boundary map onto
the attractor.
"""

from .boundary import BoundaryAddress, boundary_gromov, condition_h_report, phi, phi_exact, ray
from .config import ConfigError, RunConfig, parse_config
from .graph import AugmentedGraph, EdgeKind, UnknownVerdictError, View, build_graph
from .hyperbolic import (
    HyperbolicityReport,
    canonical_geodesic,
    compute_report,
    delta_hyperbolicity,
    distance,
    gromov_product,
)
from .intersect import Caps, IntersectionOracle, Verdict
from .presets import PRESET_NAMES, get_preset
from .similitude import Ball, IfsSpec, SimilarityMap, Similitude, invariant_ball, similitude
from .symbolic import LevelTable, VertexClass, enumerate_level, quotient_level

__version__ = "0.1.0"

__all__ = [
    "AugmentedGraph",
    "Ball",
    "BoundaryAddress",
    "Caps",
    "ConfigError",
    "EdgeKind",
    "HyperbolicityReport",
    "IfsSpec",
    "IntersectionOracle",
    "LevelTable",
    "PRESET_NAMES",
    "RunConfig",
    "SimilarityMap",
    "Similitude",
    "UnknownVerdictError",
    "Verdict",
    "VertexClass",
    "View",
    "boundary_gromov",
    "build_graph",
    "canonical_geodesic",
    "compute_report",
    "condition_h_report",
    "delta_hyperbolicity",
    "distance",
    "enumerate_level",
    "get_preset",
    "gromov_product",
    "invariant_ball",
    "parse_config",
    "phi",
    "phi_exact",
    "quotient_level",
    "ray",
    "similitude",
]
