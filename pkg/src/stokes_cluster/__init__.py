"""Stokes data of y'' = P(z) y, WKB triangulations and cluster charts for polynomial
quadratic differentials on the plane."""

from .cluster import (
    ClusterChart,
    Configuration,
    IdealTriangulation,
    all_triangulations,
    chart_coords,
    cross_ratio,
    exchange_graph,
    find_generic_triangulation,
    flip,
    is_generic,
    mutate_coords,
    mutate_quiver,
    potential_of,
    quiver_of,
    reconstruct,
)
from .foliation import classify, separatrices, trace_trajectory, wall_proximity, wkb_triangulation
from .main_map import F, F_hbar, HbarParam, chamber_search, flip_coherence, jacobian_F, map_report, wkb_chart
from .polynomial import from_coefficients, period, roots, rotate_framing, scale_action
from .stokes import (
    asymptotic_values,
    asymptotic_values_direct,
    normalize_tuple,
    subdominant_solution,
)

__version__ = "0.1.0"
