"""Stable norms, effective fronts, and effective Hamiltonians of periodic
2D metrics, computed by shortest paths on a refined lattice.

The pipeline: a positive periodic speed field ``a(x)`` induces the metric
``ds = a^{-1} |dx|`` on the torus; large-scale shortest-path costs converge
to a norm on homology whose unit ball is a convex body ``D_a``.  The polar
dual ``S_a`` is the corresponding front, and its support function is the
effective Hamiltonian of the metric.  Mechanical Hamiltonians
``1/2 |p|^2 + V(x)`` reduce to the same machinery through the
energy-dependent metric ``a_c = 1 / sqrt(2 (c - V))``.
"""

from .config import (DEFAULT_RIG, Rig, RunConfig, default_threads)
from .distances import (DistanceMap, PathRecord, distance, make_path, sssp)
from .errors import (CapacityExceeded, DegenerateTable, EnergyBelowPotential,
                     EnergyBracketFailure, HistoryMismatch,
                     IndistinguishableLevels, InfmaxDivergence, InvalidSplice,
                     NodeOutOfWindow, NonPositiveSpeed, NonPrimitiveDirection,
                     OriginNotInterior, ParamMismatch, StableFrontError,
                     SubadditivityViolation, TolInfeasible, Unreachable,
                     ValidationError, WindowTooSmall, ZeroDirection)
from .fields import (ScalarField2, field_from_spec, grid_field,
                     mechanical_to_metric, preset_field)
from .fronts import (Corner, Facet, FrontModel, build_front, detect_corners,
                     facet_report, front_from_json_dict, front_to_json_dict,
                     polar_dual)
from .geodesics import (CrossingPair, action_dominates_length, action_of_path,
                        action_with_durations, adjust, detect_period,
                        energy_matched_durations, find_crossings,
                        min_closed_geodesic, path_length, reweight_path)
from .hamiltonian import (InfmaxResult, MechResult, convexity_probe,
                          hbar_dual, hbar_mechanical, infmax_upper, level_set)
from .norms import (NormEstimate, NormTable, burago_gap, direction_sweep,
                    fekete_refine, norm_estimate, primitive_directions)
from .serialize import canonical_json, write_json, write_text
from .svg import render_front_svg, render_paths_svg
from .validate import run_validate

__version__ = "0.1.0"

__all__ = [
    "CapacityExceeded", "Corner", "CrossingPair", "DEFAULT_RIG",
    "DegenerateTable", "DistanceMap", "EnergyBelowPotential",
    "EnergyBracketFailure", "Facet", "FrontModel", "HistoryMismatch",
    "IndistinguishableLevels", "InfmaxDivergence", "InfmaxResult",
    "InvalidSplice", "MechResult", "NodeOutOfWindow", "NonPositiveSpeed",
    "NonPrimitiveDirection", "NormEstimate", "NormTable", "OriginNotInterior",
    "ParamMismatch", "PathRecord", "Rig", "RunConfig", "ScalarField2",
    "StableFrontError", "SubadditivityViolation", "TolInfeasible",
    "Unreachable", "ValidationError", "WindowTooSmall", "ZeroDirection",
    "action_dominates_length", "action_of_path", "action_with_durations",
    "adjust", "build_front", "burago_gap", "canonical_json",
    "convexity_probe", "default_threads", "detect_corners", "detect_period",
    "direction_sweep", "distance", "energy_matched_durations", "facet_report",
    "fekete_refine", "field_from_spec", "find_crossings",
    "front_from_json_dict", "front_to_json_dict", "grid_field", "hbar_dual",
    "hbar_mechanical", "infmax_upper", "level_set", "make_path",
    "mechanical_to_metric", "min_closed_geodesic", "norm_estimate",
    "path_length", "polar_dual", "preset_field", "primitive_directions",
    "render_front_svg", "render_paths_svg", "reweight_path", "run_validate",
    "sssp", "write_json", "write_text",
]
