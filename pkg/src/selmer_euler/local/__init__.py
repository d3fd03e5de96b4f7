"""Local invariants of elliptic curves over Q and over Q(i) by base change."""

from .curves import CurveModel, SingularModel, curve_invariants
from .gaussian import base_change_local_data, local_data, splitting_in_Qi
from .points import count_points, torsion_p_part_bound
from .tate import Kind, LocalData, Reduction, classify_at_p, tate_algorithm

__all__ = [
    "CurveModel", "SingularModel", "curve_invariants", "base_change_local_data", "local_data",
    "splitting_in_Qi", "count_points", "torsion_p_part_bound", "Kind", "LocalData", "Reduction",
    "classify_at_p", "tate_algorithm",
]
