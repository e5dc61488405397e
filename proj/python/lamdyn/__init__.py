"""Invariant laminations, dendrite models, and exact tree-map dynamics.

Thin wrapper over the C++ core.  All heavyweight objects stay on the C++
side; this API exchanges the same text formats the command line tool uses
(lamination spec files, written laminations, tree exports, markov map files)
plus plain dicts and lists for structured results.
"""

from ._core import (
    angle_str,
    build_artifacts,
    center_check,
    check_spec,
    map_periods,
    map_roundtrip,
    omega_targets,
    periodic_cutpoint_scan,
    sharkovskiy_less,
    sharkovskiy_tail,
    star_rotation_text,
    stefan_map_text,
    tent_map_text,
    verify_closure,
)

__all__ = [
    "angle_str",
    "build_artifacts",
    "center_check",
    "check_spec",
    "map_periods",
    "map_roundtrip",
    "omega_targets",
    "periodic_cutpoint_scan",
    "sharkovskiy_less",
    "sharkovskiy_tail",
    "star_rotation_text",
    "stefan_map_text",
    "tent_map_text",
    "verify_closure",
]
