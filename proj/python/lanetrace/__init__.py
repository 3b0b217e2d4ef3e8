"""Maneuver extraction from agent trajectories on HD-map lane graphs."""

from ._core import (
    ConnectivityKind,
    LaneChangeManeuver,
    LaneGraph,
    LaneSegment,
    TurnDirection,
    TurnManeuver,
    assign_timesteps,
    assignment_confidence,
    average_acceleration,
    average_velocity,
    build_histogram,
    build_intervals,
    connectivity,
    extract_maneuver,
    load_scene,
    min_ade,
    min_fde,
    parse_scene,
    point_to_centerline_distance,
    recipes,
    run_extract,
    segment_max_curvature,
    segment_orientation_change,
    synth_scene,
    validate_graph,
)

__all__ = [name for name in dir() if not name.startswith("_")]
