"""Planar co-transportation control stack and simulation harness."""

from .core import (LEFT, RIGHT, ComplianceParams, FootPose, GaitConfig,
                   IntentEstimate, PlanarState, angle_difference,
                   compliance_case, lateral_sign, normalize_angle,
                   other_side, rotate_to_local, rotate_to_world,
                   rotation_matrix)

__all__ = [
    "LEFT", "RIGHT", "ComplianceParams", "FootPose", "GaitConfig",
    "IntentEstimate", "PlanarState", "angle_difference", "compliance_case",
    "lateral_sign", "normalize_angle", "other_side", "rotate_to_local",
    "rotate_to_world", "rotation_matrix",
]
