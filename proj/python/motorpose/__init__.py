"""1D-Up CGA motors for camera poses.

Motors are 8-element sequences [alpha, b12, b13, b14, b23, b24, b34, gamma];
quaternions are (w, x, y, z).
"""

import json

from ._core import (  # noqa: F401
    MOTOR_FIELDS,
    ConsistencyError,
    DegeneratePointError,
    InputError,
    InvalidMotorError,
    MotorposeError,
    ParseError,
    ValidationError,
    __version__,
    apply_motor,
    canonicalize_motor,
    decode_motor,
    down_project,
    encode_pose,
    lambda_for_area,
    motor_mse,
    parse_cambridge,
    pointcloud_mse,
    positional_error,
    quat_to_rotor,
    read_motor_file,
    rotational_error,
    rotmat_to_quat,
    trace_deviation,
    translation_rotor,
    up_project,
    write_motor_file,
)
from . import _core


def evaluate_run(pred, gt, lam, thresholds=(10.0, 10.0)):
    """Evaluate (frame_id, motor) predictions against ground truth; returns the report dict."""
    meters, degrees = thresholds
    return json.loads(_core.evaluate_run_json(list(pred), list(gt), lam, meters, degrees))
