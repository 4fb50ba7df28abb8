"""Magnetic-induction link simulator for tri-directional coil transceivers.

Models the near-field coupling between two triads of mutually orthogonal
coils, evaluates the electrical link (receive voltage, receive power,
pathloss), and jointly optimizes transmit current amplitudes and receive
combining weights with an alternating closed-form algorithm.  Every
closed-form step is backed by an independent brute-force verifier.
"""

from tricoil.geometry import TriadPose, alpha_grid, receiver_pose_from_alpha, validate_pose
from tricoil.magnetics import CoilSpec, SingularGeometryError, coil_resistance, dipole_mutual, mutual_matrix
from tricoil.circuit import LinkParams, pathloss_db, receive_power, receive_voltage, transmit_power
from tricoil.optimizer import (
    NoCouplingError,
    OptimizationTrace,
    alternate,
    optimal_current,
    optimal_weights,
    symmetric_eig3,
)
from tricoil.oracle import OracleFailure, OracleReport, verify_current_step, verify_dipole_expansion, verify_weight_step
from tricoil.experiments import Scenario, SweepResult, angle_sweep, run_strategy, summary_stats, threshold_sweep

__all__ = [
    "CoilSpec",
    "LinkParams",
    "NoCouplingError",
    "OptimizationTrace",
    "OracleFailure",
    "OracleReport",
    "Scenario",
    "SingularGeometryError",
    "SweepResult",
    "TriadPose",
    "alpha_grid",
    "alternate",
    "angle_sweep",
    "coil_resistance",
    "dipole_mutual",
    "mutual_matrix",
    "optimal_current",
    "optimal_weights",
    "pathloss_db",
    "receive_power",
    "receive_voltage",
    "receiver_pose_from_alpha",
    "run_strategy",
    "summary_stats",
    "symmetric_eig3",
    "threshold_sweep",
    "transmit_power",
    "validate_pose",
    "verify_current_step",
    "verify_dipole_expansion",
    "verify_weight_step",
]
