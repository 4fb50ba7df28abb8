"""Coil-triad poses and the angle-parameterized receiver orientation sweep.

A triad is three coaxial coils sharing a center; its orientation is
described by the three coil-normal vectors.  The receiver sweep tilts the
first receive-coil normal in the xz-plane by an angle ``alpha`` and
completes the remaining two normals from it.  Two frame modes exist:

* ``"orthonormal"`` (default): the second normal is Gram-Schmidt
  orthogonalized against the first, giving a right-handed orthonormal
  triad for every angle.
* ``"paper"``: the second normal is the raw un-projected difference
  vector, normalized but generally *not* orthogonal to the first, and the
  third is their cross product (generally not unit length).  Kept behind
  a flag for comparison; the tilt component uses ``|sin(alpha)|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FRAME_ORTHONORMAL = "orthonormal"
FRAME_PAPER = "paper"
FRAME_MODES = (FRAME_ORTHONORMAL, FRAME_PAPER)

# Threshold on the projected construction vector below which the sweep
# construction is treated as degenerate: far above double-precision noise,
# far below any realistic sweep-grid spacing.
DEGENERACY_THRESHOLD = 1e-9

_CANONICAL = np.eye(3)


@dataclass(frozen=True)
class TriadPose:
    """Position of a coil triad's center plus its three coil-normal vectors.

    ``normals`` is a 3x3 array whose *rows* are the normals n1, n2, n3.
    """

    center: np.ndarray
    normals: np.ndarray

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float)
        normals = np.asarray(self.normals, dtype=float)
        if center.shape != (3,):
            raise ValueError(f"center must have shape (3,), got {center.shape}")
        if normals.shape != (3, 3):
            raise ValueError(f"normals must have shape (3, 3), got {normals.shape}")
        if not (np.all(np.isfinite(center)) and np.all(np.isfinite(normals))):
            raise ValueError("pose contains non-finite components")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "normals", normals)


@dataclass(frozen=True)
class PoseValidation:
    """Residual report for a triad pose.

    ``unit_residuals[k]`` is ``| ||n_k|| - 1 |``; ``pair_dots`` holds the
    raw dot products (n1.n2, n1.n3, n2.n3); ``handedness_residual`` is
    ``||n3 - n1 x n2||``.  ``passed`` applies the mode's criteria.
    """

    mode: str
    unit_residuals: tuple
    pair_dots: tuple
    handedness_residual: float
    passed: bool
    failures: tuple = field(default=())


def canonical_pose(center=(0.0, 0.0, 0.0)) -> TriadPose:
    """Triad aligned with the coordinate axes: n1=x, n2=y, n3=z."""
    return TriadPose(center=np.asarray(center, dtype=float), normals=_CANONICAL.copy())


def transmitter_pose(center=(0.0, 0.0, 0.0)) -> TriadPose:
    """Transmit triad with coil axes z, x, y (first coil along z).

    This is the axis assignment the closed-form coupling polynomials
    assume; it is right-handed (z x x = y).
    """
    normals = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    return TriadPose(center=np.asarray(center, dtype=float), normals=normals)


def _check_mode(mode: str):
    if mode not in FRAME_MODES:
        raise ValueError(f"unknown frame mode {mode!r}; expected one of {FRAME_MODES}")


def receiver_pose_from_alpha(alpha: float, mode: str = FRAME_ORTHONORMAL) -> TriadPose:
    """Receiver triad for tilt angle ``alpha``, centered at the origin.

    The first normal is ``(sin(alpha), 0, cos(alpha))`` (``|sin|`` in
    ``"paper"`` mode, which folds the sweep at alpha = pi).  The second is
    built from ``c = (1,0,0) - n1``: Gram-Schmidt projected and normalized
    in orthonormal mode, or ``c/||c||`` verbatim in paper mode.  The third
    is ``n1 x n2``.  When the projection of ``c`` is shorter than
    ``DEGENERACY_THRESHOLD`` (alpha = pi/2, and alpha = 3*pi/2 in
    orthonormal mode) the canonical axis triad is returned.

    Deterministic: equal inputs give bitwise-equal outputs.
    """
    _check_mode(mode)
    alpha = float(alpha)
    if not np.isfinite(alpha):
        raise ValueError("alpha must be finite")
    sin_a = np.sin(alpha)
    if mode == FRAME_PAPER:
        sin_a = abs(sin_a)
    n1 = np.array([sin_a, 0.0, np.cos(alpha)])
    c = np.array([1.0, 0.0, 0.0]) - n1
    projected = c - np.dot(c, n1) * n1
    norm_projected = np.linalg.norm(projected)
    if norm_projected < DEGENERACY_THRESHOLD:
        return canonical_pose()
    if mode == FRAME_ORTHONORMAL:
        n2 = projected / norm_projected
    else:
        n2 = c / np.linalg.norm(c)
    n3 = np.cross(n1, n2)
    return TriadPose(center=np.zeros(3), normals=np.array([n1, n2, n3]))


def validate_pose(pose: TriadPose, mode: str = FRAME_ORTHONORMAL, tolerance: float = 1e-9) -> PoseValidation:
    """Residual report for ``pose``; never raises on a bad pose.

    In orthonormal mode all of unit norms, pairwise orthogonality and
    right-handedness must hold within ``tolerance``.  In paper mode only
    the unit norms of n1 and n2 and the cross-product consistency of n3
    are required; the orthogonality residuals are still reported so the
    non-orthogonality of the raw construction is visible.
    """
    _check_mode(mode)
    n1, n2, n3 = pose.normals
    unit_residuals = tuple(abs(np.linalg.norm(n) - 1.0) for n in (n1, n2, n3))
    pair_dots = (float(np.dot(n1, n2)), float(np.dot(n1, n3)), float(np.dot(n2, n3)))
    handedness_residual = float(np.linalg.norm(n3 - np.cross(n1, n2)))

    failures = []
    if mode == FRAME_ORTHONORMAL:
        for k, res in enumerate(unit_residuals):
            if res > tolerance:
                failures.append(f"unit norm of n{k + 1} (residual {res:.3e})")
        for name, dot in zip(("n1.n2", "n1.n3", "n2.n3"), pair_dots):
            if abs(dot) > tolerance:
                failures.append(f"orthogonality {name} (residual {abs(dot):.3e})")
        if handedness_residual > tolerance:
            failures.append(f"right-handedness (residual {handedness_residual:.3e})")
    else:
        for k in (0, 1):
            if unit_residuals[k] > tolerance:
                failures.append(f"unit norm of n{k + 1} (residual {unit_residuals[k]:.3e})")
        if handedness_residual > tolerance:
            failures.append(f"cross-product consistency of n3 (residual {handedness_residual:.3e})")

    return PoseValidation(
        mode=mode,
        unit_residuals=unit_residuals,
        pair_dots=pair_dots,
        handedness_residual=handedness_residual,
        passed=not failures,
        failures=tuple(failures),
    )


def alpha_grid(count: int) -> np.ndarray:
    """``count`` uniformly spaced sweep angles over [0, 2*pi), starting at 0."""
    count = int(count)
    if count < 2:
        raise ValueError(f"alpha_grid needs count >= 2, got {count}")
    return np.arange(count) * (2.0 * np.pi / count)
