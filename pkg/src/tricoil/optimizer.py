"""Closed-form beamforming steps and the alternating optimization loop.

For fixed combiner weights the best transmit current maximizes the
Rayleigh quotient of ``Q = m @ diag(s^2) @ m.T`` (the received-power
quadratic form in the stored matrix layout), so it is the top eigenvector
of ``Q`` scaled to the power budget.  For a fixed current the weights are
set proportional to the per-coil coupling magnitudes ``|m.T @ I|``.  The
loop alternates the two steps and stops when the pathloss change falls
below a threshold.

The eigensolver is a self-contained symmetric 3x3 routine: closed-form
characteristic cubic for the eigenvalues, cross-product eigenvectors, and
one cyclic Jacobi sweep to polish residuals down to machine precision.
The problem size never exceeds 3, so no external linear-algebra backend
is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from tricoil.circuit import LinkParams, check_weights, coupled_amplitudes, equal_weights, pathloss_db

SYMMETRY_TOL = 1e-12
EIGENVALUE_TIE_REL = 1e-9


class NoCouplingError(ValueError):
    """Raised when the coupling matrix carries no power to any receive coil."""


@dataclass(frozen=True)
class TraceStep:
    """One recorded state of the alternating loop."""

    iteration: int
    currents: np.ndarray
    weights: np.ndarray
    pathloss: float


@dataclass(frozen=True)
class OptimizationTrace:
    """Complete record of one alternating-optimization run.

    ``steps[0]`` is the starting state (equal-allocation current with the
    initial weights); steps 1..n are the optimization rounds.
    ``iterations`` counts the optimization rounds only.
    """

    steps: tuple
    converged: bool
    iterations: int
    threshold: float

    @property
    def rounds(self) -> tuple:
        """The optimization rounds (starting state excluded)."""
        return self.steps[1:] if self.steps and self.steps[0].iteration == 0 else self.steps

    def best_round(self) -> TraceStep:
        """The recorded round with the lowest pathloss."""
        return min(self.rounds, key=lambda step: step.pathloss)

    def final_round(self) -> TraceStep:
        return self.rounds[-1]


def build_qform(m, weights) -> np.ndarray:
    """Received-power quadratic form Q = m @ diag(s^2) @ m.T (symmetric PSD)."""
    s = check_weights(weights)
    m = np.asarray(m, dtype=float)
    sm = s[np.newaxis, :] * m  # scale columns: (S @ m.T).T
    return sm @ sm.T


def _eigenvalues_closed_form(a: np.ndarray):
    """Eigenvalues of a symmetric 3x3 matrix, descending, via the trigonometric cubic."""
    p1 = a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2
    if p1 == 0.0:
        return np.sort(np.diag(a))[::-1].copy(), True
    q = np.trace(a) / 3.0
    p2 = np.sum((np.diag(a) - q) ** 2) + 2.0 * p1
    p = math.sqrt(p2 / 6.0)
    b = (a - q * np.eye(3)) / p
    r = np.linalg.det(b) / 2.0
    # exact arithmetic keeps r in [-1, 1]; rounding can step outside
    r = min(1.0, max(-1.0, r))
    phi = math.acos(r) / 3.0
    lam1 = q + 2.0 * p * math.cos(phi)
    lam3 = q + 2.0 * p * math.cos(phi + 2.0 * np.pi / 3.0)
    lam2 = 3.0 * q - lam1 - lam3
    return np.array([lam1, lam2, lam3]), False


def _eigenvector_by_cross(a: np.ndarray, lam: float) -> np.ndarray:
    """Unit eigenvector for a simple eigenvalue via row cross products."""
    rows = a - lam * np.eye(3)
    candidates = (
        np.cross(rows[0], rows[1]),
        np.cross(rows[0], rows[2]),
        np.cross(rows[1], rows[2]),
    )
    norms = [np.linalg.norm(c) for c in candidates]
    k = int(np.argmax(norms))
    if norms[k] == 0.0:
        # rank(a - lam*I) <= 1: any unit vector orthogonal to the largest
        # row is an eigenvector; the Jacobi sweep polishes the rest
        row_norms = np.linalg.norm(rows, axis=1)
        j = int(np.argmax(row_norms))
        if row_norms[j] == 0.0:
            return np.array([1.0, 0.0, 0.0])
        u, _ = _orthonormal_complement(rows[j] / row_norms[j])
        return u
    return candidates[k] / norms[k]


def _orthonormal_complement(v: np.ndarray):
    j = int(np.argmin(np.abs(v)))
    u = np.cross(v, np.eye(3)[j])
    u /= np.linalg.norm(u)
    w = np.cross(v, u)
    return u, w


def _rotation_angle(app: float, aqq: float, apq: float) -> float:
    return 0.5 * math.atan2(2.0 * apq, app - aqq)


def _jacobi_sweep(b: np.ndarray, v: np.ndarray):
    """One cyclic Jacobi sweep on ``b`` accumulating rotations into ``v``'s columns."""
    for p, q in ((0, 1), (0, 2), (1, 2)):
        if b[p, q] == 0.0:
            continue
        theta = _rotation_angle(b[p, p], b[q, q], b[p, q])
        c, s = math.cos(theta), math.sin(theta)
        rot = np.eye(3)
        rot[p, p] = c
        rot[q, q] = c
        rot[p, q] = -s
        rot[q, p] = s
        b = rot.T @ b @ rot
        v = v @ rot
    return b, v


def symmetric_eig3(q) -> tuple:
    """Eigen-decomposition of a symmetric 3x3 matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues sorted
    descending and unit eigenvectors in the matching *columns*.  The sign
    convention makes the output deterministic: the largest-magnitude
    component of each eigenvector is positive (first such component on
    exact ties).  Residuals satisfy ``||Q v - lam v|| <= 1e-10 * ||Q||_F``
    and eigenvectors are mutually orthogonal well within 1e-9.
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {q.shape}")
    if not np.all(np.isfinite(q)):
        raise ValueError("matrix contains non-finite entries")
    scale = float(np.max(np.abs(q)))
    if np.max(np.abs(q - q.T)) > SYMMETRY_TOL * max(1.0, scale):
        raise ValueError("matrix is not symmetric")
    if scale == 0.0:
        return np.zeros(3), np.eye(3)

    a = (q + q.T) / (2.0 * scale)  # exact symmetrization + scaling
    values, diagonal = _eigenvalues_closed_form(a)
    if diagonal:
        order = np.argsort(-np.diag(a), kind="stable")
        vectors = np.eye(3)[:, order]
        b = np.diag(np.diag(a)[order]).astype(float)
    else:
        lam1, lam2, lam3 = values
        # resolve the most isolated eigenvalue first: its eigenspace is
        # one-dimensional, so the cross-product construction is stable
        isolated = lam1 if lam1 - lam2 >= lam2 - lam3 else lam3
        v_iso = _eigenvector_by_cross(a, isolated)
        u, w = _orthonormal_complement(v_iso)
        # 2x2 symmetric eigenproblem in the orthogonal complement
        j00 = u @ a @ u
        j11 = w @ a @ w
        j01 = u @ a @ w
        theta = _rotation_angle(j00, j11, j01)
        c, s = math.cos(theta), math.sin(theta)
        e1 = c * u + s * w
        e2 = -s * u + c * w
        pairs = [
            (isolated, v_iso),
            (float(e1 @ a @ e1), e1),
            (float(e2 @ a @ e2), e2),
        ]
        pairs.sort(key=lambda t: -t[0])
        vectors = np.column_stack([p[1] for p in pairs])
        b = vectors.T @ a @ vectors

    # one polish sweep drives off-diagonal residue to machine precision
    b, vectors = _jacobi_sweep(b, vectors)
    values = np.diag(b).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order] * scale
    vectors = vectors[:, order]

    for k in range(3):
        col = vectors[:, k]
        lead = int(np.argmax(np.abs(col)))
        if col[lead] < 0.0:
            vectors[:, k] = -col
    return values, vectors


def _break_tie(m: np.ndarray, tied_vectors: np.ndarray) -> np.ndarray:
    """Among a degenerate top eigenspace, pick the direction of strongest coupling.

    Maximizes ``||m.T @ v||^2`` over the tied subspace (a small symmetric
    eigenproblem in the subspace coordinates); falls back to the first
    basis vector when the couplings cannot distinguish either.
    """
    gram = m @ m.T
    sub = tied_vectors.T @ gram @ tied_vectors
    k = sub.shape[0]
    if k == 1:
        return tied_vectors[:, 0]
    if k == 2:
        theta = _rotation_angle(sub[0, 0], sub[1, 1], sub[0, 1])
        c, s = math.cos(theta), math.sin(theta)
        cand1 = np.array([c, s])
        cand2 = np.array([-s, c])
        best = max((cand1, cand2), key=lambda t: float(t @ sub @ t))
        coeff = best
    else:
        sub_values, sub_vectors = symmetric_eig3(sub)
        if sub_values[0] - sub_values[-1] <= EIGENVALUE_TIE_REL * max(abs(sub_values[0]), 1e-300):
            coeff = np.eye(k)[:, 0]  # fully isotropic: canonical choice
        else:
            coeff = sub_vectors[:, 0]
    v = tied_vectors @ coeff
    return v / np.linalg.norm(v)


def optimal_current(m, weights, params: LinkParams) -> np.ndarray:
    """Transmit current maximizing receive power for fixed weights.

    The top unit eigenvector of the received-power quadratic form, scaled
    so that ``||I||^2 = P0 / R_t`` (the power budget is met with
    equality).  Degenerate top eigenvalues are resolved toward the
    direction of strongest raw coupling, then the eigenvector sign rule
    applies, making the result deterministic.
    """
    m = np.asarray(m, dtype=float)
    q = build_qform(m, weights)
    if np.max(np.abs(q)) == 0.0:
        raise NoCouplingError("no coupling between transmit currents and receive coils")
    values, vectors = symmetric_eig3(q)
    if values[0] <= 0.0:
        raise NoCouplingError("received power vanishes for every current vector")
    tie_span = 1
    for k in (1, 2):
        if values[0] - values[k] <= EIGENVALUE_TIE_REL * abs(values[0]):
            tie_span = k + 1
    if tie_span > 1:
        v = _break_tie(m, vectors[:, :tie_span])
        lead = int(np.argmax(np.abs(v)))
        if v[lead] < 0.0:
            v = -v
    else:
        v = vectors[:, 0]
    return math.sqrt(params.p0 / params.r_t) * v


def optimal_weights(m, currents) -> np.ndarray:
    """Combiner weights proportional to the per-coil coupling magnitudes.

    ``s_n = |a_n| / sqrt(sum_j a_j^2)`` with ``a = m.T @ I``; the result
    has unit square-sum.  Applying the rule again with the same current
    reproduces the same weights exactly.
    """
    a = np.abs(coupled_amplitudes(m, currents))
    norm = np.linalg.norm(a)
    if norm == 0.0:
        raise NoCouplingError("all coupling amplitudes are zero; weights undefined")
    return a / norm


def equal_current(params: LinkParams) -> np.ndarray:
    """Equal-allocation drive meeting the power budget: sqrt(P0/(3 R_t)) per coil."""
    return np.full(3, math.sqrt(params.p0 / (3.0 * params.r_t)))


def alternate(
    m,
    params: LinkParams,
    s0=None,
    delta: float = 2.5e-2,
    max_iter: int = 100,
) -> OptimizationTrace:
    """Alternating optimization of currents and weights.

    Starting from weights ``s0`` (uniform by default), each round solves
    the current step, then the weight step, and records the pathloss.
    The loop exits once the absolute pathloss change between consecutive
    rounds is at most ``delta`` (dB) or after ``max_iter`` rounds, in
    which case ``converged`` is False.  The absolute difference is used
    on purpose: a signed test would exit on any regression.

    The starting state (equal-allocation current with ``s0``) is recorded
    as step 0 so traces show the unoptimized baseline; ``iterations``
    counts optimization rounds only.
    """
    if not (delta > 0.0):
        raise ValueError(f"delta must be > 0, got {delta}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    m = np.asarray(m, dtype=float)
    s = equal_weights() if s0 is None else check_weights(s0)

    i0 = equal_current(params)
    steps = [TraceStep(0, i0, s.copy(), pathloss_db(m, i0, s, params))]

    converged = False
    previous = None
    for n in range(1, max_iter + 1):
        currents = optimal_current(m, s, params)
        s = optimal_weights(m, currents)
        loss = pathloss_db(m, currents, s, params)
        steps.append(TraceStep(n, currents, s, loss))
        if previous is not None and abs(loss - previous) <= delta:
            converged = True
            break
        previous = loss

    return OptimizationTrace(
        steps=tuple(steps),
        converged=converged,
        iterations=steps[-1].iteration,
        threshold=float(delta),
    )
