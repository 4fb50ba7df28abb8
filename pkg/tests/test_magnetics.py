import dataclasses

import numpy as np
import pytest
from numpy.testing import assert_allclose

from tricoil.geometry import canonical_pose, receiver_pose_from_alpha, transmitter_pose
from tricoil.magnetics import (
    FORMULA_CANONICAL,
    FORMULA_PAPER,
    MU_0,
    CoilSpec,
    SingularGeometryError,
    coil_resistance,
    dipole_mutual,
    mutual_matrix,
    paper_literal_mutual,
)

COIL = CoilSpec(turns=10, radius=0.1, wire_resistance_per_meter=0.01)
K = COIL.turns**2 * COIL.area**2  # Nt*Nr*St*Sr for the matched pair
EZ = np.array([0.0, 0.0, 1.0])
EX = np.array([1.0, 0.0, 0.0])
EY = np.array([0.0, 1.0, 0.0])


def polynomial_row_z(n_r, offset):
    """Independent evaluation of the z-axis coupling polynomial."""
    x, y, z = offset
    r = np.linalg.norm(offset)
    ca, cb, cg = n_r
    return MU_0 * K / (4 * np.pi * r**5) * (3 * x * z * ca + 3 * y * z * cb + (2 * z**2 - x**2 - y**2) * cg)


class TestCoilSpec:
    def test_rejects_zero_turns(self):
        with pytest.raises(ValueError):
            CoilSpec(turns=0, radius=0.1, wire_resistance_per_meter=0.01)

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(ValueError):
            CoilSpec(turns=10, radius=0.0, wire_resistance_per_meter=0.01)

    def test_zero_wire_resistance_allowed(self):
        spec = CoilSpec(turns=10, radius=0.1, wire_resistance_per_meter=0.0)
        assert coil_resistance(spec) == 0.0


def test_coil_resistance_reference_value():
    # 0.01 ohm/m * 2*pi*0.1 m per turn * 10 turns
    assert_allclose(coil_resistance(COIL), 0.01 * 2 * np.pi * 0.1 * 10, rtol=1e-15)
    assert_allclose(coil_resistance(COIL), 0.06283185, rtol=1e-6)


class TestDipoleMutual:
    def test_coaxial(self):
        d = 2.0
        expected = 2.0 * MU_0 * K / (4 * np.pi * d**3)
        assert_allclose(dipole_mutual(EZ, EZ, [0, 0, d], COIL, COIL), expected, rtol=1e-15)

    def test_orthogonal_null(self):
        assert dipole_mutual(EZ, EX, [0, 0, 2.0], COIL, COIL) == 0.0

    def test_matches_polynomial_expansion(self):
        offset = np.array([1.0, 1.0, 1.5])
        value = dipole_mutual(EZ, EZ, offset, COIL, COIL)
        assert_allclose(value, polynomial_row_z(EZ, offset), rtol=1e-12)

    def test_reciprocity(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            n_t = rng.standard_normal(3)
            n_t /= np.linalg.norm(n_t)
            n_r = rng.standard_normal(3)
            n_r /= np.linalg.norm(n_r)
            offset = rng.uniform(-2, 2, 3)
            if np.linalg.norm(offset) < 0.1:
                continue
            forward = dipole_mutual(n_t, n_r, offset, COIL, COIL)
            backward = dipole_mutual(n_r, n_t, -offset, COIL, COIL)
            assert_allclose(forward, backward, rtol=1e-12, atol=1e-30)

    def test_linearity_in_each_normal(self):
        rng = np.random.default_rng(4)
        offset = np.array([0.7, -1.1, 1.3])
        for _ in range(100):
            u, v, w = rng.standard_normal((3, 3))
            a, b = rng.uniform(-2, 2, 2)
            left = dipole_mutual(a * u + b * v, w, offset, COIL, COIL)
            right = a * dipole_mutual(u, w, offset, COIL, COIL) + b * dipole_mutual(v, w, offset, COIL, COIL)
            assert_allclose(left, right, rtol=1e-10, atol=1e-28)
            left_r = dipole_mutual(w, a * u + b * v, offset, COIL, COIL)
            right_r = a * dipole_mutual(w, u, offset, COIL, COIL) + b * dipole_mutual(w, v, offset, COIL, COIL)
            assert_allclose(left_r, right_r, rtol=1e-10, atol=1e-28)

    def test_zero_offset_is_singular(self):
        with pytest.raises(SingularGeometryError):
            dipole_mutual(EZ, EZ, [0.0, 0.0, 0.0], COIL, COIL)


class TestMutualMatrix:
    def test_on_axis_pattern(self):
        d = 2.0
        rx = dataclasses.replace(canonical_pose(), center=np.array([0.0, 0.0, d]))
        m = mutual_matrix(transmitter_pose(), rx, COIL, COIL)
        unit = MU_0 * K / (4 * np.pi * d**3)
        # transmit coils are (z, x, y); receive coils are (x, y, z)
        expected = np.array(
            [
                [0.0, 0.0, 2.0 * unit],
                [-unit, 0.0, 0.0],
                [0.0, -unit, 0.0],
            ]
        )
        assert_allclose(m, expected, atol=1e-30)

    def test_canonical_vs_paper_rows(self):
        rx = dataclasses.replace(receiver_pose_from_alpha(0.8), center=np.array([1.0, 1.0, 1.5]))
        canonical = mutual_matrix(transmitter_pose(), rx, COIL, COIL, FORMULA_CANONICAL)
        paper = mutual_matrix(transmitter_pose(), rx, COIL, COIL, FORMULA_PAPER)
        assert_allclose(canonical[0], paper[0], rtol=1e-12)
        assert_allclose(canonical[2], paper[2], rtol=1e-12)
        assert np.max(np.abs(canonical[1] - paper[1])) > 1e-12 * np.max(np.abs(canonical))

    def test_rows_1_and_3_match_paper_on_random_geometries(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            n_r = rng.standard_normal(3)
            n_r /= np.linalg.norm(n_r)
            offset = rng.uniform(-2, 2, 3)
            if np.linalg.norm(offset) < 0.2:
                continue
            for axis, n_t in ((0, EZ), (2, EY)):
                dip = dipole_mutual(n_t, n_r, offset, COIL, COIL)
                poly = paper_literal_mutual(axis, n_r, offset, COIL, COIL)
                assert_allclose(dip, poly, rtol=1e-12, atol=1e-30)

    def test_inverse_cube_scaling(self):
        rx1 = dataclasses.replace(receiver_pose_from_alpha(0.8), center=np.array([1.0, 1.0, 1.5]))
        rx2 = dataclasses.replace(rx1, center=np.array([2.0, 2.0, 3.0]))
        m1 = mutual_matrix(transmitter_pose(), rx1, COIL, COIL)
        m2 = mutual_matrix(transmitter_pose(), rx2, COIL, COIL)
        assert_allclose(m2, m1 / 8.0, rtol=1e-12)

    def test_coincident_centers_rejected(self):
        with pytest.raises(SingularGeometryError):
            mutual_matrix(transmitter_pose(), canonical_pose(), COIL, COIL)

    def test_paper_mode_requires_axis_aligned_transmitter(self):
        rx = dataclasses.replace(canonical_pose(), center=np.array([0.0, 0.0, 2.0]))
        tilted = dataclasses.replace(transmitter_pose(), normals=receiver_pose_from_alpha(0.3).normals)
        with pytest.raises(ValueError):
            mutual_matrix(tilted, rx, COIL, COIL, FORMULA_PAPER)
        # canonical mode accepts an arbitrary transmit orientation
        mutual_matrix(tilted, rx, COIL, COIL, FORMULA_CANONICAL)
