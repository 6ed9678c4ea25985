import math

import numpy as np
import pytest

from qwcount import dagger, eigen_residual, mat_mul, mat_vec, unitarity_defect

from conftest import rotation

X = np.array([[0, 1], [1, 0]], dtype=np.complex128)


def test_mat_mul_identity():
    eye = np.eye(2, dtype=np.complex128)
    assert np.array_equal(mat_mul(eye, eye), eye)


def test_mat_mul_involution():
    assert np.allclose(mat_mul(X, X), np.eye(2), atol=0)


def test_mat_mul_rotation_composition():
    # Composing rotations adds angles; expected matrix evaluated directly.
    product = mat_mul(rotation(math.pi / 3), rotation(math.pi / 6))
    assert np.abs(product - rotation(math.pi / 2)).max() < 1e-12


def test_mat_mul_dimension_mismatch():
    with pytest.raises(ValueError):
        mat_mul(np.eye(2), np.eye(3))


def test_mat_mul_rejects_nonfinite():
    bad = np.array([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(ValueError):
        mat_mul(bad, np.eye(2))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_mat_mul_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (rng.uniform(-1, 1, (5, 5)) + 1j * rng.uniform(-1, 1, (5, 5)) for _ in range(3))
    left = mat_mul(mat_mul(a, b), c)
    right = mat_mul(a, mat_mul(b, c))
    assert np.abs(left - right).max() < 1e-12


def test_mat_vec_identity():
    v = np.array([1.0, 2.0j, -3.0])
    assert np.array_equal(mat_vec(np.eye(3), v), v.astype(np.complex128))


def test_mat_vec_zero_matrix():
    assert np.array_equal(mat_vec(np.zeros((3, 3)), np.ones(3)), np.zeros(3, dtype=np.complex128))


def test_mat_vec_quarter_turn():
    assert np.abs(mat_vec(rotation(math.pi / 2), [1.0, 0.0]) - np.array([0.0, 1.0])).max() < 1e-15


def test_mat_vec_dimension_mismatch():
    with pytest.raises(ValueError):
        mat_vec(np.eye(2), np.ones(3))


def test_dagger_identity():
    assert np.array_equal(dagger(np.eye(4)), np.eye(4, dtype=np.complex128))


def test_dagger_is_involution():
    rng = np.random.default_rng(3)
    a = rng.uniform(-1, 1, (4, 4)) + 1j * rng.uniform(-1, 1, (4, 4))
    assert np.array_equal(dagger(dagger(a)), a)


def test_dagger_of_rotation_reverses_angle():
    assert np.abs(dagger(rotation(0.7)) - rotation(-0.7)).max() < 1e-15


def test_dagger_antihomomorphism():
    rng = np.random.default_rng(4)
    a = rng.uniform(-1, 1, (3, 3)) + 1j * rng.uniform(-1, 1, (3, 3))
    b = rng.uniform(-1, 1, (3, 3)) + 1j * rng.uniform(-1, 1, (3, 3))
    assert np.abs(dagger(mat_mul(a, b)) - mat_mul(dagger(b), dagger(a))).max() < 1e-12


def test_unitarity_defect_identity():
    assert unitarity_defect(np.eye(5)) == 0.0


def test_unitarity_defect_diagonal():
    # diag(1, 2): gram is diag(1, 4), so the defect is |4 - 1| = 3.
    assert unitarity_defect(np.diag([1.0, 2.0])) == pytest.approx(3.0, abs=0)


def test_unitarity_defect_requires_square():
    with pytest.raises(ValueError):
        unitarity_defect(np.ones((2, 3)))


def test_eigen_residual_identity():
    assert eigen_residual(np.eye(3), 1.0, [1.0, 0.0, 0.0]) == 0.0


def test_eigen_residual_bitflip():
    v = np.array([1.0, 1.0]) / math.sqrt(2)
    assert eigen_residual(X, 1.0, v) < 1e-15


def test_eigen_residual_rejects_zero_vector():
    with pytest.raises(ValueError):
        eigen_residual(np.eye(2), 1.0, [0.0, 0.0])


def test_eigen_residual_dimension_mismatch():
    with pytest.raises(ValueError):
        eigen_residual(np.eye(2), 1.0, [1.0, 0.0, 0.0])
