import numpy as np
import pytest

from deltadg.spectral import build_basis, interpolate

RNG = np.random.default_rng(7)


def test_degree_one_is_trapezoid():
    b = build_basis(1)
    np.testing.assert_array_equal(b.nodes, [-1.0, 1.0])
    np.testing.assert_allclose(b.weights, [1.0, 1.0], atol=1e-15)


def test_degree_two_nodes_and_weights():
    b = build_basis(2)
    np.testing.assert_allclose(b.nodes, [-1.0, 0.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(b.weights, [1 / 3, 4 / 3, 1 / 3], atol=1e-14)
    # quadrature of x^2 over [-1, 1]
    assert np.dot(b.weights, b.nodes ** 2) == pytest.approx(2 / 3, abs=1e-14)


def test_degree_bounds():
    for bad in (0, -1, 33):
        with pytest.raises(ValueError):
            build_basis(bad)
    build_basis(32)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 6, 8, 12, 16, 24, 32])
def test_nodes_sorted_with_endpoints_and_weight_sum(k):
    b = build_basis(k)
    assert b.nodes[0] == -1.0 and b.nodes[-1] == 1.0
    assert np.all(np.diff(b.nodes) > 0)
    assert np.all(b.weights > 0)
    assert abs(np.sum(b.weights) - 2.0) <= 1e-14


@pytest.mark.parametrize("k", [2, 4, 7, 12])
def test_quadrature_exact_to_degree_2k_minus_1(k):
    b = build_basis(k)
    for m in range(2 * k):
        exact = 0.0 if m % 2 else 2.0 / (m + 1)
        got = np.dot(b.weights, b.nodes ** m)
        assert got == pytest.approx(exact, abs=1e-12)


def test_quadrature_fails_just_past_exactness_degree():
    # k=4 (5 LGL points) is exact through x^7 but not x^8
    b = build_basis(4)
    assert np.dot(b.weights, b.nodes ** 7) == pytest.approx(0.0, abs=1e-14)
    err = abs(np.dot(b.weights, b.nodes ** 8) - 2.0 / 9.0)
    assert err > 1e-4


@pytest.mark.parametrize("k", range(1, 13))
def test_diff_matrix_exact_on_monomials(k):
    b = build_basis(k)
    for m in range(k + 1):
        deriv = b.diff_matrix @ b.nodes ** m
        expected = np.zeros_like(b.nodes) if m == 0 else m * b.nodes ** (m - 1)
        np.testing.assert_allclose(deriv, expected, atol=1e-12)


@pytest.mark.parametrize("k", [1, 3, 6, 12, 20, 32])
def test_diff_matrix_row_sums_vanish(k):
    b = build_basis(k)
    assert np.max(np.abs(b.diff_matrix.sum(axis=1))) <= 1e-13


def test_interpolate_degree_poly_exact():
    b = build_basis(3)
    vals = b.nodes ** 3
    assert interpolate(b, vals, 0.3) == pytest.approx(0.027, abs=1e-15)


def test_interpolate_partition_of_unity():
    b = build_basis(5)
    c = 3.7
    vals = np.full(6, c)
    for xi in RNG.uniform(-1, 1, 20):
        assert interpolate(b, vals, float(xi)) == pytest.approx(c, rel=1e-14)


def test_interpolate_sin_spectrally_accurate():
    b = build_basis(8)
    vals = np.sin(b.nodes)
    for xi in RNG.uniform(-1, 1, 50):
        assert abs(interpolate(b, vals, float(xi)) - np.sin(xi)) <= 1e-6


def test_interpolate_at_node_bit_for_bit():
    b = build_basis(7)
    vals = RNG.standard_normal(8)
    for i, x in enumerate(b.nodes):
        assert interpolate(b, vals, float(x)) == vals[i]


def test_interpolate_rejects_outside_reference_interval():
    b = build_basis(3)
    with pytest.raises(ValueError):
        interpolate(b, np.zeros(4), 1.5)
    with pytest.raises(ValueError):
        interpolate(b, np.zeros(3), 0.0)


def test_basis_arrays_read_only():
    b = build_basis(4)
    with pytest.raises(ValueError):
        b.nodes[0] = 0.0
