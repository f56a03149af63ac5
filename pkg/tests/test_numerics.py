import numpy as np
import pytest

from cmcq import numerics as nx
from cmcq.demo import RHO
from cmcq.states import random_mixed


def naive_partial_trace(m, dA, dB, keep):
    # explicit index loops, independent of the einsum path
    out = np.zeros((dA, dA) if keep == "A" else (dB, dB), dtype=complex)
    for i in range(out.shape[0]):
        for j in range(out.shape[1]):
            for k in range(dB if keep == "A" else dA):
                if keep == "A":
                    out[i, j] += m[i * dB + k, j * dB + k]
                else:
                    out[i, j] += m[k * dB + i, k * dB + j]
    return out


def naive_partial_transpose(m, dA, dB):
    out = np.zeros_like(m, dtype=complex)
    for i in range(dA):
        for j in range(dA):
            for k in range(dB):
                for l in range(dB):
                    out[i * dB + k, j * dB + l] = m[i * dB + l, j * dB + k]
    return out


def test_hermitian_eigenvalues_examples():
    np.testing.assert_allclose(nx.hermitian_eigenvalues(np.eye(3)), [1, 1, 1])
    np.testing.assert_allclose(nx.hermitian_eigenvalues(np.diag([2.0, -1.0])), [-1, 2])
    np.testing.assert_allclose(nx.hermitian_eigenvalues(np.array([[0, 1], [1, 0]])), [-1, 1])


def test_hermitian_eigenvalues_rejects_non_hermitian():
    with pytest.raises(ValueError):
        nx.hermitian_eigenvalues(np.array([[0, 1], [0, 0]]))


def test_singular_values_examples():
    np.testing.assert_allclose(nx.singular_values(np.zeros((3, 3))), [0, 0, 0])
    np.testing.assert_allclose(nx.singular_values(np.diag([3.0, -4.0])), [4, 3])
    np.testing.assert_allclose(nx.singular_values(np.array([[0, 1], [0, 0]])), [1, 0])


def test_trace_norm_examples():
    assert nx.trace_norm(np.diag([0.5, -0.5])) == pytest.approx(1.0)
    assert nx.trace_norm(np.diag([0, 0.5, -0.5, 0.5])) == pytest.approx(1.5)
    assert nx.trace_norm(np.zeros((2, 2))) == 0.0


def test_trace_norm_matches_eigen_route(rng):
    for _ in range(50):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        # ||M||_tr = tr sqrt(M^dag M)
        ev = np.linalg.eigvalsh(m.conj().T @ m)
        assert nx.trace_norm(m) == pytest.approx(np.sqrt(np.clip(ev, 0, None)).sum(), rel=1e-10)


def test_kron_example():
    np.testing.assert_allclose(nx.kron(np.diag([1, 2]), np.diag([3, 4])), np.diag([3, 4, 6, 8]))


def test_partial_trace_examples(bell):
    a = np.array([[0.7, 0.1j], [-0.1j, 0.3]])
    b = np.diag([0.2, 0.5, 0.3])
    np.testing.assert_allclose(nx.partial_trace(np.kron(a, b), 2, 3, "A"), a, atol=1e-15)
    np.testing.assert_allclose(nx.partial_trace(np.kron(a, b), 2, 3, "B"), b, atol=1e-15)
    np.testing.assert_allclose(nx.partial_trace(bell.m, 2, 2), np.eye(2) / 2, atol=1e-15)
    np.testing.assert_allclose(np.diag(nx.partial_trace(RHO, 2, 2)).real, [0.81508, 0.18492], atol=1e-12)


def test_partial_trace_and_transpose_match_loops(rng):
    for dA, dB in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        m = random_mixed(dA, dB, rng).m
        for keep in "AB":
            np.testing.assert_allclose(nx.partial_trace(m, dA, dB, keep), naive_partial_trace(m, dA, dB, keep), atol=1e-14)
        np.testing.assert_allclose(nx.partial_transpose(m, dA, dB), naive_partial_transpose(m, dA, dB), atol=1e-15)


def test_partial_transpose_examples(bell):
    sep = np.diag([0.1, 0.2, 0.3, 0.4])
    np.testing.assert_allclose(nx.partial_transpose(sep, 2, 2), sep)
    assert np.linalg.eigvalsh(nx.partial_transpose(bell.m, 2, 2)).min() == pytest.approx(-0.5)
    assert np.linalg.eigvalsh(nx.partial_transpose(RHO, 2, 2)).min() < 0


def test_psd_check_tolerance():
    assert nx.psd_check(np.eye(3))
    assert not nx.psd_check(np.diag([1, -1e-6]), 1e-9)
    assert nx.psd_check(np.diag([1, -1e-12]), 1e-9)


def test_psd_sqrt_squares_back(rng):
    m = random_mixed(2, 2, rng).m
    r = nx.psd_sqrt(m)
    np.testing.assert_allclose(r @ r, m, atol=1e-12)


def test_random_unitary(rng):
    u = nx.random_unitary(4, rng)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(4), atol=1e-12)
