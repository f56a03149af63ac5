import numpy as np
import pytest

from cmcq import numerics as nx
from cmcq.concurrence import (
    TRANSFER_FACTORS,
    concurrence_lower_bound,
    concurrence_pure,
    concurrence_pure_schmidt,
    schmidt_sum_inequality_check,
    wootters_concurrence,
)
from cmcq.eparam import e_pure
from cmcq.errors import DimensionMismatch
from cmcq.states import bell_diagonal, pure_from_schmidt, random_mixed, random_pure, random_schmidt, random_separable


def wootters_oracle(m):
    # eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho)), the Hermitian route
    yy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])
    r = nx.psd_sqrt(m)
    h = r @ yy @ m.conj() @ yy @ r
    mu = np.sort(np.sqrt(np.clip(np.linalg.eigvalsh(0.5 * (h + h.conj().T)), 0, None)))[::-1]
    return max(0.0, mu[0] - mu[1:].sum())


def test_concurrence_pure_examples():
    assert concurrence_pure([0.5, 0.5]).value == pytest.approx(1.0)
    assert concurrence_pure([1, 0, 0]).value == 0
    assert concurrence_pure([0.5, 0.3, 0.2]).value == pytest.approx(np.sqrt(3 * 0.31), abs=1e-14)
    assert concurrence_pure([0.5, 0.3, 0.2]).value == pytest.approx(0.96437, abs=1e-5)


def test_concurrence_forms_agree(rng):
    for _ in range(100):
        lam = random_schmidt(int(rng.integers(2, 7)), rng)
        assert concurrence_pure(lam).value == pytest.approx(concurrence_pure_schmidt(lam), abs=1e-12)


def test_wootters_examples(rng):
    assert wootters_concurrence(pure_from_schmidt([0.9, 0.1])).value == pytest.approx(0.6, abs=1e-12)
    assert wootters_concurrence(bell_diagonal([0.7, 0.1, 0.1, 0.1])).value == pytest.approx(0.4, abs=1e-12)
    for _ in range(20):
        assert wootters_concurrence(random_separable(2, 2, rng)).value < 1e-7
    with pytest.raises(DimensionMismatch):
        wootters_concurrence(random_mixed(3, 3, rng))


def test_wootters_matches_hermitian_oracle(rng):
    for _ in range(100):
        rho = random_mixed(2, 2, rng)
        assert wootters_concurrence(rho).value == pytest.approx(wootters_oracle(rho.m), abs=1e-8)


def test_lower_bound_examples(rng):
    for _ in range(50):
        lam = random_schmidt(2, rng)
        b = concurrence_lower_bound(pure_from_schmidt(lam))
        assert b.kind == "lower_from_E"
        assert b.value == pytest.approx(wootters_concurrence(pure_from_schmidt(lam)).value, abs=1e-10)
    for _ in range(50):
        p = rng.dirichlet(np.ones(4))
        rho = bell_diagonal(p)
        b = concurrence_lower_bound(rho)
        assert b.value == pytest.approx(max(0, 2 * p.max() - 1), abs=1e-9)
    b = concurrence_lower_bound(pure_from_schmidt([1 / 3] * 3))
    assert b.e.value == pytest.approx(1) and b.value == pytest.approx(0.5) and b.factor == 0.5
    assert concurrence_pure([1 / 3] * 3).value == pytest.approx(1)
    with pytest.raises(DimensionMismatch):
        concurrence_lower_bound(pure_from_schmidt([0.2] * 5))


def test_transfer_soundness_on_mixed(rng):
    # the bound never exceeds the exact two-qubit value
    for _ in range(200):
        rho = random_mixed(2, 2, rng, rank=int(rng.integers(1, 5)))
        assert concurrence_lower_bound(rho).value <= wootters_concurrence(rho).value + 1e-9


def test_transfer_soundness_on_pure(rng):
    for d, f in TRANSFER_FACTORS.items():
        for _ in range(50):
            lam = random_schmidt(d, rng)
            assert concurrence_pure(lam).value >= f * e_pure(lam).value - 1e-10
            rho = random_pure(d, d, rng)
            assert concurrence_lower_bound(rho).value <= concurrence_pure(np.linalg.eigvalsh(rho.reduced("A")).clip(0)).value + 1e-9


def test_schmidt_sum_inequality(rng):
    assert schmidt_sum_inequality_check([0.25] * 4)
    assert schmidt_sum_inequality_check([1, 0, 0])
    for _ in range(10_000):
        assert schmidt_sum_inequality_check(random_schmidt(int(rng.integers(2, 7)), rng))
