import math

import numpy as np
import pytest

from oracle import ref_wigner
from wigmaj.phase_space import displacement_operator, point_index
from wigmaj.wigner import (
    apply_channel,
    choi_state,
    depolarizing_choi,
    displacement_choi,
    is_free,
    is_stochastic,
    mana,
    noisy_strange_state,
    state_from_wigner,
    strange_state,
    sum_negativity,
    unitary_choi,
    wigner_of_channel,
    wigner_of_state,
)


def random_state(dim, rng, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def test_strange_values():
    w = wigner_of_state(strange_state())
    assert w[0] == pytest.approx(-1 / 3, abs=1e-14)
    assert np.allclose(w[1:], 1 / 6, atol=1e-14)
    assert mana(w) == pytest.approx(math.log(5 / 3), abs=1e-12)


def test_noisy_strange_negativity():
    w = wigner_of_state(noisy_strange_state(0.1))
    assert sum_negativity(w) == pytest.approx(1 / 3 - 0.4 / 9, abs=1e-14)


@pytest.mark.parametrize("dim", [3, 9])
def test_matches_reference_transform(dim):
    rng = np.random.default_rng(dim)
    for _ in range(3):
        rho = random_state(dim, rng)
        assert np.allclose(wigner_of_state(rho), ref_wigner(rho), atol=1e-12)


def test_normalised_and_real():
    rng = np.random.default_rng(1)
    w = wigner_of_state(random_state(9, rng))
    assert w.sum() == pytest.approx(1.0, abs=1e-12)


def test_product_state_is_kron():
    rng = np.random.default_rng(2)
    a, b = random_state(3, rng), random_state(3, rng)
    assert np.allclose(wigner_of_state(np.kron(a, b)), np.kron(wigner_of_state(a), wigner_of_state(b)))


def test_round_trip():
    rng = np.random.default_rng(3)
    rho = random_state(9, rng)
    assert np.allclose(state_from_wigner(wigner_of_state(rho)), rho, atol=1e-13)


def test_stabilizer_state_is_free():
    zero = np.zeros((3, 3))
    zero[0, 0] = 1
    w = wigner_of_state(zero)
    assert is_free(w)
    assert np.allclose(w.reshape(3, 3)[0], 1 / 3)
    assert mana(w) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize(
    "rho,msg",
    [
        (np.eye(3), "trace"),
        (np.array([[1, 1, 0], [0, 0, 0], [0, 0, 0]]), "Hermitian"),
        (np.diag([1.5, -0.5, 0]), "positive"),
        (np.eye(2) / 2, "power"),
    ],
)
def test_rejects_invalid_states(rho, msg):
    with pytest.raises(ValueError, match=msg):
        wigner_of_state(rho)


def test_identity_channel():
    WE = wigner_of_channel(unitary_choi(np.eye(3)))
    assert np.allclose(WE, np.eye(9), atol=1e-12)


def test_displacement_is_permutation():
    a = np.array([1, 2])
    WE = wigner_of_channel(displacement_choi(a))
    assert is_stochastic(WE)
    for z in ([0, 0], [1, 1], [2, 0]):
        y = (np.array(z) + a) % 3
        assert WE[point_index(y, 3), point_index(z, 3)] == pytest.approx(1.0)


def test_channel_action_agrees_with_states():
    rng = np.random.default_rng(4)
    rho = random_state(3, rng)
    U = displacement_operator([2, 1], 3)
    WE = wigner_of_channel(unitary_choi(U))
    assert np.allclose(apply_channel(WE, wigner_of_state(rho)), wigner_of_state(U @ rho @ U.conj().T))


def test_full_depolarising_channel():
    WE = wigner_of_channel(depolarizing_choi(1.0, 3))
    assert np.allclose(WE, 1 / 9)


def test_partial_depolarising_is_stochastic():
    WE = wigner_of_channel(depolarizing_choi(0.4, 3))
    assert is_stochastic(WE)
    w = wigner_of_state(strange_state())
    assert np.allclose(WE @ w, wigner_of_state(noisy_strange_state(0.4)))


def test_rejects_non_trace_preserving():
    J = choi_state(lambda x: 0.5 * x, 3)
    with pytest.raises(ValueError):
        wigner_of_channel(J)


def test_rejects_non_cp():
    J = choi_state(lambda x: x.T, 3)
    with pytest.raises(ValueError, match="completely positive"):
        wigner_of_channel(J)


def test_columns_sum_to_one_for_random_unitary():
    rng = np.random.default_rng(5)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    WE = wigner_of_channel(unitary_choi(q))
    assert np.allclose(WE.sum(axis=0), 1.0)
