"""Wigner representation of qudit states and channels, and negativity monotones."""

from __future__ import annotations

import math

import numpy as np

from .phase_space import (
    check_dim,
    displacement_operator,
    single_phase_point_operators,
    time_reversal_permutation,
)

NORM_TOL = 1e-10
CHOI_TOL = 1e-8

# Standard qutrit magic state; its Wigner function is -1/3 at the origin and
# 1/6 elsewhere with tau = -omega**(1/2).
STRANGE_KET = np.array([0.0, 1.0, -1.0]) / math.sqrt(2.0)


def strange_state() -> np.ndarray:
    return np.outer(STRANGE_KET, STRANGE_KET.conj()).astype(complex)


def noisy_strange_state(eps: float) -> np.ndarray:
    """Depolarised Strange state ``(1 - eps)|S><S| + eps * 1/3``."""
    return (1.0 - eps) * strange_state() + eps * np.eye(3) / 3.0


def _num_qudits(dim: int, d: int) -> int:
    n = round(math.log(dim, d))
    if d**n != dim:
        raise ValueError(f"dimension {dim} is not a power of d={d}")
    return n


def _contract_phase_points(op: np.ndarray, d: int, n: int) -> np.ndarray:
    """Return ``tr[A_z op]`` for every phase point, flat-index order."""
    A = single_phase_point_operators(d).reshape(d * d, d, d)
    # axes: (rows..., cols...) of op still open, then contracted point axes
    t = op.reshape((d,) * (2 * n))
    for _ in range(n):
        # tr[A op] = sum_{ab} A[a, b] op[b, a]; contract the leading row/col pair
        t = np.tensordot(A, t, axes=([1, 2], [n, 0]))
        t = np.moveaxis(t, 0, -1)
        n -= 1
    return t.reshape(-1)


def wigner_of_state(rho, d: int = 3) -> np.ndarray:
    """Wigner quasi-distribution ``W(z) = tr[A_z rho] / d**n``.

    Parameters
    ----------
    rho : array_like
        Density matrix on ``n`` qudits, shape ``(d**n, d**n)``.
    d : int
        Local dimension, an odd prime.

    Returns
    -------
    numpy.ndarray
        Real vector of length ``d**(2n)`` in flat phase-point order.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    n = _num_qudits(rho.shape[0], d)
    check_dim(d, n)
    if np.abs(rho - rho.conj().T).max() > NORM_TOL:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > NORM_TOL:
        raise ValueError(f"density matrix has trace {np.trace(rho).real:.3g}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -CHOI_TOL:
        raise ValueError("density matrix is not positive semidefinite")
    vals = _contract_phase_points(rho, d, n) / d**n
    if np.abs(vals.imag).max() > NORM_TOL:
        raise ValueError("Wigner values have non-negligible imaginary part")
    return vals.real.copy()


def state_from_wigner(w, d: int = 3) -> np.ndarray:
    """Inverse transform ``rho = sum_z W(z) A_z``."""
    w = np.asarray(w, dtype=float)
    n = _num_qudits(int(round(math.sqrt(len(w)))), d)
    if len(w) != d ** (2 * n):
        raise ValueError(f"length {len(w)} is not d**(2n) for d={d}")
    check_dim(d, n)
    A = single_phase_point_operators(d).reshape(d * d, d, d)
    t = w.reshape((d * d,) * n)
    # expand one subsystem at a time: point axis -> (row, col) axes
    for _ in range(n):
        t = np.tensordot(t, A, axes=([0], [0]))
    # axes now (r1, c1, r2, c2, ...); regroup rows then cols
    t = t.transpose(list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2)))
    return t.reshape(d**n, d**n)


def _partial_trace_second(J: np.ndarray, dim_a: int, dim_b: int) -> np.ndarray:
    return np.trace(J.reshape(dim_a, dim_b, dim_a, dim_b), axis1=1, axis2=3)


def choi_state(channel, dim_in: int) -> np.ndarray:
    """Choi state ``(id x E)|phi+><phi+|`` for a map given as a Python callable."""
    blocks = []
    for j in range(dim_in):
        row = []
        for k in range(dim_in):
            e = np.zeros((dim_in, dim_in), dtype=complex)
            e[j, k] = 1.0
            row.append(np.asarray(channel(e), dtype=complex))
        blocks.append(row)
    return np.block(blocks) / dim_in


def unitary_choi(U) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    return choi_state(lambda x: U @ x @ U.conj().T, U.shape[0])


def displacement_choi(a, d: int = 3) -> np.ndarray:
    return unitary_choi(displacement_operator(a, d))


def depolarizing_choi(p: float, dim: int) -> np.ndarray:
    """Choi state of ``rho -> (1 - p) rho + p tr[rho] 1/dim``."""
    return choi_state(lambda x: (1 - p) * x + p * np.trace(x) * np.eye(dim) / dim, dim)


def wigner_of_channel(choi, d: int = 3, n_in: int | None = None, n_out: int | None = None):
    """Stochastic-representation matrix ``W[y, z] = W_E(y|z)``.

    ``W_E(y|z) = d_A**2 W_J(z_bar + y)`` with ``z_bar`` the momentum-reversed input
    point. Columns index input points, rows output points; each column sums to 1.
    """
    J = np.asarray(choi, dtype=complex)
    total = _num_qudits(J.shape[0], d)
    if n_in is None and n_out is None:
        if total % 2:
            raise ValueError("cannot infer input/output sizes; pass n_in or n_out")
        n_in = n_out = total // 2
    elif n_in is None:
        n_in = total - n_out
    elif n_out is None:
        n_out = total - n_in
    if n_in + n_out != total or n_in < 1 or n_out < 1:
        raise ValueError("n_in + n_out does not match the Choi state dimension")
    dim_a, dim_b = d**n_in, d**n_out
    if np.abs(J - J.conj().T).max() > CHOI_TOL:
        raise ValueError("Choi state is not Hermitian")
    if abs(np.trace(J) - 1.0) > CHOI_TOL:
        raise ValueError("Choi state does not have unit trace")
    if np.linalg.eigvalsh(J).min() < -CHOI_TOL:
        raise ValueError("Choi state is not positive: map is not completely positive")
    if np.abs(_partial_trace_second(J, dim_a, dim_b) - np.eye(dim_a) / dim_a).max() > CHOI_TOL:
        raise ValueError("Choi state marginal is not maximally mixed: map is not trace preserving")
    WJ = (_contract_phase_points(J, d, total) / d**total).real
    WJ = WJ.reshape(d ** (2 * n_in), d ** (2 * n_out))
    return dim_a**2 * WJ[time_reversal_permutation(d, n_in)].T


def apply_channel(WE, w) -> np.ndarray:
    WE = np.asarray(WE, dtype=float)
    w = np.asarray(w, dtype=float)
    if WE.ndim != 2 or WE.shape[1] != w.shape[0]:
        raise ValueError(f"channel with {WE.shape[1]} inputs applied to {w.shape[0]}-point vector")
    return WE @ w


def sum_negativity(w) -> float:
    w = np.asarray(w, dtype=float)
    return float(-w[w < 0].sum())


def mana(w, base: float | None = None) -> float:
    """``log(2 sn + 1) = log sum_z |W(z)|``; natural log unless ``base`` is given."""
    val = math.log(2.0 * sum_negativity(w) + 1.0)
    return val / math.log(base) if base else val


def is_free(w, tol: float = NORM_TOL) -> bool:
    return bool(np.min(w) >= -tol)


def is_stochastic(WE, tol: float = NORM_TOL) -> bool:
    WE = np.asarray(WE, dtype=float)
    return bool(WE.min() >= -tol and np.abs(WE.sum(axis=0) - 1.0).max() <= tol)
