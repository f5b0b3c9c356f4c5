"""Discrete phase space for n qudits of odd prime dimension d.

Phase points are stored as integer vectors ``(q_1, ..., q_n, p_1, ..., p_n)``.
Distributions over the phase space are flat vectors of length ``d**(2n)``
indexed subsystem-major: the point ``z`` lives at the flat index of the
multi-index ``(q_1, p_1, q_2, p_2, ..., q_n, p_n)`` in a ``(d,) * 2n`` array.
With this layout the distribution of a product state is the Kronecker
product of the factors' distributions.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

MAX_DIM = 729


def is_odd_prime(d: int) -> bool:
    if d < 3 or d % 2 == 0:
        return False
    k = 3
    while k * k <= d:
        if d % k == 0:
            return False
        k += 2
    return True


def check_dim(d: int, n: int = 1) -> None:
    """Raise ``ValueError`` unless ``d`` is an odd prime and ``d**n`` is supported."""
    if int(d) != d or not is_odd_prime(int(d)):
        raise ValueError(f"d must be an odd prime, got {d}")
    if int(n) != n or n < 1:
        raise ValueError(f"number of qudits must be a positive integer, got {n}")
    if d**n > MAX_DIM:
        raise ValueError(f"Hilbert space dimension {d}**{n} exceeds MAX_DIM={MAX_DIM}")


@lru_cache(maxsize=None)
def roots_of_unity(d: int) -> np.ndarray:
    """``omega**k`` for ``k = 0..d-1`` with ``omega = exp(2 pi i / d)``."""
    out = np.exp(2j * np.pi * np.arange(d) / d)
    out.setflags(write=False)
    return out


def half(d: int) -> int:
    """Multiplicative inverse of 2 in Z_d, so that tau = omega**half(d)."""
    return (d + 1) // 2


def as_point(z, d: int) -> np.ndarray:
    z = np.asarray(z, dtype=np.int64)
    if z.ndim != 1 or len(z) == 0 or len(z) % 2:
        raise ValueError("phase point must be a flat vector of even length (q..., p...)")
    return np.mod(z, d)


def num_qudits(z) -> int:
    return len(z) // 2


def symplectic_product(z, y, d: int = 3) -> int:
    """Symplectic form ``eta(z, y) = q_y . p_z - p_y . q_z  (mod d)``."""
    z = as_point(z, d)
    y = as_point(y, d)
    if len(z) != len(y):
        raise ValueError(f"phase points of different length: {len(z)} vs {len(y)}")
    n = num_qudits(z)
    qz, pz = z[:n], z[n:]
    qy, py = y[:n], y[n:]
    return int((qy @ pz - py @ qz) % d)


def all_points(d: int, n: int = 1) -> np.ndarray:
    """All phase points in flat-index order, shape ``(d**(2n), 2n)`` as (q..., p...)."""
    grid = np.indices((d,) * (2 * n)).reshape(2 * n, -1).T
    # grid columns are (q1, p1, q2, p2, ...); reorder to (q..., p...)
    return np.concatenate([grid[:, 0::2], grid[:, 1::2]], axis=1)


def point_index(z, d: int) -> int:
    z = as_point(z, d)
    n = num_qudits(z)
    inter = np.empty(2 * n, dtype=np.int64)
    inter[0::2] = z[:n]
    inter[1::2] = z[n:]
    return int(np.ravel_multi_index(tuple(inter), (d,) * (2 * n)))


def time_reversal_permutation(d: int, n: int = 1) -> np.ndarray:
    """Index map ``i -> index(z_bar)`` where ``z_bar`` negates every momentum."""
    pts = all_points(d, n)
    pts[:, n:] = np.mod(-pts[:, n:], d)
    inter = np.empty_like(pts)
    inter[:, 0::2] = pts[:, :n]
    inter[:, 1::2] = pts[:, n:]
    return np.ravel_multi_index(tuple(inter.T), (d,) * (2 * n))


@lru_cache(maxsize=None)
def _single_displacements(d: int) -> np.ndarray:
    """Stack ``D[q, p]`` of single-qudit displacement operators, shape (d, d, d, d)."""
    w = roots_of_unity(d)
    h = half(d)
    k = np.arange(d)
    out = np.zeros((d, d, d, d), dtype=complex)
    for q in range(d):
        for p in range(d):
            # D|k> = tau^{qp} omega^{pk} |k+q>, all phases exact powers of omega
            out[q, p, (k + q) % d, k] = w[(h * q * p + p * k) % d]
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def single_phase_point_operators(d: int) -> np.ndarray:
    """Stack ``A[q, p]`` of single-qudit phase-point operators, shape (d, d, d, d).

    Built directly from ``A_z = (1/d) sum_y omega**eta(z, y) D_y``.
    """
    check_dim(d)
    w = roots_of_unity(d)
    D = _single_displacements(d)
    q = np.arange(d)
    out = np.zeros((d, d, d, d), dtype=complex)
    for zq in range(d):
        for zp in range(d):
            # eta(z, y) = q_y p_z - p_y q_z
            phase = w[(q[:, None] * zp - q[None, :] * zq) % d]
            out[zq, zp] = np.einsum("ab,abij->ij", phase, D) / d
    out.setflags(write=False)
    return out


def _kron_all(mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def displacement_operator(z, d: int = 3) -> np.ndarray:
    """Heisenberg-Weyl displacement ``D_z = tau**(qp) X**q Z**p`` (tensored over qudits)."""
    z = as_point(z, d)
    n = num_qudits(z)
    check_dim(d, n)
    D = _single_displacements(d)
    return _kron_all(D[z[i], z[n + i]] for i in range(n))


def phase_point_operator(z, d: int = 3) -> np.ndarray:
    """Phase-point operator ``A_z``; Hermitian, unitary, unit trace."""
    z = as_point(z, d)
    n = num_qudits(z)
    check_dim(d, n)
    A = single_phase_point_operators(d)
    return _kron_all(A[z[i], z[n + i]] for i in range(n))


def phase_point_operator_from_sum(z, d: int = 3) -> np.ndarray:
    """``A_z`` evaluated term by term over the full 2n-dimensional phase space.

    Slow; used as a cross-check of the factorised construction.
    """
    z = as_point(z, d)
    n = num_qudits(z)
    check_dim(d, n)
    w = roots_of_unity(d)
    dim = d**n
    out = np.zeros((dim, dim), dtype=complex)
    for y in all_points(d, n):
        out += w[symplectic_product(z, y, d)] * displacement_operator(y, d)
    return out / dim


def phase_point_stack(d: int, n: int = 1) -> np.ndarray:
    """All ``A_z`` in flat-index order, shape ``(d**(2n), d**n, d**n)``."""
    check_dim(d, n)
    A = single_phase_point_operators(d).reshape(d * d, d, d)
    out = A
    for _ in range(n - 1):
        out = np.einsum("aij,bkl->abikjl", out, A).reshape(
            out.shape[0] * d * d, out.shape[1] * d, out.shape[2] * d
        )
    return out
