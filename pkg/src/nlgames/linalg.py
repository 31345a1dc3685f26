"""Small dense linear algebra: Hermitian eigendecomposition by cyclic Jacobi
rotations, matrix functions built on it, and random test objects."""
from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-9


def max_entry(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    return max_entry(a - a.conj().T) <= tol


def is_unitary(u, tol: float = HERMITIAN_TOL) -> bool:
    return max_entry(u.conj().T @ u - np.eye(u.shape[0])) <= tol


def jacobi_eigh(a, tol: float = 1e-14, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.

    Cyclic Jacobi: each rotation first rotates the phase of a[p, q] away,
    then applies the real symmetric rotation that zeroes it.
    """
    A = np.array(a, dtype=complex)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    A = (A + A.conj().T) / 2
    V = np.eye(n, dtype=complex)
    scale = max(max_entry(A), 1e-300)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(A - np.diag(np.diag(A))) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = complex(A[p, q])
                r = abs(apq)
                if r <= tol * scale * 1e-3:
                    continue
                phase = apq / r
                app, aqq = A[p, p].real, A[q, q].real
                tau = (aqq - app) / (2 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1 + tau * tau))
                c = 1 / np.sqrt(1 + t * t)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                g10 = -s * phase.conjugate()
                g11 = c * phase.conjugate()
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp + g10 * cq
                A[:, q] = s * cp + g11 * cq
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp + g10.conjugate() * rq
                A[q, :] = s * rp + g11.conjugate() * rq
                A[p, q] = A[q, p] = 0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp + g10 * vq
                V[:, q] = s * vp + g11 * vq
    w = np.real(np.diag(A))
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def hermitian_function(a, f) -> np.ndarray:
    w, V = jacobi_eigh(a)
    return (V * f(w)) @ V.conj().T


def psd_sqrt(a) -> np.ndarray:
    """Square root of a positive semidefinite matrix (tiny negative eigenvalues clipped)."""
    return hermitian_function(a, lambda w: np.sqrt(np.clip(w, 0, None)))


def trace_norm(a) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    w, _ = jacobi_eigh(a)
    return float(np.sum(np.abs(w)))


def projector_from_observable(x) -> np.ndarray:
    """P0 = (I + X)/2, the +1 eigenspace projector of a ±1 observable."""
    x = np.asarray(x, dtype=complex)
    return (np.eye(x.shape[0]) + x) / 2


def observable_from_projector(p0) -> np.ndarray:
    p0 = np.asarray(p0, dtype=complex)
    return 2 * p0 - np.eye(p0.shape[0])


# -- random objects ------------------------------------------------------------

def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary: QR of a complex Gaussian matrix with the phase of R fixed."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_state(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_observable(d: int, rng: np.random.Generator, n_minus: int | None = None) -> np.ndarray:
    """U diag(±1) U^† with ``n_minus`` eigenvalues -1 (random count if None)."""
    if n_minus is None:
        n_minus = int(rng.integers(0, d + 1))
    signs = np.ones(d)
    signs[:n_minus] = -1
    u = random_unitary(d, rng)
    return (u * signs) @ u.conj().T


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    if rank is None:
        rank = int(rng.integers(1, d + 1))
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_povm(d: int, v: int, rng: np.random.Generator) -> list[np.ndarray]:
    """v PSD elements summing to I: S^-1/2 G_i S^-1/2 with S = sum G_i."""
    # total rank >= d keeps S invertible
    ranks = rng.integers(1, d + 1, size=v)
    while ranks.sum() < d:
        ranks = rng.integers(1, d + 1, size=v)
    gs = []
    for k in ranks:
        g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
        gs.append(g @ g.conj().T)
    s = sum(gs)
    s_inv_half = hermitian_function(s, lambda w: 1 / np.sqrt(w))
    return [s_inv_half @ g @ s_inv_half for g in gs]
