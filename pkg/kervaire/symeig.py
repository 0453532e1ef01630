"""
Dense symmetric eigensolver (cyclic Jacobi rotations)
"""

from typing import Tuple

import numpy as np

from kervaire.errors import NoConvergence, NotSymmetric

MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-12


def check_symmetric(a: np.ndarray, tol: float = SYMMETRY_TOL) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    if np.abs(a - a.T).max(initial=0.0) > tol * scale:
        raise NotSymmetric("matrix is not symmetric", {'asymmetry': float(np.abs(a - a.T).max())})
    return a


def off_diagonal(a: np.ndarray) -> float:
    """Frobenius norm of the off-diagonal part, summed entrywise"""
    return float(np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2)))


def sym_eigen(a, max_sweeps: int = MAX_SWEEPS) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
    symmetric matrix.

    Each sweep visits every (p, q) pair once and applies the rotation that
    zeroes a[p, q]. Iteration stops once the off-diagonal mass is below
    round-off relative to the Frobenius norm.
    """
    a = check_symmetric(a).copy()
    n = a.shape[0]
    v = np.eye(n)
    if n == 0:
        return np.zeros(0), v
    norm = np.linalg.norm(a)
    # round-off floor grows with n
    threshold = max(1e-13, 4 * n * np.finfo(float).eps) * norm

    for _ in range(max_sweeps):
        off = off_diagonal(a)
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300 or abs(apq) < 1e-18 * norm:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    else:
        off = off_diagonal(a)
        if off > threshold:
            raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps",
                                {'off_diagonal': float(off), 'size': n})

    values = np.diag(a).copy()
    order = np.argsort(values, kind='stable')
    return values[order], v[:, order]
