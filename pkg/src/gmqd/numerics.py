"""Dense linear-algebra kernels for matrices of dimension <= 4.

Everything here is a pure function on small numpy arrays.  The eigensolver
is a cyclic Jacobi iteration: at these sizes it converges in a handful of
sweeps and is unconditionally robust, unlike closed-form cubic/quartic
root formulas.  Complex Hermitian matrices are handled through their
2n x 2n real symmetric embedding

    H = A + iB   ->   [[A, -B], [B, A]],

whose spectrum is that of H with every eigenvalue doubled.
"""

from __future__ import annotations

import math

import numpy as np

from .constants import (
    EIG_CLAMP,
    HERMITICITY_ATOL,
    JACOBI_MAX_SWEEPS,
    JACOBI_OFFDIAG_TOL,
)

__all__ = ["herm_eigenvalues", "singular_values", "symmetric_eigenvalues"]


def _jacobi_eigenvalues(matrix: np.ndarray) -> list[float]:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Operates on a plain list-of-lists copy: for n <= 8 the scalar loop is
    faster than per-rotation numpy calls.  Iterates full sweeps until the
    off-diagonal Frobenius norm falls below ``JACOBI_OFFDIAG_TOL``.
    """
    n = matrix.shape[0]
    a = [[float(matrix[i, j]) for j in range(n)] for i in range(n)]

    for _ in range(JACOBI_MAX_SWEEPS):
        off = 0.0
        for i in range(n - 1):
            row = a[i]
            for j in range(i + 1, n):
                off += row[j] * row[j]
        if math.sqrt(2.0 * off) < JACOBI_OFFDIAG_TOL:
            return [a[i][i] for i in range(n)]

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (
                    abs(theta) + math.sqrt(theta * theta + 1.0)
                )
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                a[p][p] -= t * apq
                a[q][q] += t * apq
                a[p][q] = 0.0
                a[q][p] = 0.0
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = a[k][p]
                    akq = a[k][q]
                    new_p = c * akp - s * akq
                    new_q = s * akp + c * akq
                    a[k][p] = new_p
                    a[p][k] = new_p
                    a[k][q] = new_q
                    a[q][k] = new_q

    raise ArithmeticError("Jacobi iteration failed to converge")


def symmetric_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of a small real symmetric matrix."""
    eigs = _jacobi_eigenvalues(np.asarray(matrix, dtype=float))
    eigs.sort(reverse=True)
    return np.array(eigs)


def herm_eigenvalues(matrix) -> np.ndarray:
    """Descending eigenvalues of a Hermitian matrix of dimension 2, 3 or 4.

    Raises ``ValueError`` if the matrix is not square of a supported size
    or deviates from Hermiticity by more than ``HERMITICITY_ATOL``.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    n = m.shape[0]
    if n not in (2, 3, 4):
        raise ValueError(f"supported dimensions are 2, 3, 4; got {n}")
    defect = np.abs(m - m.conj().T).max()
    if defect > HERMITICITY_ATOL:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")

    h = 0.5 * (m + m.conj().T)
    real = h.real
    imag = h.imag
    if not imag.any():
        return symmetric_eigenvalues(real)

    embedding = np.block([[real, -imag], [imag, real]])
    doubled = sorted(_jacobi_eigenvalues(embedding), reverse=True)
    # Each eigenvalue of h appears twice; average the adjacent pairs.
    return np.array(
        [0.5 * (doubled[2 * k] + doubled[2 * k + 1]) for k in range(n)]
    )


def singular_values(matrix) -> np.ndarray:
    """Descending singular values of a real 3 x 4 matrix.

    Computed from the eigenvalues of ``m @ m.T`` (3 x 3 symmetric),
    clamping eigenvalues in ``[-EIG_CLAMP, 0)`` to zero before the square
    root.
    """
    m = np.asarray(matrix, dtype=float)
    if m.shape != (3, 4):
        raise ValueError(f"expected a 3x4 matrix, got shape {m.shape}")
    gram_eigs = symmetric_eigenvalues(m @ m.T)
    if gram_eigs[-1] < -EIG_CLAMP:
        raise ArithmeticError(
            f"Gram matrix eigenvalue unexpectedly negative: {gram_eigs[-1]:.3e}"
        )
    return np.sqrt(np.clip(gram_eigs, 0.0, None))
