"""Geometric measure of quantum discord: three evaluators plus an oracle.

All four routes compute the same quantity for a two-qubit state measured
on subsystem A:

* ``gmqd_k``      -- (1/4)(|x|^2 + |R|^2 - k_max) with k_max the largest
                     eigenvalue of K = x x^T + R R^T.
* ``gmqd_svd``    -- (1/4)(sum_k L_k^2 - max_k L_k^2) from the singular
                     values L_k of the 3 x 4 matrix [x | R].
* ``x_lambdas``   -- closed forms of the L_k^2 for X states.
* ``gmqd_oracle`` -- brute-force minimum of the squared Hilbert-Schmidt
                     distance between rho and its projectively measured
                     image, over measurement directions on A.  Fully
                     independent of the three formulas above; exists to
                     audit them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .constants import BREAKDOWN_ATOL, EIG_CLAMP, ORACLE_REFINE_TOL
from .numerics import symmetric_eigenvalues
from .qstate import DensityMatrix, XState, bloch_decompose, build_r_prime

__all__ = [
    "GmqdBreakdown",
    "MeasurementDirection",
    "gmqd_k",
    "gmqd_svd",
    "x_lambdas",
    "gmqd_oracle",
    "measurement_residual",
]


@dataclass(frozen=True)
class GmqdBreakdown:
    """Discord value together with the spectrum that produced it.

    ``lambda_sq`` holds the three squared singular values (in closed-form
    order for X states, descending otherwise); ``k_eigen`` the
    eigenvalues of K.  The two coincide because K is the Gram matrix of
    [x | R].  ``max_index`` is the index of the first maximum in
    ``lambda_sq``.
    """

    lambda_sq: tuple[float, float, float]
    k_eigen: tuple[float, float, float]
    value: float
    max_index: int

    def __post_init__(self):
        expected = 0.25 * (sum(self.lambda_sq) - max(self.lambda_sq))
        if abs(self.value - expected) > BREAKDOWN_ATOL:
            raise ValueError(
                f"inconsistent breakdown: value {self.value!r} vs {expected!r}"
            )
        if not -BREAKDOWN_ATOL <= self.value <= 0.5 + BREAKDOWN_ATOL:
            raise ValueError(f"discord value {self.value!r} out of [0, 1/2]")


@dataclass(frozen=True)
class MeasurementDirection:
    """Polar/azimuthal angles of a measurement axis on the Bloch sphere."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta {self.theta!r} outside [0, pi]")
        if not 0.0 <= self.phi < 2.0 * np.pi:
            raise ValueError(f"phi {self.phi!r} outside [0, 2 pi)")


def _clamp_spectrum(eigs: np.ndarray) -> np.ndarray:
    if eigs[-1] < -EIG_CLAMP:
        raise ArithmeticError(
            f"kernel eigenvalue unexpectedly negative: {eigs[-1]:.3e}"
        )
    return np.clip(eigs, 0.0, None)


def _breakdown(lambda_sq, value=None) -> GmqdBreakdown:
    lam = tuple(float(v) for v in lambda_sq)
    max_index = max(range(3), key=lambda i: (lam[i], -i))
    if value is None:
        value = 0.25 * (sum(lam) - lam[max_index])
    value = float(value)
    if -BREAKDOWN_ATOL < value < 0.0:
        value = 0.0
    return GmqdBreakdown(lam, lam, value, max_index)


def gmqd_k(d: DensityMatrix) -> GmqdBreakdown:
    """Discord from the largest eigenvalue of K = x x^T + R R^T.

    The norm term |x|^2 + |R|^2 is accumulated directly from the Bloch
    components, not from the eigenvalue sum.
    """
    b = bloch_decompose(d)
    k = np.outer(b.x, b.x) + b.R @ b.R.T
    eigs = _clamp_spectrum(symmetric_eigenvalues(k))
    norm_sq = float(b.x @ b.x + np.sum(b.R * b.R))
    value = 0.25 * (norm_sq - eigs[0])
    if -BREAKDOWN_ATOL < value < 0.0:
        value = 0.0
    lam = tuple(float(v) for v in eigs)
    return GmqdBreakdown(lam, lam, float(value), 0)


def gmqd_svd(d: DensityMatrix) -> GmqdBreakdown:
    """Discord from the squared singular values of [x | R]."""
    r_prime = build_r_prime(bloch_decompose(d))
    eigs = _clamp_spectrum(symmetric_eigenvalues(r_prime @ r_prime.T))
    return _breakdown(eigs)


def x_lambdas(s: XState) -> GmqdBreakdown:
    """Closed-form squared singular values of an X state.

    With a = |rho14| and b = |rho23| the transverse block of the
    correlation matrix has singular values 2(a + b) and 2|a - b| exactly,
    so

        L1^2 = 4 (a + b)^2
        L2^2 = 4 (a - b)^2
        L3^2 = 2 [(rho11 - rho33)^2 + (rho22 - rho44)^2].

    Mixed products of the coherences enter only through their moduli:
    their phases rotate the transverse block without touching its
    singular values.
    """
    a = abs(s.rho14)
    b = abs(s.rho23)
    lam1 = 4.0 * (a + b) ** 2
    lam2 = 4.0 * (a - b) ** 2
    lam3 = 2.0 * ((s.rho11 - s.rho33) ** 2 + (s.rho22 - s.rho44) ** 2)
    return _breakdown((lam1, lam2, lam3))


def _projectors(theta, phi) -> np.ndarray:
    """Qubit projectors (I +/- n.s)/2 for axis n(theta, phi), batched.

    ``theta`` and ``phi`` are broadcast-compatible arrays; the result has
    shape broadcast_shape + (2, 2, 2) with the +/- pair on the leading
    new axis.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    nx = np.sin(theta) * np.cos(phi)
    ny = np.sin(theta) * np.sin(phi)
    nz = np.cos(theta)
    shape = np.broadcast(nx, ny, nz).shape
    p = np.empty((2,) + shape + (2, 2), dtype=complex)
    for sign, block in ((1.0, p[0]), (-1.0, p[1])):
        block[..., 0, 0] = 0.5 * (1.0 + sign * nz)
        block[..., 0, 1] = 0.5 * sign * (nx - 1j * ny)
        block[..., 1, 0] = 0.5 * sign * (nx + 1j * ny)
        block[..., 1, 1] = 0.5 * (1.0 - sign * nz)
    return p


def _embed_on_a(p: np.ndarray) -> np.ndarray:
    """Lift batched 2 x 2 operators to act on qubit A of the pair."""
    shape = p.shape[:-2]
    e = np.zeros(shape + (4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e[..., 2 * i, 2 * j] = p[..., i, j]
            e[..., 2 * i + 1, 2 * j + 1] = p[..., i, j]
    return e


def measurement_residual(d: DensityMatrix, theta, phi):
    """Squared Hilbert-Schmidt distance between rho and its image under a
    projective measurement of qubit A along the axis (theta, phi).

    Accepts scalar or array angles; the computation is a literal
    project-and-subtract on the dense matrix.
    """
    plus, minus = _projectors(theta, phi)
    e_plus = _embed_on_a(plus)
    e_minus = _embed_on_a(minus)
    rho = d.matrix
    measured = e_plus @ rho @ e_plus + e_minus @ rho @ e_minus
    delta = rho - measured
    return np.sum(np.abs(delta) ** 2, axis=(-2, -1))


def gmqd_oracle(
    d: DensityMatrix,
    coarse_steps: int = 180,
    refine: bool = True,
) -> tuple[float, MeasurementDirection]:
    """Brute-force discord: grid search over measurement axes, optionally
    followed by Nelder-Mead refinement from the best grid point.

    The grid has ``coarse_steps + 1`` polar values on [0, pi] and
    ``2 * coarse_steps`` azimuthal values on [0, 2 pi).  Grid ties are
    broken toward the lexicographically smallest (theta, phi) so results
    do not depend on evaluation order.
    """
    if coarse_steps < 16:
        raise ValueError(f"coarse_steps must be >= 16, got {coarse_steps}")
    thetas = np.linspace(0.0, np.pi, coarse_steps + 1)
    phis = np.arange(2 * coarse_steps) * (2.0 * np.pi / (2 * coarse_steps))
    grid = measurement_residual(
        d, thetas[:, None], phis[None, :]
    )
    flat_index = int(np.argmin(grid))
    it, ip = divmod(flat_index, phis.size)
    best_value = float(grid[it, ip])
    best_theta = float(thetas[it])
    best_phi = float(phis[ip])

    if refine:
        result = minimize(
            lambda ang: float(measurement_residual(d, ang[0], ang[1])),
            x0=np.array([best_theta, best_phi]),
            method="Nelder-Mead",
            options={
                "xatol": 1e-9,
                "fatol": ORACLE_REFINE_TOL * 1e-2,
                "maxiter": 600,
            },
        )
        if result.fun <= best_value:
            best_value = float(result.fun)
            best_theta, best_phi = (float(a) for a in result.x)

    # Fold the axis back into canonical (theta, phi) ranges.
    nx = np.sin(best_theta) * np.cos(best_phi)
    ny = np.sin(best_theta) * np.sin(best_phi)
    nz = np.cos(best_theta)
    theta = float(np.arccos(np.clip(nz, -1.0, 1.0)))
    phi = float(np.arctan2(ny, nx)) % (2.0 * np.pi)
    return best_value, MeasurementDirection(theta, phi)
