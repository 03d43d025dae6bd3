"""Two-qubit state representations and conversions.

Three interchangeable pictures of a two-qubit state are supported:

* ``DensityMatrix`` -- dense 4 x 4 complex matrix in the computational
  basis {|00>, |01>, |10>, |11>}.
* ``XState`` -- seven real parameters (four populations, two complex
  coherences) of a state whose only nonzero entries sit on the diagonal
  and anti-diagonal.
* ``BlochForm`` -- local Bloch vectors x, y and the 3 x 3 real
  correlation matrix R, with rho = (1/4)[I (x) I + sum_i x_i s_i (x) I
  + sum_i y_i I (x) s_i + sum_ij R_ij s_i (x) s_j].

Pauli convention: s_1 = X, s_2 = Y, s_3 = Z.  All sign conventions below
depend on this choice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import HERMITICITY_ATOL, PSD_ATOL, TRACE_ATOL, X_PATTERN_TOL
from .errors import (
    InputFormatError,
    NormalizationError,
    StructureError,
    UnphysicalBlochError,
    UnphysicalStateError,
)
from .numerics import herm_eigenvalues

__all__ = [
    "DensityMatrix",
    "XState",
    "BlochForm",
    "BellDiagonalParams",
    "ValidationReport",
    "make_x_state",
    "x_to_density",
    "density_to_x",
    "bloch_decompose",
    "bloch_compose",
    "x_state_bloch",
    "build_r_prime",
    "bell_diagonal_state",
    "bell_diagonal_dense",
    "density_from_matrix",
    "validate_density",
    "random_x_state",
    "random_density_matrix",
    "random_bell_diagonal",
    "parse_state_json",
    "x_state_to_json",
]

PAULI_1 = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_3 = np.array([[1, 0], [0, -1]], dtype=complex)
_PAULIS = (PAULI_1, PAULI_2, PAULI_3)
_EYE2 = np.eye(2, dtype=complex)

# Operator stack for Bloch (de)composition: 3 of s_i (x) I, 3 of
# I (x) s_i, then the 9 products s_i (x) s_j in row-major (i, j) order.
_BLOCH_OPS = np.stack(
    [np.kron(s, _EYE2) for s in _PAULIS]
    + [np.kron(_EYE2, s) for s in _PAULIS]
    + [np.kron(si, sj) for si in _PAULIS for sj in _PAULIS]
)
# Tr(rho A) = sum_ij rho_ij A_ji, so pre-transpose and flatten once.
_BLOCH_OPS_FLAT = np.ascontiguousarray(
    _BLOCH_OPS.transpose(0, 2, 1).reshape(15, 16)
)

# Index pairs allowed to be nonzero in the X pattern.
_X_PATTERN = {(0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (3, 0), (1, 2), (2, 1)}


@dataclass(frozen=True)
class DensityMatrix:
    """Validated 4 x 4 density matrix.

    The constructor checks Hermiticity and unit trace.  Positivity is
    checked by the factory ``density_from_matrix`` and by
    ``validate_density``; internal constructions that are positive by
    construction skip the (comparatively expensive) eigensolve.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise UnphysicalStateError(f"expected a 4x4 matrix, got {m.shape}")
        defect = np.abs(m - m.conj().T).max()
        if defect > HERMITICITY_ATOL:
            raise UnphysicalStateError(
                f"matrix is not Hermitian (defect {defect:.3e})"
            )
        trace_defect = abs(m.trace() - 1.0)
        if trace_defect > TRACE_ATOL:
            raise NormalizationError(
                f"trace differs from 1 by {trace_defect:.3e}"
            )
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


def density_from_matrix(matrix, *, check_psd: bool = True) -> DensityMatrix:
    """Build a ``DensityMatrix`` with full validation.

    With ``check_psd`` the minimum eigenvalue is required to be
    >= -PSD_ATOL; use this for any externally supplied matrix.
    """
    d = DensityMatrix(matrix)
    if check_psd:
        min_eig = herm_eigenvalues(d.matrix)[-1]
        if min_eig < -PSD_ATOL:
            raise UnphysicalStateError(
                f"matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})"
            )
    return d


@dataclass(frozen=True)
class XState:
    """X-structured state: four populations plus the two coherences."""

    rho11: float
    rho22: float
    rho33: float
    rho44: float
    rho14: complex = 0j
    rho23: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "rho14", complex(self.rho14))
        object.__setattr__(self, "rho23", complex(self.rho23))
        diag = (self.rho11, self.rho22, self.rho33, self.rho44)
        trace_defect = abs(sum(diag) - 1.0)
        if trace_defect > TRACE_ATOL:
            raise NormalizationError(
                f"diagonal sums to 1 with defect {trace_defect:.3e}"
            )
        if min(diag) < -PSD_ATOL:
            raise UnphysicalStateError(
                f"negative population {min(diag):.3e}"
            )
        if self.rho11 * self.rho44 < abs(self.rho14) ** 2 - PSD_ATOL:
            raise UnphysicalStateError(
                "block {11,44} violates positivity: "
                f"{self.rho11 * self.rho44:.6g} < |rho14|^2 = {abs(self.rho14) ** 2:.6g}"
            )
        if self.rho22 * self.rho33 < abs(self.rho23) ** 2 - PSD_ATOL:
            raise UnphysicalStateError(
                "block {22,33} violates positivity: "
                f"{self.rho22 * self.rho33:.6g} < |rho23|^2 = {abs(self.rho23) ** 2:.6g}"
            )

    @property
    def diagonal(self) -> tuple[float, float, float, float]:
        return (self.rho11, self.rho22, self.rho33, self.rho44)


def make_x_state(rho11, rho22, rho33, rho44, rho14=0j, rho23=0j) -> XState:
    """Validated X-state constructor (see ``XState`` invariants)."""
    return XState(
        float(rho11), float(rho22), float(rho33), float(rho44),
        complex(rho14), complex(rho23),
    )


def x_to_density(s: XState) -> DensityMatrix:
    """Embed an X state as a dense density matrix."""
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0], m[1, 1], m[2, 2], m[3, 3] = s.diagonal
    m[0, 3] = s.rho14
    m[3, 0] = s.rho14.conjugate()
    m[1, 2] = s.rho23
    m[2, 1] = s.rho23.conjugate()
    return DensityMatrix(m)


def density_to_x(d: DensityMatrix, tol: float = X_PATTERN_TOL) -> XState:
    """Extract the X parameters of a dense matrix.

    Any entry outside the X pattern with magnitude >= ``tol`` raises a
    ``StructureError`` listing the offenders; there is no silent
    projection.
    """
    m = d.matrix
    offenders = [
        (i, j, abs(m[i, j]))
        for i in range(4)
        for j in range(4)
        if (i, j) not in _X_PATTERN and abs(m[i, j]) >= tol
    ]
    if offenders:
        listing = ", ".join(
            f"({i + 1},{j + 1})={mag:.3e}" for i, j, mag in offenders
        )
        raise StructureError(f"entries outside the X pattern: {listing}")
    return XState(
        m[0, 0].real, m[1, 1].real, m[2, 2].real, m[3, 3].real,
        complex(m[0, 3]), complex(m[1, 2]),
    )


@dataclass(frozen=True)
class BlochForm:
    """Local Bloch vectors and correlation matrix of a two-qubit state."""

    x: np.ndarray
    y: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(3)
        y = np.asarray(self.y, dtype=float).reshape(3)
        r = np.asarray(self.R, dtype=float)
        if r.shape != (3, 3):
            raise ValueError(f"R must be 3x3, got {r.shape}")
        bound = 1.0 + 1e-12
        worst = max(np.abs(x).max(), np.abs(y).max(), np.abs(r).max())
        if worst > bound:
            raise UnphysicalBlochError(
                f"Bloch component out of range: |{worst:.6g}| > 1"
            )
        for name, arr in (("x", x), ("y", y), ("R", r)):
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def bloch_decompose(d: DensityMatrix) -> BlochForm:
    """Pauli expectation values of a dense state: x_i = Tr rho (s_i (x) I),
    y_i = Tr rho (I (x) s_i), R_ij = Tr rho (s_i (x) s_j)."""
    vals = (_BLOCH_OPS_FLAT @ d.matrix.reshape(16)).real
    return BlochForm(x=vals[0:3], y=vals[3:6], R=vals[6:15].reshape(3, 3))


def bloch_compose(b: BlochForm) -> DensityMatrix:
    """Reconstruct the density matrix of a Bloch form.

    Raises ``UnphysicalBlochError`` when the reconstruction has an
    eigenvalue below ``-PSD_ATOL``.
    """
    coeffs = np.concatenate([b.x, b.y, b.R.reshape(9)])
    m = 0.25 * (np.eye(4, dtype=complex) + np.tensordot(coeffs, _BLOCH_OPS, axes=1))
    min_eig = herm_eigenvalues(m)[-1]
    if min_eig < -PSD_ATOL:
        raise UnphysicalBlochError(
            f"reconstruction is not positive semidefinite (min eigenvalue {min_eig:.3e})"
        )
    return DensityMatrix(m)


def x_state_bloch(s: XState) -> BlochForm:
    """Closed-form Bloch decomposition of an X state.

    Both Bloch vectors point along z; the correlation matrix couples the
    transverse plane to the coherences and the z axis to the populations.
    The complex combinations below are real whenever the state is
    Hermitian; the residual imaginary part is checked, not assumed.
    """
    r14, r23 = s.rho14, s.rho23
    r41, r32 = r14.conjugate(), r23.conjugate()
    entries = {
        (0, 0): r14 + r23 + r32 + r41,
        (0, 1): 1j * (r14 - r23 + r32 - r41),
        (1, 0): 1j * (r14 + r23 - r32 - r41),
        (1, 1): -r14 + r23 + r32 - r41,
    }
    residue = max(abs(v.imag) for v in entries.values())
    if residue >= 1e-14:
        raise StructureError(
            f"transverse correlation block not real (residue {residue:.3e})"
        )
    rho11, rho22, rho33, rho44 = s.diagonal
    r = np.zeros((3, 3))
    for (i, j), v in entries.items():
        r[i, j] = v.real
    r[2, 2] = rho11 - rho22 - rho33 + rho44
    x = np.array([0.0, 0.0, rho11 + rho22 - rho33 - rho44])
    y = np.array([0.0, 0.0, rho11 - rho22 + rho33 - rho44])
    return BlochForm(x=x, y=y, R=r)


def build_r_prime(b: BlochForm) -> np.ndarray:
    """Stack the measured side's Bloch vector onto the correlation matrix
    as a leading column, giving the 3 x 4 matrix [x | R] whose singular
    values drive the discord evaluators."""
    return np.column_stack([b.x, b.R])


@dataclass(frozen=True)
class BellDiagonalParams:
    """Z-directional Bloch vectors r, s and correlation triple (c1, c2, c3)."""

    r: float
    s: float
    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        bound = 1.0 + 1e-12
        for name in ("r", "s", "c1", "c2", "c3"):
            v = float(getattr(self, name))
            object.__setattr__(self, name, v)
            if abs(v) > bound:
                raise UnphysicalStateError(f"|{name}| = {abs(v):.6g} exceeds 1")

    @property
    def c(self) -> tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)


def bell_diagonal_state(p: BellDiagonalParams) -> XState:
    """X state of the z-directional subclass
    (1/4)[I (x) I + r s_3 (x) I + s I (x) s_3 + sum_i c_i s_i (x) s_i].

    Raises ``UnphysicalStateError`` when the parameters leave the
    positivity region.
    """
    r, s = p.r, p.s
    c1, c2, c3 = p.c
    return XState(
        0.25 * (1.0 + r + s + c3),
        0.25 * (1.0 + r - s - c3),
        0.25 * (1.0 - r + s - c3),
        0.25 * (1.0 - r - s + c3),
        complex(0.25 * (c1 - c2)),
        complex(0.25 * (c1 + c2)),
    )


def bell_diagonal_dense(r: float, s: float, c1: float, c2: float, c3: float) -> np.ndarray:
    """Dense matrix of the z-directional subclass, without validation.

    The parameters may describe an unphysical matrix; positivity scans
    rely on that to probe the boundary.
    """
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = 0.25 * (1.0 + r + s + c3)
    m[1, 1] = 0.25 * (1.0 + r - s - c3)
    m[2, 2] = 0.25 * (1.0 - r + s - c3)
    m[3, 3] = 0.25 * (1.0 - r - s + c3)
    m[0, 3] = m[3, 0] = 0.25 * (c1 - c2)
    m[1, 2] = m[2, 1] = 0.25 * (c1 + c2)
    return m


@dataclass(frozen=True)
class ValidationReport:
    """Defect summary of a candidate density matrix."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    passed: bool


def validate_density(matrix) -> ValidationReport:
    """Report Hermiticity, trace and positivity defects of a raw matrix.

    Never raises: the report's ``passed`` flag carries the verdict.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got {m.shape}")
    herm_defect = float(np.abs(m - m.conj().T).max())
    trace_defect = float(abs(m.trace() - 1.0))
    # Symmetrize so the eigensolve is meaningful even for non-Hermitian input.
    min_eig = float(herm_eigenvalues(0.5 * (m + m.conj().T))[-1])
    passed = (
        herm_defect <= HERMITICITY_ATOL
        and trace_defect <= TRACE_ATOL
        and min_eig >= -PSD_ATOL
    )
    return ValidationReport(herm_defect, trace_defect, min_eig, passed)


# ---------------------------------------------------------------------------
# Seeded random state generators (shared by the test suite).
# ---------------------------------------------------------------------------

def random_x_state(rng: np.random.Generator) -> XState:
    """Random valid X state.

    Diagonal from a symmetric Dirichlet draw; coherence moduli are
    uniform fractions of their block bounds sqrt(rho11 rho44) and
    sqrt(rho22 rho33), with uniform phases.  Valid by construction.
    """
    d = rng.dirichlet(np.ones(4))
    u, v = rng.uniform(0.0, 1.0, size=2)
    phase14, phase23 = rng.uniform(0.0, 2.0 * np.pi, size=2)
    r14 = u * np.sqrt(d[0] * d[3]) * np.exp(1j * phase14)
    r23 = v * np.sqrt(d[1] * d[2]) * np.exp(1j * phase23)
    return XState(d[0], d[1], d[2], d[3], complex(r14), complex(r23))


def random_density_matrix(rng: np.random.Generator) -> DensityMatrix:
    """Random mixture of four Haar-ish random pure states with Dirichlet
    weights."""
    weights = rng.dirichlet(np.ones(4))
    m = np.zeros((4, 4), dtype=complex)
    for w in weights:
        psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        psi /= np.linalg.norm(psi)
        m += w * np.outer(psi, psi.conj())
    m = 0.5 * (m + m.conj().T)
    m /= m.trace().real
    return DensityMatrix(m)


def random_bell_diagonal(
    rng: np.random.Generator, *, zero_bloch: bool = False
) -> BellDiagonalParams:
    """Rejection-sample physical Bell-diagonal parameters from the cube."""
    while True:
        if zero_bloch:
            r = s = 0.0
        else:
            r, s = rng.uniform(-1.0, 1.0, size=2)
        c1, c2, c3 = rng.uniform(-1.0, 1.0, size=3)
        params = BellDiagonalParams(r, s, c1, c2, c3)
        try:
            bell_diagonal_state(params)
        except UnphysicalStateError:
            continue
        return params


# ---------------------------------------------------------------------------
# JSON state schema.
# ---------------------------------------------------------------------------

def _parse_complex(value, field: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(v, (int, float)) for v in value)
    ):
        return complex(value[0], value[1])
    raise InputFormatError(
        f"field {field!r} must be a number or a [re, im] pair"
    )


def _require_number(obj: dict, field: str) -> float:
    if field not in obj:
        raise InputFormatError(f"missing field {field!r}")
    v = obj[field]
    if not isinstance(v, (int, float)):
        raise InputFormatError(f"field {field!r} must be a number")
    return float(v)


def parse_state_json(obj) -> XState | BellDiagonalParams | DensityMatrix:
    """Parse the JSON state schema.

    Exactly one of the keys ``x_state``, ``bell_diagonal`` or ``dense``
    must be present:

    * ``{"x_state": {"rho11": .., .., "rho14": [re, im], "rho23": [re, im]}}``
    * ``{"bell_diagonal": {"r": .., "s": .., "c": [c1, c2, c3]}}``
    * ``{"dense": [[[re, im] * 4] * 4]}``

    Schema violations raise ``InputFormatError``; physically invalid
    states raise the corresponding ``StateValidationError``.
    """
    if not isinstance(obj, dict):
        raise InputFormatError("state input must be a JSON object")
    keys = {"x_state", "bell_diagonal", "dense"} & obj.keys()
    if len(keys) != 1:
        raise InputFormatError(
            "exactly one of 'x_state', 'bell_diagonal', 'dense' must be present"
        )
    kind = keys.pop()
    body = obj[kind]

    if kind == "x_state":
        if not isinstance(body, dict):
            raise InputFormatError("'x_state' must be an object")
        diag = [_require_number(body, f) for f in ("rho11", "rho22", "rho33", "rho44")]
        r14 = _parse_complex(body.get("rho14", 0.0), "rho14")
        r23 = _parse_complex(body.get("rho23", 0.0), "rho23")
        return make_x_state(*diag, r14, r23)

    if kind == "bell_diagonal":
        if not isinstance(body, dict):
            raise InputFormatError("'bell_diagonal' must be an object")
        r = _require_number(body, "r") if "r" in body else 0.0
        s = _require_number(body, "s") if "s" in body else 0.0
        c = body.get("c")
        if (
            not isinstance(c, (list, tuple))
            or len(c) != 3
            or not all(isinstance(v, (int, float)) for v in c)
        ):
            raise InputFormatError("'c' must be a list of three numbers")
        return BellDiagonalParams(r, s, float(c[0]), float(c[1]), float(c[2]))

    if not isinstance(body, list) or len(body) != 4:
        raise InputFormatError("'dense' must be a 4x4 array of [re, im] pairs")
    m = np.zeros((4, 4), dtype=complex)
    for i, row in enumerate(body):
        if not isinstance(row, list) or len(row) != 4:
            raise InputFormatError("'dense' must be a 4x4 array of [re, im] pairs")
        for j, cell in enumerate(row):
            m[i, j] = _parse_complex(cell, f"dense[{i}][{j}]")
    return density_from_matrix(m)


def x_state_to_json(s: XState) -> dict:
    """Serialize an X state in the schema accepted by ``parse_state_json``."""
    return {
        "x_state": {
            "rho11": s.rho11,
            "rho22": s.rho22,
            "rho33": s.rho33,
            "rho44": s.rho44,
            "rho14": [s.rho14.real, s.rho14.imag],
            "rho23": [s.rho23.real, s.rho23.imag],
        }
    }
