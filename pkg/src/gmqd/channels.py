"""Local dephasing dynamics and trajectory generation.

Two channel families act qubit-by-qubit:

* Markovian phase damping with strength p, Kraus operators
  E1 = sqrt(1 - p/2) I and E2 = sqrt(p/2) s_3.  (The textbook pair
  sqrt(1-p) I, sqrt(p/2) s_3 is not trace preserving; the normalization
  used here is, and gives the standard off-diagonal factor (1 - p) per
  qubit.)
* Colored-noise dephasing with memory kernel
  L(nu) = exp(-nu) [cos(mu nu) + sin(mu nu)/mu],  mu = sqrt((4 a tau)^2 - 1),
  nu = t / (2 tau), with Kraus operators sqrt((1 + L)/2) I and
  sqrt((1 - L)/2) s_i along the noise axis i, applied to each qubit
  independently.  On Bell-diagonal states this leaves c_i fixed and
  scales the other two correlations by L^2.

For 4 a tau <= 1 the kernel is continued with cosh/sinh (mu becomes
imaginary); L stays real and |L| <= 1 either way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import FROZEN_ATOL
from .errors import KrausCompletenessError, UnsupportedSubclassError
from .measures import GmqdBreakdown, gmqd_svd, x_lambdas
from .qstate import (
    PAULI_1,
    PAULI_2,
    PAULI_3,
    BellDiagonalParams,
    DensityMatrix,
    XState,
    bell_diagonal_state,
    x_to_density,
)

__all__ = [
    "DephasingParams",
    "ColoredNoiseParams",
    "KrausSet",
    "Trajectory",
    "TrajectoryRecord",
    "apply_kraus",
    "dephase_markov",
    "lambda_colored",
    "colored_step",
    "markov_trajectory",
    "colored_trajectory",
    "phase_damping_kraus",
    "colored_noise_kraus",
]

_PAULIS = (PAULI_1, PAULI_2, PAULI_3)
_EYE2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class DephasingParams:
    """Phase-damping strengths for each qubit, both in [0, 1]."""

    p_a: float
    p_b: float

    def __post_init__(self):
        for name in ("p_a", "p_b"):
            v = float(getattr(self, name))
            object.__setattr__(self, name, v)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} = {v!r} outside [0, 1]")


@dataclass(frozen=True)
class ColoredNoiseParams:
    """Colored-noise channel: rate a (1/s), memory time tau (s), Pauli axis."""

    a: float
    tau: float
    direction: int

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "tau", float(self.tau))
        if self.a <= 0.0 or self.tau <= 0.0:
            raise ValueError("a and tau must be strictly positive")
        if self.direction not in (1, 2, 3):
            raise ValueError(f"direction must be 1, 2 or 3, got {self.direction!r}")


@dataclass(frozen=True)
class KrausSet:
    """Single-qubit Kraus operators targeting qubit 'A' or 'B'."""

    operators: tuple
    target: str

    def __post_init__(self):
        if self.target not in ("A", "B"):
            raise ValueError(f"target must be 'A' or 'B', got {self.target!r}")
        ops = tuple(np.array(op, dtype=complex) for op in self.operators)
        for op in ops:
            if op.shape != (2, 2):
                raise ValueError(f"Kraus operators must be 2x2, got {op.shape}")
            op.flags.writeable = False
        object.__setattr__(self, "operators", ops)

    def completeness_defect(self) -> float:
        total = sum(op.conj().T @ op for op in self.operators)
        return float(np.abs(total - _EYE2).max())


def phase_damping_kraus(p: float, target: str = "A") -> KrausSet:
    """Trace-preserving phase-damping pair for one qubit."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p = {p!r} outside [0, 1]")
    return KrausSet(
        (math.sqrt(1.0 - 0.5 * p) * _EYE2, math.sqrt(0.5 * p) * PAULI_3),
        target,
    )


def colored_noise_kraus(lam: float, direction: int, target: str = "A") -> KrausSet:
    """Colored-noise pair for one qubit at kernel value ``lam``."""
    if not -1.0 <= lam <= 1.0:
        raise ValueError(f"kernel value {lam!r} outside [-1, 1]")
    if direction not in (1, 2, 3):
        raise ValueError(f"direction must be 1, 2 or 3, got {direction!r}")
    return KrausSet(
        (
            math.sqrt(0.5 * (1.0 + lam)) * _EYE2,
            math.sqrt(0.5 * (1.0 - lam)) * _PAULIS[direction - 1],
        ),
        target,
    )


def apply_kraus(d: DensityMatrix, k: KrausSet) -> DensityMatrix:
    """Apply a single-qubit Kraus set to one side of a two-qubit state."""
    defect = k.completeness_defect()
    if defect > 1e-12:
        raise KrausCompletenessError(
            f"Kraus operators not complete (defect {defect:.3e})"
        )
    rho = d.matrix
    out = np.zeros_like(rho)
    for op in k.operators:
        e = np.kron(op, _EYE2) if k.target == "A" else np.kron(_EYE2, op)
        out += e @ rho @ e.conj().T
    return DensityMatrix(out)


def dephase_markov(s: XState, p: DephasingParams) -> XState:
    """Markovian phase damping of an X state.

    Populations pass through untouched; each coherence picks up the
    factor (1 - p_a)(1 - p_b).
    """
    factor = (1.0 - p.p_a) * (1.0 - p.p_b)
    return XState(
        s.rho11, s.rho22, s.rho33, s.rho44,
        s.rho14 * factor, s.rho23 * factor,
    )


def lambda_colored(nu: float, cn: ColoredNoiseParams) -> float:
    """Memory kernel L(nu) of the colored-noise channel.

    L(0) = 1 and |L| <= 1 for all nu >= 0.  The underdamped regime
    4 a tau > 1 oscillates under the exp(-nu) envelope; at or below the
    threshold the cos/sin pair continues to cosh/sinh and the kernel
    decays monotonically.
    """
    if nu < 0.0:
        raise ValueError(f"nu must be >= 0, got {nu!r}")
    x = 4.0 * cn.a * cn.tau
    if x > 1.0:
        mu = math.sqrt(x * x - 1.0)
        osc = math.cos(mu * nu) + math.sin(mu * nu) / mu
    elif x == 1.0:
        osc = 1.0 + nu
    else:
        m = math.sqrt(1.0 - x * x)
        osc = math.cosh(m * nu) + math.sinh(m * nu) / m
    return math.exp(-nu) * osc


def colored_step(
    b: BellDiagonalParams, nu: float, cn: ColoredNoiseParams
) -> BellDiagonalParams:
    """Bell-diagonal correlations after colored noise for dimensionless
    time ``nu``: the component along the noise axis is conserved, the
    other two shrink by L(nu)^2."""
    if b.r != 0.0 or b.s != 0.0:
        raise UnsupportedSubclassError(
            f"colored evolution requires r = s = 0, got r={b.r!r}, s={b.s!r}"
        )
    scale = lambda_colored(nu, cn) ** 2
    c = [b.c1 * scale, b.c2 * scale, b.c3 * scale]
    c[cn.direction - 1] = b.c[cn.direction - 1]
    return BellDiagonalParams(0.0, 0.0, c[0], c[1], c[2])


@dataclass(frozen=True)
class TrajectoryRecord:
    """One point of an evolution sweep."""

    param: float
    state: XState
    gmqd: GmqdBreakdown
    frozen: bool


@dataclass(frozen=True)
class Trajectory:
    """Ordered evolution records plus sweep metadata.

    ``metadata['frozen_reference']`` is the frozen discord level of the
    initial state (None when the freezing conditions do not hold); the
    per-record ``frozen`` flags are measured against it.
    """

    records: tuple
    metadata: dict = field(default_factory=dict)

    def params(self) -> np.ndarray:
        return np.array([rec.param for rec in self.records])

    def gmqd_values(self) -> np.ndarray:
        return np.array([rec.gmqd.value for rec in self.records])


def _record(param, state, frozen_reference, frozen_atol, check) -> TrajectoryRecord:
    breakdown = x_lambdas(state)
    if check:
        audit = gmqd_svd(x_to_density(state)).value
        if abs(audit - breakdown.value) > 1e-10:
            raise ArithmeticError(
                f"closed form {breakdown.value!r} disagrees with SVD {audit!r} "
                f"at parameter {param!r}"
            )
    frozen = (
        frozen_reference is not None
        and abs(breakdown.value - frozen_reference) <= frozen_atol
    )
    return TrajectoryRecord(float(param), state, breakdown, frozen)


def markov_records(
    s: XState,
    p_values,
    frozen_reference,
    *,
    frozen_atol: float = FROZEN_ATOL,
    check: bool = False,
) -> list[TrajectoryRecord]:
    """Records of the Markovian sweep at the given dephasing strengths.

    Split out from ``markov_trajectory`` so grid chunks can be evaluated
    on separate workers and concatenated in index order.
    """
    return [
        _record(
            p,
            dephase_markov(s, DephasingParams(p, p)),
            frozen_reference,
            frozen_atol,
            check,
        )
        for p in p_values
    ]


def colored_records(
    b: BellDiagonalParams,
    cn: ColoredNoiseParams,
    nu_values,
    frozen_reference,
    *,
    frozen_atol: float = FROZEN_ATOL,
    check: bool = False,
) -> list[TrajectoryRecord]:
    """Records of the colored-noise sweep at the given dimensionless times."""
    return [
        _record(
            nu,
            bell_diagonal_state(colored_step(b, nu, cn)),
            frozen_reference,
            frozen_atol,
            check,
        )
        for nu in nu_values
    ]


def _frozen_reference(state: XState):
    # Imported here to avoid a circular module dependency: the freezing
    # predicates live downstream of the channel types.
    from .freezing import check_freezing_x

    verdict = check_freezing_x(state)
    return verdict.frozen_value if verdict.holds else None


def markov_trajectory(
    s: XState,
    steps: int,
    p_max: float = 1.0,
    *,
    frozen_atol: float = FROZEN_ATOL,
    check: bool = False,
    seed=None,
) -> Trajectory:
    """Sweep symmetric phase damping p_a = p_b = p over [0, p_max]."""
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    if not 0.0 <= p_max <= 1.0:
        raise ValueError(f"p_max = {p_max!r} outside [0, 1]")
    reference = _frozen_reference(s)
    p_values = np.linspace(0.0, p_max, steps)
    records = markov_records(
        s, p_values, reference, frozen_atol=frozen_atol, check=check
    )
    metadata = {
        "channel": "markov",
        "parameters": {"p_max": p_max, "steps": steps},
        "seed": seed,
        "frozen_reference": reference,
    }
    return Trajectory(tuple(records), metadata)


def colored_trajectory(
    b: BellDiagonalParams,
    cn: ColoredNoiseParams,
    nu_max: float,
    steps: int,
    *,
    frozen_atol: float = FROZEN_ATOL,
    check: bool = False,
    seed=None,
) -> Trajectory:
    """Sweep the colored-noise channel over nu in [0, nu_max]."""
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    if nu_max < 0.0:
        raise ValueError(f"nu_max = {nu_max!r} must be >= 0")
    if b.r != 0.0 or b.s != 0.0:
        raise UnsupportedSubclassError(
            f"colored evolution requires r = s = 0, got r={b.r!r}, s={b.s!r}"
        )
    reference = _frozen_reference(bell_diagonal_state(b))
    nu_values = np.linspace(0.0, nu_max, steps)
    records = colored_records(
        b, cn, nu_values, reference, frozen_atol=frozen_atol, check=check
    )
    metadata = {
        "channel": "colored",
        "parameters": {
            "a": cn.a,
            "tau": cn.tau,
            "direction": cn.direction,
            "nu_max": nu_max,
            "steps": steps,
            "c": list(b.c),
            "r": b.r,
            "s": b.s,
        },
        "seed": seed,
        "frozen_reference": reference,
    }
    return Trajectory(tuple(records), metadata)
