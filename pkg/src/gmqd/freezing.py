"""Freezing of geometric discord under local dephasing.

An X state keeps a constant, nonzero discord for a finite stretch of
dephasing strength exactly when

    |rho14| = |rho23|   and
    8 |rho14 rho23| > (rho11 - rho33)^2 + (rho22 - rho44)^2.

The first condition kills the subleading transverse singular value; the
second puts the population term below the transverse one, so the maximum
being subtracted is the only quantity that decays.  While it stays
maximal, the discord sits at the population level

    frozen_value = [(rho11 - rho33)^2 + (rho22 - rho44)^2] / 2.

Both conditions are tested with tolerance ``FREEZE_EPS``; a margin inside
the tolerance band counts as NOT freezing, matching the strict
inequality.  States with identically zero discord are constant under
dephasing too, but only trivially; interval detection flags them rather
than counting them as frozen plateaus.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .constants import FREEZE_EPS, FROZEN_ATOL, ZERO_DISCORD_TOL
from .errors import PreconditionError, StateValidationError
from .channels import Trajectory
from .qstate import BellDiagonalParams, XState, bell_diagonal_state

__all__ = [
    "FreezingVerdict",
    "FrozenInterval",
    "RegionMembership",
    "check_freezing_x",
    "check_freezing_bell",
    "freeze_endpoint_markov",
    "detect_frozen_intervals",
    "region_membership",
]


@dataclass(frozen=True)
class FreezingVerdict:
    """Outcome of the freezing test.

    ``equal_coherence_defect`` is ||rho14| - |rho23||, ``margin`` is
    8 |rho14 rho23| - (rho11 - rho33)^2 - (rho22 - rho44)^2, and
    ``frozen_value`` is the discord level held while frozen (meaningful
    only when ``holds``).
    """

    holds: bool
    equal_coherence_defect: float
    margin: float
    frozen_value: float


@dataclass(frozen=True)
class FrozenInterval:
    """Maximal constant-discord stretch of a trajectory.

    ``trivial`` marks intervals whose level is numerically zero: constant
    because there is nothing left to decay, not because of freezing.
    """

    start: float
    end: float
    level: float
    trivial: bool

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError(f"empty interval [{self.start!r}, {self.end!r}]")
        if self.level < 0.0:
            raise ValueError(f"negative level {self.level!r}")

    def contains(self, param: float) -> bool:
        return self.start <= param <= self.end


class RegionMembership(NamedTuple):
    physical: bool
    freezing: bool


def check_freezing_x(s: XState) -> FreezingVerdict:
    """Test the freezing conditions on an X state."""
    a = abs(s.rho14)
    b = abs(s.rho23)
    defect = abs(a - b)
    pop_sq = (s.rho11 - s.rho33) ** 2 + (s.rho22 - s.rho44) ** 2
    margin = 8.0 * a * b - pop_sq
    holds = defect <= FREEZE_EPS and margin > FREEZE_EPS
    return FreezingVerdict(holds, defect, margin, 0.5 * pop_sq)


def check_freezing_bell(b: BellDiagonalParams) -> FreezingVerdict:
    """Freezing test in Bell-diagonal coordinates.

    Reduces to: one of c1, c2 vanishes and the square of the other
    exceeds r^2 + c3^2.  The verdict fields are reported in the same
    units as ``check_freezing_x`` (the coherences are (c1 -+ c2)/4), so
    the two routes agree on any Bell-diagonal state.
    """
    defect = 0.5 * min(abs(b.c1), abs(b.c2))
    margin = 0.5 * (abs(b.c1 ** 2 - b.c2 ** 2) - b.r ** 2 - b.c3 ** 2)
    holds = defect <= FREEZE_EPS and margin > FREEZE_EPS
    return FreezingVerdict(holds, defect, margin, 0.25 * (b.r ** 2 + b.c3 ** 2))


def freeze_endpoint_markov(s: XState) -> float:
    """Dephasing strength at which the frozen plateau ends.

    The transverse term decays as (1 - p)^4 while the population term is
    constant, so the plateau ends where they cross:

        p* = 1 - (L3^2 / L1^2(0))^(1/4).

    Requires the freezing conditions to hold; a state whose population
    term vanishes stays (trivially) frozen all the way to p* = 1.
    """
    verdict = check_freezing_x(s)
    if not verdict.holds:
        raise PreconditionError(
            "freezing conditions do not hold "
            f"(defect {verdict.equal_coherence_defect:.3e}, margin {verdict.margin:.3e})"
        )
    lam1_sq = 4.0 * (abs(s.rho14) + abs(s.rho23)) ** 2
    lam3_sq = 4.0 * verdict.frozen_value
    return 1.0 - (lam3_sq / lam1_sq) ** 0.25


def detect_frozen_intervals(
    t: Trajectory,
    atol: float = FROZEN_ATOL,
    zero_tol: float = ZERO_DISCORD_TOL,
) -> list[FrozenInterval]:
    """Maximal constant-discord runs of a trajectory.

    A run extends from its first record while every discord value stays
    within ``atol`` of the first one; runs spanning fewer than 3 records
    are dropped as grid flukes.  Runs at a level at or below ``zero_tol``
    are flagged trivial: zero discord is constant under any dephasing,
    which is not the plateau phenomenon.
    """
    records = t.records
    if not records:
        raise ValueError("trajectory has no records")
    values = [rec.gmqd.value for rec in records]
    intervals: list[FrozenInterval] = []
    start = 0
    n = len(values)
    while start < n:
        ref = values[start]
        end = start
        while end + 1 < n and abs(values[end + 1] - ref) <= atol:
            end += 1
        if end - start + 1 >= 3:
            intervals.append(
                FrozenInterval(
                    start=records[start].param,
                    end=records[end].param,
                    level=ref,
                    trivial=ref <= zero_tol,
                )
            )
        start = end + 1
    return intervals


def region_membership(r: float, s: float, c1: float, c2: float, c3: float) -> RegionMembership:
    """Classify a Bell-diagonal parameter point: physically valid, and if
    so, whether it satisfies the freezing conditions."""
    try:
        params = BellDiagonalParams(r, s, c1, c2, c3)
        bell_diagonal_state(params)
    except StateValidationError:
        return RegionMembership(physical=False, freezing=False)
    return RegionMembership(
        physical=True, freezing=check_freezing_bell(params).holds
    )
