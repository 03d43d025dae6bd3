"""Shared numerical tolerances.

Every tolerance used by both the production code and the test suite lives
here, so the two can never drift apart.
"""

# Hermiticity / trace / positivity tolerances for density matrices.
HERMITICITY_ATOL = 1e-12
TRACE_ATOL = 1e-12
PSD_ATOL = 1e-12  # min eigenvalue must be >= -PSD_ATOL

# Jacobi eigensolver: iterate until the off-diagonal Frobenius norm drops
# below this.
JACOBI_OFFDIAG_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60

# Eigenvalues of m @ m.T in [-EIG_CLAMP, 0) are rounding noise; clamp to 0
# before taking square roots.
EIG_CLAMP = 1e-13

# Internal consistency of a discord breakdown (value vs. lambda triple).
BREAKDOWN_ATOL = 1e-12

# Default tolerance when projecting a dense matrix onto the X pattern.
X_PATTERN_TOL = 1e-9

# Freezing-condition tolerance (both the equal-coherence test and the
# strict margin inequality).
FREEZE_EPS = 1e-9

# Tolerance for marking a trajectory record as sitting on the frozen level.
FROZEN_ATOL = 1e-9

# A constant-discord interval whose level is below this is "trivially"
# frozen: the discord is indistinguishable from zero there.
ZERO_DISCORD_TOL = 1e-6

# Brute-force measurement search: local refinement target in the objective.
ORACLE_REFINE_TOL = 1e-10
