"""Numerical tolerances used across the package.

Two tiers: CONSTRUCTION guards invariants checked when an object is built
(Hermiticity, unit trace, unit norm), DERIVED guards quantities obtained
through a computation (vanishing partial traces, Kraus completeness,
eigenprojector reconstruction).  Conditional-probability rows get a
slightly looser budget because they accumulate error from several
eigendecompositions and a channel application.

Every default is multiplied by the ONTIC_SIM_TOLERANCE_SCALE environment
variable (read once at import) so the whole stack can be loosened for
debugging without touching call sites.
"""

import os

SCALE = float(os.environ.get("ONTIC_SIM_TOLERANCE_SCALE", "1"))

# construction-time invariants: Hermiticity, unit trace, unit norm
CONSTRUCTION = 1e-12 * SCALE

# derived checks: partial traces of correlation operators, Kraus
# completeness, decomposition reconstruction, projector idempotence
DERIVED = 1e-10 * SCALE

# most negative admissible eigenvalue for density and Choi matrices
EIG_FLOOR = -1e-10 * SCALE

# conditional-probability table rows must sum to one within this
ROW_SUM = 1e-9 * SCALE

# ontic entries with probability below this are flagged null
NULL_PROBABILITY = 1e-12 * SCALE

# Kraus operators below this Frobenius norm are dropped
KRAUS_PRUNE = 1e-12 * SCALE

# smallest amplitude magnitude usable as the global-phase pivot
PHASE_PIVOT = 1e-10 * SCALE

# default spacing below which neighbouring eigenvalues count as degenerate
DEGENERACY_GAP = 1e-8
