"""Frozen numeric constants and resource caps shared across the package.

Every tunable that affects an approximation guarantee is pinned here, with the
end-to-end budget arithmetic that justifies it, so tests and documentation can
cite a single source of truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# --- infinity / rounding -------------------------------------------------

INF = math.inf


class ResourceCapError(RuntimeError):
    """A configured resource cap (labels, table cells, ratio) was exceeded."""

#: Relative snapping tolerance for logarithm-to-integer-grid conversions.
#: Budget margins produced by the algorithms are at least eps'/pi_sum, many
#: orders of magnitude above this, so snapping never misclassifies a grid
#: point while absorbing float noise in log/exp round trips.
LOG_SNAP = 1e-9

# --- gap framework constants ---------------------------------------------
# With LOG2 = log2(max(n, 4)) and LN = ln(max(n, 3)) (so LN/LOG2 <= ln 2):
#
#   eps*      = eps / (4 * GAP_EPS_C * LOG2)          (= eps / (1.5 * LOG2))
#   slack     = 1 + GAP_SLACK_C * eps* * LN           (YES threshold factor)
#   eps_dp    = GAP_DP_EPS_C * eps* * LOG2            (= eps / 3)
#
# gives, for all 0 < eps <= 1 and n >= 2:
#
#   length: (1 + eps*) * slack <= (1 + eps/3)(1 + eps * ln2/1.5) <= 1 + eps
#   delay:  slack * (1 + eps_dp) <= the same product     <= 1 + eps
#
# since 0.795*eps + 0.154*eps^2 <= eps for eps <= 1.32.  At n=10, eps=0.3 the
# two factors evaluate to 1.207 and 1.253 against the 1.3 budget.

#: c in eps* = eps / (4c log n).
GAP_EPS_C = 0.375
#: c_t in the YES threshold n/eps + c_t * n * ln n (slack factor 1 + c_t*eps*·ln n).
GAP_SLACK_C = 1.0
#: c_a in the inner DP approximation parameter eps_dp = c_a * eps * log n.
GAP_DP_EPS_C = 0.5
#: c_h in the DP depth formula h = ceil(c_h * n * log^alpha(n) / eps).
GAP_DEPTH_C = 4.0
#: Trials per threshold = GAP_TRIALS_C * ceil(log2 n).
GAP_TRIALS_C = 2

# --- hierarchy constants ---------------------------------------------------

#: log-exponent alpha in the depth formula for the dense hierarchy.
DENSE_DEPTH_LOG_EXP = 4
#: log-exponent alpha in the depth formula for the sparse hierarchy.
SPARSE_DEPTH_LOG_EXP = 6
#: c_s: per-block / per-level sample counts are ceil(c_s * size * log2 n / step).
SAMPLE_C = 4.0

# --- low-diameter decomposition --------------------------------------------

#: Ball radii are Exp(mean = D / (LDD_RADIUS_C * ln n)) capped at D/2; the cap
#: overflow mass is n^-(LDD_RADIUS_C/2) = n^-3, folded into the cut-rate slack.
LDD_RADIUS_C = 6.0
#: Pieces at most this large get an exact diameter check before carving.
LDD_EXACT_DIAMETER_CAP = 64

# --- oracle ----------------------------------------------------------------

#: Hard cap on Pareto labels (or enumerated paths) created by one oracle run.
ORACLE_LABEL_CAP = 10_000_000
#: Exhaustive simple-path enumeration is only allowed up to this many vertices.
ORACLE_EXHAUSTIVE_MAX_N = 12

# --- budget DP ---------------------------------------------------------------

#: pi_dp_preprocess rejects tables larger than this many cells.
DP_MAX_CELLS = 50_000_000
#: Frequency sums above max(n,2)^4 violate the window-size precondition.
PI_SUM_DEGREE = 4

# --- all-pairs structure -----------------------------------------------------

#: Threshold ranges with D_max/D_min above max(n,2)^AP_RATIO_DEGREE are rejected.
AP_RATIO_DEGREE = 6
#: Blocks up to this many vertices use the exact frontier backend for
#: threshold tables; larger blocks use the all-pairs structure.
BLOCK_AP_EXACT_CUTOFF = 32

# --- sparse solver parameter picks -------------------------------------------


def log2n(n: int) -> float:
    """log2(n) clamped below at 2 — the guard keeps tiny-n thresholds sane."""
    return math.log2(max(n, 4))


def lnn(n: int) -> float:
    """ln(n) clamped below at ln 3."""
    return math.log(max(n, 3))


@dataclass(frozen=True)
class GapConstants:
    """Resolved per-instance gap-framework parameters (see module comment)."""

    eps: float
    n: int

    @property
    def eps_star(self) -> float:
        return self.eps / (4.0 * GAP_EPS_C * log2n(self.n))

    @staticmethod
    def slack(n: int, eps_star: float) -> float:
        return 1.0 + GAP_SLACK_C * eps_star * lnn(n)

    @staticmethod
    def dp_eps(n: int, eps_star: float) -> float:
        return GAP_DP_EPS_C * eps_star * log2n(n)


def max_witness_delay_factor(n: int, eps_star: float) -> float:
    """Largest delay/D ratio a YES witness can carry at gap parameter eps_star."""
    return GapConstants.slack(n, eps_star) * (1.0 + GapConstants.dp_eps(n, eps_star))


def parse_constant_overrides(text: str) -> dict[str, float]:
    """Parse a 'key=value,key=value' CLI override string into a dict."""
    out: dict[str, float] = {}
    if not text:
        return out
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"bad constant override {part!r}: expected key=value")
        key, _, value = part.partition("=")
        out[key.strip()] = float(value)
    return out


#: Short CLI names for the fitted constants (the long names also work).
CONSTANT_ALIASES = {
    "c_h": "GAP_DEPTH_C",
    "c_a": "GAP_DP_EPS_C",
    "c_s": "SAMPLE_C",
    "c_t": "GAP_SLACK_C",
    "c_ldd": "LDD_RADIUS_C",
}


def apply_constant_overrides(overrides: dict[str, float]) -> dict[str, float]:
    """Set module-level constants by alias or name; returns the prior values.

    Only float/int module constants are assignable; unknown keys raise
    ValueError.  Pass the returned mapping back in to restore.
    """
    module = globals()
    previous: dict[str, float] = {}
    for key, value in overrides.items():
        name = CONSTANT_ALIASES.get(key, key.upper())
        if name not in module or not isinstance(module[name], (int, float)) \
                or isinstance(module[name], bool):
            raise ValueError(f"unknown constant {key!r}")
        previous[key] = module[name]
        module[name] = type(module[name])(value)
    return previous
