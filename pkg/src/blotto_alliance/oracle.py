"""Brute-force ground truth for the coalitional game, by dense enumeration.

The oracle never touches the closed-form case table or any transfer
threshold: it computes the adversary's best response by enumerating splits
on a grid and scores transfers by enumerating tau on a grid, using only the
single-front Lotto payoff. Closed-form results enter exclusively as values
to compare against, passed in by the caller; disagreements are reported
with the discretization slack that was allowed.

Slack is estimated by finite differences: the variation of each payoff over
one split step at the chosen split, and the variation of the relevant
quantity over one tau step near its argmax.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from blotto_alliance import lotto_core
from blotto_alliance.adversary_response import GameParams

try:
    import numba
except ImportError:
    numba = None

# Comparisons are skipped within this distance of a beta threshold, where
# grid resolution cannot distinguish the two verdicts.
THRESHOLD_BAND = 1e-3

_CHUNK_ELEMENTS = 2_000_000


@dataclass(frozen=True)
class OracleConfig:
    tau_step: float = 1e-4
    split_step: float = 1e-3
    tolerance: float = 1e-9

    def __post_init__(self):
        for name in ("tau_step", "split_step", "tolerance"):
            if not (getattr(self, name) > 0):
                raise ValueError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class ClosedFormSummary:
    """Closed-form values to audit; produced by the analysis engine, not here."""

    mb_exists: bool
    mb_margin: float
    mb_threshold: float
    case_at_zero: int
    tau_dagger: float
    alliance_gain: float
    alliance_value: float
    alliance_beta_threshold: float | None
    adversary_payoff_at_zero: float
    x_a1_at_zero: float


@dataclass(frozen=True)
class Disagreement:
    quantity: str
    closed_value: float
    grid_value: float
    slack: float


@dataclass(frozen=True)
class OracleReport:
    """Grid verdicts for one (game, beta) pair.

    mb_exists_grid holds only when some grid transfer improves both players
    by more than the finite-difference slack of the enumeration; the raw
    strict-positivity flag is kept as a diagnostic because the true best
    margin tends to zero as tau -> 0 for every below-threshold game, which
    makes an unslacked verdict resolution-dependent.
    """

    mb_exists_grid: bool
    best_mutual_tau: float | None
    alliance_argmax_tau: float
    alliance_max: float
    disagreements: list[Disagreement] = field(default_factory=list)
    # diagnostics
    mb_exists_grid_raw: bool = False
    mutual_margin: float = -math.inf
    positive_tau_mutual: bool = False
    alliance_gain_grid: float = 0.0
    tau_count: int = 0
    slack_mutual: float = 0.0
    slack_alliance: float = 0.0


def _n_split(split_step: float) -> int:
    return max(1, round(1.0 / split_step))


def _scan_rows_numpy(
    phi1: float, phi2: float, x1b: np.ndarray, x2b: np.ndarray, a: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m = x1b.size
    a_star = np.empty(m)
    u1 = np.empty(m)
    u2 = np.empty(m)
    chunk = max(1, _CHUNK_ELEMENTS // a.size)
    for lo in range(0, m, chunk):
        sl = slice(lo, min(lo + chunk, m))
        mat1 = lotto_core.payoff_vec(x1b[sl, None], a[None, :], phi1)
        mat2 = lotto_core.payoff_vec(x2b[sl, None], (1.0 - a)[None, :], phi2)
        # max adversary payoff == min combined player payoff; argmin takes the
        # first occurrence, i.e. the smallest a
        j = np.argmin(mat1 + mat2, axis=1)
        rows = np.arange(mat1.shape[0])
        a_star[sl] = a[j]
        u1[sl] = mat1[rows, j]
        u2[sl] = mat2[rows, j]
    return a_star, u1, u2


def _scan_rows_impl(phi1, phi2, x1b, x2b, a):  # pragma: no cover - jit wrapper
    m = x1b.size
    n = a.size
    a_star = np.empty(m)
    u1 = np.empty(m)
    u2 = np.empty(m)
    for i in range(m):
        x1 = x1b[i]
        x2 = x2b[i]
        best = np.inf
        best_j = 0
        best_u1 = 0.0
        best_u2 = 0.0
        for j in range(n):
            aj = a[j]
            if aj == 0.0:
                v1 = phi1
            elif x1 <= aj:
                v1 = phi1 * x1 / (2.0 * aj)
            else:
                v1 = phi1 * (1.0 - aj / (2.0 * x1))
            bj = 1.0 - aj
            if bj == 0.0:
                v2 = phi2
            elif x2 <= bj:
                v2 = phi2 * x2 / (2.0 * bj)
            else:
                v2 = phi2 * (1.0 - bj / (2.0 * x2))
            s = v1 + v2
            if s < best:  # strict: ties keep the smallest a
                best = s
                best_j = j
                best_u1 = v1
                best_u2 = v2
        a_star[i] = a[best_j]
        u1[i] = best_u1
        u2[i] = best_u2
    return a_star, u1, u2


_scan_rows_jit = numba.njit(cache=True)(_scan_rows_impl) if numba is not None else None


def _best_response_rows(
    phi1: float, phi2: float, x1b: np.ndarray, x2b: np.ndarray, n_split: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Grid best response per row of induced budgets.

    Enumerates splits a in {0, 1/n, ..., 1} of the unit adversary budget,
    takes the first (smallest-a) maximizer of the adversary's total payoff,
    and returns (a_star, u1, u2) at that split for every row.
    """
    a = np.linspace(0.0, 1.0, n_split + 1)
    if _scan_rows_jit is not None:
        return _scan_rows_jit(phi1, phi2, np.ascontiguousarray(x1b), np.ascontiguousarray(x2b), a)
    return _scan_rows_numpy(phi1, phi2, x1b, x2b, a)


def adversary_grid_best_response(
    induced: GameParams, split_step: float = 1e-3
) -> tuple[float, float]:
    """Best split fraction on front 1 and the adversary payoff it earns.

    Solves the adversary's division problem by enumeration only; ties go to
    the smallest allocation on front 1.
    """
    xa = induced.adversary_budget
    x1b = np.array([induced.x1 / xa])
    x2b = np.array([induced.x2 / xa])
    a_star, u1, u2 = _best_response_rows(
        induced.phi1, induced.phi2, x1b, x2b, _n_split(split_step)
    )
    return float(a_star[0]), induced.phi1 + induced.phi2 - float(u1[0] + u2[0])


def _split_slack_rows(
    phi1: float,
    phi2: float,
    x1b: np.ndarray,
    x2b: np.ndarray,
    a_star: np.ndarray,
    u1: np.ndarray,
    u2: np.ndarray,
    split_step: float,
) -> np.ndarray:
    """Per-row payoff variation over one split step, a finite-difference slack."""
    slack = np.zeros_like(u1)
    for sign in (-1.0, 1.0):
        a = np.clip(a_star + sign * split_step, 0.0, 1.0)
        d1 = np.abs(lotto_core.payoff_vec(x1b, a, phi1) - u1)
        d2 = np.abs(lotto_core.payoff_vec(x2b, 1.0 - a, phi2) - u2)
        slack = np.maximum(slack, np.maximum(d1, d2))
    return slack


def transfer_grid_scan(
    g: GameParams,
    beta: float,
    cfg: OracleConfig | None = None,
    closed: ClosedFormSummary | None = None,
) -> OracleReport:
    """Scan every transfer on the tau grid and score it by enumeration.

    Works in the caller's frame (no index swap). When a ClosedFormSummary is
    supplied, the scan appends one Disagreement per audited quantity whose
    closed-form value cannot be reconciled with the grid within slack;
    comparisons inside a declared beta threshold band are skipped.
    """
    cfg = cfg or OracleConfig()
    if not (0.0 < beta <= 1.0):
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    xa = g.adversary_budget
    x1, x2 = g.x1 / xa, g.x2 / xa
    if cfg.tau_step >= min(x1, x2):
        raise ValueError("tau_step must be smaller than both player budgets")

    step = cfg.tau_step
    kmin = math.floor(-x2 / step) + 1
    kmax = math.ceil(x1 / step) - 1
    ks = np.arange(kmin, kmax + 1)
    taus = ks * step
    i0 = -kmin  # index of tau == 0

    pos = taus > 0.0
    x1b = np.where(pos, x1 - taus, x1 + beta * (-taus))
    x2b = np.where(pos, x2 + beta * taus, x2 - (-taus))

    n_split = _n_split(cfg.split_step)
    a_star, u1, u2 = _best_response_rows(g.phi1, g.phi2, x1b, x2b, n_split)
    row_slack = _split_slack_rows(
        g.phi1, g.phi2, x1b, x2b, a_star, u1, u2, 1.0 / n_split
    )

    du1 = u1 - u1[i0]
    du2 = u2 - u2[i0]
    margin = np.minimum(du1, du2)
    margin_conf = margin - (row_slack + row_slack[i0])

    raw_mutual = bool((margin > 0.0).any())
    confident_mask = margin_conf > 0.0
    mutual_confident = bool(confident_mask.any())
    best_mutual_tau = None
    if mutual_confident:
        masked = np.where(confident_mask, margin, -np.inf)
        best_mutual_tau = float(taus[int(np.argmax(masked))])
    mutual_margin = float(margin.max())
    positive_mutual = bool((margin_conf[pos] > 0.0).any()) if pos.any() else False

    alliance = u1 + u2
    i_star = int(np.argmax(alliance))
    alliance_max = float(alliance[i_star])
    alliance_gain_grid = alliance_max - float(alliance[i0])

    # local tau-direction variation of the alliance payoff near its argmax
    lo = max(i_star - 5, 0)
    hi = min(i_star + 6, alliance.size)
    window = alliance[lo:hi]
    l_tau = float(np.abs(np.diff(window)).max()) if window.size > 1 else 0.0
    slack_alliance = float(
        row_slack[i_star] + row_slack[i0] + l_tau + cfg.tolerance
    )
    slack_mutual = float(2.0 * row_slack.max() + cfg.tolerance)

    disagreements: list[Disagreement] = []
    if closed is not None:
        _compare(
            closed,
            beta,
            disagreements,
            mutual_margin=mutual_margin,
            mutual_confident=mutual_confident,
            slack_mutual=slack_mutual,
            alliance_max=alliance_max,
            alliance_gain_grid=alliance_gain_grid,
            slack_alliance=slack_alliance,
            w_grid=g.phi1 + g.phi2 - float(u1[i0] + u2[i0]),
            w_slack=float(row_slack[i0]) + cfg.tolerance,
        )

    return OracleReport(
        mb_exists_grid=mutual_confident,
        best_mutual_tau=best_mutual_tau,
        alliance_argmax_tau=float(taus[i_star]),
        alliance_max=alliance_max,
        disagreements=disagreements,
        mb_exists_grid_raw=raw_mutual,
        mutual_margin=mutual_margin,
        positive_tau_mutual=positive_mutual,
        alliance_gain_grid=alliance_gain_grid,
        tau_count=int(taus.size),
        slack_mutual=slack_mutual,
        slack_alliance=slack_alliance,
    )


def _compare(
    closed: ClosedFormSummary,
    beta: float,
    out: list[Disagreement],
    *,
    mutual_margin: float,
    mutual_confident: bool,
    slack_mutual: float,
    alliance_max: float,
    alliance_gain_grid: float,
    slack_alliance: float,
    w_grid: float,
    w_slack: float,
) -> None:
    in_mb_band = closed.case_at_zero in (2, 3) and abs(beta - closed.mb_threshold) < THRESHOLD_BAND
    if not in_mb_band:
        if closed.mb_exists and closed.mb_margin > slack_mutual and mutual_margin <= 0.0:
            out.append(
                Disagreement("mb_exists", closed.mb_margin, mutual_margin, slack_mutual)
            )
        elif not closed.mb_exists and mutual_confident:
            out.append(Disagreement("mb_exists", 0.0, mutual_margin, slack_mutual))

    in_alliance_band = (
        closed.alliance_beta_threshold is not None
        and abs(beta - closed.alliance_beta_threshold) < THRESHOLD_BAND
    )
    if not in_alliance_band:
        closed_nonzero = closed.tau_dagger != 0.0
        grid_nonzero = alliance_gain_grid > slack_alliance
        if closed_nonzero and closed.alliance_gain > slack_alliance and not grid_nonzero:
            out.append(
                Disagreement(
                    "alliance_nonzero", closed.alliance_gain, alliance_gain_grid, slack_alliance
                )
            )
        elif not closed_nonzero and grid_nonzero:
            out.append(
                Disagreement("alliance_nonzero", 0.0, alliance_gain_grid, slack_alliance)
            )
        if abs(alliance_max - closed.alliance_value) > slack_alliance:
            out.append(
                Disagreement(
                    "alliance_value", closed.alliance_value, alliance_max, slack_alliance
                )
            )

    if abs(w_grid - closed.adversary_payoff_at_zero) > w_slack:
        out.append(
            Disagreement("adversary_split", closed.adversary_payoff_at_zero, w_grid, w_slack)
        )


__all__ = [
    "ClosedFormSummary",
    "Disagreement",
    "OracleConfig",
    "OracleReport",
    "THRESHOLD_BAND",
    "adversary_grid_best_response",
    "transfer_grid_scan",
]
