"""Budget-transfer analysis: payoff curves, mutual-benefit tests, alliance optimum.

A transfer tau in (-x2, x1) moves budget between the players before the
adversary responds; the recipient only receives a fraction beta in (0, 1] of
what was sent. All analysis happens in the oriented frame
(phi2/phi1 <= x2/x1), where the only candidate direction is player 2
donating to player 1 (tau < 0); mirrored games are handled by swapping
indices on entry and negating transfer signs on exit.

Closed forms implemented here:

  * mutual-benefit efficiency threshold
        min( sqrt(4*phi2*x1/(phi1*x2**3)) - x1/x2,
             sqrt(4*phi2*x1/(phi1*x2))    + x1/x2 )
    where the first branch binds in case 2 and the second in case 3; a
    mutually beneficial transfer exists iff the game is in case 2 or 3 and
    beta strictly exceeds the branch for its case.

  * the zero-transfer-optimal set: games where no transfer can raise the
    combined payoff u1 + u2. Case 4 games always belong; case 2 games belong
    iff x1 + beta*x2 <= sqrt(phi2*x1/(phi1*x2)); case 3 games belong iff
    beta*phi1 - phi2 <= sqrt(phi1*phi2/(x1*x2)) * (x1 - beta*x2); case 1
    games never belong.

  * the alliance-optimal transfer, found by marching the induced game
    through its case regions and bisecting the stationarity condition of
    the region where the combined payoff stops improving.
"""

import math
from dataclasses import dataclass

from blotto_alliance.adversary_response import (
    Case,
    GameParams,
    Orientation,
    PayoffProfile,
    _classify_f,
    _payoffs_any_f,
    _payoffs_f,
    normalize,
)

# Transfers are clamped this far inside the open domain (-x2, x1) before
# payoff evaluation; the boundaries themselves are excluded.
_EDGE = 1e-12
_TAU_ABS_TOL = 1e-9
_MAX_BISECT = 200
_SCAN_POINTS = 97


class InternalInconsistencyError(RuntimeError):
    """A root bracket the theory guarantees could not be established."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message if diagnostics is None else f"{message} ({diagnostics})")
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class Transfer:
    """A net transfer from player 1 to player 2 (negative = the reverse)."""

    tau: float
    beta: float

    def __post_init__(self):
        if not (0.0 < self.beta <= 1.0):
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if not math.isfinite(self.tau):
            raise ValueError(f"tau must be finite, got {self.tau}")


@dataclass(frozen=True)
class PostTransferBudgets:
    x1_bar: float
    x2_bar: float


@dataclass(frozen=True)
class TransferAnalysis:
    """Full transfer analysis of one game at one efficiency beta.

    Transfer quantities (interval endpoints, alliance_tau) are expressed in
    the caller's frame and budget units; case_at_zero refers to the oriented
    normalized game recorded in `orientation`.
    """

    mb_exists: bool
    mb_interval: tuple[float, float] | None
    mb_beta_threshold: float
    alliance_tau: float
    alliance_payoff_gain: float
    in_g_dagger: bool
    case_at_zero: Case
    orientation: Orientation
    mb_interval_anomaly: bool = False


def apply_transfer(g: GameParams, t: Transfer) -> PostTransferBudgets:
    """Post-transfer budgets in the caller's frame; tau must lie in (-x2, x1)."""
    if not (-g.x2 < t.tau < g.x1):
        raise ValueError(f"tau must lie in (-{g.x2}, {g.x1}), got {t.tau}")
    x1_bar, x2_bar = _induced_budgets(g.x1, g.x2, t.tau, t.beta)
    return PostTransferBudgets(x1_bar=x1_bar, x2_bar=x2_bar)


def _induced_budgets(x1: float, x2: float, tau: float, beta: float) -> tuple[float, float]:
    if tau > 0.0:
        return x1 - tau, x2 + beta * tau
    return x1 + beta * (-tau), x2 - (-tau)


def _clamp_tau(g: GameParams, tau: float) -> float:
    lo = -g.x2 + max(_EDGE, _EDGE * g.x2)
    hi = g.x1 - max(_EDGE, _EDGE * g.x1)
    return min(max(tau, lo), hi)


def payoffs_at(g: GameParams, t: Transfer) -> PayoffProfile:
    """Equilibrium payoffs of the game induced by the transfer, caller's frame."""
    if not (-g.x2 < t.tau < g.x1):
        raise ValueError(f"tau must lie in (-{g.x2}, {g.x1}), got {t.tau}")
    tau = _clamp_tau(g, t.tau)
    x1_bar, x2_bar = _induced_budgets(g.x1, g.x2, tau, t.beta)
    xa = g.adversary_budget
    u1, u2 = _payoffs_any_f(g.phi1, g.phi2, x1_bar / xa, x2_bar / xa)
    return PayoffProfile(u1=u1, u2=u2, u_adversary=g.phi1 + g.phi2 - u1 - u2)


def delta_payoffs(g: GameParams, t: Transfer) -> tuple[float, float]:
    """Per-player payoff change of the transfer relative to no transfer."""
    now = payoffs_at(g, t)
    base = payoffs_at(g, Transfer(tau=0.0, beta=t.beta))
    return now.u1 - base.u1, now.u2 - base.u2


def alliance_payoff(g: GameParams, t: Transfer) -> float:
    """Combined payoff u1 + u2 of the two players under the transfer."""
    p = payoffs_at(g, t)
    return p.u1 + p.u2


def _oriented_floats(g: GameParams) -> tuple[float, float, float, float, bool]:
    gn, orientation = normalize(g)
    return gn.phi1, gn.phi2, gn.x1, gn.x2, orientation.swapped


def _mb_threshold_f(phi1: float, phi2: float, x1: float, x2: float) -> float:
    t_case2 = math.sqrt(4.0 * phi2 * x1 / (phi1 * x2**3)) - x1 / x2
    t_case3 = math.sqrt(4.0 * phi2 * x1 / (phi1 * x2)) + x1 / x2
    return min(t_case2, t_case3)


def mb_beta_threshold(g: GameParams) -> float:
    """Efficiency above which a mutually beneficial transfer exists.

    Returned for every game; it is operative only in cases 2 and 3, where the
    smaller branch is always the one matching the game's own case.
    """
    phi1, phi2, x1, x2, _ = _oriented_floats(g)
    return _mb_threshold_f(phi1, phi2, x1, x2)


def mb_exists(g: GameParams, beta: float) -> bool:
    """Whether some transfer strictly raises both players' payoffs."""
    _check_beta(beta)
    phi1, phi2, x1, x2, _ = _oriented_floats(g)
    case = _classify_f(phi1, phi2, x1, x2)
    if case in (1, 4):
        return False
    return beta > _mb_threshold_f(phi1, phi2, x1, x2)


def in_g_dagger(g: GameParams, beta: float) -> bool:
    """Whether no transfer at all can improve the combined payoff u1 + u2."""
    _check_beta(beta)
    phi1, phi2, x1, x2, _ = _oriented_floats(g)
    return _in_g_dagger_f(phi1, phi2, x1, x2, beta)


def _in_g_dagger_f(phi1: float, phi2: float, x1: float, x2: float, beta: float) -> bool:
    case = _classify_f(phi1, phi2, x1, x2)
    if case == 4:
        return True
    if case == 1:
        return False
    if case == 2:
        return x1 + beta * x2 <= math.sqrt(phi2 * x1 / (phi1 * x2))
    return beta * phi1 - phi2 <= math.sqrt(phi1 * phi2 / (x1 * x2)) * (x1 - beta * x2)


def alliance_beta_threshold(g: GameParams) -> float | None:
    """Efficiency at which the alliance-optimal transfer turns nonzero.

    None for case 1 (always nonzero) and case 4 (always zero); for cases 2
    and 3 the returned value solves the respective membership boundary of
    the zero-transfer-optimal set, and may fall outside (0, 1].
    """
    phi1, phi2, x1, x2, _ = _oriented_floats(g)
    case = _classify_f(phi1, phi2, x1, x2)
    if case in (1, 4):
        return None
    if case == 2:
        return (math.sqrt(phi2 * x1 / (phi1 * x2)) - x1) / x2
    c = math.sqrt(phi1 * phi2 / (x1 * x2))
    return (phi2 + c * x1) / (phi1 + c * x2)


def _check_beta(beta: float) -> None:
    if not (0.0 < beta <= 1.0):
        raise ValueError(f"beta must lie in (0, 1], got {beta}")


# ---------------------------------------------------------------------------
# Alliance-optimal transfer: piecewise march over case regions.
# ---------------------------------------------------------------------------


def _quadratic_roots(a: float, b: float, c: float) -> list[float]:
    if a == 0.0:
        return [-c / b] if b != 0.0 else []
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return []
    s = math.sqrt(disc)
    return [(-b - s) / (2.0 * a), (-b + s) / (2.0 * a)]


def _boundary_seeds(
    phi1: float, phi2: float, x1: float, x2: float, beta: float, t_top: float
) -> list[float]:
    """Candidate case-boundary crossings along the donation path.

    With u = x1 + beta*t and v = x2 - t, every boundary between case regions
    (either orientation) is a root of a linear or quadratic polynomial in t:
    the proportional ray phi2*u = phi1*v, the all-in boundaries u*v = phi2/phi1
    and u*v = phi1/phi2, and the two strong-to-weak switches
    phi1*u*v/phi2 = (1-v)^2 and phi2*u*v/phi1 = (1-u)^2. The roots only seed
    the scan; segment edges are still located by bisection.
    """
    seeds = [(x2 - (phi2 / phi1) * x1) / (1.0 + (phi2 / phi1) * beta)]
    for cap in (phi2 / phi1, phi1 / phi2):
        # (x1 + beta*t)(x2 - t) = cap
        seeds += _quadratic_roots(beta, x1 - beta * x2, cap - x1 * x2)
    c = phi1 / phi2
    # c*u*v = (1 - v)^2 = (t + 1 - x2)^2
    seeds += _quadratic_roots(
        c * beta + 1.0,
        2.0 * (1.0 - x2) - c * (beta * x2 - x1),
        (1.0 - x2) ** 2 - c * x1 * x2,
    )
    r = phi2 / phi1
    # r*u*v = (1 - u)^2 = (1 - x1 - beta*t)^2
    seeds += _quadratic_roots(
        beta * beta + r * beta,
        -2.0 * beta * (1.0 - x1) - r * (beta * x2 - x1),
        (1.0 - x1) ** 2 - r * x1 * x2,
    )
    return [t for t in seeds if 0.0 < t < t_top]


def _march_alliance(phi1: float, phi2: float, x1: float, x2: float, beta: float) -> float:
    """Donation size t = -tau >= 0 maximizing u1 + u2 in the oriented frame.

    Walks the induced game's case regions as player 2 donates, using the
    sign of the combined payoff's derivative in each region; the derivative
    changes sign exactly once per region, so plain bisection suffices. The
    scan over case labels is seeded with the closed-form boundary candidates
    so that regions narrower than the scan spacing are not missed.
    """
    big_k = x1 + beta * x2  # x1_bar + beta*x2_bar is invariant along donations
    ratio = phi2 / phi1
    sqrt_pp = math.sqrt(phi1 * phi2)
    lead = beta * phi1 - phi2

    def budgets(t: float) -> tuple[float, float]:
        return x1 + beta * t, x2 - t

    def label(t: float) -> tuple[int, bool]:
        u, v = budgets(t)
        if phi2 * u > phi1 * v:
            return _classify_f(phi2, phi1, v, u), True
        return _classify_f(phi1, phi2, u, v), False

    def improving(t: float, case: int, flipped: bool) -> float:
        # positive while donating more still raises u1 + u2
        u, v = budgets(t)
        if case == 1:
            return 1.0 if not flipped else -1.0
        if case == 3:
            w = math.sqrt(u / v)
            return lead - sqrt_pp * (w - beta / w)
        if not flipped:
            return big_k - math.sqrt(ratio * u / v)
        return beta * math.sqrt(phi1 * v / (phi2 * u)) - big_k

    t_top = x2 - max(_EDGE, _EDGE * x2)
    ts = {t_top * i / (_SCAN_POINTS - 1) for i in range(_SCAN_POINTS)}
    nudge = 1e-7 * x2
    for seed in _boundary_seeds(phi1, phi2, x1, x2, beta, t_top):
        for t in (seed - nudge, seed, seed + nudge):
            if 0.0 < t < t_top:
                ts.add(t)
    ts = sorted(ts)
    labels = [label(t) for t in ts]

    cuts = [0.0]
    seg_labels = []
    current = labels[0]
    for i in range(1, len(ts)):
        if labels[i] != current:
            lo, hi = ts[i - 1], ts[i]
            for _ in range(_MAX_BISECT):
                if hi - lo <= _TAU_ABS_TOL:
                    break
                mid = 0.5 * (lo + hi)
                if label(mid) == current:
                    lo = mid
                else:
                    hi = mid
            seg_labels.append(current)
            cuts.append(0.5 * (lo + hi))
            current = labels[i]
    seg_labels.append(current)
    cuts.append(t_top)

    for k, (case, flipped) in enumerate(seg_labels):
        t_a, t_b = cuts[k], cuts[k + 1]
        if case == 4:
            return t_a
        s_a = improving(t_a, case, flipped)
        if s_a <= 0.0:
            return t_a
        s_b = improving(t_b, case, flipped)
        if s_b > 0.0:
            continue
        lo, hi = t_a, t_b
        for _ in range(_MAX_BISECT):
            if hi - lo <= _TAU_ABS_TOL:
                break
            mid = 0.5 * (lo + hi)
            if improving(mid, case, flipped) > 0.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    raise InternalInconsistencyError(
        "combined payoff still improving at the donation limit",
        {"phi1": phi1, "phi2": phi2, "x1": x1, "x2": x2, "beta": beta},
    )


def _alliance_value_f(phi1: float, phi2: float, x1: float, x2: float, beta: float, t: float) -> float:
    u, v = x1 + beta * t, x2 - t
    u1, u2 = _payoffs_any_f(phi1, phi2, u, v)
    return u1 + u2


def alliance_optimal(g: GameParams, beta: float) -> tuple[float, float]:
    """The transfer maximizing u1 + u2 and its gain over no transfer.

    Returns (0, 0) when the game sits in the zero-transfer-optimal set;
    otherwise the transfer is strictly in the donating direction (negative
    in the oriented frame) and the gain is positive.
    """
    _check_beta(beta)
    phi1, phi2, x1, x2, swapped = _oriented_floats(g)
    if _in_g_dagger_f(phi1, phi2, x1, x2, beta):
        return 0.0, 0.0
    t_dag = _march_alliance(phi1, phi2, x1, x2, beta)
    gain = _alliance_value_f(phi1, phi2, x1, x2, beta, t_dag) - _alliance_value_f(
        phi1, phi2, x1, x2, beta, 0.0
    )
    if gain < -1e-9 * (phi1 + phi2):
        raise InternalInconsistencyError(
            "alliance march produced a losing transfer",
            {"phi1": phi1, "phi2": phi2, "x1": x1, "x2": x2, "beta": beta, "t": t_dag, "gain": gain},
        )
    gain = max(gain, 0.0)
    tau_oriented = -t_dag
    tau_raw = (-tau_oriented if swapped else tau_oriented) * g.adversary_budget
    return tau_raw, gain


# ---------------------------------------------------------------------------
# Mutually beneficial transfer interval.
# ---------------------------------------------------------------------------


def _mb_interval_oriented(
    phi1: float, phi2: float, x1: float, x2: float, beta: float
) -> tuple[tuple[float, float] | None, bool]:
    """Maximal interval of donations improving both players, adjacent to 0.

    Returns ((tau_low, tau_high), anomaly) in the oriented frame with
    tau_low < tau_high <= 0, or (None, anomaly) when no improving transfer
    was located. The anomaly flag marks disconnected improving sets, which
    the theory rules out but the scan observes rather than assumes.
    """
    u1_base, u2_base = _payoffs_f(phi1, phi2, x1, x2)

    def both_gain(tau: float) -> float:
        u, v = _induced_budgets(x1, x2, tau, beta)
        u1, u2 = _payoffs_any_f(phi1, phi2, u, v)
        return min(u1 - u1_base, u2 - u2_base)

    lo_edge = -x2 + max(_EDGE, _EDGE * x2)
    n_linear = 2048
    taus = [lo_edge * (1.0 - i / n_linear) for i in range(n_linear)]  # ascending to ~0
    taus += [-x2 * 2.0**-k for k in range(12, 46)]
    taus = sorted(set(taus))
    gains = [both_gain(t) for t in taus]

    runs: list[tuple[int, int]] = []
    start = None
    for i, gval in enumerate(gains):
        if gval > 0.0 and start is None:
            start = i
        elif gval <= 0.0 and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(taus) - 1))

    if not runs:
        return None, True

    anomaly = len(runs) > 1
    first, last = runs[-1]  # the run nearest tau = 0

    if first == 0:
        tau_low = taus[0]
    else:
        lo, hi = taus[first - 1], taus[first]
        for _ in range(_MAX_BISECT):
            if hi - lo <= _TAU_ABS_TOL:
                break
            mid = 0.5 * (lo + hi)
            if both_gain(mid) > 0.0:
                hi = mid
            else:
                lo = mid
        tau_low = 0.5 * (lo + hi)

    if last == len(taus) - 1:
        tau_high = 0.0
    else:
        anomaly = True
        lo, hi = taus[last], taus[last + 1]
        for _ in range(_MAX_BISECT):
            if hi - lo <= _TAU_ABS_TOL:
                break
            mid = 0.5 * (lo + hi)
            if both_gain(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        tau_high = 0.5 * (lo + hi)

    return (tau_low, tau_high), anomaly


def mb_interval(g: GameParams, beta: float) -> tuple[float, float] | None:
    """Open interval of transfers improving both players, in the caller's frame."""
    _check_beta(beta)
    phi1, phi2, x1, x2, swapped = _oriented_floats(g)
    case = _classify_f(phi1, phi2, x1, x2)
    if case in (1, 4) or beta <= _mb_threshold_f(phi1, phi2, x1, x2):
        return None
    interval, _ = _mb_interval_oriented(phi1, phi2, x1, x2, beta)
    if interval is None:
        return None
    return _map_interval(interval, swapped, g.adversary_budget)


def _map_interval(
    interval: tuple[float, float], swapped: bool, xa: float
) -> tuple[float, float]:
    lo, hi = interval
    if swapped:
        return -hi * xa, -lo * xa
    return lo * xa, hi * xa


def analyze(g: GameParams, beta: float) -> TransferAnalysis:
    """Complete transfer analysis of a raw game at one efficiency value."""
    _check_beta(beta)
    gn, orientation = normalize(g)
    phi1, phi2, x1, x2 = gn.phi1, gn.phi2, gn.x1, gn.x2
    case = _classify_f(phi1, phi2, x1, x2)
    threshold = _mb_threshold_f(phi1, phi2, x1, x2)
    exists = case in (2, 3) and beta > threshold

    interval_raw = None
    anomaly = False
    if exists:
        interval, anomaly = _mb_interval_oriented(phi1, phi2, x1, x2, beta)
        if interval is not None:
            interval_raw = _map_interval(interval, orientation.swapped, g.adversary_budget)
        else:
            anomaly = True

    dagger = _in_g_dagger_f(phi1, phi2, x1, x2, beta)
    if dagger:
        alliance_tau, gain = 0.0, 0.0
    else:
        alliance_tau, gain = alliance_optimal(g, beta)

    return TransferAnalysis(
        mb_exists=exists,
        mb_interval=interval_raw,
        mb_beta_threshold=threshold,
        alliance_tau=alliance_tau,
        alliance_payoff_gain=gain,
        in_g_dagger=dagger,
        case_at_zero=Case(case),
        orientation=orientation,
        mb_interval_anomaly=anomaly,
    )


def mutual_margin(g: GameParams, beta: float, steps: int = 2001) -> float:
    """Best simultaneous improvement max_tau min(du1, du2) on a closed-form grid.

    Used to gate oracle comparisons: a grid oracle can only be expected to
    certify mutual benefit when this margin clears its discretization slack.
    """
    _check_beta(beta)
    gn, _ = normalize(g)
    base = payoffs_at(gn, Transfer(tau=0.0, beta=beta))
    lo = -gn.x2 + max(_EDGE, _EDGE * gn.x2)
    hi = gn.x1 - max(_EDGE, _EDGE * gn.x1)
    best = -math.inf
    for i in range(steps):
        tau = lo + (hi - lo) * i / (steps - 1)
        p = payoffs_at(gn, Transfer(tau=tau, beta=beta))
        best = max(best, min(p.u1 - base.u1, p.u2 - base.u2))
    return best


__all__ = [
    "InternalInconsistencyError",
    "PostTransferBudgets",
    "Transfer",
    "TransferAnalysis",
    "alliance_beta_threshold",
    "alliance_optimal",
    "alliance_payoff",
    "analyze",
    "apply_transfer",
    "delta_payoffs",
    "in_g_dagger",
    "mb_beta_threshold",
    "mb_exists",
    "mb_interval",
    "mutual_margin",
    "payoffs_at",
]
