"""Parameter rasters and efficiency sweeps for figure reproduction.

Three products: a raster over the (x1, x2) budget plane showing where
mutually beneficial transfers exist and where the alliance-optimal transfer
is nonzero; payoff-change curves along the transfer axis for one game; and
a sweep over the efficiency beta tabulating attainable payoff maxima.

Rasters depict only the oriented half plane phi2/phi1 <= x2/x1; cells on
the other side are marked out of frame and carry no analysis fields.
"""

import math
from dataclasses import dataclass

from blotto_alliance.adversary_response import (
    Case,
    GameParams,
    _classify_f,
)
from blotto_alliance.transfer_engine import (
    Transfer,
    _alliance_value_f,
    _in_g_dagger_f,
    _march_alliance,
    _mb_threshold_f,
    alliance_optimal,
    mb_exists,
    payoffs_at,
)


@dataclass(frozen=True)
class Axis:
    name: str
    lower: float
    upper: float
    steps: int

    def __post_init__(self):
        if self.steps < 2:
            raise ValueError(f"axis {self.name}: steps must be >= 2, got {self.steps}")
        if not (self.lower < self.upper):
            raise ValueError(f"axis {self.name}: lower must be < upper")
        if not (self.lower > 0):
            raise ValueError(f"axis {self.name}: lower must be positive for budget axes")

    def values(self) -> list[float]:
        span = self.upper - self.lower
        return [self.lower + span * i / (self.steps - 1) for i in range(self.steps)]


@dataclass(frozen=True)
class SweepGrid:
    axes: tuple[Axis, ...]
    fixed: dict
    beta_list: tuple[float, ...]

    def __post_init__(self):
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValueError("swept axis names must be distinct")
        overlap = set(names) & set(self.fixed)
        if overlap:
            raise ValueError(f"swept parameters overlap fixed ones: {sorted(overlap)}")
        if not self.beta_list:
            raise ValueError("beta_list must be nonempty")
        for b in self.beta_list:
            if not (0.0 < b <= 1.0):
                raise ValueError(f"beta values must lie in (0, 1], got {b}")


@dataclass(frozen=True)
class SweepCell:
    beta: float
    x1: float
    x2: float
    in_frame: bool
    case_label: Case | None = None
    mb_exists: bool | None = None
    tau_dagger: float | None = None
    mb_beta_threshold: float | None = None
    alliance_gain: float | None = None


def region_raster(grid: SweepGrid) -> list[SweepCell]:
    """One cell per (beta, x2, x1) triple, row-major with x1 varying fastest."""
    names = {a.name for a in grid.axes}
    if names != {"x1", "x2"}:
        raise ValueError(f"region raster sweeps exactly x1 and x2, got {sorted(names)}")
    if set(grid.fixed) != {"phi1", "phi2"}:
        raise ValueError(f"region raster fixes exactly phi1 and phi2, got {sorted(grid.fixed)}")
    phi1 = float(grid.fixed["phi1"])
    phi2 = float(grid.fixed["phi2"])
    if not (phi1 > 0 and phi2 > 0):
        raise ValueError("phi1 and phi2 must be positive")
    by_name = {a.name: a for a in grid.axes}
    x1_values = by_name["x1"].values()
    x2_values = by_name["x2"].values()

    cells = []
    for beta in grid.beta_list:
        for x2 in x2_values:
            for x1 in x1_values:
                if phi2 * x1 > phi1 * x2:
                    cells.append(SweepCell(beta=beta, x1=x1, x2=x2, in_frame=False))
                    continue
                case = _classify_f(phi1, phi2, x1, x2)
                threshold = _mb_threshold_f(phi1, phi2, x1, x2)
                exists = case in (2, 3) and beta > threshold
                tau_dagger, gain = 0.0, 0.0
                if not _in_g_dagger_f(phi1, phi2, x1, x2, beta):
                    t_dag = _march_alliance(phi1, phi2, x1, x2, beta)
                    tau_dagger = -t_dag
                    gain = max(
                        _alliance_value_f(phi1, phi2, x1, x2, beta, t_dag)
                        - _alliance_value_f(phi1, phi2, x1, x2, beta, 0.0),
                        0.0,
                    )
                cells.append(
                    SweepCell(
                        beta=beta,
                        x1=x1,
                        x2=x2,
                        in_frame=True,
                        case_label=Case(case),
                        mb_exists=exists,
                        tau_dagger=tau_dagger,
                        mb_beta_threshold=threshold,
                        alliance_gain=gain,
                    )
                )
    return cells


def payoff_curves(
    g: GameParams, beta: float, tau_range: tuple[float, float], steps: int
) -> list[tuple[float, float, float, float]]:
    """Rows (tau, du1, du2, u12) at evenly spaced transfers over tau_range."""
    lo, hi = tau_range
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    if not (lo < hi):
        raise ValueError("tau range must satisfy lo < hi")
    if lo < -g.x2 or hi > g.x1:
        raise ValueError(f"tau range must lie within (-{g.x2}, {g.x1})")
    base = payoffs_at(g, Transfer(tau=0.0, beta=beta))
    eps_lo = -g.x2 + max(1e-12, 1e-12 * g.x2)
    eps_hi = g.x1 - max(1e-12, 1e-12 * g.x1)
    rows = []
    for i in range(steps):
        tau = lo + (hi - lo) * i / (steps - 1)
        tau = min(max(tau, eps_lo), eps_hi)
        p = payoffs_at(g, Transfer(tau=tau, beta=beta))
        rows.append((tau, p.u1 - base.u1, p.u2 - base.u2, p.u1 + p.u2))
    return rows


@dataclass(frozen=True)
class BetaSweepRow:
    beta: float
    u1_nominal: float
    u2_nominal: float
    u12_nominal: float
    max_u1_mutual: float
    max_u2_mutual: float
    max_u1_any: float
    max_u2_any: float
    max_u12: float
    u1_at_alliance_opt: float
    u2_at_alliance_opt: float
    mb_exists: bool
    alliance_nonzero: bool


def beta_sweep(
    g: GameParams,
    beta_range: tuple[float, float],
    steps: int,
    tau_steps: int = 2001,
) -> list[BetaSweepRow]:
    """Attainable payoff maxima per efficiency value.

    The mutual columns maximize one player's payoff over transfers that do
    not push the other player below their no-transfer payoff; the any
    columns drop that constraint; max_u12 uses the exact alliance optimum.
    Payoffs at the alliance-optimal transfer are tabulated separately since
    that transfer generally favors one player.
    """
    lo, hi = beta_range
    if not (0.0 < lo < hi <= 1.0):
        raise ValueError(f"beta range must satisfy 0 < lo < hi <= 1, got ({lo}, {hi})")
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")

    base = payoffs_at(g, Transfer(tau=0.0, beta=1.0))
    u1_nom, u2_nom = base.u1, base.u2
    u12_nom = u1_nom + u2_nom

    eps_lo = -g.x2 + max(1e-12, 1e-12 * g.x2)
    eps_hi = g.x1 - max(1e-12, 1e-12 * g.x1)
    taus = [eps_lo + (eps_hi - eps_lo) * i / (tau_steps - 1) for i in range(tau_steps)]
    taus.append(0.0)

    rows = []
    for i in range(steps):
        beta = lo + (hi - lo) * i / (steps - 1)
        max_u1_mut = max_u2_mut = -math.inf
        max_u1_any = max_u2_any = -math.inf
        for tau in taus:
            p = payoffs_at(g, Transfer(tau=tau, beta=beta))
            max_u1_any = max(max_u1_any, p.u1)
            max_u2_any = max(max_u2_any, p.u2)
            if p.u2 >= u2_nom - 1e-12:
                max_u1_mut = max(max_u1_mut, p.u1)
            if p.u1 >= u1_nom - 1e-12:
                max_u2_mut = max(max_u2_mut, p.u2)
        tau_dag, gain = alliance_optimal(g, beta)
        p_dag = payoffs_at(g, Transfer(tau=tau_dag, beta=beta))
        rows.append(
            BetaSweepRow(
                beta=beta,
                u1_nominal=u1_nom,
                u2_nominal=u2_nom,
                u12_nominal=u12_nom,
                max_u1_mutual=max_u1_mut,
                max_u2_mutual=max_u2_mut,
                max_u1_any=max_u1_any,
                max_u2_any=max_u2_any,
                max_u12=u12_nom + gain,
                u1_at_alliance_opt=p_dag.u1,
                u2_at_alliance_opt=p_dag.u2,
                mb_exists=mb_exists(g, beta),
                alliance_nonzero=tau_dag != 0.0,
            )
        )
    return rows


__all__ = [
    "Axis",
    "BetaSweepRow",
    "SweepCell",
    "SweepGrid",
    "beta_sweep",
    "payoff_curves",
    "region_raster",
]
