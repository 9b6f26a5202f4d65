"""Brute-force exact minimax solvers for tiny 1-d games.

Ground truth against which the closed-form constants and bounds are
checked.  The value

    V = inf_{x_1} sup_{w_1} ... inf_{x_T} sup_{w_T}
        sum_t w_t x_t + |Z + sum_t w_t|,   switches(x) < K,

is computed by backward induction over the state (round, switches left,
current action, accumulated loss sum W).  Only the player is discretized
(onto an odd uniform grid containing 0 and +-1); restricting the player
can only raise the value, so the oracle upper-bounds the continuum game
and refining the grid brings it down monotonically.  The adversary keeps
its exact optimum at the endpoints {-1, +1}: for any fixed continuation
the payoff is convex in each w_t, so the per-round sup over [-1, 1] is
attained at an endpoint; ``dense_adversary_value`` re-solves small games
with a finer adversary grid to validate that collapse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError

MAX_HORIZON = 12
MAX_STATES = 10 ** 8


@dataclass(frozen=True)
class OracleConfig:
    """Instance for the exact solver.  ``x_grid`` is an odd count of
    equispaced player actions in [-1, 1] so 0 and +-1 are representable."""

    horizon_T: int
    budget_K: int
    x_grid: int = 41
    initial_bias_Z: float = 0.0

    def __post_init__(self):
        if not 1 <= self.horizon_T <= MAX_HORIZON:
            raise CapacityError(f"oracle horizon must be in [1, {MAX_HORIZON}]")
        if not 1 <= self.budget_K <= self.horizon_T:
            raise ValueError("budget_K must satisfy 1 <= K <= T")
        if self.x_grid < 3 or self.x_grid % 2 == 0:
            raise ValueError("x_grid must be an odd count >= 3")
        states = self.x_grid * (2 * self.horizon_T + 1) * self.budget_K * self.horizon_T
        if states > MAX_STATES:
            raise CapacityError(f"state space {states} exceeds {MAX_STATES}")

    @property
    def grid_slack(self) -> float:
        # Lipschitz-1 payoff per round times the half-step of the action grid,
        # over T rounds; conservative cover for player discretization.
        return 2.0 * self.horizon_T / (self.x_grid - 1)


@dataclass(frozen=True)
class OracleReport:
    """Exact (player-discretized) value plus the bound sandwich it was
    checked against.  The discretization bias is one-sided: value >=
    continuum value, shrinking as x_grid is refined."""

    value: float
    config: OracleConfig
    witness_first_action: float
    bound_lower: float
    bound_upper: float

    @property
    def grid_slack(self) -> float:
        return self.config.grid_slack


def minimax_sandwich(T: int, K: int, Z: float = 0.0) -> tuple[float, float]:
    """Bias-aware sandwich: T*a_K(0) <= R_K(T, 0) <= ceil(T/K) R(K), where
    a_K(0) is the quadratic-floor value at the origin (1 for K=1, 1/sqrt(2K)
    beyond); max(., |Z|) below and +|Z| above extend it to nonzero bias."""
    from .fugal_engine import quadratic_floor
    lower = max(T * quadratic_floor(K, 0.0), abs(Z))
    upper = abs(Z) + math.ceil(T / K) * unconstrained_regret_closed_form(K)
    return lower, upper


def exact_minimax_1d(cfg: OracleConfig) -> OracleReport:
    """Backward-induction value of the switching-constrained 1-d game.

    State axes: switches remaining k = 0..K-1, current action index, and
    W (integral, since the adversary plays +-1).  Switching to a different
    action consumes a switch; k = 0 pins the action.  The first round's
    action choice is free.
    """
    T, K, Z = cfg.horizon_T, cfg.budget_K, cfg.initial_bias_Z
    X = np.linspace(-1.0, 1.0, cfg.x_grid)
    Wn = 2 * T + 3
    off = T + 1
    Wvals = np.arange(-off, off + 1, dtype=float)

    V = np.broadcast_to(np.abs(Z + Wvals), (K, cfg.x_grid, Wn)).copy()

    def adversary_step(V: np.ndarray) -> np.ndarray:
        # A[k, i, c] = max_w (w x_i + V[k, i, c + w]); edge columns unused
        A = np.full_like(V, np.nan)
        A[:, :, 1:-1] = np.maximum(X[None, :, None] + V[:, :, 2:],
                                   -X[None, :, None] + V[:, :, :-2])
        return A

    for _t in range(T, 1, -1):
        A = adversary_step(V)
        Vnew = A.copy()
        if K > 1:
            best_move = A[:-1].min(axis=1, keepdims=True)
            Vnew[1:] = np.minimum(A[1:], best_move)
        V = Vnew

    A = adversary_step(V)
    root = A[K - 1, :, off]
    idx = int(np.argmin(root))
    lower, upper = minimax_sandwich(T, K, Z)
    return OracleReport(value=float(root[idx]), config=cfg,
                        witness_first_action=float(X[idx]),
                        bound_lower=lower, bound_upper=upper)


def dense_adversary_value(T: int, K: int, x_grid: int = 21, denom: int = 5,
                          bias_Z: float = 0.0) -> float:
    """Same game but with the adversary on the grid {j/denom : |j| <= denom}.

    Used at tiny horizons to confirm the endpoint restriction loses nothing:
    the dense value must match the +-1 value to roundoff.
    """
    if T > 4:
        raise CapacityError("dense-adversary validation is for T <= 4")
    X = np.linspace(-1.0, 1.0, x_grid)
    half = denom * (T + 1)
    Wn = 2 * half + 1
    off = half
    Wvals = np.arange(-half, half + 1, dtype=float) / denom

    V = np.broadcast_to(np.abs(bias_Z + Wvals), (K, x_grid, Wn)).copy()
    js = range(-denom, denom + 1)

    def adversary_step(V: np.ndarray) -> np.ndarray:
        A = np.full_like(V, -np.inf)
        lo, hi = denom, Wn - denom
        for j in js:
            cand = (j / denom) * X[None, :, None] + V[:, :, lo + j:hi + j]
            A[:, :, lo:hi] = np.maximum(A[:, :, lo:hi], cand)
        return A

    for _t in range(T, 1, -1):
        A = adversary_step(V)
        Vnew = A.copy()
        if K > 1:
            best_move = A[:-1].min(axis=1, keepdims=True)
            Vnew[1:] = np.minimum(A[1:], best_move)
        V = Vnew

    A = adversary_step(V)
    return float(A[K - 1, :, off].min())


def unconstrained_regret_closed_form(K: int) -> float:
    """Minimax regret R(K) of the unconstrained K-round 1-d game:

        R(K) = (K / 2^K) C(K, K/2)              for even K,
        R(K) = (K / 2^(K-1)) C(K-1, (K-1)/2)    for odd K,

    with R(K) = R(K+1) for odd K."""
    if K < 1:
        raise ValueError("K must be a positive integer")
    if K % 2 == 0:
        return K * math.comb(K, K // 2) / float(2 ** K)
    return K * math.comb(K - 1, (K - 1) // 2) / float(2 ** (K - 1))


def tk_inequality_check(T: int, K: int) -> bool:
    """Whether ceil(T/K) <= 2T / sqrt(K(K+1)) (true for all 1 <= K <= T)."""
    if not 1 <= K <= T:
        raise ValueError("need 1 <= K <= T")
    return -(-T // K) <= 2.0 * T / math.sqrt(K * (K + 1.0))


def write_oracle_csv(reports: list[OracleReport], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("T,K,Z,value,lower,upper\n")
        for r in reports:
            c = r.config
            fh.write(",".join([
                str(c.horizon_T), str(c.budget_K), f"{c.initial_bias_Z:.17g}",
                f"{r.value:.17g}", f"{r.bound_lower:.17g}", f"{r.bound_upper:.17g}",
            ]) + "\n")
