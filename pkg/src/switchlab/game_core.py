"""Core game engine: configs, trajectories, switch counting, and regret.

A game is a T-round interaction.  Each round the player commits an action
x_t inside the unit p-ball, the adversary observes x_t and answers with a
linear loss w_t inside the dual-pairing ball, then both sides observe the
pair.  Regret for linear losses reduces to

    sum_t w_t . x_t  +  || sum_t w_t ||_dual

where the dual norm is L2 for p=2 and L1 for p=inf.  The action sequence
must contain strictly fewer than ``budget_K`` switches; a switch is an
exact-inequality change between consecutive emitted actions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BudgetViolationError

INF = math.inf

#: slack used when checking norm-ball membership, absorbs normalization rounding
BALL_SLACK = 1e-12


def norm_of(x: np.ndarray, p: float) -> float:
    """Primal p-norm restricted to the two cases the lab uses (2 and inf)."""
    if p == 2:
        return float(np.linalg.norm(x))
    if p == INF:
        return float(np.max(np.abs(x))) if x.size else 0.0
    raise ValueError(f"unsupported norm p={p!r}; expected 2 or inf")


def dual_norm(w: np.ndarray, player_norm_p: float) -> float:
    """Dual norm of the player's ball: L2 is self-dual, the dual of Linf is L1."""
    w = np.asarray(w, dtype=float)
    if not np.all(np.isfinite(w)):
        raise ValueError("dual_norm requires finite entries")
    if player_norm_p == 2:
        return float(np.linalg.norm(w))
    if player_norm_p == INF:
        return float(np.sum(np.abs(w)))
    raise ValueError(f"unsupported norm p={player_norm_p!r}; expected 2 or inf")


@dataclass(frozen=True)
class GameConfig:
    """One game instance: horizon, switch budget, dimension, geometry, seed.

    ``budget_K`` is a hard cap: feasible action sequences contain strictly
    fewer than K switches.  K > T is rejected up front (a T-round sequence
    can never use more than T-1 switches, so larger budgets only relax an
    already-vacuous constraint).
    """

    horizon_T: int
    budget_K: int
    dimension_n: int = 1
    player_norm_p: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.horizon_T < 1:
            raise ValueError("horizon_T must be a positive integer")
        if self.budget_K < 1:
            raise ValueError("budget_K must be a positive integer")
        if self.budget_K > self.horizon_T:
            raise ValueError("budget_K must satisfy K <= T")
        if self.dimension_n < 1:
            raise ValueError("dimension_n must be >= 1")
        if self.player_norm_p not in (2, INF):
            raise ValueError("player_norm_p must be 2 or inf")
        if self.seed < 0:
            raise ValueError("seed must be unsigned")

    @property
    def adversary_norm_q(self) -> float:
        # L2 pairs with L2; Linf pairs with Linf losses (regret then uses L1).
        return self.player_norm_p


@dataclass(frozen=True)
class RoundRecord:
    """One completed round: the action, the loss, and the moving flag."""

    action_x: np.ndarray
    loss_w: np.ndarray
    is_moving: bool


@dataclass(frozen=True)
class Trajectory:
    """A completed game.  Immutable once returned.

    ``feasible`` is False when the recorded actions used switch number
    budget_K or more; such trajectories carry ``regret=None`` and any
    attempt to evaluate their regret raises :class:`BudgetViolationError`.
    """

    config: GameConfig
    rounds: tuple[RoundRecord, ...]
    switch_count: int
    cumulative_W: np.ndarray
    regret: float | None
    feasible: bool = field(default=True)

    @classmethod
    def from_rounds(cls, config: GameConfig, rounds: Sequence[RoundRecord]) -> "Trajectory":
        rounds = tuple(rounds)
        if not rounds:
            raise ValueError("a trajectory needs at least one round")
        actions = [r.action_x for r in rounds]
        switches = count_switches(actions)
        W = np.zeros(config.dimension_n)
        for r in rounds:
            W = W + r.loss_w
        W.setflags(write=False)
        feasible = switches < config.budget_K
        regret = None
        if feasible:
            payoff = sum(float(np.dot(r.loss_w, r.action_x)) for r in rounds)
            regret = payoff + dual_norm(W, config.player_norm_p)
        return cls(config=config, rounds=rounds, switch_count=switches,
                   cumulative_W=W, regret=regret, feasible=feasible)

    def block_lengths(self) -> list[int]:
        """Lengths of maximal stationary blocks, from the is_moving flags."""
        lengths: list[int] = []
        for r in self.rounds:
            if r.is_moving:
                lengths.append(1)
            else:
                lengths[-1] += 1
        return lengths


def count_switches(actions: Sequence[np.ndarray]) -> int:
    """Number of indices i with x_{i+1} != x_i, by exact vector equality.

    No tolerance: a strategy that intends to stay put must re-emit the
    identical value.
    """
    if len(actions) == 0:
        raise ValueError("count_switches needs a nonempty sequence")
    switches = 0
    prev = np.asarray(actions[0])
    for a in actions[1:]:
        a = np.asarray(a)
        if not np.array_equal(prev, a):
            switches += 1
        prev = a
    return switches


def linear_regret(traj: Trajectory) -> float:
    """Regret of a feasible trajectory: sum_t w_t.x_t + ||sum_t w_t||_dual."""
    if not traj.feasible:
        raise BudgetViolationError(
            f"trajectory used {traj.switch_count} switches with budget "
            f"K={traj.config.budget_K}")
    payoff = sum(float(np.dot(r.loss_w, r.action_x)) for r in traj.rounds)
    return payoff + dual_norm(traj.cumulative_W, traj.config.player_norm_p)


def play_game(player, adversary, config: GameConfig) -> Trajectory:
    """Run the adaptive protocol for T rounds and return the trajectory.

    Per round: the player decides x_t from its own state, the adversary
    observes x_t (plus the moving flag, computed here from exact action
    equality so there is a single source of truth) and decides w_t, then
    the player observes w_t.  A player that would exceed the switch budget
    aborts the game with an error naming the offending round.

    Both strategies must be freshly initialized for ``config``.
    """
    n = config.dimension_n
    p = config.player_norm_p
    q = config.adversary_norm_q
    records: list[RoundRecord] = []
    prev_x: np.ndarray | None = None
    switches = 0
    W = np.zeros(n)
    payoff = 0.0

    for t in range(1, config.horizon_T + 1):
        x = np.asarray(player.decide(), dtype=float).reshape(n)
        if norm_of(x, p) > 1.0 + BALL_SLACK:
            raise ValueError(f"round {t}: player action leaves the unit {p}-ball")
        is_moving = prev_x is None or not np.array_equal(x, prev_x)
        if is_moving and prev_x is not None:
            switches += 1
            if switches >= config.budget_K:
                raise BudgetViolationError(
                    f"round {t}: switch number {switches} with budget "
                    f"K={config.budget_K}", round_index=t)
        w = np.asarray(adversary.respond(x, is_moving), dtype=float).reshape(n)
        if norm_of(w, q) > 1.0 + BALL_SLACK:
            raise ValueError(f"round {t}: adversary loss leaves the unit {q}-ball")
        player.observe(w)
        x_rec = x.copy()
        w_rec = w.copy()
        x_rec.setflags(write=False)
        w_rec.setflags(write=False)
        records.append(RoundRecord(action_x=x_rec, loss_w=w_rec, is_moving=is_moving))
        W += w
        payoff += float(np.dot(w, x))
        prev_x = x

    W.setflags(write=False)
    return Trajectory(config=config, rounds=tuple(records), switch_count=switches,
                      cumulative_W=W, regret=payoff + dual_norm(W, p), feasible=True)
