import math

import numpy as np
import pytest

from switchlab.adversaries import ConstantAdversary, SignAdversary
from switchlab.errors import BudgetViolationError
from switchlab.game_core import (GameConfig, RoundRecord, Trajectory, count_switches,
                                 dual_norm, linear_regret, play_game)
from switchlab.players import ConstantPlayer, HalfSplitPlayer, Player


def test_count_switches_examples():
    v = np.array([0.3, -0.1])
    assert count_switches([v, v.copy(), v.copy()]) == 0
    assert count_switches([0.1, -0.2, -0.2, 0.3]) == 2
    assert count_switches([v]) == 0


def test_count_switches_empty_rejected():
    with pytest.raises(ValueError):
        count_switches([])


def test_count_switches_exact_equality_no_tolerance():
    a = np.array([0.5])
    b = np.array([0.5 + 1e-15])
    assert count_switches([a, b]) == 1
    assert count_switches([np.array([0.0]), np.array([-0.0])]) == 0


def test_dual_norm_examples():
    assert dual_norm(np.array([3.0, 4.0]), 2) == pytest.approx(5.0)
    assert dual_norm(np.array([1.0, -2.0]), math.inf) == pytest.approx(3.0)
    assert dual_norm(np.zeros(3), 2) == 0.0
    assert dual_norm(np.zeros(3), math.inf) == 0.0


def test_dual_norm_matches_sup_oracle():
    # sup over the unit ball of w.x, evaluated at the analytic maximizer
    rng = np.random.default_rng(0)
    for _ in range(100):
        w = rng.normal(size=rng.integers(1, 7))
        x2 = w / np.linalg.norm(w)
        assert dual_norm(w, 2) == pytest.approx(float(np.dot(w, x2)), abs=1e-12)
        xi = np.sign(w)
        assert dual_norm(w, math.inf) == pytest.approx(float(np.dot(w, xi)), abs=1e-12)


def test_dual_norm_rejects_bad_input():
    with pytest.raises(ValueError):
        dual_norm(np.array([np.inf]), 2)
    with pytest.raises(ValueError):
        dual_norm(np.array([1.0]), 3)


def _traj_1d(config, xs, ws):
    rounds = []
    prev = None
    for x, w in zip(xs, ws):
        moving = prev is None or x != prev
        rounds.append(RoundRecord(action_x=np.array([x]), loss_w=np.array([w]),
                                  is_moving=moving))
        prev = x
    return Trajectory.from_rounds(config, rounds)


def test_linear_regret_examples():
    t1 = _traj_1d(GameConfig(1, 1, 1), [0.0], [1.0])
    assert linear_regret(t1) == pytest.approx(1.0)

    t2 = _traj_1d(GameConfig(4, 2, 1), [0.0, 0.0, -1.0, -1.0], [1.0, 1.0, 1.0, 1.0])
    assert linear_regret(t2) == pytest.approx(2.0)

    cfg = GameConfig(2, 2, 2)
    rounds = [RoundRecord(np.array([1.0, 0.0]), np.array([0.0, 1.0]), True),
              RoundRecord(np.array([1.0, 0.0]), np.array([0.0, 1.0]), False)]
    t3 = Trajectory.from_rounds(cfg, rounds)
    assert linear_regret(t3) == pytest.approx(2.0)


def test_linear_regret_infeasible_raises():
    traj = _traj_1d(GameConfig(3, 2, 1), [0.0, 1.0, 0.0], [1.0, 1.0, 1.0])
    assert not traj.feasible
    assert traj.regret is None
    with pytest.raises(BudgetViolationError):
        linear_regret(traj)


def test_play_game_constant_vs_sign():
    cfg = GameConfig(3, 2, 1)
    traj = play_game(ConstantPlayer(cfg), SignAdversary(cfg), cfg)
    assert traj.regret == pytest.approx(3.0)
    assert traj.switch_count == 0


def test_play_game_halfsplit_vs_ones():
    cfg = GameConfig(4, 2, 1)
    traj = play_game(HalfSplitPlayer(cfg), ConstantAdversary(cfg, w=1.0), cfg)
    assert traj.regret == pytest.approx(2.0)


def test_play_game_zero_adversary_zero_regret():
    cfg = GameConfig(6, 3, 2)
    traj = play_game(ConstantPlayer(cfg, [0.6, 0.0]), ConstantAdversary(cfg), cfg)
    assert traj.regret == pytest.approx(0.0)


class _Alternator(Player):
    def __init__(self):
        self._t = 0

    def decide(self):
        return np.array([1.0 if self._t % 2 == 0 else -1.0])

    def observe(self, loss_w):
        self._t += 1


def test_play_game_budget_violation_names_round():
    cfg = GameConfig(5, 2, 1)
    with pytest.raises(BudgetViolationError) as err:
        play_game(_Alternator(), ConstantAdversary(cfg, w=1.0), cfg)
    assert err.value.round_index == 3


def test_play_game_out_of_ball_action_message():
    cfg = GameConfig(3, 2, 1)

    class Big(Player):
        def decide(self):
            return np.array([1.5])

    with pytest.raises(ValueError, match="unit"):
        play_game(Big(), ConstantAdversary(cfg), cfg)


def test_trajectory_regret_recompute_and_moving_flags():
    cfg = GameConfig(20, 4, 1, seed=3)
    rng = np.random.default_rng(5)
    xs, ws = [], []
    x = 0.0
    for t in range(20):
        if t in (5, 11, 17):
            x = float(rng.uniform(-1, 1))
        xs.append(x)
        ws.append(float(rng.uniform(-1, 1)))
    traj = _traj_1d(cfg, xs, ws)
    assert linear_regret(traj) == pytest.approx(traj.regret, abs=1e-12)
    moving = sum(1 for r in traj.rounds if r.is_moving)
    assert traj.switch_count == moving - 1


def test_zero_loss_padding_preserves_regret():
    cfg = GameConfig(6, 3, 1)
    traj = _traj_1d(cfg, [0.0, 0.0, 0.5, 0.5, 0.5, 0.5], [1, -1, 1, 1, 0.5, -0.2])
    last = traj.rounds[-1]
    cfg2 = GameConfig(9, 3, 1)
    padded = list(traj.rounds) + [RoundRecord(last.action_x, np.zeros(1), False)
                                  for _ in range(3)]
    traj2 = Trajectory.from_rounds(cfg2, padded)
    assert traj2.regret == pytest.approx(traj.regret, abs=1e-12)
    assert traj2.switch_count == traj.switch_count


def test_config_validation():
    with pytest.raises(ValueError):
        GameConfig(3, 4, 1)           # K > T
    with pytest.raises(ValueError):
        GameConfig(0, 1, 1)
    with pytest.raises(ValueError):
        GameConfig(3, 0, 1)
    with pytest.raises(ValueError):
        GameConfig(3, 2, 0)
    with pytest.raises(ValueError):
        GameConfig(3, 2, 1, player_norm_p=1.0)
    with pytest.raises(ValueError):
        GameConfig(3, 2, 1, seed=-1)
    assert GameConfig(3, 2, 1, player_norm_p=math.inf).adversary_norm_q == math.inf
