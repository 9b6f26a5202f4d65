"""Acceptance checks: every headline constant and bound, re-derived at desk
scale against independent oracles, plus a quick module-invariant suite.

Each check returns measured values, expected values, tolerances, and a list
of failure strings (empty = pass).  ``run_checks`` drives them and is shared
by the ``labctl verify`` CLI and the pytest acceptance module.  Check names
are ``tag.short_name``; a ``--only TAG`` filter matches the tag prefix.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import fugal_engine as fe
from . import minimax_oracle as mo
from .adversaries import Adversary, ConstantAdversary, make_adversary
from .errors import CapacityError
from .game_core import INF, GameConfig, Trajectory, dual_norm, linear_regret, play_game
from .players import HalfSplitPlayer, FugalPlayer, make_player

SQRT2 = math.sqrt(2.0)

U2_ZERO = 0.5
U3_ZERO = SQRT2 - 1.0
U4_ZERO = 0.362975
Z0_REF = 0.283975
FIRST_BLOCK_K3 = 1.0 - SQRT2 / 2.0


@dataclass
class CheckResult:
    check_name: str
    status: str
    measured: dict
    expected: dict
    tolerance: dict
    elapsed_s: float
    failures: list[str] = field(default_factory=list)

    @property
    def tag(self) -> str:
        return self.check_name.split(".", 1)[0]

    def to_report_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "status": self.status,
            "measured": self.measured,
            "expected": self.expected,
            "tolerance": self.tolerance,
        }


class _ReplayAdversary(Adversary):
    """Feeds back a pre-committed scalar sequence (test harness only)."""

    def __init__(self, seq):
        self._seq = [np.array([float(s)]) for s in seq]
        self._t = 0

    def respond(self, player_x, is_moving):
        w = self._seq[self._t]
        self._t += 1
        return w


def _all_sign_sequences(T: int) -> np.ndarray:
    codes = np.arange(2 ** T, dtype=np.int64)[:, None]
    bits = (codes >> np.arange(T)[None, :]) & 1
    return (2 * bits - 1).astype(float)


def worst_case_sign_regret(player_factory, config: GameConfig) -> tuple[float, Trajectory]:
    """Max regret of a player over every +-1 loss sequence (T <= 16)."""
    T = config.horizon_T
    if T > 16:
        raise CapacityError("exhaustive sign sweep supports T <= 16")
    worst = -math.inf
    worst_traj = None
    for seq in _all_sign_sequences(T):
        traj = play_game(player_factory(), _ReplayAdversary(seq), config)
        if traj.regret > worst:
            worst = traj.regret
            worst_traj = traj
    return worst, worst_traj


def _run(player_id: str, adversary_id: str, T: int, K: int, n: int = 1,
         p: float = 2.0, seed: int = 0, player_params: dict | None = None,
         adversary_params: dict | None = None) -> Trajectory:
    cfg = GameConfig(horizon_T=T, budget_K=K, dimension_n=n, player_norm_p=p, seed=seed)
    player = make_player(player_id, cfg, player_params)
    adversary = make_adversary(adversary_id, cfg, adversary_params)
    return play_game(player, adversary, cfg)


# ----------------------------------------------------------------------
# criterion 1: exact fugal constants
# ----------------------------------------------------------------------

def check_constants_exact():
    N = 2000
    tables = fe.solve_tables(4, N)
    u2, u3, u4 = (tables[k].interp(0.0) for k in (1, 2, 3))
    u4_closed, z0 = fe.u4_exact()
    measured = {"u2_zero": u2, "u3_zero": u3, "u4_zero": u4,
                "u4_closed_form": u4_closed, "z0": z0}
    expected = {"u2_zero": U2_ZERO, "u3_zero": U3_ZERO, "u4_zero": U4_ZERO,
                "u4_closed_form": U4_ZERO, "z0": Z0_REF}
    tol = {"u2_zero": 2e-3, "u3_zero": 2e-3, "u4_zero": 2e-3,
           "u4_closed_form": 1e-6, "z0": 1e-6, "runtime_s": 60.0}
    failures = []
    for key in ("u2_zero", "u3_zero", "u4_zero", "u4_closed_form", "z0"):
        if abs(measured[key] - expected[key]) > tol[key]:
            failures.append(f"{key}: measured {measured[key]!r} vs {expected[key]!r}")
    return measured, expected, tol, failures


# ----------------------------------------------------------------------
# criterion 2: quadratic sandwich and monotonicity in k
# ----------------------------------------------------------------------

def check_quadratic_sandwich():
    N, K = 1000, 8
    tables = fe.solve_tables(K, N)
    grid = tables[0].grid
    cap = (grid * grid + 1.0) / 2.0
    worst_floor = math.inf
    worst_cap = math.inf
    worst_mono = math.inf
    failures = []
    for k in range(1, K + 1):
        u = tables[k - 1].values
        floor = np.array([fe.quadratic_floor(k, z) for z in grid])
        worst_floor = min(worst_floor, float(np.min(u - (floor - 2e-3))))
        if np.any(u < floor - 2e-3):
            failures.append(f"k={k}: u_k dips below quadratic floor by more than 2e-3")
        if k >= 2:
            worst_cap = min(worst_cap, float(np.min(cap + 2e-3 - u)))
            if np.any(u > cap + 2e-3):
                failures.append(f"k={k}: u_k exceeds (z^2+1)/2 cap by more than 2e-3")
        if k < K:
            gap = tables[k - 1].values - tables[k].values
            worst_mono = min(worst_mono, float(np.min(gap)))
            if np.any(gap < -1e-6):
                failures.append(f"k={k}: u_(k+1) > u_k + 1e-6 somewhere")
    measured = {"min_floor_margin": worst_floor, "min_cap_margin": worst_cap,
                "min_monotone_gap": worst_mono}
    expected = {"min_floor_margin": ">= 0", "min_cap_margin": ">= 0",
                "min_monotone_gap": ">= -1e-6"}
    tol = {"floor": 2e-3, "cap": 2e-3, "monotone": 1e-6, "runtime_s": 300.0}
    return measured, expected, tol, failures


# ----------------------------------------------------------------------
# criterion 3: closed-form operator image and interlacing
# ----------------------------------------------------------------------

def check_operator_closed_form():
    N = 2000
    grid = fe.make_grid(N)
    failures = []
    max_err = {}
    for i in (2, 3, 4):
        floor = fe.grid_of(lambda z: fe.quadratic_floor(i, z), N)
        image = fe.fugal_apply(floor)
        exact = np.array([fe.quadratic_floor_image(i, z) for z in grid])
        err = float(np.max(np.abs(image.values - exact)))
        max_err[f"i={i}"] = err
        if err > 5e-3:
            failures.append(f"operator image vs closed form, i={i}: max err {err}")
    zs = np.linspace(-1.0, 1.0, 10_000)
    min_margin = math.inf
    for i in range(2, 13):
        img = np.array([fe.quadratic_floor_image(i, z) for z in zs])
        nxt = np.array([fe.quadratic_floor(i + 1, z) for z in zs])
        min_margin = min(min_margin, float(np.min(img - nxt)))
    if min_margin < -1e-12:
        failures.append(f"interlacing violated: min(T a_i - a_(i+1)) = {min_margin}")
    measured = {"max_image_error": max_err, "min_interlace_margin": min_margin}
    expected = {"max_image_error": "<= 5e-3 each", "min_interlace_margin": ">= -1e-12"}
    tol = {"image": 5e-3, "interlace": 1e-12}
    return measured, expected, tol, failures


# ----------------------------------------------------------------------
# criterion 4: high-dimensional lower bound
# ----------------------------------------------------------------------

def _player_specs_for_lb(seed_count: int = 3):
    specs = [("constant", None, {}), ("minibatch", None, {})]
    for s in range(seed_count):
        specs.append(("random_switch", s, {"seed": s}))
    return specs

def check_highd_lower():
    failures = []
    min_margin = math.inf
    max_identity_rel = 0.0
    for n in (2, 3, 5):
        for T in (100, 1000):
            for K in (1, 4, 16):
                for pid, seed, pparams in _player_specs_for_lb():
                    traj = _run(pid, "orthogonal", T, K, n=n, p=2.0,
                                seed=seed or 0, player_params=pparams)
                    bound = T / math.sqrt(K)
                    min_margin = min(min_margin, traj.regret - bound)
                    if traj.regret < bound - 1e-6:
                        failures.append(
                            f"orthogonal vs {pid}: regret {traj.regret} < T/sqrt(K) "
                            f"at n={n} T={T} K={K}")
                    M = np.array(traj.block_lengths(), dtype=float)
                    lhs = float(np.dot(traj.cumulative_W, traj.cumulative_W))
                    rhs = float(np.sum(M * M))
                    rel = abs(lhs - rhs) / max(rhs, 1.0)
                    max_identity_rel = max(max_identity_rel, rel)
                    if rel > 1e-9:
                        failures.append(
                            f"||W_T||^2 vs sum M_i^2 mismatch rel={rel} "
                            f"({pid}, n={n}, T={T}, K={K})")
    measured = {"min_regret_margin": min_margin, "max_identity_rel_err": max_identity_rel}
    expected = {"min_regret_margin": ">= -1e-6", "max_identity_rel_err": "<= 1e-9"}
    tol = {"regret": 1e-6, "identity_rel": 1e-9}
    return measured, expected, tol, failures


# ----------------------------------------------------------------------
# criterion 5: one-dimensional lower bound
# ----------------------------------------------------------------------

def check_onedim_lower():
    failures = []
    min_margin = math.inf
    for T in (100, 1000, 10_000):
        for K in (1, 2, 4, 16, 100):
            for pid, seed, pparams in _player_specs_for_lb():
                traj = _run(pid, "stopping", T, K, n=1, seed=seed or 0,
                            player_params=pparams)
                bound = T / (2.0 * math.sqrt(K))
                min_margin = min(min_margin, traj.regret - bound)
                if traj.regret < bound - 1e-9:
                    failures.append(
                        f"stopping vs {pid}: regret {traj.regret} < T/(2 sqrt(K)) "
                        f"at T={T} K={K}")
    measured = {"min_regret_margin": min_margin}
    expected = {"min_regret_margin": ">= 0 (float allowance 1e-9)"}
    tol = {"regret": 1e-9}
    return measured, expected, tol, failures


# ----------------------------------------------------------------------
# criterion 6: upper bounds (mini-batch OGD constant; half-split exactness)
# ----------------------------------------------------------------------

def _halfsplit_regret_closed_form(T: int, seqs: np.ndarray) -> np.ndarray:
    total = seqs.sum(axis=1)
    if T % 2 == 0:
        W1 = seqs[:, :T // 2].sum(axis=1)
        c = -W1 / (T // 2)
        W2 = seqs[:, T // 2:].sum(axis=1)
    else:
        W1 = seqs[:, 1:(T + 1) // 2].sum(axis=1)
        c = -W1 / ((T - 1) // 2)
        W2 = seqs[:, (T + 1) // 2:].sum(axis=1)
    return c * W2 + np.abs(total)


def check_upper_bounds():
    failures = []
    max_ratio = 0.0
    # mini-batch against every adversary in its valid pairing
    cells = []
    for T in (100, 1000):
        for K in (1, 4, 16, 100):
            if K > T:
                continue
            for aid, aparams in (("stopping", {}), ("sign", {"variant": "bias"}),
                                 ("sign", {"variant": "action"}),
                                 ("constant", {"w": 1.0}), ("zero", {})):
                cells.append((1, 2.0, aid, aparams, 1.0))
            for n in (2, 3, 5):
                for aid, aparams in (("orthogonal", {}), ("zero", {}),
                                     ("constant", {"w": [1.0] + [0.0] * (n - 1)})):
                    cells.append((n, 2.0, aid, aparams, 1.0))
            for n in (2, 3):
                # Linf box: coordinates decouple, per-coordinate OGD bound scales by n
                cells.append((n, INF, "product", {}, float(n)))
            for n, p, aid, aparams, scale in cells:
                traj = _run("minibatch", aid, T, K, n=n, p=p, adversary_params=aparams)
                bound = scale * 2.0 * math.ceil(T / K) * math.sqrt(K)
                max_ratio = max(max_ratio, traj.regret / bound)
                if traj.regret > bound + 1e-9:
                    failures.append(
                        f"minibatch vs {aid}: regret {traj.regret} > {bound} "
                        f"at T={T} K={K} n={n}")
            cells.clear()

    # half-split: exhaustive +-1 sequences, exact ceil(T/2) cap
    worst_excess = -math.inf
    for T in range(2, 17):
        seqs = _all_sign_sequences(T)
        regrets = _halfsplit_regret_closed_form(T, seqs)
        cap = math.ceil(T / 2)
        worst_excess = max(worst_excess, float(regrets.max()) - cap)
        if float(regrets.max()) > cap + 1e-10:
            failures.append(f"half-split exhaustive: max regret {regrets.max()} "
                            f"> ceil(T/2)={cap} at T={T}")
        # spot-check the closed form against the actual engine
        cfg = GameConfig(horizon_T=T, budget_K=2, dimension_n=1)
        rng = np.random.default_rng(T)
        for idx in rng.choice(len(seqs), size=min(8, len(seqs)), replace=False):
            traj = play_game(HalfSplitPlayer(cfg), _ReplayAdversary(seqs[idx]), cfg)
            if abs(traj.regret - regrets[idx]) > 1e-9:
                failures.append(f"half-split engine mismatch at T={T} seq#{idx}")
    measured = {"max_minibatch_regret_ratio": max_ratio,
                "halfsplit_worst_excess_over_cap": worst_excess}
    expected = {"max_minibatch_regret_ratio": "<= 1",
                "halfsplit_worst_excess_over_cap": "<= 0 (roundoff 1e-10)"}
    tol = {"minibatch": 1e-9, "halfsplit": 1e-10}
    return measured, expected, tol, failures


# ----------------------------------------------------------------------
# criterion 7: oracle sandwich and bias behavior
# ----------------------------------------------------------------------

def check_oracle_sandwich():
    failures = []
    min_lower_margin = math.inf
    min_upper_margin = math.inf
    for T in range(1, 11):
        for K in range(1, T + 1):
            rep = mo.exact_minimax_1d(mo.OracleConfig(T, K, x_grid=41))
            slack = rep.grid_slack
            min_lower_margin = min(min_lower_margin, rep.value - (rep.bound_lower - slack))
            min_upper_margin = min(min_upper_margin, (rep.bound_upper + slack) - rep.value)
            if not rep.bound_lower - slack <= rep.value <= rep.bound_upper + slack:
                failures.append(f"sandwich broken at T={T} K={K}: value={rep.value}, "
                                f"[{rep.bound_lower}, {rep.bound_upper}], slack={slack}")
    points = {}
    for (T, K, target) in ((4, 2, 2.0), (2, 2, 1.0)):
        rep = mo.exact_minimax_1d(mo.OracleConfig(T, K, x_grid=41))
        points[f"T{T}_K{K}"] = rep.value
        if abs(rep.value - target) > rep.grid_slack:
            failures.append(f"point check T={T} K={K}: value {rep.value} vs {target}")
    for T in range(1, 7):
        for K in sorted({1, (T + 1) // 2, T}):
            for Z in (T, -T, 2 * T, -2 * T):
                rep = mo.exact_minimax_1d(mo.OracleConfig(T, K, x_grid=41,
                                                          initial_bias_Z=float(Z)))
                if abs(rep.value - abs(Z)) > 1e-9:
                    failures.append(f"bias pin-down T={T} K={K} Z={Z}: {rep.value}")
            for Z in (0.0, 0.5, -0.5):
                rep = mo.exact_minimax_1d(mo.OracleConfig(T, K, x_grid=41,
                                                          initial_bias_Z=Z))
                if rep.value < abs(Z) - 1e-12:
                    failures.append(f"value below |Z| at T={T} K={K} Z={Z}")
    measured = {"min_lower_margin": min_lower_margin,
                "min_upper_margin": min_upper_margin, "points": points}
    expected = {"points": {"T4_K2": 2.0, "T2_K2": 1.0}, "margins": ">= 0"}
    tol = {"sandwich": "grid slack 2T/(x_grid-1)", "bias": 1e-9, "runtime_s": 600.0}
    return measured, expected, tol, failures


# ----------------------------------------------------------------------
# criterion 8: unequal blocks for K=3
# ----------------------------------------------------------------------

def check_unequal_blocks():
    failures = []
    _, policy = fe.u_k_solve(3, 2000)
    frac_plus = policy.m_fraction((), +1)
    frac_minus = policy.m_fraction((), -1)
    for name, frac in (("plus", frac_plus), ("minus", frac_minus)):
        if abs(frac - FIRST_BLOCK_K3) > 1e-3:
            failures.append(f"first-block fraction ({name} sign) {frac} "
                            f"vs {FIRST_BLOCK_K3}")
    T = 10_000
    cfg = GameConfig(horizon_T=T, budget_K=3, dimension_n=1)
    traj = play_game(FugalPlayer(cfg, policy),
                     ConstantAdversary(cfg, w=1.0), cfg)
    moving_rounds = [t + 1 for t, r in enumerate(traj.rounds) if r.is_moving]
    first_switch = moving_rounds[1] if len(moving_rounds) > 1 else -1
    target = math.ceil(FIRST_BLOCK_K3 * T)
    if abs(first_switch - target) > 2:
        failures.append(f"first switch at round {first_switch}, expected "
                        f"within 2 of {target}")
    measured = {"first_block_fraction_plus": frac_plus,
                "first_block_fraction_minus": frac_minus,
                "first_switch_round": first_switch}
    expected = {"first_block_fraction": FIRST_BLOCK_K3, "first_switch_round": target}
    tol = {"fraction": 1e-3, "switch_round": 2}
    return measured, expected, tol, failures


# ----------------------------------------------------------------------
# criterion 9: closed-form R(K)
# ----------------------------------------------------------------------

def check_unconstrained_closed_form():
    failures = []
    errs = {}
    for K in range(1, 9):
        rep = mo.exact_minimax_1d(mo.OracleConfig(K, K, x_grid=41))
        target = mo.unconstrained_regret_closed_form(K)
        errs[f"K={K}"] = rep.value - target
        if abs(rep.value - target) > rep.grid_slack:
            failures.append(f"unconstrained oracle vs R(K) at K={K}: "
                            f"{rep.value} vs {target}")
    for K in range(1, 16, 2):
        a = mo.unconstrained_regret_closed_form(K)
        b = mo.unconstrained_regret_closed_form(K + 1)
        if a != b:
            failures.append(f"R({K}) != R({K + 1}): {a} vs {b}")
    r3 = mo.unconstrained_regret_closed_form(3) / math.sqrt(3.0)
    if abs(r3 - math.sqrt(3.0) / 2.0) > 1e-12:
        failures.append(f"R(3)/sqrt(3) = {r3} vs sqrt(3)/2")
    measured = {"oracle_minus_closed_form": errs, "r3_over_sqrt3": r3}
    expected = {"oracle_minus_closed_form": "within grid slack",
                "r3_over_sqrt3": math.sqrt(3.0) / 2.0}
    tol = {"oracle": "grid slack", "parity": 0.0, "r3": 1e-12}
    return measured, expected, tol, failures


# ----------------------------------------------------------------------
# criterion 10: Linf decomposition
# ----------------------------------------------------------------------

def check_linf_decomposition():
    failures = []
    min_margin = math.inf
    T = 1000
    for n in (2, 3):
        for K in (4, 16):
            for pid, seed, pparams in _player_specs_for_lb():
                traj = _run(pid, "product", T, K, n=n, p=INF, seed=seed or 0,
                            player_params=pparams)
                bound = n * T / (2.0 * math.sqrt(K))
                min_margin = min(min_margin, traj.regret - bound)
                if traj.regret < bound - 1e-9:
                    failures.append(f"product vs {pid}: regret {traj.regret} < "
                                    f"n*T/(2 sqrt(K)) at n={n} K={K}")
    tk_ok = True
    for T_ in range(1, 1001):
        Ks = np.arange(1, T_ + 1)
        ceils = -(-T_ // Ks)
        if not np.all(ceils <= 2.0 * T_ / np.sqrt(Ks * (Ks + 1.0))):
            tk_ok = False
            failures.append(f"ceil(T/K) bound fails at T={T_}")
    measured = {"min_regret_margin": min_margin, "tk_inequality_all": tk_ok}
    expected = {"min_regret_margin": ">= 0", "tk_inequality_all": True}
    tol = {"regret": 1e-9}
    return measured, expected, tol, failures


# ----------------------------------------------------------------------
# module invariants (cheap cross-cutting properties)
# ----------------------------------------------------------------------

def check_core_invariants():
    failures = []
    rng = np.random.default_rng(7)

    # dual norm agrees with its defining sup at the analytic maximizer
    for _ in range(50):
        w = rng.normal(size=rng.integers(1, 6))
        d2 = dual_norm(w, 2.0)
        ref2 = float(np.dot(w, w / np.linalg.norm(w))) if np.linalg.norm(w) > 0 else 0.0
        if abs(d2 - ref2) > 1e-10:
            failures.append("L2 dual norm disagrees with sup oracle")
        di = dual_norm(w, INF)
        refi = float(np.dot(w, np.sign(w)))
        if abs(di - refi) > 1e-10:
            failures.append("Linf dual norm disagrees with sup oracle")

    # stored regret matches a recompute; zero-loss padding leaves it unchanged
    for seed in range(10):
        T, K, n = 30, 4, 2
        traj = _run("random_switch", "orthogonal", T, K, n=n, seed=seed,
                    player_params={"seed": seed})
        if abs(linear_regret(traj) - traj.regret) > 1e-12:
            failures.append("stored regret != recomputed regret")
        moving = sum(1 for r in traj.rounds if r.is_moving)
        if traj.switch_count != moving - 1:
            failures.append("switch count != moving rounds - 1")
        last = traj.rounds[-1]
        padded = list(traj.rounds) + [
            type(last)(action_x=last.action_x, loss_w=np.zeros(n), is_moving=False)
            for _ in range(5)]
        traj2 = Trajectory.from_rounds(traj.config, padded)
        if abs(traj2.regret - traj.regret) > 1e-12:
            failures.append("zero-loss padding changed the regret")

    # fugal policy: fractions sum to one on every sign path, actions in the ball
    tables, policy = fe.u_k_solve(3, 500)
    for path in ((1, 1, 1), (1, -1, 1), (-1, 1, -1), (-1, -1, -1)):
        s = policy.path_fraction_sum(path)
        if abs(s - 1.0) > 1e-6:
            failures.append(f"policy path {path}: fractions sum to {s}")
    if any(abs(node.x) > 1.0 + 1e-12 for node in policy.nodes.values()):
        failures.append("policy action outside [-1, 1]")

    # solved tables are even in z
    grid_tables = fe.solve_tables(4, 500)
    for t in grid_tables:
        asym = float(np.max(np.abs(t.values - t.values[::-1])))
        if asym > 1e-6:
            failures.append(f"u_{t.k_index} asymmetric by {asym}")

    # operator preserves pointwise order: f <= g implies T f <= T g
    N = 200
    grid = fe.make_grid(N)
    for seed in range(5):
        r = np.random.default_rng(seed)
        bump = r.uniform(0.0, 1.0, N + 1) * (1.0 - np.abs(grid))
        g_vals = np.abs(grid) + bump
        f_vals = np.abs(grid) + r.uniform(0.0, 1.0, N + 1) * bump
        tf = fe.fugal_apply(fe.GridFunction(N, f_vals))
        tg = fe.fugal_apply(fe.GridFunction(N, g_vals))
        if np.any(tf.values > tg.values + 1e-9):
            failures.append(f"operator monotonicity violated (seed {seed})")

    measured = {"n_failures": len(failures)}
    expected = {"n_failures": 0}
    tol = {}
    return measured, expected, tol, failures


# ----------------------------------------------------------------------
# registry / driver
# ----------------------------------------------------------------------

CHECKS = (
    ("fugal.constants_exact", check_constants_exact, 60.0),
    ("fugal.quadratic_sandwich", check_quadratic_sandwich, 300.0),
    ("fugal.operator_closed_form", check_operator_closed_form, None),
    ("bounds.highd_lower", check_highd_lower, None),
    ("bounds.onedim_lower", check_onedim_lower, None),
    ("bounds.upper_minibatch_halfsplit", check_upper_bounds, None),
    ("oracle.sandwich", check_oracle_sandwich, 600.0),
    ("fugal.unequal_blocks", check_unequal_blocks, None),
    ("oracle.unconstrained_closed_form", check_unconstrained_closed_form, None),
    ("bounds.linf_decomposition", check_linf_decomposition, None),
    ("core.invariants", check_core_invariants, None),
)


def run_check(name: str) -> CheckResult:
    for cname, fn, budget in CHECKS:
        if cname == name:
            return _execute(cname, fn, budget)
    raise KeyError(f"unknown check {name!r}")


def _execute(name: str, fn, budget: float | None) -> CheckResult:
    start = time.perf_counter()
    measured, expected, tol, failures = fn()
    elapsed = time.perf_counter() - start
    if budget is not None and elapsed > budget:
        failures = list(failures) + [f"runtime {elapsed:.1f}s exceeds budget {budget}s"]
    status = "pass" if not failures else "fail"
    return CheckResult(check_name=name, status=status, measured=measured,
                       expected=expected, tolerance=tol, elapsed_s=elapsed,
                       failures=list(failures))


def run_checks(only: str | None = None) -> list[CheckResult]:
    results = []
    for name, fn, budget in CHECKS:
        if only is not None and not (name == only or name.split(".", 1)[0] == only):
            continue
        results.append(_execute(name, fn, budget))
    return results
