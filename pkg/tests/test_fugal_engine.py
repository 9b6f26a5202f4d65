import math

import numpy as np
import pytest

from switchlab import fugal_engine as fe

SQRT2 = math.sqrt(2.0)


# ------------------------------------------------------------- closed forms

def test_quadratic_floor_values():
    assert fe.quadratic_floor(2, 0.0) == pytest.approx(0.5)
    assert fe.quadratic_floor(4, 0.0) == pytest.approx(1.0 / (2.0 * SQRT2))
    assert fe.quadratic_floor(3, 1.0) == pytest.approx(1.0)
    assert fe.quadratic_floor(1, 0.37) == 1.0
    for k in range(2, 13):
        assert fe.quadratic_floor(k, 0.0) == pytest.approx(1.0 / math.sqrt(2.0 * k))
    assert fe.quadratic_floor(1, 0.0) >= 1.0 / math.sqrt(2.0)


def test_quadratic_floor_domain():
    with pytest.raises(ValueError):
        fe.quadratic_floor(2, 1.5)
    with pytest.raises(ValueError):
        fe.quadratic_floor(0, 0.0)


def test_quadratic_floor_junction_continuous():
    for k in (2, 3, 7):
        cut = math.sqrt(2.0 / k)
        below = fe.quadratic_floor(k, cut - 1e-12)
        assert below == pytest.approx(cut, abs=1e-10)


def test_floor_image_values():
    assert fe.quadratic_floor_image(2, 0.0) == pytest.approx(SQRT2 - 1.0)
    assert fe.quadratic_floor_image(4, 0.0) == pytest.approx(math.sqrt(3.0) - SQRT2)
    cut4 = math.sqrt(2.0 / 4.0)
    assert fe.quadratic_floor_image(4, cut4) == pytest.approx(cut4)
    assert fe.quadratic_floor_image(4, cut4 - 1e-12) == pytest.approx(cut4, abs=1e-10)
    with pytest.raises(ValueError):
        fe.quadratic_floor_image(1, 0.0)


def test_floor_image_interlaces_next_floor():
    zs = np.linspace(-1.0, 1.0, 3001)
    for i in range(2, 13):
        img = np.array([fe.quadratic_floor_image(i, z) for z in zs])
        nxt = np.array([fe.quadratic_floor(i + 1, z) for z in zs])
        assert np.all(img >= nxt - 1e-12)


def test_branch_cutoffs():
    zp, zm = fe.branch_cutoffs(2, 1.0)
    assert zp == pytest.approx(-1.0)
    assert zm == pytest.approx(-1.0)
    zp, zm = fe.branch_cutoffs(2, 0.0)
    assert zp == pytest.approx(SQRT2 - 1.0)
    assert zm == pytest.approx(1.0 - SQRT2)
    rng = np.random.default_rng(0)
    for _ in range(200):
        i = int(rng.integers(2, 12))
        x = float(rng.uniform(-1, 1))
        zp, zm = fe.branch_cutoffs(i, x)
        assert zp >= zm - 1e-12
        lim = math.sqrt(2.0 / i) + 1e-12
        assert abs(zp) <= lim and abs(zm) <= lim
        zp0, zm0 = fe.branch_cutoffs(i, 0.0)
        assert zp0 == pytest.approx(-zm0)


def test_crossing_action():
    for i in (2, 5, 9):
        assert fe.crossing_action(i, 0.0) == 0.0
    assert fe.crossing_action(2, 1.0) == pytest.approx(-1.0)
    assert fe.crossing_action(2, 0.5) == pytest.approx(-0.5 * math.sqrt(3.5) / SQRT2)


def test_crossing_action_matches_grid_bisection():
    # the witness bisection on a sampled floor lands on the closed form
    N = 2000
    for i, z in ((2, 0.5), (3, 0.2), (4, -0.4)):
        floor = fe.grid_of(lambda t: fe.quadratic_floor(i, t), N)
        wit = fe.operator_witness(floor, z)
        assert wit.x == pytest.approx(fe.crossing_action(i, z), abs=1e-4)
        assert wit.value == pytest.approx(fe.quadratic_floor_image(i, z), abs=1e-5)


def test_one_block_value():
    assert fe.one_block_value(5.0, 0.0) == 5.0
    assert fe.one_block_value(1.0, 2.0) == 2.0
    assert fe.one_block_value(2.0, 1.0) == 2.0
    with pytest.raises(ValueError):
        fe.one_block_value(0.0, 1.0)


def test_overshoot_value():
    assert fe.overshoot_value(4.0, 0.0) == pytest.approx(2.0)
    assert fe.overshoot_value(4.0, 2.0) == pytest.approx(2.5)  # 5T/8
    z = 0.3
    assert fe.overshoot_value(1.0, z) == pytest.approx((z * z + 1.0) / 2.0)
    with pytest.raises(ValueError):
        fe.overshoot_value(2.0, 2.0)


def test_u4_exact_constants():
    u4, z0 = fe.u4_exact()
    assert u4 == pytest.approx(0.362975, abs=1e-6)
    assert z0 == pytest.approx(0.283975, abs=1e-6)
    lhs = (z0 * z0 - 1.0 + math.sqrt(2.0 - z0 * z0)) / (1.0 + z0)
    assert lhs == pytest.approx(u4, abs=1e-12)
    # z0 really is a root of the sextic
    p = -z0 ** 6 - 4 * z0 ** 5 - 4 * z0 ** 4 + 4 * z0 ** 3 + 10 * z0 ** 2 + 4 * z0 - 2
    assert abs(p) < 1e-12


# ------------------------------------------------------------- the operator

def test_apply_to_ones_gives_parabola():
    N = 400
    ones = fe.GridFunction(N, np.ones(N + 1), k_index=1)
    out = fe.fugal_apply(ones)
    grid = out.grid
    assert np.allclose(out.values, (grid * grid + 1.0) / 2.0, atol=1e-9)
    assert out.values[0] == 1.0 and out.values[-1] == 1.0
    assert out.k_index == 2


def test_apply_to_u2_hits_sqrt2_minus_1():
    tables = fe.solve_tables(3, 1000)
    assert tables[2].interp(0.0) == pytest.approx(SQRT2 - 1.0, abs=1e-3)


def test_apply_rejects_function_below_absolute_value():
    N = 200
    vals = np.zeros(N + 1)
    with pytest.raises(ValueError):
        fe.fugal_apply(fe.GridFunction(N, vals))


def test_apply_matches_closed_form_on_floors():
    N = 1000
    grid = fe.make_grid(N)
    for i in (2, 3, 4):
        floor = fe.grid_of(lambda z: fe.quadratic_floor(i, z), N)
        img = fe.fugal_apply(floor)
        exact = np.array([fe.quadratic_floor_image(i, z) for z in grid])
        assert float(np.max(np.abs(img.values - exact))) <= 5e-3


def test_operator_preserves_pointwise_order():
    # f <= g implies T f <= T g: the integrand multipliers 1+wz and 1+z'w
    # are nonnegative, and the floor induction T u_i >= T a_i relies on
    # exactly this order-preserving direction.
    N = 200
    grid = fe.make_grid(N)
    for seed in range(3):
        rng = np.random.default_rng(seed)
        bump = rng.uniform(0.0, 1.0, N + 1) * (1.0 - np.abs(grid))
        g_vals = np.abs(grid) + bump
        f_vals = np.abs(grid) + rng.uniform(0.0, 1.0, N + 1) * bump
        tf = fe.fugal_apply(fe.GridFunction(N, f_vals))
        tg = fe.fugal_apply(fe.GridFunction(N, g_vals))
        assert np.all(tf.values <= tg.values + 1e-9)


def test_operator_never_exceeds_input():
    # z' = z is always feasible, so the image is pointwise <= the input
    tables = fe.solve_tables(5, 500)
    for a, b in zip(tables, tables[1:]):
        assert np.all(b.values <= a.values + 1e-12)


# ------------------------------------------------------------- u_k tables

def test_solve_tables_basic_values():
    tables = fe.solve_tables(4, 1000)
    assert np.all(tables[0].values == 1.0)
    assert tables[1].interp(0.0) == pytest.approx(0.5, abs=1e-3)
    u4_exact, _ = fe.u4_exact()
    assert tables[3].interp(0.0) == pytest.approx(u4_exact, abs=2e-3)
    for t in tables:
        assert t.values[0] == 1.0 and t.values[-1] == 1.0


def test_solve_tables_validation():
    with pytest.raises(ValueError):
        fe.solve_tables(0, 500)
    with pytest.raises(ValueError):
        fe.solve_tables(2, 50)


def test_tables_even_in_z():
    for t in fe.solve_tables(4, 500):
        assert float(np.max(np.abs(t.values - t.values[::-1]))) <= 1e-6


def test_tables_monotone_in_k():
    tables = fe.solve_tables(5, 500)
    for a, b in zip(tables, tables[1:]):
        assert np.all(b.values <= a.values + 1e-6)


def test_grid_convergence_of_u3():
    # doubling the resolution cuts the max-norm error against the closed
    # form z^2 - 1 + sqrt(2 - z^2) by about 4 (linear interpolation order)
    errs = []
    for N in (250, 500, 1000):
        u3 = fe.fugal_apply(fe.fugal_apply(fe.GridFunction(N, np.ones(N + 1), k_index=1)))
        grid = u3.grid
        exact = np.array([z * z - 1.0 + math.sqrt(2.0 - z * z) for z in grid])
        exact[0] = exact[-1] = 1.0
        errs.append(float(np.max(np.abs(u3.values - exact))))
    assert errs[1] <= errs[0] / 2.5
    assert errs[2] <= errs[1] / 2.5
    assert errs[2] < 1e-6


def test_gridfunction_validation():
    with pytest.raises(ValueError):
        fe.GridFunction(10, np.ones(5))
    with pytest.raises(ValueError):
        fe.GridFunction(10, np.full(11, np.nan))


# ------------------------------------------------------------- policy

def test_policy_k2_is_halfsplit_threshold():
    _, pol = fe.u_k_solve(2, 500)
    assert pol.x_star(()) == 0.0
    assert pol.m_fraction((), +1) == pytest.approx(0.5, abs=1e-12)
    assert pol.m_fraction((), -1) == pytest.approx(0.5, abs=1e-12)
    assert pol.x_star((1,)) == pytest.approx(-1.0)
    assert pol.x_star((-1,)) == pytest.approx(1.0)


def test_policy_k3_first_block_fraction():
    _, pol = fe.u_k_solve(3, 1000)
    target = 1.0 - SQRT2 / 2.0
    assert pol.m_fraction((), +1) == pytest.approx(target, abs=1e-3)
    assert pol.m_fraction((), -1) == pytest.approx(target, abs=1e-3)


def test_policy_fractions_sum_to_one_and_actions_in_ball():
    for K in (2, 3, 4):
        _, pol = fe.u_k_solve(K, 500)
        for code in range(2 ** K):
            path = tuple(1 if (code >> i) & 1 else -1 for i in range(K))
            assert pol.path_fraction_sum(path) == pytest.approx(1.0, abs=1e-6)
        assert all(abs(n.x) <= 1.0 + 1e-12 for n in pol.nodes.values())


def test_policy_json_roundtrip(tmp_path):
    _, pol = fe.u_k_solve(3, 500)
    path = tmp_path / "policy.json"
    fe.write_policy_json(pol, str(path))
    back = fe.read_policy_json(str(path))
    assert back.budget_K == pol.budget_K
    assert set(back.nodes) == set(pol.nodes)
    for k, node in pol.nodes.items():
        assert back.nodes[k].x == pytest.approx(node.x, abs=0)
        assert back.nodes[k].m_plus == pytest.approx(node.m_plus, abs=0)


def test_grid_csv_dump(tmp_path):
    tables = fe.solve_tables(2, 500)
    path = tmp_path / "grid.csv"
    fe.write_grid_csv(tables, str(path))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "z,u_1,u_2"
    assert len(lines) == 502


def test_operator_witness_on_constant_one():
    N = 500
    ones = fe.GridFunction(N, np.ones(N + 1), k_index=1)
    wit = fe.operator_witness(ones, 0.0)
    assert wit.x == 0.0
    assert wit.value == pytest.approx(0.5, abs=1e-9)
    assert wit.z_next[+1] == pytest.approx(1.0)
    assert wit.z_next[-1] == pytest.approx(-1.0)


def test_operator_witness_rejects_boundary():
    ones = fe.GridFunction(200, np.ones(201))
    with pytest.raises(ValueError):
        fe.operator_witness(ones, 1.0)
