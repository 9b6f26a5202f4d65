"""Numerical solver for the fugal-game recursion and its closed forms.

The fugal game is a relaxation of the 1-d switching-constrained game: the
adversary plays only +-1 and copies the player's switching pattern, while
block lengths are nonnegative reals summing to the horizon T.  Its minimax
value with k blocks and initial bias Z, normalized by T, is a function
u_k(z) of z = Z/T alone, with

    u_1(z) = 1 on (-1,1),    u_k(z) = |z| for |z| >= 1,

and the one-step recursion u_{k+1} = T u_k where the operator T acts on
continuous f >= |z| by

    (T f)(z) = inf_{x in [-1,1]} max_{w=+-1}
               inf_{|z'|<1, w(z'-z)>=0} ((1+wz) f(z') + x (z'-z)) / (1+z'w).

This module represents u_k on a uniform grid with linear interpolation,
applies the operator numerically, evaluates every relevant closed form
(the quadratic floor family a_k, its exact image under the operator, the
one-block boundary value, the overshoot cap, and the exact budget-4
constants), and extracts the optimal policy (x*_i, M*_i/T per sign prefix)
that drives the fugal player.

Numerics.  For a piecewise-linear f the inner objective restricted to one
grid cell is a ratio of two affine functions of z', hence monotone there,
so its infimum over the half-interval is attained at a grid node; the node
scan is exact and golden-section refinement inside the bracketing cell
cannot move it.  g_plus (the w=+1 branch value) is nondecreasing in x and
g_minus nonincreasing, so h(x) = g_plus - g_minus is monotone and the
outer infimum is found by bisection on h.  Policy witnesses additionally
get a three-point parabolic refinement through exact node samples: the
node argmin alone is only O(grid step) accurate, which is too coarse for
the switch-round tolerances the policy has to meet.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericStructureError

DEFAULT_RESOLUTION = 2000

#: lower clamp for the operator denominators 1 + z'w near z' = -w
DENOM_CLAMP = 1e-9

#: bisection tolerance in x for the outer infimum
X_TOL = 1e-10

#: golden-section tolerance in z' for the inner refinement
ZPRIME_TOL = 1e-10

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

_grid_cache: dict[int, np.ndarray] = {}


def make_grid(resolution: int) -> np.ndarray:
    """Nodes z_j = -1 + 2j/N, j = 0..N (shared read-only array)."""
    g = _grid_cache.get(resolution)
    if g is None:
        g = np.linspace(-1.0, 1.0, resolution + 1)
        g.setflags(write=False)
        _grid_cache[resolution] = g
    return g


@dataclass(frozen=True)
class GridFunction:
    """A function on [-1,1] sampled at N+1 uniform nodes, linear in between."""

    resolution: int
    values: np.ndarray
    k_index: int | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.resolution + 1,):
            raise ValueError("values must have resolution+1 entries")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def grid(self) -> np.ndarray:
        return make_grid(self.resolution)

    def interp(self, z: float) -> float:
        return float(np.interp(z, self.grid, self.values))


def grid_of(fn, resolution: int, k_index: int | None = None) -> GridFunction:
    """Sample a scalar function onto the standard grid."""
    g = make_grid(resolution)
    return GridFunction(resolution, np.array([fn(z) for z in g]), k_index=k_index)


# ----------------------------------------------------------------------
# closed forms
# ----------------------------------------------------------------------

def quadratic_floor(k: int, z: float) -> float:
    """The quadratic floor a_k: a_1 = 1 and, for k >= 2,

        a_k(z) = (sqrt(k/2) z^2 + sqrt(2/k)) / 2   for |z| < sqrt(2/k),
                 |z|                                otherwise,

    continuous at the junction, with a_k(0) = 1/sqrt(2k).  Pointwise lower
    bound for u_k, preserved in that role by the operator.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    z = float(z)
    if abs(z) > 1.0 + 1e-12:
        raise ValueError("quadratic_floor domain is [-1, 1]")
    if k == 1:
        return 1.0
    cut = math.sqrt(2.0 / k)
    if abs(z) < cut:
        return (math.sqrt(k / 2.0) * z * z + cut) / 2.0
    return abs(z)


def quadratic_floor_image(i: int, z: float) -> float:
    """Exact image of the quadratic floor under the operator, i >= 2:

        (T a_i)(z) = sqrt(i/2) (z^2 - 1 + sqrt(1 + 2/i - z^2))  for |z| <= sqrt(2/i),
                     |z|                                         otherwise.

    (i = 1 is excluded: T a_1 is the parabola (z^2+1)/2, a separate fact.)
    """
    if i < 2:
        raise ValueError("closed-form image needs i >= 2")
    z = float(z)
    if abs(z) > 1.0 + 1e-12:
        raise ValueError("quadratic_floor_image domain is [-1, 1]")
    cut = math.sqrt(2.0 / i)
    if abs(z) <= cut:
        rad = max(1.0 + 2.0 / i - z * z, 0.0)
        return math.sqrt(i / 2.0) * (z * z - 1.0 + math.sqrt(rad))
    return abs(z)


def branch_cutoffs(i: int, x: float) -> tuple[float, float]:
    """Inner minimizer locations (z_plus, z_minus) for the two adversary
    signs when the operator acts on the quadratic floor a_i:

        z_plus  = sqrt(1 + 2/i - 2 sqrt(2/i) x) - 1,
        z_minus = 1 - sqrt(1 + 2/i + 2 sqrt(2/i) x),

    with z_plus >= z_minus and |z_plus|, |z_minus| <= sqrt(2/i).
    """
    if i < 2:
        raise ValueError("branch cutoffs need i >= 2")
    s = math.sqrt(2.0 / i)
    z_plus = math.sqrt(max(1.0 + 2.0 / i - 2.0 * s * x, 0.0)) - 1.0
    z_minus = 1.0 - math.sqrt(max(1.0 + 2.0 / i + 2.0 * s * x, 0.0))
    return z_plus, z_minus


def crossing_action(i: int, z: float) -> float:
    """Unique x in [-1,1] where the two branch values of the operator on
    the quadratic floor cross:

        x_0(z) = -z sqrt(-i z^2 + i + 2) / sqrt(2)  for |z| <= sqrt(2/i),
                 -sign(z)                            otherwise.
    """
    if i < 2:
        raise ValueError("crossing action needs i >= 2")
    z = float(z)
    if abs(z) <= math.sqrt(2.0 / i):
        x = -z * math.sqrt(max(-i * z * z + i + 2.0, 0.0)) / math.sqrt(2.0)
        return min(max(x, -1.0), 1.0)
    return -math.copysign(1.0, z)


def one_block_value(horizon_T: float, bias_Z: float) -> float:
    """Minimax value with a single block (no switching left):

        r_1(T, Z) = (|Z - T| + |Z + T|) / 2.
    """
    if horizon_T <= 0:
        raise ValueError("horizon must be positive")
    return (abs(bias_Z - horizon_T) + abs(bias_Z + horizon_T)) / 2.0


def overshoot_value(horizon_T: float, bias_Z: float) -> float:
    """Exact minimax value over continuations that push the bias out of the
    reachable range: (Z^2 + T^2) / (2T), valid for |Z| < T.  Its normalized
    form (z^2 + 1)/2 caps the recursion.
    """
    if abs(bias_Z) >= horizon_T:
        raise ValueError("overshoot value requires |Z| < T")
    return (bias_Z * bias_Z + horizon_T * horizon_T) / (2.0 * horizon_T)


def u4_exact() -> tuple[float, float]:
    """Exact budget-4 constants (u4_zero, z0).

    u4_zero = u_4(0) in nested-radical closed form (about 0.362975), and
    z0 is the unique root in (0,1) of the sextic

        p(t) = -t^6 - 4t^5 - 4t^4 + 4t^3 + 10t^2 + 4t - 2

    locating the minimizer of (t^2 - 1 + sqrt(2 - t^2))/(1 + t); z0 is
    found by bisection (p(0) = -2, p(1) = 7 bracket the root) and checked
    against its Cardano closed form to 1e-12.
    """
    s2 = math.sqrt(2.0)
    c = (45.0 * s2 + 3.0 * math.sqrt(3.0 * (502.0 * s2 + 945.0)) + 145.0) ** (1.0 / 3.0)
    u4_zero = c / 3.0 - 5.0 / 3.0 - 2.0 * (3.0 * s2 + 1.0) / (3.0 * c)

    def p(t: float) -> float:
        return ((((((-t - 4.0) * t - 4.0) * t + 4.0) * t + 10.0) * t + 4.0) * t - 2.0)

    lo, hi = 0.0, 1.0
    if not (p(lo) < 0.0 < p(hi)):
        raise NumericStructureError("sextic root bracket failed on (0, 1)")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if p(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-16:
            break
    z0_bisect = 0.5 * (lo + hi)

    r = -9.0 * s2 + 3.0 * math.sqrt(6.0 * (2.0 * s2 + 9.0)) + 38.0
    z0 = (-2.0 * (3.0 * s2 - 4.0) * (2.0 / r) ** (1.0 / 3.0)
          + 2.0 ** (2.0 / 3.0) * r ** (1.0 / 3.0) - 4.0) / 6.0
    if abs(z0 - z0_bisect) > 1e-12:
        raise NumericStructureError("Cardano root disagrees with bisection")
    return u4_zero, z0


# ----------------------------------------------------------------------
# the operator on grids
# ----------------------------------------------------------------------

def fugal_apply(f: GridFunction, x_tol: float = X_TOL) -> GridFunction:
    """Apply the one-step minimax operator to a grid function.

    Endpoints are pinned to 1 (= |z| there); interior nodes run the
    inf-max-inf.  Inner infima are exact node scans (see module notes);
    the outer infimum bisects the monotone crossing h(x) = g_plus - g_minus
    to ``x_tol``.  A sign pattern at the endpoints that contradicts the
    monotonicity of h raises :class:`NumericStructureError` (grid too
    coarse for the interpolant to retain the structure the method needs).
    """
    N = f.resolution
    z = f.grid
    v = f.values
    if np.any(v < np.abs(z) - 1e-9):
        raise ValueError("operator input must dominate |z| pointwise")

    out = np.empty(N + 1)
    out[0] = 1.0
    out[N] = 1.0

    inv_p = 1.0 / np.maximum(1.0 + z, DENOM_CLAMP)   # w = +1 denominators
    inv_m = 1.0 / np.maximum(1.0 - z, DENOM_CLAMP)   # w = -1 denominators
    fp = v * inv_p
    fm = v * inv_m
    cols = np.arange(N + 1)[None, :]

    interior = np.arange(1, N)
    n_iter = int(math.ceil(math.log2(2.0 / x_tol)))
    for chunk in np.array_split(interior, max(1, interior.size // 512)):
        zc = z[chunk]
        drop_p = cols < chunk[:, None]   # nodes outside the w=+1 half-interval
        drop_m = cols > chunk[:, None]
        one_plus = 1.0 + zc
        one_minus = 1.0 - zc
        buf_p = np.empty((chunk.size, N + 1))
        buf_m = np.empty_like(buf_p)

        def branch_values(x):
            np.multiply(x[:, None], inv_p[None, :], out=buf_p)
            np.subtract(fp[None, :], buf_p, out=buf_p)
            np.copyto(buf_p, np.inf, where=drop_p)
            gp = x + one_plus * buf_p.min(axis=1)
            np.multiply(x[:, None], inv_m[None, :], out=buf_m)
            np.add(fm[None, :], buf_m, out=buf_m)
            np.copyto(buf_m, np.inf, where=drop_m)
            gm = -x + one_minus * buf_m.min(axis=1)
            return gp, gm

        lo = np.full(chunk.shape, -1.0)
        hi = np.ones(chunk.shape)
        gp, gm = branch_values(lo)
        h_lo = gp - gm
        gp, gm = branch_values(hi)
        h_hi = gp - gm
        if np.any((h_lo > 1e-9) & (h_hi < -1e-9)):
            raise NumericStructureError(
                "crossing function not monotone at grid resolution "
                f"N={N}; refine the grid")
        for _ in range(n_iter):
            mid = 0.5 * (lo + hi)
            gp, gm = branch_values(mid)
            up = (gp - gm) >= 0.0
            hi = np.where(up, mid, hi)
            lo = np.where(up, lo, mid)
        gp, gm = branch_values(0.5 * (lo + hi))
        out[chunk] = np.maximum(gp, gm)

    k_next = None if f.k_index is None else f.k_index + 1
    return GridFunction(N, out, k_index=k_next)


# ----------------------------------------------------------------------
# pointwise witnesses (policy extraction, closed-form cross-checks)
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorWitness:
    x: float                      # outer minimizer
    value: float                  # operator value at z
    z_next: dict[int, float]      # inner minimizer per adversary sign


def _golden_min(fn, a: float, b: float, tol: float = ZPRIME_TOL) -> tuple[float, float]:
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fn(d)
    mid = 0.5 * (a + b)
    return mid, fn(mid)


def _parabola_vertex(x0, x1, x2, y0, y1, y2) -> float | None:
    d10, d12 = x1 - x0, x1 - x2
    den = d10 * (y1 - y2) - d12 * (y1 - y0)
    if abs(den) < 1e-300:
        return None
    vx = x1 - 0.5 * (d10 * d10 * (y1 - y2) - d12 * d12 * (y1 - y0)) / den
    if not (min(x0, x2) < vx < max(x0, x2)):
        return None
    return vx


def _inner_min(f: GridFunction, z: float, w: int, x: float,
               refine: bool) -> tuple[float, float]:
    """min over the half-interval on w's side of z of the branch objective
    ((1+wz) f(z') + x (z'-z)) / (1+z'w); returns (value, argmin)."""
    grid = f.grid
    v = f.values
    if w > 0:
        j0 = int(np.searchsorted(grid, z, side="left"))
        zc = np.concatenate(([z], grid[j0:]))
        fc = np.concatenate(([f.interp(z)], v[j0:]))
    else:
        j1 = int(np.searchsorted(grid, z, side="right"))
        zc = np.concatenate((grid[:j1], [z]))
        fc = np.concatenate((v[:j1], [f.interp(z)]))
    den = np.maximum(1.0 + w * zc, DENOM_CLAMP)
    vals = ((1.0 + w * z) * fc + x * (zc - z)) / den
    i = int(np.argmin(vals))
    best_v = float(vals[i])
    best_z = float(zc[i])

    if not refine or not 0 < i < zc.size - 1:
        return best_v, best_z

    def obj(t: float) -> float:
        return (((1.0 + w * z) * f.interp(t) + x * (t - z))
                / max(1.0 + w * t, DENOM_CLAMP))

    zg, vg = _golden_min(obj, float(zc[i - 1]), float(zc[i + 1]))
    if vg < best_v:
        best_v, best_z = vg, zg

    # Parabolic vertex through three exact node samples sharpens the argmin
    # from O(step) to O(step^2); only applies when none of the three points
    # is the interpolated off-node candidate at z itself.
    nodes_only = (w > 0 and i >= 2) or (w < 0 and i <= zc.size - 3)
    if nodes_only:
        vx = _parabola_vertex(zc[i - 1], zc[i], zc[i + 1],
                              vals[i - 1], vals[i], vals[i + 1])
        if vx is not None:
            best_z = vx
            best_v = min(best_v, obj(vx))
    return best_v, best_z


def operator_witness(f: GridFunction, z: float, x_tol: float = X_TOL) -> OperatorWitness:
    """Operator value at one point with its minimizing action and the inner
    minimizer for each adversary sign (used to read off block fractions)."""
    if abs(z) >= 1.0:
        raise ValueError("witness queries need |z| < 1")

    def h(x: float) -> float:
        return (_inner_min(f, z, +1, x, refine=False)[0]
                - _inner_min(f, z, -1, x, refine=False)[0])

    if h(-1.0) > 1e-9 and h(1.0) < -1e-9:
        raise NumericStructureError("crossing function not monotone at this point")
    lo, hi = -1.0, 1.0
    n_iter = int(math.ceil(math.log2(2.0 / x_tol)))
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        if h(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    x0 = 0.5 * (lo + hi)
    if abs(x0) < 8.0 * x_tol and abs(h(0.0)) < 1e-13:
        x0 = 0.0  # symmetric tie: prefer the smallest-magnitude action
    vp, zp = _inner_min(f, z, +1, x0, refine=True)
    vm, zm = _inner_min(f, z, -1, x0, refine=True)
    return OperatorWitness(x=x0, value=max(vp, vm), z_next={+1: zp, -1: zm})


# ----------------------------------------------------------------------
# solved tables and policies
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PolicyNode:
    x: float          # action for the block this prefix opens
    m_plus: float     # block fraction M*/T if the recorded sign is +1
    m_minus: float    # ... if the recorded sign is -1


@dataclass(frozen=True)
class FugalPolicy:
    """Optimal fugal strategy: per sign-prefix, the action and the block
    fractions M*_i/T (valid for every horizon by T-independence)."""

    budget_K: int
    resolution: int
    nodes: dict[tuple[int, ...], PolicyNode]

    def x_star(self, prefix) -> float:
        return self.nodes[tuple(prefix)].x

    def m_fraction(self, prefix, sign: int) -> float:
        node = self.nodes[tuple(prefix)]
        return node.m_plus if sign > 0 else node.m_minus

    def path_fraction_sum(self, signs) -> float:
        """Sum of block fractions along one full sign path (should be 1)."""
        signs = tuple(signs)
        if len(signs) != self.budget_K:
            raise ValueError("need one sign per block")
        total = 0.0
        for i in range(self.budget_K):
            total += self.m_fraction(signs[:i], signs[i])
        return total

    def to_json_dict(self) -> dict:
        def key(prefix):
            return "".join("+" if s > 0 else "-" for s in prefix)
        return {
            "budget_K": self.budget_K,
            "resolution": self.resolution,
            "nodes": {key(p): {"x": n.x, "m_plus": n.m_plus, "m_minus": n.m_minus}
                      for p, n in sorted(self.nodes.items(), key=lambda kv: (len(kv[0]), kv[0]))},
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "FugalPolicy":
        nodes = {}
        for key, nd in d["nodes"].items():
            prefix = tuple(1 if ch == "+" else -1 for ch in key)
            nodes[prefix] = PolicyNode(x=float(nd["x"]), m_plus=float(nd["m_plus"]),
                                       m_minus=float(nd["m_minus"]))
        return cls(budget_K=int(d["budget_K"]), resolution=int(d["resolution"]), nodes=nodes)


def extract_policy(tables: list[GridFunction], budget_K: int,
                   resolution: int) -> FugalPolicy:
    """Walk the recursion tree recording argmin witnesses.

    At block i (k = budget_K - i + 1 blocks remaining, current bias z,
    remaining horizon fraction tau) the witness of the operator applied to
    u_{k-1} at z gives the action x*_i and, per sign w, the inner minimizer
    z'; the block fraction of the whole horizon is tau * (z'-z)/(w+z') and
    the child state is (z', tau - fraction).  The final block takes the
    whole remainder with action -z, so fractions telescope to exactly 1
    along every sign path.  A bias at |z| >= 1 is absorbing: the action
    -sign(z) holds the value at |z| whatever the adversary does, so the
    current block takes everything that is left.
    """
    nodes: dict[tuple[int, ...], PolicyNode] = {}

    def visit(prefix: tuple[int, ...], z: float, tau: float) -> None:
        blocks_left = budget_K - len(prefix)
        if abs(z) >= 1.0 - 1e-12:
            x = -math.copysign(1.0, z)
            nodes[prefix] = PolicyNode(x=x, m_plus=tau, m_minus=tau)
            if blocks_left > 1:
                visit(prefix + (1,), z, 0.0)
                visit(prefix + (-1,), z, 0.0)
            return
        if blocks_left == 1:
            nodes[prefix] = PolicyNode(x=-z + 0.0, m_plus=tau, m_minus=tau)
            return
        wit = operator_witness(tables[blocks_left - 2], z)
        frac = {}
        for s in (1, -1):
            zn = wit.z_next[s]
            phi = (zn - z) / (s + zn)
            frac[s] = float(tau * min(max(phi, 0.0), 1.0))
        nodes[prefix] = PolicyNode(x=float(wit.x), m_plus=frac[1], m_minus=frac[-1])
        visit(prefix + (1,), wit.z_next[1], tau - frac[1])
        visit(prefix + (-1,), wit.z_next[-1], tau - frac[-1])

    visit((), 0.0, 1.0)
    return FugalPolicy(budget_K=budget_K, resolution=resolution, nodes=nodes)


_table_cache: dict[int, list[GridFunction]] = {}
_policy_cache: dict[tuple[int, int], FugalPolicy] = {}


def solve_tables(budget_K: int, resolution: int = DEFAULT_RESOLUTION) -> list[GridFunction]:
    """u_1 .. u_K grids at the given resolution (memoized per resolution)."""
    if budget_K < 1:
        raise ValueError("budget_K must be >= 1")
    if resolution < 100:
        raise ValueError("resolution must be at least 100")
    tables = _table_cache.setdefault(resolution, [])
    if not tables:
        tables.append(GridFunction(resolution, np.ones(resolution + 1), k_index=1))
    while len(tables) < budget_K:
        tables.append(fugal_apply(tables[-1]))
    return tables[:budget_K]


def u_k_solve(budget_K: int, resolution: int = DEFAULT_RESOLUTION
              ) -> tuple[list[GridFunction], FugalPolicy]:
    """Solve the recursion up to the given budget and extract the policy."""
    tables = solve_tables(budget_K, resolution)
    key = (budget_K, resolution)
    policy = _policy_cache.get(key)
    if policy is None:
        policy = extract_policy(tables, budget_K, resolution)
        _policy_cache[key] = policy
    return list(tables), policy


# ----------------------------------------------------------------------
# dumps
# ----------------------------------------------------------------------

def write_grid_csv(tables: list[GridFunction], path: str) -> None:
    grid = tables[0].grid
    header = "z," + ",".join(f"u_{k}" for k in range(1, len(tables) + 1))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for j, z in enumerate(grid):
            row = [f"{z:.17g}"] + [f"{t.values[j]:.17g}" for t in tables]
            fh.write(",".join(row) + "\n")


def write_policy_json(policy: FugalPolicy, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(policy.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_policy_json(path: str) -> FugalPolicy:
    with open(path, "r", encoding="utf-8") as fh:
        return FugalPolicy.from_json_dict(json.load(fh))
