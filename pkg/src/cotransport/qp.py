"""Dense convex quadratic programming.

Solves   min 0.5 x' H x + f' x
         s.t. A_eq x = b_eq,  lower <= A_in x <= upper

by operator splitting (ADMM with over-relaxation and penalty adaptation)
plus an active-set KKT polish that finishes solutions to tight KKT
residuals.  Warm starts reuse the previous active set, which usually
turns a solve on a slowly varying problem sequence into a single linear
solve.  Everything is dense and deterministic; problems here are small
(tens of variables).
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

OPTIMAL = "optimal"
MAX_ITER = "max_iter"
INFEASIBLE = "infeasible"

_SIGMA = 1e-6          # x-update regularization
_ALPHA = 1.6           # over-relaxation
_RHO_EQ_SCALE = 1e3    # penalty boost on equality rows
_CHECK_EVERY = 25


def _as2d(a, n):
    if a is None:
        return np.zeros((0, n))
    a = np.asarray(a, dtype=float)
    return a.reshape(-1, n)


def _as1d(a):
    if a is None:
        return np.zeros(0)
    return np.asarray(a, dtype=float).reshape(-1)


@dataclass
class QpProblem:
    H: np.ndarray
    f: np.ndarray
    A_eq: np.ndarray = None
    b_eq: np.ndarray = None
    A_in: np.ndarray = None
    lower: np.ndarray = None
    upper: np.ndarray = None

    def __post_init__(self):
        self.H = np.asarray(self.H, dtype=float)
        self.f = _as1d(self.f)
        n = self.f.shape[0]
        if self.H.shape != (n, n):
            raise ValueError("H must be n x n matching f")
        self.A_eq = _as2d(self.A_eq, n)
        self.b_eq = _as1d(self.b_eq)
        self.A_in = _as2d(self.A_in, n)
        self.lower = _as1d(self.lower)
        self.upper = _as1d(self.upper)
        if self.A_eq.shape[0] != self.b_eq.shape[0]:
            raise ValueError("A_eq/b_eq row mismatch")
        if not (self.A_in.shape[0] == self.lower.shape[0]
                == self.upper.shape[0]):
            raise ValueError("A_in/lower/upper row mismatch")
        if np.any(self.lower > self.upper):
            raise ValueError("lower must not exceed upper")

    @property
    def n(self):
        return self.f.shape[0]


@dataclass
class QpSolution:
    x: np.ndarray
    status: str
    kkt_residual: float
    iterations: int
    y_eq: np.ndarray = field(default=None, repr=False)
    y_in: np.ndarray = field(default=None, repr=False)


def kkt_residual(p, x, y_eq, y_in):
    """Max-norm KKT residual: stationarity, feasibility, complementarity."""
    r = np.abs(p.H @ x + p.f
               + (p.A_eq.T @ y_eq if p.A_eq.shape[0] else 0.0)
               + (p.A_in.T @ y_in if p.A_in.shape[0] else 0.0)).max()
    if p.A_eq.shape[0]:
        r = max(r, np.abs(p.A_eq @ x - p.b_eq).max())
    if p.A_in.shape[0]:
        v = p.A_in @ x
        r = max(r, max(0.0, (p.lower - v).max()), max(0.0, (v - p.upper).max()))
        comp = (np.maximum(y_in, 0.0) * np.abs(p.upper - v)
                + np.maximum(-y_in, 0.0) * np.abs(v - p.lower))
        r = max(r, comp.max())
    return float(r)


def _kkt_solve(p, lo, up):
    """Solve the equality-plus-active-set KKT system with refinement.

    lo/up are boolean masks over inequality rows pinned at their bounds.
    Returns (x, y_eq, y_in) or None if the system is singular.
    """
    n = p.n
    me = p.A_eq.shape[0]
    rows = [p.A_eq]
    rhs = [p.b_eq]
    if up.any():
        rows.append(p.A_in[up])
        rhs.append(p.upper[up])
    if lo.any():
        rows.append(p.A_in[lo])
        rhs.append(p.lower[lo])
    G = np.vstack(rows)
    h = np.concatenate(rhs)
    ma = G.shape[0]
    K = np.zeros((n + ma, n + ma))
    K[:n, :n] = p.H
    if ma:
        K[:n, n:] = G.T
        K[n:, :n] = G
    b = np.concatenate([-p.f, h])
    try:
        fac = lu_factor(K)
    except np.linalg.LinAlgError:
        return None
    sol = lu_solve(fac, b)
    if not np.all(np.isfinite(sol)):
        return None
    # one refinement pass keeps the residual near machine precision
    sol += lu_solve(fac, b - K @ sol)
    if not np.all(np.isfinite(sol)):
        return None
    x = sol[:n]
    mu = sol[n:]
    y_eq = mu[:me]
    y_in = np.zeros(p.A_in.shape[0])
    k = me + int(np.count_nonzero(up))
    y_in[up] = mu[me:k]
    y_in[lo] = mu[k:]
    return x, y_eq, y_in


def _verify(p, x, y_eq, y_in, tol):
    """Accept a candidate if its exact KKT residual meets tol."""
    mi = p.A_in.shape[0]
    if mi:
        v = p.A_in @ x
        if (v < p.lower - 10 * tol).any() or (v > p.upper + 10 * tol).any():
            return None
    y = y_in.copy()
    # tiny wrong-signed multipliers are noise on degenerate rows
    if mi:
        at_up = np.abs(p.A_in @ x - p.upper) <= np.abs(p.A_in @ x - p.lower)
        y[(~at_up) & (y > 0) & (y < tol)] = 0.0
        y[at_up & (y < 0) & (y > -tol)] = 0.0
        if (y[at_up] < -tol).any() or (y[~at_up] > tol).any():
            return None
    r = kkt_residual(p, x, y_eq, y)
    if r <= tol:
        return x, y_eq, y, r
    return None


def _active_set_refine(p, lo, up, tol, rounds=40):
    """Primal-dual active set iteration from a starting guess."""
    lo = lo.copy()
    up = up.copy()
    for _ in range(rounds):
        out = _kkt_solve(p, lo, up)
        if out is None:
            return None
        x, y_eq, y_in = out
        ok = _verify(p, x, y_eq, y_in, tol)
        if ok is not None:
            return ok
        v = p.A_in @ x if p.A_in.shape[0] else np.zeros(0)
        # worst wrong-signed multiplier gets dropped first
        bad_up = np.where(up & (y_in < -tol))[0]
        bad_lo = np.where(lo & (y_in > tol))[0]
        if len(bad_up) or len(bad_lo):
            cands = ([(-y_in[i], i, "up") for i in bad_up]
                     + [(y_in[i], i, "lo") for i in bad_lo])
            _, idx, kind = max(cands)
            if kind == "up":
                up[idx] = False
            else:
                lo[idx] = False
            continue
        # otherwise add the worst violated row
        viol_up = v - p.upper
        viol_lo = p.lower - v
        viol_up[up] = -np.inf
        viol_lo[lo] = -np.inf
        if len(v) == 0:
            return None
        iu = int(np.argmax(viol_up))
        il = int(np.argmax(viol_lo))
        if viol_up[iu] <= tol and viol_lo[il] <= tol:
            return None   # feasible but stationarity off: give up
        if viol_up[iu] >= viol_lo[il]:
            up[iu], lo[iu] = True, False
        else:
            lo[il], up[il] = True, False
    return None


def solve(problem, tol=1e-8, max_iter=4000, warm=None):
    """Solve a QpProblem; returns a QpSolution.

    warm may be a previous QpSolution for a nearby problem; its active
    set seeds a direct KKT attempt before any splitting iterations run.
    """
    p = problem
    n = p.n
    me = p.A_eq.shape[0]
    mi = p.A_in.shape[0]
    m = me + mi

    # direct attempt: warm active set if given, else everything inactive
    if warm is not None and warm.y_in is not None and len(warm.y_in) == mi:
        lo0 = warm.y_in < -tol
        up0 = warm.y_in > tol
    else:
        lo0 = np.zeros(mi, dtype=bool)
        up0 = np.zeros(mi, dtype=bool)
    got = _active_set_refine(p, lo0, up0, tol,
                             rounds=40 if warm is not None else 1)
    if got is not None:
        x, y_eq, y_in, r = got
        return QpSolution(x, OPTIMAL, r, 0, y_eq, y_in)
    if m == 0:
        # unconstrained and the direct solve failed: H is singular
        return QpSolution(np.zeros(n), MAX_ITER, np.inf, 0, np.zeros(0),
                          np.zeros(0))

    A = np.vstack([p.A_eq, p.A_in])
    l = np.concatenate([p.b_eq, p.lower])
    u = np.concatenate([p.b_eq, p.upper])

    x = warm.x.copy() if warm is not None else np.zeros(n)
    y = np.zeros(m)
    if warm is not None and warm.y_eq is not None and len(warm.y_eq) == me \
            and warm.y_in is not None and len(warm.y_in) == mi:
        y = np.concatenate([warm.y_eq, warm.y_in])
    z = np.clip(A @ x, l, u)

    rho_base = 0.1
    rho = np.full(m, rho_base)
    rho[:me] *= _RHO_EQ_SCALE

    def factorize():
        K = np.zeros((n + m, n + m))
        K[:n, :n] = p.H + _SIGMA * np.eye(n)
        K[:n, n:] = A.T
        K[n:, :n] = A
        K[n:, n:] = -np.diag(1.0 / rho)
        return lu_factor(K)

    fac = factorize()
    rhs = np.zeros(n + m)
    y_prev = y.copy()
    best = None

    for it in range(1, max_iter + 1):
        rhs[:n] = _SIGMA * x - p.f
        rhs[n:] = z - y / rho
        sol = lu_solve(fac, rhs)
        x_t = sol[:n]
        nu = sol[n:]
        z_t = z + (nu - y) / rho
        x = _ALPHA * x_t + (1.0 - _ALPHA) * x
        z_r = _ALPHA * z_t + (1.0 - _ALPHA) * z
        z_new = np.clip(z_r + y / rho, l, u)
        y = y + rho * (z_r - z_new)
        z = z_new

        if it % _CHECK_EVERY:
            continue

        ax = A @ x
        r_prim = np.abs(ax - z).max() if m else 0.0
        dual_vec = p.H @ x + p.f + A.T @ y
        r_dual = np.abs(dual_vec).max()

        # finish with an exact active-set solve once the splitting has
        # localized the solution
        if r_prim < 1e3 * tol + 1e-4 and r_dual < 1e3 * tol + 1e-4:
            act_tol = max(10 * tol, 1e-7)
            lo_m = np.zeros(mi, dtype=bool)
            up_m = np.zeros(mi, dtype=bool)
            if mi:
                zi = z[me:]
                lo_m = zi - p.lower <= act_tol * np.maximum(
                    1.0, np.abs(p.lower))
                up_m = p.upper - zi <= act_tol * np.maximum(
                    1.0, np.abs(p.upper))
                both = lo_m & up_m
                lo_m[both & (y[me:] >= 0)] = False
                up_m[both & (y[me:] < 0)] = False
            got = _active_set_refine(p, lo_m, up_m, tol, rounds=6)
            if got is not None:
                x, y_eq, y_in, r = got
                return QpSolution(x, OPTIMAL, r, it, y_eq, y_in)
            best = (x.copy(), y.copy())

        # primal infeasibility certificate on the dual update direction
        dy = y - y_prev
        y_prev = y.copy()
        ndy = np.abs(dy).max()
        if ndy > 1e-10:
            dyn = dy / ndy
            support = u @ np.maximum(dyn, 0.0) + l @ np.minimum(dyn, 0.0)
            if np.abs(A.T @ dyn).max() < 1e-8 and support < -1e-8:
                r = kkt_residual(p, x, y[:me], y[me:])
                return QpSolution(x, INFEASIBLE, r, it, y[:me], y[me:])

        # penalty adaptation, OSQP style
        if it % 100 == 0 and r_prim > 0 and r_dual > 0:
            s_p = max(np.abs(ax).max(), np.abs(z).max(), 1e-12)
            s_d = max(np.abs(p.H @ x).max(), np.abs(A.T @ y).max(),
                      np.abs(p.f).max(), 1e-12)
            ratio = np.sqrt((r_prim / s_p) / (r_dual / s_d))
            if ratio > 5.0 or ratio < 0.2:
                rho = np.clip(rho * ratio, 1e-6, 1e6)
                rho[:me] = np.clip(rho[:me], 1e-6 * _RHO_EQ_SCALE, 1e9)
                fac = factorize()

    if best is not None:
        x, y = best
    r = kkt_residual(p, x, y[:me], y[me:])
    return QpSolution(x, MAX_ITER, r, max_iter, y[:me], y[me:])


def dump_problem(p, path):
    """Write a problem as a plain text matrix dump.

    Layout: a header line `qp 1 <n> <me> <mi>`, then blocks H, f, A_eq,
    b_eq, A_in, lower, upper, each introduced by its name on its own
    line followed by one whitespace-separated row per line.  Empty
    blocks keep the name line only.
    """
    me = p.A_eq.shape[0]
    mi = p.A_in.shape[0]
    with open(path, "w") as fh:
        fh.write(f"qp 1 {p.n} {me} {mi}\n")

        def block(name, arr):
            fh.write(name + "\n")
            arr = np.atleast_2d(arr)
            for row in arr:
                if row.size:
                    fh.write(" ".join(repr(float(v)) for v in row) + "\n")

        block("H", p.H)
        block("f", p.f)
        block("A_eq", p.A_eq)
        block("b_eq", p.b_eq)
        block("A_in", p.A_in)
        block("lower", p.lower)
        block("upper", p.upper)


def load_problem(path):
    """Read back a dump_problem file."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    tag, ver, n, me, mi = lines[0].split()
    if tag != "qp" or ver != "1":
        raise ValueError("not a qp dump")
    n, me, mi = int(n), int(me), int(mi)
    blocks = {}
    name = None
    for ln in lines[1:]:
        first = ln.split()[0]
        if first in ("H", "f", "A_eq", "b_eq", "A_in", "lower", "upper") \
                and not _is_number(first):
            name = ln
            blocks[name] = []
        else:
            blocks[name].append([float(v) for v in ln.split()])

    def arr(name, shape):
        rows = blocks.get(name, [])
        if not rows:
            return np.zeros(shape)
        return np.array(rows).reshape(shape)

    return QpProblem(arr("H", (n, n)), arr("f", (n,)),
                     arr("A_eq", (me, n)), arr("b_eq", (me,)),
                     arr("A_in", (mi, n)), arr("lower", (mi,)),
                     arr("upper", (mi,)))


def _is_number(s):
    try:
        float(s)
        return True
    except ValueError:
        return False
