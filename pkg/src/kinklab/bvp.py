"""Finite-difference Newton solvers for one- and two-field Dirichlet problems.

One field:   k^2 u'' = V'(u),                 u(0) = a, u(ell) = b
Two fields:  K w'' = grad Psi(w),  w = (eps, m),  K = [[k1, k2], [k2, k3]]

Second-order central differences on a uniform grid with ``n`` interior
nodes.  The Jacobians are tridiagonal and 2x2 block tridiagonal and go to the
direct solvers in :mod:`kinklab.kernels`.  Steps are damped by halving until
the residual sup-norm decreases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
import numpy as np

from kinklab import kernels
from kinklab.errors import ContinuationFailure, InvalidParams, NewtonDivergence, SingularJacobian
from kinklab.poromechanics import (
    PoroParams, _solve_eta, check_convexity, coexisting_phases, psi_gradient, psi_hessian, rotate, unrotate,
)
from kinklab.potential import DoubleWellPotential, curvature_at_minima

NEWTON_TOL = 1e-10
MAX_ITER = 100
MAX_HALVINGS = 30
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class FdGrid:
    """Uniform grid on ``[0, ell]`` with ``n`` interior nodes."""

    n: int
    ell: float = 1.0

    def __post_init__(self):
        if self.n < 3:
            raise InvalidParams("grid needs at least 3 interior nodes")
        if not self.ell > 0:
            raise InvalidParams("ell must be positive")

    @property
    def h(self) -> float:
        return self.ell / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        """Interior nodes."""
        return self.full_nodes[1:-1]

    @property
    def full_nodes(self) -> np.ndarray:
        """All ``n + 2`` nodes including both ends (exactly 0 and ell)."""
        return np.linspace(0.0, self.ell, self.n + 2)


def default_grid(k: float, c_min: float, ell: float = 1.0, n_min: int = 2047, per_width: int = 20) -> FdGrid:
    """Grid of size ``2^j - 1 >= n_min`` with ``per_width`` nodes across ``k / sqrt(c_min)``."""
    need = per_width * ell * math.sqrt(c_min) / k
    n = n_min
    while n + 1 < need:
        n = 2 * n + 1
    return FdGrid(n, ell)


@dataclass
class NewtonReport:
    converged: bool
    iterations: int
    final_residual_norm: float
    damping_used: bool
    residual_history: list = field(default_factory=list)
    tol_used: float = NEWTON_TOL
    k_path: list = field(default_factory=list)


@dataclass(frozen=True)
class TwoFieldState:
    """Interior values of ``eps`` and ``m``; ``boundary = (m0, eps0, m_ell, eps_ell)``."""

    eps: np.ndarray
    m: np.ndarray
    boundary: tuple

    def __post_init__(self):
        if np.shape(self.eps) != np.shape(self.m):
            raise InvalidParams("eps and m must have the same length")

    def full_eps(self) -> np.ndarray:
        return np.concatenate([[self.boundary[1]], self.eps, [self.boundary[3]]])

    def full_m(self) -> np.ndarray:
        return np.concatenate([[self.boundary[0]], self.m, [self.boundary[2]]])


def tanh_guess(grid: FdGrid, left: float, right: float, width: float, center: Optional[float] = None) -> np.ndarray:
    """Interior values of a tanh step rescaled to hit ``left``/``right`` exactly at the ends."""
    c = 0.5 * grid.ell if center is None else center
    t = np.tanh((grid.full_nodes - c) / width)
    s = (t - t[0]) / (t[-1] - t[0])
    return (left + (right - left) * s)[1:-1]


# full-step allowance of the two-field Newton (see _newton)
WATCHDOG = 8


def _roundoff_floor(scale_u: float, stiffness: float, h: float) -> float:
    # evaluating c/h^2 (u_{i-1} - 2 u_i + u_{i+1}) loses about 4 eps |u| c/h^2
    return 8.0 * _EPS * scale_u * 4.0 * stiffness / (h * h)


def _newton(residual, jac_solve, u, tol, max_iter, max_halvings, what, watchdog=0):
    # convergence is judged on the sup-norm; the line search uses the 2-norm,
    # for which the Newton direction is always a descent direction.
    # With watchdog > 0 full steps are taken even when the merit rises, as long
    # as the best merit improves within that many steps; otherwise the iterate
    # returns to the best point and takes a damped step from there.  Along a
    # soft translation mode the merit rises before it falls, and a monotone
    # line search crawls.
    r = residual(u)
    norm = float(np.max(np.abs(r))) if r.size else 0.0
    merit = float(r @ r)
    history = [norm]
    damped = False
    best = (u, r, merit)
    budget = watchdog
    it = 0
    while norm > tol:
        if it >= max_iter:
            raise NewtonDivergence(f"{what}: no convergence in {max_iter} iterations (|F| = {norm:.3e})")
        du = jac_solve(u, -r)
        trial = None
        if budget > 0:
            cand = u + du
            with np.errstate(all="ignore"):
                r_cand = residual(cand)
            m_cand = float(r_cand @ r_cand)
            if np.isfinite(m_cand):
                trial, r_trial, m_trial = cand, r_cand, m_cand
                budget -= 1
            else:
                budget = 0
        if trial is None:
            if watchdog:
                u, r, merit = best
                du = jac_solve(u, -r)
            t = 1.0
            for _ in range(max_halvings + 1):
                trial = u + t * du
                with np.errstate(all="ignore"):
                    r_trial = residual(trial)
                m_trial = float(r_trial @ r_trial)
                if np.isfinite(m_trial) and m_trial <= (1.0 - 1e-4 * t) * merit:
                    break
                t *= 0.5
            else:
                raise NewtonDivergence(
                    f"{what}: residual not reduced after {max_halvings} halvings at iteration {it} (|F| = {norm:.3e})"
                )
            damped |= t < 1.0
            budget = watchdog
        u, r, merit = trial, r_trial, m_trial
        if merit < (1.0 - 1e-4) * best[2]:
            best = (u, r, merit)
            budget = watchdog
        norm = float(np.max(np.abs(r)))
        history.append(norm)
        it += 1
    return u, NewtonReport(True, it, norm, damped, history, tol)


def _one_field_direct(pot, k, grid, u, ua, ub, newton_tol, max_iter, max_halvings, backend):
    h = grid.h
    c = k * k / (h * h)
    off = np.full(grid.n - 1, c)

    def residual(w):
        full = np.concatenate([[ua], w, [ub]])
        return c * (full[:-2] - 2.0 * full[1:-1] + full[2:]) - pot.first_derivative(w)

    def jac_solve(w, rhs):
        diag = -2.0 * c - pot.second_derivative(w)
        return kernels.solve_tridiagonal(off, diag, off, rhs, backend)

    scale = max(abs(ua), abs(ub), float(np.max(np.abs(u))), 1e-300)
    tol = max(newton_tol, _roundoff_floor(scale, k * k, h))
    return _newton(residual, jac_solve, u, tol, max_iter, max_halvings, f"one-field Newton (k={k:g})")


def solve_one_field(pot: DoubleWellPotential, k: float, grid: FdGrid, init=None, boundary=None,
                    newton_tol: float = NEWTON_TOL, max_iter: int = MAX_ITER, max_halvings: int = MAX_HALVINGS,
                    backend: Optional[str] = None, max_doublings: int = 12, dps: Optional[int] = None):
    """Newton solve of ``k^2 (u_{i-1} - 2u_i + u_{i+1})/h^2 = V'(u_i)``.

    Returns the interior values and a :class:`NewtonReport` for the final
    solve.  The stopping tolerance is ``newton_tol`` raised to the rounding
    floor of the discrete Laplacian when ``k^2/h^2`` is large; the value used
    is reported.

    Without ``init`` the start is a tanh of width ``5k``.  If Newton fails
    from it, ``k`` is doubled until it succeeds and the solution is carried
    back down to ``k`` by halving, each solve seeding the next.

    With ``dps`` set, the solve runs by Newton in mpmath at ``dps`` digits
    (see :func:`auto_dps`), started from ``init`` or else from the quadrature
    profile sampled at the nodes.
    """
    if not k > 0:
        raise InvalidParams("k must be positive")
    ua, ub = boundary if boundary is not None else (pot.min_a, pot.min_b)
    args = (ua, ub, newton_tol, max_iter, max_halvings, backend)
    if init is not None:
        u = np.asarray(init, dtype=float).copy()
        if u.shape != (grid.n,):
            raise InvalidParams(f"init must have length {grid.n}")
        if dps is not None:
            return _one_field_mp(pot, k, grid, u, ua, ub, dps, max_iter, max_halvings)[:2]
        return _one_field_direct(pot, k, grid, u, *args)

    if dps is not None:
        # the translation mode is exponentially soft here, so only a start
        # with the interface already in place lies in Newton's basin; the
        # root reached is the discrete solution whatever the seed
        from kinklab.kinkcore import compute_profile

        prof = compute_profile(pot, k, grid.ell, n_points=max(1001, grid.n // 2))
        return _one_field_mp(pot, k, grid, prof.interpolate(grid.nodes), ua, ub, dps, max_iter, max_halvings)[:2]

    failure = None
    for j in range(max_doublings + 1):
        kj = k * 2.0**j
        try:
            u, report = _one_field_direct(pot, kj, grid, tanh_guess(grid, ua, ub, 5.0 * kj), *args)
            break
        except (NewtonDivergence, SingularJacobian) as exc:
            failure = exc
    else:
        raise NewtonDivergence(f"no start found up to k={kj:g}: {failure}")
    path = [kj]
    while kj > k:
        factor = 0.5
        while True:
            k_next = max(k, kj * factor)
            try:
                u, report = _one_field_direct(pot, k_next, grid, u, *args)
                break
            except (NewtonDivergence, SingularJacobian) as exc:
                if factor > 0.99:
                    raise NewtonDivergence(f"k-continuation stalled at k={kj:g}: {exc}") from exc
                factor = math.sqrt(factor)
        kj = k_next
        path.append(kj)
    report.k_path = path
    return u, report


def tail_digits(pot: DoubleWellPotential, k: float, ell: float) -> float:
    """Decimal digits lost to the exponentially small tails, ``-log10 E``.

    Uses the sharp-interface estimate ``E ~ exp(-2 sqrt(V''(a)) x0 / k)``,
    which needs only the curvatures at the minima.
    """
    ca, cb = curvature_at_minima(pot)
    x0 = ell * math.sqrt(cb) / (math.sqrt(ca) + math.sqrt(cb))
    return 2.0 * math.sqrt(ca) * x0 / (k * math.log(10.0))


def auto_dps(pot: DoubleWellPotential, k: float, ell: float, double_digits: float = 10.0) -> Optional[int]:
    """mpmath precision needed to pin the kink position, or None when doubles suffice.

    The interface sits where forces of size ``E`` balance; once ``E`` falls
    far below the rounding noise of the discrete residual, double precision
    leaves the position undetermined.
    """
    digits = tail_digits(pot, k, ell)
    if digits <= double_digits:
        return None
    return int(math.ceil(digits)) + 30


def _one_field_mp(pot, k, grid, u, ua, ub, dps, max_iter, max_halvings):
    if pot.mp_derivatives is None:
        raise InvalidParams(f"potential {pot.name!r} has no extended-precision derivatives")
    derivs = pot.mp_derivatives
    n = grid.n
    with mpmath.workdps(dps):
        mpf = mpmath.mpf
        c = mpf(k) ** 2 * (n + 1) ** 2 / mpf(grid.ell) ** 2
        left, right = mpf(ua), mpf(ub)
        w = [x if isinstance(x, mpmath.mpf) else mpf(float(x)) for x in u]
        tol = c * mpf(10) ** (12 - dps)

        def residual(w):
            d1, d2 = zip(*(derivs(x) for x in w))
            full = [left] + w + [right]
            r = [c * (full[i] - 2 * full[i + 1] + full[i + 2]) - d1[i] for i in range(n)]
            return r, d2

        def solve(d2, rhs):
            # Thomas elimination; off-diagonals are all c
            cp = [None] * n
            x = [None] * n
            piv = -2 * c - d2[0]
            cp[0] = c / piv
            x[0] = rhs[0] / piv
            for i in range(1, n):
                piv = -2 * c - d2[i] - c * cp[i - 1]
                if piv == 0:
                    raise SingularJacobian(f"zero pivot at row {i}")
                cp[i] = c / piv
                x[i] = (rhs[i] - c * x[i - 1]) / piv
            for i in range(n - 2, -1, -1):
                x[i] -= cp[i] * x[i + 1]
            return x

        span = right - left
        lo, hi = min(left, right) - span / 2, max(left, right) + span / 2
        r, d2 = residual(w)
        norm = max(abs(ri) for ri in r)
        history = [float(norm)]
        damped = False
        it = 0
        while norm > tol:
            if it >= max_iter:
                raise NewtonDivergence(f"extended-precision Newton (k={k:g}): no convergence in {max_iter} "
                                       f"iterations (|F| = {mpmath.nstr(norm, 4)})")
            dw = solve(d2, [-ri for ri in r])
            # full steps: along the soft translation mode the residual rises
            # before it falls, so a merit-decrease test stalls; only steps
            # leaving the physical range are cut back
            t = mpf(1)
            for _ in range(max_halvings + 1):
                trial = [wi + t * di for wi, di in zip(w, dw)]
                if all(lo <= x <= hi for x in trial):
                    break
                t /= 2
            else:
                raise NewtonDivergence(f"extended-precision Newton (k={k:g}): step leaves the range after "
                                       f"{max_halvings} halvings at iteration {it}")
            r_t, d2_t = residual(trial)
            damped |= t < 1
            w, r, d2 = trial, r_t, d2_t
            norm = max(abs(ri) for ri in r)
            history.append(float(norm))
            it += 1
        out = np.array([float(x) for x in w])
        return out, NewtonReport(True, it, float(norm), damped, history, float(tol)), w


def full_profile(u_interior, boundary) -> np.ndarray:
    return np.concatenate([[boundary[0]], u_interior, [boundary[1]]])


def discrete_first_integral(pot: DoubleWellPotential, k: float, grid: FdGrid, u_full) -> np.ndarray:
    """``k^2 ((u_{i+1} - u_{i-1}) / 2h)^2 / 2 - V(u_i)`` at interior nodes."""
    u_full = np.asarray(u_full, dtype=float)
    du = (u_full[2:] - u_full[:-2]) / (2.0 * grid.h)
    return 0.5 * k * k * du * du - pot(u_full[1:-1])


def level_crossing(xs, us, level: float) -> float:
    """First x where the piecewise-linear ``u(x)`` reaches ``level``."""
    xs = np.asarray(xs, dtype=float)
    d = np.asarray(us, dtype=float) - level
    idx = np.nonzero(np.sign(d[:-1]) != np.sign(d[1:]))[0]
    if idx.size == 0:
        raise ValueError(f"profile never crosses {level}")
    i = int(idx[0])
    if d[i + 1] == 0:
        return float(xs[i + 1])
    return float(xs[i] + (xs[i + 1] - xs[i]) * d[i] / (d[i] - d[i + 1]))


# ------------------------------------------------------------- two fields

def _stiffness(params: PoroParams) -> np.ndarray:
    return np.array([[params.k1, params.k2], [params.k2, params.k3]])


def solve_two_field(params: PoroParams, grid: FdGrid, init: TwoFieldState, newton_tol: float = NEWTON_TOL,
                    max_iter: int = MAX_ITER, max_halvings: int = MAX_HALVINGS, backend: Optional[str] = None):
    """Block-tridiagonal Newton solve of ``K w'' = grad Psi(w)``, ``w = (eps, m)``.

    ``params.p`` must be set; the boundary values come from ``init``.
    """
    check_convexity(params.k1, params.k2, params.k3)
    if params.p is None:
        raise InvalidParams("pressure p must be set for the two-field solve")
    if np.shape(init.eps) != (grid.n,):
        raise InvalidParams(f"initial state must have {grid.n} interior nodes")
    m0, e0, m1, e1 = init.boundary
    left, right = np.array([e0, m0]), np.array([e1, m1])
    h = grid.h
    kk = _stiffness(params) / (h * h)
    off = np.broadcast_to(kk, (grid.n - 1, 2, 2))

    def residual(w):
        full = np.vstack([left, w, right])
        lap = (full[:-2] - 2.0 * full[1:-1] + full[2:]) @ kk.T
        g_m, g_e = psi_gradient(params, w[:, 1], w[:, 0])
        return (lap - np.column_stack([g_e, g_m])).ravel()

    def jac_solve(w, rhs):
        h_mm, h_me, h_ee = psi_hessian(params, w[:, 1], w[:, 0])
        diag = np.empty((grid.n, 2, 2))
        diag[:, 0, 0] = -2.0 * kk[0, 0] - h_ee
        diag[:, 0, 1] = -2.0 * kk[0, 1] - h_me
        diag[:, 1, 0] = -2.0 * kk[1, 0] - h_me
        diag[:, 1, 1] = -2.0 * kk[1, 1] - h_mm
        return kernels.solve_block_tridiagonal(off, diag, off, rhs.reshape(-1, 2), backend)

    w0 = np.column_stack([init.eps, init.m]).astype(float)
    scale = max(float(np.max(np.abs(w0))), abs(m0), abs(e0), abs(m1), abs(e1), 1e-300)
    stiff = max(abs(params.k1), abs(params.k2), abs(params.k3))
    tol = max(newton_tol, _roundoff_floor(scale, 2.0 * stiff, h))
    w, report = _newton(lambda w: residual(w.reshape(-1, 2)),
                        lambda w, rhs: jac_solve(w.reshape(-1, 2), rhs).ravel(),
                        w0.ravel(), tol, max_iter, max_halvings, "two-field Newton", watchdog=WATCHDOG)
    w = w.reshape(-1, 2)
    return TwoFieldState(w[:, 0].copy(), w[:, 1].copy(), tuple(init.boundary)), report


def phase_boundary(params: PoroParams) -> tuple[PoroParams, tuple]:
    """Params with ``p`` fixed (p_co when unset) and ``(m_s, eps_s, m_f, eps_f)``."""
    p, s, f = coexisting_phases(params)
    return params.with_p(p), (s.m, s.eps, f.m, f.eps)


def two_field_guess(params: PoroParams, grid: FdGrid, boundary: tuple, width: Optional[float] = None) -> TwoFieldState:
    """Component-wise tanh between the boundary phases.

    In the degenerate case the guess is then moved onto the constraint curve
    ``dU/deta = 0`` node by node, which puts Newton in its basin even when the
    plain tanh is far from it.
    """
    m0, e0, m1, e1 = boundary
    if width is None:
        width = 5.0 * math.sqrt(max(params.k1, params.k3))
    eps = tanh_guess(grid, e0, e1, width)
    m = tanh_guess(grid, m0, m1, width)
    if params.is_degenerate:
        lam = params.k1 / params.k2
        xi, eta = rotate(lam, m, eps)
        eta, g = _solve_eta(params, lam, params.p, xi, eta)
        if np.all(np.isfinite(eta)) and np.max(np.abs(g)) < 1e-8:
            m, eps = unrotate(lam, xi, eta)
    return TwoFieldState(np.asarray(eps, dtype=float), np.asarray(m, dtype=float), tuple(boundary))


@dataclass(frozen=True)
class SweepStep:
    k: float
    params: PoroParams
    state: TwoFieldState
    report: NewtonReport


def continuation_sweep(model: PoroParams, grid: FdGrid, k_values: Sequence[float], init: Optional[TwoFieldState] = None,
                       newton_tol: float = NEWTON_TOL, backend: Optional[str] = None) -> list[SweepStep]:
    """Solve for each ``k`` in decreasing order, seeding with the previous state.

    The coefficients used at step ``k`` are ``k * (model.k1, model.k2, model.k3)``.
    """
    ks = [float(k) for k in k_values]
    if not ks:
        raise InvalidParams("k_values is empty")
    if any(k <= 0 for k in ks) or any(b >= a for a, b in zip(ks, ks[1:])):
        raise InvalidParams("k_values must be positive and strictly decreasing")
    model, boundary = phase_boundary(model)
    steps: list[SweepStep] = []
    state = init
    for k in ks:
        params_k = model.scaled_k(k)
        if state is None:
            state = two_field_guess(params_k, grid, boundary)
        try:
            state, report = solve_two_field(params_k, grid, state, newton_tol=newton_tol, backend=backend)
        except (NewtonDivergence, SingularJacobian) as exc:
            raise ContinuationFailure(f"continuation failed at k={k:g}: {exc}", k) from exc
        steps.append(SweepStep(k, params_k, state, report))
    return steps
