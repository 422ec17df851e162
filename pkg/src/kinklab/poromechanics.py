"""Two-field poromechanics: Biot energy, phases, pressures, degenerate reduction.

The first-gradient energy density in the fluid density ``m`` and the strain
``eps`` is

    Psi = alpha/12 m^2 (3 m^2 - 8 b eps m + 6 b^2 eps^2) + p eps + eps^2/2
          + a (m - b eps)^2 / 2

with ``a = a_ratio`` and ``b = b_couple``.  The second-gradient energy
``(k1 eps'^2 + 2 k2 eps' m' + k3 m'^2) / 2`` is degenerate when
``k1 k3 = k2^2``; the rotation

    xi  = ( m + lam eps) / sqrt(1 + lam^2)
    eta = (-lam m + eps) / sqrt(1 + lam^2),     lam = k1/k2 = k2/k3

then turns the stationary problem into ``k3 (1 + lam^2) xi'' = dU/dxi`` on the
constraint curve ``dU/deta = 0``, a one-field kink problem.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from kinklab.errors import BracketFailure, BranchJump, ConvexityViolation, InvalidParams, NoPhaseFound, NotDegenerate
from kinklab.potential import DoubleWellPotential, _fd_first
from kinklab.kinkcore import limit_position

PHASE_TOL = 1e-10
DEDUP_TOL = 1e-6
P_TOL = 1e-10
DEGENERACY_TOL = 1e-12
CONVEXITY_TOL = 1e-12
CONSTRAINT_TOL = 1e-10
BOX_M = (-0.5, 3.0)  # in units of b_couple
BOX_EPS = (-3.0, 1.0)
N_STARTS = 21


@dataclass(frozen=True)
class PoroParams:
    """Material constants and second-gradient coefficients.

    ``p`` may be left as ``None`` where the coexistence pressure is meant; the
    routines that need it then compute it.
    """

    alpha: float = 100.0
    a_ratio: float = 0.5
    b_couple: float = 1.0
    p: Optional[float] = None
    k1: float = 0.1
    k2: float = 0.1
    k3: float = 0.1

    def __post_init__(self):
        for name in ("alpha", "a_ratio", "b_couple"):
            if not getattr(self, name) > 0:
                raise InvalidParams(f"{name} must be positive")
        if self.p is not None and not self.p >= 0:
            raise InvalidParams("p must be nonnegative")
        check_convexity(self.k1, self.k2, self.k3)

    def with_p(self, p: float) -> "PoroParams":
        return replace(self, p=float(p))

    def scaled_k(self, k: float) -> "PoroParams":
        """The same material with ``(k1, k2, k3)`` multiplied by ``k``."""
        return replace(self, k1=self.k1 * k, k2=self.k2 * k, k3=self.k3 * k)

    @property
    def is_degenerate(self) -> bool:
        scale = max(self.k1 * self.k3, self.k2 * self.k2)
        return self.k2 != 0 and abs(self.k1 * self.k3 - self.k2 * self.k2) <= DEGENERACY_TOL * scale


def check_convexity(k1, k2, k3):
    if not (k1 > 0 and k3 > 0):
        raise ConvexityViolation(f"need k1 > 0 and k3 > 0, got k1={k1}, k3={k3}")
    if k1 * k3 - k2 * k2 < -CONVEXITY_TOL * max(k1 * k3, k2 * k2):
        raise ConvexityViolation(f"k1*k3 - k2^2 = {k1 * k3 - k2 * k2:.3e} < 0")


def _pressure(params: PoroParams, p=None) -> float:
    p = params.p if p is None else p
    if p is None:
        raise InvalidParams("pressure p is not set")
    return float(p)


def psi(params: PoroParams, m, eps, p=None):
    al, a, b = params.alpha, params.a_ratio, params.b_couple
    p = _pressure(params, p)
    m = np.asarray(m, dtype=float)
    eps = np.asarray(eps, dtype=float)
    return (al / 12.0 * m**2 * (3 * m**2 - 8 * b * eps * m + 6 * b**2 * eps**2) + p * eps + 0.5 * eps**2
            + 0.5 * a * (m - b * eps) ** 2)


def _psi_monomials(params: PoroParams, p):
    """Psi as ``sum c * m^i * eps^j``, listed as ``(c, i, j)``."""
    al, a, b = params.alpha, params.a_ratio, params.b_couple
    return (
        (al / 4.0, 4, 0), (-2.0 * al * b / 3.0, 3, 1), (al * b * b / 2.0, 2, 2),
        (p, 0, 1), (0.5 + 0.5 * a * b * b, 0, 2), (0.5 * a, 2, 0), (-a * b, 1, 1),
    )


def psi_increment(params: PoroParams, m, eps, dm, deps, p=None):
    """``Psi(m + dm, eps + deps) - Psi(m, eps)`` without cancellation.

    Expands every monomial binomially so that each term carries at least one
    power of the increment; accurate relative to the increment itself, which
    matters close to a phase where the difference is far below ``|Psi|``.
    """
    p = _pressure(params, p)
    m, eps, dm, deps = (np.asarray(x, dtype=float) for x in (m, eps, dm, deps))
    out = np.zeros(np.broadcast(m, eps, dm, deps).shape)
    for c, i, j in _psi_monomials(params, p):
        for r in range(i + 1):
            for s in range(j + 1):
                if r == s == 0:
                    continue
                out = out + (c * math.comb(i, r) * math.comb(j, s)) * m ** (i - r) * eps ** (j - s) * dm**r * deps**s
    return out


def psi_gradient(params: PoroParams, m, eps, p=None):
    """``(dPsi/dm, dPsi/deps)``."""
    al, a, b = params.alpha, params.a_ratio, params.b_couple
    p = _pressure(params, p)
    m = np.asarray(m, dtype=float)
    eps = np.asarray(eps, dtype=float)
    d = m - b * eps
    g_m = al * m * d**2 + a * d
    g_eps = -(2.0 / 3.0) * al * b * m**3 + al * b**2 * m**2 * eps + p + eps - a * b * d
    return g_m, g_eps


def psi_hessian(params: PoroParams, m, eps):
    """``(Psi_mm, Psi_meps, Psi_epseps)``; independent of ``p``."""
    al, a, b = params.alpha, params.a_ratio, params.b_couple
    m = np.asarray(m, dtype=float)
    eps = np.asarray(eps, dtype=float)
    h_mm = 3 * al * m**2 - 4 * al * b * m * eps + al * b**2 * eps**2 + a
    h_me = -2 * al * b * m**2 + 2 * al * b**2 * m * eps - a * b
    h_ee = al * b**2 * m**2 + 1.0 + a * b**2
    return h_mm, h_me, h_ee


# ---------------------------------------------------------------- phases

@dataclass(frozen=True)
class PhasePoint:
    m: float
    eps: float
    psi: float
    kind: str  # "standard" or "fluid_rich"


@dataclass(frozen=True)
class CriticalPoint:
    m: float
    eps: float
    psi: float
    det_hessian: float
    kind: str  # "minimum", "saddle" or "maximum"


def _newton_critical(params, m, eps, p, max_iter=100):
    """Vectorised Newton on grad Psi = 0; returns (m, eps, converged)."""
    m = np.array(m, dtype=float)
    eps = np.array(eps, dtype=float)
    live = np.ones(m.shape, dtype=bool)
    bad = np.zeros(m.shape, dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            g_m, g_e = psi_gradient(params, m, eps, p)
            h_mm, h_me, h_ee = psi_hessian(params, m, eps)
            det = h_mm * h_ee - h_me * h_me
            dm = -(h_ee * g_m - h_me * g_e) / det
            de = -(h_mm * g_e - h_me * g_m) / det
            # cap wild steps from near-singular Hessians
            size = np.hypot(dm, de)
            cap = np.where(size > 1.0, 1.0 / size, 1.0)
            live &= np.isfinite(size)
            bad |= ~np.isfinite(size)
            m = np.where(live, m + cap * dm, m)
            eps = np.where(live, eps + cap * de, eps)
            live &= size > 1e-15 * (1.0 + abs(m) + abs(eps))
            if not live.any():
                break
        g_m, g_e = psi_gradient(params, m, eps, p)
        # a small gradient alone also admits near-critical "ghost" points close to a fold
        ok = ~live & ~bad & np.isfinite(m) & np.isfinite(eps) & (np.maximum(abs(g_m), abs(g_e)) <= PHASE_TOL)
    return m, eps, ok


def _polish(params, m, eps, p):
    m, eps, ok = _newton_critical(params, [m], [eps], p)
    if not ok[0]:
        raise NoPhaseFound(f"Newton lost the critical point near (m, eps) = ({m[0]:.6g}, {eps[0]:.6g})")
    return float(m[0]), float(eps[0])


def critical_points(params: PoroParams, p=None, n_starts: int = N_STARTS) -> list[CriticalPoint]:
    """All critical points of Psi reached from the multistart grid, sorted by m."""
    p = _pressure(params, p)
    b = params.b_couple
    mm, ee = np.meshgrid(np.linspace(BOX_M[0] * b, BOX_M[1] * b, n_starts),
                         np.linspace(BOX_EPS[0], BOX_EPS[1], n_starts), indexing="ij")
    m, eps, ok = _newton_critical(params, mm.ravel(), ee.ravel(), p)
    found: list[tuple[float, float]] = []
    for mi, ei in zip(m[ok], eps[ok]):
        if not any(math.hypot(mi - fm, ei - fe) < DEDUP_TOL for fm, fe in found):
            found.append((float(mi), float(ei)))
    out = []
    for mi, ei in sorted(found):
        h_mm, h_me, h_ee = psi_hessian(params, mi, ei)
        det = float(h_mm * h_ee - h_me * h_me)
        if det > 0:
            kind = "minimum" if h_mm + h_ee > 0 else "maximum"
        else:
            kind = "saddle"
        out.append(CriticalPoint(mi, ei, float(psi(params, mi, ei, p)), det, kind))
    return out


def find_phases(params: PoroParams, p=None, n_starts: int = N_STARTS) -> list[PhasePoint]:
    """Local minima of Psi: ``[standard]`` or ``[standard, fluid_rich]``.

    With more than two minima the outermost two in ``m`` are returned.
    """
    p = _pressure(params, p)
    mins = [c for c in critical_points(params, p, n_starts) if c.kind == "minimum"]
    if not mins:
        raise NoPhaseFound(f"no local minimum of Psi at p={p}")
    phases = [PhasePoint(mins[0].m, mins[0].eps, mins[0].psi, "standard")]
    if len(mins) > 1:
        phases.append(PhasePoint(mins[-1].m, mins[-1].eps, mins[-1].psi, "fluid_rich"))
    return phases


def _two_phases(params, p):
    return len(find_phases(params, p)) == 2


def _scan_pressures(p_range, n_scan):
    lo, hi = p_range
    if not 0 <= lo < hi:
        raise InvalidParams("pressure range must satisfy 0 <= lo < hi")
    return np.linspace(lo, hi, n_scan)


def find_critical_pressure(params: PoroParams, p_range=(0.0, 2.0), n_scan: int = 81, p_tol: float = P_TOL) -> float:
    """Pressure at which the fluid-rich minimum appears.

    A coarse scan locates the first change of the two-minima indicator, then
    bisection narrows it to relative width ``p_tol``.  Either side of the
    returned value may be the two-phase side.
    """
    grid = _scan_pressures(p_range, n_scan)
    flags = [_two_phases(params, p) for p in grid]
    for i in range(n_scan - 1):
        if flags[i] != flags[i + 1]:
            break
    else:
        raise BracketFailure(f"two-minima indicator never changes on p in {p_range}")
    lo, hi = float(grid[i]), float(grid[i + 1])
    f_lo = flags[i]
    while hi - lo > p_tol * max(abs(hi), 1e-300):
        mid = 0.5 * (lo + hi)
        if _two_phases(params, mid) == f_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_coexistence_pressure(params: PoroParams, p_range=(0.0, 2.0), n_scan: int = 81,
                              p_tol: float = P_TOL) -> float:
    """Pressure where standard and fluid-rich phases have equal Psi.

    The scan keeps pressures with two minima and looks for a sign change of
    ``Psi_s - Psi_f``; the root is then polished with Brent's method while the
    two phases are tracked by Newton from the bracket end.  Nothing assumes
    the root lies above the critical pressure.
    """
    grid = _scan_pressures(p_range, n_scan)
    rows = []
    for p in grid:
        phases = find_phases(params, p)
        if len(phases) == 2:
            rows.append((float(p), phases[0], phases[1]))
    for (p0, s0, f0), (p1, _, _) in zip(rows, rows[1:]):
        if not math.isclose(p1 - p0, grid[1] - grid[0], rel_tol=1e-9):
            continue
        d0 = s0.psi - f0.psi
        d1 = _psi_gap(params, p1, s0, f0)
        if d0 == 0:
            return p0
        if d0 * d1 < 0:
            break
    else:
        raise BracketFailure(f"Psi_s - Psi_f does not change sign on p in {p_range}")

    def gap(p):
        return _psi_gap(params, p, s0, f0)

    return brentq(gap, p0, p1, xtol=p_tol * p1, rtol=4 * np.finfo(float).eps)


def _psi_gap(params, p, s_seed, f_seed):
    ms, es = _polish(params, s_seed.m, s_seed.eps, p)
    mf, ef = _polish(params, f_seed.m, f_seed.eps, p)
    if math.hypot(ms - mf, es - ef) < DEDUP_TOL:
        raise BranchJump("phase tracking merged the two phases")
    return float(psi(params, ms, es, p) - psi(params, mf, ef, p))


def coexisting_phases(params: PoroParams) -> tuple[float, PhasePoint, PhasePoint]:
    """``(p, standard, fluid_rich)`` at ``params.p``, or at p_co when unset."""
    p = params.p if params.p is not None else find_coexistence_pressure(params)
    phases = find_phases(params, p)
    if len(phases) != 2:
        raise NoPhaseFound(f"expected two phases at p={p}, found {len(phases)}")
    return p, phases[0], phases[1]


# ------------------------------------------------------- degenerate reduction

def rotate(lam, m, eps):
    """``(xi, eta)`` from ``(m, eps)``."""
    s = math.sqrt(1.0 + lam * lam)
    m = np.asarray(m, dtype=float)
    eps = np.asarray(eps, dtype=float)
    return (m + lam * eps) / s, (-lam * m + eps) / s


def unrotate(lam, xi, eta):
    """``(m, eps)`` from ``(xi, eta)``."""
    s = math.sqrt(1.0 + lam * lam)
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    return (xi - lam * eta) / s, (lam * xi + eta) / s


def u_rotated(params, lam, xi, eta, p=None):
    m, eps = unrotate(lam, xi, eta)
    return psi(params, m, eps, p)


def u_rotated_gradient(params, lam, xi, eta, p=None):
    """``(dU/dxi, dU/deta)``."""
    s = math.sqrt(1.0 + lam * lam)
    m, eps = unrotate(lam, xi, eta)
    g_m, g_e = psi_gradient(params, m, eps, p)
    return (g_m + lam * g_e) / s, (-lam * g_m + g_e) / s


def u_rotated_hessian(params, lam, xi, eta):
    """``(U_xixi, U_xieta, U_etaeta)``."""
    s2 = 1.0 + lam * lam
    m, eps = unrotate(lam, xi, eta)
    h_mm, h_me, h_ee = psi_hessian(params, m, eps)
    u_xx = (h_mm + 2 * lam * h_me + lam * lam * h_ee) / s2
    u_xe = (-lam * h_mm + (1 - lam * lam) * h_me + lam * h_ee) / s2
    u_ee = (lam * lam * h_mm - 2 * lam * h_me + h_ee) / s2
    return u_xx, u_xe, u_ee


def _solve_eta(params, lam, p, xi, eta, max_iter=50):
    """Vectorised Newton for ``dU/deta(xi, eta) = 0`` from the seed ``eta``."""
    xi = np.asarray(xi, dtype=float)
    eta = np.array(eta, dtype=float)
    for _ in range(max_iter):
        _, g = u_rotated_gradient(params, lam, xi, eta, p)
        _, _, h = u_rotated_hessian(params, lam, xi, eta)
        step = g / h
        eta = eta - step
        if np.all(abs(step) <= 1e-15 * np.maximum(1.0, abs(eta))):
            break
    _, g = u_rotated_gradient(params, lam, xi, eta, p)
    return eta, g


@dataclass(frozen=True)
class ReducedPotential:
    """Effective one-field potential along the constraint branch.

    ``u_eff(xi) = U(xi, eta(xi)) - Psi_s``.  The one-field variable used by
    :meth:`as_potential` is ``orientation * xi`` so that the standard phase is
    the left minimum.
    """

    params: PoroParams
    p: float
    lam: float
    xi_s: float
    eta_s: float
    xi_f: float
    eta_f: float
    psi_offset: float
    mass_coeff: float
    orientation: int
    xi_table: np.ndarray
    eta_table: np.ndarray

    @property
    def span(self) -> float:
        return abs(self.xi_f - self.xi_s)

    @property
    def psi_f_gap(self) -> float:
        """``Psi_f - Psi_s``; zero up to the tolerance on p_co."""
        return float(u_rotated(self.params, self.lam, self.xi_f, self.eta_f, self.p) - self.psi_offset)

    def eta_branch(self, xi):
        """eta on the constraint branch: table interpolation plus Newton polish."""
        xi = np.asarray(xi, dtype=float)
        seed = np.interp(xi, self.xi_table, self.eta_table)
        eta, _ = _solve_eta(self.params, self.lam, self.p, xi, seed)
        return eta

    # within this fraction of the span a phase is modelled by its cubic Taylor
    # polynomial; the rounded phase point sits ~1e-17 off the true minimum, and
    # the linear term that leaves dominates u_eff once |xi - xi_phase| < ~1e-9
    taylor_zone = 1e-6

    @cached_property
    def _taylor(self):
        """(curvature, third derivative) of ``u_eff`` at the standard and fluid phases."""
        h = 1e-3 * self.span
        out = []
        for x0 in (self.xi_s, self.xi_f):
            c2 = float(self.d2u_eff(np.array([x0]))[0])
            dp, dm = self.d2u_eff(np.array([x0 + h, x0 - h]))
            out.append((c2, float(dp - dm) / (2.0 * h)))
        return tuple(out)

    def _near_phase(self, xi):
        near_f = np.abs(xi - self.xi_f) < np.abs(xi - self.xi_s)
        x0 = np.where(near_f, self.xi_f, self.xi_s)
        (c2s, c3s), (c2f, c3f) = self._taylor
        c2 = np.where(near_f, c2f, c2s)
        c3 = np.where(near_f, c3f, c3s)
        t = xi - x0
        inside = np.abs(t) < self.taylor_zone * self.span
        return near_f, x0, t, c2, c3, inside

    def u_eff(self, xi):
        """``U(xi, eta(xi)) - Psi_s``, expanded about the nearer phase.

        Near a phase the value is far below ``|Psi|``; the increment form keeps
        it relatively accurate, and inside ``taylor_zone`` the cubic Taylor
        model makes each phase an exact zero and minimum.  The residual
        ``psi_f_gap`` is rounding in ``p_co`` and is dropped.
        """
        xi = np.asarray(xi, dtype=float)
        eta = self.eta_branch(xi)
        near_f, xi0, t, c2, c3, inside = self._near_phase(xi)
        eta0 = np.where(near_f, self.eta_f, self.eta_s)
        m0, e0 = unrotate(self.lam, xi0, eta0)
        dm, de = unrotate(self.lam, xi - xi0, eta - eta0)
        out = psi_increment(self.params, m0, e0, dm, de, self.p)
        return np.where(inside, t * t * (0.5 * c2 + t * c3 / 6.0), out)

    def du_eff(self, xi):
        """Derivative along the branch; equals dU/dxi because dU/deta = 0 there."""
        xi = np.asarray(xi, dtype=float)
        g, _ = u_rotated_gradient(self.params, self.lam, xi, self.eta_branch(xi), self.p)
        _, _, t, c2, c3, inside = self._near_phase(xi)
        return np.where(inside, t * (c2 + 0.5 * t * c3), g)

    def d2u_eff(self, xi):
        """Second derivative along the branch, ``U_xixi - U_xieta^2 / U_etaeta``.

        Exact by implicit differentiation of ``dU/deta(xi, eta(xi)) = 0``.
        """
        u_xx, u_xe, u_ee = u_rotated_hessian(self.params, self.lam, xi, self.eta_branch(xi))
        return u_xx - u_xe * u_xe / u_ee

    def d2u_eff_fd(self, xi, step_frac: float = 1e-4):
        """Five-point central second difference of ``u_eff`` with one Richardson level."""
        h = step_frac * self.span
        xi = np.asarray(xi, dtype=float)

        def d2(step):
            f = [self.u_eff(xi + j * step) for j in (-2, -1, 0, 1, 2)]
            return (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12.0 * step * step)

        return (16.0 * d2(0.5 * h) - d2(h)) / 15.0

    def curvatures(self) -> tuple[float, float]:
        """Curvature of ``u_eff`` at the standard and fluid-rich phases."""
        c = self.d2u_eff(np.array([self.xi_s, self.xi_f]))
        return float(c[0]), float(c[1])

    def to_fields(self, xi):
        """``(m, eps)`` along the branch at the given xi."""
        return unrotate(self.lam, xi, self.eta_branch(xi))

    def as_potential(self) -> DoubleWellPotential:
        o = self.orientation

        def v(u):
            return self.u_eff(o * np.asarray(u, dtype=float))

        def dv(u):
            return o * self.du_eff(o * np.asarray(u, dtype=float))

        def d2v(u):
            return self.d2u_eff(o * np.asarray(u, dtype=float))

        return DoubleWellPotential(
            v, o * self.xi_s, o * self.xi_f, dv, d2v, fd_step=1e-4 * self.span, name="poro-effective",
            params={"p": self.p, "lam": self.lam},
        )


def reduce_degenerate(params: PoroParams, steps: int = 2000, extension: float = 0.1) -> ReducedPotential:
    """Rotate the degenerate two-field problem to its one-field potential.

    The constraint branch is tabulated by Newton continuation in xi from the
    standard phase, with step ``(xi_f - xi_s) / steps``, extended by
    ``extension`` of the span past both phases.
    """
    if not params.is_degenerate:
        raise NotDegenerate(
            f"k1*k3 - k2^2 = {params.k1 * params.k3 - params.k2 ** 2:.3e} is not zero (k2={params.k2})"
        )
    lam = params.k1 / params.k2
    p, s, f = coexisting_phases(params)
    xi_s, eta_s = (float(v) for v in rotate(lam, s.m, s.eps))
    xi_f, eta_f = (float(v) for v in rotate(lam, f.m, f.eps))
    span = abs(xi_f - xi_s)
    d = math.copysign(span / steps, xi_f - xi_s)
    n_ext = int(math.ceil(extension * steps))

    def march(eta0, n_steps, direction):
        xis, etas = [], []
        eta = eta0
        for j in range(1, n_steps + 1):
            xi = xi_s + direction * j * d
            eta_new, g = _solve_eta(params, lam, p, xi, eta)
            _, _, h = u_rotated_hessian(params, lam, xi, eta_new)
            if not (abs(g) <= CONSTRAINT_TOL and h > 0 and abs(eta_new - eta) < 0.05 * span + 1e-3):
                raise BranchJump(f"constraint branch lost at xi={xi:.6g} (U_etaeta={float(h):.3e})")
            eta = float(eta_new)
            xis.append(xi)
            etas.append(eta)
        return xis, etas

    fwd_x, fwd_e = march(eta_s, steps + n_ext, +1)
    back_x, back_e = march(eta_s, n_ext, -1)
    if abs(fwd_e[steps - 1] - eta_f) > 1e-8 * max(1.0, abs(eta_f)):
        raise BranchJump(
            f"standard and fluid-rich phases are on different branches (eta {fwd_e[steps - 1]:.8g} vs {eta_f:.8g})"
        )
    xi_tab = np.array(back_x[::-1] + [xi_s] + fwd_x)
    eta_tab = np.array(back_e[::-1] + [eta_s] + fwd_e)
    if d < 0:
        xi_tab, eta_tab = xi_tab[::-1], eta_tab[::-1]
    return ReducedPotential(
        params=params, p=p, lam=lam, xi_s=xi_s, eta_s=eta_s, xi_f=xi_f, eta_f=eta_f, psi_offset=s.psi,
        mass_coeff=params.k3 * (1.0 + lam * lam), orientation=1 if xi_f > xi_s else -1,
        xi_table=xi_tab, eta_table=eta_tab,
    )


def predict_interface(params: PoroParams, ell: float = 1.0) -> float:
    """Sharp-interface position of the degenerate two-field kink.

    The standard phase sits at ``x = 0``.
    """
    return limit_position(reduce_degenerate(params).as_potential(), ell)


def branch_derivative_check(reduced: ReducedPotential, xi) -> np.ndarray:
    """``d(u_eff)/dxi`` by finite differences minus ``dU/dxi`` on the branch."""
    fd = _fd_first(reduced.u_eff, np.asarray(xi, dtype=float), 1e-4 * reduced.span)
    return fd - reduced.du_eff(xi)
