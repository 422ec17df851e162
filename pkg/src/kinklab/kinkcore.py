"""Stationary kink profiles of ``k^2 u'' = V'(u)`` on ``[0, ell]`` by quadrature.

The profile is the inverse of ``x(u) = k * T(a, u)`` with

    T(lo, hi) = int_lo^hi ds / sqrt(2 (E + V(s)))

and the energy level ``E`` fixed by ``k * T(a, b) = ell``.  As ``k -> 0`` the
level ``E`` becomes exponentially small and the integrand develops peaks of
height ``1/sqrt(2E)`` and width ``sqrt(2E / V'')`` at both minima.

``T`` is therefore evaluated as ``S + R``.  ``S`` integrates the local
quadratic model ``1/sqrt(2E + V''(a) (s-a)^2)`` in closed form (an arcsinh),
on the left half; the right half uses the model at ``b``.  ``R`` is the
bounded remainder and goes to the adaptive quadrature, with forced
subdivisions at dyadic distances from each minimum.  All internal routines
take ``log E`` so that levels below the double-precision range are still
usable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq, minimize_scalar

from kinklab.errors import BracketFailure
from kinklab.potential import DoubleWellPotential, curvature_at_minima
from kinklab.quadrature import integrate_segments

QUAD_TOL = 1e-9
ROOT_RTOL = 1e-10
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class EnergySolution:
    k: float
    ell: float
    e_k: float
    log_e_k: float
    residual: float
    iterations: int


@dataclass(frozen=True)
class KinkProfile:
    xs: np.ndarray
    us: np.ndarray
    k: float
    ell: float
    e_k: float
    log_e_k: float
    interface_x: float
    pot: DoubleWellPotential

    def slopes(self) -> np.ndarray:
        """Exact du/dx at the nodes from the first integral."""
        v = np.maximum(self.pot(self.us), 0.0)
        return np.sqrt(2.0 * (self.e_k + v)) / self.k

    def first_integral(self) -> np.ndarray:
        """``k^2 (du/dx)^2 / 2 - V(u)`` at interior nodes.

        du/dx is the three-point centered difference for uneven spacing, which
        stays second order in the local spacing.
        """
        hm = np.diff(self.xs)[:-1]
        hp = np.diff(self.xs)[1:]
        dm = np.diff(self.us)[:-1]
        dp = np.diff(self.us)[1:]
        du = (hm * hm * dp + hp * hp * dm) / (hm * hp * (hm + hp))
        return 0.5 * self.k**2 * du**2 - self.pot(self.us[1:-1])

    def interpolate(self, x) -> np.ndarray:
        """u(x) by cubic Hermite interpolation with the exact nodal slopes."""
        spline = CubicHermiteSpline(self.xs, self.us, self.slopes())
        x = np.clip(np.asarray(x, dtype=float), self.xs[0], self.xs[-1])
        return spline(x)


@dataclass(frozen=True)
class LocalizationDiagnostics:
    k: float
    ell: float
    e_k: float
    interface_x: float
    predicted_limit: float
    weighted_residual: float
    u1: float
    u2: float
    width_u1_u2: float
    s_a: float
    r_a: float
    s_b: float
    r_b: float
    interface_x_vmax: float


class _TimeIntegrand:
    """S/R split of the profile-time integrand for one potential and level."""

    def __init__(self, pot: DoubleWellPotential, log_e: float):
        self.pot = pot
        self.log_e = log_e
        self.e = math.exp(log_e) if log_e > -745.0 else 0.0
        self.a, self.b = pot.min_a, pot.min_b
        self.mid = pot.midpoint
        self.ca, self.cb = pot.raw_curvatures
        self.floor = 4.0 * _EPS * max(1.0, abs(self.a), abs(self.b))

    def remainder(self, s):
        s = np.asarray(s, dtype=float)
        v = np.maximum(self.pot(s), 0.0)
        level = self.e + v
        with np.errstate(divide="ignore", invalid="ignore"):
            f = 1.0 / np.sqrt(2.0 * level)
            left = s <= self.mid
            t = np.where(left, s - self.a, self.b - s)
            c = np.where(left, self.ca, self.cb)
            model = np.where(c > 0, 2.0 * self.e + np.maximum(c, 0.0) * t * t, np.inf)
            out = f - 1.0 / np.sqrt(model)
        # only reachable at s == a or s == b with E underflowed to zero
        out[~np.isfinite(out)] = 0.0
        return out

    def _s_side(self, t, c):
        """Closed-form integral of the quadratic model from 0 to offset ``t``."""
        t = np.asarray(t, dtype=float)
        if not c > 0:
            return np.zeros_like(t)
        log_q = 0.5 * (math.log(0.5 * c) - self.log_e)
        out = np.zeros_like(t)
        pos = t > 0
        lx = np.log(t[pos]) + log_q
        big = lx > 20.0
        vals = np.empty_like(lx)
        vals[big] = math.log(2.0) + lx[big]
        vals[~big] = np.arcsinh(np.exp(lx[~big]))
        out[pos] = vals / math.sqrt(c)
        return out

    def singular_part(self, lo, hi):
        """Closed-form S over pieces that do not straddle the midpoint."""
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        left = hi <= self.mid
        out = np.empty_like(lo)
        out[left] = self._s_side(hi[left] - self.a, self.ca) - self._s_side(lo[left] - self.a, self.ca)
        r = ~left
        out[r] = self._s_side(self.b - lo[r], self.cb) - self._s_side(self.b - hi[r], self.cb)
        return out

    def breakpoints(self):
        pts = []
        half = self.mid - self.a
        for c, origin, sign in ((self.ca, self.a, 1.0), (self.cb, self.b, -1.0)):
            w = self.floor
            if c > 0:
                w = max(w, math.exp(0.5 * (math.log(2.0) + self.log_e - math.log(c))))
            while w < half:
                pts.append(origin + sign * w)
                w *= 2.0
        return np.array(pts)

    def split(self, edges, tol):
        """(S, R) arrays for the segments delimited by ``edges``."""
        edges = np.asarray(edges, dtype=float)
        pieces = np.union1d(edges, [self.mid]) if edges[0] < self.mid < edges[-1] else edges
        s_piece = self.singular_part(pieces[:-1], pieces[1:])
        r_piece = integrate_segments(self.remainder, pieces, tol, self.breakpoints())
        owner = np.searchsorted(edges, pieces[:-1], side="right") - 1
        nseg = edges.size - 1
        s = np.bincount(owner, weights=s_piece, minlength=nseg)
        r = np.bincount(owner, weights=r_piece, minlength=nseg)
        return s, r


def _check_interval(pot, u_lo, u_hi):
    if not (pot.min_a <= u_lo < u_hi <= pot.min_b):
        raise ValueError(f"need min_a <= u_lo < u_hi <= min_b, got [{u_lo}, {u_hi}]")


def _segment_times(pot, log_e, edges, tol):
    s, r = _TimeIntegrand(pot, log_e).split(edges, tol)
    return s + r


def profile_time(pot: DoubleWellPotential, e: float, u_lo: float, u_hi: float, tol: float = QUAD_TOL) -> float:
    """``int_{u_lo}^{u_hi} du / sqrt(2 (e + V(u)))`` to absolute accuracy ``tol``."""
    if not e > 0:
        raise ValueError("energy level must be positive")
    _check_interval(pot, u_lo, u_hi)
    return float(_segment_times(pot, math.log(e), [u_lo, u_hi], tol)[0])


def _time_tol(k, ell, quad_tol):
    # keeps |k*T - ell| <= quad_tol*ell when k > ell
    return quad_tol * min(1.0, ell / k)


def solve_energy_level(pot: DoubleWellPotential, k: float, ell: float, quad_tol: float = QUAD_TOL,
                       rtol: float = ROOT_RTOL, max_expansions: int = 60) -> EnergySolution:
    """Energy level ``E_k`` with ``k * T(a, b; E_k) = ell``.

    ``k*T - ell`` is strictly decreasing in ``E``; the bracket is grown
    geometrically in ``E`` from ``max V / 2`` and the root is polished with
    Brent's method in ``log E`` (so ``rtol`` is a relative tolerance on ``E``).
    """
    if not (k > 0 and ell > 0):
        raise ValueError("k and ell must be positive")
    a, b = pot.min_a, pot.min_b
    tol = _time_tol(k, ell, quad_tol)

    def g(log_e):
        return k * float(_segment_times(pot, log_e, [a, b], tol)[0]) - ell

    vmax = float(np.max(pot(np.linspace(a, b, 257))))
    t0 = math.log(max(0.5 * vmax, 1e-300))
    lo = hi = t0
    g_lo = g_hi = g(t0)
    step = 1.0
    for _ in range(max_expansions):
        if g_lo > 0:
            break
        hi, g_hi = lo, g_lo
        lo -= step
        step *= 2.0
        if lo < -1e4:
            break
        g_lo = g(lo)
    if not g_lo > 0:
        raise BracketFailure(f"no lower energy bracket for k={k}, ell={ell}")
    step = 1.0
    for _ in range(max_expansions):
        if g_hi < 0:
            break
        lo, g_lo = hi, g_hi
        hi += step
        step *= 2.0
        g_hi = g(hi)
    if not g_hi < 0:
        raise BracketFailure(f"no upper energy bracket for k={k}, ell={ell}")

    root, info = brentq(g, lo, hi, xtol=rtol, rtol=4 * _EPS, full_output=True)
    e_k = math.exp(root) if root > -745.0 else 0.0
    return EnergySolution(k, ell, e_k, root, g(root), info.iterations)


def _u_grid(pot, log_e, n_points):
    a, b, mid = pot.min_a, pot.min_b, pot.midpoint
    ca, cb = pot.raw_curvatures
    floor = 4.0 * _EPS * max(1.0, abs(a), abs(b))
    n_left = n_points // 2 + 1
    n_right = n_points - n_left + 1

    def side(c, half, count):
        # offsets from the minimum, uniform in arcsinh(t sqrt(c / 2E))
        if not c > 0:
            return np.linspace(0.0, half, count)
        log_q = 0.5 * (math.log(0.5 * c) - log_e)
        z_end = _asinh_scaled(half, log_q)
        z = np.linspace(0.0, z_end, count)
        if _sinh_scaled(z[1], log_q) < floor:
            z_start = _asinh_scaled(floor, log_q)
            z = np.concatenate([[0.0], np.linspace(z_start, z_end, count - 1)])
        t = _sinh_scaled(z, log_q)
        t[0], t[-1] = 0.0, half
        return t

    left = a + side(ca, mid - a, n_left)
    right = b - side(cb, b - mid, n_right)[::-1]
    left[-1] = mid
    right[0] = mid
    us = np.concatenate([left, right[1:]])
    us[0], us[-1] = a, b
    us = np.unique(us)
    return us, int(np.searchsorted(us, mid))


def _asinh_scaled(t, log_q):
    lx = math.log(t) + log_q
    return math.log(2.0) + lx if lx > 20.0 else math.asinh(math.exp(lx))


def _sinh_scaled(z, log_q):
    """``sinh(z) / q`` without overflow for large ``q``."""
    z = np.asarray(z, dtype=float)
    zc = np.clip(z, 1e-300, 20.0)
    log_sinh = np.where(z > 20.0, z - math.log(2.0), np.log(np.sinh(zc)))
    return np.exp(log_sinh - log_q) * (z > 0)


def compute_profile(pot: DoubleWellPotential, k: float, ell: float, n_points: int = 1001,
                    energy: Optional[EnergySolution] = None, quad_tol: float = QUAD_TOL) -> KinkProfile:
    """Sample the kink on a u-grid clustered near both minima.

    ``xs[i] = k * T(a, us[i])`` by accumulating segment integrals; the
    midpoint ``(a+b)/2`` is always a node, so the interface position is read
    off directly.
    """
    if n_points < 3:
        raise ValueError("n_points must be at least 3")
    if energy is None:
        energy = solve_energy_level(pot, k, ell, quad_tol)
    us, imid = _u_grid(pot, energy.log_e_k, n_points)
    seg = _segment_times(pot, energy.log_e_k, us, _time_tol(k, ell, quad_tol))
    xs = np.concatenate([[0.0], k * np.cumsum(seg)])
    return KinkProfile(xs, us, k, ell, energy.e_k, energy.log_e_k, float(xs[imid]), pot)


def interface_position(pot: DoubleWellPotential, k: float, ell: float,
                       energy: Optional[EnergySolution] = None, quad_tol: float = QUAD_TOL) -> float:
    """x where the profile crosses ``(a+b)/2``."""
    if energy is None:
        energy = solve_energy_level(pot, k, ell, quad_tol)
    t = _segment_times(pot, energy.log_e_k, [pot.min_a, pot.midpoint], _time_tol(k, ell, quad_tol))
    return float(k * t[0])


def limit_position(pot: DoubleWellPotential, ell: float) -> float:
    """Sharp-interface limit ``ell sqrt(V''(b)) / (sqrt(V''(a)) + sqrt(V''(b)))``."""
    ca, cb = curvature_at_minima(pot)
    return ell * math.sqrt(cb) / (math.sqrt(ca) + math.sqrt(cb))


def weighted_residual(pot: DoubleWellPotential, x_k: float, ell: float) -> float:
    ca, cb = curvature_at_minima(pot)
    return math.sqrt(ca) * x_k - math.sqrt(cb) * (ell - x_k)


def _vmax_location(pot):
    a, b = pot.min_a, pot.min_b
    grid = np.linspace(a, b, 513)
    i = int(np.argmax(pot(grid)))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = minimize_scalar(lambda u: -float(pot(np.array([u]))[0]), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return float(res.x)


def localization_diagnostics(pot: DoubleWellPotential, k: float, ell: float, u1: Optional[float] = None,
                             u2: Optional[float] = None, energy: Optional[EnergySolution] = None,
                             quad_tol: float = QUAD_TOL) -> LocalizationDiagnostics:
    a, b, mid = pot.min_a, pot.min_b, pot.midpoint
    if u1 is None:
        u1 = a + 0.25 * (b - a)
    if u2 is None:
        u2 = a + 0.75 * (b - a)
    if not a < u1 < u2 < b:
        raise ValueError("need min_a < u1 < u2 < min_b")
    if energy is None:
        energy = solve_energy_level(pot, k, ell, quad_tol)
    u_vmax = _vmax_location(pot)
    edges = np.unique([a, u1, u2, mid, u_vmax, b])
    s, r = _TimeIntegrand(pot, energy.log_e_k).split(edges, _time_tol(k, ell, quad_tol))
    cum = np.concatenate([[0.0], np.cumsum(s + r)])

    def at(u):
        return cum[int(np.searchsorted(edges, u))]

    imid = int(np.searchsorted(edges, mid))
    x_k = k * at(mid)
    return LocalizationDiagnostics(
        k=k,
        ell=ell,
        e_k=energy.e_k,
        interface_x=x_k,
        predicted_limit=limit_position(pot, ell),
        weighted_residual=weighted_residual(pot, x_k, ell),
        u1=u1,
        u2=u2,
        width_u1_u2=k * (at(u2) - at(u1)),
        s_a=float(s[:imid].sum()),
        r_a=float(r[:imid].sum()),
        s_b=float(s[imid:].sum()),
        r_b=float(r[imid:].sum()),
        interface_x_vmax=k * at(u_vmax),
    )
