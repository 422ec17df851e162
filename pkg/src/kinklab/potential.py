"""Double-well potentials: the abstraction, validation, and the builtin benchmarks.

A :class:`DoubleWellPotential` wraps a vectorised energy density ``v`` with two
degenerate zero minima ``min_a < min_b``.  Derivatives are optional; when they
are missing, central differences with one Richardson level are used.

The builtins are written so that ``v`` keeps *relative* accuracy close to the
minima.  The kink solvers resolve exponentially small tails near the phases and
an absolute rounding error of 1e-16 in ``v`` would dominate there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Optional

import mpmath
import numpy as np

from kinklab.errors import InvalidParams, NonPositiveCurvature

TOL_ZERO = 1e-9

ArrayFn = Callable[[np.ndarray], np.ndarray]


def _fd_first(v: ArrayFn, u, h: float):
    d_h = (v(u + h) - v(u - h)) / (2.0 * h)
    h2 = 0.5 * h
    d_h2 = (v(u + h2) - v(u - h2)) / (2.0 * h2)
    return (4.0 * d_h2 - d_h) / 3.0


def _fd_second(v: ArrayFn, u, h: float):
    v0 = v(u)
    d_h = (v(u + h) - 2.0 * v0 + v(u - h)) / (h * h)
    h2 = 0.5 * h
    d_h2 = (v(u + h2) - 2.0 * v0 + v(u - h2)) / (h2 * h2)
    return (4.0 * d_h2 - d_h) / 3.0


@dataclass(frozen=True)
class DoubleWellPotential:
    """Energy density with degenerate zero minima at ``min_a`` and ``min_b``.

    ``v``, ``dv`` and ``d2v`` must accept and return numpy arrays.  Solvers only
    evaluate inside ``[min_a, min_b]``; evaluation outside is allowed but
    unchecked.

    ``mp_derivatives``, when given, maps an ``mpmath.mpf`` to ``(V', V'')``
    at the current mpmath precision; the extended-precision BVP solver uses it.
    """

    v: ArrayFn
    min_a: float
    min_b: float
    dv: Optional[ArrayFn] = None
    d2v: Optional[ArrayFn] = None
    fd_step: Optional[float] = None
    name: str = "custom"
    params: dict = field(default_factory=dict, compare=False)
    mp_derivatives: Optional[Callable] = field(default=None, compare=False)

    def __post_init__(self):
        if not self.min_a < self.min_b:
            raise InvalidParams(f"need min_a < min_b, got {self.min_a} >= {self.min_b}")
        if self.fd_step is None:
            object.__setattr__(self, "fd_step", (self.min_b - self.min_a) * 1e-5)
        elif not self.fd_step > 0:
            raise InvalidParams("fd_step must be positive")

    def __call__(self, u):
        return self.v(np.asarray(u, dtype=float))

    def first_derivative(self, u):
        u = np.asarray(u, dtype=float)
        if self.dv is not None:
            return self.dv(u)
        return _fd_first(self.v, u, self.fd_step)

    def second_derivative(self, u):
        u = np.asarray(u, dtype=float)
        if self.d2v is not None:
            return self.d2v(u)
        return _fd_second(self.v, u, self.fd_step)

    def fd_second_derivative(self, u):
        """Finite-difference V'' regardless of whether ``d2v`` is supplied."""
        return _fd_second(self.v, np.asarray(u, dtype=float), self.fd_step)

    @cached_property
    def raw_curvatures(self) -> tuple[float, float]:
        """(V''(min_a), V''(min_b)) without the positivity check."""
        c = self.second_derivative(np.array([self.min_a, self.min_b]))
        return float(c[0]), float(c[1])

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.min_a + self.min_b)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __str__(self):
        lines = [
            f"{'PASS' if c.passed else 'FAIL'}  {c.name:<14} {c.measured:+.6e}  {c.detail}"
            for c in self.checks
        ]
        return "\n".join(lines)


def validate(pot: DoubleWellPotential, n_samples: int = 257, tol_zero: float = TOL_ZERO) -> ValidationReport:
    """Check the double-well conditions by sampling; never raises on failure."""
    if n_samples < 16:
        raise ValueError("n_samples must be at least 16")
    a, b = pot.min_a, pot.min_b
    checks = [Check("ordering", a < b, b - a, "min_b - min_a")]

    va, vb = (float(x) for x in pot(np.array([a, b])))
    worst = max(abs(va), abs(vb))
    checks.append(Check("zero_minima", worst <= tol_zero, worst, f"max(|v(a)|,|v(b)|) vs {tol_zero:g}"))

    ca, cb = pot.raw_curvatures
    checks.append(Check("curvature", bool(ca > 0 and cb > 0), min(ca, cb), f"V''(a)={ca:.6g}, V''(b)={cb:.6g}"))

    s = np.linspace(a, b, n_samples + 2)[1:-1]
    guard = pot.fd_step
    s = s[(s - a > guard) & (b - s > guard)]
    vs = pot(s)
    vmin = float(np.min(vs)) if s.size else math.inf
    checks.append(Check("positivity", bool(np.all(vs > 0)), vmin, f"min over {s.size} interior samples"))
    return ValidationReport(tuple(checks))


def curvature_at_minima(pot: DoubleWellPotential) -> tuple[float, float]:
    ca, cb = pot.raw_curvatures
    if not (ca > 0 and cb > 0):
        raise NonPositiveCurvature(f"V''(a)={ca!r}, V''(b)={cb!r}")
    return ca, cb


# --- builtins -------------------------------------------------------------


def build_quartic(scale: float = 1.0) -> DoubleWellPotential:
    """``scale * (1 - u^2)^2 / 2`` with minima at -1 and +1."""
    if not scale > 0:
        raise InvalidParams("scale must be positive")

    def v(u):
        return 0.5 * scale * ((1.0 - u) * (1.0 + u)) ** 2

    def dv(u):
        return -2.0 * scale * u * (1.0 - u) * (1.0 + u)

    def d2v(u):
        return scale * (6.0 * u * u - 2.0)

    def mp_derivs(u):
        return -2 * scale * u * (1 - u) * (1 + u), scale * (6 * u * u - 2)

    return DoubleWellPotential(v, -1.0, 1.0, dv, d2v, name="quartic", params={"scale": scale},
                               mp_derivatives=mp_derivs)


@dataclass(frozen=True)
class RatchetCMParams:
    omega0: float = 1.0
    b1: float = 1.0
    b2: float = 5.0
    u0: float = 0.5


def build_ratchet_cm(p: RatchetCMParams) -> DoubleWellPotential:
    """Asymmetric exponential double well with zeros at -1 and +1.

    ``v = g**2`` with ``g = N1 N2 / (omega0 D1 D2)``; all factors use ``expm1``
    so ``v`` is relatively accurate near both minima.
    """
    if p.omega0 == 0 or not math.isfinite(p.omega0):
        raise InvalidParams("omega0 must be finite and non-zero")
    if not (p.b1 > 0 and p.b2 > 0):
        raise InvalidParams("b1 and b2 must be positive")
    if not -1.0 < p.u0 < 1.0:
        raise InvalidParams("u0 must lie strictly between -1 and 1")
    b1, b2 = p.b1, p.b2
    norm = p.omega0 * math.expm1(b1 * (p.u0 - 1.0)) * math.expm1(-b2 * (p.u0 + 1.0))

    def g_parts(u):
        e1 = np.exp(b1 * (u - 1.0))
        e2 = np.exp(-b2 * (u + 1.0))
        n1 = -np.expm1(b1 * (u - 1.0))
        n2 = -np.expm1(-b2 * (u + 1.0))
        g = n1 * n2 / norm
        g1 = (-b1 * e1 * n2 + n1 * b2 * e2) / norm
        g2 = (-b1 * b1 * e1 * n2 - 2.0 * b1 * b2 * e1 * e2 - n1 * b2 * b2 * e2) / norm
        return g, g1, g2

    def v(u):
        n1 = -np.expm1(b1 * (u - 1.0))
        n2 = -np.expm1(-b2 * (u + 1.0))
        g = n1 * n2 / norm
        return g * g

    def dv(u):
        g, g1, _ = g_parts(u)
        return 2.0 * g * g1

    def d2v(u):
        g, g1, g2 = g_parts(u)
        return 2.0 * (g1 * g1 + g * g2)

    def mp_derivs(u):
        mb1, mb2 = mpmath.mpf(b1), mpmath.mpf(b2)
        mnorm = p.omega0 * mpmath.expm1(mb1 * (mpmath.mpf(p.u0) - 1)) * mpmath.expm1(-mb2 * (mpmath.mpf(p.u0) + 1))
        e1 = mpmath.exp(mb1 * (u - 1))
        e2 = mpmath.exp(-mb2 * (u + 1))
        n1 = -mpmath.expm1(mb1 * (u - 1))
        n2 = -mpmath.expm1(-mb2 * (u + 1))
        g = n1 * n2 / mnorm
        g1 = (-mb1 * e1 * n2 + n1 * mb2 * e2) / mnorm
        g2 = (-mb1 * mb1 * e1 * n2 - 2 * mb1 * mb2 * e1 * e2 - n1 * mb2 * mb2 * e2) / mnorm
        return 2 * g * g1, 2 * (g1 * g1 + g * g2)

    params = {"omega0": p.omega0, "b1": p.b1, "b2": p.b2, "u0": p.u0}
    return DoubleWellPotential(v, -1.0, 1.0, dv, d2v, name="ratchet-cm", params=params, mp_derivatives=mp_derivs)


_SIN_SERIES = tuple((-1) ** j / math.factorial(2 * j + 1) for j in range(1, 8))


def _sin_minus_identity(x):
    """``sin(x) - x`` without cancellation for small ``|x|``."""
    x = np.asarray(x, dtype=float)
    out = np.sin(x) - x
    small = np.abs(x) < 0.5
    if np.any(small):
        xs = x[small]
        x2 = xs * xs
        acc = np.zeros_like(xs)
        for c in reversed(_SIN_SERIES):
            acc = acc * x2 + c
        out[small] = acc * x2 * xs
    return out


@dataclass(frozen=True)
class RockedRatchetParams:
    a_period: float = 1.0

    @property
    def sigma(self) -> float:
        a = self.a_period
        return 1.0 / ((a / (8.0 * math.pi)) * math.sqrt(math.sqrt(3.0) / 2.0) * (3.0 + math.sqrt(3.0)))

    @property
    def u0(self) -> float:
        return (self.a_period / (2.0 * math.pi)) * math.acos((math.sqrt(3.0) - 1.0) / 2.0)

    @property
    def offset(self) -> float:
        # +2*pi/a: the sign that makes v vanish at the minima
        return 2.0 * math.pi / self.a_period

    @property
    def min_curvature(self) -> float:
        return 16.0 * (math.sqrt(3.0) - 1.0) * math.pi**3 / self.a_period**3


def build_rocked_ratchet(p: RockedRatchetParams) -> DoubleWellPotential:
    """Standard rocked-ratchet potential restricted to the period ``[0, a]``.

    ``v`` is evaluated as an expansion around the nearest minimum so that it
    stays relatively accurate there; the raw two-sine form loses everything
    below ~1e-15 to cancellation against the additive constant.
    """
    a = p.a_period
    if not (a > 0 and math.isfinite(a)):
        raise InvalidParams("a_period must be positive")
    sigma = p.sigma
    two_pi_a = 2.0 * math.pi / a
    theta_m = -two_pi_a * p.u0
    s1, c1 = math.sin(theta_m), math.cos(theta_m)
    s2, c2 = math.sin(2 * theta_m), math.cos(2 * theta_m)

    def v(u):
        r = u - a * np.round(u / a)
        phi = two_pi_a * r
        half = np.sin(0.5 * phi)
        full = np.sin(phi)
        # cos(x) - 1 = -2 sin^2(x/2); the terms linear in phi cancel exactly
        val = (
            -2.0 * s1 * half * half
            - 0.5 * s2 * full * full
            + c1 * _sin_minus_identity(phi)
            + 0.25 * c2 * _sin_minus_identity(2.0 * phi)
        )
        return sigma * val

    def dv(u):
        th = two_pi_a * (u - p.u0)
        return sigma * two_pi_a * (np.cos(th) + 0.5 * np.cos(2.0 * th))

    def d2v(u):
        th = two_pi_a * (u - p.u0)
        return -sigma * two_pi_a**2 * (np.sin(th) + np.sin(2.0 * th))

    def mp_derivs(u):
        m_sigma, m_u0, m_k = _rocked_mp_constants(a, mpmath.mp.prec)
        th = m_k * (u - m_u0)
        return (m_sigma * m_k * (mpmath.cos(th) + mpmath.cos(2 * th) / 2),
                -m_sigma * m_k**2 * (mpmath.sin(th) + mpmath.sin(2 * th)))

    return DoubleWellPotential(v, 0.0, a, dv, d2v, name="rocked-ratchet", params={"a_period": a},
                               mp_derivatives=mp_derivs)


@lru_cache(maxsize=32)
def _rocked_mp_constants(a, prec):
    # sigma, u0 and 2 pi / a at the working precision, so that the minima are
    # exact equilibria of the extended-precision equations
    with mpmath.workprec(prec):
        a = mpmath.mpf(a)
        sqrt3 = mpmath.sqrt(3)
        sigma = 1 / ((a / (8 * mpmath.pi)) * mpmath.sqrt(sqrt3 / 2) * (3 + sqrt3))
        u0 = (a / (2 * mpmath.pi)) * mpmath.acos((sqrt3 - 1) / 2)
        return sigma, u0, 2 * mpmath.pi / a


def rocked_ratchet_raw(p: RockedRatchetParams) -> Callable[[np.ndarray], np.ndarray]:
    """The literal two-sine formula; used to cross-check the stable form."""
    a, sigma, u0, R = p.a_period, p.sigma, p.u0, p.offset

    def v(u):
        th = 2.0 * math.pi / a * (np.asarray(u, dtype=float) - u0)
        return sigma * np.sin(th) + 0.25 * sigma * np.sin(2.0 * th) + R

    return v


def scaled(pot: DoubleWellPotential, c: float) -> DoubleWellPotential:
    """``c * V`` with the same minima."""
    if not c > 0:
        raise InvalidParams("scale factor must be positive")
    dv = (lambda u: c * pot.dv(u)) if pot.dv is not None else None
    d2v = (lambda u: c * pot.d2v(u)) if pot.d2v is not None else None
    mp_derivs = None
    if pot.mp_derivatives is not None:
        def mp_derivs(u):
            d1, d2 = pot.mp_derivatives(u)
            return c * d1, c * d2
    return DoubleWellPotential(
        lambda u: c * pot.v(u), pot.min_a, pot.min_b, dv, d2v, pot.fd_step, f"{pot.name}*{c:g}", dict(pot.params),
        mp_derivs,
    )


def potential_from_spec(name: str, params: Optional[dict] = None) -> DoubleWellPotential:
    """Build a builtin potential by its CLI name."""
    params = dict(params or {})
    try:
        if name == "quartic":
            return build_quartic(**params)
        if name == "ratchet-cm":
            return build_ratchet_cm(RatchetCMParams(**params))
        if name == "rocked-ratchet":
            return build_rocked_ratchet(RockedRatchetParams(**params))
    except TypeError as exc:
        raise InvalidParams(f"bad parameters for {name!r}: {exc}") from exc
    if name == "poro-effective":
        from kinklab.poromechanics import PoroParams, reduce_degenerate

        try:
            poro = PoroParams(**params)
        except TypeError as exc:
            raise InvalidParams(f"bad parameters for {name!r}: {exc}") from exc
        return reduce_degenerate(poro).as_potential()
    raise InvalidParams(f"unknown potential {name!r}")
