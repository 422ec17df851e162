"""Fast golden-value checks behind ``kinklab selftest``.

Every check is deterministic, so two runs print byte-identical reports.
"""
from __future__ import annotations

import math
import sys

import numpy as np

# curvature of the rocked-ratchet potential at its minima for a_period = 1
GOLDEN_V2_CURVATURE = 16.0 * (math.sqrt(3.0) - 1.0) * math.pi**3
# sharp-interface limit for the exponential ratchet (omega0=1, b1=1, b2=5, u0=0.5)
_E2 = math.exp(2.0)
GOLDEN_CM_LIMIT = (1 + _E2 + _E2**2 + _E2**3 + _E2**4) / (1 + _E2 + _E2**2 + _E2**3 + 6 * _E2**4)


def _rel(a, b):
    return abs(a - b) / abs(b)


def _checks():
    from kinklab.bvp import FdGrid, TwoFieldState, solve_one_field, solve_two_field
    from kinklab.kinkcore import compute_profile, interface_position, limit_position
    from kinklab.poromechanics import PoroParams, find_phases, psi
    from kinklab.potential import (
        RatchetCMParams, RockedRatchetParams, build_quartic, build_ratchet_cm, build_rocked_ratchet,
        curvature_at_minima, validate,
    )

    quartic = build_quartic()
    cm = build_ratchet_cm(RatchetCMParams())
    rr = build_rocked_ratchet(RockedRatchetParams())

    ca, cb = curvature_at_minima(quartic)
    yield "quartic curvatures", max(abs(ca - 4.0), abs(cb - 4.0)), 1e-12

    c_rr = rr.second_derivative(np.array([0.0, 1.0]))
    yield "rocked-ratchet curvature (analytic)", float(max(_rel(c, GOLDEN_V2_CURVATURE) for c in c_rr)), 1e-6
    c_fd = rr.fd_second_derivative(np.array([0.0, 1.0]))
    yield "rocked-ratchet curvature (finite diff)", float(max(_rel(c, GOLDEN_V2_CURVATURE) for c in c_fd)), 1e-6
    yield "rocked-ratchet zero minima", float(np.max(np.abs(rr(np.array([0.0, 1.0]))))), 1e-12

    yield "ratchet-cm limit position", abs(limit_position(cm, 1.0) - GOLDEN_CM_LIMIT), 1e-9
    yield "validation passes (quartic, ratchet-cm)", float(not (validate(quartic).passed and validate(cm).passed)), 0.5

    yield "quartic interface at k=0.1", abs(interface_position(quartic, 0.1, 1.0) - 0.5), 1e-6
    yield "rocked-ratchet interface at k=0.5", abs(interface_position(rr, 0.5, 1.0) - 0.5), 0.02

    grid = FdGrid(255)
    u, _ = solve_one_field(quartic, 0.5, grid)
    prof = compute_profile(quartic, 0.5, 1.0, n_points=401)
    yield "quartic FD vs quadrature, k=0.5, n=255", float(np.max(np.abs(u - prof.interpolate(grid.nodes)))), 1e-4

    yield "psi(m=0, eps=1, p=0)", abs(float(psi(PoroParams(p=0.0), 0.0, 1.0)) - 0.75), 1e-15
    params = PoroParams(p=0.05, k1=0.1, k2=0.1, k3=0.1)
    (s,) = find_phases(params)
    grid = FdGrid(63)
    init = TwoFieldState(np.full(grid.n, s.eps), np.full(grid.n, s.m), (s.m, s.eps, s.m, s.eps))
    _, rep = solve_two_field(params, grid, init)
    yield "two-field constant solution, Newton steps", float(rep.iterations), 1.0


def run(stream=None) -> bool:
    stream = stream or sys.stdout
    ok_all = True
    for name, err, tol in _checks():
        ok = err <= tol
        ok_all &= ok
        stream.write(f"{'PASS' if ok else 'FAIL'}  {name:<42s} {err:.3e} <= {tol:.0e}\n")
    stream.write("selftest: " + ("all checks passed" if ok_all else "FAILED") + "\n")
    return ok_all
