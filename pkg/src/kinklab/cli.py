"""Command-line front end.

    kinklab kink --config run.json
    kinklab poro {phases,coexistence,kink,predict} --config run.json
    kinklab selftest

Exit codes: 0 success, 1 selftest failure, 2 config error, 3 solver error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from kinklab.errors import (
    BracketFailure, BranchJump, ConfigError, InvalidParams, KinklabError, NewtonDivergence, NoPhaseFound,
    NotDegenerate, QuadratureFailure, SingularJacobian,
)

EXIT_OK, EXIT_SELFTEST, EXIT_CONFIG, EXIT_SOLVER = 0, 1, 2, 3

DEFAULT_TOLERANCES = {
    "quad_tol": 1e-9,
    "root_rtol": 1e-10,
    "newton_tol": 1e-10,
    "p_tol": 1e-10,
}


@dataclass
class RunConfig:
    potential: dict = field(default_factory=dict)
    material: dict = field(default_factory=dict)
    ell: float = 1.0
    k_values: list = field(default_factory=list)
    grid_n: int = 1001
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_path: Optional[str] = None
    output_format: str = "csv"
    u1: Optional[float] = None
    u2: Optional[float] = None
    p_values: Optional[list] = None


_KEYS = {"potential", "material", "ell", "k_values", "grid_n", "tolerances", "output_path", "output_format",
         "u1", "u2", "p_values"}


def load_config(path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = RunConfig(**{k: v for k, v in raw.items() if k != "tolerances"})
    tol = raw.get("tolerances", {})
    if not isinstance(tol, dict) or set(tol) - set(DEFAULT_TOLERANCES):
        raise ConfigError(f"tolerances must be a map with keys from {sorted(DEFAULT_TOLERANCES)}")
    cfg.tolerances = {**DEFAULT_TOLERANCES, **{k: float(v) for k, v in tol.items()}}
    if not all(v > 0 for v in cfg.tolerances.values()):
        raise ConfigError("tolerances must be positive")
    if not (isinstance(cfg.ell, (int, float)) and cfg.ell > 0):
        raise ConfigError("ell must be a positive number")
    if not isinstance(cfg.grid_n, int) or cfg.grid_n < 3:
        raise ConfigError("grid_n must be an integer >= 3")
    if cfg.output_format not in ("csv", "json"):
        raise ConfigError("output_format must be 'csv' or 'json'")
    return cfg


def _k_values(cfg: RunConfig) -> list[float]:
    ks = cfg.k_values
    if not isinstance(ks, list) or not ks:
        raise ConfigError("k_values must be a nonempty list")
    try:
        ks = [float(k) for k in ks]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"k_values must be numbers: {exc}") from exc
    if not all(k > 0 and math.isfinite(k) for k in ks):
        raise ConfigError("k_values must be positive")
    return ks


def _k_tag(k: float) -> str:
    return repr(float(k))


def _out_dir(cfg: RunConfig) -> Optional[Path]:
    if cfg.output_path is None:
        return None
    out = Path(cfg.output_path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_table(path: Path, columns: dict, fmt: str) -> Path:
    """Write equal-length columns as CSV (17 significant digits) or JSON.

    The extension is appended, never substituted: stems such as
    ``profile_k0.1`` contain dots.
    """
    names = list(columns)
    data = np.column_stack([np.asarray(columns[n], dtype=float) for n in names])
    if fmt == "csv":
        path = path.with_name(path.name + ".csv")
        np.savetxt(path, data, fmt="%.17g", delimiter=",", header=",".join(names), comments="")
    else:
        path = path.with_name(path.name + ".json")
        path.write_text(json.dumps({n: [float(v) for v in data[:, i]] for i, n in enumerate(names)}) + "\n")
    return path


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


# --------------------------------------------------------------------- kink

def cmd_kink(cfg: RunConfig) -> int:
    from kinklab.kinkcore import compute_profile, localization_diagnostics, solve_energy_level
    from kinklab.potential import curvature_at_minima, potential_from_spec, validate

    ks = _k_values(cfg)
    spec = cfg.potential
    if not isinstance(spec, dict) or "name" not in spec:
        raise ConfigError("potential must be a map with a 'name'")
    try:
        pot = potential_from_spec(spec["name"], spec.get("params", {}))
    except (InvalidParams, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    report = validate(pot)
    if not report.passed:
        raise ConfigError(f"potential fails validation:\n{report}")
    curvature_at_minima(pot)
    a, b = pot.min_a, pot.min_b
    u1 = a + 0.25 * (b - a) if cfg.u1 is None else float(cfg.u1)
    u2 = a + 0.75 * (b - a) if cfg.u2 is None else float(cfg.u2)
    if not a < u1 < u2 < b:
        raise ConfigError(f"need {a} < u1 < u2 < {b}, got u1={u1}, u2={u2}")
    out = _out_dir(cfg)
    qt = cfg.tolerances["quad_tol"]
    rows = []
    for k in ks:
        energy = solve_energy_level(pot, k, cfg.ell, quad_tol=qt, rtol=cfg.tolerances["root_rtol"])
        diag = localization_diagnostics(pot, k, cfg.ell, u1, u2, energy=energy, quad_tol=qt)
        if out is not None:
            prof = compute_profile(pot, k, cfg.ell, n_points=cfg.grid_n, energy=energy, quad_tol=qt)
            write_table(out / f"profile_k{_k_tag(k)}", {"x": prof.xs, "u": prof.us}, cfg.output_format)
        rows.append({
            "k": k,
            "E_k": diag.e_k,
            "x_i_k": diag.interface_x,
            "x_i_0": diag.predicted_limit,
            "weighted_residual": diag.weighted_residual,
            "width_u1_u2": diag.width_u1_u2,
        })
    text = _dump(rows)
    if out is not None:
        (out / "summary.json").write_text(text + "\n")
    print(text)
    return EXIT_OK


# --------------------------------------------------------------------- poro

def _material(cfg: RunConfig):
    from kinklab.poromechanics import PoroParams

    try:
        return PoroParams(**cfg.material)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad material: {exc}") from exc


def _poro_phases(cfg, params):
    from kinklab.poromechanics import find_phases

    if cfg.p_values is not None:
        ps = [float(p) for p in cfg.p_values]
    elif params.p is not None:
        ps = [params.p]
    else:
        ps = [float(p) for p in np.linspace(0.0, 0.5, 11)]
    rows = []
    for p in ps:
        for ph in find_phases(params, p):
            rows.append({"p": p, "kind": ph.kind, "m": ph.m, "eps": ph.eps, "psi": ph.psi})
    return rows


def _poro_coexistence(cfg, params):
    from kinklab.poromechanics import find_coexistence_pressure, find_critical_pressure

    p_tol = cfg.tolerances["p_tol"]
    return {"p_c": find_critical_pressure(params, p_tol=p_tol), "p_co": find_coexistence_pressure(params, p_tol=p_tol)}


def _poro_predict(cfg, params):
    from kinklab.kinkcore import limit_position
    from kinklab.poromechanics import reduce_degenerate

    red = reduce_degenerate(params)
    pot = red.as_potential()
    c_s, c_f = red.curvatures()
    return {
        "p_co": red.p,
        "lambda": red.lam,
        "xi_s": red.xi_s,
        "xi_f": red.xi_f,
        "curvature_s": c_s,
        "curvature_f": c_f,
        "x_i_0": limit_position(pot, cfg.ell),
    }


def _poro_kink(cfg, params):
    from kinklab.bvp import FdGrid, continuation_sweep, level_crossing

    ks = sorted(_k_values(cfg), reverse=True)
    grid = FdGrid(cfg.grid_n, cfg.ell)
    steps = continuation_sweep(params, grid, ks, newton_tol=cfg.tolerances["newton_tol"])
    out = _out_dir(cfg)
    x = grid.full_nodes
    rows = []
    for st in steps:
        eps, m = st.state.full_eps(), st.state.full_m()
        if out is not None:
            write_table(out / f"poro_k{_k_tag(st.k)}", {"x": x, "eps": eps, "m": m}, cfg.output_format)
        rows.append({
            "k": st.k,
            "p": st.params.p,
            "x_eps_mid": level_crossing(x, eps, 0.5 * (eps[0] + eps[-1])),
            "x_m_mid": level_crossing(x, m, 0.5 * (m[0] + m[-1])),
            "newton_iterations": st.report.iterations,
            "residual": st.report.final_residual_norm,
        })
    return rows


_PORO_ACTIONS = {
    "phases": ("phase finding", _poro_phases),
    "coexistence": ("coexistence bracket", _poro_coexistence),
    "predict": ("degenerate reduction", _poro_predict),
    "kink": ("two-field Newton", _poro_kink),
}


def cmd_poro(cfg: RunConfig, action: str) -> int:
    params = _material(cfg)
    stage, fn = _PORO_ACTIONS[action]
    try:
        result = fn(cfg, params)
    except KinklabError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise _StageError(_stage_of(exc, stage), exc) from exc
    text = _dump(result)
    out = _out_dir(cfg)
    if out is not None:
        (out / f"poro_{action}.json").write_text(text + "\n")
    print(text)
    return EXIT_OK


def _stage_of(exc, default):
    if isinstance(exc, NoPhaseFound):
        return "phase finding"
    if isinstance(exc, BracketFailure):
        return "coexistence bracket"
    if isinstance(exc, (NewtonDivergence, SingularJacobian)):
        return "Newton"
    if isinstance(exc, (BranchJump, NotDegenerate)):
        return f"degenerate reduction ({type(exc).__name__})"
    return default


class _StageError(Exception):
    def __init__(self, stage, exc):
        super().__init__(f"{stage}: {exc}")
        self.stage = stage


# ------------------------------------------------------------------- driver

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kinklab", description="Kink profiles for asymmetric double wells.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_kink = sub.add_parser("kink", help="one-field kink profiles over a list of k")
    p_kink.add_argument("--config", required=True)
    p_poro = sub.add_parser("poro", help="two-field poromechanics experiments")
    p_poro.add_argument("action", choices=sorted(_PORO_ACTIONS))
    p_poro.add_argument("--config", required=True)
    sub.add_parser("selftest", help="fast golden-value checks")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.command == "selftest":
        from kinklab import selftest

        return EXIT_OK if selftest.run(sys.stdout) else EXIT_SELFTEST
    try:
        cfg = load_config(args.config)
        if args.command == "kink":
            return cmd_kink(cfg)
        return cmd_poro(cfg, args.action)
    except ConfigError as exc:
        print(f"kinklab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _StageError as exc:
        print(f"kinklab: solver error in stage {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (QuadratureFailure, BracketFailure, NewtonDivergence, SingularJacobian, KinklabError) as exc:
        print(f"kinklab: solver error in stage kink ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
