"""Kink profiles of one- and two-field Landau functionals with double-well potentials."""
from kinklab.errors import (
    BracketFailure, BranchJump, ConfigError, ContinuationFailure, ConvexityViolation, InvalidParams,
    KinklabError, NewtonDivergence, NonPositiveCurvature, NoPhaseFound, NotDegenerate, QuadratureFailure,
    SingularJacobian,
)
from kinklab.potential import (
    DoubleWellPotential, RatchetCMParams, RockedRatchetParams, build_quartic, build_ratchet_cm,
    build_rocked_ratchet, curvature_at_minima, potential_from_spec, validate,
)
from kinklab.kinkcore import (
    compute_profile, interface_position, limit_position, localization_diagnostics, solve_energy_level,
    weighted_residual,
)
from kinklab.kernels import BACKEND
from kinklab.poromechanics import (
    PoroParams, coexisting_phases, find_coexistence_pressure, find_critical_pressure, find_phases,
    predict_interface, reduce_degenerate,
)
from kinklab.bvp import FdGrid, continuation_sweep, solve_one_field, solve_two_field

__version__ = "0.1.0"
