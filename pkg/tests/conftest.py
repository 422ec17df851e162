import numpy as np
import pytest

from kinklab.potential import RatchetCMParams, RockedRatchetParams, build_quartic, build_ratchet_cm, build_rocked_ratchet
from kinklab.poromechanics import PoroParams


@pytest.fixture(scope="session")
def quartic():
    return build_quartic()


@pytest.fixture(scope="session")
def ratchet_cm():
    return build_ratchet_cm(RatchetCMParams())


@pytest.fixture(scope="session")
def rocked():
    return build_rocked_ratchet(RockedRatchetParams())


@pytest.fixture(scope="session")
def builtins(quartic, ratchet_cm, rocked):
    return {"quartic": quartic, "ratchet-cm": ratchet_cm, "rocked-ratchet": rocked}


@pytest.fixture(scope="session")
def poro_material():
    """alpha=100, a=1/2, b=1 with equal second-gradient coefficients."""
    return PoroParams(alpha=100.0, a_ratio=0.5, b_couple=1.0, k1=0.1, k2=0.1, k3=0.1)


@pytest.fixture(scope="session")
def reduced(poro_material):
    from kinklab.poromechanics import reduce_degenerate

    return reduce_degenerate(poro_material)


def simpson(f, lo, hi, panels):
    """Composite Simpson rule with an even number of panels."""
    x = np.linspace(lo, hi, panels + 1)
    y = f(x)
    h = (hi - lo) / panels
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())
