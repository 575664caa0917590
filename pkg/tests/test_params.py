import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from csquant import DegeneratePointError, InvalidParameterError, Parameters
from csquant.params import check_inside_well, default_tol

positive = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)


def test_default_units():
    P = Parameters()
    assert P.p_n(3) == pytest.approx(3.0, abs=1e-15)
    assert P.energy(4) == pytest.approx(16.0, abs=1e-13)
    assert P.omega == pytest.approx(1.0, abs=1e-15)
    assert P.revival_time == pytest.approx(2 * math.pi, abs=1e-14)
    assert P.rho == pytest.approx(P.theta)


def test_c_value():
    # c = 2/(rho L sqrt(pi)) = 2/pi**1.5 in default units
    assert Parameters().c == pytest.approx(0.3591742442503, rel=1e-12)


@given(positive, positive, positive, positive)
def test_derived_quantities(hbar, mass, length, theta):
    P = Parameters(hbar=hbar, mass=mass, length=length, theta=theta)
    assert P.rho > 0 and P.c > 0
    pn = P.p_n(np.arange(1, 10))
    assert np.all(np.diff(pn) > 0)
    assert P.omega_theta / P.omega == pytest.approx(theta**2 / 2, rel=1e-14)


@pytest.mark.parametrize("field", ["hbar", "mass", "length", "theta", "epsilon"])
@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_rejects_nonpositive(field, bad):
    with pytest.raises(InvalidParameterError):
        Parameters(**{field: bad})


def test_replace_keeps_other_fields():
    P = Parameters(theta=2.0).replace(hbar=0.5)
    assert (P.theta, P.hbar, P.mass) == (2.0, 0.5, 0.5)


@pytest.mark.parametrize("q", [0.0, math.pi, -0.1, 4.0])
def test_wall_points_rejected(q):
    with pytest.raises(DegeneratePointError):
        check_inside_well(q, Parameters())


def test_default_tol_env(monkeypatch):
    assert default_tol() == 1e-16
    monkeypatch.setenv("CSQ_DEFAULT_TOL", "1e-12")
    assert default_tol() == 1e-12
    monkeypatch.setenv("CSQ_DEFAULT_TOL", "-3")
    with pytest.raises(InvalidParameterError):
        default_tol()
