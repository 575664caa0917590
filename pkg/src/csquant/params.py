"""Physical parameters and phase-space points.

Default units are hbar = 1, L = pi, m = 1/2, so that p_n = n, E_n = n**2,
omega = 1 and the revival time is 2*pi. With these units rho equals theta.
"""
from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass
from typing import NamedTuple

from .errors import DegeneratePointError, InvalidParameterError

DEFAULT_TOL = 1e-16


def default_tol() -> float:
    """Default truncation tolerance, overridable through ``CSQ_DEFAULT_TOL``."""
    raw = os.environ.get("CSQ_DEFAULT_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise InvalidParameterError(f"CSQ_DEFAULT_TOL={raw!r} is not a number") from None
    if not tol > 0:
        raise InvalidParameterError(f"CSQ_DEFAULT_TOL must be positive, got {raw}")
    return tol


@dataclass(frozen=True)
class Parameters:
    """Constants and regulators shared by every well/circle formula.

    Parameters
    ----------
    hbar, mass, length : float
        Planck constant, particle mass and well width L.
    theta : float
        Dimensionless Gaussian width; rho = hbar*pi*theta/L.
    epsilon : float
        Regulator of the circle coherent states.
    """

    hbar: float = 1.0
    mass: float = 0.5
    length: float = math.pi
    theta: float = 1.0
    epsilon: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "length", "theta", "epsilon"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise InvalidParameterError(f"{name} must be a finite positive number, got {value!r}")

    @property
    def momentum_quantum(self) -> float:
        """Level spacing hbar*pi/L of the momenta p_n."""
        return self.hbar * math.pi / self.length

    @property
    def rho(self) -> float:
        return self.momentum_quantum * self.theta

    def p_n(self, n):
        return self.momentum_quantum * n

    @property
    def omega(self) -> float:
        return self.hbar * math.pi**2 / (2.0 * self.mass * self.length**2)

    def energy(self, n):
        return self.hbar * self.omega * n * n

    @property
    def revival_time(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def omega_theta(self) -> float:
        """Frequency of the global phase of U(t)."""
        return self.omega * self.theta**2 / 2.0

    @property
    def c(self) -> float:
        return 2.0 / (self.rho * self.length * math.sqrt(math.pi))

    def replace(self, **changes) -> "Parameters":
        data = asdict(self)
        data.update(changes)
        return Parameters(**data)

    def as_dict(self) -> dict:
        return asdict(self)


class PhasePoint(NamedTuple):
    q: float
    p: float


def check_inside_well(q: float, params: Parameters) -> None:
    if not (0.0 < q < params.length):
        raise DegeneratePointError(f"q={q!r} is not strictly inside (0, {params.length!r})")

