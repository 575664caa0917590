"""Lower symbols <x|A|x> of well observables and the associated dispersions.

The closed-form symbols are evaluated from per-point lattice sums computed
by :mod:`csquant._core`; ``lower_symbol`` instead takes the matrix route
through truncated operators and coherent-state vectors, and the two are
cross-checked in the test-suite.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _core
from .errors import ClampWarning, DegeneratePointError, InvalidParameterError, NumericalConsistencyError
from .kernels import gaussian_window
from .params import Parameters, PhasePoint, check_inside_well, default_tol
from .well import BlockOperator, _gauss_coupling, _odd_kernel, commutator_qp, cs_coeffs_well

CLAMP_TOL = 1e-12

WHICH = ("q", "p", "q(t)", "dQ", "dP", "dQdP", "commutator", "norm")


@dataclass(frozen=True)
class SymbolGrid:
    """Symbol values on a rectangular grid, ``values[i, j]`` at (q_i, p_j)."""

    q_values: np.ndarray = field(repr=False)
    p_values: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    which: str
    params: Parameters
    t: float | None = None
    tol: float | None = None

    @property
    def counts(self):
        return self.q_values.size, self.p_values.size

    @property
    def q_range(self):
        return float(self.q_values[0]), float(self.q_values[-1])

    @property
    def p_range(self):
        return float(self.p_values[0]), float(self.p_values[-1])


def lower_symbol(A: BlockOperator, x: PhasePoint) -> complex:
    """<x|A|x> with |x> = |x,+> + |x,-> truncated to the basis of ``A``."""
    cs = cs_coeffs_well(x, A.params, A.size)
    plus, minus = cs.plus, cs.minus
    return complex(plus @ A.block_plus @ plus + minus @ A.block_minus @ minus)


# --- vectorised closed forms -------------------------------------------------

def levels_needed(p_values, params: Parameters, tol: float) -> int:
    """Highest level whose CS amplitude exp(-(|p| - p_n)**2/(2 rho**2)) can exceed ``tol``."""
    pmax = float(np.max(np.abs(p_values))) if np.size(p_values) else 0.0
    _, hi, _ = gaussian_window(pmax, math.sqrt(2.0) * params.rho, params.momentum_quantum, tol)
    return max(int(hi), 2)


def _prepare(q, p, params, tol):
    q = np.atleast_1d(np.asarray(q, dtype=float)).ravel()
    p = np.atleast_1d(np.asarray(p, dtype=float)).ravel()
    if q.shape != p.shape:
        raise InvalidParameterError("q and p must have the same shape")
    L = params.length
    if np.any((q <= 0.0) | (q >= L)):
        bad = q[(q <= 0.0) | (q >= L)][0]
        raise DegeneratePointError(f"q={bad!r} is not strictly inside (0, {L!r})")
    tol = default_tol() if tol is None else tol
    return q, p, levels_needed(p, params, tol)


def _single_sums(q, p, params, n_max):
    return _core.well_sums(q, p, n_max, params.rho, params.momentum_quantum, params.length)


def _pair_sums(q, p, params, n_max, tau=0.0):
    return _core.well_pair_sums(q, p, n_max, params.rho, params.momentum_quantum, params.length, tau)


def _position_from_sums(S, R1, L):
    return L / 2.0 - (2.0 * L / math.pi**2) * R1 / S


def position_values(q, p, params: Parameters, tol=None, t=None):
    """Vectorised q-check (or q-check(t) when ``t`` is given) at points (q_i, p_i)."""
    q, p, n_max = _prepare(q, p, params, tol)
    tau = 0.0 if t is None else math.fmod(t / params.revival_time, 1.0)
    S = _single_sums(q, p, params, n_max)[0]
    R1, _ = _pair_sums(q, p, params, n_max, tau)
    return _position_from_sums(S, R1, params.length)


def momentum_values(q, p, params: Parameters, tol=None):
    q, p, n_max = _prepare(q, p, params, tol)
    S, M, *_ = _single_sums(q, p, params, n_max)
    return M / S


def _clamped_sqrt(rad, label):
    rad = np.asarray(rad, dtype=float)
    if np.any(rad < -CLAMP_TOL):
        raise NumericalConsistencyError(f"{label} radicand {rad.min():.3g} is negative beyond roundoff")
    neg = rad < 0.0
    if np.any(neg):
        warnings.warn(ClampWarning(f"{label} radicand clamped at {int(neg.sum())} point(s)"), stacklevel=3)
        rad = np.where(neg, 0.0, rad)
    return np.sqrt(rad)


def moments(q, p, params: Parameters, tol=None):
    """First and second moments (q, q**2, p, p**2 symbols) at each point."""
    q, p, n_max = _prepare(q, p, params, tol)
    L = params.length
    S, M, K, D, _ = _single_sums(q, p, params, n_max)
    R1, R2 = _pair_sums(q, p, params, n_max)
    qc = _position_from_sums(S, R1, L)
    q2 = L**2 / 3.0 - (L**2 / (2.0 * math.pi**2)) * D / S + (2.0 * L**2 / math.pi**2) * R2 / S
    pc = M / S
    p2 = params.rho**2 / 2.0 + K / S
    return qc, q2, pc, p2


def dispersion_values(q, p, params: Parameters, tol=None):
    """(Delta Q, Delta P) arrays from the quantized-square symbols."""
    qc, q2, pc, p2 = moments(q, p, params, tol)
    return _clamped_sqrt(q2 - qc**2, "Delta Q"), _clamped_sqrt(p2 - pc**2, "Delta P")


# --- point functions -----------------------------------------------------------

def _point(x, params):
    x = PhasePoint(*x)
    check_inside_well(x.q, params)
    return x


def symbol_position(x: PhasePoint, params: Parameters, tol: float | None = None) -> float:
    """q-check = L/2 - Q(q, p)."""
    x = _point(x, params)
    return float(position_values(x.q, x.p, params, tol)[0])


def symbol_position_t(x: PhasePoint, t: float, params: Parameters, tol: float | None = None) -> float:
    """Lower symbol of U(t)^+ q-hat U(t); real and periodic with the revival time."""
    x = _point(x, params)
    return float(position_values(x.q, x.p, params, tol, t=t)[0])


def symbol_momentum(x: PhasePoint, params: Parameters, tol: float | None = None) -> float:
    """p-check = M(x)/N(x)."""
    x = _point(x, params)
    return float(momentum_values(x.q, x.p, params, tol)[0])


def dispersion_q(x: PhasePoint, params: Parameters, tol: float | None = None) -> float:
    x = _point(x, params)
    return float(dispersion_values(x.q, x.p, params, tol)[0][0])


def dispersion_p(x: PhasePoint, params: Parameters, tol: float | None = None) -> float:
    x = _point(x, params)
    return float(dispersion_values(x.q, x.p, params, tol)[1][0])


def uncertainty_product(x: PhasePoint, params: Parameters, tol: float | None = None) -> float:
    x = _point(x, params)
    dq, dp = dispersion_values(x.q, x.p, params, tol)
    return float(dq[0] * dp[0])


def symbol_commutator_state(psi, params: Parameters, N: int) -> complex:
    """<Psi|[q-hat, p-hat]|Psi> from the closed double sum.

    ``psi`` holds the 2N components, kappa = + first. The result is purely
    imaginary: (2 i hbar/pi) sum C_{nn'} Im(a_n* a_n' - b_n* b_n').
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != 2 * N:
        raise InvalidParameterError(f"psi must have 2N = {2 * N} components, got {psi.size}")
    if abs(np.vdot(psi, psi).real - 1.0) > 1e-10:
        raise InvalidParameterError("psi must be normalised")
    a, b = psi[:N], psi[N:]
    K, dn = _odd_kernel(N)
    C = _gauss_coupling(params, N) * dn * K
    weight = np.imag(np.outer(a.conj(), a) - np.outer(b.conj(), b))
    return 1j * (2.0 * params.hbar / math.pi) * float(np.sum(C * weight))


# --- grids ---------------------------------------------------------------------

def default_grid(params: Parameters, N: int = 32, n_q: int = 101, n_p: int = 101):
    """Standard (q, p) axes: q in [0.05, L-0.05], |p| <= (p_N + 4 rho)/2."""
    half = (params.p_n(N) + 4.0 * params.rho) / 2.0
    return np.linspace(0.05, params.length - 0.05, n_q), np.linspace(-half, half, n_p)


def symbol_grid(which: str, params: Parameters, q_values, p_values, t: float | None = None, tol: float | None = None) -> SymbolGrid:
    """Evaluate one symbol on the grid q_values x p_values (row-major in q)."""
    if which not in WHICH:
        raise InvalidParameterError(f"unknown symbol {which!r}; expected one of {WHICH}")
    qv = np.asarray(q_values, dtype=float)
    pv = np.asarray(p_values, dtype=float)
    Q, P = np.meshgrid(qv, pv, indexing="ij")
    q, p = Q.ravel(), P.ravel()
    if which == "q":
        vals = position_values(q, p, params, tol)
    elif which == "q(t)":
        vals = position_values(q, p, params, tol, t=0.0 if t is None else t)
    elif which == "p":
        vals = momentum_values(q, p, params, tol)
    elif which in ("dQ", "dP", "dQdP"):
        dq, dp = dispersion_values(q, p, params, tol)
        vals = {"dQ": dq, "dP": dp, "dQdP": dq * dp}[which]
    elif which == "norm":
        q, p, n_max = _prepare(q, p, params, tol)
        S, *_, shift = _single_sums(q, p, params, n_max)
        vals = params.c * S * np.exp(-shift)
    else:
        _, _, n_max = _prepare(q, p, params, tol)
        X = commutator_qp(params, n_max)
        vals = np.array([lower_symbol(X, (qi, pi)) for qi, pi in zip(q, p)])
    return SymbolGrid(qv, pv, np.asarray(vals).reshape(Q.shape), which, params, t, tol)
