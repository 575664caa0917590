"""Gaussian lattice sums: the normalisation kernels of the circle and well CS.

Every kernel comes with a second, Poisson-resummed evaluation so the two can
be checked against each other. Truncation is controlled by an absolute
tolerance and the discarded tail is bounded explicitly with

    sum_{x_k > d} exp(-x_k**2/w**2) <= exp(-d**2/w**2) + w*sqrt(pi)/(2a) * erfc(d/w)

for lattice points x_k spaced by ``a`` (monotone-integrand integral test).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .errors import InvalidParameterError
from .params import Parameters, PhasePoint, check_inside_well, default_tol

# Smallest per-term threshold used when shrinking a window to meet ``tol``.
_TERM_FLOOR = 1e-300


@dataclass(frozen=True)
class KernelValue:
    value: float
    truncation_bound: float

    def __float__(self):
        return float(self.value)


def _check_positive(**kw):
    for name, v in kw.items():
        if not (isinstance(v, (int, float, np.floating)) and math.isfinite(v) and v > 0):
            raise InvalidParameterError(f"{name} must be a finite positive number, got {v!r}")


def term_cutoff(p: float, rho: float, tol: float, spacing: float = 1.0) -> range:
    """Indices n whose Gaussian term exp(-(p - spacing*n)**2/rho**2) is >= tol.

    The momentum half-width of the window is rho*sqrt(ln(1/tol)), about 6.07*rho
    for tol = 1e-16. For tol >= 1 only an exact lattice hit survives.
    """
    _check_positive(rho=rho, tol=tol, spacing=spacing)
    half_width = rho * math.sqrt(math.log(1.0 / tol)) if tol < 1.0 else 0.0
    center = p / spacing
    lo = math.ceil(center - half_width / spacing)
    hi = math.floor(center + half_width / spacing)
    return range(lo, hi + 1)


def one_sided_tail(d: float, width: float, spacing: float) -> float:
    """Bound on a one-sided lattice Gaussian tail beyond distance ``d``."""
    if d <= 0:
        return math.inf
    return math.exp(-(d / width) ** 2) + width * math.sqrt(math.pi) / (2.0 * spacing) * float(
        erfc(d / width)
    )


def gaussian_window(center: float, width: float, spacing: float, tol: float, weight: float = 1.0):
    """Smallest symmetric index window making ``weight * 2 * tail`` < ``tol``.

    Returns ``(lo, hi, bound)`` with the window lo..hi inclusive, in units of
    the lattice index, centred on ``center / spacing``.
    """
    term_tol = min(tol, 0.5)
    while True:
        d = width * math.sqrt(math.log(1.0 / term_tol))
        bound = 2.0 * weight * one_sided_tail(d, width, spacing)
        if bound < tol or term_tol <= _TERM_FLOOR:
            break
        term_tol = max(term_tol * 1e-2, _TERM_FLOOR)
    c = center / spacing
    lo = math.floor(c - d / spacing)
    hi = math.ceil(c + d / spacing)
    return lo, hi, bound


# --- circle -----------------------------------------------------------------

def norm_circle_direct(p: float, epsilon: float, tol: float | None = None) -> KernelValue:
    """sqrt(eps/pi) * sum_n exp(-eps*(p - n)**2), the circle CS normalisation."""
    tol = default_tol() if tol is None else tol
    _check_positive(epsilon=epsilon, tol=tol)
    pref = math.sqrt(epsilon / math.pi)
    lo, hi, bound = gaussian_window(p, 1.0 / math.sqrt(epsilon), 1.0, tol, weight=pref)
    n = np.arange(lo, hi + 1, dtype=float)
    value = pref * math.fsum(np.exp(-epsilon * (p - n) ** 2))
    return KernelValue(value, bound)


def norm_circle_poisson(p: float, epsilon: float, tol: float | None = None) -> KernelValue:
    """Poisson-resummed normalisation: sum_n exp(2*pi*i*n*p) exp(-pi**2 n**2/eps)."""
    tol = default_tol() if tol is None else tol
    _check_positive(epsilon=epsilon, tol=tol)
    # +n and -n pair into 2*cos(2*pi*n*p); only n >= 1 is summed explicitly.
    _, hi, bound = gaussian_window(0.0, math.sqrt(epsilon) / math.pi, 1.0, tol)
    n = np.arange(1, max(hi, 0) + 1, dtype=float)
    terms = 2.0 * np.cos(2.0 * math.pi * n * p) * np.exp(-(math.pi**2) * n**2 / epsilon)
    return KernelValue(1.0 + math.fsum(terms), bound)


# --- well -------------------------------------------------------------------

def _well_levels(p: float, params: Parameters, tol: float, weight: float):
    a = params.momentum_quantum
    lo, hi, bound = gaussian_window(abs(p), params.rho, a, tol, weight=2.0 * weight)
    n = np.arange(max(lo, 1), max(hi, 1) + 1, dtype=float)
    return n, bound


def _well_terms(x: PhasePoint, params: Parameters, n):
    q, p = x
    pn = params.p_n(n)
    rho2 = params.rho**2
    s2 = np.sin(n * math.pi * q / params.length) ** 2
    return np.exp(-((p - pn) ** 2) / rho2) * s2, np.exp(-((p + pn) ** 2) / rho2) * s2, pn


def norm_well(x: PhasePoint, params: Parameters, tol: float | None = None) -> KernelValue:
    """Well CS normalisation N(q, p) by direct summation over levels n >= 1."""
    tol = default_tol() if tol is None else tol
    _check_positive(tol=tol)
    x = PhasePoint(*x)
    check_inside_well(x.q, params)
    n, bound = _well_levels(x.p, params, tol, params.c)
    minus, plus, _ = _well_terms(x, params, n)
    value = params.c * math.fsum(np.concatenate([minus, plus]))
    return KernelValue(value, bound)


def _theta_sum(u: float, P: float, theta: float, tol: float, weight: float):
    """Real part of theta*sqrt(pi) * sum_k exp(2*pi*i*(u-k)*P) exp(-pi**2 theta**2 (u-k)**2)."""
    lo, hi, bound = gaussian_window(u, 1.0 / (math.pi * theta), 1.0, tol, weight=weight)
    k = np.arange(lo, hi + 1, dtype=float)
    v = u - k
    terms = np.cos(2.0 * math.pi * v * P) * np.exp(-((math.pi * theta * v) ** 2))
    return theta * math.sqrt(math.pi) * math.fsum(terms), bound


def norm_well_theta(x: PhasePoint, params: Parameters, tol: float | None = None) -> KernelValue:
    """N(q, p) = c * S(q, p) with S evaluated in its theta-function (dual) form.

    S = 1/2 * Re sum_{n in Z} [1 - exp(2*pi*i*n*q/L)] exp(-(p - p_n)**2/rho**2);
    each of the two lattice sums is Poisson-resummed in n, giving rapidly
    converging series for large theta where the direct sum is slow.
    """
    tol = default_tol() if tol is None else tol
    _check_positive(tol=tol)
    x = PhasePoint(*x)
    check_inside_well(x.q, params)
    P = x.p / params.momentum_quantum
    u = x.q / params.length
    w = 0.5 * params.c * params.theta * math.sqrt(math.pi)
    t0, b0 = _theta_sum(0.0, P, params.theta, tol / 2.0, w)
    tu, bu = _theta_sum(u, P, params.theta, tol / 2.0, w)
    value = params.c * 0.5 * (t0 - tu)
    return KernelValue(value, b0 + bu)


def kernel_S(x: PhasePoint, params: Parameters, tol: float | None = None) -> KernelValue:
    """Dimensionless S = N / c."""
    kv = norm_well(x, params, tol)
    return KernelValue(kv.value / params.c, kv.truncation_bound / params.c)


def momentum_sum_M(x: PhasePoint, params: Parameters, tol: float | None = None) -> float:
    """M(x) = c * sum_n p_n [exp(-(p-p_n)^2/rho^2) - exp(-(p+p_n)^2/rho^2)] sin^2(n pi q/L)."""
    tol = default_tol() if tol is None else tol
    _check_positive(tol=tol)
    x = PhasePoint(*x)
    check_inside_well(x.q, params)
    # p_n grows inside the tail; widen the window by the largest momentum reached.
    scale = abs(x.p) + 20.0 * params.rho + params.momentum_quantum
    n, _ = _well_levels(x.p, params, tol / scale, params.c)
    minus, plus, pn = _well_terms(x, params, n)
    return params.c * math.fsum(np.concatenate([pn * minus, -pn * plus]))
