"""Invariant and oracle checks run by ``csquant verify``."""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import circle, kernels, spectra, symbols, well
from .params import Parameters

FAST_BUDGET_SECONDS = 10.0


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _max_abs(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _check(name, err, tol, what="max deviation"):
    return CheckResult(name, bool(err < tol), f"{what} {err:.3g} (tolerance {tol:g})")


def check_circle_duality(n_points, rng):
    errs = []
    for _ in range(n_points):
        eps, p = rng.uniform(0.1, 10.0), rng.uniform(-3.0, 3.0)
        errs.append(abs(kernels.norm_circle_direct(p, eps).value - kernels.norm_circle_poisson(p, eps).value))
    return _check("kernel duality (circle)", max(errs), 1e-12)


def check_well_duality(n_points, rng):
    errs = []
    for _ in range(n_points):
        P = Parameters(theta=rng.uniform(0.1, 5.0))
        x = (rng.uniform(0.01, P.length - 0.01), rng.uniform(-10.0, 10.0))
        errs.append(abs(kernels.norm_well(x, P).value - kernels.norm_well_theta(x, P).value))
    return _check("kernel duality (well)", max(errs), 1e-12)


def check_circle_canonical(N=12, eps=0.7):
    S = circle.op_shift(eps, N)
    C = circle.commutator(circle.op_momentum_circle(N), S)
    interior = slice(1, 2 * N)
    err = _max_abs(C.entries[interior, :], S.entries[interior, :])
    return _check("circle [p, S] = S", err, 1e-15)


def check_circle_identity(N):
    err = _max_abs(circle.resolve_identity_circle(1.0, N), np.eye(2 * N + 1))
    return _check(f"circle identity resolution (N={N})", err, 1e-8)


def check_orthonormality(N, thetas):
    err = max(_max_abs(well.overlap_matrix(Parameters(theta=t), N), np.eye(2 * N)) for t in thetas)
    return _check(f"spinor basis orthonormality oracle (N={N})", err, 1e-8)


def check_position_oracle(N, thetas):
    err = 0.0
    for t in thetas:
        P = Parameters(theta=t)
        oracle = well.quantize_by_quadrature(lambda q, p: q, P, N)
        closed = well.op_position(P, N)
        err = max(err, _max_abs(oracle.block_plus, closed.block_plus), _max_abs(oracle.block_minus, closed.block_minus))
    res = _check(f"oracle vs op_position (N={N})", err, 1e-8)
    if not res.passed:
        res.detail = "oracle mismatch for op_position: " + res.detail
    return res


def check_momentum_oracle(N):
    P = Parameters()
    oracle = well.quantize_by_quadrature(lambda q, p: p, P, N)
    closed = well.op_momentum(P, N)
    err = max(_max_abs(oracle.block_plus, closed.block_plus), _max_abs(oracle.block_minus, closed.block_minus))
    res = _check(f"oracle vs op_momentum (N={N})", err, 1e-8)
    if not res.passed:
        res.detail = "oracle mismatch for op_momentum: " + res.detail
    return res


def check_p_squared(N, with_quadrature):
    P = Parameters(theta=1.3)
    p = well.op_momentum(P, N)
    err = _max_abs(well.op_p_squared(P, N).block_plus, (p @ p).block_plus + P.rho**2 / 2 * np.eye(N))
    if with_quadrature:
        quad = well.op_momentum_fn(lambda x: x * x, P, N)
        err = max(err, _max_abs(quad.block_plus, well.op_p_squared(P, N).block_plus) / 1e4)
    return _check("p^2-hat = (p-hat)^2 + rho^2/2", err, 1e-14)


def check_commutator_algebra(N):
    err = 0.0
    for t in (0.3, 1.0, 4.0):
        P = Parameters(theta=t)
        lit = well.commutator(well.op_position(P, N), well.op_momentum(P, N))
        err = max(err, _max_abs(lit.block_plus, well.commutator_qp(P, N).block_plus))
    return _check(f"[q,p] closed form = matrix commutator (N={N})", err, 1e-12)


def check_dynamics(N):
    P = Parameters(theta=0.8)
    U = well.evolution_operator(1.234, P, N)
    unit = _max_abs(U.block_plus @ U.block_plus.conj().T, np.eye(N))
    rev = _max_abs(well.evolution_operator(P.revival_time, P, N).block_plus, np.exp(-1j * math.pi * P.theta**2) * np.eye(N))
    return _check("U(t) unitary and U(T_r) = exp(-i pi theta^2)", max(unit, rev), 1e-12)


def check_symbol_duality(n_points, rng):
    err = 0.0
    N = 32
    for t in (0.2, 1.0, 5.0):
        P = Parameters(theta=t)
        Q, Pm = well.op_position(P, N), well.op_momentum(P, N)
        for _ in range(n_points):
            x = (rng.uniform(0.05, P.length - 0.05), rng.uniform(-4.0, 4.0))
            err = max(
                err,
                abs(symbols.symbol_position(x, P) - symbols.lower_symbol(Q, x).real),
                abs(symbols.symbol_momentum(x, P) - symbols.lower_symbol(Pm, x).real),
            )
    return _check("closed-form symbols = matrix lower symbols", err, 1e-10)


def check_commutator_mean(n_points, rng):
    err = 0.0
    P = Parameters(theta=1.5)
    X = well.commutator_qp(P, 40)
    for _ in range(n_points):
        x = (rng.uniform(0.05, P.length - 0.05), rng.uniform(-5.0, 5.0))
        err = max(err, abs(symbols.lower_symbol(X, x)))
    return _check("CS mean of [q,p] vanishes", err, 1e-12)


def check_spectral_limits():
    P = Parameters(theta=0.05)
    q_ev = spectra.eigvals_symmetric(well.op_position(P, 32)).eigenvalues
    c_ev = spectra.eigvals_skew(well.commutator_qp(P, 32)).eigenvalues
    err = max(float(np.max(np.abs(q_ev - P.length / 2))), float(np.max(np.abs(c_ev))))
    return _check("spectra collapse at theta=0.05", err, 1e-3)


def run_checks(level: str = "fast", seed: int = 20240613) -> list[CheckResult]:
    if level not in ("fast", "full"):
        raise ValueError(f"level must be 'fast' or 'full', got {level!r}")
    full = level == "full"
    rng = np.random.default_rng(seed)
    oracle_N = 6 if full else 4
    thetas = (0.5, 1.0, 2.0) if full else (1.0,)
    checks = [
        lambda: check_circle_duality(100 if full else 20, rng),
        lambda: check_well_duality(100 if full else 20, rng),
        check_circle_canonical,
        lambda: check_circle_identity(3 if full else 2),
        lambda: check_orthonormality(oracle_N, thetas),
        lambda: check_position_oracle(oracle_N, thetas),
        lambda: check_momentum_oracle(oracle_N),
        lambda: check_p_squared(16, full),
        lambda: check_commutator_algebra(64 if full else 24),
        lambda: check_dynamics(32),
        lambda: check_symbol_duality(10 if full else 3, rng),
        lambda: check_commutator_mean(50 if full else 10, rng),
        check_spectral_limits,
    ]
    results = []
    start = time.perf_counter()
    for check in checks:
        try:
            results.append(check())
        except Exception as exc:  # a crashing check is a failed check
            results.append(CheckResult(getattr(check, "__name__", "check"), False, f"raised {exc!r}"))
    elapsed = time.perf_counter() - start
    if not full and elapsed > FAST_BUDGET_SECONDS:
        warnings.warn(f"fast verification took {elapsed:.1f}s (budget {FAST_BUDGET_SECONDS:g}s)", stacklevel=2)
    return results
