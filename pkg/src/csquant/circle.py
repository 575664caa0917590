"""Coherent-state quantization of the motion on the circle.

Basis states |n>, n = -N..N, are stored in ascending order, so matrix index
``i`` corresponds to ``n = i - N``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError, ShapeMismatchError, TruncationWarning
from .kernels import norm_circle_direct, one_sided_tail
from .quadrature import COEFF_TOL, adaptive_quad

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CircleOperator:
    half_bandwidth: int
    entries: np.ndarray = field(repr=False)
    epsilon: float | None = None
    tag: str = ""

    def __post_init__(self):
        m = 2 * self.half_bandwidth + 1
        arr = np.array(self.entries, dtype=complex)
        if arr.shape != (m, m):
            raise ShapeMismatchError(f"entries must be {m}x{m}, got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def N(self) -> int:
        return self.half_bandwidth

    @property
    def levels(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def element(self, n: int, n_prime: int) -> complex:
        """Matrix element <n|A|n'>."""
        return self.entries[n + self.N, n_prime + self.N]

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.entries, self.entries.conj().T, rtol=0, atol=atol))


@dataclass(frozen=True)
class CircleCS:
    coefficients: np.ndarray = field(repr=False)
    q0: float
    p0: float
    normalization: float
    tail_bound: float

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))


def _check_size(N):
    if not (isinstance(N, (int, np.integer)) and N >= 1):
        raise InvalidParameterError(f"half bandwidth N must be a positive integer, got {N!r}")


def _check_eps(epsilon):
    if not (isinstance(epsilon, (int, float)) and math.isfinite(epsilon) and epsilon > 0):
        raise InvalidParameterError(f"epsilon must be a finite positive number, got {epsilon!r}")


def cs_coeffs_circle(q0: float, p0: float, epsilon: float, N: int, tol: float = 1e-12) -> CircleCS:
    """Components <n|p0, q0> of the circle coherent state for n = -N..N.

    Emits a :class:`TruncationWarning` when the Gaussian weight falling
    outside the basis exceeds ``tol``.
    """
    _check_eps(epsilon)
    _check_size(N)
    n = np.arange(-N, N + 1, dtype=float)
    norm = norm_circle_direct(p0, epsilon).value
    amp = (epsilon / math.pi) ** 0.25 * np.exp(-0.5 * epsilon * (p0 - n) ** 2) / math.sqrt(norm)
    coeffs = amp * np.exp(-1j * n * q0)
    width = 1.0 / math.sqrt(epsilon)
    tail = math.sqrt(epsilon / math.pi) / norm * (
        one_sided_tail(N + 1 - p0, width, 1.0) + one_sided_tail(N + 1 + p0, width, 1.0)
    )
    if tail > tol:
        warnings.warn(
            TruncationWarning(f"circle CS at p0={p0} leaks {tail:.3g} outside |n| <= {N}", tail),
            stacklevel=2,
        )
    coeffs.setflags(write=False)
    return CircleCS(coeffs, q0, p0, norm, tail)


def op_momentum_circle(N: int) -> CircleOperator:
    """Angular momentum: diag(n)."""
    _check_size(N)
    return CircleOperator(N, np.diag(np.arange(-N, N + 1).astype(complex)), None, "p")


def fourier_coefficient(f, n: int, tol: float = COEFF_TOL) -> complex:
    """c_n(f) = (1/2 pi) int_0^{2 pi} f(q) exp(-i n q) dq by adaptive quadrature.

    ``f`` may return complex values; real and imaginary parts are integrated
    separately.
    """
    probe = complex(f(1.0))
    parts = [lambda q: float(np.real(f(q)))]
    if probe.imag != 0.0:
        parts.append(lambda q: float(np.imag(f(q))))
    else:
        parts.append(None)
    # Accuracy budget shared between the (up to four) real integrals.
    t = tol * TWO_PI / 4.0

    def integral(g, kind):
        if g is None:
            return 0.0
        if n == 0:
            return adaptive_quad(g, 0.0, TWO_PI, t) if kind == "cos" else 0.0
        return adaptive_quad(g, 0.0, TWO_PI, t, weight=kind, wvar=float(n))

    fr, fi = parts
    re = integral(fr, "cos") + integral(fi, "sin")
    im = integral(fi, "cos") - integral(fr, "sin")
    return complex(re, im) / TWO_PI


def _toeplitz_from_coeffs(coeff_of_m, epsilon: float, N: int) -> np.ndarray:
    n = np.arange(-N, N + 1)
    m = n[:, None] - n[None, :]
    table = {k: coeff_of_m(k) for k in range(-2 * N, 2 * N + 1)}
    c = np.vectorize(table.__getitem__, otypes=[complex])(m)
    return np.exp(-epsilon * m**2 / 4.0) * c


def op_angle_function(f, epsilon: float, N: int, tol: float = COEFF_TOL) -> CircleOperator:
    """Quantized f(q): entries exp(-eps (n-n')**2/4) c_{n-n'}(f)."""
    _check_eps(epsilon)
    _check_size(N)
    entries = _toeplitz_from_coeffs(lambda k: fourier_coefficient(f, k, tol), epsilon, N)
    return CircleOperator(N, entries, epsilon, "f(q)")


def op_angle(epsilon: float, N: int) -> CircleOperator:
    """Angle operator: pi on the diagonal, i exp(-eps m**2/4)/m off it (m = n - n')."""
    _check_eps(epsilon)
    _check_size(N)
    entries = _toeplitz_from_coeffs(lambda k: math.pi if k == 0 else 1j / k, epsilon, N)
    return CircleOperator(N, entries, epsilon, "q")


def op_shift(epsilon: float, N: int) -> CircleOperator:
    """Quantized exp(iq): <n+1|S|n> = exp(-eps/4), the first subdiagonal."""
    _check_eps(epsilon)
    _check_size(N)
    entries = np.diag(np.full(2 * N, math.exp(-epsilon / 4.0), dtype=complex), k=-1)
    return CircleOperator(N, entries, epsilon, "exp(iq)")


def commutator(A: CircleOperator, B: CircleOperator) -> CircleOperator:
    if A.N != B.N:
        raise ShapeMismatchError(f"half bandwidths differ: {A.N} vs {B.N}")
    if A.epsilon is not None and B.epsilon is not None and A.epsilon != B.epsilon:
        raise ShapeMismatchError(f"regulators differ: {A.epsilon} vs {B.epsilon}")
    eps = A.epsilon if A.epsilon is not None else B.epsilon
    a, b = A.entries, B.entries
    # With a diagonal factor the commutator is (a_i - a_j) B_ij, which keeps
    # integer level differences exact instead of subtracting rounded products.
    if not np.count_nonzero(a - np.diag(np.diag(a))):
        d = np.diag(a)
        entries = (d[:, None] - d[None, :]) * b
    elif not np.count_nonzero(b - np.diag(np.diag(b))):
        d = np.diag(b)
        entries = -(d[:, None] - d[None, :]) * a
    else:
        entries = a @ b - b @ a
    return CircleOperator(A.N, entries, eps, f"[{A.tag},{B.tag}]")


def lower_symbol_circle(A: CircleOperator, q0: float, p0: float, epsilon: float | None = None) -> complex:
    """<p0, q0|A|p0, q0> in the truncated basis of ``A``."""
    eps = A.epsilon if epsilon is None else epsilon
    if eps is None:
        raise InvalidParameterError("operator carries no regulator; pass epsilon explicitly")
    cs = cs_coeffs_circle(q0, p0, eps, A.N)
    v = cs.coefficients
    return complex(np.vdot(v, A.entries @ v))


def symbol_fourier_series(coeff_of_m, q0: float, p0: float, epsilon: float, m_max: int) -> complex:
    """Lower symbol of a quantized f(q) from its Fourier coefficients.

    sum_m c_m(f) exp(i m q0 - eps m**2/2) r_m, with r_m = 1 for even m and
    N(p0 - 1/2)/N(p0) for odd m.
    """
    ratio = norm_circle_direct(p0 - 0.5, epsilon).value / norm_circle_direct(p0, epsilon).value
    total = 0j
    for m in range(-m_max, m_max + 1):
        c = coeff_of_m(m)
        if c == 0:
            continue
        r = ratio if m % 2 else 1.0
        total += c * np.exp(1j * m * q0 - 0.5 * epsilon * m * m) * r
    return complex(total)


def angle_symbol(q0: float, p0: float, epsilon: float, m_max: int | None = None) -> float:
    """Closed-form lower symbol of the angle operator."""
    if m_max is None:
        m_max = int(math.ceil(math.sqrt(2.0 * 40.0 / epsilon))) + 1
    val = symbol_fourier_series(lambda k: math.pi if k == 0 else 1j / k, q0, p0, epsilon, m_max)
    return val.real


def resolve_identity_circle(epsilon: float, N: int, tol: float = 1e-11) -> np.ndarray:
    """Quadrature of int N(p) |p,q><p,q| dq dp / 2 pi in the basis |n| <= N.

    Serves as an oracle: the result should be the identity matrix.
    """
    _check_eps(epsilon)
    _check_size(N)
    levels = np.arange(-N, N + 1)
    out = np.zeros((levels.size, levels.size), dtype=complex)
    half = 8.0 / math.sqrt(epsilon)
    pref = math.sqrt(epsilon / math.pi) / TWO_PI
    for i, n in enumerate(levels):
        for j, k in enumerate(levels[i:], start=i):
            m = float(n - k)

            # The integrand factorises into a Gaussian in p and exp(-i m q).
            if m == 0:
                q_re, q_im = TWO_PI, 0.0
            else:
                q_re = adaptive_quad(lambda q: 1.0, 0.0, TWO_PI, tol, weight="cos", wvar=m)
                q_im = -adaptive_quad(lambda q: 1.0, 0.0, TWO_PI, tol, weight="sin", wvar=m)
            center = 0.5 * (n + k)
            p_int = adaptive_quad(
                lambda p, n=n, k=k: pref * math.exp(-0.5 * epsilon * ((p - n) ** 2 + (p - k) ** 2)),
                center - half,
                center + half,
                tol,
            )
            re, im = p_int * q_re, p_int * q_im
            out[i, j] = complex(re, im)
            out[j, i] = np.conj(out[i, j])
    return out
