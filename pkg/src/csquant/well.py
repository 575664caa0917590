"""Spinor coherent states and quantized observables of the infinite square well.

Operators never mix the two momentum branches kappa = +/-, so a
:class:`BlockOperator` stores one N x N block per branch over the levels
n = 1..N.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError, ShapeMismatchError, TruncationWarning
from .kernels import norm_well, one_sided_tail
from .params import Parameters, PhasePoint, check_inside_well
from .quadrature import COEFF_TOL, adaptive_quad

SIGMA0 = "sigma0"
SIGMA3 = "sigma3"
GENERAL = "general"

# Quadrature windows extend this many rho around each Gaussian centre.
WINDOW_RHOS = 8.0


@dataclass(frozen=True)
class BlockOperator:
    """Truncated operator on C^2 (x) H as a pair of N x N blocks.

    ``spin_structure`` is ``"sigma0"`` when both blocks are equal,
    ``"sigma3"`` when they are opposite and ``"general"`` otherwise.
    """

    size: int
    block_plus: np.ndarray = field(repr=False)
    block_minus: np.ndarray = field(repr=False)
    spin_structure: str
    params: Parameters
    tag: str = ""

    def __post_init__(self):
        for name in ("block_plus", "block_minus"):
            arr = np.array(getattr(self, name), dtype=complex)
            if arr.shape != (self.size, self.size):
                raise ShapeMismatchError(f"{name} must be {self.size}x{self.size}, got {arr.shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.spin_structure not in (SIGMA0, SIGMA3, GENERAL):
            raise InvalidParameterError(f"unknown spin structure {self.spin_structure!r}")

    @classmethod
    def from_plus(cls, block, structure, params, tag=""):
        block = np.asarray(block)
        minus = block if structure == SIGMA0 else -block
        return cls(block.shape[0], block, minus, structure, params, tag)

    @property
    def blocks(self):
        return (self.block_plus, self.block_minus)

    @property
    def levels(self) -> np.ndarray:
        return np.arange(1, self.size + 1)

    def full(self) -> np.ndarray:
        """The 2N x 2N matrix, kappa = + block first."""
        z = np.zeros((self.size, self.size), dtype=complex)
        return np.block([[self.block_plus, z], [z, self.block_minus]])

    def _check_compatible(self, other):
        if not isinstance(other, BlockOperator):
            return NotImplemented
        if other.size != self.size:
            raise ShapeMismatchError(f"sizes differ: {self.size} vs {other.size}")
        return True

    def __matmul__(self, other):
        if self._check_compatible(other) is NotImplemented:
            return NotImplemented
        plus = self.block_plus @ other.block_plus
        minus = self.block_minus @ other.block_minus
        structure = _product_structure(self.spin_structure, other.spin_structure)
        return BlockOperator(self.size, plus, minus, structure, self.params, f"{self.tag}{other.tag}")

    def __add__(self, other):
        if self._check_compatible(other) is NotImplemented:
            return NotImplemented
        structure = self.spin_structure if self.spin_structure == other.spin_structure else GENERAL
        return BlockOperator(
            self.size,
            self.block_plus + other.block_plus,
            self.block_minus + other.block_minus,
            structure,
            self.params,
            f"({self.tag}+{other.tag})",
        )

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def scaled(self, factor) -> "BlockOperator":
        return BlockOperator(
            self.size,
            factor * self.block_plus,
            factor * self.block_minus,
            self.spin_structure,
            self.params,
            self.tag,
        )

    def dagger(self) -> "BlockOperator":
        return BlockOperator(
            self.size,
            self.block_plus.conj().T,
            self.block_minus.conj().T,
            self.spin_structure,
            self.params,
            f"{self.tag}^+",
        )

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return all(np.allclose(b, b.conj().T, rtol=0, atol=atol) for b in self.blocks)

    def is_real_antisymmetric(self, atol: float = 1e-12) -> bool:
        return all(
            np.allclose(b.imag, 0, atol=atol) and np.allclose(b.real, -b.real.T, rtol=0, atol=atol)
            for b in self.blocks
        )


def _product_structure(a, b):
    if GENERAL in (a, b):
        return GENERAL
    return SIGMA0 if a == b else SIGMA3


def commutator(A: BlockOperator, B: BlockOperator) -> BlockOperator:
    C = A @ B - B @ A
    return BlockOperator(C.size, C.block_plus, C.block_minus, C.spin_structure, A.params, f"[{A.tag},{B.tag}]")


def identity(params: Parameters, N: int) -> BlockOperator:
    _check_size(N)
    return BlockOperator.from_plus(np.eye(N), SIGMA0, params, "I")


@dataclass(frozen=True)
class SpinorCS:
    point: PhasePoint
    plus: np.ndarray = field(repr=False)
    minus: np.ndarray = field(repr=False)
    normalization: float
    tail_bound: float

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.plus, self.minus])

    @property
    def branch_norms(self):
        """Squared norms of the kappa = + and kappa = - components."""
        return float(self.plus @ self.plus), float(self.minus @ self.minus)


@dataclass(frozen=True)
class CosineCoefficients:
    tag: str
    values: np.ndarray = field(repr=False)
    tol: float

    def __getitem__(self, m):
        return self.values[abs(m)]


def _check_size(N):
    if not (isinstance(N, (int, np.integer)) and N >= 1):
        raise InvalidParameterError(f"size N must be a positive integer, got {N!r}")


# --- coherent states ----------------------------------------------------------

def cs_coeffs_well(x: PhasePoint, params: Parameters, N: int, tol: float = 1e-12) -> SpinorCS:
    """Real components <n, kappa|x, kappa> of the two orthogonal well CS, n = 1..N.

    The normalisation uses the full (untruncated) kernel N(x), so the
    truncated components lose whatever weight lies above level N; a
    :class:`TruncationWarning` is emitted when that loss exceeds ``tol``.
    """
    _check_size(N)
    x = PhasePoint(*x)
    check_inside_well(x.q, params)
    norm = norm_well(x, params).value
    n = np.arange(1, N + 1, dtype=float)
    pn = params.p_n(n)
    rho = params.rho
    s = np.sin(n * math.pi * x.q / params.length)
    amp = math.sqrt(params.c / norm)
    plus = amp * np.exp(-((x.p - pn) ** 2) / (2 * rho**2)) * s
    minus = amp * np.exp(-((x.p + pn) ** 2) / (2 * rho**2)) * s
    # Levels above N: both branches bounded by the branch centred at |p|.
    d = params.p_n(N + 1) - abs(x.p)
    tail = 2.0 * params.c / norm * one_sided_tail(d, rho, params.momentum_quantum) if d > 0 else 1.0
    if tail > tol:
        warnings.warn(
            TruncationWarning(f"well CS at {tuple(x)} leaks up to {tail:.3g} above level {N}", tail),
            stacklevel=2,
        )
    for arr in (plus, minus):
        arr.setflags(write=False)
    return SpinorCS(x, plus, minus, norm, min(tail, 1.0))


# --- momentum-type operators --------------------------------------------------

def op_momentum(params: Parameters, N: int) -> BlockOperator:
    """p-hat = sum_n p_n sigma_3 (x) |n><n|."""
    _check_size(N)
    return BlockOperator.from_plus(np.diag(params.p_n(np.arange(1, N + 1, dtype=float))), SIGMA3, params, "p")


def op_momentum_fn(f, params: Parameters, N: int, tol: float = COEFF_TOL) -> BlockOperator:
    """Quantized f(p): diagonal with (1/(rho sqrt(pi))) int f(p) exp(-(p -/+ p_n)**2/rho**2) dp."""
    _check_size(N)
    rho = params.rho
    pref = 1.0 / (rho * math.sqrt(math.pi))
    half = WINDOW_RHOS * rho
    diag = np.empty((2, N))
    for k, sign in enumerate((1.0, -1.0)):
        for i in range(N):
            center = sign * params.p_n(i + 1)
            diag[k, i] = pref * adaptive_quad(
                lambda p, c=center: f(p) * math.exp(-((p - c) ** 2) / rho**2),
                center - half,
                center + half,
                tol / pref,
            )
    plus, minus = diag
    scale = max(1.0, np.abs(diag).max())
    if np.allclose(plus, minus, rtol=0, atol=10 * tol * scale):
        structure, minus = SIGMA0, plus
    elif np.allclose(plus, -minus, rtol=0, atol=10 * tol * scale):
        structure, minus = SIGMA3, -plus
    else:
        structure = GENERAL
    return BlockOperator(N, np.diag(plus), np.diag(minus), structure, params, "f(p)")


def op_p_squared(params: Parameters, N: int) -> BlockOperator:
    """Quantized p**2: (p-hat)**2 + rho**2/2."""
    _check_size(N)
    pn = params.p_n(np.arange(1, N + 1, dtype=float))
    return BlockOperator.from_plus(np.diag(pn**2 + params.rho**2 / 2.0), SIGMA0, params, "p^2")


def op_hamiltonian(params: Parameters, N: int) -> BlockOperator:
    """H-hat = quantized p**2 / 2m; entries E_n + rho**2/(4m)."""
    P2 = op_p_squared(params, N)
    return BlockOperator.from_plus(P2.block_plus / (2.0 * params.mass), SIGMA0, params, "H")


# --- position-type operators --------------------------------------------------

def _check_bounded(f, params):
    qs = np.linspace(0.0, params.length, 257)[1:-1]
    vals = np.array([f(q) for q in qs], dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise InvalidParameterError("f(q) must be bounded on (0, L)")


def cosine_coefficient(f, m: int, params: Parameters, tol: float = COEFF_TOL) -> float:
    """d_m(f) = (1/L) int_0^L f(q) cos(m pi q/L) dq."""
    L = params.length
    if m == 0:
        return adaptive_quad(f, 0.0, L, tol * L) / L
    return adaptive_quad(f, 0.0, L, tol * L, weight="cos", wvar=m * math.pi / L) / L


def cosine_coefficients(f, m_max: int, params: Parameters, tol: float = COEFF_TOL, tag: str = "f") -> CosineCoefficients:
    _check_bounded(f, params)
    vals = np.array([cosine_coefficient(f, m, params, tol) for m in range(m_max + 1)])
    vals.setflags(write=False)
    return CosineCoefficients(tag, vals, tol)


def _gauss_coupling(params: Parameters, N: int) -> np.ndarray:
    n = np.arange(1, N + 1)
    dp = params.p_n(n[:, None] - n[None, :])
    return np.exp(-(dp**2) / (4.0 * params.rho**2))


def op_position_fn(f, params: Parameters, N: int, tol: float = COEFF_TOL) -> BlockOperator:
    """Quantized f(q): entries exp(-(p_n - p_n')**2/(4 rho**2)) [d_{n-n'}(f) - d_{n+n'}(f)]."""
    _check_size(N)
    d = cosine_coefficients(f, 2 * N, params, tol)
    n = np.arange(1, N + 1)
    block = _gauss_coupling(params, N) * (d.values[np.abs(n[:, None] - n[None, :])] - d.values[n[:, None] + n[None, :]])
    return BlockOperator.from_plus(block, SIGMA0, params, "f(q)")


def _odd_kernel(N):
    """[1/(n-n')**2 - 1/(n+n')**2] on n + n' odd, zero elsewhere; also returns n - n'."""
    n = np.arange(1, N + 1)
    dn = n[:, None] - n[None, :]
    sn = n[:, None] + n[None, :]
    odd = (sn % 2) == 1
    K = np.zeros((N, N))
    K[odd] = 1.0 / dn[odd] ** 2 - 1.0 / sn[odd] ** 2
    return K, dn


def op_position(params: Parameters, N: int) -> BlockOperator:
    """q-hat: L/2 on the diagonal, -(2L/pi**2) G_{nn'} [1/(n-n')**2 - 1/(n+n')**2] for n+n' odd."""
    _check_size(N)
    L = params.length
    K, _ = _odd_kernel(N)
    block = -(2.0 * L / math.pi**2) * _gauss_coupling(params, N) * K + (L / 2.0) * np.eye(N)
    return BlockOperator.from_plus(block, SIGMA0, params, "q")


def op_position_squared(params: Parameters, N: int) -> BlockOperator:
    """Quantized q**2 from the closed-form cosine coefficients of q**2.

    d_0 = L**2/3 and d_m = 2 L**2 (-1)**m / (m pi)**2 for m >= 1.
    """
    _check_size(N)
    L = params.length
    m = np.arange(0, 2 * N + 1, dtype=float)
    d = np.empty_like(m)
    d[0] = L**2 / 3.0
    d[1:] = 2.0 * L**2 * (-1.0) ** m[1:] / (m[1:] * math.pi) ** 2
    n = np.arange(1, N + 1)
    block = _gauss_coupling(params, N) * (d[np.abs(n[:, None] - n[None, :])] - d[n[:, None] + n[None, :]])
    return BlockOperator.from_plus(block, SIGMA0, params, "q^2")


def commutator_qp(params: Parameters, N: int) -> BlockOperator:
    """[q-hat, p-hat] = (2 hbar/pi) C_{nn'} sigma_3, a real antisymmetric matrix."""
    _check_size(N)
    K, dn = _odd_kernel(N)
    block = (2.0 * params.hbar / math.pi) * _gauss_coupling(params, N) * dn * K
    return BlockOperator.from_plus(block, SIGMA3, params, "[q,p]")


# --- dynamics -----------------------------------------------------------------

def _cycles(params: Parameters, t: float):
    """omega*t/(2 pi) reduced modulo 1; exact when t is a multiple of the revival time."""
    return math.fmod(t / params.revival_time, 1.0)


def evolution_operator(t: float, params: Parameters, N: int) -> BlockOperator:
    """U(t) = exp(-i omega_theta t) sum_n exp(-i p_n**2 t/(2 m hbar)) sigma_0 (x) |n><n|."""
    _check_size(N)
    tau = _cycles(params, t)
    n = np.arange(1, N + 1)
    level_cycles = np.mod((n * n) * tau, 1.0)
    # theta**2/2 is not an integer, so the global phase needs the unreduced ratio.
    global_cycles = math.fmod(params.theta**2 / 2.0 * (t / params.revival_time), 1.0)
    phases = np.exp(-2j * math.pi * (level_cycles + global_cycles))
    return BlockOperator.from_plus(np.diag(phases), SIGMA0, params, "U")


def heisenberg_position(t: float, params: Parameters, N: int) -> BlockOperator:
    """q-hat(t) = U(t)^+ q-hat U(t); entries q_{nn'} exp(i (E_n - E_n') t/hbar)."""
    Q = op_position(params, N)
    tau = _cycles(params, t)
    n = np.arange(1, N + 1)
    freq = n[:, None] ** 2 - n[None, :] ** 2
    phase = np.exp(2j * math.pi * np.mod(freq * tau, 1.0))
    return BlockOperator.from_plus(Q.block_plus * phase, SIGMA0, params, "q(t)")


# --- quadrature oracle --------------------------------------------------------

def quantize_by_quadrature(f, params: Parameters, N: int, tol: float = 1e-10, p_centers=()) -> BlockOperator:
    """Oracle: int int phi_{n,k}(q,p) f(q,p) phi_{n',k}(q,p) dq dp by nested quadrature.

    For each entry the p integral covers +/- 8 rho around the centre of the
    Gaussian product, kappa*(p_n + p_n')/2, extended to any ``p_centers``
    where ``f`` localises. The inner q integral runs over [0, L].
    """
    _check_size(N)
    _warn_window(f, params, p_centers, tol)
    L, rho, c = params.length, params.rho, params.c
    half = WINDOW_RHOS * rho
    blocks = np.zeros((2, N, N), dtype=complex)
    probe = complex(f(0.5 * L, 0.0))
    complex_f = probe.imag != 0.0
    parts = [lambda q, p: float(np.real(f(q, p)))]
    if complex_f:
        parts.append(lambda q, p: float(np.imag(f(q, p))))

    def entry(g, n, k, sign):
        pn, pk = params.p_n(n), params.p_n(k)
        center = sign * 0.5 * (pn + pk)
        lo, hi = center - half, center + half
        for pc in p_centers:
            lo, hi = min(lo, pc - half), max(hi, pc + half)
        kn, kk = n * math.pi / L, k * math.pi / L

        def inner(p):
            gauss = c * math.exp(-((p - sign * pn) ** 2 + (p - sign * pk) ** 2) / (2 * rho**2))
            if gauss == 0.0:
                return 0.0
            # The inner error is multiplied by gauss and then integrated over the window.
            inner_tol = tol / (10.0 * gauss * (hi - lo))
            val = adaptive_quad(lambda q: g(q, p) * math.sin(kn * q) * math.sin(kk * q), 0.0, L, inner_tol)
            return gauss * val

        return adaptive_quad(inner, lo, hi, tol, limit=400)

    for b, sign in enumerate((1.0, -1.0)):
        for n in range(1, N + 1):
            for k in range(n, N + 1):
                val = entry(parts[0], n, k, sign)
                if complex_f:
                    val = complex(val, entry(parts[1], n, k, sign))
                # phi_{n,k} is real, so the quantized matrix is symmetric.
                blocks[b, n - 1, k - 1] = blocks[b, k - 1, n - 1] = val
    plus, minus = blocks
    if np.allclose(plus, minus, rtol=0, atol=10 * tol):
        structure = SIGMA0
    elif np.allclose(plus, -minus, rtol=0, atol=10 * tol):
        structure = SIGMA3
    else:
        structure = GENERAL
    return BlockOperator(N, plus, minus, structure, params, "oracle")


def _warn_window(f, params, p_centers, tol):
    """Warn if f grows fast enough to make the Gaussian-window edges matter."""
    rho = params.rho
    edge_weight = params.c * math.exp(-(WINDOW_RHOS**2)) * rho * params.length
    q = 0.5 * params.length
    for pc in (params.p_n(1), -params.p_n(1), *p_centers):
        for edge in (pc - WINDOW_RHOS * rho, pc + WINDOW_RHOS * rho):
            if abs(f(q, edge)) * edge_weight > tol:
                warnings.warn(
                    TruncationWarning(f"f is large at the quadrature window edge p={edge:.4g}", None),
                    stacklevel=3,
                )
                return


def overlap_matrix(params: Parameters, N: int, tol: float = 1e-10) -> np.ndarray:
    """Quadrature Gram matrix of the 2N spinor basis functions (should be the identity).

    Entries with different kappa vanish identically because the two
    components occupy different spinor slots.
    """
    I = quantize_by_quadrature(lambda q, p: 1.0, params, N, tol)
    z = np.zeros((N, N))
    return np.block([[I.block_plus.real, z], [z, I.block_minus.real]])
