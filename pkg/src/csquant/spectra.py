"""Eigenvalue spectra of truncated well operators."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import InvalidParameterError, StructureError, TruncationWarning
from .well import BlockOperator

STRUCTURE_TOL = 1e-12


@dataclass(frozen=True)
class SpectrumReport:
    """Sorted eigenvalues of a block operator.

    For skew-symmetric operators ``kind`` is ``"imag"`` and ``eigenvalues``
    holds the imaginary parts lambda of the eigenvalues i*lambda.
    """

    tag: str
    N: int
    theta: float
    eigenvalues: np.ndarray = field(repr=False)
    kind: str = "real"
    blocks: tuple = ("plus", "minus")

    @property
    def count(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def summary(self) -> dict:
        ev = self.eigenvalues
        return {
            "operator": self.tag,
            "N": self.N,
            "theta": self.theta,
            "kind": self.kind,
            "count": self.count,
            "min": float(ev.min()) if ev.size else math.nan,
            "max": float(ev.max()) if ev.size else math.nan,
        }


def _select(A: BlockOperator, block):
    if block is None:
        return [A.block_plus, A.block_minus], ("plus", "minus")
    if block not in ("plus", "minus"):
        raise InvalidParameterError(f"block must be 'plus', 'minus' or None, got {block!r}")
    return [A.block_plus if block == "plus" else A.block_minus], (block,)


def _scale(B):
    return max(1.0, float(np.abs(B).max())) if B.size else 1.0


def eigvals_symmetric(A: BlockOperator, block: str | None = None) -> SpectrumReport:
    """Real eigenvalues of a per-block Hermitian operator, merged and sorted."""
    mats, names = _select(A, block)
    vals = []
    for B in mats:
        if not np.allclose(B, B.conj().T, rtol=0, atol=STRUCTURE_TOL * _scale(B)):
            raise StructureError(f"operator {A.tag!r} is not Hermitian")
        vals.append(linalg.eigvalsh(B))
    ev = np.sort(np.concatenate(vals))
    ev.setflags(write=False)
    return SpectrumReport(A.tag, A.size, A.params.theta, ev, "real", names)


def _skew_block_lambdas(K: np.ndarray) -> np.ndarray:
    """Imaginary parts of the eigenvalues of a real antisymmetric matrix.

    When K only couples levels of opposite parity it has the form
    [[0, B], [-B^T, 0]] after reordering, and its eigenvalues are +/- i times
    the singular values of B. Otherwise the Hermitian matrix iK is
    diagonalised and its sorted spectrum symmetrised. Either way the +/-
    pairs are exact.
    """
    n = K.shape[0]
    idx = np.arange(n)
    same_parity = (idx[:, None] + idx[None, :]) % 2 == 0
    if not np.any(K[same_parity]):
        odd_levels, even_levels = idx[::2], idx[1::2]  # levels n = idx + 1
        sv = linalg.svdvals(K[np.ix_(odd_levels, even_levels)]) if even_levels.size else np.zeros(0)
        zeros = np.zeros(n - 2 * sv.size)
        lam = np.concatenate([sv, -sv, zeros])
    else:
        w = np.sort(linalg.eigvalsh(1j * K))
        lam = 0.5 * (w - w[::-1])
    return np.sort(lam)


def eigvals_skew(A: BlockOperator, block: str | None = None) -> SpectrumReport:
    """Imaginary parts of the eigenvalues of a real antisymmetric block operator."""
    mats, names = _select(A, block)
    vals = []
    for B in mats:
        tol = STRUCTURE_TOL * _scale(B)
        if not (np.allclose(B.imag, 0.0, atol=tol) and np.allclose(B.real, -B.real.T, rtol=0, atol=tol)):
            raise StructureError(f"operator {A.tag!r} is not real antisymmetric")
        vals.append(_skew_block_lambdas(np.ascontiguousarray(B.real)))
    ev = np.sort(np.concatenate(vals))
    ev.setflags(write=False)
    return SpectrumReport(A.tag, A.size, A.params.theta, ev, "imag", names)


def spectral_summary(report: SpectrumReport, bands, absolute: bool = False) -> list[int]:
    """Count eigenvalues in each closed band [lo, hi]; bands must not overlap.

    With ``absolute=True`` the moduli |lambda| are counted, which is how the
    accumulation of the commutator spectrum near +/- hbar is measured.
    """
    bands = [(float(lo), float(hi)) for lo, hi in bands]
    for lo, hi in bands:
        if not lo <= hi:
            raise InvalidParameterError(f"band ({lo}, {hi}) has lo > hi")
    ordered = sorted(bands)
    for (_, hi_prev), (lo_next, _) in zip(ordered, ordered[1:]):
        if lo_next <= hi_prev:
            raise InvalidParameterError("bands overlap")
    ev = np.abs(report.eigenvalues) if absolute else report.eigenvalues
    return [int(np.count_nonzero((ev >= lo) & (ev <= hi))) for lo, hi in bands]


def accumulation_fraction(report: SpectrumReport, hbar: float = 1.0, rel: float = 0.1) -> float:
    """Fraction of |lambda| within ``rel`` of hbar.

    Wide Gaussians couple distant levels, so below N = 8 theta the edge of
    the truncated spectrum is distorted; a warning flags such reports.
    """
    if report.theta >= 5 and report.N < 8 * report.theta:
        warnings.warn(
            TruncationWarning(f"N={report.N} < 8*theta={8 * report.theta:g}; edge eigenvalues are truncation-distorted"),
            stacklevel=2,
        )
    if report.count == 0:
        return 0.0
    (inside,) = spectral_summary(report, [((1 - rel) * hbar, (1 + rel) * hbar)], absolute=True)
    return inside / report.count
