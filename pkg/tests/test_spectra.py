import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from csquant import InvalidParameterError, Parameters, StructureError, TruncationWarning
from csquant.spectra import (
    SpectrumReport,
    accumulation_fraction,
    eigvals_skew,
    eigvals_symmetric,
    spectral_summary,
)
from csquant.well import SIGMA0, SIGMA3, BlockOperator, commutator_qp, identity, op_hamiltonian, op_momentum, op_position

P0 = Parameters()
# Fraction of |lambda| within 10% of hbar at theta = 10, N = 48, frozen at the
# first verified run (84 of 96 eigenvalues).
GOLDEN_ACCUMULATION = 0.875


def test_momentum_spectrum():
    ev = eigvals_symmetric(op_momentum(P0, 4)).eigenvalues
    assert np.array_equal(ev, [-4, -3, -2, -1, 1, 2, 3, 4])


@pytest.mark.parametrize("theta", [0.1, 3.0])
def test_momentum_spectrum_exact_any_theta(theta):
    ev = eigvals_symmetric(op_momentum(Parameters(theta=theta), 40)).eigenvalues
    n = np.arange(1, 41, dtype=float)
    assert np.array_equal(ev, np.sort(np.concatenate([-n, n])))


def test_identity_and_hamiltonian():
    assert np.array_equal(eigvals_symmetric(identity(P0, 5)).eigenvalues, np.ones(10))
    ev = eigvals_symmetric(op_hamiltonian(P0, 3)).eigenvalues
    assert np.allclose(ev, [1.5, 1.5, 4.5, 4.5, 9.5, 9.5], rtol=0, atol=1e-13)


def test_position_collapses_at_small_theta():
    ev = eigvals_symmetric(op_position(Parameters(theta=0.05), 32)).eigenvalues
    assert np.max(np.abs(ev - math.pi / 2)) < 1e-3


def test_position_spectrum_shrinks():
    widths = []
    for theta in (1.0, 0.5, 0.2, 0.1, 0.05):
        ev = eigvals_symmetric(op_position(Parameters(theta=theta), 32)).eigenvalues
        widths.append(max(ev.max() - math.pi / 2, math.pi / 2 - ev.min()))
    assert all(a > b for a, b in zip(widths, widths[1:]))


def test_single_block_and_count():
    r = eigvals_symmetric(op_position(P0, 7), block="minus")
    assert r.count == 7 and r.blocks == ("minus",)
    assert eigvals_symmetric(op_position(P0, 7)).count == 14
    with pytest.raises(InvalidParameterError):
        eigvals_symmetric(op_position(P0, 7), block="up")


def test_structure_errors():
    with pytest.raises(StructureError):
        eigvals_symmetric(commutator_qp(P0, 6))
    with pytest.raises(StructureError):
        eigvals_skew(op_position(P0, 6))


class TestSkew:
    def test_commutator_small_theta(self):
        ev = eigvals_skew(commutator_qp(Parameters(theta=0.05), 32)).eigenvalues
        assert np.max(np.abs(ev)) < 1e-3

    def test_zero_matrix(self):
        Z = BlockOperator.from_plus(np.zeros((5, 5)), SIGMA3, P0)
        r = eigvals_skew(Z)
        assert r.kind == "imag" and np.all(r.eigenvalues == 0)

    @given(st.floats(0.05, 12.0), st.integers(1, 60))
    def test_pairs_and_reference(self, theta, N):
        X = commutator_qp(Parameters(theta=theta), N)
        ev = eigvals_skew(X).eigenvalues
        assert ev.size == 2 * N
        assert np.array_equal(ev, -ev[::-1])
        ref = np.sort(np.linalg.eigvals(X.block_plus.real).imag)
        mine = eigvals_skew(X, block="plus").eigenvalues
        assert np.max(np.abs(mine - ref)) < 1e-12 * max(1.0, np.abs(ref).max())
        assert np.max(np.abs(np.linalg.eigvals(X.block_plus.real).real)) < 1e-12

    def test_generic_skew_matrix(self):
        # couples same-parity levels, so the symmetric route is taken
        rng = np.random.default_rng(7)
        A = rng.normal(size=(9, 9))
        K = A - A.T
        r = eigvals_skew(BlockOperator.from_plus(K, SIGMA0, P0), block="plus")
        ref = np.sort(np.linalg.eigvals(K).imag)
        assert np.allclose(r.eigenvalues, ref, rtol=0, atol=1e-12)
        assert np.array_equal(r.eigenvalues, -r.eigenvalues[::-1])

    def test_accumulation_golden(self):
        r = eigvals_skew(commutator_qp(Parameters(theta=10.0), 48))
        with pytest.warns(TruncationWarning):
            frac = accumulation_fraction(r)
        assert frac == GOLDEN_ACCUMULATION
        assert frac >= 0.6
        assert spectral_summary(r, [(0.9, 1.1)], absolute=True) == [84]

    def test_accumulation_grows_with_theta(self):
        fracs = [accumulation_fraction(eigvals_skew(commutator_qp(Parameters(theta=t), 64))) for t in (0.5, 2.0, 4.0)]
        assert fracs[0] < fracs[1] < fracs[2]

    def test_no_warning_with_enough_levels(self, recwarn):
        accumulation_fraction(eigvals_skew(commutator_qp(Parameters(theta=5.0), 40)))
        assert not [w for w in recwarn if issubclass(w.category, TruncationWarning)]


class TestSummary:
    def test_whole_line(self):
        r = eigvals_symmetric(op_position(P0, 9))
        assert spectral_summary(r, [(-math.inf, math.inf)]) == [18]

    def test_empty_spectrum(self):
        empty = SpectrumReport("x", 0, 1.0, np.zeros(0))
        assert spectral_summary(empty, [(0, 1), (2, 3)]) == [0, 0]
        assert accumulation_fraction(empty) == 0.0

    def test_totals_preserved(self):
        r = eigvals_symmetric(op_momentum(P0, 6))
        assert sum(spectral_summary(r, [(-10, -0.5), (0.5, 10)])) == r.count

    def test_overlap_rejected(self):
        r = eigvals_symmetric(op_momentum(P0, 3))
        with pytest.raises(InvalidParameterError):
            spectral_summary(r, [(0, 2), (1, 3)])
        with pytest.raises(InvalidParameterError):
            spectral_summary(r, [(2, 1)])

    def test_summary_dict(self):
        s = eigvals_symmetric(op_momentum(P0, 3)).summary
        assert (s["min"], s["max"], s["count"], s["kind"]) == (-3.0, 3.0, 6, "real")

    def test_readonly(self):
        with pytest.raises(ValueError):
            eigvals_symmetric(op_momentum(P0, 3)).eigenvalues[0] = 1
