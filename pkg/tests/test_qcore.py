import math

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, strategies as st

from uqsd import (
    EIGEN,
    POLARIZATION,
    BasisMismatchError,
    DensityMatrix2,
    PureState,
    RankTwoMixedState,
    TwoQubitPure,
    density_from_ensemble,
    eigendecompose,
    inner_product,
    partial_trace_idler,
    prepare_spdc,
)

L1 = PureState(1, 0)
L2 = PureState(0, 1)


@st.composite
def pure_states(draw, basis=EIGEN):
    comps = [draw(st.floats(-1, 1, allow_nan=False)) for _ in range(4)]
    norm = math.sqrt(sum(c * c for c in comps))
    if norm < 1e-3:
        comps[0] = 1.0
    return PureState.normalized(complex(comps[0], comps[1]), complex(comps[2], comps[3]), basis)


class TestPureState:
    def test_norm_enforced(self):
        with pytest.raises(ValueError):
            PureState(1.0, 0.5)

    def test_unknown_basis(self):
        with pytest.raises(ValueError):
            PureState(1, 0, "circular")

    def test_normalized_factory(self):
        s = PureState.normalized(1, -1)
        assert s.amp0 == pytest.approx(1 / math.sqrt(2))

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            PureState.normalized(0, 0)


class TestInnerProduct:
    def test_identity(self):
        assert inner_product(L1, L1) == 1

    def test_orthogonal(self):
        assert inner_product(L1, L2) == 0

    def test_hadamard_pair(self):
        plus = PureState.normalized(1, 1)
        minus = PureState.normalized(1, -1)
        assert inner_product(plus, minus) == pytest.approx(0, abs=1e-15)

    def test_basis_mismatch(self):
        with pytest.raises(BasisMismatchError):
            inner_product(L1, PureState(1, 0, POLARIZATION))

    @given(pure_states(), pure_states())
    def test_conjugate_symmetry(self, a, b):
        assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)), abs=1e-15)


class TestDensityFromEnsemble:
    def test_pure(self):
        rho = density_from_ensemble([(1.0, L1)])
        npt.assert_allclose(rho.entries, np.diag([1.0, 0.0]), atol=1e-15)

    def test_maximally_mixed(self):
        rho = density_from_ensemble([(0.5, L1), (0.5, L2)])
        npt.assert_allclose(rho.entries, np.eye(2) / 2, atol=1e-15)

    def test_gamma_decomposition_pair(self):
        # States of the |gamma|^2 = 0.5 decomposition of diag(0.3, 0.7),
        # written out by hand, must mix back to the spectral form.
        r = math.sqrt(0.5)
        den = math.sqrt(0.29)
        b1 = PureState(r, r)
        b2 = PureState(0.3 * r / den, -0.7 * r / den)
        rho = density_from_ensemble([(0.42, b1), (0.58, b2)])
        npt.assert_allclose(rho.entries, np.diag([0.3, 0.7]), atol=1e-12)

    def test_sum_off_rejected(self):
        with pytest.raises(ValueError):
            density_from_ensemble([(0.5, L1), (0.4, L2)])

    def test_mixed_bases_rejected(self):
        with pytest.raises(BasisMismatchError):
            density_from_ensemble([(0.5, L1), (0.5, PureState(0, 1, POLARIZATION))])


class TestDensityMatrix:
    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            DensityMatrix2(np.array([[0.5, 0.1], [0.3, 0.5]]))

    def test_trace_enforced(self):
        with pytest.raises(ValueError):
            DensityMatrix2(np.eye(2))

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(ValueError):
            DensityMatrix2(np.diag([1.5, -0.5]))


class TestEigendecompose:
    def test_diagonal(self):
        mixed = eigendecompose(DensityMatrix2(np.diag([0.3, 0.7])))
        assert mixed.lambda1 == pytest.approx(0.3, abs=1e-14)
        assert mixed.lambda2 == pytest.approx(0.7, abs=1e-14)
        assert abs(mixed.eigvec1.amp0) == pytest.approx(1.0)

    def test_degenerate_reconstructs(self):
        mixed = eigendecompose(DensityMatrix2(np.eye(2) / 2))
        npt.assert_allclose(mixed.density().entries, np.eye(2) / 2, atol=1e-12)

    def test_round_trip_with_ensemble(self):
        r = math.sqrt(0.5)
        den = math.sqrt(0.29)
        rho = density_from_ensemble(
            [(0.42, PureState(r, r)), (0.58, PureState(0.3 * r / den, -0.7 * r / den))]
        )
        mixed = eigendecompose(rho, basis=EIGEN)
        assert mixed.lambda1 == pytest.approx(0.3, abs=1e-12)

    def test_random_round_trips(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            lam = rng.uniform(0.0, 1.0)
            basis_mat = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
            v1 = PureState.normalized(basis_mat[0, 0], basis_mat[1, 0])
            v2 = PureState.normalized(basis_mat[0, 1], basis_mat[1, 1])
            rho = density_from_ensemble([(lam, v1), (1 - lam, v2)])
            mixed = eigendecompose(rho, basis=EIGEN)
            assert mixed.lambda1 == pytest.approx(min(lam, 1 - lam), abs=1e-10)
            npt.assert_allclose(mixed.density().entries, rho.entries, atol=1e-10)


class TestPartialTrace:
    def test_product_state(self):
        rho = partial_trace_idler(TwoQubitPure(np.array([1, 0, 0, 0], dtype=complex)))
        npt.assert_allclose(rho.entries, np.diag([1.0, 0.0]), atol=1e-15)

    def test_entangled_pair(self):
        psi = TwoQubitPure(np.array([math.sqrt(0.3), 0, 0, math.sqrt(0.7)], dtype=complex))
        npt.assert_allclose(partial_trace_idler(psi).entries, np.diag([0.3, 0.7]), atol=1e-12)

    def test_idler_superposition_signal_pure(self):
        psi = TwoQubitPure(np.array([1, 1, 0, 0], dtype=complex) / math.sqrt(2))
        npt.assert_allclose(partial_trace_idler(psi).entries, np.diag([1.0, 0.0]), atol=1e-12)


class TestPrepareSpdc:
    def test_extreme(self):
        npt.assert_allclose(prepare_spdc(1.0).amps, [1, 0, 0, 0])

    def test_bell_like(self):
        npt.assert_allclose(prepare_spdc(0.5).amps, np.array([1, 0, 0, 1]) / math.sqrt(2))

    def test_amplitudes(self):
        npt.assert_allclose(prepare_spdc(0.3).amps, [math.sqrt(0.3), 0, 0, math.sqrt(0.7)])

    @pytest.mark.parametrize("bad", [-0.1, 1.1])
    def test_range_enforced(self, bad):
        with pytest.raises(ValueError):
            prepare_spdc(bad)

    def test_heralded_state_on_grid(self):
        for lam in np.arange(0.0, 1.0 + 1e-9, 0.01):
            rho = partial_trace_idler(prepare_spdc(lam))
            npt.assert_allclose(rho.entries, np.diag([lam, 1 - lam]), atol=1e-12)


class TestRankTwoMixedState:
    def test_eigenvalue_sum_enforced(self):
        with pytest.raises(ValueError):
            RankTwoMixedState(0.3, 0.6, L1, L2)

    def test_orthogonality_enforced(self):
        with pytest.raises(ValueError):
            RankTwoMixedState(0.3, 0.7, L1, PureState.normalized(1, 1))

    def test_labels_not_sorted(self):
        mixed = RankTwoMixedState(0.7, 0.3, L1, L2)
        assert mixed.lambda1 == 0.7
        npt.assert_allclose(mixed.density().entries, np.diag([0.7, 0.3]), atol=1e-15)
