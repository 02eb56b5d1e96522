"""Minimal complex linear algebra for two-level and two-qubit systems.

Normalized two-component pure states carry an explicit basis tag so that
overlaps are never taken across incompatible encodings.  Density matrices
are plain 2x2 Hermitian arrays with unit trace.  The two-qubit machinery
exists only to herald a rank-two mixed signal state from a polarization
entangled photon pair by tracing out the idler.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Construction invariants are checked at this tolerance; round trips
# (reconstruction, eigendecomposition) get the looser one.
ATOL = 1e-12
RECONSTRUCTION_ATOL = 1e-10

EIGEN = "eigen"
POLARIZATION = "polarization"
_BASES = (EIGEN, POLARIZATION)


class BasisMismatchError(ValueError):
    """States from different encodings were combined."""


@dataclass(frozen=True)
class PureState:
    """Normalized two-component state |psi> = amp0|e0> + amp1|e1>.

    The basis tag names the reference frame of the two components:
    ``eigen`` for the eigenbasis of a mixed state, ``polarization`` for
    the horizontal/vertical photon basis.
    """

    amp0: complex
    amp1: complex
    basis: str = EIGEN

    def __post_init__(self):
        if self.basis not in _BASES:
            raise ValueError(f"unknown basis tag {self.basis!r}")
        norm_sq = abs(self.amp0) ** 2 + abs(self.amp1) ** 2
        if abs(norm_sq - 1.0) > ATOL:
            raise ValueError(f"state not normalized: |amp|^2 = {norm_sq!r}")

    @classmethod
    def normalized(cls, amp0, amp1, basis: str = EIGEN) -> "PureState":
        """Build a state from unnormalized amplitudes."""
        norm = math.sqrt(abs(amp0) ** 2 + abs(amp1) ** 2)
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(complex(amp0) / norm, complex(amp1) / norm, basis)

    def vector(self) -> np.ndarray:
        return np.array([self.amp0, self.amp1], dtype=complex)

    def projector(self) -> np.ndarray:
        v = self.vector()
        return np.outer(v, v.conj())


def inner_product(a: PureState, b: PureState) -> complex:
    """<a|b> for states sharing a basis tag."""
    if a.basis != b.basis:
        raise BasisMismatchError(f"cannot overlap {a.basis!r} with {b.basis!r}")
    return complex(np.conj(a.amp0) * b.amp0 + np.conj(a.amp1) * b.amp1)


@dataclass(frozen=True, eq=False)
class DensityMatrix2:
    """2x2 density matrix: Hermitian, unit trace, positive semidefinite."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, rtol=0.0, atol=ATOL):
            raise ValueError("matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > ATOL:
            raise ValueError(f"trace is {np.trace(m).real!r}, expected 1")
        if np.linalg.eigvalsh(m).min() < -ATOL:
            raise ValueError("matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)


@dataclass(frozen=True)
class RankTwoMixedState:
    """Spectral data (lambda1, lambda2) with an orthonormal eigenbasis.

    The (lambda1, eigvec1) pairing is whatever the caller supplies; the
    labels are not sorted by magnitude, because the decomposition
    formulas are label sensitive.
    """

    lambda1: float
    lambda2: float
    eigvec1: PureState
    eigvec2: PureState

    def __post_init__(self):
        if not (-ATOL <= self.lambda1 <= 1 + ATOL and -ATOL <= self.lambda2 <= 1 + ATOL):
            raise ValueError("eigenvalues must lie in [0, 1]")
        if abs(self.lambda1 + self.lambda2 - 1.0) > ATOL:
            raise ValueError("eigenvalues must sum to 1")
        if abs(inner_product(self.eigvec1, self.eigvec2)) > ATOL:
            raise ValueError("eigenvectors are not orthogonal")

    def density(self) -> DensityMatrix2:
        m = self.lambda1 * self.eigvec1.projector() + self.lambda2 * self.eigvec2.projector()
        return DensityMatrix2(m)


@dataclass(frozen=True, eq=False)
class TwoQubitPure:
    """Signal/idler pure state over the product basis (hh, hv, vh, vv)."""

    amps: np.ndarray

    def __post_init__(self):
        v = np.array(self.amps, dtype=complex)
        if v.shape != (4,):
            raise ValueError(f"expected 4 amplitudes, got shape {v.shape}")
        if abs(np.vdot(v, v).real - 1.0) > ATOL:
            raise ValueError("two-qubit state not normalized")
        v.setflags(write=False)
        object.__setattr__(self, "amps", v)


def density_from_ensemble(pairs) -> DensityMatrix2:
    """Mix pure states with the given a priori probabilities.

    ``pairs`` is a sequence of (probability, PureState); the probabilities
    must be nonnegative and sum to 1 within 1e-9, and the states must share
    a basis tag.
    """
    if not pairs:
        raise ValueError("empty ensemble")
    basis = pairs[0][1].basis
    total = 0.0
    rho = np.zeros((2, 2), dtype=complex)
    for p, state in pairs:
        if p < -ATOL:
            raise ValueError(f"negative probability {p!r}")
        if state.basis != basis:
            raise BasisMismatchError("ensemble states use mixed basis tags")
        total += p
        rho += p * state.projector()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {total!r}, expected 1")
    return DensityMatrix2(rho)


def eigendecompose(rho: DensityMatrix2, basis: str = POLARIZATION) -> RankTwoMixedState:
    """Spectral decomposition of a 2x2 density matrix.

    Eigenvalues come out in ascending order, lambda1 paired with eigvec1.
    For a degenerate spectrum the eigenvectors are not unique; numpy then
    returns the canonical basis of the input representation and only the
    reconstruction contract is meaningful.  The tag of the returned
    eigenvectors describes the representation ``rho`` was written in.
    """
    evals, evecs = np.linalg.eigh(rho.entries)
    v1 = PureState.normalized(evecs[0, 0], evecs[1, 0], basis)
    v2 = PureState.normalized(evecs[0, 1], evecs[1, 1], basis)
    lam1 = min(max(float(evals[0]), 0.0), 1.0)
    return RankTwoMixedState(lam1, 1.0 - lam1, v1, v2)


def partial_trace_idler(psi: TwoQubitPure) -> DensityMatrix2:
    """Reduced density matrix of the signal qubit (idler ignored)."""
    a = psi.amps.reshape(2, 2)  # rows: signal h/v, columns: idler h/v
    return DensityMatrix2(a @ a.conj().T)


def prepare_spdc(lambda1: float) -> TwoQubitPure:
    """Two-photon state sqrt(l1)|hh> + sqrt(1-l1)|vv>.

    Ignoring the idler leaves the signal photon in the mixed state
    diag(lambda1, 1-lambda1) in the h/v basis.
    """
    if not (0.0 <= lambda1 <= 1.0):
        raise ValueError(f"lambda1 = {lambda1!r} outside [0, 1]")
    return TwoQubitPure(np.array([math.sqrt(lambda1), 0.0, 0.0, math.sqrt(1.0 - lambda1)], dtype=complex))
