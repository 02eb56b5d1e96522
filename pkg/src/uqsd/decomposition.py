"""Two-state pure decompositions of a rank-two mixed state.

A density matrix diag(l1, l2) in its eigenbasis admits a one complex
parameter family of decompositions rho = p1|b1><b1| + p2|b2><b2| into
generally nonorthogonal states.  The parameter gamma = <l1|b1> indexes
the family; its modulus moves the priors between the spectral point
(orthogonal states, |gamma| in {0, 1}) and the balanced point
(p1 = p2 = 1/2 at |gamma|^2 = l1, where the overlap modulus peaks at
|l1 - l2|).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .qcore import ATOL, EIGEN, PureState, RankTwoMixedState, DensityMatrix2, inner_product

_TWO_PI = 2.0 * math.pi


class DegenerateDecompositionError(ValueError):
    """The requested family member is singular for these eigenvalues."""


class InconsistentInputsError(ValueError):
    """The supplied states do not decompose the supplied density matrix."""


@dataclass(frozen=True)
class DecompositionParameter:
    """gamma = modulus * e^{i phase}, the |l1> component of |b1>.

    Phase is stored in [0, 2pi); a zero-modulus parameter has no physical
    phase and stores 0 so round trips are deterministic.
    """

    modulus: float
    phase: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.modulus <= 1.0):
            raise ValueError(f"|gamma| = {self.modulus!r} outside [0, 1]")
        phase = 0.0 if self.modulus == 0.0 else self.phase % _TWO_PI
        object.__setattr__(self, "phase", phase)

    @property
    def value(self) -> complex:
        return self.modulus * cmath.exp(1j * self.phase)


@dataclass(frozen=True)
class Decomposition:
    """One member of the family: priors, states, and their overlap.

    The states are expressed in the eigenbasis of the source density
    matrix, so the mixture p1|b1><b1| + p2|b2><b2| must come out diagonal;
    that cancellation is checked here, equality with the source spectrum
    is the concern of the constructing operations.
    """

    gamma: DecompositionParameter
    p1: float
    p2: float
    beta1: PureState
    beta2: PureState
    overlap: complex

    def __post_init__(self):
        if not (-ATOL <= self.p1 <= 1 + ATOL and -ATOL <= self.p2 <= 1 + ATOL):
            raise ValueError("priors must lie in [0, 1]")
        if abs(self.p1 + self.p2 - 1.0) > ATOL:
            raise ValueError("priors must sum to 1")
        if abs(self.overlap - inner_product(self.beta1, self.beta2)) > ATOL:
            raise ValueError("stored overlap disagrees with <beta1|beta2>")
        if abs(self.reconstruction()[0, 1]) > 1e-10:
            raise ValueError("mixture is not diagonal in the eigenbasis")

    def reconstruction(self) -> np.ndarray:
        return self.p1 * self.beta1.projector() + self.p2 * self.beta2.projector()


def decomposition_probabilities(lambda1: float, gamma_modulus: float) -> tuple[float, float]:
    """A priori probabilities (p1, p2) of the |gamma|-decomposition."""
    _check_unit_interval("lambda1", lambda1)
    _check_unit_interval("gamma_modulus", gamma_modulus)
    lambda2 = 1.0 - lambda1
    g2 = gamma_modulus * gamma_modulus
    den = lambda1 + (lambda2 - lambda1) * g2
    if den <= 0.0:
        raise DegenerateDecompositionError(
            f"denominator l1 + (l2 - l1)|g|^2 vanishes at lambda1={lambda1!r}, |gamma|={gamma_modulus!r}"
        )
    p1 = lambda1 * lambda2 / den
    p2 = (lambda1 * lambda1 + (lambda2 - lambda1) * g2) / den
    return p1, p2


def decomposition_overlap(lambda1: float, gamma: DecompositionParameter) -> complex:
    """Closed-form <b1|b2> of the gamma-decomposition."""
    _check_unit_interval("lambda1", lambda1)
    lambda2 = 1.0 - lambda1
    g = gamma.modulus
    g2 = g * g
    den_sq = lambda1 * lambda1 + (lambda2 - lambda1) * g2
    if den_sq <= 0.0:
        raise DegenerateDecompositionError(
            f"denominator sqrt(l1^2 + (l2 - l1)|g|^2) vanishes at lambda1={lambda1!r}, |gamma|={g!r}"
        )
    mag = (lambda1 - lambda2) * g * math.sqrt(1.0 - g2) / math.sqrt(den_sq)
    return mag * cmath.exp(-1j * gamma.phase)


def decomposition_states(state: RankTwoMixedState, gamma: DecompositionParameter) -> Decomposition:
    """The gamma-decomposition of a nondegenerate rank-two mixed state.

    |b1> = gamma|l1> + sqrt(1-|gamma|^2)|l2> and |b2> is fixed by the
    requirement that the pair rebuild the source matrix with the priors
    of :func:`decomposition_probabilities`.
    """
    lambda1, lambda2 = state.lambda1, state.lambda2
    if abs(lambda1 - lambda2) <= ATOL:
        raise DegenerateDecompositionError(
            "eigenvalues are degenerate; use degenerate_decomposition for the l1 = l2 family"
        )
    g = gamma.modulus
    g2 = g * g
    root = math.sqrt(1.0 - g2)
    p1, p2 = decomposition_probabilities(lambda1, g)
    den = math.sqrt(lambda1 * lambda1 + (lambda2 - lambda1) * g2)
    beta1 = PureState(gamma.value, root, EIGEN)
    beta2 = PureState(lambda1 * root / den, -lambda2 * np.conj(gamma.value) / den, EIGEN)
    return Decomposition(gamma, p1, p2, beta1, beta2, inner_product(beta1, beta2))


def degenerate_decomposition(gamma: DecompositionParameter) -> Decomposition:
    """The l1 = l2 = 1/2 family: every member is an orthogonal pair.

    All members mix to one half of the identity, so p1 = p2 = 1/2 and the
    overlap vanishes identically.
    """
    g = gamma.modulus
    root = math.sqrt(1.0 - g * g)
    beta1 = PureState(g * cmath.exp(-1j * gamma.phase), root, EIGEN)
    beta2 = PureState(root, -g * cmath.exp(1j * gamma.phase), EIGEN)
    return Decomposition(gamma, 0.5, 0.5, beta1, beta2, inner_product(beta1, beta2))


def balanced_decomposition(state: RankTwoMixedState, theta: float) -> Decomposition:
    """The equal-priors member, reached at |gamma| = sqrt(lambda1).

    Its states are as close as the family allows: |<b1|b2>| = |l1 - l2|.
    For a degenerate spectrum this is just a member of the orthogonal
    family.
    """
    gamma = DecompositionParameter(math.sqrt(state.lambda1), theta)
    if abs(state.lambda1 - state.lambda2) <= ATOL:
        return degenerate_decomposition(gamma)
    return decomposition_states(state, gamma)


def overlap_from_projections(rho: DensityMatrix2, beta1: PureState, beta2: PureState) -> float:
    """Overlap modulus recovered from two projective expectation values.

    For any valid decomposition, <b1|rho|b1> + <b2|rho|b2> = 1 + |<b1|b2>|^2,
    so the two measurable expectations determine |<b1|b2>| without access
    to the states' relative phase.  The inputs are first checked to
    actually decompose ``rho`` (some priors p1, p2 >= 0 rebuild it within
    1e-8).
    """
    m = rho.entries
    proj1 = beta1.projector()
    proj2 = beta2.projector()
    # Least-squares priors for p1*P1 + p2*P2 = rho, then the residual check.
    basis = np.stack(
        [np.concatenate([proj1.real.ravel(), proj1.imag.ravel()]),
         np.concatenate([proj2.real.ravel(), proj2.imag.ravel()])],
        axis=1,
    )
    target = np.concatenate([m.real.ravel(), m.imag.ravel()])
    priors, *_ = np.linalg.lstsq(basis, target, rcond=None)
    residual = np.linalg.norm(basis @ priors - target)
    if residual > 1e-8 or priors.min() < -1e-8:
        raise InconsistentInputsError(
            f"states do not decompose the density matrix (residual {residual!r})"
        )
    v1 = beta1.vector()
    v2 = beta2.vector()
    arg = float((np.vdot(v1, m @ v1) + np.vdot(v2, m @ v2)).real) - 1.0
    if arg < -1e-10:
        raise InconsistentInputsError(f"projection identity violated: 1 + |beta|^2 = {1 + arg!r}")
    return math.sqrt(max(arg, 0.0))


def gamma_from_state(state: RankTwoMixedState, beta1: PureState) -> DecompositionParameter:
    """Read gamma = <l1|b1> back off a decomposition state.

    ``beta1`` must be expressed in the eigenbasis; a modulus-zero result
    gets phase 0 by convention.
    """
    if beta1.basis != EIGEN:
        raise ValueError("beta1 must be expressed in the eigenbasis")
    modulus = abs(beta1.amp0)
    if modulus <= ATOL:
        return DecompositionParameter(0.0, 0.0)
    return DecompositionParameter(min(modulus, 1.0), cmath.phase(beta1.amp0) % _TWO_PI)


def _check_unit_interval(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise ValueError(f"{name} = {value!r} outside [0, 1]")
