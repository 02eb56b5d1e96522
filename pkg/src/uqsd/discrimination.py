"""Optimal figures of merit for discriminating two nonorthogonal states.

Two strategies: unambiguous discrimination (never wrong, sometimes
inconclusive) with the Jaeger-Shimony success probability, and the
minimum-error strategy bounded by the Helstrom limit.  Both are also
provided as closed forms in (lambda1, |gamma|) for the states of a
gamma-decomposition, independent of the decomposition module, so the two
routes can be cross-checked.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .decomposition import DegenerateDecompositionError


class DiscriminationRegime(enum.Enum):
    """Which of the two states admit a conclusive outcome."""

    BOTH_CONCLUSIVE = "BothConclusive"
    ONLY_STATE1 = "OnlyState1"
    ONLY_STATE2 = "OnlyState2"


@dataclass(frozen=True)
class DiscriminationMetrics:
    p_success: float
    p_error_min: float
    regime: DiscriminationRegime

    def __post_init__(self):
        if not (0.0 <= self.p_success <= 1.0):
            raise ValueError(f"p_success = {self.p_success!r} outside [0, 1]")
        if not (0.0 <= self.p_error_min <= 0.5):
            raise ValueError(f"p_error_min = {self.p_error_min!r} outside [0, 1/2]")


def classify_regime(p1: float, p2: float, beta_mod: float) -> DiscriminationRegime:
    """Branch of the Jaeger-Shimony formula for priors (p1, p2) and |beta|.

    Below the threshold min{sqrt(p1/p2), sqrt(p2/p1)} both states can be
    identified unambiguously; above it, only the likelier one.  The
    boundary itself counts as BothConclusive.
    """
    _check_priors(p1, p2)
    if beta_mod < 0.0 or beta_mod > 1.0 + 1e-9:
        raise ValueError(f"|beta| = {beta_mod!r} outside [0, 1]")
    threshold = math.sqrt(min(p1, p2) / max(p1, p2))
    if beta_mod <= threshold:
        return DiscriminationRegime.BOTH_CONCLUSIVE
    return DiscriminationRegime.ONLY_STATE1 if p1 > p2 else DiscriminationRegime.ONLY_STATE2


def jaeger_shimony_ps(p1: float, p2: float, beta_mod: float) -> float:
    """Optimal unambiguous-discrimination success probability."""
    regime = classify_regime(p1, p2, beta_mod)
    if regime is DiscriminationRegime.BOTH_CONCLUSIVE:
        ps = 1.0 - 2.0 * math.sqrt(p1 * p2) * beta_mod
    else:
        ps = (1.0 - beta_mod * beta_mod) * max(p1, p2)
    return _clamp_probability("p_s", ps)


def helstrom_pe(p1: float, p2: float, beta_mod: float) -> float:
    """Minimum achievable error probability when a guess is forced."""
    _check_priors(p1, p2)
    if beta_mod < 0.0 or beta_mod > 1.0 + 1e-9:
        raise ValueError(f"|beta| = {beta_mod!r} outside [0, 1]")
    radicand = 1.0 - 4.0 * p1 * p2 * beta_mod * beta_mod
    if radicand < -1e-10:
        raise ValueError(f"inconsistent inputs: 1 - 4 p1 p2 |beta|^2 = {radicand!r}")
    return 0.5 * (1.0 - math.sqrt(max(radicand, 0.0)))


def metrics(p1: float, p2: float, beta_mod: float) -> DiscriminationMetrics:
    """Bundle both strategies for one (priors, overlap) triple."""
    return DiscriminationMetrics(
        p_success=jaeger_shimony_ps(p1, p2, beta_mod),
        p_error_min=helstrom_pe(p1, p2, beta_mod),
        regime=classify_regime(p1, p2, beta_mod),
    )


def ps_of_gamma(lambda1: float, gamma_mod: float) -> float:
    """Unambiguous success probability for the gamma-decomposition states.

    Direct closed form in (lambda1, |gamma|); equals jaeger_shimony_ps
    composed with the decomposition priors and overlap.  It is 1 at the
    spectral endpoints |gamma| in {0, 1} and smallest at the balanced
    point |gamma|^2 = lambda1, where it equals 1 - |lambda1 - lambda2|.
    """
    lambda2, g2, den = _gamma_denominator(lambda1, gamma_mod)
    den2_sq = lambda1 * lambda1 + (lambda2 - lambda1) * g2
    beta_sq = (lambda1 - lambda2) ** 2 * g2 * (1.0 - g2) / den2_sq
    p_small = min(lambda1 * lambda2, den2_sq) / den
    p_large = max(lambda1 * lambda2, den2_sq) / den
    if beta_sq * p_large <= p_small:  # |beta|^2 <= p_min/p_max
        ps = 1.0 - 2.0 * abs(lambda1 - lambda2) * gamma_mod * math.sqrt(lambda1 * lambda2 * (1.0 - g2)) / den
    else:
        ps = (1.0 - beta_sq) * p_large
    return _clamp_probability("p_s", ps)


def pe_of_gamma(lambda1: float, gamma_mod: float) -> float:
    """Helstrom error probability for the gamma-decomposition states.

    Zero at the spectral endpoints, maximal at the balanced point where
    it equals (1 - sqrt(1 - |lambda1 - lambda2|^2)) / 2.
    """
    lambda2, g2, den = _gamma_denominator(lambda1, gamma_mod)
    radicand = 1.0 - 4.0 * lambda1 * lambda2 * (lambda1 - lambda2) ** 2 * g2 * (1.0 - g2) / (den * den)
    if radicand < -1e-10:
        raise ValueError(f"inconsistent inputs: radicand = {radicand!r}")
    return 0.5 * (1.0 - math.sqrt(max(radicand, 0.0)))


def _gamma_denominator(lambda1: float, gamma_mod: float) -> tuple[float, float, float]:
    if not (0.0 <= lambda1 <= 1.0):
        raise ValueError(f"lambda1 = {lambda1!r} outside [0, 1]")
    if not (0.0 <= gamma_mod <= 1.0):
        raise ValueError(f"|gamma| = {gamma_mod!r} outside [0, 1]")
    lambda2 = 1.0 - lambda1
    g2 = gamma_mod * gamma_mod
    den = lambda1 + (lambda2 - lambda1) * g2
    if den <= 0.0:
        raise DegenerateDecompositionError(
            f"denominator vanishes at lambda1={lambda1!r}, |gamma|={gamma_mod!r}"
        )
    return lambda2, g2, den


def _check_priors(p1: float, p2: float) -> None:
    if not (0.0 <= p1 <= 1.0 and 0.0 <= p2 <= 1.0):
        raise ValueError(f"priors ({p1!r}, {p2!r}) outside [0, 1]")
    if abs(p1 + p2 - 1.0) > 1e-9:
        raise ValueError(f"priors sum to {p1 + p2!r}, expected 1")


def _clamp_probability(name: str, value: float) -> float:
    # Silent clamping would mask formula bugs; only float dust is absorbed.
    if value < -1e-12 or value > 1.0 + 1e-12:
        raise ValueError(f"{name} = {value!r} outside [0, 1] beyond tolerance")
    return min(max(value, 0.0), 1.0)
