"""State-vector simulation of the polarization-path discrimination circuit.

A single photon carries one of two nonorthogonal polarization states
(mutual overlap cos(alpha), placed asymmetrically about horizontal by the
angle x) into a four-path interferometer.  Polarizing beam splitters
(PBS) transmit h and reflect v with a pi/2 phase; wave plates (WP) rotate
the polarization on a single path.  With the wave-plate angles tied by
the orthogonality condition sin^2(phi) = tan(x) tan(alpha-x) sin^2(phi'),
the photon exits on path 2 in one of two orthogonal polarization states
(eta1 or eta2), so a final plate plus PBS sorts conclusive outcomes onto
two detectors; path 1 collects the inconclusive outcome and path 2' the
deliberate leak when phi' != pi/2.

Element conventions, fixed so the analytic transformation chain is
reproduced amplitude for amplitude:

* PBS between paths (A, B): h amplitudes stay put, v amplitudes swap
  between A and B, each multiplied by i.
* WP on one path at angle t: the real rotation
  [[cos t, -sin t], [sin t, cos t]] in the (h, v) components.
  The plate on path 2 is driven at angle phi' + pi, i.e. -R(phi'),
  which sends |v> to sin(phi')|h> - cos(phi')|v>.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .qcore import ATOL, POLARIZATION, PureState, inner_product

H, V = 0, 1
_HALF_PI = math.pi / 2.0


class InfeasibleGeometryError(ValueError):
    """The orthogonality condition has no solution for these angles."""


class UndefinedEtaError(ValueError):
    """A path-2 polarization state is requested where its weight vanishes."""


class PathLabel(enum.Enum):
    P1 = 0
    P2 = 1
    P2PRIME = 2
    P2DOUBLEPRIME = 3


class PreparedState(enum.Enum):
    STATE1 = 1
    STATE2 = 2


@dataclass(frozen=True, eq=False)
class CircuitState:
    """Photon amplitudes over (path, polarization), 8 complex components."""

    amps: np.ndarray

    def __post_init__(self):
        v = np.array(self.amps, dtype=complex)
        if v.shape != (8,):
            raise ValueError(f"expected 8 amplitudes, got shape {v.shape}")
        if abs(np.vdot(v, v).real - 1.0) > ATOL:
            raise ValueError("circuit state not normalized")
        v.setflags(write=False)
        object.__setattr__(self, "amps", v)

    def amplitude(self, path: PathLabel, pol: int) -> complex:
        return complex(self.amps[2 * path.value + pol])

    def jones(self, path: PathLabel) -> np.ndarray:
        """(h, v) amplitude pair on one path."""
        return self.amps[2 * path.value: 2 * path.value + 2].copy()

    def path_probability(self, path: PathLabel) -> float:
        j = self.jones(path)
        return float(np.vdot(j, j).real)


@dataclass(frozen=True)
class SetupConfig:
    """Circuit angles: input geometry (alpha, x), plates (phi, varphi, xi)."""

    alpha: float
    x: float
    phi: float
    varphi: float
    xi: float = 0.0

    def __post_init__(self):
        if not (-ATOL <= self.x <= self.alpha + ATOL <= _HALF_PI + 2 * ATOL):
            raise ValueError(
                f"angles must satisfy 0 <= x <= alpha <= pi/2, got x={self.x!r}, alpha={self.alpha!r}"
            )


@dataclass(frozen=True)
class EtaPair:
    """Path-2 polarization states with their arrival probabilities."""

    eta1: PureState
    eta2: PureState
    q_s1: float
    q_s2: float

    def __post_init__(self):
        if not (-ATOL <= self.q_s1 <= 1 + ATOL and -ATOL <= self.q_s2 <= 1 + ATOL):
            raise ValueError("arrival probabilities must lie in [0, 1]")


@dataclass(frozen=True)
class DetectorDistribution:
    """Click probabilities: conclusive PD(1)/PD(2), inconclusive, leak."""

    p_pd1: float
    p_pd2: float
    p_inconclusive: float
    p_leak: float

    def __post_init__(self):
        probs = (self.p_pd1, self.p_pd2, self.p_inconclusive, self.p_leak)
        if min(probs) < -ATOL:
            raise ValueError(f"negative detection probability in {probs!r}")
        if abs(sum(probs) - 1.0) > ATOL:
            raise ValueError(f"detection probabilities sum to {sum(probs)!r}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_pd1, self.p_pd2, self.p_inconclusive, self.p_leak)


@dataclass(frozen=True)
class MonteCarloReport:
    n_trials: int
    n_pd1: int
    n_pd2: int
    n_inconclusive: int
    n_leak: int
    n_errors: int
    seed: int

    def __post_init__(self):
        if self.n_pd1 + self.n_pd2 + self.n_inconclusive + self.n_leak != self.n_trials:
            raise ValueError("detector counts do not sum to n_trials")
        if self.n_errors > self.n_pd1 + self.n_pd2:
            raise ValueError("more errors than conclusive clicks")

    @property
    def n_conclusive(self) -> int:
        return self.n_pd1 + self.n_pd2


def input_state(alpha: float, x: float, which: PreparedState) -> CircuitState:
    """Prepared photon on path 1.

    State 1 is cos(x)|h> + sin(x)|v>, state 2 is
    cos(alpha-x)|h> - sin(alpha-x)|v>; their overlap is cos(alpha).
    """
    if not (-ATOL <= x <= alpha + ATOL):
        raise ValueError(f"x = {x!r} outside [0, alpha = {alpha!r}]")
    amps = np.zeros(8, dtype=complex)
    if which is PreparedState.STATE1:
        amps[2 * PathLabel.P1.value + H] = math.cos(x)
        amps[2 * PathLabel.P1.value + V] = math.sin(x)
    else:
        amps[2 * PathLabel.P1.value + H] = math.cos(alpha - x)
        amps[2 * PathLabel.P1.value + V] = -math.sin(alpha - x)
    return CircuitState(amps)


def apply_pbs(state: CircuitState, in_paths: tuple[PathLabel, PathLabel]) -> CircuitState:
    """Polarizing beam splitter across two paths.

    Horizontal amplitudes are transmitted unchanged; vertical amplitudes
    swap between the two paths, each picking up the reflection phase i.
    """
    path_a, path_b = in_paths
    if path_a is path_b:
        raise ValueError(f"PBS ports must be distinct, got {path_a} twice")
    amps = np.array(state.amps, dtype=complex)
    ia, ib = 2 * path_a.value + V, 2 * path_b.value + V
    amps[ia], amps[ib] = 1j * amps[ib], 1j * amps[ia]
    return CircuitState(amps)


def apply_wp(state: CircuitState, path: PathLabel, angle: float) -> CircuitState:
    """Wave plate: real rotation by ``angle`` of (h, v) on a single path."""
    amps = np.array(state.amps, dtype=complex)
    i = 2 * path.value
    c, s = math.cos(angle), math.sin(angle)
    amps[i + H], amps[i + V] = c * amps[i + H] - s * amps[i + V], s * amps[i + H] + c * amps[i + V]
    return CircuitState(amps)


def evolve(config: SetupConfig, which: PreparedState) -> CircuitState:
    """Run the photon through the discrimination interferometer.

    Chain: PBS1 splits path 1 into paths (1, 2); WP1 at phi acts on path 1
    and WP2 (driven at varphi + pi, see module docstring) on path 2; PBS2
    moves the path-1 vertical component onto path 2'; PBS3 exchanges the
    vertical components of paths 2 and 2'.  For state 1 the result is

        cos(x)cos(phi)|h>|1> + i sqrt(q_s1)|eta1>|2> + sin(x)cos(varphi)|v>|2'>

    and the state-2 analog with alpha - x and opposite signs.  Path 2''
    stays empty; only the detection stage uses it.
    """
    st = input_state(config.alpha, config.x, which)
    st = apply_pbs(st, (PathLabel.P1, PathLabel.P2))
    st = apply_wp(st, PathLabel.P1, config.phi)
    st = apply_wp(st, PathLabel.P2, config.varphi + math.pi)
    st = apply_pbs(st, (PathLabel.P1, PathLabel.P2PRIME))
    st = apply_pbs(st, (PathLabel.P2, PathLabel.P2PRIME))
    return st


def orthogonality_phi(alpha: float, x: float, varphi: float) -> float:
    """WP1 angle that makes the two path-2 polarization states orthogonal.

    Solves sin^2(phi) = tan(x) tan(alpha-x) sin^2(varphi) for
    phi in [0, pi/2].  The right-hand side must not exceed 1, which is
    automatic for alpha <= pi/2.
    """
    if not (-ATOL <= x <= alpha + ATOL):
        raise ValueError(f"x = {x!r} outside [0, alpha = {alpha!r}]")
    ratio = _tan_product(alpha, x)
    rhs = ratio * math.sin(varphi) ** 2
    if rhs > 1.0 + 1e-12:
        raise InfeasibleGeometryError(
            f"tan(x) tan(alpha-x) sin^2(varphi) = {rhs!r} exceeds 1; no wave-plate angle exists"
        )
    return math.asin(min(math.sqrt(max(rhs, 0.0)), 1.0))


def eta_pair(config: SetupConfig) -> EtaPair:
    """Normalized path-2 polarization states and their weights.

    q_s1 = cos^2(x) sin^2(phi) + sin^2(x) sin^2(varphi) and the alpha - x
    analog for q_s2; each eta is defined only where its weight is nonzero.
    """
    a = math.sin(config.x) * math.sin(config.varphi)
    b = math.cos(config.x) * math.sin(config.phi)
    c = math.sin(config.alpha - config.x) * math.sin(config.varphi)
    d = math.cos(config.alpha - config.x) * math.sin(config.phi)
    q_s1 = a * a + b * b
    q_s2 = c * c + d * d
    if q_s1 < 1e-30 or q_s2 < 1e-30:
        raise UndefinedEtaError(
            f"path-2 weight vanishes (q_s1={q_s1!r}, q_s2={q_s2!r}); eta states undefined"
        )
    eta1 = PureState(a / math.sqrt(q_s1), 1j * b / math.sqrt(q_s1), POLARIZATION)
    eta2 = PureState(c / math.sqrt(q_s2), -1j * d / math.sqrt(q_s2), POLARIZATION)
    return EtaPair(eta1, eta2, q_s1, q_s2)


def success_probability_x(alpha: float, x: float, varphi: float, p1: float, p2: float) -> float:
    """Conclusive-outcome probability of the circuit at asymmetry x.

    With phi tied by the orthogonality condition,
    p_s(x) = [p1 sin(x)/cos(alpha-x) + p2 sin(alpha-x)/cos(x)]
             * sin(alpha) sin^2(varphi),
    which is p1 q_s1 + p2 q_s2.
    """
    _check_priors(p1, p2)
    if not (-ATOL <= x <= alpha + ATOL):
        raise ValueError(f"x = {x!r} outside [0, alpha = {alpha!r}]")
    r1 = _safe_ratio(math.sin(x), math.cos(alpha - x))
    r2 = _safe_ratio(math.sin(alpha - x), math.cos(x))
    return (p1 * r1 + p2 * r2) * math.sin(alpha) * math.sin(varphi) ** 2


def optimal_x(alpha: float, p1: float, p2: float) -> float:
    """Asymmetry angle maximizing the conclusive probability.

    Interior solution cos(x) = sqrt(p2) sin(alpha) / sqrt(1 - 2 sqrt(p1 p2) cos(alpha))
    when cos(alpha) <= min{sqrt(p1/p2), sqrt(p2/p1)}; otherwise the optimum
    sits at the edge: x = 0 for p1 < p2, x = alpha for p1 > p2.
    """
    _check_priors(p1, p2)
    _check_alpha(alpha)
    cos_a = math.cos(alpha)
    threshold = math.sqrt(min(p1, p2) / max(p1, p2))
    if cos_a <= threshold:
        cos_x = math.sqrt(p2) * math.sin(alpha) / math.sqrt(1.0 - 2.0 * math.sqrt(p1 * p2) * cos_a)
        return math.acos(min(max(cos_x, -1.0), 1.0))
    return 0.0 if p1 < p2 else alpha


def ps_max(alpha: float, p1: float, p2: float, varphi: float) -> float:
    """Maximal conclusive probability of the circuit.

    (1 - 2 sqrt(p1 p2) cos(alpha)) sin^2(varphi) in the interior regime,
    (1 - cos^2(alpha)) max{p1, p2} sin^2(varphi) in the edge regime.  At
    varphi = pi/2 this is the Jaeger-Shimony optimum with
    |beta| = cos(alpha).
    """
    _check_priors(p1, p2)
    _check_alpha(alpha)
    cos_a = math.cos(alpha)
    sin_vp_sq = math.sin(varphi) ** 2
    threshold = math.sqrt(min(p1, p2) / max(p1, p2))
    if cos_a <= threshold:
        return (1.0 - 2.0 * math.sqrt(p1 * p2) * cos_a) * sin_vp_sq
    return (1.0 - cos_a * cos_a) * max(p1, p2) * sin_vp_sq


def optimal_eta(alpha: float, p1: float, p2: float) -> EtaPair:
    """Path-2 states of the optimized circuit (varphi = pi/2).

    In the interior regime the pair is the real rotation pair
    (cos(xi)|h> + sin(xi)|v>, -sin(xi)|h> + cos(xi)|v>) with
    cos(xi) = sqrt(p1 - sqrt(p1 p2) cos(alpha)) / sqrt(1 - 2 sqrt(p1 p2) cos(alpha)).
    At an edge optimum one weight vanishes and the defined state collapses
    onto a polarization axis: (i|v>, |h>) for p1 < p2, (|h>, -i|v>) for
    p1 > p2.
    """
    _check_priors(p1, p2)
    _check_alpha(alpha)
    cos_a = math.cos(alpha)
    threshold = math.sqrt(min(p1, p2) / max(p1, p2))
    if cos_a <= threshold:
        root = math.sqrt(p1 * p2)
        cos_xi = math.sqrt(p1 - root * cos_a) / math.sqrt(1.0 - 2.0 * root * cos_a)
        cos_xi = min(max(cos_xi, 0.0), 1.0)
        sin_xi = math.sqrt(1.0 - cos_xi * cos_xi)
        eta1 = PureState(cos_xi, sin_xi, POLARIZATION)
        eta2 = PureState(-sin_xi, cos_xi, POLARIZATION)
        x = optimal_x(alpha, p1, p2)
        q_s1 = math.sin(x) * math.sin(alpha) / math.cos(alpha - x)
        q_s2 = math.sin(alpha - x) * math.sin(alpha) / math.cos(x)
        return EtaPair(eta1, eta2, q_s1, q_s2)
    sin_a_sq = math.sin(alpha) ** 2
    if p1 < p2:
        return EtaPair(
            PureState(0.0, 1j, POLARIZATION), PureState(1.0, 0.0, POLARIZATION), 0.0, sin_a_sq
        )
    return EtaPair(
        PureState(1.0, 0.0, POLARIZATION), PureState(0.0, -1j, POLARIZATION), sin_a_sq, 0.0
    )


def detection_plate_angle(alpha: float, x: float) -> float:
    """Plate angle aligning the detection stage with the eta states.

    For a circuit tied by the orthogonality condition the h-weight of
    eta1 is cos(xi) = sqrt(sin(x) cos(alpha-x) / sin(alpha)) regardless
    of varphi.
    """
    _check_alpha(alpha)
    if not (-ATOL <= x <= alpha + ATOL):
        raise ValueError(f"x = {x!r} outside [0, alpha = {alpha!r}]")
    cos_xi_sq = math.sin(x) * math.cos(alpha - x) / math.sin(alpha)
    return math.acos(math.sqrt(min(max(cos_xi_sq, 0.0), 1.0)))


def optimal_config(alpha: float, p1: float, p2: float, varphi: float = _HALF_PI) -> SetupConfig:
    """Full circuit configuration achieving ps_max.

    Sets x from :func:`optimal_x`, phi from the orthogonality condition,
    and the detection-plate angle xi.  At an edge optimum the surviving
    eta state already sits on a polarization axis, so the plate is not
    needed and xi is 0.
    """
    x = optimal_x(alpha, p1, p2)
    phi = orthogonality_phi(alpha, x, varphi)
    cos_a = math.cos(alpha)
    threshold = math.sqrt(min(p1, p2) / max(p1, p2))
    xi = detection_plate_angle(alpha, x) if cos_a <= threshold else 0.0
    return SetupConfig(alpha=alpha, x=x, phi=phi, varphi=varphi, xi=xi)


# Detection stage.  The circuit's eta states carry the PBS reflection
# phase on their v component: eta1 = cos(t)|h> + i sin(t)|v> and
# eta2 = sin(t)|h> - i cos(t)|v> whenever they are orthogonal (up to a
# shared sign of the h components when sin(varphi) < 0).  The detection
# plate therefore combines the xi rotation with the phase that undoes
# the i, mapping eta1 -> |v> and eta2 -> |h> exactly:
#
#     WP3(xi) = [[sgn sin(xi),  i cos(xi)],
#                [sgn cos(xi), -i sin(xi)]]
#
# with sgn the sign of sin(varphi).  PBS4 then reflects v onto path 2''.
# xi = 0 means the plate is absent.


def _detection_jones(config: SetupConfig) -> np.ndarray | None:
    if config.xi == 0.0:
        return None
    sgn = 1.0 if math.sin(config.varphi) >= 0.0 else -1.0
    s, c = math.sin(config.xi), math.cos(config.xi)
    return np.array([[sgn * s, 1j * c], [sgn * c, -1j * s]], dtype=complex)


def _pd1_on_reflected_port(config: SetupConfig) -> bool:
    """Which PBS4 output feeds PD(1).

    PD(1) must collect the state-1 conclusive direction.  After the
    detection plate that direction is |v> (the reflected port) except
    when the plate is absent and the circuit was optimized at the
    x = alpha edge, where eta1 is already |h> and leaves through the
    transmitted port.
    """
    if config.xi != 0.0:
        return True
    return config.x < config.alpha / 2.0 or config.alpha == 0.0


def detection_distribution(config: SetupConfig, which: PreparedState) -> DetectorDistribution:
    """Click probabilities of the four detectors for one prepared state.

    Path 1 feeds the inconclusive detector, path 2' the leak port, and
    path 2 passes through the detection plate and PBS4 onto PD(1)/PD(2).
    The probabilities close to 1 for any configuration; the conclusive
    split is meaningful once ``config`` satisfies the orthogonality
    condition and the plate angle matches (as built by
    :func:`optimal_config`).
    """
    st = evolve(config, which)
    p_inc = st.path_probability(PathLabel.P1)
    p_leak = st.path_probability(PathLabel.P2PRIME)
    jones = st.jones(PathLabel.P2)
    plate = _detection_jones(config)
    if plate is not None:
        jones = plate @ jones
    p_trans = abs(jones[H]) ** 2  # stays on path 2
    p_refl = abs(jones[V]) ** 2   # reflected onto path 2''
    if _pd1_on_reflected_port(config):
        p_pd1, p_pd2 = p_refl, p_trans
    else:
        p_pd1, p_pd2 = p_trans, p_refl
    return DetectorDistribution(p_pd1, p_pd2, p_inc, p_leak)


def monte_carlo(config: SetupConfig, p1: float, n_trials: int, seed: int) -> MonteCarloReport:
    """Sampled detection experiment with a counter-based random stream.

    Each trial draws the prepared state (probability p1 for state 1) and
    one detector click from the analytic distribution.  Trial t consumes
    positions (2t, 2t+1) of a Philox stream keyed by ``seed``; Philox is
    counter addressed, so the draw for any trial is a pure function of
    (seed, t) regardless of execution order or partitioning.  Outcomes
    with probability below 1e-14 are treated as impossible so that
    analytically forbidden detectors never click.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    if not (0.0 <= p1 <= 1.0):
        raise ValueError(f"p1 = {p1!r} outside [0, 1]")
    dists = {
        PreparedState.STATE1: detection_distribution(config, PreparedState.STATE1),
        PreparedState.STATE2: detection_distribution(config, PreparedState.STATE2),
    }
    edges = {}
    for which, dist in dists.items():
        probs = np.array(dist.as_tuple())
        probs[probs < 1e-14] = 0.0
        probs[np.argmax(probs)] += 1.0 - probs.sum()
        edges[which] = np.cumsum(probs)

    gen = np.random.Generator(np.random.Philox(seed))
    u = gen.random((n_trials, 2))
    is_state1 = u[:, 0] < p1
    outcomes = np.empty(n_trials, dtype=np.int64)
    outcomes[is_state1] = np.searchsorted(edges[PreparedState.STATE1], u[is_state1, 1], side="right")
    outcomes[~is_state1] = np.searchsorted(edges[PreparedState.STATE2], u[~is_state1, 1], side="right")
    outcomes = np.minimum(outcomes, 3)

    n_pd1 = int(np.count_nonzero(outcomes == 0))
    n_pd2 = int(np.count_nonzero(outcomes == 1))
    n_inc = int(np.count_nonzero(outcomes == 2))
    n_leak = int(np.count_nonzero(outcomes == 3))
    n_errors = int(
        np.count_nonzero((outcomes == 0) & ~is_state1) + np.count_nonzero((outcomes == 1) & is_state1)
    )
    return MonteCarloReport(n_trials, n_pd1, n_pd2, n_inc, n_leak, n_errors, seed)


def eta_overlap(pair: EtaPair) -> complex:
    """<eta1|eta2>, the quantity the orthogonality condition kills."""
    return inner_product(pair.eta1, pair.eta2)


def _tan_product(alpha: float, x: float) -> float:
    num = math.sin(x) * math.sin(alpha - x)
    den = math.cos(x) * math.cos(alpha - x)
    if den < 1e-15:
        # Only reachable at alpha = pi/2 with x at an edge; the interior
        # limit of tan(x) tan(pi/2 - x) is 1 there.
        if num < 1e-15:
            return 1.0
        raise InfeasibleGeometryError(f"tan(x) tan(alpha-x) diverges at alpha={alpha!r}, x={x!r}")
    return num / den


def _safe_ratio(num: float, den: float) -> float:
    if abs(den) < 1e-15:
        if abs(num) < 1e-15:
            return 1.0  # alpha = pi/2 edge, see _tan_product
        raise InfeasibleGeometryError("success probability diverges: cos factor vanishes")
    return num / den


def _check_priors(p1: float, p2: float) -> None:
    if not (0.0 <= p1 <= 1.0 and 0.0 <= p2 <= 1.0):
        raise ValueError(f"priors ({p1!r}, {p2!r}) outside [0, 1]")
    if abs(p1 + p2 - 1.0) > 1e-9:
        raise ValueError(f"priors sum to {p1 + p2!r}, expected 1")


def _check_alpha(alpha: float) -> None:
    if alpha <= 0.0:
        raise ValueError("alpha = 0 means identical input states; nothing to discriminate")
    if alpha > _HALF_PI + ATOL:
        raise ValueError(f"alpha = {alpha!r} exceeds pi/2")
