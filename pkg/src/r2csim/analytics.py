"""Closed-form latency, resiliency and robustness expressions for RC and R2C.

All latencies are returned in slot units; multiply by the slot duration for
seconds. The distortion bound beta is accepted in seconds and converted to
slots internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .channel import ChannelParams, broadcast_window, outage_prob
from .grid import GridNetwork, InvalidParameterError

WINITZKI_A = 0.14

PsiTag = Literal["paper_plus", "corrected_minus"]


class InfeasibleResiliencyError(ValueError):
    """Raised when no validator count can reach the requested resiliency."""


@dataclass(frozen=True)
class ReliabilityTargets:
    """Reliability knobs: resiliency alpha, distortion bound (beta, gamma),
    dissemination success zeta, and the assumed faulty-node count."""

    alpha: float = 0.99
    beta_s: float = 0.0          # acceptable consensual-timestamp distortion, seconds
    gamma: float = 0.9
    zeta: float = 0.9999
    f_faulty: int = 0

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise InvalidParameterError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.beta_s < 0:
            raise InvalidParameterError(f"beta must be >= 0, got {self.beta_s}")
        if not (0.0 <= self.gamma <= 1.0):
            raise InvalidParameterError(f"gamma must be in [0, 1], got {self.gamma}")
        if not (0.0 <= self.zeta < 1.0):
            raise InvalidParameterError(f"zeta must be in [0, 1), got {self.zeta}")
        if self.f_faulty < 0:
            raise InvalidParameterError("faulty count must be >= 0")


@dataclass(frozen=True)
class SizingResult:
    """Validator-count sizing: the two real-valued minima and their ceiling."""

    n_alpha: float
    n_beta_gamma: float
    n_required: int


@dataclass(frozen=True)
class PsiVariant:
    """Delay-moment aggregate entering the distortion variance.

    `paper_plus` adds the cross-moment term (the conservative variant with
    matching closed forms); `corrected_minus` subtracts it and matches true
    sampling-without-replacement statistics.
    """

    tag: PsiTag
    value: float


# ---------------------------------------------------------------------------
# Invertible erf approximant (Winitzki form, a = 0.14)
# ---------------------------------------------------------------------------

def erf_approx(x: float) -> float:
    """Closed-form erf approximant, relative error < 0.004; odd in x."""
    s = 1.0 if x >= 0 else -1.0
    x2 = x * x
    inner = -x2 * (4.0 / math.pi + WINITZKI_A * x2) / (1.0 + WINITZKI_A * x2)
    return s * math.sqrt(-math.expm1(inner))


def erf_approx_inv(y: float) -> float:
    """Analytic inverse of erf_approx; defined for |y| < 1, odd in y."""
    if abs(y) >= 1.0:
        raise InvalidParameterError(f"erf_approx_inv requires |y| < 1, got {y}")
    s = 1.0 if y >= 0 else -1.0
    y = abs(y)
    if y == 0.0:
        return 0.0
    ln = math.log1p(-y * y)
    t = 2.0 / (math.pi * WINITZKI_A) + ln / 2.0
    return s * math.sqrt(-t + math.sqrt(t * t - ln / WINITZKI_A))


# ---------------------------------------------------------------------------
# Resiliency (fraction of faulty representatives below 1/3)
# ---------------------------------------------------------------------------

def _check_resiliency_args(n_total: int, f: int, n_tilde: int) -> None:
    if not (0 <= f <= n_total):
        raise InvalidParameterError(f"need 0 <= F <= N, got F={f}, N={n_total}")
    if not (1 <= n_tilde <= n_total):
        raise InvalidParameterError(f"need 1 <= n_tilde <= N, got {n_tilde}")


def resiliency_exact(n_total: int, f: int, n_tilde: int) -> float:
    """Pr[fewer than n_tilde/3 of the sampled representatives are faulty].

    Hypergeometric tail sum evaluated term by term in log space.
    """
    _check_resiliency_args(n_total, f, n_tilde)
    f_cap = math.ceil(n_tilde / 3) - 1  # largest tolerable faulty count
    lo = max(0, n_tilde - (n_total - f))
    hi = min(f, n_tilde, f_cap)
    if hi < lo:
        return 0.0
    log_denom = _log_comb(n_total, n_tilde)
    total = 0.0
    for k in range(lo, hi + 1):
        total += math.exp(
            _log_comb(f, k) + _log_comb(n_total - f, n_tilde - k) - log_denom
        )
    return min(total, 1.0)


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def resiliency_normal(n_total: int, f: int, n_tilde: int, phi: float = 0.5) -> float:
    """Normal approximation of resiliency_exact with continuity correction phi.

    Falls back to the exact computation when the hypergeometric variance is 0.
    """
    _check_resiliency_args(n_total, f, n_tilde)
    if not (0.0 < phi < 1.0):
        raise InvalidParameterError(f"phi must be in (0, 1), got {phi}")
    var = (
        f * n_tilde * (n_total - f) * (n_total - n_tilde)
        / (n_total * n_total * max(n_total - 1, 1))
    )
    if var == 0.0:
        return resiliency_exact(n_total, f, n_tilde)
    mu = f * n_tilde / n_total
    # The event F_tilde < n_tilde/3 is F_tilde <= ceil(n_tilde/3) - 1, so the
    # continuity correction must offset the integer threshold, not n_tilde/3
    # itself (the two coincide when n_tilde is a multiple of 3).
    threshold = math.ceil(n_tilde / 3.0)
    z = (threshold - mu - phi) / (math.sqrt(var) * math.sqrt(2.0))
    return 0.5 * (1.0 + erf_approx(z))


def n_alpha(n_total: int, f: int, alpha: float, phi: float = 0.5) -> float:
    """Real-valued minimum representative count for alpha-resiliency."""
    if not (0.0 < alpha <= 1.0):
        raise InvalidParameterError(f"alpha must be in (0, 1], got {alpha}")
    a_coef = 1.0 / 3.0 - f / n_total
    if a_coef <= 0:
        raise InfeasibleResiliencyError(
            f"F={f} >= N/3={n_total / 3:.1f}: no representative count is alpha-resilient"
        )
    c = erf_approx_inv(2.0 * alpha - 1.0)
    b_coef = f * (n_total - f) * c * c / ((n_total - 1) * n_total * n_total)
    disc = max(
        2.0 * phi * a_coef * b_coef * n_total
        - 2.0 * phi * phi * b_coef
        + b_coef * b_coef * n_total * n_total,
        0.0,
    )
    return (phi * a_coef + b_coef * n_total + math.sqrt(disc)) / (
        a_coef * a_coef + 2.0 * b_coef
    )


# ---------------------------------------------------------------------------
# Delay-moment aggregate psi and robustness sizing
# ---------------------------------------------------------------------------

def psi_from_moments(mean: np.ndarray, second: np.ndarray, variant: PsiTag) -> float:
    """Aggregate per-validator delay moments into psi.

    mean / second are E[Z_pv] and E[Z_pv^2] for every validator (length N).
    The cross term sum_v m_v (S - m_v) / (N - 1) is added (paper_plus) or
    subtracted (corrected_minus).
    """
    mean = np.asarray(mean, dtype=float)
    second = np.asarray(second, dtype=float)
    n = mean.size
    if n < 2:
        raise InvalidParameterError("psi needs at least two validators")
    s = mean.sum()
    cross = (s * s - (mean * mean).sum()) / (n - 1)
    if variant == "paper_plus":
        return float(second.sum() + cross)
    if variant == "corrected_minus":
        return float(second.sum() - cross)
    raise InvalidParameterError(f"unknown psi variant {variant!r}")


def gossip_delay_moments(net: GridNetwork, proposer: int) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic shortest-path delay moments: E[Z] = hops, E[Z^2] = hops^2."""
    hops = net.hop_counts_from(proposer).astype(float)
    hops = np.delete(hops, proposer)
    return hops, hops * hops


def broadcast_delay_moments(
    ch: ChannelParams, net: GridNetwork, proposer: int
) -> tuple[np.ndarray, np.ndarray]:
    """Geometric retransmission moments: E[Z] = 1/(1-eps), E[Z^2] = (1+eps)/(1-eps)^2."""
    d = np.delete(net.distances_from(proposer), proposer)
    eps = outage_prob(ch, d, ch.pt_broadcast_mw)
    return 1.0 / (1.0 - eps), (1.0 + eps) / (1.0 - eps) ** 2


def psi_gossip(net: GridNetwork, proposer: int, variant: PsiTag = "paper_plus") -> PsiVariant:
    mean, second = gossip_delay_moments(net, proposer)
    return PsiVariant(tag=variant, value=psi_from_moments(mean, second, variant))


def psi_broadcast(
    ch: ChannelParams, net: GridNetwork, proposer: int, variant: PsiTag = "paper_plus"
) -> PsiVariant:
    mean, second = broadcast_delay_moments(ch, net, proposer)
    return PsiVariant(tag=variant, value=psi_from_moments(mean, second, variant))


def psi_gossip_corner_closed_form(n_validators: int) -> float:
    """Closed form of the plus-variant gossip psi for a corner proposer."""
    n = n_validators
    root = math.sqrt(n + 1)
    return (n + 1) * ((13 * n - 24 * root + 16) * n + 12 * (root - 1)) / (6 * (n - 1))


def psi_gossip_center_closed_form(n_validators: int) -> float:
    """Closed form of the plus-variant gossip psi for a center proposer (odd side)."""
    n = n_validators
    return (13 * n * n - 4 * n - 8) * n / (24 * (n - 1))


def sigma_d_squared(n_total: int, n_tilde: int, tau_s: float, psi: float) -> float:
    """Variance of the consensual-timestamp distortion, in seconds^2."""
    return tau_s * tau_s * (n_total - n_tilde) * psi / (n_tilde * n_total * n_total)


def n_beta_gamma(n_total: int, beta_s: float, gamma: float, tau_s: float, psi: float) -> float:
    """Real-valued minimum representative count for (beta, gamma)-robustness."""
    if beta_s < 0:
        raise InvalidParameterError("beta must be >= 0")
    if not (0.0 <= gamma <= 1.0):
        raise InvalidParameterError(f"gamma must be in [0, 1], got {gamma}")
    if gamma == 1.0:
        return float(n_total)  # distortion must be surely bounded
    if gamma == 0.0:
        return 0.0
    if psi <= 0.0:
        return 1.0  # delays are degenerate; any single validator suffices
    beta_slots = beta_s / tau_s
    c = erf_approx_inv(gamma)
    if beta_slots == 0.0:
        return float(n_total)
    return 1.0 / (1.0 / n_total + beta_slots * beta_slots * n_total / (2.0 * c * c * psi))


# ---------------------------------------------------------------------------
# End-to-end latency expressions (slot units)
# ---------------------------------------------------------------------------

def _grid_root(n_total: int) -> int:
    root = math.isqrt(n_total + 1)
    if root * root != n_total + 1:
        raise InvalidParameterError(f"N + 1 = {n_total + 1} must be a perfect square")
    return root


def rc_latency_gossip_lb(n_total: int) -> float:
    """Lower bound on RC latency under gossip, in slots."""
    root = _grid_root(n_total)
    if root % 2 == 1:
        return ((3 * root - 2) * (n_total + 1) - root) / 2.0
    return (3 * root - 2) * (n_total + 1) / 2.0


def rc_latency_broadcast(ch: ChannelParams, net: GridNetwork, zeta: float) -> int:
    """RC latency under broadcast: sum of every node's dissemination window."""
    return sum(broadcast_window(ch, net, i, zeta) for i in range(net.node_count))


def r2c_latency_expected(w_p: float, w_v, n_total: int, n_tilde: int) -> float:
    """Expected R2C latency: proposer window plus the sampled share of commits."""
    if not (0 <= n_tilde <= n_total):
        raise InvalidParameterError(f"need 0 <= n_tilde <= N, got {n_tilde}")
    return float(w_p) + (n_tilde / n_total) * float(np.sum(w_v))


def r2c_latency_gossip_lb(
    n_total: int, n_tilde: int, proposer_position: Literal["corner", "center"]
) -> float:
    """Lower bound on R2C latency under gossip for a corner or center proposer."""
    root = _grid_root(n_total)
    if proposer_position == "corner":
        if root % 2 == 1:
            slope = 1.5 * root - (root - 1) / n_total - 1.0
        else:
            slope = 1.5 * root - (root - 2) / (2.0 * n_total) - 1.0
        return slope * n_tilde + 2.0 * (root - 1)
    if proposer_position == "center":
        return (1.5 * root - 1.0) * n_tilde + root - 1.0
    raise InvalidParameterError(f"unknown proposer position {proposer_position!r}")


def r2c_latency_broadcast(
    ch: ChannelParams, net: GridNetwork, proposer: int, n_tilde: int, zeta: float
) -> float:
    """Expected R2C latency under broadcast, in slots."""
    n_total = net.node_count - 1
    if not (0 <= n_tilde <= n_total):
        raise InvalidParameterError(f"need 0 <= n_tilde <= N, got {n_tilde}")
    w_sum = sum(
        broadcast_window(ch, net, i, zeta)
        for i in range(net.node_count)
        if i != proposer
    )
    return (n_tilde / n_total) * w_sum + broadcast_window(ch, net, proposer, zeta)


# ---------------------------------------------------------------------------
# Validator sizing
# ---------------------------------------------------------------------------

def required_validators(
    n_total: int,
    targets: ReliabilityTargets,
    net: GridNetwork,
    ch: ChannelParams,
    proposer: int,
    dissemination: Literal["gossip", "broadcast"],
    tau_s: float,
    phi: float = 0.5,
    psi_variant: PsiTag = "paper_plus",
) -> SizingResult:
    """Smallest representative count meeting both the resiliency and
    robustness targets, ceilinged and clamped to [1, N]."""
    na = n_alpha(n_total, targets.f_faulty, targets.alpha, phi)
    if dissemination == "gossip":
        psi = psi_gossip(net, proposer, psi_variant).value
    elif dissemination == "broadcast":
        psi = psi_broadcast(ch, net, proposer, psi_variant).value
    else:
        raise InvalidParameterError(f"unknown dissemination {dissemination!r}")
    nbg = n_beta_gamma(n_total, targets.beta_s, targets.gamma, tau_s, psi)
    required = min(max(math.ceil(max(na, nbg)), 1), n_total)
    return SizingResult(n_alpha=na, n_beta_gamma=nbg, n_required=required)


def distortion_outage_normal(
    beta_s: float, sigma_d2: float, use_approximant: bool = True
) -> float:
    """Pr[|D| > beta] under the zero-mean normal distortion model."""
    if sigma_d2 <= 0:
        return 0.0
    z = beta_s / math.sqrt(2.0 * sigma_d2)
    if use_approximant:
        return 1.0 - erf_approx(z)
    return float(1.0 - math.erf(z))
