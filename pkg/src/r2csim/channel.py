"""Radio channel model: path-loss/Rayleigh outage, slot timing, dissemination windows.

Sign convention: the reference path *gain* G0 = (lambda / (4 pi R0))^2 attenuates
the received power, so the outage exponent carries G0 in the denominator. This is
the single source of truth for the dB convention used throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import GridNetwork, InvalidParameterError


class UnattainableTargetError(ValueError):
    """Raised when a requested success probability cannot be met."""


@dataclass(frozen=True)
class ChannelParams:
    """Radio constants shared by every link in the network.

    Powers are in mW, distances in meters, bandwidth in Hz, message size in bits.
    """

    eta: float = 3.0             # path-loss exponent
    lambda_m: float = 0.125      # carrier wavelength (2.4 GHz ISM)
    r0_m: float = 1.0            # reference distance
    pn_mw: float = 1e-10         # noise power
    rho_db: float = 10.0         # target SNR
    bandwidth_hz: float = 1e6
    msg_bits: float = 1024.0
    pt_gossip_mw: float = 2.5
    pt_broadcast_mw: float = 100.0

    def __post_init__(self):
        if self.eta < 2:
            raise InvalidParameterError(f"path-loss exponent must be >= 2, got {self.eta}")
        if self.bandwidth_hz <= 0 or self.msg_bits <= 0:
            raise InvalidParameterError("bandwidth and message size must be positive")
        if self.lambda_m <= 0 or self.r0_m <= 0 or self.pn_mw <= 0:
            raise InvalidParameterError("wavelength, reference distance and noise power must be positive")
        if self.pt_gossip_mw <= 0 or self.pt_broadcast_mw < self.pt_gossip_mw:
            raise InvalidParameterError(
                "transmit powers must satisfy 0 < pt_gossip_mw <= pt_broadcast_mw"
            )
        if not math.isfinite(self.rho_db):
            raise InvalidParameterError("target SNR must be finite")

    @property
    def rho_linear(self) -> float:
        return 10.0 ** (self.rho_db / 10.0)

    @property
    def ref_gain(self) -> float:
        """Free-space path gain at the reference distance."""
        return (self.lambda_m / (4.0 * math.pi * self.r0_m)) ** 2


def slot_duration(ch: ChannelParams) -> float:
    """Time slot length in seconds: msg_bits / (B * log2(1 + rho))."""
    return ch.msg_bits / (ch.bandwidth_hz * math.log2(1.0 + ch.rho_linear))


def outage_prob(ch: ChannelParams, dist_m, pt_mw: float):
    """SNR outage probability of a Rayleigh-faded link at the given distance.

    1 - exp(-rho * Pn * d^eta / (G0 * pt * r0^eta)); accepts scalar or array
    distances.
    """
    if np.any(np.asarray(dist_m) <= 0):
        raise InvalidParameterError("link distance must be positive (no self-links)")
    if pt_mw <= 0:
        raise InvalidParameterError("transmit power must be positive")
    exponent = (
        ch.rho_linear * ch.pn_mw * (np.asarray(dist_m, dtype=float) / ch.r0_m) ** ch.eta
        / (ch.ref_gain * pt_mw)
    )
    out = -np.expm1(-exponent)
    return float(out) if np.isscalar(dist_m) else out


def epsilon_gossip(ch: ChannelParams, net: GridNetwork) -> float:
    """Single-hop outage probability between lattice neighbors, gossip power."""
    return outage_prob(ch, net.spacing_m, ch.pt_gossip_mw)


def outage_matrix(ch: ChannelParams, net: GridNetwork, pt_mw: float) -> np.ndarray:
    """Pairwise outage probabilities; the diagonal (self-links) is 0."""
    n = net.node_count
    eps = np.zeros((n, n))
    for i in range(n):
        d = net.distances_from(i)
        d[i] = ch.r0_m  # placeholder, overwritten below
        eps[i] = outage_prob(ch, d, pt_mw)
        eps[i, i] = 0.0
    return eps


def epsilon_max(ch: ChannelParams, net: GridNetwork, i: int) -> float:
    """Largest outage probability from node i under broadcast power."""
    if net.node_count < 2:
        raise InvalidParameterError("epsilon_max needs at least two nodes")
    dmax = float(net.distances_from(i).max())
    return outage_prob(ch, dmax, ch.pt_broadcast_mw)


def broadcast_window(ch: ChannelParams, net: GridNetwork, i: int, zeta: float) -> int:
    """Slots preallocated for node i's broadcast so all N destinations are
    reached with probability >= zeta.

    w = ceil(log(1 - zeta^(1/N)) / log(eps_max)), clamped to >= 1 (an attempt
    always occupies at least one slot).
    """
    if not (0.0 <= zeta < 1.0):
        if zeta == 1.0:
            raise UnattainableTargetError("zeta = 1 cannot be guaranteed in finite slots")
        raise InvalidParameterError(f"zeta must be in [0, 1), got {zeta}")
    if zeta == 0.0:
        return 1
    n_dest = net.node_count - 1
    eps = epsilon_max(ch, net, i)
    w = math.ceil(math.log1p(-zeta ** (1.0 / n_dest)) / math.log(eps))
    return max(w, 1)
