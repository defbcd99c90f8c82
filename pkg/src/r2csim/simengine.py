"""Slotted discrete-event simulation of dissemination and consensus rounds.

Trials are executed in fixed-size blocks, vectorized with numpy across the
block. Each block owns an independent rng substream derived from
(seed, block index), so results are identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from .channel import ChannelParams, epsilon_gossip, outage_prob, slot_duration
from .grid import GridNetwork, InvalidParameterError

BLOCK_SIZE = 512

Dissemination = Literal["gossip", "broadcast"]
Mode = Literal["RC", "R2C"]


@dataclass(frozen=True)
class DisseminationTrace:
    """One dissemination attempt: per-node delivery slots and transmit count.

    delivery_slot[k] is np.inf when node k was not reached within the window.
    """

    source: int
    delivery_slot: np.ndarray
    transmissions: int
    window: int


@dataclass(frozen=True)
class TrialRecord:
    latency_slots: float
    latency_s: float
    energy_mj: float
    resilient: bool
    distortion_slots: float          # nan for RC rounds
    dissemination_success: bool
    f_tilde: int
    globally_valid: bool
    quorum_met: bool
    votes_received: int


@dataclass(frozen=True)
class RoundConfig:
    """Fully resolved round parameters consumed by the engine."""

    net: GridNetwork
    ch: ChannelParams
    mode: Mode
    dissemination: Dissemination
    proposer: int
    n_tilde: int                     # = N for RC
    f_faulty: int
    windows: np.ndarray              # per-node dissemination windows, slots
    faulty_policy: str = "vote-invert"
    perturb_max_slots: int = 5
    # derived, filled in __post_init__
    tau_s: float = field(init=False)
    adjacency: np.ndarray = field(init=False, repr=False, compare=False)
    eps_gossip: float = field(init=False)

    def __post_init__(self):
        n_total = self.net.node_count - 1
        if not (1 <= self.n_tilde <= n_total):
            raise InvalidParameterError(f"n_tilde must be in [1, {n_total}]")
        if not (0 <= self.f_faulty <= n_total):
            raise InvalidParameterError(f"f_faulty must be in [0, {n_total}]")
        if self.mode == "RC" and self.n_tilde != n_total:
            raise InvalidParameterError("RC rounds require n_tilde == N")
        if len(self.windows) != self.net.node_count or np.any(self.windows < 1):
            raise InvalidParameterError("need one window >= 1 per node")
        object.__setattr__(self, "tau_s", slot_duration(self.ch))
        object.__setattr__(self, "adjacency", self.net.adjacency())
        object.__setattr__(self, "eps_gossip", epsilon_gossip(self.ch, self.net))

    @property
    def pt_mw(self) -> float:
        return (
            self.ch.pt_gossip_mw
            if self.dissemination == "gossip"
            else self.ch.pt_broadcast_mw
        )


# ---------------------------------------------------------------------------
# Dissemination kernels (batched over trials)
# ---------------------------------------------------------------------------

def _gossip_batch(
    adj: np.ndarray,
    eps: float,
    source: int,
    window: int,
    rng: np.random.Generator,
    trials: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Synchronized per-slot flooding with i.i.d. Bernoulli link outages.

    A node holding the message reaches each uninformed neighbor independently
    with probability 1 - eps per slot, so an uninformed node with m informed
    neighbors is reached with probability 1 - eps^m. Transmissions count every
    node-slot in which a holder still had an uninformed neighbor.
    """
    n = adj.shape[0]
    informed = np.zeros((trials, n), dtype=bool)
    informed[:, source] = True
    delivery = np.full((trials, n), np.inf)
    delivery[:, source] = 0.0
    transmissions = np.zeros(trials, dtype=np.int64)
    for t in range(1, window + 1):
        if informed.all():
            break
        uninformed = ~informed
        # holders transmit while any of their neighbors is still uninformed
        tx_mask = informed & (uninformed @ adj > 0)
        transmissions += tx_mask.sum(axis=1)
        m = informed @ adj  # informed-neighbor counts per node
        reach_prob = -np.expm1(np.log(eps) * m) if eps > 0 else (m > 0).astype(float)
        newly = uninformed & (rng.random((trials, n)) < reach_prob)
        delivery[newly] = t
        informed |= newly
    return delivery, transmissions


def _broadcast_batch(
    eps_row: np.ndarray,
    source: int,
    window: int,
    rng: np.random.Generator,
    trials: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Single-hop repetition: per-destination geometric delivery slots.

    The source repeats every slot until all destinations are delivered or the
    window is exhausted; transmissions = min(max_k Z_k, window).
    """
    n = eps_row.shape[0]
    z = rng.geometric(p=np.clip(1.0 - eps_row, 1e-300, 1.0), size=(trials, n)).astype(float)
    z[:, source] = 0.0
    transmissions = np.minimum(np.max(z, axis=1), window).astype(np.int64)
    delivery = np.where(z <= window, z, np.inf)
    delivery[:, source] = 0.0
    return delivery, transmissions


def disseminate_gossip(
    net: GridNetwork,
    ch: ChannelParams,
    source: int,
    window: int,
    rng: np.random.Generator,
) -> DisseminationTrace:
    """One gossip flooding trial from `source` within `window` slots."""
    if window < 1:
        raise InvalidParameterError("window must be >= 1")
    delivery, tx = _gossip_batch(
        net.adjacency(), epsilon_gossip(ch, net), source, window, rng, trials=1
    )
    return DisseminationTrace(source, delivery[0], int(tx[0]), window)


def disseminate_broadcast(
    net: GridNetwork,
    ch: ChannelParams,
    source: int,
    window: int,
    rng: np.random.Generator,
) -> DisseminationTrace:
    """One broadcast trial from `source` within `window` slots."""
    if window < 1:
        raise InvalidParameterError("window must be >= 1")
    d = net.distances_from(source)
    d[source] = ch.r0_m
    eps_row = outage_prob(ch, d, ch.pt_broadcast_mw)
    eps_row[source] = 0.0
    delivery, tx = _broadcast_batch(eps_row, source, window, rng, trials=1)
    return DisseminationTrace(source, delivery[0], int(tx[0]), window)


def energy_account(transmissions: int, pt_mw: float, tau_s: float) -> float:
    """Energy of `transmissions` node-slots at power pt_mw, in millijoules."""
    return transmissions * pt_mw * tau_s


# ---------------------------------------------------------------------------
# Round execution
# ---------------------------------------------------------------------------

def _sample_subsets(
    rng: np.random.Generator, trials: int, pool: int, k: int
) -> np.ndarray:
    """Boolean (trials, pool) masks of uniform k-subsets."""
    mask = np.zeros((trials, pool), dtype=bool)
    if k == 0:
        return mask
    order = np.argpartition(rng.random((trials, pool)), k - 1, axis=1)[:, :k]
    np.put_along_axis(mask, order, True, axis=1)
    return mask


def run_block(cfg: RoundConfig, trials: int, rng: np.random.Generator) -> dict:
    """Execute `trials` independent consensus rounds, vectorized.

    Returns per-trial arrays keyed by TrialRecord field names.
    """
    net, ch = cfg.net, cfg.ch
    n_nodes = net.node_count
    n_total = n_nodes - 1
    p = cfg.proposer
    validators = np.array([i for i in range(n_nodes) if i != p])
    w = np.asarray(cfg.windows, dtype=np.int64)

    # Role and fault sampling (per trial). Masks are indexed by validator
    # position within `validators`.
    faulty = _sample_subsets(rng, trials, n_total, cfg.f_faulty)
    if cfg.mode == "RC":
        reps = np.ones((trials, n_total), dtype=bool)
    else:
        reps = _sample_subsets(rng, trials, n_total, cfg.n_tilde)

    # Phase 1: action proposal dissemination.
    if cfg.dissemination == "gossip":
        delivery, tx_prop = _gossip_batch(
            cfg.adjacency, cfg.eps_gossip, p, int(w[p]), rng, trials
        )
    else:
        d = net.distances_from(p)
        d[p] = ch.r0_m
        eps_row = outage_prob(ch, d, ch.pt_broadcast_mw)
        eps_row[p] = 0.0
        delivery, tx_prop = _broadcast_batch(eps_row, p, int(w[p]), rng, trials)
    t_val = delivery[:, validators]                      # (trials, N) slots
    got_proposal = np.isfinite(t_val)

    # Phase 2: local validation (fresh action against an empty ledger is
    # honestly valid; faulty validators act per policy).
    votes = np.ones((trials, n_total), dtype=bool)
    timestamps = t_val.copy()
    if cfg.f_faulty > 0:
        if cfg.faulty_policy == "vote-invert":
            votes[faulty] = False
        elif cfg.faulty_policy == "vote-random":
            votes[faulty] = rng.integers(0, 2, size=(trials, n_total))[faulty] == 1
        elif cfg.faulty_policy == "timestamp-perturb":
            jitter = rng.integers(
                0, cfg.perturb_max_slots + 1, size=(trials, n_total)
            ).astype(float)
            timestamps = np.where(faulty, timestamps + jitter, timestamps)
        else:
            raise InvalidParameterError(f"unknown faulty policy {cfg.faulty_policy!r}")

    # Phase 3: commit dissemination, one TDMA window per validator in id
    # order. A validator commits only if it is a representative that received
    # the proposal. The proposer is the reference aggregator.
    commit_active = reps & got_proposal
    received = np.zeros((trials, n_total), dtype=bool)
    tx_total = tx_prop.astype(np.int64)
    for vi, v in enumerate(validators):
        active = commit_active[:, vi]
        if not active.any():
            continue
        if cfg.dissemination == "gossip":
            delivery_c, tx_c = _gossip_batch(
                cfg.adjacency, cfg.eps_gossip, int(v), int(w[v]), rng, trials
            )
        else:
            d = net.distances_from(int(v))
            d[v] = ch.r0_m
            eps_row = outage_prob(ch, d, ch.pt_broadcast_mw)
            eps_row[v] = 0.0
            delivery_c, tx_c = _broadcast_batch(eps_row, int(v), int(w[v]), rng, trials)
        received[:, vi] = active & np.isfinite(delivery_c[:, p])
        tx_total += np.where(active, tx_c, 0)

    # Phase 4: global validation at the aggregator.
    votes_received = received.sum(axis=1)
    valid_received = (received & votes).sum(axis=1)
    majority_valid = valid_received > votes_received - valid_received
    if cfg.mode == "RC":
        quorum_met = votes_received >= (n_total - cfg.f_faulty)
    else:
        quorum_met = np.ones(trials, dtype=bool)  # R2C waits out all windows
    globally_valid = majority_valid & quorum_met

    # Distortion between the full-set and representative consensual
    # timestamps, from the same proposal trace (delivered validators only).
    with np.errstate(invalid="ignore"):
        c_full = np.where(got_proposal, t_val, 0.0).sum(axis=1) / np.maximum(
            got_proposal.sum(axis=1), 1
        )
        rep_del = reps & got_proposal
        c_rep = np.where(rep_del, t_val, 0.0).sum(axis=1) / np.maximum(
            rep_del.sum(axis=1), 1
        )
    if cfg.mode == "R2C":
        distortion = c_full - c_rep
    else:
        distortion = np.full(trials, np.nan)

    f_tilde = (faulty & reps).sum(axis=1)
    latency = float(w[p]) + (reps @ w[validators]).astype(float)
    energy = tx_total * cfg.pt_mw * cfg.tau_s

    return {
        "latency_slots": latency,
        "latency_s": latency * cfg.tau_s,
        "energy_mj": energy,
        "resilient": f_tilde < cfg.n_tilde / 3.0,
        "distortion_slots": distortion,
        "dissemination_success": got_proposal.all(axis=1),
        "f_tilde": f_tilde,
        "globally_valid": globally_valid,
        "quorum_met": quorum_met,
        "votes_received": votes_received,
    }


def run_round(cfg: RoundConfig, rng: np.random.Generator) -> TrialRecord:
    """Execute a single consensus round."""
    block = run_block(cfg, 1, rng)
    return TrialRecord(**{k: v[0].item() if hasattr(v[0], "item") else v[0]
                          for k, v in block.items()})


# ---------------------------------------------------------------------------
# Monte Carlo harness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonteCarloResult:
    trials: int
    seed: int
    records: dict            # per-trial arrays, keyed like TrialRecord
    summary: dict             # scalar aggregates


def _block_seeds(seed: int, n_blocks: int) -> list[np.random.SeedSequence]:
    return [np.random.SeedSequence((seed, b)) for b in range(n_blocks)]


def _run_one_block(args) -> tuple[int, dict]:
    cfg, size, ss = args
    rng = np.random.Generator(np.random.Philox(ss))
    return run_block(cfg, size, rng)


def monte_carlo(
    cfg: RoundConfig,
    trials: int,
    seed: int,
    workers: int = 1,
    block_size: int = BLOCK_SIZE,
) -> MonteCarloResult:
    """Run seeded independent trials; deterministic for any worker count.

    Trials are partitioned into fixed blocks; block b draws from the
    substream (seed, b), and blocks are merged in index order.
    """
    if trials < 1:
        raise InvalidParameterError("trials must be >= 1")
    sizes = [block_size] * (trials // block_size)
    if trials % block_size:
        sizes.append(trials % block_size)
    jobs = [(cfg, size, ss) for size, ss in zip(sizes, _block_seeds(seed, len(sizes)))]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_run_one_block, jobs, chunksize=1))
    else:
        blocks = [_run_one_block(job) for job in jobs]
    records = {
        key: np.concatenate([b[key] for b in blocks]) for key in blocks[0]
    }
    return MonteCarloResult(trials, seed, records, _summarize(records))


def _summarize(records: dict) -> dict:
    lat = records["latency_slots"]
    eng = records["energy_mj"]
    out = {
        "latency_slots_mean": float(lat.mean()),
        "latency_slots_var": float(lat.var(ddof=1)) if lat.size > 1 else 0.0,
        "latency_slots_p50": float(np.quantile(lat, 0.5)),
        "latency_slots_p99": float(np.quantile(lat, 0.99)),
        "latency_s_mean": float(records["latency_s"].mean()),
        "energy_mj_mean": float(eng.mean()),
        "energy_mj_var": float(eng.var(ddof=1)) if eng.size > 1 else 0.0,
        "resiliency_freq": float(records["resilient"].mean()),
        "dissemination_success_freq": float(records["dissemination_success"].mean()),
        "globally_valid_freq": float(records["globally_valid"].mean()),
    }
    dist = records["distortion_slots"]
    dist = dist[np.isfinite(dist)]
    if dist.size:
        out["distortion_slots_mean"] = float(dist.mean())
        out["distortion_slots_var"] = float(dist.var(ddof=1)) if dist.size > 1 else 0.0
    return out


# ---------------------------------------------------------------------------
# Gossip window calibration and resiliency sampling
# ---------------------------------------------------------------------------

def calibrate_gossip_windows(
    net: GridNetwork,
    ch: ChannelParams,
    zeta: float,
    trials: int = 2000,
    seed: int = 0,
) -> np.ndarray:
    """Per-node gossip windows hitting dissemination success >= zeta.

    Empirical zeta-quantile of the full-coverage time over seeded flooding
    runs, floored at the shortest-path hop radius max_k e_ik.
    """
    adj = net.adjacency()
    eps = epsilon_gossip(ch, net)
    windows = np.zeros(net.node_count, dtype=np.int64)
    for i in range(net.node_count):
        floor = int(net.hop_counts_from(i).max())
        cap = 2 * floor + 8
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, i))))
        delivery, _ = _gossip_batch(adj, eps, i, cap, rng, trials)
        coverage = np.where(np.isfinite(delivery), delivery, cap + 1).max(axis=1)
        if zeta <= 0.0:
            windows[i] = floor
            continue
        q = int(np.quantile(coverage, zeta, method="inverted_cdf"))
        windows[i] = max(q, floor)
    return windows


def resiliency_frequency(
    n_total: int,
    f: int,
    n_tilde: int,
    trials: int,
    seed: int,
    chunk: int = 20000,
) -> float:
    """Monte Carlo estimate of Pr[f_tilde < n_tilde / 3] by sampling the
    faulty set and the representative subset independently per trial."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    hits = 0
    done = 0
    while done < trials:
        b = min(chunk, trials - done)
        faulty = _sample_subsets(rng, b, n_total, f)
        reps = _sample_subsets(rng, b, n_total, n_tilde)
        f_tilde = (faulty & reps).sum(axis=1)
        hits += int((f_tilde < n_tilde / 3.0).sum())
        done += b
    return hits / trials
