import itertools
import math

import numpy as np
import pytest

from r2csim import (
    ChannelParams,
    GridNetwork,
    InvalidParameterError,
    RoundConfig,
    TrialRecord,
    calibrate_gossip_windows,
    disseminate_broadcast,
    disseminate_gossip,
    energy_account,
    monte_carlo,
    resiliency_exact,
    resiliency_frequency,
    run_round,
)
from r2csim.simengine import _broadcast_batch, _gossip_batch

CH = ChannelParams()


def rng(seed=0):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


# ---------------------------------------------------------------------------
# flooding kernel vs an exact Markov-chain oracle on the 2x2 grid
# ---------------------------------------------------------------------------

def markov_informed_probabilities(net, source, eps, horizon):
    """Exact per-slot distribution over informed sets by state enumeration."""
    nodes = range(net.node_count)
    neighbor = {i: set(net.neighbors(i)) for i in nodes}
    dist = {frozenset([source]): 1.0}
    history = [dist]
    for _ in range(horizon):
        nxt = {}
        for state, prob in dist.items():
            uninformed = [k for k in nodes if k not in state]
            gains = {k: 1.0 - eps ** len(neighbor[k] & state) for k in uninformed}
            candidates = [k for k in uninformed if gains[k] > 0]
            for flags in itertools.product([False, True], repeat=len(candidates)):
                p = prob
                newly = []
                for k, hit in zip(candidates, flags):
                    p *= gains[k] if hit else 1.0 - gains[k]
                    if hit:
                        newly.append(k)
                if p == 0.0:
                    continue
                new_state = state | frozenset(newly)
                nxt[new_state] = nxt.get(new_state, 0.0) + p
        dist = nxt
        history.append(dist)
    return history


def test_gossip_flooding_matches_markov_oracle():
    net = GridNetwork(side=2, spacing_m=10.0)
    eps = 0.3
    horizon, trials = 4, 60_000
    history = markov_informed_probabilities(net, 0, eps, horizon)
    delivery, _ = _gossip_batch(net.adjacency(), eps, 0, horizon, rng(5), trials)

    full = frozenset(range(4))
    for t in range(1, horizon + 1):
        # full-coverage CDF
        want = history[t].get(full, 0.0)
        got = float((delivery.max(axis=1) <= t).mean())
        tol = 4 * math.sqrt(max(want * (1 - want), 1e-9) / trials)
        assert abs(got - want) <= tol, (t, got, want)
        # per-node delivery CDF
        for k in range(1, 4):
            want_k = sum(p for s, p in history[t].items() if k in s)
            got_k = float((delivery[:, k] <= t).mean())
            tol_k = 4 * math.sqrt(max(want_k * (1 - want_k), 1e-9) / trials)
            assert abs(got_k - want_k) <= tol_k, (t, k, got_k, want_k)


def test_gossip_delivery_respects_hop_lower_bound():
    net = GridNetwork(side=4, spacing_m=10.0)
    hops = net.hop_counts_from(0)
    delivery, tx = _gossip_batch(net.adjacency(), 0.2, 0, 12, rng(1), 2_000)
    finite = np.isfinite(delivery)
    assert np.all(delivery[finite] >= hops[np.newaxis, :].repeat(2_000, 0)[finite])
    assert np.all(tx >= 0)


def test_gossip_zero_outage_is_deterministic_bfs():
    net = GridNetwork(side=3, spacing_m=10.0)
    hops = net.hop_counts_from(0)
    delivery, _ = _gossip_batch(net.adjacency(), 0.0, 0, 10, rng(2), 50)
    assert np.all(delivery == hops[np.newaxis, :])


# ---------------------------------------------------------------------------
# broadcast kernel: geometric retransmissions
# ---------------------------------------------------------------------------

def test_broadcast_batch_geometric_statistics():
    eps_row = np.array([0.0, 0.2, 0.5, 0.05])
    trials, window = 200_000, 50
    delivery, tx = _broadcast_batch(eps_row, 0, window, rng(3), trials)
    assert np.all(delivery[:, 0] == 0.0)
    for k in (1, 2, 3):
        eps = eps_row[k]
        mean = 1.0 / (1.0 - eps)
        got = float(delivery[:, k][np.isfinite(delivery[:, k])].mean())
        sd = math.sqrt(eps) / (1 - eps)
        assert abs(got - mean) <= 5 * sd / math.sqrt(trials) + 1e-3
    assert np.all(tx == np.minimum(np.max(np.where(np.isfinite(delivery), delivery, window + 1), axis=1), window))


def test_broadcast_batch_window_truncation():
    eps_row = np.array([0.0, 0.6])
    trials, window = 100_000, 3
    delivery, _ = _broadcast_batch(eps_row, 0, window, rng(4), trials)
    fail = float((~np.isfinite(delivery[:, 1])).mean())
    want = 0.6**window
    assert abs(fail - want) <= 4 * math.sqrt(want * (1 - want) / trials)


def test_single_trial_wrappers():
    net = GridNetwork(side=3, spacing_m=10.0)
    trace_g = disseminate_gossip(net, CH, 0, 8, rng(6))
    assert trace_g.delivery_slot.shape == (9,)
    assert trace_g.delivery_slot[0] == 0.0
    trace_b = disseminate_broadcast(net, CH, 4, 5, rng(7))
    assert trace_b.window == 5
    with pytest.raises(InvalidParameterError):
        disseminate_gossip(net, CH, 0, 0, rng())


def test_energy_account():
    assert energy_account(10, 2.5, 0.5) == pytest.approx(12.5)


# ---------------------------------------------------------------------------
# round execution and Monte Carlo harness
# ---------------------------------------------------------------------------

def small_config(mode="R2C", dissemination="broadcast", n_tilde=4, f_faulty=1):
    net = GridNetwork(side=3, spacing_m=10.0)
    windows = np.full(net.node_count, 4, dtype=np.int64)
    return RoundConfig(
        net=net, ch=CH, mode=mode, dissemination=dissemination, proposer=0,
        n_tilde=(net.node_count - 1 if mode == "RC" else n_tilde),
        f_faulty=f_faulty, windows=windows,
    )


def test_round_config_validation():
    net = GridNetwork(side=3, spacing_m=10.0)
    windows = np.full(9, 4, dtype=np.int64)
    with pytest.raises(InvalidParameterError):
        RoundConfig(net=net, ch=CH, mode="RC", dissemination="gossip", proposer=0,
                    n_tilde=4, f_faulty=0, windows=windows)
    with pytest.raises(InvalidParameterError):
        RoundConfig(net=net, ch=CH, mode="R2C", dissemination="gossip", proposer=0,
                    n_tilde=4, f_faulty=0, windows=np.zeros(9, dtype=np.int64))


def test_run_round_returns_trial_record():
    record = run_round(small_config(), rng(8))
    assert isinstance(record, TrialRecord)
    # latency = proposer window + one window per representative
    assert record.latency_slots == pytest.approx(4.0 + 4.0 * 4)
    assert record.latency_s == pytest.approx(record.latency_slots * 2.960023821495172e-4)
    assert 0 <= record.f_tilde <= 1
    assert record.energy_mj > 0


def test_rc_round_latency_is_window_sum():
    cfg = small_config(mode="RC", f_faulty=0)
    result = monte_carlo(cfg, 200, seed=1)
    assert np.all(result.records["latency_slots"] == 4.0 * 9)
    # with zero faults and honest majority, delivered rounds are valid
    assert result.summary["globally_valid_freq"] > 0.9


def test_monte_carlo_deterministic_and_summary():
    cfg = small_config()
    a = monte_carlo(cfg, 700, seed=42)          # spans two blocks (512 + 188)
    b = monte_carlo(cfg, 700, seed=42)
    for key in a.records:
        np.testing.assert_array_equal(a.records[key], b.records[key])
    c = monte_carlo(cfg, 700, seed=43)
    assert any(
        not np.array_equal(a.records[k], c.records[k]) for k in a.records
    )
    for key in ("latency_slots_mean", "energy_mj_mean", "resiliency_freq",
                "distortion_slots_mean", "globally_valid_freq"):
        assert key in a.summary
    with pytest.raises(InvalidParameterError):
        monte_carlo(cfg, 0, seed=1)


def test_monte_carlo_worker_count_invariant():
    cfg = small_config(dissemination="gossip")
    serial = monte_carlo(cfg, 1200, seed=9, workers=1)
    parallel = monte_carlo(cfg, 1200, seed=9, workers=4)
    for key in serial.records:
        np.testing.assert_array_equal(serial.records[key], parallel.records[key])


def test_faulty_votes_flip_outcomes():
    # all-faulty R2C representatives with vote inversion: never globally valid
    cfg = small_config(n_tilde=3, f_faulty=8)
    result = monte_carlo(cfg, 300, seed=2)
    assert result.summary["globally_valid_freq"] == 0.0
    assert np.all(result.records["f_tilde"] == 3)


def test_resiliency_frequency_matches_exact():
    for n_total, f, n_tilde in [(20, 6, 9), (80, 25, 30)]:
        exact = resiliency_exact(n_total, f, n_tilde)
        freq = resiliency_frequency(n_total, f, n_tilde, 60_000, seed=11)
        tol = 4 * math.sqrt(exact * (1 - exact) / 60_000)
        assert abs(freq - exact) <= tol


def test_calibrate_gossip_windows():
    net = GridNetwork(side=3, spacing_m=10.0)
    windows = calibrate_gossip_windows(net, CH, zeta=0.99, trials=400, seed=0)
    floors = np.array([int(net.hop_counts_from(i).max()) for i in range(9)])
    assert np.all(windows >= floors)
    assert np.array_equal(
        calibrate_gossip_windows(net, CH, zeta=0.0, trials=10, seed=0), floors
    )
