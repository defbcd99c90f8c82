"""Primary verification suite: every check the package must pass before use.

Each criterion is a standalone function returning a CriterionResult; the CLI
`selftest` command and the pytest acceptance module both run these.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np
from scipy.special import erf as erf_oracle

from . import analytics
from .analytics import ReliabilityTargets
from .channel import ChannelParams, broadcast_window, slot_duration
from .figures import BUILTIN_FIGURES, RESULT_COLUMNS
from .grid import GridNetwork
from .scenario import Scenario, dissemination_windows, resolve_round_config
from .simengine import (
    RoundConfig,
    _broadcast_batch,
    _gossip_batch,
    monte_carlo,
    resiliency_frequency,
)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed_s: float


def _result(number, name, passed, detail, t0) -> CriterionResult:
    return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - t0)


# ---------------------------------------------------------------------------

def check_erf_approximant() -> CriterionResult:
    """Relative error of the approximant and its analytic inverse."""
    t0 = time.perf_counter()
    x = np.arange(1e-3, 6.0 + 1e-9, 1e-3)
    approx = np.array([analytics.erf_approx(v) for v in x])
    rel = np.max(np.abs(approx - erf_oracle(x)) / erf_oracle(x))
    xs = np.linspace(0.0, 3.0, 301)
    roundtrip = max(
        abs(analytics.erf_approx_inv(analytics.erf_approx(v)) - v) for v in xs
    )
    ok = rel <= 0.004 and roundtrip <= 1e-6
    return _result(
        1, "erf approximant precision",
        ok, f"max rel err {rel:.2e} (<=0.004), roundtrip {roundtrip:.2e} (<=1e-6)", t0,
    )


def _resiliency_bruteforce(n_total: int, f: int, n_tilde: int) -> Fraction:
    """Exhaustive subset enumeration with exact rational arithmetic."""
    hits = 0
    for combo in itertools.combinations(range(n_total), n_tilde):
        f_tilde = sum(1 for x in combo if x < f)
        if f_tilde < Fraction(n_tilde, 3):
            hits += 1
    return Fraction(hits, math.comb(n_total, n_tilde))


def check_resiliency_exact() -> CriterionResult:
    """Log-space tail sum vs exhaustive enumeration for all small cases."""
    t0 = time.perf_counter()
    worst = 0.0
    for n_total in range(1, 13):
        for n_tilde in range(1, n_total + 1):
            for f in range(0, n_total + 1):
                got = analytics.resiliency_exact(n_total, f, n_tilde)
                want = float(_resiliency_bruteforce(n_total, f, n_tilde))
                worst = max(worst, abs(got - want))
    return _result(
        2, "resiliency exact vs enumeration",
        worst <= 1e-12, f"max abs deviation {worst:.2e} (<=1e-12), N<=12 exhaustive", t0,
    )


def check_resiliency_curves() -> CriterionResult:
    """Normal approximation and Monte Carlo against the exact tail (N = 80)."""
    t0 = time.perf_counter()
    n_total = 80
    worst_gap = 0.0
    for f in (5, 15, 25):
        for n_tilde in range(10, 71):
            gap = abs(
                analytics.resiliency_normal(n_total, f, n_tilde)
                - analytics.resiliency_exact(n_total, f, n_tilde)
            )
            worst_gap = max(worst_gap, gap)
    trials = 100_000
    mc_ok = True
    worst_z = 0.0
    for f in (5, 15, 25):
        for n_tilde in range(10, 71, 10):
            exact = analytics.resiliency_exact(n_total, f, n_tilde)
            freq = resiliency_frequency(
                n_total, f, n_tilde, trials, seed=hash((202406, f, n_tilde)) & 0x7FFFFFFF
            )
            sigma = math.sqrt(max(exact * (1 - exact), 1e-12) / trials)
            z = abs(freq - exact) / sigma
            worst_z = max(worst_z, z)
            mc_ok = mc_ok and abs(freq - exact) <= 3 * sigma + 1e-12
    ok = worst_gap <= 0.05 and mc_ok
    return _result(
        3, "resiliency: normal approx + MC vs exact",
        ok, f"max |normal-exact| {worst_gap:.4f} (<=0.05), max MC z {worst_z:.2f} (<=3)", t0,
    )


def check_psi_closed_forms() -> CriterionResult:
    """Lattice delay-moment aggregate vs the corner/center closed forms."""
    t0 = time.perf_counter()
    worst = 0.0
    for side in (3, 5, 9):
        net = GridNetwork(side=side, spacing_m=10.0)
        n = net.node_count - 1
        pairs = [
            (analytics.psi_gossip(net, net.corner_node, "paper_plus").value,
             analytics.psi_gossip_corner_closed_form(n)),
            (analytics.psi_gossip(net, net.center_node, "paper_plus").value,
             analytics.psi_gossip_center_closed_form(n)),
        ]
        for got, want in pairs:
            worst = max(worst, abs(got - want) / want)
    net3 = GridNetwork(side=3, spacing_m=10.0)
    spot_corner = analytics.psi_gossip(net3, net3.corner_node, "paper_plus").value
    spot_center = analytics.psi_gossip(net3, net3.center_node, "paper_plus").value
    spots_ok = abs(spot_corner - 87.4286) < 5e-4 and abs(spot_center - 37.7143) < 5e-4
    ok = worst <= 1e-9 and spots_ok
    return _result(
        4, "psi lattice sums vs closed forms",
        ok, f"max rel dev {worst:.2e} (<=1e-9), spots {spot_corner:.4f}/{spot_center:.4f}", t0,
    )


def check_distortion_variance(workers: int = 1) -> CriterionResult:
    """Empirical Var(D) arbitrates the cross-moment sign in psi."""
    t0 = time.perf_counter()
    n_tilde, trials = 20, 100_000
    scenario = Scenario(
        name="arb", mode="R2C", dissemination="broadcast", side=9, spacing_m=10.0,
        ch=ChannelParams(), targets=ReliabilityTargets(zeta=0.9999),
        proposer_position="corner", n_tilde=n_tilde,
    )
    cfg = resolve_round_config(scenario)
    net, ch = cfg.net, cfg.ch
    n_total = net.node_count - 1
    result = monte_carlo(cfg, trials, seed=20240805, workers=workers)
    d = result.records["distortion_slots"]
    d = d[np.isfinite(d)]
    var_emp = float(d.var(ddof=1))
    psi_minus = analytics.psi_broadcast(ch, net, cfg.proposer, "corrected_minus").value
    psi_plus = analytics.psi_broadcast(ch, net, cfg.proposer, "paper_plus").value
    pred_minus = (n_total - n_tilde) * psi_minus / (n_tilde * n_total**2)
    pred_plus = (n_total - n_tilde) * psi_plus / (n_tilde * n_total**2)
    rel = abs(var_emp - pred_minus) / pred_minus
    mean_z = abs(d.mean()) / (d.std(ddof=1) / math.sqrt(d.size))
    ok = rel <= 0.05 and var_emp < pred_plus and mean_z <= 3.0
    return _result(
        5, "distortion variance sign arbitration",
        ok,
        f"Var(D)={var_emp:.4f}, minus-pred {pred_minus:.4f} (rel {rel:.3f}<=0.05), "
        f"plus-pred {pred_plus:.4f} (must exceed), mean z {mean_z:.2f} (<=3)", t0,
    )


def check_latency_bounds(workers: int = 1) -> CriterionResult:
    """Simulated RC latencies against the closed-form bounds/sums."""
    t0 = time.perf_counter()
    net = GridNetwork(side=9, spacing_m=10.0)
    ch = ChannelParams()
    zeta = 0.9999
    n_total = net.node_count - 1

    # gossip rounds: every trial's latency respects the lower bound
    w_g = dissemination_windows(net, ch, "gossip", zeta)
    cfg_g = RoundConfig(
        net=net, ch=ch, mode="RC", dissemination="gossip", proposer=net.corner_node,
        n_tilde=n_total, f_faulty=0, windows=w_g,
    )
    res_g = monte_carlo(cfg_g, 10_000, seed=41, workers=workers)
    lb = analytics.rc_latency_gossip_lb(n_total)
    gossip_ok = bool((res_g.records["latency_slots"] >= lb).all())

    # proposer dissemination finishes at the hop radius in >= 99% of trials
    from .channel import epsilon_gossip
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(42)))
    hop_radius = int(net.hop_counts_from(net.corner_node).max())
    delivery, _ = _gossip_batch(
        net.adjacency(), epsilon_gossip(ch, net), net.corner_node,
        hop_radius + 4, rng, trials=10_000,
    )
    coverage = np.where(np.isfinite(delivery), delivery, np.inf).max(axis=1)
    tight_frac = float((coverage == hop_radius).mean())

    # broadcast rounds: latency equals the window sum in every trial
    w_b = dissemination_windows(net, ch, "broadcast", zeta)
    cfg_b = replace(cfg_g, dissemination="broadcast", windows=w_b)
    res_b = monte_carlo(cfg_b, 2_000, seed=43, workers=workers)
    expected_b = float(analytics.rc_latency_broadcast(ch, net, zeta))
    broadcast_ok = bool((res_b.records["latency_slots"] == expected_b).all())

    ok = gossip_ok and tight_frac >= 0.99 and broadcast_ok
    return _result(
        6, "simulated latency vs closed forms",
        ok,
        f"gossip >= {lb:.0f} slots: {gossip_ok}; tight dissemination {tight_frac:.4f} "
        f"(>=0.99); broadcast == {expected_b:.0f}: {broadcast_ok}", t0,
    )


def check_broadcast_window_guarantee() -> CriterionResult:
    """Closed-form windows meet the dissemination success target."""
    t0 = time.perf_counter()
    net = GridNetwork(side=9, spacing_m=10.0)
    ch = ChannelParams()
    zeta, trials = 0.99, 100_000
    threshold = (1 - zeta) + 3 * math.sqrt(zeta * (1 - zeta) / trials)
    details = []
    ok = True
    for label, source in (("corner", net.corner_node), ("center", net.center_node)):
        w = broadcast_window(ch, net, source, zeta)
        d = net.distances_from(source)
        d[source] = ch.r0_m
        from .channel import outage_prob
        eps_row = outage_prob(ch, d, ch.pt_broadcast_mw)
        eps_row[source] = 0.0
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence((77, source))))
        delivery, _ = _broadcast_batch(eps_row, source, w, rng, trials)
        fail = float((~np.isfinite(delivery).all(axis=1)).mean())
        details.append(f"{label}: w={w}, fail {fail:.5f} (<= {threshold:.5f})")
        ok = ok and fail <= threshold
    return _result(7, "broadcast window guarantee", ok, "; ".join(details), t0)


def check_latency_trends() -> CriterionResult:
    """Latency monotone in alpha; protocol ordering at the reference targets."""
    t0 = time.perf_counter()
    from .figures import _analytic_latencies

    net = GridNetwork(side=9, spacing_m=10.0)
    ch = ChannelParams()
    tau = slot_duration(ch)
    alphas = (0.8, 0.9, 0.95, 0.99, 0.999, 0.999999)
    series = {"gossip": [], "broadcast": []}
    for alpha in alphas:
        targets = ReliabilityTargets(
            alpha=alpha, beta_s=tau, gamma=0.9, zeta=0.9999, f_faulty=5
        )
        lat = _analytic_latencies(net, ch, targets)
        for diss in series:
            series[diss].append(lat[f"latency_r2c_{diss}"])
    monotone = all(
        a <= b + 1e-9 for vals in series.values() for a, b in zip(vals, vals[1:])
    )
    # approach to the full-referendum latency as alpha -> 1: the sizing term
    # grows strictly with alpha, latency never exceeds the RC value along the
    # sweep, and at the full validator set the two latencies coincide exactly
    sizes = [analytics.n_alpha(80, 5, a) for a in alphas]
    growing = all(a < b for a, b in zip(sizes, sizes[1:]))
    bounded = all(
        lat <= ref + 1e-9
        for diss, ref in (("gossip", 1008.0), ("broadcast", analytics.rc_latency_broadcast(ch, net, 0.9999)))
        for lat in series[diss]
    )
    limit_match = (
        analytics.r2c_latency_gossip_lb(80, 80, "corner")
        == analytics.rc_latency_gossip_lb(80)
        and analytics.r2c_latency_broadcast(ch, net, net.corner_node, 80, 0.9999)
        == analytics.rc_latency_broadcast(ch, net, 0.9999)
    )
    approaches = growing and bounded and limit_match

    targets_ref = ReliabilityTargets(
        alpha=0.99, beta_s=tau, gamma=0.9, zeta=0.9999, f_faulty=5
    )
    lat = _analytic_latencies(net, ch, targets_ref)
    ordering = (
        lat["latency_r2c_broadcast"] < lat["latency_r2c_gossip"] < lat["latency_rc_gossip"]
        and lat["latency_r2c_broadcast"] < lat["latency_rc_broadcast"]
    )
    ok = monotone and approaches and ordering
    return _result(
        8, "latency trends and protocol ordering",
        ok,
        f"monotone in alpha: {monotone}; approaches RC (growing sizing, bounded, "
        f"exact match at full set): {approaches}; ordering b-R2C {lat['latency_r2c_broadcast']:.0f} < g-R2C "
        f"{lat['latency_r2c_gossip']:.0f} < g-RC {lat['latency_rc_gossip']:.0f}, "
        f"b-RC {lat['latency_rc_broadcast']:.0f}", t0,
    )


def check_scalability_trend() -> CriterionResult:
    """Broadcast sizing plateaus with network size; gossip sizing keeps growing."""
    t0 = time.perf_counter()
    from .analytics import required_validators

    ch = ChannelParams()
    tau = slot_duration(ch)

    def sized(side, diss):
        n_total = side * side - 1
        net = GridNetwork(side=side, spacing_m=100.0 / (side - 1))
        targets = ReliabilityTargets(
            alpha=0.99, beta_s=tau, gamma=0.9, zeta=0.9999,
            f_faulty=round(0.1 * n_total),
        )
        return required_validators(
            n_total, targets, net, ch, net.corner_node, diss, tau_s=tau
        ).n_required

    # side 20 -> N = 399 (>= 392); side 14 -> N = 195 ~= N/2
    b_big, b_half = sized(20, "broadcast"), sized(14, "broadcast")
    g_big, g_half = sized(20, "gossip"), sized(14, "gossip")
    broadcast_flat = (b_big - b_half) <= 0.1 * b_half
    gossip_grows = (g_big - g_half) >= 0.5 * g_half
    ok = broadcast_flat and gossip_grows
    return _result(
        9, "scalability of validator sizing",
        ok,
        f"broadcast {b_half}->{b_big} (delta <= {0.1 * b_half:.1f}); "
        f"gossip {g_half}->{g_big} (delta >= {0.5 * g_half:.1f})", t0,
    )


def check_determinism() -> CriterionResult:
    """Identical seed and any worker count give byte-identical CSV output."""
    t0 = time.perf_counter()
    import csv
    import io

    from .figures import run_scenario

    scenario = Scenario(
        name="determinism", mode="R2C", dissemination="broadcast", side=9,
        spacing_m=10.0, ch=ChannelParams(),
        targets=ReliabilityTargets(zeta=0.9999, f_faulty=5),
        proposer_position="corner", n_tilde=20, trials=2_000, seed=99,
    )

    def render(workers):
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(RESULT_COLUMNS)
        writer.writerows(run_scenario(scenario, workers=workers))
        return buf.getvalue().encode()

    first = render(workers=1)
    second = render(workers=1)
    parallel = render(workers=3)
    ok = first == second == parallel
    return _result(
        10, "seeded determinism across worker counts",
        ok, f"rerun identical: {first == second}; workers=3 identical: {first == parallel}", t0,
    )


ALL_CRITERIA = (
    check_erf_approximant,
    check_resiliency_exact,
    check_resiliency_curves,
    check_psi_closed_forms,
    check_distortion_variance,
    check_latency_bounds,
    check_broadcast_window_guarantee,
    check_latency_trends,
    check_scalability_trend,
    check_determinism,
)


def run_all() -> list[CriterionResult]:
    return [fn() for fn in ALL_CRITERIA]
