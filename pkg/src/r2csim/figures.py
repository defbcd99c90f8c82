"""Built-in experiment sweeps producing ResultRow CSV tables.

Each runner returns a list of rows with the fixed column order
(scenario, sweep_var, sweep_value, metric, value, ci_low, ci_high, trials, seed).
"""

from __future__ import annotations

import math
from dataclasses import replace
from typing import Optional

import numpy as np

from . import analytics
from .analytics import ReliabilityTargets, required_validators
from .channel import ChannelParams, slot_duration
from .grid import GridNetwork
from .scenario import Scenario, dissemination_windows, resolve_round_config
from .simengine import monte_carlo, resiliency_frequency

RESULT_COLUMNS = (
    "scenario",
    "sweep_var",
    "sweep_value",
    "metric",
    "value",
    "ci_low",
    "ci_high",
    "trials",
    "seed",
)

DEFAULT_CH = ChannelParams()
DEFAULT_SIDE = 9          # 81 nodes, N = 80
DEFAULT_ZETA = 0.9999


def _row(scenario, sweep_var, sweep_value, metric, value, ci=None, trials="", seed=""):
    lo, hi = ("", "") if ci is None else (repr(ci[0]), repr(ci[1]))
    return [
        scenario,
        sweep_var,
        repr(sweep_value) if isinstance(sweep_value, float) else str(sweep_value),
        metric,
        repr(float(value)),
        lo,
        hi,
        str(trials),
        str(seed),
    ]


def _binomial_ci(p: float, n: int) -> tuple[float, float]:
    half = 1.96 * math.sqrt(max(p * (1.0 - p), 0.0) / n)
    return p - half, p + half


def _r2c_scenario(**kw) -> Scenario:
    base = dict(
        name="adhoc",
        mode="R2C",
        dissemination="broadcast",
        side=DEFAULT_SIDE,
        spacing_m=10.0,
        ch=DEFAULT_CH,
        targets=ReliabilityTargets(zeta=DEFAULT_ZETA),
        proposer_position="corner",
        n_tilde="auto",
    )
    base.update(kw)
    return Scenario(**base)


# ---------------------------------------------------------------------------
# Resiliency probability vs representative count (exact / normal / MC)
# ---------------------------------------------------------------------------

def run_fig3(trials: Optional[int] = None, seed: int = 7, workers: int = 1) -> list:
    trials = trials or 100_000
    n_total = DEFAULT_SIDE * DEFAULT_SIDE - 1
    rows = []
    for f in (5, 15, 25):
        for n_tilde in range(10, 71, 5):
            exact = analytics.resiliency_exact(n_total, f, n_tilde)
            approx = analytics.resiliency_normal(n_total, f, n_tilde)
            freq = resiliency_frequency(
                n_total, f, n_tilde, trials, seed=hash((seed, f, n_tilde)) & 0x7FFFFFFF
            )
            rows.append(_row("fig3", "n_tilde", n_tilde, f"resiliency_exact_F{f}", exact))
            rows.append(_row("fig3", "n_tilde", n_tilde, f"resiliency_normal_F{f}", approx))
            rows.append(
                _row(
                    "fig3", "n_tilde", n_tilde, f"resiliency_mc_F{f}", freq,
                    ci=_binomial_ci(freq, trials), trials=trials, seed=seed,
                )
            )
    return rows


# ---------------------------------------------------------------------------
# Distortion outage vs representative count (empirical / erf / approximant)
# ---------------------------------------------------------------------------

def run_fig4(trials: Optional[int] = None, seed: int = 11, workers: int = 1) -> list:
    trials = trials or 20_000
    betas_slots = (0.5, 1.0, 2.0)
    scenario = _r2c_scenario(name="fig4", dissemination="broadcast")
    net = scenario.network()
    ch = scenario.ch
    tau = slot_duration(ch)
    proposer = scenario.proposer_node(net)
    n_total = net.node_count - 1
    psi = analytics.psi_broadcast(ch, net, proposer, "corrected_minus").value
    rows = []
    for n_tilde in range(10, 71, 10):
        cfg = resolve_round_config(replace(scenario, n_tilde=n_tilde))
        result = monte_carlo(cfg, trials, seed, workers=workers)
        dist = result.records["distortion_slots"]
        dist = dist[np.isfinite(dist)]
        sigma2 = analytics.sigma_d_squared(n_total, n_tilde, tau, psi)
        for beta in betas_slots:
            emp = float((np.abs(dist) > beta).mean())
            rows.append(
                _row(
                    "fig4", "n_tilde", n_tilde, f"outage_mc_b{beta:g}", emp,
                    ci=_binomial_ci(emp, dist.size), trials=trials, seed=seed,
                )
            )
            rows.append(
                _row(
                    "fig4", "n_tilde", n_tilde, f"outage_erf_b{beta:g}",
                    analytics.distortion_outage_normal(beta * tau, sigma2, use_approximant=False),
                )
            )
            rows.append(
                _row(
                    "fig4", "n_tilde", n_tilde, f"outage_g_b{beta:g}",
                    analytics.distortion_outage_normal(beta * tau, sigma2, use_approximant=True),
                )
            )
    return rows


# ---------------------------------------------------------------------------
# Analytic latency helpers shared by the latency figures
# ---------------------------------------------------------------------------

def _analytic_latencies(
    net: GridNetwork,
    ch: ChannelParams,
    targets: ReliabilityTargets,
    position: str = "corner",
) -> dict:
    """Slot-count latencies of the four protocol/dissemination pairings."""
    n_total = net.node_count - 1
    proposer = net.corner_node if position == "corner" else net.center_node
    tau = slot_duration(ch)
    out = {
        "latency_rc_gossip": analytics.rc_latency_gossip_lb(n_total),
        "latency_rc_broadcast": float(
            analytics.rc_latency_broadcast(ch, net, targets.zeta)
        ),
    }
    for diss in ("gossip", "broadcast"):
        sizing = required_validators(
            n_total, targets, net, ch, proposer, diss, tau_s=tau
        )
        n_tilde = sizing.n_required
        if diss == "gossip":
            lat = analytics.r2c_latency_gossip_lb(n_total, n_tilde, position)
        else:
            lat = analytics.r2c_latency_broadcast(ch, net, proposer, n_tilde, targets.zeta)
        out[f"latency_r2c_{diss}"] = float(lat)
        out[f"n_required_{diss}"] = n_tilde
    return out


def run_fig5(trials=None, seed: int = 0, workers: int = 1) -> list:
    net = GridNetwork(side=DEFAULT_SIDE, spacing_m=10.0)
    tau = slot_duration(DEFAULT_CH)
    rows = []
    for f in (5, 25):
        for alpha in (0.8, 0.9, 0.95, 0.98, 0.99, 0.995, 0.999):
            targets = ReliabilityTargets(
                alpha=alpha, beta_s=1.0 * tau, gamma=0.9, zeta=DEFAULT_ZETA, f_faulty=f
            )
            lat = _analytic_latencies(net, DEFAULT_CH, targets)
            for key in ("latency_rc_gossip", "latency_rc_broadcast"):
                rows.append(_row("fig5", "alpha", alpha, key, lat[key]))
            for diss in ("gossip", "broadcast"):
                rows.append(
                    _row("fig5", "alpha", alpha, f"latency_r2c_{diss}_F{f}",
                         lat[f"latency_r2c_{diss}"])
                )
    return rows


def run_fig6a(trials=None, seed: int = 0, workers: int = 1) -> list:
    return _run_fig6("fig6a", "beta_slots", (0.25, 0.5, 1.0, 2.0, 4.0), gamma=0.9)


def run_fig6b(trials=None, seed: int = 0, workers: int = 1) -> list:
    return _run_fig6("fig6b", "gamma", (0.5, 0.7, 0.8, 0.9, 0.95, 0.99), beta_slots=1.0)


def _run_fig6(name, sweep_var, sweep_values, beta_slots=None, gamma=None) -> list:
    net = GridNetwork(side=DEFAULT_SIDE, spacing_m=10.0)
    tau = slot_duration(DEFAULT_CH)
    rows = []
    for value in sweep_values:
        b = value if sweep_var == "beta_slots" else beta_slots
        g = value if sweep_var == "gamma" else gamma
        targets = ReliabilityTargets(
            alpha=0.99, beta_s=b * tau, gamma=g, zeta=DEFAULT_ZETA, f_faulty=5
        )
        lat = _analytic_latencies(net, DEFAULT_CH, targets)
        for key in (
            "latency_rc_gossip",
            "latency_rc_broadcast",
            "latency_r2c_gossip",
            "latency_r2c_broadcast",
        ):
            rows.append(_row(name, sweep_var, value, key, lat[key]))
    return rows


# ---------------------------------------------------------------------------
# Latency and normalized energy vs faulty-node count
# ---------------------------------------------------------------------------

def _run_fig7(
    name: str, alpha: float, gamma: float, trials: Optional[int], seed: int, workers: int
) -> list:
    trials = trials or 200
    net = GridNetwork(side=DEFAULT_SIDE, spacing_m=10.0)
    tau = slot_duration(DEFAULT_CH)
    rows = []
    for f in (1, 5, 10, 15, 20, 25):
        targets = ReliabilityTargets(
            alpha=alpha, beta_s=1.0 * tau, gamma=gamma, zeta=DEFAULT_ZETA, f_faulty=f
        )
        lat = _analytic_latencies(net, DEFAULT_CH, targets)
        energies = {}
        for mode, diss in (
            ("RC", "gossip"),
            ("RC", "broadcast"),
            ("R2C", "gossip"),
            ("R2C", "broadcast"),
        ):
            key = f"{mode.lower()}_{diss}"
            metric = f"latency_{key}"
            rows.append(_row(name, "f_faulty", f, metric, lat[metric]))
            scenario = _r2c_scenario(
                name=name, mode=mode, dissemination=diss, targets=targets,
                n_tilde=(lat[f"n_required_{diss}"] if mode == "R2C" else "auto"),
            )
            cfg = resolve_round_config(scenario)
            result = monte_carlo(cfg, trials, seed, workers=workers)
            energies[key] = result.summary["energy_mj_mean"]
            rows.append(
                _row(
                    name, "f_faulty", f, f"latency_mc_{key}",
                    result.summary["latency_slots_mean"], trials=trials, seed=seed,
                )
            )
        baseline = energies["rc_gossip"]
        for key, value in energies.items():
            rows.append(
                _row(
                    name, "f_faulty", f, f"energy_norm_{key}", value / baseline,
                    trials=trials, seed=seed,
                )
            )
    return rows


def run_fig7_caption(trials=None, seed: int = 3, workers: int = 1) -> list:
    return _run_fig7("fig7", alpha=0.99, gamma=0.9, trials=trials, seed=seed, workers=workers)


def run_fig7_text(trials=None, seed: int = 3, workers: int = 1) -> list:
    return _run_fig7("fig7-text", alpha=0.01, gamma=0.1, trials=trials, seed=seed, workers=workers)


def run_fig7a(trials=None, seed: int = 3, workers: int = 1) -> list:
    return [r for r in run_fig7_caption(trials, seed, workers) if r[3].startswith("latency")]


def run_fig7b(trials=None, seed: int = 3, workers: int = 1) -> list:
    return [r for r in run_fig7_caption(trials, seed, workers) if r[3].startswith("energy")]


# ---------------------------------------------------------------------------
# Required validators vs network size at fixed coverage area
# ---------------------------------------------------------------------------

FIG8_AREA_M2 = 10_000.0
FIG8_SIDES = (4, 6, 8, 10, 12, 14, 16, 18, 20)


def run_fig8(trials=None, seed: int = 0, workers: int = 1) -> list:
    tau = slot_duration(DEFAULT_CH)
    rows = []
    for side in FIG8_SIDES:
        n_total = side * side - 1
        spacing = math.sqrt(FIG8_AREA_M2) / (side - 1)
        net = GridNetwork(side=side, spacing_m=spacing)
        f = round(0.1 * n_total)
        targets = ReliabilityTargets(
            alpha=0.99, beta_s=1.0 * tau, gamma=0.9, zeta=DEFAULT_ZETA, f_faulty=f
        )
        proposer = net.corner_node
        for diss in ("gossip", "broadcast"):
            sizing = required_validators(
                n_total, targets, net, DEFAULT_CH, proposer, diss, tau_s=tau
            )
            rows.append(
                _row("fig8", "n_total", n_total, f"required_{diss}", sizing.n_required)
            )
        rows.append(
            _row("fig8", "n_total", n_total, "n_alpha",
                 analytics.n_alpha(n_total, f, targets.alpha))
        )
    return rows


# ---------------------------------------------------------------------------
# Custom scenario runner
# ---------------------------------------------------------------------------

def run_scenario(scenario: Scenario, trials=None, seed=None, workers: int = 1) -> list:
    trials = trials or scenario.trials
    seed = scenario.seed if seed is None else seed
    cfg = resolve_round_config(scenario)
    result = monte_carlo(cfg, trials, seed, workers=workers)
    rows = [
        _row(scenario.name, "", "", "n_tilde", cfg.n_tilde, trials=trials, seed=seed)
    ]
    for metric in sorted(result.summary):
        rows.append(
            _row(scenario.name, "", "", metric, result.summary[metric],
                 trials=trials, seed=seed)
        )
    return rows


BUILTIN_FIGURES = {
    "fig3": run_fig3,
    "fig4": run_fig4,
    "fig5": run_fig5,
    "fig6a": run_fig6a,
    "fig6b": run_fig6b,
    "fig7": run_fig7_caption,
    "fig7-caption": run_fig7_caption,
    "fig7-text": run_fig7_text,
    "fig7a": run_fig7a,
    "fig7b": run_fig7b,
    "fig8": run_fig8,
}
