"""Command-line interface.

Subcommands:
  run       execute a built-in sweep or a YAML scenario, write a CSV table
  analytic  evaluate a single closed-form quantity and print it
  selftest  run the verification suite

Exit codes: 0 success, 1 infeasible/invalid scenario or parameters,
2 selftest failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .analytics import (
    InfeasibleResiliencyError,
    ReliabilityTargets,
    n_alpha,
    n_beta_gamma,
    psi_broadcast,
    psi_gossip,
    r2c_latency_broadcast,
    r2c_latency_gossip_lb,
    rc_latency_broadcast,
    rc_latency_gossip_lb,
    required_validators,
    resiliency_exact,
    resiliency_normal,
)
from .channel import ChannelParams, UnattainableTargetError, slot_duration
from .figures import BUILTIN_FIGURES, RESULT_COLUMNS, run_scenario
from .grid import GridNetwork, InvalidParameterError
from .scenario import load_scenario

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_SELFTEST_FAILED = 2


def _add_grid_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--side", type=int, default=9, help="grid side length (nodes)")
    p.add_argument("--spacing", type=float, default=10.0, help="node spacing in meters")
    p.add_argument(
        "--proposer", default="corner", help="proposer position: corner|center|node id"
    )


def _network(args) -> tuple[GridNetwork, int]:
    net = GridNetwork(side=args.side, spacing_m=args.spacing)
    if args.proposer == "corner":
        proposer = net.corner_node
    elif args.proposer == "center":
        proposer = net.center_node
    else:
        proposer = int(args.proposer)
    return net, proposer


def _emit(args, payload: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        width = max(len(k) for k in payload)
        for key, value in payload.items():
            print(f"{key:<{width}}  {value}")


def cmd_run(args) -> int:
    if args.scenario in BUILTIN_FIGURES:
        name = args.scenario
        rows = BUILTIN_FIGURES[name](
            trials=args.trials, seed=args.seed, workers=args.workers
        )
    else:
        scenario = load_scenario(args.scenario)
        name = scenario.name
        rows = run_scenario(
            scenario, trials=args.trials, seed=args.seed, workers=args.workers
        )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / f"{name}.csv"
    with out_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_COLUMNS)
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {out_path}")
    return EXIT_OK


def cmd_analytic(args) -> int:
    ch = ChannelParams()
    tau = slot_duration(ch)

    if args.quantity == "n-alpha":
        value = n_alpha(args.n, args.f, args.alpha)
        _emit(args, {"n_alpha": value})
    elif args.quantity == "n-beta-gamma":
        net, proposer = _network(args)
        psi = (
            psi_gossip(net, proposer, args.psi_variant)
            if args.dissemination == "gossip"
            else psi_broadcast(ch, net, proposer, args.psi_variant)
        )
        value = n_beta_gamma(args.n, args.beta_slots * tau, args.gamma, tau, psi.value)
        _emit(args, {"psi": psi.value, "n_beta_gamma": value})
    elif args.quantity == "sizing":
        net, proposer = _network(args)
        n_total = net.node_count - 1
        targets = ReliabilityTargets(
            alpha=args.alpha, beta_s=args.beta_slots * tau, gamma=args.gamma,
            zeta=args.zeta, f_faulty=args.f,
        )
        sizing = required_validators(
            n_total, targets, net, ch, proposer, args.dissemination, tau_s=tau
        )
        _emit(args, {
            "n_alpha": sizing.n_alpha,
            "n_beta_gamma": sizing.n_beta_gamma,
            "n_required": sizing.n_required,
        })
    elif args.quantity == "latency":
        net, proposer = _network(args)
        n_total = net.node_count - 1
        if args.mode == "RC":
            if args.dissemination == "gossip":
                value = rc_latency_gossip_lb(n_total)
            else:
                value = float(rc_latency_broadcast(ch, net, args.zeta))
        else:
            if args.n_tilde is None:
                raise InvalidParameterError("R2C latency needs --n-tilde")
            if args.dissemination == "gossip":
                position = args.proposer if args.proposer in ("corner", "center") else "corner"
                value = r2c_latency_gossip_lb(n_total, args.n_tilde, position)
            else:
                value = float(
                    r2c_latency_broadcast(ch, net, proposer, args.n_tilde, args.zeta)
                )
        _emit(args, {"latency_slots": value, "latency_s": value * tau})
    elif args.quantity == "resiliency":
        exact = resiliency_exact(args.n, args.f, args.n_tilde)
        approx = resiliency_normal(args.n, args.f, args.n_tilde)
        _emit(args, {"exact": exact, "normal": approx})
    elif args.quantity == "psi":
        net, proposer = _network(args)
        psi = (
            psi_gossip(net, proposer, args.psi_variant)
            if args.dissemination == "gossip"
            else psi_broadcast(ch, net, proposer, args.psi_variant)
        )
        _emit(args, {f"psi_{args.psi_variant}": psi.value})
    else:  # pragma: no cover - argparse restricts choices
        raise InvalidParameterError(f"unknown quantity {args.quantity!r}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import ALL_CRITERIA

    checks = ALL_CRITERIA
    if args.only:
        wanted = {int(x) for x in args.only.split(",")}
        checks = [fn for fn in ALL_CRITERIA if _criterion_number(fn) in wanted]
    failures = 0
    for fn in checks:
        result = fn()
        status = "PASS" if result.passed else "FAIL"
        print(
            f"[{status}] criterion {result.number}: {result.name} "
            f"({result.elapsed_s:.1f}s) - {result.detail}"
        )
        failures += 0 if result.passed else 1
    if failures:
        print(f"{failures} criterion(s) failed")
        return EXIT_SELFTEST_FAILED
    print("all criteria passed")
    return EXIT_OK


def _criterion_number(fn) -> int:
    order = {
        "check_erf_approximant": 1,
        "check_resiliency_exact": 2,
        "check_resiliency_curves": 3,
        "check_psi_closed_forms": 4,
        "check_distortion_variance": 5,
        "check_latency_bounds": 6,
        "check_broadcast_window_guarantee": 7,
        "check_latency_trends": 8,
        "check_scalability_trend": 9,
        "check_determinism": 10,
    }
    return order[fn.__name__]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="r2csim",
        description="Analytics and Monte Carlo for consensus over wireless grids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a built-in sweep or a YAML scenario")
    p_run.add_argument(
        "--scenario", required=True,
        help=f"built-in name ({', '.join(sorted(BUILTIN_FIGURES))}) or YAML path",
    )
    p_run.add_argument("--trials", type=int, default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default="results")
    p_run.add_argument("--workers", type=int, default=1)
    p_run.set_defaults(handler=cmd_run)

    p_an = sub.add_parser("analytic", help="evaluate a closed-form quantity")
    p_an.add_argument(
        "quantity",
        choices=["n-alpha", "n-beta-gamma", "sizing", "latency", "resiliency", "psi"],
    )
    p_an.add_argument("--n", type=int, default=80, help="non-proposer node count")
    p_an.add_argument("--f", type=int, default=0, help="faulty node count")
    p_an.add_argument("--n-tilde", type=int, default=None, help="validator count")
    p_an.add_argument("--alpha", type=float, default=0.99)
    p_an.add_argument("--beta-slots", type=float, default=1.0)
    p_an.add_argument("--gamma", type=float, default=0.9)
    p_an.add_argument("--zeta", type=float, default=0.9999)
    p_an.add_argument("--mode", choices=["RC", "R2C"], default="R2C")
    p_an.add_argument(
        "--dissemination", choices=["gossip", "broadcast"], default="broadcast"
    )
    p_an.add_argument(
        "--psi-variant", choices=["paper_plus", "corrected_minus"],
        default="paper_plus",
    )
    p_an.add_argument("--json", action="store_true", help="print JSON instead of a table")
    _add_grid_args(p_an)
    p_an.set_defaults(handler=cmd_analytic)

    p_st = sub.add_parser("selftest", help="run the verification suite")
    p_st.add_argument(
        "--only", default="", help="comma-separated criterion numbers to run"
    )
    p_st.set_defaults(handler=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (InvalidParameterError, InfeasibleResiliencyError, UnattainableTargetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
