"""Full-referendum (RC) vs random-representative (R2C) consensus: closed-form
latencies, validator sizing, and simulated latency/energy on the 81-node grid."""

from r2csim import (
    ChannelParams,
    GridNetwork,
    ReliabilityTargets,
    Scenario,
    monte_carlo,
    r2c_latency_broadcast,
    r2c_latency_gossip_lb,
    rc_latency_broadcast,
    rc_latency_gossip_lb,
    required_validators,
    resolve_round_config,
    slot_duration,
)


def main():
    net = GridNetwork(side=9, spacing_m=10.0)
    ch = ChannelParams()
    tau = slot_duration(ch)
    n_total = 80
    targets = ReliabilityTargets(alpha=0.99, beta_s=tau, gamma=0.9,
                                 zeta=0.9999, f_faulty=5)

    print("validator sizing at alpha=0.99, beta=1 slot, gamma=0.9, F=5:")
    sizes = {}
    for diss in ("gossip", "broadcast"):
        s = required_validators(n_total, targets, net, ch, net.corner_node, diss, tau)
        sizes[diss] = s.n_required
        print(f"  {diss:>9}: n_alpha {s.n_alpha:6.2f}, n_beta_gamma "
              f"{s.n_beta_gamma:6.2f} -> n_tilde = {s.n_required}")

    print("\nanalytic latencies (slots):")
    print(f"  RC  gossip    {rc_latency_gossip_lb(n_total):7.0f}")
    print(f"  RC  broadcast {rc_latency_broadcast(ch, net, targets.zeta):7.0f}")
    print(f"  R2C gossip    {r2c_latency_gossip_lb(n_total, sizes['gossip'], 'corner'):7.0f}")
    print(f"  R2C broadcast "
          f"{r2c_latency_broadcast(ch, net, net.corner_node, sizes['broadcast'], targets.zeta):7.0f}")

    print("\nsimulated means over 500 seeded rounds:")
    for mode, diss in (("RC", "gossip"), ("RC", "broadcast"),
                       ("R2C", "gossip"), ("R2C", "broadcast")):
        scenario = Scenario(
            name="latency-demo", mode=mode, dissemination=diss, side=9,
            spacing_m=10.0, ch=ch, targets=targets,
            n_tilde="auto",
        )
        result = monte_carlo(resolve_round_config(scenario), 500, seed=0)
        print(f"  {mode:>3} {diss:<9} latency {result.summary['latency_slots_mean']:8.1f} "
              f"slots, energy {result.summary['energy_mj_mean'] * 1e3:8.3f} uJ, "
              f"valid {result.summary['globally_valid_freq']:.3f}")


if __name__ == "__main__":
    main()
