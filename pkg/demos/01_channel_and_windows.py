"""Radio model walkthrough: outage probabilities, slot timing and the
dissemination windows the TDMA schedule preallocates per node."""

import numpy as np

from r2csim import (
    ChannelParams,
    GridNetwork,
    broadcast_window,
    epsilon_gossip,
    epsilon_max,
    outage_prob,
    slot_duration,
)


def main():
    net = GridNetwork(side=9, spacing_m=10.0)   # 81 nodes over 80 m x 80 m
    ch = ChannelParams()

    tau = slot_duration(ch)
    print(f"slot duration: {tau * 1e3:.4f} ms "
          f"({ch.msg_bits:.0f} bits at {ch.bandwidth_hz / 1e6:.0f} MHz, "
          f"{ch.rho_db:.0f} dB SNR)")

    print("\nRayleigh outage vs distance (broadcast power):")
    for d in (10.0, 40.0, 80.0, 80.0 * np.sqrt(2)):
        print(f"  d = {d:6.1f} m -> eps = {outage_prob(ch, d, ch.pt_broadcast_mw):.5f}")

    print(f"\nsingle-hop gossip outage (neighbors, {ch.pt_gossip_mw} mW): "
          f"{epsilon_gossip(ch, net):.5f}")
    print(f"worst broadcast link from the corner: "
          f"{epsilon_max(ch, net, net.corner_node):.5f}")

    print("\nbroadcast windows (slots to reach all 80 destinations w.p. zeta):")
    for zeta in (0.9, 0.99, 0.9999):
        wc = broadcast_window(ch, net, net.corner_node, zeta)
        wm = broadcast_window(ch, net, net.center_node, zeta)
        print(f"  zeta = {zeta:<7} corner w = {wc}, center w = {wm}")


if __name__ == "__main__":
    main()
