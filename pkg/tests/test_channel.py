import math

import numpy as np
import pytest

from r2csim import (
    ChannelParams,
    GridNetwork,
    InvalidParameterError,
    UnattainableTargetError,
    broadcast_window,
    epsilon_gossip,
    epsilon_max,
    outage_matrix,
    outage_prob,
    slot_duration,
)

NET = GridNetwork(side=9, spacing_m=10.0)
CH = ChannelParams()


def test_slot_duration_value():
    # 1024 bits over 1 MHz at 10 dB SNR: 1024 / (1e6 * log2(11)) seconds
    assert slot_duration(CH) == pytest.approx(2.960023821495172e-4, rel=1e-12)


def test_reference_gain_value():
    assert CH.ref_gain == pytest.approx((0.125 / (4 * math.pi)) ** 2, rel=1e-12)
    assert CH.ref_gain == pytest.approx(9.89464684007205e-5, rel=1e-9)


def test_outage_single_hop_value():
    # neighbor link at 10 m under gossip power
    assert epsilon_gossip(CH, NET) == pytest.approx(0.00403442969579082, rel=1e-9)


def test_outage_longest_link_value():
    # grid diagonal (80*sqrt(2) m) under broadcast power
    eps = outage_prob(CH, 80.0 * math.sqrt(2), CH.pt_broadcast_mw)
    assert eps == pytest.approx(0.13615108307602053, rel=1e-9)
    assert epsilon_max(CH, NET, NET.corner_node) == pytest.approx(eps, rel=1e-12)


def test_outage_independent_formula():
    # recompute from first principles for a handful of distances
    for d in (1.0, 10.0, 55.0, 113.137):
        for pt in (CH.pt_gossip_mw, CH.pt_broadcast_mw):
            expected = 1.0 - math.exp(
                -CH.rho_linear * CH.pn_mw * d**CH.eta / (CH.ref_gain * pt)
            )
            assert outage_prob(CH, d, pt) == pytest.approx(expected, rel=1e-12)


def test_outage_monotone_in_distance_and_power():
    d = np.linspace(1.0, 120.0, 50)
    eps = outage_prob(CH, d, CH.pt_broadcast_mw)
    assert np.all(np.diff(eps) > 0)
    assert np.all(
        outage_prob(CH, d, CH.pt_gossip_mw) > outage_prob(CH, d, CH.pt_broadcast_mw)
    )
    assert np.all((0 < eps) & (eps < 1))


def test_outage_rejects_bad_inputs():
    with pytest.raises(InvalidParameterError):
        outage_prob(CH, 0.0, 1.0)
    with pytest.raises(InvalidParameterError):
        outage_prob(CH, 10.0, 0.0)


def test_outage_matrix_shape_and_symmetry():
    net = GridNetwork(side=3, spacing_m=10.0)
    eps = outage_matrix(CH, net, CH.pt_broadcast_mw)
    assert eps.shape == (9, 9)
    np.testing.assert_allclose(eps, eps.T)
    assert np.all(np.diag(eps) == 0.0)
    assert eps[0, 1] == pytest.approx(outage_prob(CH, 10.0, CH.pt_broadcast_mw))


def test_broadcast_window_formula():
    zeta = 0.9999
    n_dest = NET.node_count - 1
    eps = epsilon_max(CH, NET, NET.corner_node)
    expected = math.ceil(math.log(1 - zeta ** (1 / n_dest)) / math.log(eps))
    assert broadcast_window(CH, NET, NET.corner_node, zeta) == expected == 7


def test_broadcast_window_edges():
    assert broadcast_window(CH, NET, 0, 0.0) == 1
    with pytest.raises(UnattainableTargetError):
        broadcast_window(CH, NET, 0, 1.0)
    with pytest.raises(InvalidParameterError):
        broadcast_window(CH, NET, 0, 1.5)
    # center proposer has shorter worst link, hence a window no larger
    assert broadcast_window(CH, NET, NET.center_node, 0.9999) <= broadcast_window(
        CH, NET, NET.corner_node, 0.9999
    )


def test_channel_param_validation():
    with pytest.raises(InvalidParameterError):
        ChannelParams(eta=1.5)
    with pytest.raises(InvalidParameterError):
        ChannelParams(pt_gossip_mw=200.0, pt_broadcast_mw=100.0)
    with pytest.raises(InvalidParameterError):
        ChannelParams(bandwidth_hz=0.0)
