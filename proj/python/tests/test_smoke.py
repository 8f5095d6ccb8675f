import math

import numpy as np
import pytest

import adsbrange as ab


def test_packet_and_delay():
    packet = ab.build_packet([0] * 112)
    assert len(packet) == 240
    assert sum(packet) == 116
    window = ab.apply_delay(packet, 7, 20)
    assert len(window) == 260
    assert window[:7] == [0] * 7


def test_mixture_basics():
    assert ab.bernoulli_p(20) == pytest.approx(144 / 260)
    w = ab.mixture_weights(0.4, 3)
    assert w.sum() == pytest.approx(1.0)
    h = np.array([2.0 + 1j, 0.5 - 0.2j])
    modes = ab.mode_vector(h)
    assert modes[ab.singleton_index(1, 2)] == h[0]
    assert modes[3] == 0
    assert ab.gm_logpdf(2.0 + 1j, np.array([1.0, 0.0]), np.array([2.0 + 1j, 0.0]), 1.0) == pytest.approx(-math.log(math.pi))


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        ab.path_loss(-1.0)
    with pytest.raises(ab.DomainError):
        ab.bernoulli_p(-3)
    with pytest.raises(ab.CapabilityError):
        ab.reorder(np.ones(8, dtype=complex), 3, "weighted_k4")


def test_noiseless_window_round_trip():
    theta = np.array([[0.7, 2.9], [4.1, 1.2]])
    Y, H = ab.synthesize([800.0, 2200.0], [1.0, 1.0], theta, [2, 15], 0.0, M=20, seed=3)
    assert Y.shape == (2, 260)
    est = ab.estimate_window(Y, [1.0, 1.0], seed=5)
    assert not est["failed"]
    assert est["range"] == pytest.approx([800.0, 2200.0], rel=1e-6)
    assert est["phase"] == pytest.approx(theta, rel=1e-6)

    blob = ab.encode_window(Y, 2, 20)
    Y2, K, M, lam = ab.decode_window(blob)
    assert (K, M, lam) == (2, 20, ab.WAVELENGTH)
    assert np.array_equal(Y, Y2)


def test_range_and_phase():
    mu = math.sqrt(ab.path_loss(1000.0)) * np.exp(1j * 1.3)
    assert ab.estimate_range(mu, 1.0) == pytest.approx(1000.0)
    assert ab.estimate_phase(-1j) == pytest.approx(1.5 * math.pi)
    assert ab.estimate_range(0j, 1.0) is None
    assert ab.combine_magnitudes([1, 1, 1, 1, 100]) == pytest.approx(1.0)


def test_small_sweep():
    s = ab.preset_scenario(3)
    s.update(trials=4, gamma_db=[25.0], num_antennas=2)
    s["em"]["restarts"] = 2
    out = ab.run_sweep(s)
    lines = out["csv"].strip().splitlines()
    assert lines[0].startswith("axis,x,metric,alpha")
    assert len(lines) == 1 + 6
    assert len(out["records"]) == 4
    assert ab.tracking_range(3, 0) == pytest.approx(2875.0)
