# dependencies
import numpy as np
from pytest import approx, mark, raises
from ris_secrecy.cascade import PhaseConfig, all_gains
from ris_secrecy.metrics import evaluate
from ris_secrecy.scene import ChannelSet, SystemParams
from ris_secrecy.signal import SignalFrame, estimate_sinr, simulate_received
from ris_secrecy.utils import ParameterError


# test datasets
params = SystemParams(
    carrier_freq=3.75e9,
    total_power=2.0,
    tx_antenna_gain=1.0,
    noise_power_bob=1.0,
    noise_power_eve=1.0,
)
unit = ChannelSet([1.0], [1.0], [1.0], [1.0])
rng = np.random.default_rng(5)
channels = ChannelSet(*(rng.normal(size=(4, 8)) + 1j * rng.normal(size=(4, 8))))
config = PhaseConfig.from_bits("01100101", 4)


# test data
data_alpha: list[float] = [0.3, 0.5, 0.9, 1.0]


# test functions
@mark.parametrize("waveform", ["gaussian", "qpsk"])
def test_unit_power(waveform: str) -> None:
    zeros = PhaseConfig.zeros(1, 1)
    frame = simulate_received(unit, zeros, 0.5, params, 100_000, 1, waveform)  # type: ignore
    assert np.mean(np.abs(frame.s_samples) ** 2) == approx(1.0, abs=0.01)
    assert np.mean(np.abs(frame.a_samples) ** 2) == approx(1.0, abs=0.01)
    assert frame.sample_count == 100_000
    assert frame.time[1] == approx(1 / params.sample_rate)


def test_deterministic() -> None:
    first = simulate_received(channels, config, 0.4, params, 1000, 3)
    second = simulate_received(channels, config, 0.4, params, 1000, 3)
    np.testing.assert_array_equal(first.y_bob, second.y_bob)
    np.testing.assert_array_equal(first.y_eve, second.y_eve)


def test_received_power() -> None:
    gains = all_gains(channels, config)
    frame = simulate_received(channels, config, 0.3, params, 1_000_000, 9)
    expected = (
        0.3 * 2.0 * abs(gains.g_sb) ** 2 + 0.7 * 2.0 * abs(gains.g_ab) ** 2 + 1.0
    )
    assert np.mean(np.abs(frame.y_bob) ** 2) == approx(expected, rel=0.01)


def test_noiseless_cs_only() -> None:
    quiet = SystemParams(3.75e9, 2.0, 1.0, 1e-30, 1e-30)
    frame = simulate_received(unit, PhaseConfig.zeros(1, 1), 1.0, quiet, 1000, 2)
    np.testing.assert_allclose(frame.y_bob / np.sqrt(2.0), frame.s_samples, atol=1e-12)

    sinr_bob, _ = estimate_sinr(frame)
    assert sinr_bob == approx(10**15, rel=1e-9)


def test_zero_channels() -> None:
    silent = ChannelSet(np.zeros(4), np.zeros(4), np.zeros(4), np.zeros(4))
    frame = simulate_received(silent, PhaseConfig.zeros(4, 2), 0.5, params, 200_000, 4)
    assert np.mean(np.abs(frame.y_eve) ** 2) == approx(1.0, rel=0.02)


@mark.parametrize("alpha", data_alpha)
def test_estimate_sinr(alpha: float) -> None:
    analytic = evaluate(channels, config, alpha, params)
    frame = simulate_received(channels, config, alpha, params, 100_000, 11)
    sinr_bob, sinr_eve = estimate_sinr(frame)
    assert abs(10 * np.log10(sinr_bob / analytic.sinr_bob)) <= 0.5
    assert abs(10 * np.log10(sinr_eve / analytic.sinr_eve)) <= 0.5


def test_estimate_sinr_half() -> None:
    frame = simulate_received(unit, PhaseConfig.zeros(1, 1), 0.5, params, 100_000, 6)
    sinr_bob, _ = estimate_sinr(frame)
    assert abs(10 * np.log10(sinr_bob / 0.5)) <= 0.2


def test_estimate_sinr_no_signal() -> None:
    frame = simulate_received(unit, PhaseConfig.zeros(1, 1), 0.0, params, 100_000, 8)
    sinr_bob, sinr_eve = estimate_sinr(frame)
    assert sinr_bob < 1e-3
    assert sinr_eve < 1e-3


def test_estimate_sinr_degenerate() -> None:
    zeros = np.zeros(10, dtype=complex)
    ones = np.ones(10, dtype=complex)

    with raises(ParameterError):
        estimate_sinr(SignalFrame(zeros, ones, ones, ones, 1.0))

    with raises(ParameterError):
        estimate_sinr(SignalFrame(ones, ones, zeros, ones, 1.0))


def test_simulate_invalid() -> None:
    with raises(ParameterError):
        simulate_received(unit, PhaseConfig.zeros(1, 1), 0.5, params, 0, 1)

    with raises(ParameterError):
        simulate_received(unit, PhaseConfig.zeros(1, 1), 1.5, params, 10, 1)
