# standard library
from itertools import product


# dependencies
import numpy as np
from pytest import approx, mark, raises
from ris_secrecy.cascade import PhaseConfig, partition_gains
from ris_secrecy.metrics import evaluate
from ris_secrecy.optimizer import (
    best_single_flips,
    brute_force_partition,
    brute_force_secrecy,
    optimize_chain,
    optimize_partitioned,
    random_config,
    random_configs,
)
from ris_secrecy.scene import ChannelSet, SystemParams
from ris_secrecy.utils import OracleCapError, ParameterError


# test datasets
params = SystemParams(
    carrier_freq=3.75e9,
    total_power=1.0,
    tx_antenna_gain=1.0,
    noise_power_bob=0.1,
    noise_power_eve=0.1,
)


def random_channels(n: int, seed: int) -> ChannelSet:
    rng = np.random.default_rng(seed)
    return ChannelSet(*(rng.normal(size=(4, n)) + 1j * rng.normal(size=(4, n))))


def unit_channels(terms: list[complex]) -> ChannelSet:
    n = len(terms)
    return ChannelSet(terms, np.ones(n), np.ones(n), np.ones(n))


# test data
data_k_bob: list[int] = [0, 1, 4, 7, 12]
data_real_terms: list[float] = [3.0, -1.0, 2.0, -0.5, 1.5, -2.0, 0.25, 1.0, -3.0, 0.75]


# test functions
def test_optimize_single_element() -> None:
    # both phases give the same power, so the phase stays at 0
    report = optimize_partitioned(unit_channels([-1.0]), 1)
    assert report.config.bits == "0"
    assert report.objective_bob == approx(1.0)


def test_optimize_two_elements() -> None:
    report = optimize_partitioned(unit_channels([1.0, -1.0]), 2)
    assert report.config.bits == "10"
    assert report.objective_bob == approx(4.0)

    theta, best = brute_force_partition([1.0, -1.0], np.ones(2), range(0, 2))
    assert theta.tolist() == [False, True]
    assert best == approx(4.0)


def test_optimize_ties_keep_zero() -> None:
    report = optimize_partitioned(unit_channels([1.0, 1j]), 2)
    assert report.config.bits == "00"
    assert report.converged


@mark.parametrize("k_bob", data_k_bob)
def test_optimize_matches_recomputation(k_bob: int) -> None:
    channels = random_channels(12, k_bob)
    report = optimize_partitioned(channels, k_bob)
    g_bob, _ = partition_gains(channels.h_s_ris, report.config, channels.h_ris_bob)
    _, g_eve = partition_gains(channels.h_a_ris, report.config, channels.h_ris_eve)
    assert report.objective_bob == approx(abs(g_bob) ** 2, rel=1e-12)
    assert report.objective_eve == approx(abs(g_eve) ** 2, rel=1e-12)
    assert report.passes >= 1
    assert report.config.k_bob == k_bob


@mark.parametrize("k_bob", data_k_bob)
def test_optimize_local_optimum(k_bob: int) -> None:
    channels = random_channels(12, 100 + k_bob)
    report = optimize_partitioned(channels, k_bob, mode="to_convergence")
    assert report.converged
    assert report.flips_last == 0

    best_bob, best_eve = best_single_flips(channels, report)
    assert best_bob <= 1e-12
    assert best_eve <= 1e-12


def test_optimize_single_pass() -> None:
    channels = random_channels(16, 3)
    report = optimize_partitioned(channels, 8, mode="single_pass")
    assert report.passes == 1
    assert report.flips_total <= 16


def test_optimize_against_partition_oracle() -> None:
    channels = random_channels(4, 11)
    report = optimize_partitioned(channels, 2)
    _, best = brute_force_partition(channels.h_s_ris, channels.h_ris_bob, range(0, 2))
    assert report.objective_bob == approx(best, rel=1e-12)


def test_optimize_full_objective() -> None:
    channels = random_channels(10, 5)
    report = optimize_partitioned(channels, 5, objective="full")
    assert report.converged
    assert report.objective_bob >= 0.0


def test_optimize_monotone_in_k_bob() -> None:
    channels = random_channels(10, 9)
    objectives = [
        brute_force_partition(channels.h_s_ris, channels.h_ris_bob, range(0, k))[1]
        for k in range(11)
    ]
    assert all(np.diff(objectives) >= -1e-12 * max(objectives))


def test_optimize_initial() -> None:
    report = optimize_partitioned(unit_channels([1.0, 1.0]), 2, initial=np.array([True, True]))
    assert report.config.bits == "11"
    assert report.objective_bob == approx(4.0)
    assert report.flips_total == 0

    with raises(ParameterError):
        optimize_partitioned(unit_channels([1.0, 1.0]), 2, initial=np.array([True]))


def test_optimize_chain() -> None:
    channels = random_channels(12, 5)
    chain = optimize_chain(channels, 12)
    assert [report.config.k_bob for report in chain] == list(range(13))
    assert np.all(np.diff([report.objective_bob for report in chain]) >= 0.0)

    for k_bob, report in enumerate(chain):
        cold = optimize_partitioned(channels, k_bob)
        assert report.objective_bob >= cold.objective_bob

    with raises(ParameterError):
        optimize_chain(channels, 13)


def test_optimize_invalid() -> None:
    channels = random_channels(4, 0)

    with raises(ParameterError):
        optimize_partitioned(channels, 5)

    with raises(ParameterError):
        optimize_partitioned(channels, 2, max_passes=0)


def test_optimize_many_flips() -> None:
    # enough flips to pass several resyncs of the running sums
    channels = random_channels(200, 21)
    report = optimize_partitioned(channels, 100)
    assert report.flips_total >= 64
    best_bob, best_eve = best_single_flips(channels, report)

    if report.converged:
        assert max(best_bob, best_eve) <= 1e-12


def test_random_config() -> None:
    first = random_config(32, 16, 42)
    second = random_config(32, 16, 42)
    assert first == second
    assert random_config(0, 0, 1).n_elements == 0

    with raises(ParameterError):
        random_config(4, 5, 0)


def test_random_configs_frequency() -> None:
    configs = random_configs(8, 4, 10_000, 1)
    frequency = np.mean([config.theta for config in configs], axis=0)
    assert np.all((frequency >= 0.48) & (frequency <= 0.52))


def test_brute_force_partition_single() -> None:
    theta, best = brute_force_partition([-2.0], [1.0], range(0, 1))
    assert theta.tolist() == [False]
    assert best == approx(4.0)


def test_brute_force_partition_aligned() -> None:
    terms = np.array([1.0, 2.0, 0.5, 3.0])
    theta, best = brute_force_partition(terms, np.ones(4), range(0, 4))
    assert not theta.any()
    assert best == approx(terms.sum() ** 2)


def test_brute_force_partition_tie_break() -> None:
    # theta and its complement give the same power
    theta, _ = brute_force_partition([1.0, -1.0, 1.0], np.ones(3), range(0, 3))
    assert theta.tolist() == [False, True, False]


def test_brute_force_partition_subset() -> None:
    channels = random_channels(6, 4)
    theta, best = brute_force_partition(channels.h_a_ris, channels.h_ris_eve, range(2, 6))
    terms = (channels.h_a_ris * channels.h_ris_eve)[2:]
    exhaustive = max(
        abs(np.dot(signs, terms)) ** 2 for signs in product((1.0, -1.0), repeat=4)
    )
    assert len(theta) == 4
    assert best == approx(exhaustive, rel=1e-12)


def test_brute_force_partition_real_terms() -> None:
    terms = np.array(data_real_terms)
    theta, best = brute_force_partition(terms, np.ones(10), range(0, 10))
    assert theta.tolist() == (terms < 0).tolist()
    assert best == approx(np.abs(terms).sum() ** 2, rel=1e-12)
    assert best == approx(225.0, rel=1e-12)


def test_brute_force_partition_cap() -> None:
    with raises(OracleCapError):
        brute_force_partition(np.ones(25), np.ones(25), range(0, 25))


def test_brute_force_secrecy() -> None:
    channels = random_channels(6, 8)
    config, best = brute_force_secrecy(channels, 3, 0.6, params)
    exhaustive = max(
        evaluate(channels, PhaseConfig(np.array(bits, dtype=bool), 3), 0.6, params).c_secrecy
        for bits in product((False, True), repeat=6)
    )
    assert best == approx(exhaustive, rel=1e-12)
    assert config.k_bob == 3

    greedy = optimize_partitioned(channels, 3)
    assert evaluate(channels, greedy.config, 0.6, params).c_secrecy <= best * (1 + 1e-12)


def test_brute_force_secrecy_no_an() -> None:
    # Eve sees the alternating sum, which vanishes with all-zero phases
    channels = ChannelSet(
        np.ones(8), np.zeros(8), np.ones(8), 0.5 * np.array([1.0, -1.0] * 4)
    )
    config, best = brute_force_secrecy(channels, 4, 0.5, params)
    assert config.bits == "00000000"
    assert best == approx(np.log2(1 + 0.5 * 1.0 * 64 / 0.1), rel=1e-12)


def test_brute_force_secrecy_cap() -> None:
    with raises(OracleCapError):
        brute_force_secrecy(random_channels(21, 0), 10, 0.5, params)
