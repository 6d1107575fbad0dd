__all__ = [
    "OptimizeReport",
    "best_single_flips",
    "brute_force_partition",
    "brute_force_secrecy",
    "optimize_chain",
    "optimize_partitioned",
    "random_config",
    "random_configs",
]


# standard library
from collections.abc import Iterator
from dataclasses import dataclass
from logging import getLogger
from typing import Literal, Optional


# dependencies
import numpy as np
from numpy.typing import ArrayLike
from .cascade import PartitionSum, PhaseConfig, cascade_terms, partition_gains
from .metrics import evaluate
from .scene import ChannelSet, SystemParams
from .utils import (
    ORACLE_N_CAP,
    PARTITION_ORACLE_CAP,
    BoolArray,
    ComplexArray,
    FloatArray,
    InvariantError,
    OracleCapError,
    ParameterError,
    SeedLike,
)


# type hints
Mode = Literal["single_pass", "to_convergence"]
Objective = Literal["partition", "full"]


# constants
CHUNK_BITS = 16
RESYNC_INTERVAL = 64
TIE_RTOL = 1e-15


LOGGER = getLogger(__name__)


@dataclass(frozen=True)
class OptimizeReport:
    """Result of the partition-based binary phase optimization."""

    config: PhaseConfig
    """Optimized phase configuration."""

    objective_bob: float
    """Bob-partition power |G_sb^(b)|^2 of the returned configuration."""

    objective_eve: float
    """Eve-partition power |G_ae^(e)|^2 of the returned configuration."""

    passes: int
    """Number of passes over the elements."""

    flips_total: int
    """Number of phase flips over all passes."""

    flips_last: int
    """Number of phase flips in the final pass."""

    converged: bool
    """Whether the final pass made no flip."""


def optimize_partitioned(
    channels: ChannelSet,
    k_bob: int,
    mode: Mode = "to_convergence",
    max_passes: int = 10,
    objective: Objective = "partition",
    initial: Optional[BoolArray] = None,
) -> OptimizeReport:
    """Select binary RIS phases per Bob- and Eve-oriented partition.

    Starting from all-zero phases (or ``initial``), each element of the Bob set
    (``0..k_bob-1``) takes the phase maximizing |G_sb|^2 and each element
    of the Eve set (``k_bob..N-1``) the phase maximizing |G_ae|^2, the
    other phases held fixed. Ties keep the phase at 0.

    Args:
        channels: Channel coefficients.
        k_bob: Number of Bob-oriented elements K_b.
        mode: ``"single_pass"`` visits each element once in index order.
            ``"to_convergence"`` repeats passes until one makes no flip
            or ``max_passes`` is reached.
        max_passes: Upper bound of passes in ``"to_convergence"`` mode.
        objective: ``"partition"`` evaluates each argmax on the sum over
            the element's own partition; ``"full"`` on the sum over all N.
        initial: Phase states to start from (all zero if not given).

    Returns:
        Optimized configuration with its partition objectives.

    Raises:
        ParameterError: Raised if ``k_bob`` is out of range, ``max_passes``
            is not positive, or ``initial`` does not have N states.
        InvariantError: Raised if a flip decreases its objective
            or the running sums drift from recomputation.

    """
    n = channels.n_elements

    if not 0 <= k_bob <= n:
        raise ParameterError(f"k_bob out of range: {k_bob} for N={n}")

    if max_passes < 1:
        raise ParameterError("max_passes must be positive")

    bob_terms = cascade_terms(channels.h_s_ris, channels.h_ris_bob, n)
    eve_terms = cascade_terms(channels.h_a_ris, channels.h_ris_eve, n)

    if initial is None:
        signs = np.ones(n)
    elif len(initial) == n:
        signs = np.where(np.asarray(initial, dtype=bool), -1.0, 1.0)
    else:
        raise ParameterError(f"initial must have {n} phase states")

    if objective == "partition":
        bob_sum = PartitionSum(bob_terms, signs, 0, k_bob)
        eve_sum = PartitionSum(eve_terms, signs, k_bob, n)
    else:
        bob_sum = PartitionSum(bob_terms, signs, 0, n)
        eve_sum = PartitionSum(eve_terms, signs, 0, n)

    limit = 1 if mode == "single_pass" else max_passes
    flips_total = flips = passes = 0

    while passes < limit:
        passes += 1
        flips = 0

        for index in range(n):
            active, other = (bob_sum, eve_sum) if index < k_bob else (eve_sum, bob_sum)

            if not should_flip(active, index):
                continue

            before = active.power
            active.flip(index)
            other.flip(index)
            flips += 1
            flips_total += 1

            if active.power < before * (1 - 1e-12):
                raise InvariantError(f"objective decreased at element {index}")

            if flips_total % RESYNC_INTERVAL == 0:
                resync(bob_sum)
                resync(eve_sum)

        if flips == 0:
            break

    config = PhaseConfig(bob_sum.signs < 0, k_bob)
    g_bob, _ = partition_gains(channels.h_s_ris, config, channels.h_ris_bob)
    _, g_eve = partition_gains(channels.h_a_ris, config, channels.h_ris_eve)

    return OptimizeReport(
        config=config,
        objective_bob=abs(g_bob) ** 2,
        objective_eve=abs(g_eve) ** 2,
        passes=passes,
        flips_total=flips_total,
        flips_last=flips,
        converged=flips == 0,
    )


def optimize_chain(
    channels: ChannelSet,
    k_max: int,
    mode: Mode = "to_convergence",
    max_passes: int = 10,
    objective: Objective = "partition",
) -> list[OptimizeReport]:
    """Optimize every partition size from 0 to ``k_max`` along a chain.

    Each K_b is optimized from all-zero phases and once more from the
    Bob phases of K_b - 1, the new element taking its better phase.
    The warm result is kept only if its Bob-partition power is larger,
    so with the partition objective the Bob-partition power of the
    chain is non-decreasing in K_b. The Eve set starts from zero in
    both runs.

    Args:
        channels: Channel coefficients.
        k_max: Largest partition size of the chain.
        mode: Pass mode of every optimization.
        max_passes: Upper bound of passes in ``"to_convergence"`` mode.
        objective: Objective scope of every optimization.

    Returns:
        One report per partition size, indexed by K_b.

    Raises:
        ParameterError: Raised if ``k_max`` is out of range.

    """
    n = channels.n_elements

    if not 0 <= k_max <= n:
        raise ParameterError(f"k_bob out of range: {k_max} for N={n}")

    terms = cascade_terms(channels.h_s_ris, channels.h_ris_bob, n)
    reports = [optimize_partitioned(channels, 0, mode, max_passes, objective)]

    for k_bob in range(1, k_max + 1):
        cold = optimize_partitioned(channels, k_bob, mode, max_passes, objective)
        initial = np.zeros(n, dtype=bool)
        initial[: k_bob - 1] = reports[-1].config.theta[: k_bob - 1]
        partial = (np.where(initial, -1.0, 1.0) * terms)[: k_bob - 1].sum()
        initial[k_bob - 1] = abs(partial - terms[k_bob - 1]) > abs(
            partial + terms[k_bob - 1]
        ) * (1 + TIE_RTOL)
        warm = optimize_partitioned(
            channels, k_bob, mode, max_passes, objective, initial=initial
        )

        if warm.objective_bob > cold.objective_bob:
            LOGGER.debug("K_b=%d: warm start kept (%.6e)", k_bob, warm.objective_bob)
            reports.append(warm)
        else:
            reports.append(cold)

    return reports


def should_flip(running: PartitionSum, index: int, /) -> bool:
    """Return whether flipping an element gives the better phase state."""
    current = running.power
    flipped = abs(running.flipped(index)) ** 2
    at_zero, at_pi = (current, flipped) if running.signs[index] > 0 else (flipped, current)
    choose_pi = at_pi > at_zero * (1 + TIE_RTOL)
    return choose_pi == (running.signs[index] > 0)


def resync(running: PartitionSum, /) -> None:
    """Replace a running sum by its recomputation after a drift check."""
    exact = running.recompute()
    drift = abs(running.value - exact)
    scale = float(np.abs(running.terms[running.start : running.stop]).sum())

    if drift > 1e-6 * max(scale, np.finfo(float).tiny):
        raise InvariantError(f"running sum drifted by {drift:.3e}")

    LOGGER.debug("resynced running sum (drift %.3e)", drift)
    running.value = exact


def random_configs(
    n: int,
    k_bob: int,
    count: int,
    seed: SeedLike,
) -> list[PhaseConfig]:
    """Return independent random binary configurations from one generator.

    Each phase is an independent fair draw over {0, pi}.

    Raises:
        ParameterError: Raised if ``k_bob`` is not within ``[0, n]``.

    """
    rng = np.random.default_rng(seed)
    theta = rng.integers(0, 2, size=(count, n)).astype(bool)
    return [PhaseConfig(row, k_bob) for row in theta]


def random_config(n: int, k_bob: int, seed: SeedLike) -> PhaseConfig:
    """Return a random binary configuration, deterministic given the seed.

    Raises:
        ParameterError: Raised if ``k_bob`` is not within ``[0, n]``.

    """
    return random_configs(n, k_bob, 1, seed)[0]


def enumerate_signs(k: int, /) -> Iterator[tuple[int, FloatArray]]:
    """Yield chunks of all ``2**k`` sign vectors in bitstring order.

    Code ``c`` maps element ``i`` to bit ``k-1-i`` of ``c``, so
    increasing codes are lexicographically increasing bitstrings.

    """
    total = 1 << k
    step = 1 << min(k, CHUNK_BITS)
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)

    for start in range(0, total, step):
        codes = np.arange(start, min(start + step, total), dtype=np.int64)
        bits = (codes[:, None] >> shifts) & 1
        yield start, 1.0 - 2.0 * bits


def best_code(best: tuple[float, int], values: FloatArray, start: int) -> tuple[float, int]:
    """Update the running (maximum, smallest maximizing code) with a chunk."""
    index = int(np.argmax(values))
    value = float(values[index])

    if value > best[0] * (1 + 1e-12) and value > best[0]:
        candidates = np.flatnonzero(values >= value * (1 - 1e-12))
        return value, start + int(candidates[0])

    return best


def code_to_theta(code: int, k: int, /) -> BoolArray:
    """Convert a code of ``enumerate_signs`` to phase states."""
    shifts = np.arange(k - 1, -1, -1)
    return ((code >> shifts) & 1).astype(bool)


def brute_force_partition(
    h_tx: ArrayLike,
    h_rx: ArrayLike,
    index_set: range,
) -> tuple[BoolArray, float]:
    """Return the exact maximizer of a partition-local cascaded power.

    All ``2**len(index_set)`` binary assignments of the elements in
    ``index_set`` are enumerated. Ties are broken toward the
    lexicographically smallest bitstring.

    Args:
        h_tx: Transmitter-to-element coefficients of all N elements.
        h_rx: Element-to-receiver coefficients of all N elements.
        index_set: Range of element indices forming the partition.

    Returns:
        Tuple of the phase states of the partition and the maximum power.

    Raises:
        OracleCapError: Raised if the index set has more than 24 elements.
        ShapeError: Raised if the vector lengths do not match.

    """
    k = len(index_set)

    if k > PARTITION_ORACLE_CAP:
        raise OracleCapError(f"oracle cap exceeded: {k} > {PARTITION_ORACLE_CAP}")

    n = len(np.asarray(h_tx).reshape(-1))
    terms: ComplexArray = cascade_terms(h_tx, h_rx, n)[list(index_set)]
    best = (-np.inf, 0)

    for start, signs in enumerate_signs(k):
        best = best_code(best, np.abs(signs @ terms) ** 2, start)

    return code_to_theta(best[1], k), best[0]


def brute_force_secrecy(
    channels: ChannelSet,
    k_bob: int,
    alpha: float,
    params: SystemParams,
) -> tuple[PhaseConfig, float]:
    """Return the phase configuration maximizing the secrecy capacity.

    All ``2**N`` phase vectors are enumerated for fixed ``alpha`` and
    ``k_bob``. Ties are broken toward the lexicographically smallest
    bitstring.

    Args:
        channels: Channel coefficients.
        k_bob: Number of Bob-oriented elements (recorded in the result).
        alpha: Fraction of the total power given to the CS.
        params: System parameters.

    Returns:
        Tuple of the optimal configuration and its secrecy capacity.

    Raises:
        OracleCapError: Raised if N is larger than 20.
        ParameterError: Raised if ``k_bob`` or ``alpha`` is out of range.

    """
    n = channels.n_elements

    if n > ORACLE_N_CAP:
        raise OracleCapError(f"oracle cap exceeded: N={n} > {ORACLE_N_CAP}")

    if not 0 <= k_bob <= n:
        raise ParameterError(f"k_bob out of range: {k_bob} for N={n}")

    if not 0.0 <= alpha <= 1.0:
        raise ParameterError(f"alpha must be within [0, 1]: {alpha!r}")

    terms = np.stack(
        [
            channels.h_s_ris * channels.h_ris_bob,
            channels.h_a_ris * channels.h_ris_bob,
            channels.h_s_ris * channels.h_ris_eve,
            channels.h_a_ris * channels.h_ris_eve,
        ],
        axis=1,
    )
    p_cs = alpha * params.total_power
    p_an = (1.0 - alpha) * params.total_power
    best = (-np.inf, 0)

    for start, signs in enumerate_signs(n):
        power = np.abs(signs @ terms) ** 2
        sinr_bob = p_cs * power[:, 0] / (p_an * power[:, 1] + params.noise_power_bob)
        sinr_eve = p_cs * power[:, 2] / (p_an * power[:, 3] + params.noise_power_eve)
        c_secrecy = np.maximum(np.log2(1 + sinr_bob) - np.log2(1 + sinr_eve), 0.0)
        best = best_code(best, c_secrecy, start)

    config = PhaseConfig(code_to_theta(best[1], n), k_bob)
    return config, secrecy_capacity_of(channels, config, alpha, params)


def secrecy_capacity_of(
    channels: ChannelSet,
    config: PhaseConfig,
    alpha: float,
    params: SystemParams,
) -> float:
    """Return the secrecy capacity of a configuration via the metrics path."""
    return evaluate(channels, config, alpha, params).c_secrecy


def best_single_flips(channels: ChannelSet, report: OptimizeReport) -> tuple[float, float]:
    """Return the best relative single-flip improvement per partition.

    Every element of each partition is flipped in turn against the
    returned configuration and its partition-local power recomputed.

    Args:
        channels: Channel coefficients used by the optimization.
        report: Optimization result to be certified.

    Returns:
        Tuple of the largest relative improvements of the Bob and the
        Eve partition (non-positive at a local optimum).

    """
    config = report.config
    n, k = config.n_elements, config.k_bob
    links = (
        (channels.h_s_ris, channels.h_ris_bob, range(0, k), 0),
        (channels.h_a_ris, channels.h_ris_eve, range(k, n), 1),
    )
    gains: list[float] = []

    for h_tx, h_rx, indices, side in links:
        base = abs(partition_gains(h_tx, config, h_rx)[side]) ** 2
        best = -np.inf if len(indices) else 0.0

        for index in indices:
            theta = config.theta.copy()
            theta[index] = not theta[index]
            flipped = PhaseConfig(theta, k)
            power = abs(partition_gains(h_tx, flipped, h_rx)[side]) ** 2
            best = max(best, (power - base) / max(base, np.finfo(float).tiny))

        gains.append(float(best))

    return gains[0], gains[1]

