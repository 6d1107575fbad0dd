__all__ = ["CheckResult", "VerifyReport", "reduced_scene", "run_verify"]


# standard library
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from logging import ERROR, INFO, getLogger


# dependencies
import numpy as np
import xarray as xr
from .cascade import PhaseConfig
from .config import RunConfig
from .metrics import evaluate
from .optimizer import (
    best_single_flips,
    brute_force_partition,
    brute_force_secrecy,
    optimize_partitioned,
)
from .scene import ChannelSet, Scene, SystemParams, generate_channels
from .signal import estimate_sinr, simulate_received
from .sweep import SweepGrid, SweepRecord, cell_seed, run_sweep, to_dataset
from .trends import SPEARMAN_MIN, check_trends


# constants
ATTAIN_RTOL = 1e-9
ATTAIN_SHARE = 0.9
LOCAL_RTOL = 1e-12
MC_CELLS = 20
MC_SAMPLES = 100_000
MC_TOLERANCE_DB = 0.5
MC_MIN_SINR = 0.05


LOGGER = getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verified property."""

    name: str
    passed: bool
    summary: str


@dataclass(frozen=True)
class VerifyReport:
    """Outcomes of the oracle suite with per-instance details."""

    checks: tuple[CheckResult, ...]
    """Results of all checked properties."""

    oracle_ratios: tuple[float, ...] = ()
    """Greedy/oracle objective ratio per perturbed instance."""

    sinr_deviations_db: tuple[tuple[float, float, float, float], ...] = ()
    """(alpha, k_bob, Bob deviation, Eve deviation) per sampled cell."""

    n_elements: int = field(default=0)
    """Number of elements of the scene used by the oracles."""

    @property
    def passed(self) -> bool:
        """Whether every hard property passed."""
        return all(check.passed for check in self.checks)

    @property
    def failed(self) -> list[str]:
        """Names of the failed properties."""
        return [check.name for check in self.checks if not check.passed]


def reduced_scene(scene: Scene, rows: int, cols: int) -> Scene:
    """Return the scene with a smaller RIS grid at the same center.

    Raises:
        GeometryError: Raised if the reduced grid is not valid.

    """
    return replace(scene, ris_rows=rows, ris_cols=cols)


def check_oracle_equivalence(
    channels: ChannelSet,
    instances: int,
    master_seed: int,
) -> tuple[CheckResult, list[float]]:
    """Compare the converged optimizer with the partition oracle.

    Instance ``i`` perturbs the channels with its own seed and uses
    ``K_b = i mod (N + 1)``. An instance attains the optimum if both
    partition objectives reach the oracle maximum.

    """
    n = channels.n_elements
    ratios: list[float] = []
    above = 0

    for index in range(instances):
        perturbed = channels.perturbed(cell_seed(master_seed, index))
        k_bob = index % (n + 1)
        report = optimize_partitioned(perturbed, k_bob, mode="to_convergence")
        _, best_bob = brute_force_partition(
            perturbed.h_s_ris, perturbed.h_ris_bob, range(0, k_bob)
        )
        _, best_eve = brute_force_partition(
            perturbed.h_a_ris, perturbed.h_ris_eve, range(k_bob, n)
        )
        ratio = min(
            ratio_of(report.objective_bob, best_bob),
            ratio_of(report.objective_eve, best_eve),
        )
        above += int(ratio > 1 + ATTAIN_RTOL)
        ratios.append(ratio)

        if ratio < 1 - ATTAIN_RTOL:
            LOGGER.warning(
                "instance %d (K_b=%d): greedy/oracle = %.6f", index, k_bob, ratio
            )

    attained = sum(ratio >= 1 - ATTAIN_RTOL for ratio in ratios)
    passed = above == 0 and attained >= ATTAIN_SHARE * instances
    summary = f"{attained}/{instances} instances attain the oracle, {above} above it"
    return CheckResult("oracle-equivalence", passed, summary), ratios


def ratio_of(value: float, best: float) -> float:
    """Return value/best with an empty partition counted as attained."""
    return 1.0 if best == 0.0 else value / best


def check_local_optimality(
    channels: ChannelSet,
    cells: int,
    master_seed: int,
    max_passes: int,
) -> CheckResult:
    """Try every single flip at converged configurations."""
    rng = np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(1,)))
    n = channels.n_elements
    worst = -np.inf
    checked = 0

    for k_bob in rng.integers(0, n + 1, size=cells):
        report = optimize_partitioned(channels, int(k_bob), max_passes=max_passes)

        if not report.converged:
            LOGGER.warning("K_b=%d not converged in %d passes", k_bob, report.passes)
            continue

        worst = max(worst, *best_single_flips(channels, report))
        checked += 1

    passed = checked > 0 and worst <= LOCAL_RTOL
    summary = f"{checked}/{cells} converged cells, best single-flip gain {worst:.3e}"
    return CheckResult("local-optimality", passed, summary)


def check_secrecy_oracle(
    channels: ChannelSet,
    params: SystemParams,
    alphas: tuple[float, ...],
) -> tuple[CheckResult, CheckResult]:
    """Compare greedy secrecy capacities with the exhaustive secrecy optimum.

    Returns:
        Tuple of the hard gap check (the oracle is never below the
        greedy result) and the report-only difference between the
        partition-local and full-sum objectives.

    """
    n = channels.n_elements
    gaps: list[float] = []
    diffs: list[float] = []

    for alpha in alphas:
        for k_bob in (n // 4, n // 2, 3 * n // 4):
            local = optimize_partitioned(channels, k_bob, objective="partition")
            full = optimize_partitioned(channels, k_bob, objective="full")
            _, c_oracle = brute_force_secrecy(channels, k_bob, alpha, params)
            c_local = evaluate(channels, local.config, alpha, params).c_secrecy
            c_full = evaluate(channels, full.config, alpha, params).c_secrecy
            gaps.append(c_oracle - c_local)
            diffs.append(c_local - c_full)

    tolerance = 1e-9 * max(1.0, max(abs(g) for g in gaps))
    gap = CheckResult(
        "secrecy-oracle",
        min(gaps) >= -tolerance,
        f"oracle - greedy C_s: mean {np.mean(gaps):.4g}, max {max(gaps):.4g} bit/s/Hz",
    )
    diff = CheckResult(
        "objective-scope",
        True,
        f"partition - full C_s: mean {np.mean(diffs):.4g}, "
        f"range [{min(diffs):.4g}, {max(diffs):.4g}] bit/s/Hz",
    )
    return gap, diff


def check_monte_carlo(
    channels: ChannelSet,
    params: SystemParams,
    grid: SweepGrid,
    cells: int,
    sample_count: int,
) -> tuple[CheckResult, list[tuple[float, float, float, float]]]:
    """Compare Monte Carlo SINR estimates with the analytic SINRs.

    The alpha = 1 cells of every K_b and ``cells`` random grid cells
    are simulated. Links with an analytic SINR below 0.05 are beyond
    the resolution of the estimator at 1e5 samples and are not compared.

    """
    rng = np.random.default_rng(np.random.SeedSequence(grid.seed, spawn_key=(2,)))
    n_alpha, n_k = len(grid.alpha_values), len(grid.k_bob_values)
    sampled = rng.choice(n_alpha * n_k, size=min(cells, n_alpha * n_k), replace=False)
    picks = [(1.0, k) for k in grid.k_bob_values]
    picks += [(grid.alpha_values[i // n_k], grid.k_bob_values[i % n_k]) for i in sampled]
    configs: dict[int, PhaseConfig] = {}
    deviations: list[tuple[float, float, float, float]] = []

    for index, (alpha, k_bob) in enumerate(picks):
        if k_bob not in configs:
            configs[k_bob] = optimize_partitioned(channels, k_bob).config

        config = configs[k_bob]
        analytic = evaluate(channels, config, alpha, params)
        seed = cell_seed(grid.seed, n_alpha * n_k + index)
        frame = simulate_received(channels, config, alpha, params, sample_count, seed)
        empirical = estimate_sinr(frame)
        pair: list[float] = []

        for exact, estimate in zip((analytic.sinr_bob, analytic.sinr_eve), empirical):
            if exact < MC_MIN_SINR:
                pair.append(np.nan)
            else:
                pair.append(abs(10 * np.log10(estimate / exact)))

        deviations.append((alpha, k_bob, pair[0], pair[1]))

    worst = np.nanmax([d[2:] for d in deviations] + [[0.0, 0.0]])
    passed = bool(worst <= MC_TOLERANCE_DB)
    summary = f"{len(deviations)} cells at {sample_count} samples, max |dev| {worst:.3f} dB"
    return CheckResult("monte-carlo-sinr", passed, summary), deviations


def check_baseline_dominance(records: Sequence[SweepRecord], n: int) -> CheckResult:
    """Compare optimized and mean random-baseline C_s on balanced cells.

    Only swept cells with ``0.2 <= alpha <= 0.9`` and ``N/8 <= K_b <= 7N/8``
    and a baseline are compared.

    """
    balanced = [
        r
        for r in records
        if 0.2 <= r.alpha <= 0.9
        and n / 8 <= r.k_bob <= 7 * n / 8
        and r.baseline_metrics.draws > 0
    ]

    if not balanced:
        return CheckResult("baseline-dominance", True, "no balanced cells to compare")

    optimized = np.array([r.metrics.c_secrecy for r in balanced])
    random = np.array([r.baseline_metrics.c_secrecy for r in balanced])
    losing = int((optimized < random).sum())
    margin = float(optimized.mean() - random.mean())
    passed = losing == 0 and margin > 0
    summary = f"{losing}/{len(balanced)} cells below the baseline, mean margin {margin:.4g}"
    return CheckResult("baseline-dominance", passed, summary)


def check_sweep_trends(dataset: xr.Dataset, /) -> tuple[CheckResult, CheckResult]:
    """Check the C_b and C_s trends of a swept grid as two properties."""
    report = check_trends(dataset)
    bob = CheckResult(
        "trend-bob-capacity",
        report.spearman_low == 0 and report.objective_drops == 0,
        f"{report.spearman_low}/{report.spearman_slices} alpha slices with "
        f"Spearman < {SPEARMAN_MIN:g} (min {report.rho_min:.4f}), "
        f"{report.objective_drops} |G_sb|^2 drops",
    )
    peak = CheckResult(
        "trend-secrecy-peak",
        report.no_interior_peak == 0,
        f"{report.no_interior_peak}/{report.peak_slices} K_b slices without "
        "an interior C_s peak",
    )
    return bob, peak


def run_verify(config: RunConfig, /, seeds: int = 100) -> VerifyReport:
    """Run the oracle suite of a run configuration.

    The exhaustive oracles use the configured scene if the oracle is
    enabled, otherwise a reduced scene of ``verify_rows x verify_cols``
    elements. The other checks use the configured scene, the baseline
    and trend checks on one sweep of the configured grid.

    Args:
        config: Run configuration.
        seeds: Number of perturbed instances of the oracle comparison.

    Returns:
        Report of all properties and per-instance details.

    Raises:
        GeometryError: Raised if the reduced scene is not valid.
        OracleCapError: Raised if the oracle scene exceeds its cap.

    """
    scene, params, grid = config.scene, config.params, config.grid

    if config.oracle_enabled:
        small = scene
    else:
        small = reduced_scene(scene, config.verify_rows, config.verify_cols)

    small_channels = generate_channels(small, params)
    channels = generate_channels(scene, params)

    if config.element_order:
        channels = channels.permuted(config.element_order)

        if config.oracle_enabled:
            small_channels = channels

    LOGGER.info("oracle scene: N=%d, %d instances", small_channels.n_elements, seeds)
    oracle, ratios = check_oracle_equivalence(small_channels, seeds, grid.seed)
    local = check_local_optimality(channels, MC_CELLS, grid.seed, grid.max_passes)
    gap, scope = check_secrecy_oracle(small_channels, params, (0.25, 0.5, 0.75, 1.0))
    mc, deviations = check_monte_carlo(channels, params, grid, MC_CELLS, MC_SAMPLES)
    records = run_sweep(
        scene,
        params,
        grid,
        baseline_seeds=config.baseline_seeds,
        workers=config.workers,
        element_order=config.element_order,
    )
    dominance = check_baseline_dominance(records, channels.n_elements)
    bob_trend, peak_trend = check_sweep_trends(to_dataset(records))
    checks = (oracle, local, gap, scope, mc, dominance, bob_trend, peak_trend)

    for check in checks:
        status = "ok" if check.passed else "FAILED"
        level = INFO if check.passed else ERROR
        LOGGER.log(level, "%s: %s (%s)", check.name, check.summary, status)

    return VerifyReport(
        checks=checks,
        oracle_ratios=tuple(ratios),
        sinr_deviations_db=tuple(deviations),
        n_elements=small_channels.n_elements,
    )
