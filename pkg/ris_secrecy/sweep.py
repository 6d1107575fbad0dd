__all__ = [
    "BaselineSummary",
    "SweepGrid",
    "SweepRecord",
    "alpha_peaks",
    "best_allocation",
    "cell_seed",
    "run_sweep",
    "spearman_by_alpha",
    "to_dataset",
]


# standard library
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from logging import getLogger


# dependencies
import numpy as np
import xarray as xr
from scipy.stats import spearmanr
from .cascade import all_gains
from .metrics import LinkMetrics, evaluate_gains
from .optimizer import Mode, Objective, OptimizeReport, optimize_chain
from .scene import ChannelSet, Scene, SystemParams, generate_channels
from .units import set as set_units
from .utils import ParameterError


# constants
CAPACITY_UNITS = "bit / (s Hz)"
SEED_RULE = "SeedSequence([seed, alpha_index * len(k_bob_values) + k_bob_index])"


LOGGER = getLogger(__name__)


@dataclass(frozen=True)
class SweepGrid:
    """Grid of power allocations and partition sizes to be swept.

    Raises:
        ParameterError: Raised if a list is empty, not strictly
            increasing, or has values out of range.

    """

    alpha_values: tuple[float, ...]
    """Power allocation factors within [0, 1]."""

    k_bob_values: tuple[int, ...]
    """Partition sizes K_b within [0, N]."""

    optimizer_mode: Mode = "to_convergence"
    """Pass mode of the phase optimization."""

    seed: int = 0
    """Master seed of the random baselines."""

    max_passes: int = 10
    """Upper bound of optimization passes."""

    objective: Objective = "partition"
    """Objective scope of the phase optimization."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha_values", tuple(map(float, self.alpha_values)))
        object.__setattr__(self, "k_bob_values", tuple(map(int, self.k_bob_values)))

        for name in ("alpha_values", "k_bob_values"):
            values = np.asarray(getattr(self, name), dtype=float)

            if values.size == 0:
                raise ParameterError(f"{name} must not be empty")

            if np.any(np.diff(values) <= 0):
                raise ParameterError(f"{name} must be strictly increasing")

        if not (self.alpha_values[0] >= 0.0 and self.alpha_values[-1] <= 1.0):
            raise ParameterError("alpha_values must be within [0, 1]")

        if self.k_bob_values[0] < 0:
            raise ParameterError("k_bob out of range: negative value")

    def validate(self, n: int, /) -> None:
        """Check the partition sizes against a number of elements.

        Raises:
            ParameterError: Raised if a partition size exceeds ``n``.

        """
        if self.k_bob_values[-1] > n:
            raise ParameterError(f"k_bob out of range: {self.k_bob_values[-1]} > N={n}")


@dataclass(frozen=True)
class BaselineSummary:
    """Mean capacities over random binary configurations of one cell."""

    c_bob: float
    c_eve: float
    c_secrecy: float
    draws: int


@dataclass(frozen=True)
class SweepRecord:
    """Result of one (alpha, K_b) cell."""

    alpha: float
    k_bob: int
    beta: float
    metrics: LinkMetrics
    phase_bits: str
    baseline_metrics: BaselineSummary
    objective_bob: float
    objective_eve: float
    passes: int
    an_to_noise_eve: float
    """Full-power AN to noise ratio P_t |G_ae|^2 / sigma_e^2 at Eve."""


def cell_seed(master_seed: int, cell_index: int) -> np.random.SeedSequence:
    """Return the seed sequence of a grid cell."""
    return np.random.SeedSequence([master_seed, cell_index])


def baseline(
    channels: ChannelSet,
    alpha: float,
    params: SystemParams,
    draws: int,
    seed: np.random.SeedSequence,
) -> BaselineSummary:
    """Return mean capacities over random binary configurations."""
    if draws < 1:
        return BaselineSummary(np.nan, np.nan, np.nan, 0)

    rng = np.random.default_rng(seed)
    signs = 1.0 - 2.0 * rng.integers(0, 2, size=(draws, channels.n_elements))
    terms = np.stack(
        [
            channels.h_s_ris * channels.h_ris_bob,
            channels.h_a_ris * channels.h_ris_bob,
            channels.h_s_ris * channels.h_ris_eve,
            channels.h_a_ris * channels.h_ris_eve,
        ],
        axis=1,
    )
    power = np.abs(signs @ terms) ** 2
    p_cs = alpha * params.total_power
    p_an = (1.0 - alpha) * params.total_power
    c_bob = np.log2(1 + p_cs * power[:, 0] / (p_an * power[:, 1] + params.noise_power_bob))
    c_eve = np.log2(1 + p_cs * power[:, 2] / (p_an * power[:, 3] + params.noise_power_eve))

    return BaselineSummary(
        c_bob=float(c_bob.mean()),
        c_eve=float(c_eve.mean()),
        c_secrecy=float(np.maximum(c_bob - c_eve, 0.0).mean()),
        draws=draws,
    )


def sweep_column(
    channels: ChannelSet,
    params: SystemParams,
    grid: SweepGrid,
    k_index: int,
    report: OptimizeReport,
    baseline_seeds: int,
) -> list[SweepRecord]:
    """Evaluate all alpha cells of one K_b column with its optimized phases."""
    k_bob = grid.k_bob_values[k_index]
    gains = all_gains(channels, report.config)
    an_to_noise = params.total_power * abs(gains.g_ae) ** 2 / params.noise_power_eve
    records: list[SweepRecord] = []

    for a_index, alpha in enumerate(grid.alpha_values):
        index = a_index * len(grid.k_bob_values) + k_index
        seed = cell_seed(grid.seed, index)

        records.append(
            SweepRecord(
                alpha=alpha,
                k_bob=k_bob,
                beta=report.config.beta,
                metrics=evaluate_gains(gains, alpha, params),
                phase_bits=report.config.bits,
                baseline_metrics=baseline(channels, alpha, params, baseline_seeds, seed),
                objective_bob=report.objective_bob,
                objective_eve=report.objective_eve,
                passes=report.passes,
                an_to_noise_eve=an_to_noise,
            )
        )

    LOGGER.debug("K_b=%d done (%d passes)", k_bob, report.passes)
    return records


def run_sweep(
    scene: Scene,
    params: SystemParams,
    grid: SweepGrid,
    *,
    baseline_seeds: int = 100,
    workers: int = 1,
    element_order: Sequence[int] = (),
) -> list[SweepRecord]:
    """Run the (alpha, K_b) grid with per-cell phase optimization.

    Channels are generated once and the phases of every K_b up to the
    largest swept one are optimized in-process along a chain (see
    :func:`~ris_secrecy.optimizer.optimize_chain`), so each cell depends
    on its K_b only, not on the other swept values. The output is
    ordered with alpha outer and K_b inner, whatever the number of
    workers.

    Args:
        scene: Scene geometry.
        params: System parameters.
        grid: Grid to be swept.
        baseline_seeds: Random configurations per cell for the baseline.
        workers: Number of worker processes (1 runs in-process).
        element_order: Optional permutation mapping partition order
            to row-major RIS elements.

    Returns:
        One record per cell.

    Raises:
        ParameterError: Raised if the grid does not fit the scene.

    """
    channels = generate_channels(scene, params)

    if element_order:
        channels = channels.permuted(element_order)

    grid.validate(channels.n_elements)
    chain = optimize_chain(
        channels,
        grid.k_bob_values[-1],
        mode=grid.optimizer_mode,
        max_passes=grid.max_passes,
        objective=grid.objective,
    )
    reports = [chain[k_bob] for k_bob in grid.k_bob_values]
    k_indices = range(len(grid.k_bob_values))

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [
                executor.submit(
                    sweep_column, channels, params, grid, k, reports[k], baseline_seeds
                )
                for k in k_indices
            ]
            columns = [future.result() for future in futures]
    else:
        columns = [
            sweep_column(channels, params, grid, k, reports[k], baseline_seeds)
            for k in k_indices
        ]

    LOGGER.info(
        "swept %d alpha x %d k_bob cells",
        len(grid.alpha_values),
        len(grid.k_bob_values),
    )
    return [column[a] for a in range(len(grid.alpha_values)) for column in columns]


def to_dataset(records: Sequence[SweepRecord], /) -> xr.Dataset:
    """Convert sweep records to a Dataset over (alpha, k_bob).

    Raises:
        ParameterError: Raised if the records do not form a full grid.

    """
    alphas = sorted({record.alpha for record in records})
    k_bobs = sorted({record.k_bob for record in records})

    if len(records) != len(alphas) * len(k_bobs):
        raise ParameterError("records do not form a full (alpha, k_bob) grid")

    shape = (len(alphas), len(k_bobs))
    cell = {(r.alpha, r.k_bob): r for r in records}
    ordered = [cell[(a, k)] for a in alphas for k in k_bobs]

    def variable(values: Sequence[float], units: str) -> xr.DataArray:
        data = np.asarray(values).reshape(shape)
        return set_units(xr.DataArray(data, dims=("alpha", "k_bob")), units)

    n = len(ordered[0].phase_bits)
    beta = xr.DataArray(np.asarray(k_bobs) / n if n else np.zeros(len(k_bobs)), dims="k_bob")

    return xr.Dataset(
        {
            "c_bob": variable([r.metrics.c_bob for r in ordered], CAPACITY_UNITS),
            "c_eve": variable([r.metrics.c_eve for r in ordered], CAPACITY_UNITS),
            "c_secrecy": variable([r.metrics.c_secrecy for r in ordered], CAPACITY_UNITS),
            "sinr_bob": variable([r.metrics.sinr_bob for r in ordered], ""),
            "sinr_eve": variable([r.metrics.sinr_eve for r in ordered], ""),
            "c_bob_random": variable(
                [r.baseline_metrics.c_bob for r in ordered], CAPACITY_UNITS
            ),
            "c_eve_random": variable(
                [r.baseline_metrics.c_eve for r in ordered], CAPACITY_UNITS
            ),
            "c_secrecy_random": variable(
                [r.baseline_metrics.c_secrecy for r in ordered], CAPACITY_UNITS
            ),
            "objective_bob": variable([r.objective_bob for r in ordered], ""),
            "objective_eve": variable([r.objective_eve for r in ordered], ""),
            "an_to_noise_eve": variable([r.an_to_noise_eve for r in ordered], ""),
            "passes": xr.DataArray(
                np.asarray([r.passes for r in ordered]).reshape(shape),
                dims=("alpha", "k_bob"),
            ),
            "phase_bits": xr.DataArray(
                np.asarray([r.phase_bits for r in ordered]).reshape(shape),
                dims=("alpha", "k_bob"),
            ),
        },
        coords={"alpha": alphas, "k_bob": k_bobs, "beta": beta},
    )


def spearman_by_alpha(dataset: xr.Dataset, /) -> xr.DataArray:
    """Return the Spearman correlation between K_b and C_b per alpha.

    Slices with a constant C_b (e.g. alpha = 0) give NaN.

    """
    k_bob = dataset.k_bob.values
    values: list[float] = []

    for alpha in dataset.alpha.values:
        c_bob = dataset.c_bob.sel(alpha=alpha).values

        if len(k_bob) < 2 or np.ptp(c_bob) == 0:
            values.append(np.nan)
        else:
            values.append(float(spearmanr(k_bob, c_bob)[0]))

    return xr.DataArray(values, dims="alpha", coords={"alpha": dataset.alpha})


def alpha_peaks(dataset: xr.Dataset, /) -> xr.Dataset:
    """Return the alpha maximizing C_s and the C_s values per K_b slice.

    Returns:
        Dataset over ``k_bob`` with ``alpha_best``, ``c_secrecy_best``
        and ``c_secrecy_at_one`` (C_s at the largest swept alpha).

    """
    c_secrecy = dataset.c_secrecy
    index = c_secrecy.argmax("alpha")

    return xr.Dataset(
        {
            "alpha_best": dataset.alpha[index].drop_vars("alpha"),
            "c_secrecy_best": c_secrecy.max("alpha"),
            "c_secrecy_at_one": c_secrecy.isel(alpha=-1, drop=True),
        }
    )


def best_allocation(dataset: xr.Dataset, /, interior: bool = False) -> dict[str, float]:
    """Return the swept (alpha, K_b) cell with the largest C_s.

    Args:
        dataset: Dataset made by :func:`to_dataset`.
        interior: If ``True``, only cells with ``0 < alpha < 1``
            and ``0 < K_b < N`` (balanced allocations) are considered.

    Returns:
        Dictionary of ``alpha``, ``k_bob``, ``beta``, ``c_secrecy``,
        ``c_bob`` and ``c_eve`` of the best cell (ties to the first cell).

    Raises:
        ParameterError: Raised if no cell is eligible.

    """
    c_secrecy = dataset.c_secrecy

    if interior:
        n = len(str(dataset.phase_bits.values.flat[0]))
        alpha, k_bob = dataset.alpha, dataset.k_bob
        mask = (alpha > 0) & (alpha < 1) & (k_bob > 0) & (k_bob < n)
        c_secrecy = c_secrecy.where(mask)

    if bool(c_secrecy.isnull().all()):
        raise ParameterError("no eligible cell for the allocation search")

    stacked = c_secrecy.stack(cell=("alpha", "k_bob"))
    best = stacked.isel(cell=int(stacked.fillna(-np.inf).argmax()))
    alpha, k_bob = float(best.alpha), int(best.k_bob)
    cell = dataset.sel(alpha=alpha, k_bob=k_bob)

    return {
        "alpha": alpha,
        "k_bob": k_bob,
        "beta": float(cell.beta),
        "c_secrecy": float(cell.c_secrecy),
        "c_bob": float(cell.c_bob),
        "c_eve": float(cell.c_eve),
    }
