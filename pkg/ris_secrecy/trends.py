__all__ = [
    "TREND_FILES",
    "TrendReport",
    "check_trends",
    "frame_to_dataset",
    "recheck_trends",
    "write_trends",
]


# standard library
from collections.abc import Sequence
from dataclasses import dataclass
from logging import getLogger
from os import PathLike
from pathlib import Path
from typing import Optional, Union


# dependencies
import numpy as np
import pandas as pd
import xarray as xr
from .output import FLOAT_FORMAT
from .sweep import CAPACITY_UNITS, alpha_peaks, spearman_by_alpha
from .units import set as set_units, unitsof


# type hints
StrPath = Union[str, "PathLike[str]"]


# constants
SPEARMAN_MIN = 0.95
TREND_FILES = {
    "a": "trend_a_capacity_vs_beta.csv",
    "b": "trend_b_secrecy_vs_beta.csv",
    "c": "trend_c_capacity_vs_alpha.csv",
    "d": "trend_d_secrecy_vs_alpha.csv",
}
TREND_TITLES = {
    "a": "C_b and C_e vs beta, one series per selected alpha",
    "b": "C_s vs beta, one series per selected alpha",
    "c": "C_b and C_e vs alpha, one series per selected k_bob",
    "d": "C_s vs alpha, one series per selected k_bob",
}


LOGGER = getLogger(__name__)


def frame_to_dataset(frame: pd.DataFrame, /) -> xr.Dataset:
    """Convert a sweep table to a Dataset over (alpha, k_bob)."""
    indexed = frame.set_index(["alpha", "k_bob"]).sort_index()
    dataset = xr.Dataset.from_dataframe(indexed)
    beta = dataset["beta"].max("alpha")
    dataset = dataset.drop_vars("beta").assign_coords(beta=beta)

    for name in dataset.data_vars:
        if str(name).startswith("c_"):
            dataset[name] = set_units(dataset[name], CAPACITY_UNITS)

    return dataset


def write_trends(
    frame: pd.DataFrame,
    outdir: StrPath,
    alphas: Optional[Sequence[float]] = None,
    k_bobs: Optional[Sequence[int]] = None,
) -> dict[str, Path]:
    """Write the four plot-ready trend tables of a sweep.

    Selected values are matched to the nearest swept value.

    Args:
        frame: Sweep table read by ``read_sweep``.
        outdir: Output directory (created if needed).
        alphas: Alpha values of the vs-beta trends (a, b).
            Defaults to 0.2, 0.5, 0.8 and 1.0.
        k_bobs: K_b values of the vs-alpha trends (c, d).
            Defaults to N/4, N/2 and 3N/4.

    Returns:
        Paths of the written files keyed by trend name.

    Raises:
        OSError: Raised if a file cannot be written.

    """
    dataset = frame_to_dataset(frame)
    units = unitsof(dataset.c_bob, strict=True)
    n = len(str(frame["phase_bits"].iloc[0]))
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    if alphas is None:
        alphas = [0.2, 0.5, 0.8, 1.0]

    if k_bobs is None:
        k_bobs = [n // 4, n // 2, 3 * n // 4]

    by_alpha = dataset.sel(alpha=unique_nearest(dataset.alpha, alphas))
    by_k_bob = dataset.sel(k_bob=unique_nearest(dataset.k_bob, k_bobs))
    tables = {
        "a": table(by_alpha, ("alpha", "k_bob"), ["c_bob", "c_eve"]),
        "b": table(by_alpha, ("alpha", "k_bob"), ["c_secrecy", "c_secrecy_random"]),
        "c": table(by_k_bob, ("k_bob", "alpha"), ["c_bob", "c_eve"]),
        "d": table(by_k_bob, ("k_bob", "alpha"), ["c_secrecy", "c_secrecy_random"]),
    }
    paths: dict[str, Path] = {}

    for name, data in tables.items():
        paths[name] = path = outdir / TREND_FILES[name]
        header = (
            f"# trend ({name}): {TREND_TITLES[name]}\n"
            f"# columns: {', '.join(data.columns)}\n"
            f"# capacities in {units}\n"
        )
        body = data.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        path.write_text(header + body, encoding="utf-8")

    return paths


def unique_nearest(coord: xr.DataArray, values: Sequence[float]) -> list[float]:
    """Return the swept values nearest to the selected ones (deduplicated)."""
    nearest = coord.sel({coord.name: list(values)}, method="nearest").values
    return sorted(set(nearest.tolist()))


def table(dataset: xr.Dataset, order: tuple[str, str], names: list[str]) -> pd.DataFrame:
    """Flatten selected variables to a long table in a given order."""
    frame = dataset[names].to_dataframe().reset_index()
    frame = frame.sort_values(list(order), kind="stable")
    return frame[[*order, "beta", *names]]


@dataclass(frozen=True)
class TrendReport:
    """Outcome of the trend checks of a swept (alpha, K_b) grid."""

    rho_min: float
    """Smallest Spearman correlation between K_b and C_b (NaN if none)."""

    spearman_slices: int
    """Number of alpha slices with a finite Spearman correlation."""

    spearman_low: int
    """Number of alpha slices with a correlation below the threshold."""

    objective_drops: int
    """Number of K_b steps where |G_sb^(b)|^2 decreases."""

    peak_slices: int
    """Number of K_b slices to which the interior-peak check applies."""

    no_interior_peak: int
    """Number of those slices whose C_s maximum is not above C_s at alpha = 1."""

    @property
    def passed(self) -> bool:
        """Whether all trend checks hold."""
        return not (self.spearman_low or self.objective_drops or self.no_interior_peak)


def check_trends(dataset: xr.Dataset, /) -> TrendReport:
    """Check the capacity trends of a swept grid.

    C_b must rank-correlate with K_b on every alpha slice and the
    Bob-partition power must not decrease in K_b. For every K_b slice
    with 0 < K_b < N where AN reaches Eve above the noise floor
    (``an_to_noise_eve`` > 1), the C_s maximum over alpha must be
    strictly above C_s at alpha = 1. The last check needs alpha = 1
    and at least one other alpha to be swept and applies to no slice
    otherwise.

    Args:
        dataset: Dataset made by ``to_dataset`` or ``frame_to_dataset``.

    Returns:
        Counts of the checked and failing slices.

    """
    rho = spearman_by_alpha(dataset)
    finite = np.isfinite(rho.values)
    objective_bob = dataset.objective_bob.max("alpha")

    n = len(str(dataset.phase_bits.values.flat[0]))
    k_bob = dataset.k_bob
    swept_one = dataset.alpha.size > 1 and float(dataset.alpha[-1]) == 1.0
    an_reaches_eve = dataset.an_to_noise_eve.max("alpha") > 1
    eligible = (k_bob > 0) & (k_bob < n) & an_reaches_eve & swept_one

    peaks = alpha_peaks(dataset)
    peaked = peaks.c_secrecy_best > peaks.c_secrecy_at_one

    return TrendReport(
        rho_min=float(np.min(rho.values[finite])) if finite.any() else np.nan,
        spearman_slices=int(finite.sum()),
        spearman_low=int((rho < SPEARMAN_MIN).sum()),
        objective_drops=int((objective_bob.diff("k_bob") < 0).sum()),
        peak_slices=int(eligible.sum()),
        no_interior_peak=int((eligible & ~peaked).sum()),
    )


def recheck_trends(frame: pd.DataFrame, /) -> TrendReport:
    """Re-check the trends on a sweep table and log the outcome."""
    report = check_trends(frame_to_dataset(frame))

    if report.spearman_low:
        LOGGER.warning(
            "%d alpha slices with Spearman(K_b, C_b) < %g",
            report.spearman_low,
            SPEARMAN_MIN,
        )

    if report.objective_drops:
        LOGGER.warning("%d K_b steps with a decreasing |G_sb|^2", report.objective_drops)

    if report.no_interior_peak:
        LOGGER.warning(
            "%d of %d K_b slices without an interior C_s peak in alpha",
            report.no_interior_peak,
            report.peak_slices,
        )

    LOGGER.info(
        "trend re-check: min Spearman %.4f over %d slices",
        report.rho_min,
        report.spearman_slices,
    )
    return report
