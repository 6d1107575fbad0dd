__all__ = ["cmd_sweep", "cmd_trends", "cmd_verify", "main"]


# standard library
import logging
from argparse import ArgumentParser, Namespace
from collections.abc import Callable, Sequence
from dataclasses import replace
from pathlib import Path
from typing import Any, Optional


# dependencies
from . import __version__
from .config import RunConfig, config_hash, load_config
from .metrics import secrecy_gap
from .output import read_sweep, write_sweep
from .sweep import SEED_RULE, best_allocation, run_sweep, to_dataset
from .trends import recheck_trends, write_trends
from .utils import ConfigError, ParameterError, RisError
from .verify import run_verify


# constants
EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_IO = 3
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


LOGGER = logging.getLogger(__name__)


def cmd_sweep(config: RunConfig, /) -> int:
    """Run the configured sweep and write one row per grid cell.

    The header of the output file carries the tool version, the master
    seed, the config hash and the per-cell seed rule.

    Raises:
        RisError: Raised if a component fails or an invariant is violated.
        OSError: Raised if the output file cannot be written.

    """
    grid = config.grid
    LOGGER.info(
        "sweeping %d alpha x %d k_bob cells (N=%d, seed=%d)",
        len(grid.alpha_values),
        len(grid.k_bob_values),
        config.scene.n_elements,
        grid.seed,
    )
    records = run_sweep(
        config.scene,
        config.params,
        grid,
        baseline_seeds=config.baseline_seeds,
        workers=config.workers,
        element_order=config.element_order,
    )
    header = {
        "tool": f"ris-secrecy {__version__}",
        "seed": grid.seed,
        "config_hash": config_hash(config),
        "seed_rule": SEED_RULE,
        "baseline": f"mean over {config.baseline_seeds} random configurations",
        "phase_bits": "partition order, '1' for pi",
    }
    write_sweep(records, config.output_path, header, config.output_format)
    LOGGER.info("wrote %d rows to %s", len(records), config.output_path)

    dataset = to_dataset(records)
    best = best_allocation(dataset)
    LOGGER.info(
        "best cell: alpha=%.2f, K_b=%d, C_s=%.4f bit/s/Hz",
        best["alpha"],
        best["k_bob"],
        best["c_secrecy"],
    )

    try:
        balanced = best_allocation(dataset, interior=True)
    except ParameterError:
        LOGGER.info("no balanced cell (0 < alpha < 1, 0 < K_b < N) swept")
        return EXIT_OK

    cell = next(
        r for r in records if (r.alpha, r.k_bob) == (balanced["alpha"], balanced["k_bob"])
    )
    LOGGER.info(
        "best balanced cell: alpha=%.2f, beta=%.3f, C_s=%.4f, C_b - C_e=%.4f bit/s/Hz",
        balanced["alpha"],
        balanced["beta"],
        balanced["c_secrecy"],
        secrecy_gap(cell.metrics),
    )
    return EXIT_OK


def cmd_verify(config: RunConfig, /, seeds: int = 100) -> int:
    """Run the oracle suite and print per-instance results.

    Returns:
        0 if every hard property passed, 2 otherwise.

    Raises:
        OracleCapError: Raised if the oracle scene exceeds its cap.

    """
    report = run_verify(config, seeds=seeds)
    print(f"oracle scene: N={report.n_elements}")
    print("instance,ratio")

    for index, ratio in enumerate(report.oracle_ratios):
        print(f"{index},{ratio:.9g}")

    print("alpha,k_bob,deviation_bob_db,deviation_eve_db")

    for alpha, k_bob, dev_bob, dev_eve in report.sinr_deviations_db:
        print(f"{alpha:.9g},{k_bob},{dev_bob:.4f},{dev_eve:.4f}")

    for check in report.checks:
        print(f"{'PASS' if check.passed else 'FAIL'} {check.name}: {check.summary}")

    if not report.passed:
        LOGGER.error("failed properties: %s", ", ".join(report.failed))
        return EXIT_RUNTIME

    return EXIT_OK


def cmd_trends(
    path: Path,
    outdir: Path,
    alphas: Optional[Sequence[float]] = None,
    k_bobs: Optional[Sequence[int]] = None,
) -> int:
    """Write the four trend tables of a sweep file and re-check trends.

    Returns:
        0 if the trends hold, 2 otherwise (the tables are written anyway).

    Raises:
        ParameterError: Raised if the sweep file is malformed.
        OSError: Raised if a file cannot be read or written.

    """
    frame = read_sweep(path)
    paths = write_trends(frame, outdir, alphas, k_bobs)

    for name, written in paths.items():
        LOGGER.info("trend (%s): %s", name, written)

    if not recheck_trends(frame).passed:
        LOGGER.error("trend re-check failed on %s", path)
        return EXIT_RUNTIME

    return EXIT_OK


def values(cast: Callable[[str], float]) -> Callable[[str], list[float]]:
    """Return an argparse type for comma-separated values."""

    def parse(text: str) -> list[float]:
        return [cast(item) for item in text.split(",") if item.strip()]

    return parse


def build_parser() -> ArgumentParser:
    """Return the argument parser of the command-line interface."""
    parser = ArgumentParser(
        prog="ris-secrecy",
        description="Simulate RIS-assisted secure transmission with artificial noise",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="Log debug messages",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    sweep = commands.add_parser("sweep", help="Run the (alpha, K_b) sweep")
    sweep.add_argument("--config", type=Path, help="Config file (default: reference scene)")
    sweep.add_argument("--output", type=Path, help="Output file (overrides config)")
    sweep.add_argument("--format", choices=("csv", "json"), help="Output format")
    sweep.add_argument("--seed", type=int, help="Master seed (overrides config)")
    sweep.add_argument("--workers", type=int, help="Worker processes")

    verify = commands.add_parser("verify", help="Run the oracle suite")
    verify.add_argument("--config", type=Path, help="Config file (default: reference scene)")
    verify.add_argument("--seeds", type=int, default=100, help="Oracle instances")

    trends = commands.add_parser("trends", help="Write plot-ready trend tables")
    trends.add_argument("--input", type=Path, required=True, help="Sweep file")
    trends.add_argument("--outdir", type=Path, required=True, help="Output directory")
    trends.add_argument("--alphas", type=values(float), help="e.g. 0.2,0.5,0.8,1")
    trends.add_argument("--kbobs", type=values(int), help="e.g. 16,32,48")

    return parser


def configure(args: Namespace, /) -> RunConfig:
    """Load the config of a command and apply the flag overrides."""
    config = load_config(args.config)
    overrides: dict[str, Any] = {}

    if getattr(args, "output", None) is not None:
        overrides["output_path"] = args.output

    if getattr(args, "format", None) is not None:
        overrides["output_format"] = args.format
    elif getattr(args, "output", None) is not None and args.output.suffix == ".json":
        overrides["output_format"] = "json"

    if getattr(args, "workers", None) is not None:
        overrides["workers"] = args.workers

    if getattr(args, "seed", None) is not None:
        config = config.with_seed(args.seed)

    if overrides:
        config = replace(config, **overrides)

    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command-line interface.

    Returns:
        Exit code: 0 success, 1 config error, 2 runtime or
        invariant error, 3 I/O error.

    """
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT)

    try:
        if args.command == "trends":
            return cmd_trends(args.input, args.outdir, args.alphas, args.kbobs)

        config = configure(args)

        if args.command == "verify":
            return cmd_verify(config, seeds=args.seeds)

        return cmd_sweep(config)
    except ConfigError as error:
        LOGGER.error("config error: %s", error)
        return EXIT_CONFIG
    except RisError as error:
        LOGGER.error("%s: %s", type(error).__name__, error)
        return EXIT_RUNTIME
    except OSError as error:
        LOGGER.error("I/O error: %s", error)
        return EXIT_IO
