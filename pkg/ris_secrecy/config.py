__all__ = ["RunConfig", "config_hash", "dump_config", "load_config", "parse_config"]


# standard library
import sys
from collections.abc import Callable, Mapping
from dataclasses import dataclass, replace
from hashlib import sha256
from importlib.resources import files
from os import PathLike
from pathlib import Path
from typing import Any, Literal, Optional, TypeVar, Union, get_args


# dependencies
import numpy as np
import tomli_w
from .optimizer import Mode, Objective
from .scene import Scene, SystemParams
from .sweep import SweepGrid
from .units import dbi_to_linear, dbm_to_watts, linear_to_dbi, watts_to_dbm
from .utils import (
    ORACLE_N_CAP,
    ConfigKeyError,
    ConfigParseError,
    ConfigValueError,
    RisError,
)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


# type hints
OutputFormat = Literal["csv", "json"]
StrPath = Union[str, "PathLike[str]"]
T = TypeVar("T")


# constants
DEFAULTS = "defaults.toml"
SECTIONS = ("scene", "params", "grid", "run")
SCENE_KEYS = {
    "cs_tx_pos": True,
    "an_tx_pos": True,
    "ris_center": True,
    "ris_rows": True,
    "ris_cols": True,
    "element_spacing_row": True,
    "element_spacing_col": True,
    "bob_pos": True,
    "eve_pos": True,
    "ris_normal": False,
    "element_order": False,
}
PARAMS_KEYS = {
    "carrier_freq": True,
    "total_power_dbm": True,
    "tx_antenna_gain_dbi": True,
    "noise_power_bob_dbm": True,
    "noise_power_eve_dbm": True,
    "cosine_exponent": False,
    "sample_rate": False,
}
GRID_KEYS = {
    "alpha": True,
    "k_bob": True,
    "optimizer_mode": False,
    "max_passes": False,
    "objective": False,
    "seed": False,
}
RUN_KEYS = {
    "output_path": False,
    "output_format": False,
    "oracle_enabled": False,
    "oracle_n_cap": False,
    "baseline_seeds": False,
    "workers": False,
    "verify_rows": False,
    "verify_cols": False,
}


@dataclass(frozen=True)
class RunConfig:
    """Complete configuration of a run.

    Raises:
        ConfigValueError: Raised if the output format is not known, or the
            oracle is enabled for a scene larger than its cap.

    """

    scene: Scene
    params: SystemParams
    grid: SweepGrid
    output_path: Path = Path("sweep.csv")
    output_format: OutputFormat = "csv"
    oracle_enabled: bool = False
    oracle_n_cap: int = ORACLE_N_CAP
    baseline_seeds: int = 100
    workers: int = 1
    element_order: tuple[int, ...] = ()
    verify_rows: int = 2
    verify_cols: int = 4

    def __post_init__(self) -> None:
        object.__setattr__(self, "output_path", Path(self.output_path))
        object.__setattr__(self, "element_order", tuple(self.element_order))
        n = self.scene.n_elements

        if self.output_format not in get_args(OutputFormat):
            raise ConfigValueError(
                f"must be one of {get_args(OutputFormat)}", "run.output_format"
            )

        if not 1 <= self.oracle_n_cap <= ORACLE_N_CAP:
            raise ConfigValueError(
                f"must be within [1, {ORACLE_N_CAP}]", "run.oracle_n_cap"
            )

        if self.oracle_enabled and n > self.oracle_n_cap:
            raise ConfigValueError(
                f"oracle cap exceeded: N={n} > {self.oracle_n_cap}",
                "run.oracle_enabled",
            )

        if self.baseline_seeds < 0:
            raise ConfigValueError("must be non-negative", "run.baseline_seeds")

        if self.workers < 1:
            raise ConfigValueError("must be positive", "run.workers")

        if self.verify_rows * self.verify_cols > ORACLE_N_CAP:
            raise ConfigValueError("oracle cap exceeded", "run.verify_rows")

        if self.element_order and sorted(self.element_order) != list(range(n)):
            raise ConfigValueError(
                f"must be a permutation of {n} elements", "scene.element_order"
            )

        if self.grid.k_bob_values[-1] > n:
            raise ConfigValueError(
                f"k_bob out of range: {self.grid.k_bob_values[-1]} > N={n}",
                "grid.k_bob",
            )

    def with_seed(self, seed: int, /) -> "RunConfig":
        """Return the configuration with another master seed."""
        return replace(self, grid=replace(self.grid, seed=seed))


def load_config(path: Optional[StrPath] = None, /) -> RunConfig:
    """Load a run configuration from a TOML file.

    Powers in dBm and gains in dBi are converted to linear units.

    Args:
        path: Path of the file. If not given, the packaged default
            configuration (the reference scene) is loaded.

    Returns:
        Validated run configuration.

    Raises:
        ConfigParseError: Raised if the file is not valid TOML.
        ConfigKeyError: Raised if a key is missing or not known.
        ConfigValueError: Raised if a value violates an invariant.
        OSError: Raised if the file cannot be read.

    """
    if path is None:
        text = (files("ris_secrecy") / DEFAULTS).read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")

    return parse_config(text)


def parse_config(text: str, /) -> RunConfig:
    """Parse a run configuration from TOML text.

    Raises:
        ConfigParseError: Raised if the text is not valid TOML.
        ConfigKeyError: Raised if a key is missing or not known.
        ConfigValueError: Raised if a value violates an invariant.

    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as error:
        raise ConfigParseError(str(error))

    for name in data:
        if name not in SECTIONS:
            raise ConfigKeyError("unknown section", name, missing=False)

    scene_data = section(data, "scene", SCENE_KEYS)
    params_data = section(data, "params", PARAMS_KEYS)
    grid_data = section(data, "grid", GRID_KEYS)
    run_data = section(data, "run", RUN_KEYS)

    scene = build(
        "scene",
        lambda: Scene(
            cs_tx_pos=scene_data["cs_tx_pos"],
            an_tx_pos=scene_data["an_tx_pos"],
            ris_center=scene_data["ris_center"],
            ris_rows=integer(scene_data, "scene.ris_rows"),
            ris_cols=integer(scene_data, "scene.ris_cols"),
            element_spacing_row=scene_data["element_spacing_row"],
            element_spacing_col=scene_data["element_spacing_col"],
            bob_pos=scene_data["bob_pos"],
            eve_pos=scene_data["eve_pos"],
            ris_normal=scene_data.get("ris_normal", (1.0, 0.0, 0.0)),
        ),
    )
    params = build(
        "params",
        lambda: SystemParams(
            carrier_freq=params_data["carrier_freq"],
            total_power=dbm_to_watts(params_data["total_power_dbm"]),
            tx_antenna_gain=dbi_to_linear(params_data["tx_antenna_gain_dbi"]),
            noise_power_bob=dbm_to_watts(params_data["noise_power_bob_dbm"]),
            noise_power_eve=dbm_to_watts(params_data["noise_power_eve_dbm"]),
            cosine_exponent=params_data.get("cosine_exponent", 1.0),
            sample_rate=params_data.get("sample_rate", 0.5e6),
        ),
    )
    n = scene.n_elements
    grid = build(
        "grid",
        lambda: SweepGrid(
            alpha_values=axis(grid_data["alpha"], "grid.alpha", n=None),
            k_bob_values=axis(grid_data["k_bob"], "grid.k_bob", n=n),
            optimizer_mode=choice(grid_data, "grid.optimizer_mode", Mode, "to_convergence"),
            max_passes=integer(grid_data, "grid.max_passes", 10),
            objective=choice(grid_data, "grid.objective", Objective, "partition"),
            seed=integer(grid_data, "grid.seed", 0),
        ),
    )

    return build(
        "run",
        lambda: RunConfig(
            scene=scene,
            params=params,
            grid=grid,
            output_path=Path(run_data.get("output_path", "sweep.csv")),
            output_format=run_data.get("output_format", "csv"),
            oracle_enabled=bool(run_data.get("oracle_enabled", False)),
            oracle_n_cap=integer(run_data, "run.oracle_n_cap", ORACLE_N_CAP),
            baseline_seeds=integer(run_data, "run.baseline_seeds", 100),
            workers=integer(run_data, "run.workers", 1),
            element_order=element_order(scene_data.get("element_order"), scene),
            verify_rows=integer(run_data, "run.verify_rows", 2),
            verify_cols=integer(run_data, "run.verify_cols", 4),
        ),
    )


def dump_config(config: RunConfig, /) -> str:
    """Serialize a run configuration to TOML text (dB units)."""
    scene, params, grid = config.scene, config.params, config.grid
    data: dict[str, dict[str, Any]] = {
        "scene": {
            "cs_tx_pos": list(scene.cs_tx_pos),
            "an_tx_pos": list(scene.an_tx_pos),
            "ris_center": list(scene.ris_center),
            "ris_rows": scene.ris_rows,
            "ris_cols": scene.ris_cols,
            "element_spacing_row": scene.element_spacing_row,
            "element_spacing_col": scene.element_spacing_col,
            "bob_pos": list(scene.bob_pos),
            "eve_pos": list(scene.eve_pos),
            "ris_normal": list(scene.ris_normal),
        },
        "params": {
            "carrier_freq": params.carrier_freq,
            "total_power_dbm": watts_to_dbm(params.total_power),
            "tx_antenna_gain_dbi": linear_to_dbi(params.tx_antenna_gain),
            "noise_power_bob_dbm": watts_to_dbm(params.noise_power_bob),
            "noise_power_eve_dbm": watts_to_dbm(params.noise_power_eve),
            "cosine_exponent": params.cosine_exponent,
            "sample_rate": params.sample_rate,
        },
        "grid": {
            "alpha": list(grid.alpha_values),
            "k_bob": list(grid.k_bob_values),
            "optimizer_mode": grid.optimizer_mode,
            "max_passes": grid.max_passes,
            "objective": grid.objective,
            "seed": grid.seed,
        },
        "run": {
            "output_path": config.output_path.as_posix(),
            "output_format": config.output_format,
            "oracle_enabled": config.oracle_enabled,
            "oracle_n_cap": config.oracle_n_cap,
            "baseline_seeds": config.baseline_seeds,
            "workers": config.workers,
            "verify_rows": config.verify_rows,
            "verify_cols": config.verify_cols,
        },
    }

    if config.element_order:
        data["scene"]["element_order"] = list(config.element_order)

    return tomli_w.dumps(data)


def config_hash(config: RunConfig, /) -> str:
    """Return the SHA-256 digest of the serialized configuration.

    The output location and the worker count are excluded
    since they do not change the results.

    """
    canonical = replace(config, output_path=Path("-"), workers=1)
    return sha256(dump_config(canonical).encode("utf-8")).hexdigest()


def section(data: Mapping[str, Any], name: str, keys: Mapping[str, bool]) -> dict[str, Any]:
    """Return a config section after checking its keys."""
    values = data.get(name, {})

    if not isinstance(values, dict):
        raise ConfigValueError("must be a table", name)

    for key in values:
        if key not in keys:
            raise ConfigKeyError("unknown key", f"{name}.{key}", missing=False)

    for key, required in keys.items():
        if required and key not in values:
            raise ConfigKeyError("missing key", f"{name}.{key}", missing=True)

    return dict(values)  # type: ignore


def build(name: str, factory: Callable[[], T]) -> T:
    """Run a constructor and convert domain errors to config errors."""
    try:
        return factory()
    except (ConfigKeyError, ConfigValueError):
        raise
    except (RisError, TypeError, ValueError) as error:
        raise ConfigValueError(str(error), name)


def integer(data: Mapping[str, Any], key: str, default: Optional[int] = None) -> int:
    """Return an integer value of a section."""
    value = data.get(key.split(".")[-1], default)

    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigValueError(f"must be an integer: {value!r}", key)

    return value


def choice(data: Mapping[str, Any], key: str, options: Any, default: str) -> Any:
    """Return a value of a section that must be one of a Literal's options."""
    value = data.get(key.split(".")[-1], default)

    if value not in get_args(options):
        raise ConfigValueError(f"must be one of {get_args(options)}: {value!r}", key)

    return value


def axis(value: Any, key: str, *, n: Optional[int]) -> list[Any]:
    """Expand a grid axis given as a list, a range table, or ``"all"``."""
    if value == "all" and n is not None:
        return list(range(n + 1))

    if isinstance(value, list):
        if n is not None and not all(map(is_integer, value)):  # type: ignore
            raise ConfigValueError("k_bob values must be integers", key)

        return value  # type: ignore

    if isinstance(value, dict) and set(value) == {"start", "stop", "step"}:  # type: ignore
        start, stop, step = value["start"], value["stop"], value["step"]

        if n is not None and not all(map(is_integer, (start, stop, step))):
            raise ConfigValueError("k_bob start, stop and step must be integers", key)

        if not step > 0 or stop < start:
            raise ConfigValueError("range must have step > 0 and stop >= start", key)

        if n is not None:
            values = list(range(start, stop + 1, step))

            if values[-1] > n:
                raise ConfigValueError(f"k_bob out of range: {values[-1]} > N={n}", key)

            return values

        count = int(round((stop - start) / step)) + 1
        return np.round(start + step * np.arange(count), 12).tolist()

    raise ConfigValueError("must be a list, {start, stop, step} or \"all\"", key)


def is_integer(value: Any, /) -> bool:
    """Return whether a parsed value is an integer (booleans excluded)."""
    return isinstance(value, int) and not isinstance(value, bool)


def element_order(value: Any, scene: Scene) -> tuple[int, ...]:
    """Resolve the partition-to-element mapping of the scene section."""
    rows, cols = scene.ris_rows, scene.ris_cols

    if value is None or value == "row-major":
        return ()

    if value == "column-major":
        return tuple(r * cols + c for c in range(cols) for r in range(rows))

    if isinstance(value, list):
        return tuple(int(index) for index in value)  # type: ignore

    raise ConfigValueError(
        'must be "row-major", "column-major" or a list', "scene.element_order"
    )
