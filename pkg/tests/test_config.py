# standard library
from copy import deepcopy
from pathlib import Path
from typing import Any, Optional


# dependencies
import tomli_w
from pytest import approx, mark, raises
from ris_secrecy.config import (
    RunConfig,
    config_hash,
    dump_config,
    load_config,
    parse_config,
)
from ris_secrecy.utils import (
    ConfigError,
    ConfigKeyError,
    ConfigParseError,
    ConfigValueError,
)


# test datasets
base: dict[str, dict[str, Any]] = {
    "scene": {
        "cs_tx_pos": [0.74, 0.31, 0.0],
        "an_tx_pos": [0.74, -0.31, 0.0],
        "ris_center": [0.0, 0.0, 0.4],
        "ris_rows": 2,
        "ris_cols": 4,
        "element_spacing_row": 0.041,
        "element_spacing_col": 0.041,
        "bob_pos": [1.19, 1.41, 0.0],
        "eve_pos": [1.19, -1.41, 0.0],
    },
    "params": {
        "carrier_freq": 3.75e9,
        "total_power_dbm": -9.0,
        "tx_antenna_gain_dbi": 13.0,
        "noise_power_bob_dbm": -90.0,
        "noise_power_eve_dbm": -90.0,
    },
    "grid": {
        "alpha": [0.5],
        "k_bob": "all",
    },
}


def toml(changes: Optional[dict[str, dict[str, Any]]] = None, drop: str = "") -> str:
    data = deepcopy(base)

    for name, values in (changes or {}).items():
        data.setdefault(name, {}).update(values)

    if drop:
        name, key = drop.split(".")
        del data[name][key]

    return tomli_w.dumps(data)


# test data
data_errors: list[tuple[str, type, str, Optional[str]]] = [
    ("[scene\n", ConfigParseError, "parse", None),
    (toml(drop="scene.bob_pos"), ConfigKeyError, "missing-key", "scene.bob_pos"),
    (toml(drop="grid.alpha"), ConfigKeyError, "missing-key", "grid.alpha"),
    (toml({"scene": {"bob": 1}}), ConfigKeyError, "unknown-key", "scene.bob"),
    (toml({"extra": {"a": 1}}), ConfigKeyError, "unknown-key", "extra"),
    (toml({"grid": {"k_bob": [0, 100]}}), ConfigValueError, "invalid-value", "grid.k_bob"),
    (toml({"grid": {"k_bob": [0, 2.5]}}), ConfigValueError, "invalid-value", "grid.k_bob"),
    (toml({"grid": {"k_bob": {"start": 0, "stop": 8, "step": 2.5}}}), ConfigValueError, "invalid-value", "grid.k_bob"),
    (toml({"grid": {"k_bob": {"start": 0.5, "stop": 8, "step": 2}}}), ConfigValueError, "invalid-value", "grid.k_bob"),
    (toml({"grid": {"alpha": [0.5, 0.2]}}), ConfigValueError, "invalid-value", "grid"),
    (toml({"grid": {"optimizer_mode": "fast"}}), ConfigValueError, "invalid-value", "grid.optimizer_mode"),
    (toml({"scene": {"ris_rows": 0}}), ConfigValueError, "invalid-value", "scene"),
    (toml({"scene": {"ris_rows": 2.5}}), ConfigValueError, "invalid-value", "scene.ris_rows"),
    (toml({"run": {"output_format": "xml"}}), ConfigValueError, "invalid-value", "run.output_format"),
    (toml({"run": {"workers": 0}}), ConfigValueError, "invalid-value", "run.workers"),
    (toml({"scene": {"element_order": [0, 0, 1, 2, 3, 4, 5, 6]}}), ConfigValueError, "invalid-value", "scene.element_order"),
]


# test functions
def test_load_default() -> None:
    config = load_config()
    assert config.scene.n_elements == 64
    assert config.params.carrier_freq == 3.75e9
    assert config.params.total_power == approx(1.2589254e-4, rel=1e-7)
    assert config.params.noise_power_bob == approx(1e-12, rel=1e-9)
    assert config.params.tx_antenna_gain == approx(19.952623, rel=1e-7)
    assert config.scene.bob_pos == (1.19, 1.41, 0.0)
    assert len(config.grid.alpha_values) == 101
    assert config.grid.alpha_values[1] == 0.01
    assert config.grid.alpha_values[-1] == 1.0
    assert config.grid.k_bob_values == tuple(range(65))
    assert config.grid.optimizer_mode == "to_convergence"
    assert config.baseline_seeds == 100


def test_load_file(tmp_path: Path) -> None:
    path = tmp_path / "config.toml"
    path.write_text(toml(), encoding="utf-8")
    config = load_config(path)
    assert config.grid.alpha_values == (0.5,)
    assert config.grid.k_bob_values == tuple(range(9))

    with raises(OSError):
        load_config(tmp_path / "missing.toml")


@mark.parametrize("text, error, code, key", data_errors)
def test_parse_errors(text: str, error: type, code: str, key: Optional[str]) -> None:
    with raises(error) as info:
        parse_config(text)

    assert isinstance(info.value, ConfigError)
    assert info.value.code == code
    assert info.value.key == key


def test_k_bob_out_of_range_message() -> None:
    with raises(ConfigValueError, match="k_bob out of range"):
        parse_config(toml({"grid": {"k_bob": {"start": 0, "stop": 100, "step": 1}}}))


def test_oracle_cap() -> None:
    with raises(ConfigValueError, match="oracle cap exceeded"):
        parse_config(toml({"scene": {"ris_rows": 8, "ris_cols": 8}, "run": {"oracle_enabled": True}}))

    config = parse_config(toml({"run": {"oracle_enabled": True}}))
    assert config.oracle_enabled


def test_axis_range() -> None:
    config = parse_config(toml({"grid": {"alpha": {"start": 0.2, "stop": 0.3, "step": 0.05}}}))
    assert config.grid.alpha_values == (0.2, 0.25, 0.3)


def test_element_order() -> None:
    config = parse_config(toml({"scene": {"element_order": "column-major"}}))
    assert config.element_order == (0, 4, 1, 5, 2, 6, 3, 7)

    config = parse_config(toml({"scene": {"element_order": "row-major"}}))
    assert config.element_order == ()


def test_round_trip() -> None:
    config = load_config()
    loaded = parse_config(dump_config(config))
    assert loaded.scene == config.scene
    assert loaded.grid == config.grid
    assert loaded.output_path == config.output_path

    for name in ("total_power", "tx_antenna_gain", "noise_power_bob", "noise_power_eve"):
        assert getattr(loaded.params, name) == approx(getattr(config.params, name), rel=1e-12)


def test_config_hash() -> None:
    config = parse_config(toml())
    assert config_hash(config) == config_hash(parse_config(toml()))
    assert config_hash(config) == config_hash(
        parse_config(toml({"run": {"output_path": "other.csv", "workers": 4}}))
    )
    assert config_hash(config) != config_hash(config.with_seed(1))


def test_with_seed() -> None:
    config = parse_config(toml())
    assert isinstance(config.with_seed(7), RunConfig)
    assert config.with_seed(7).grid.seed == 7
    assert config.grid.seed == 0


def test_k_bob_range_stops_at_stop() -> None:
    config = parse_config(toml({"grid": {"k_bob": {"start": 1, "stop": 8, "step": 3}}}))
    assert config.grid.k_bob_values == (1, 4, 7)
