__all__ = [
    "RisError",
    "ConfigError",
    "ConfigKeyError",
    "ConfigParseError",
    "ConfigValueError",
    "GeometryError",
    "InvariantError",
    "OracleCapError",
    "ParameterError",
    "ShapeError",
    "ensure_finite",
]


# standard library
from collections.abc import Sequence
from typing import Any, Optional, Union


# dependencies
import numpy as np
from numpy.typing import NDArray


# type hints
BoolArray = NDArray[np.bool_]
ComplexArray = NDArray[np.complex128]
FloatArray = NDArray[np.float64]
SeedLike = Union[int, Sequence[int], np.random.SeedSequence]


# constants
ORACLE_N_CAP = 20
"""Largest N accepted by the exhaustive secrecy oracle."""

PARTITION_ORACLE_CAP = 24
"""Largest index set accepted by the exhaustive partition oracle."""

SINR_CLAMP_DB = 150.0
"""Upper clamp of empirical SINR estimates in dB."""


class RisError(Exception):
    """Base exception for the RIS secrecy simulator."""

    pass


class GeometryError(RisError):
    """Scene geometry is degenerate or not valid."""

    pass


class ShapeError(RisError):
    """Channel or phase vectors do not have matching lengths."""

    pass


class ParameterError(RisError):
    """A numeric parameter is out of its valid range."""

    pass


class OracleCapError(RisError):
    """An exhaustive oracle was asked for more elements than its cap."""

    pass


class InvariantError(RisError):
    """A hard runtime invariant was violated."""

    pass


class ConfigError(RisError):
    """Base exception for configuration files.

    Args:
        message: Human-readable description.
        key: Dotted name of the offending key (e.g. ``"grid.k_bob"``).

    """

    code = "config"
    """Short machine-readable error code."""

    def __init__(self, message: str, key: Optional[str] = None) -> None:
        self.key = key

        if key is None:
            super().__init__(f"[{self.code}] {message}")
        else:
            super().__init__(f"[{self.code}] {key}: {message}")


class ConfigParseError(ConfigError):
    """Configuration file cannot be parsed."""

    code = "parse"


class ConfigKeyError(ConfigError):
    """Configuration key is missing or not known.

    Args:
        message: Human-readable description.
        key: Dotted name of the offending key.
        missing: Whether the key is missing (otherwise unknown).

    """

    def __init__(self, message: str, key: str, *, missing: bool) -> None:
        self.code = "missing-key" if missing else "unknown-key"
        super().__init__(message, key)


class ConfigValueError(ConfigError):
    """Configuration value violates an invariant."""

    code = "invalid-value"


def ensure_finite(name: str, value: Any, /) -> float:
    """Return a value as float if it is finite.

    Raises:
        ParameterError: Raised if the value is not a finite number.

    """
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ParameterError(f"{name} must be a number: {value!r}")

    if not np.isfinite(number):
        raise ParameterError(f"{name} must be finite: {value!r}")

    return number
