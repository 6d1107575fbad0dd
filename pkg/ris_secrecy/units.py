__all__ = [
    "dbi_to_linear",
    "dbm_to_watts",
    "linear_to_dbi",
    "set",
    "unitsof",
    "watts_to_dbm",
    "wavelength",
]


# standard library
from typing import Any, Optional, TypeVar, Union


# dependencies
from astropy.units import (
    Hz,
    Quantity,
    Unit,
    UnitBase,
    W,
    dB,
    dimensionless_unscaled,
    m,
    mW,
    spectral,
)
from xarray import DataArray
from .utils import ParameterError, ensure_finite


# type hints
TDataArray = TypeVar("TDataArray", bound=DataArray)
UnitsLike = Union[UnitBase, str]


# constants
DBI = dB(dimensionless_unscaled)
DBM = dB(mW)
UNITS = "units"


def dbm_to_watts(value: float, /) -> float:
    """Convert a power in dBm to watts."""
    return float((ensure_finite("power", value) * DBM).physical.to_value(W))


def watts_to_dbm(value: float, /) -> float:
    """Convert a power in watts to dBm.

    Raises:
        ParameterError: Raised if the power is not strictly positive.

    """
    if ensure_finite("power", value) <= 0:
        raise ParameterError(f"power must be positive: {value!r}")

    return float(Quantity(value, W).to(DBM).value)


def dbi_to_linear(value: float, /) -> float:
    """Convert an antenna gain in dBi to a linear power ratio."""
    return float((ensure_finite("gain", value) * DBI).physical.value)


def linear_to_dbi(value: float, /) -> float:
    """Convert a linear power ratio to dBi.

    Raises:
        ParameterError: Raised if the gain is not strictly positive.

    """
    if ensure_finite("gain", value) <= 0:
        raise ParameterError(f"gain must be positive: {value!r}")

    return float(Quantity(value, dimensionless_unscaled).to(DBI).value)


def wavelength(frequency: float, /) -> float:
    """Return the free-space wavelength (m) of a frequency (Hz).

    Raises:
        ParameterError: Raised if the frequency is not strictly positive.

    """
    if ensure_finite("frequency", frequency) <= 0:
        raise ParameterError(f"frequency must be positive: {frequency!r}")

    return float(Quantity(frequency, Hz).to_value(m, equivalencies=spectral()))


def unitsof(obj: Any, /, *, strict: bool = False) -> Optional[UnitBase]:
    """Return units of an object if they exist and are valid.

    Args:
        obj: Any object from which units are extracted.
        strict: Whether to raise instead of returning ``None``
            when units do not exist in the object.

    Returns:
        Extracted units from the object.

    Raises:
        ParameterError: Raised if ``strict`` is ``True`` but units
            do not exist, or if units exist but are not valid.

    """
    if isinstance(obj, DataArray):
        units = obj.attrs.get(UNITS)
    elif isinstance(obj, Quantity):
        units = obj.unit
    else:
        units = None

    if units is None:
        if not strict:
            return None

        raise ParameterError(f"units not found: {obj!r}")

    try:
        units = Unit(units)  # type: ignore
    except Exception:
        raise ParameterError(f"units not valid: {units!r}")

    if not isinstance(units, UnitBase):
        raise ParameterError(f"units not valid: {units!r}")

    return units


def set(da: TDataArray, units: UnitsLike, /) -> TDataArray:
    """Set units to a DataArray.

    Args:
        da: Input DataArray.
        units: Units to be set to the input.

    Returns:
        DataArray with given units in ``attrs["units"]``.

    Raises:
        ParameterError: Raised if units are not valid.

    """
    try:
        Unit(units)  # type: ignore
    except Exception:
        raise ParameterError(f"units not valid: {units!r}")

    return da.assign_attrs({UNITS: str(units)})
