__all__ = ["COLUMNS", "read_sweep", "records_to_frame", "write_sweep"]


# standard library
import json
from collections.abc import Mapping, Sequence
from os import PathLike
from pathlib import Path
from typing import Any, Union


# dependencies
import pandas as pd
from .sweep import SweepRecord
from .utils import ParameterError


# type hints
StrPath = Union[str, "PathLike[str]"]


# constants
COLUMNS = (
    "alpha",
    "k_bob",
    "beta",
    "c_bob",
    "c_eve",
    "c_secrecy",
    "c_bob_random",
    "c_eve_random",
    "c_secrecy_random",
    "objective_bob",
    "objective_eve",
    "an_to_noise_eve",
    "passes",
    "phase_bits",
)
FLOAT_FORMAT = "%.9g"


def records_to_frame(records: Sequence[SweepRecord], /) -> pd.DataFrame:
    """Convert sweep records to a table with the output columns."""
    rows = [
        (
            r.alpha,
            r.k_bob,
            r.beta,
            r.metrics.c_bob,
            r.metrics.c_eve,
            r.metrics.c_secrecy,
            r.baseline_metrics.c_bob,
            r.baseline_metrics.c_eve,
            r.baseline_metrics.c_secrecy,
            r.objective_bob,
            r.objective_eve,
            r.an_to_noise_eve,
            r.passes,
            r.phase_bits,
        )
        for r in records
    ]
    return pd.DataFrame(rows, columns=list(COLUMNS))


def write_sweep(
    records: Sequence[SweepRecord],
    path: StrPath,
    header: Mapping[str, Any],
    format: str = "csv",
) -> None:
    """Write sweep records to a CSV or JSON file.

    CSV files start with ``# key: value`` header lines followed by one
    row per cell. Floats have 9 significant digits in both formats.

    Args:
        records: Records in output order.
        path: Path of the output file.
        header: Metadata (version, seed, config hash, ...).
        format: ``"csv"`` or ``"json"``.

    Raises:
        ParameterError: Raised if the format is not known.
        OSError: Raised if the file cannot be written.

    """
    frame = records_to_frame(records)
    path = Path(path)

    if format == "csv":
        lines = "".join(f"# {key}: {value}\n" for key, value in header.items())
        body = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        path.write_text(lines + body, encoding="utf-8")
    elif format == "json":
        rows = [
            {key: compact(value) for key, value in row.items()}
            for row in frame.to_dict(orient="records")
        ]
        text = json.dumps({"header": dict(header), "records": rows}, indent=2)
        path.write_text(text + "\n", encoding="utf-8")
    else:
        raise ParameterError(f"output format must be csv or json: {format!r}")


def compact(value: Any, /) -> Any:
    """Round floats to 9 significant digits for JSON output."""
    if isinstance(value, float):
        return float(FLOAT_FORMAT % value)

    if hasattr(value, "item"):
        return compact(value.item())

    return value


def read_sweep(path: StrPath, /) -> pd.DataFrame:
    """Read a sweep output file (CSV or JSON) written by :func:`write_sweep`.

    Raises:
        ParameterError: Raised if the file is malformed or lacks columns.
        OSError: Raised if the file cannot be read.

    """
    path = Path(path)

    try:
        if path.suffix == ".json":
            data = json.loads(path.read_text(encoding="utf-8"))
            frame = pd.DataFrame(data["records"])
            frame["phase_bits"] = frame["phase_bits"].astype(str)
        else:
            frame = pd.read_csv(path, comment="#", dtype={"phase_bits": str})
    except (KeyError, TypeError, ValueError, pd.errors.ParserError) as error:
        raise ParameterError(f"malformed sweep file: {error}")

    if missing := set(COLUMNS) - set(frame.columns):
        raise ParameterError(f"malformed sweep file: missing {sorted(missing)}")

    if frame.empty:
        raise ParameterError("malformed sweep file: no rows")

    return frame
