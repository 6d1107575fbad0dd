__all__ = [
    "ChannelSet",
    "Scene",
    "SystemParams",
    "element_gain",
    "element_positions",
    "generate_channels",
    "path_coefficient",
]


# standard library
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Union


# dependencies
import numpy as np
from numpy.typing import ArrayLike
from .units import wavelength
from .utils import (
    ComplexArray,
    FloatArray,
    GeometryError,
    ParameterError,
    SeedLike,
    ShapeError,
    ensure_finite,
)


# type hints
Vector = tuple[float, float, float]
Complex = Union[complex, ComplexArray]
Gain = Union[float, FloatArray]


# constants
VERTICAL = np.array([0.0, 0.0, 1.0])


def as_vector(name: str, value: ArrayLike, /) -> Vector:
    """Validate and convert a 3-vector to a tuple of floats."""
    array = np.asarray(value, dtype=float)

    if array.shape != (3,) or not np.all(np.isfinite(array)):
        raise GeometryError(f"{name} must be a finite 3-vector: {value!r}")

    return (float(array[0]), float(array[1]), float(array[2]))


@dataclass(frozen=True)
class Scene:
    """Geometric placement of transmitters, RIS and receivers.

    Positions are in meters. The RIS is a planar grid of
    ``ris_rows x ris_cols`` elements centered at ``ris_center``
    and facing ``ris_normal``.

    Raises:
        GeometryError: Raised if the grid is empty, a spacing is not
            positive, the normal is zero, or a terminal coincides with
            an RIS element.

    """

    cs_tx_pos: Vector
    """Position of the communication-signal transmitter."""

    an_tx_pos: Vector
    """Position of the artificial-noise transmitter."""

    ris_center: Vector
    """Center of the RIS panel."""

    ris_rows: int
    """Number of element rows."""

    ris_cols: int
    """Number of element columns."""

    element_spacing_row: float
    """Distance between adjacent rows."""

    element_spacing_col: float
    """Distance between adjacent columns."""

    bob_pos: Vector
    """Position of the legitimate receiver."""

    eve_pos: Vector
    """Position of the eavesdropper."""

    ris_normal: Vector = (1.0, 0.0, 0.0)
    """Unit normal of the RIS panel (normalized on construction)."""

    def __post_init__(self) -> None:
        for name in ("cs_tx_pos", "an_tx_pos", "ris_center", "bob_pos", "eve_pos"):
            object.__setattr__(self, name, as_vector(name, getattr(self, name)))

        normal = np.asarray(as_vector("ris_normal", self.ris_normal))

        if (norm := float(np.linalg.norm(normal))) == 0.0:
            raise GeometryError("ris_normal must be non-zero")

        object.__setattr__(self, "ris_normal", as_vector("ris_normal", normal / norm))

        if self.ris_rows < 1 or self.ris_cols < 1:
            raise GeometryError("RIS grid must have at least one element")

        if not (self.element_spacing_row > 0 and self.element_spacing_col > 0):
            raise GeometryError("element spacings must be positive")

        positions = element_positions(self)

        for name in ("cs_tx_pos", "an_tx_pos", "bob_pos", "eve_pos"):
            dist = np.linalg.norm(positions - np.asarray(getattr(self, name)), axis=1)

            if np.any(dist <= 0.0):
                raise GeometryError(f"degenerate geometry: {name} on an RIS element")

    @property
    def n_elements(self) -> int:
        """Total number of RIS elements."""
        return self.ris_rows * self.ris_cols


@dataclass(frozen=True)
class SystemParams:
    """Link-budget parameters in linear units.

    Raises:
        ParameterError: Raised if a power, gain or frequency is not
            strictly positive, or the cosine exponent is negative.

    """

    carrier_freq: float
    """Carrier frequency (Hz)."""

    total_power: float
    """Total transmit power P_t (W)."""

    tx_antenna_gain: float
    """Transmit horn gain G_t (linear)."""

    noise_power_bob: float
    """Noise power at Bob (W)."""

    noise_power_eve: float
    """Noise power at Eve (W)."""

    cosine_exponent: float = 1.0
    """Exponent q of the cos^(2q) element pattern."""

    sample_rate: float = 0.5e6
    """Sampling rate (Hz) used to timestamp simulated frames."""

    def __post_init__(self) -> None:
        for name in (
            "carrier_freq",
            "total_power",
            "tx_antenna_gain",
            "noise_power_bob",
            "noise_power_eve",
            "sample_rate",
        ):
            if ensure_finite(name, getattr(self, name)) <= 0:
                raise ParameterError(f"{name} must be positive")

        if ensure_finite("cosine_exponent", self.cosine_exponent) < 0:
            raise ParameterError("cosine_exponent must be non-negative")

    @property
    def wavelength(self) -> float:
        """Free-space wavelength (m) of the carrier."""
        return wavelength(self.carrier_freq)


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """Element-wise channel coefficients of the four cascaded links.

    Raises:
        ShapeError: Raised if the vectors differ in length or are not 1D.
        ParameterError: Raised if any coefficient is not finite.

    """

    h_s_ris: ComplexArray
    """CS transmitter to each RIS element."""

    h_a_ris: ComplexArray
    """AN transmitter to each RIS element."""

    h_ris_bob: ComplexArray
    """Each RIS element to Bob."""

    h_ris_eve: ComplexArray
    """Each RIS element to Eve."""

    n_elements: int = field(init=False)
    """Number of RIS elements N."""

    def __post_init__(self) -> None:
        names = ("h_s_ris", "h_a_ris", "h_ris_bob", "h_ris_eve")

        for name in names:
            array = np.array(getattr(self, name), dtype=np.complex128)

            if array.ndim != 1:
                raise ShapeError(f"{name} must be a 1D vector")

            if not np.all(np.isfinite(array)):
                raise ParameterError(f"{name} must be finite")

            array.setflags(write=False)
            object.__setattr__(self, name, array)

        if len({len(getattr(self, name)) for name in names}) != 1:
            raise ShapeError("channel vectors must have identical lengths")

        object.__setattr__(self, "n_elements", len(self.h_s_ris))

    def permuted(self, order: Sequence[int], /) -> "ChannelSet":
        """Return the channels with RIS elements re-enumerated.

        Element ``n`` of the result is element ``order[n]`` of the input.

        Raises:
            ShapeError: Raised if ``order`` is not a permutation of 0..N-1.

        """
        index = np.asarray(order, dtype=int)

        if sorted(index.tolist()) != list(range(self.n_elements)):
            raise ShapeError(f"not a permutation of {self.n_elements} elements")

        return ChannelSet(
            h_s_ris=self.h_s_ris[index],
            h_a_ris=self.h_a_ris[index],
            h_ris_bob=self.h_ris_bob[index],
            h_ris_eve=self.h_ris_eve[index],
        )

    def perturbed(self, seed: SeedLike, /, spread: float = 1.0) -> "ChannelSet":
        """Return the channels with seeded random per-element perturbations.

        Each coefficient is rotated by a uniform phase in
        ``[-spread * pi, spread * pi)`` and scaled by a log-normal
        amplitude factor with ``spread`` as its natural-log deviation.

        Args:
            seed: Seed of the random generator.
            spread: Perturbation strength (0 returns identical channels).

        Returns:
            Perturbed channels.

        """
        rng = np.random.default_rng(seed)
        shape = (4, self.n_elements)
        phase = rng.uniform(-np.pi, np.pi, shape) * spread
        scale = np.exp(rng.normal(0.0, 1.0, shape) * spread)
        factor = scale * np.exp(1j * phase)

        return ChannelSet(
            h_s_ris=self.h_s_ris * factor[0],
            h_a_ris=self.h_a_ris * factor[1],
            h_ris_bob=self.h_ris_bob * factor[2],
            h_ris_eve=self.h_ris_eve * factor[3],
        )


def element_positions(scene: Scene, /) -> FloatArray:
    """Return the RIS element positions in row-major order.

    The panel lies in the plane orthogonal to ``ris_normal``.
    Columns run horizontally (orthogonal to the normal and the
    vertical axis) and rows run vertically, row 0 being the top row.

    Args:
        scene: Scene with the RIS description.

    Returns:
        Array of shape ``(N, 3)`` of positions in meters.

    """
    normal = np.asarray(scene.ris_normal)
    reference = VERTICAL if abs(normal @ VERTICAL) < 1.0 - 1e-9 else np.eye(3)[1]
    horizontal = np.cross(reference, normal)
    horizontal /= np.linalg.norm(horizontal)
    vertical = np.cross(normal, horizontal)

    rows = np.arange(scene.ris_rows)
    cols = np.arange(scene.ris_cols)
    row_offset = ((scene.ris_rows - 1) / 2 - rows) * scene.element_spacing_row
    col_offset = (cols - (scene.ris_cols - 1) / 2) * scene.element_spacing_col

    offsets = (
        row_offset[:, None, None] * vertical
        + col_offset[None, :, None] * horizontal
    ).reshape(-1, 3)

    return np.asarray(scene.ris_center) + offsets


def path_coefficient(
    tx_pos: ArrayLike,
    rx_pos: ArrayLike,
    params: SystemParams,
    tx_gain: Gain = 1.0,
    rx_gain: Gain = 1.0,
) -> Complex:
    """Return the free-space coefficient of a line-of-sight path.

    The amplitude is ``lambda / (4 pi d) * sqrt(tx_gain * rx_gain)``
    and the phase is ``-2 pi d / lambda``. Positions of shape ``(..., 3)``
    are broadcast against each other.

    Args:
        tx_pos: Transmitter position(s) in meters.
        rx_pos: Receiver position(s) in meters.
        params: System parameters (for the wavelength).
        tx_gain: Linear power gain of the transmit side.
        rx_gain: Linear power gain of the receive side.

    Returns:
        Complex coefficient (an array for broadcast positions).

    Raises:
        GeometryError: Raised if any distance is zero.

    """
    dist = np.linalg.norm(np.asarray(tx_pos, float) - np.asarray(rx_pos, float), axis=-1)

    if np.any(dist <= 0.0):
        raise GeometryError("degenerate geometry: zero path distance")

    lam = params.wavelength
    amplitude = lam / (4 * np.pi * dist) * np.sqrt(np.asarray(tx_gain) * rx_gain)
    coefficient = amplitude * np.exp(-2j * np.pi * np.mod(dist / lam, 1.0))

    if np.ndim(coefficient) == 0:
        return complex(coefficient)

    return np.asarray(coefficient, dtype=np.complex128)


def element_gain(
    direction: ArrayLike,
    surface_normal: ArrayLike,
    exponent: float = 1.0,
) -> Gain:
    """Return the cosine-pattern power gain toward a direction.

    The gain is ``max(0, cos(psi)) ** (2 * exponent)`` where ``psi`` is
    the angle between ``direction`` and ``surface_normal``. Directions of
    shape ``(..., 3)`` are evaluated element-wise.

    Args:
        direction: Unit vector(s) of the departure or arrival direction.
        surface_normal: Unit vector of the boresight.
        exponent: Cosine exponent q.

    Returns:
        Power gain in ``[0, 1]``.

    """
    cosine = np.asarray(direction, float) @ np.asarray(surface_normal, float)
    gain = np.clip(cosine, 0.0, 1.0) ** (2 * exponent)

    if np.ndim(gain) == 0:
        return float(gain)

    return np.asarray(gain, dtype=np.float64)


def generate_channels(scene: Scene, params: SystemParams, /) -> ChannelSet:
    """Generate the deterministic free-space channels of a scene.

    Each transmitter is a horn of gain ``G_t`` with a cosine pattern
    aimed at the RIS center. Each RIS element has a cosine pattern
    about ``ris_normal`` on both the incident and the reflected side.
    Receivers have unit gain.

    Args:
        scene: Scene geometry.
        params: System parameters.

    Returns:
        Channel coefficients of the four cascaded links.

    Raises:
        GeometryError: Raised if any path has zero length.

    """
    positions = element_positions(scene)
    normal = np.asarray(scene.ris_normal)
    q = params.cosine_exponent

    def unit(vectors: FloatArray) -> FloatArray:
        return vectors / np.linalg.norm(vectors, axis=-1, keepdims=True)

    def from_tx(tx_pos: Vector) -> ComplexArray:
        tx = np.asarray(tx_pos)
        boresight = unit(np.asarray(scene.ris_center) - tx)
        tx_gain = params.tx_antenna_gain * element_gain(unit(positions - tx), boresight, q)
        rx_gain = element_gain(unit(tx - positions), normal, q)
        return np.asarray(path_coefficient(tx, positions, params, tx_gain, rx_gain))

    def to_rx(rx_pos: Vector) -> ComplexArray:
        rx = np.asarray(rx_pos)
        tx_gain = element_gain(unit(rx - positions), normal, q)
        return np.asarray(path_coefficient(positions, rx, params, tx_gain, 1.0))

    for name in ("cs_tx_pos", "an_tx_pos"):
        if getattr(scene, name) == scene.ris_center:
            raise GeometryError(f"degenerate geometry: {name} at the RIS center")

    return ChannelSet(
        h_s_ris=from_tx(scene.cs_tx_pos),
        h_a_ris=from_tx(scene.an_tx_pos),
        h_ris_bob=to_rx(scene.bob_pos),
        h_ris_eve=to_rx(scene.eve_pos),
    )
