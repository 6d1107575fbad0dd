__all__ = [
    "CascadeGains",
    "PartitionSum",
    "PhaseConfig",
    "all_gains",
    "cascaded_gain",
    "partition_gains",
]


# standard library
from dataclasses import dataclass, field
from typing import Any


# dependencies
import numpy as np
from numpy.typing import ArrayLike
from typing_extensions import Self
from .scene import ChannelSet
from .utils import BoolArray, ComplexArray, FloatArray, ParameterError, ShapeError


@dataclass(frozen=True, eq=False)
class PhaseConfig:
    """Binary RIS phases and the Bob/Eve partition size.

    ``theta[n]`` is ``False`` for a phase of 0 and ``True`` for a
    phase of pi. Elements ``0..k_bob-1`` form the Bob-oriented set
    and the rest the Eve-oriented set.

    Raises:
        ParameterError: Raised if ``k_bob`` is not within ``[0, N]``.

    """

    theta: BoolArray
    """Binary phase states (``True`` for pi)."""

    k_bob: int
    """Number of Bob-oriented elements K_b."""

    def __post_init__(self) -> None:
        theta = np.array(self.theta, dtype=bool).reshape(-1)
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

        if not 0 <= self.k_bob <= len(theta):
            raise ParameterError(f"k_bob out of range: {self.k_bob} for N={len(theta)}")

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, PhaseConfig):
            return NotImplemented

        return self.k_bob == other.k_bob and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.k_bob, self.bits))

    @classmethod
    def zeros(cls, n: int, k_bob: int) -> Self:
        """Create a configuration with all phases at 0."""
        return cls(np.zeros(n, dtype=bool), k_bob)

    @classmethod
    def from_bits(cls, bits: str, k_bob: int) -> Self:
        """Create a configuration from a bitstring ('1' for pi).

        Raises:
            ParameterError: Raised if the bitstring has other characters.

        """
        if set(bits) - {"0", "1"}:
            raise ParameterError(f"phase bits must be 0/1: {bits!r}")

        return cls(np.array([char == "1" for char in bits], dtype=bool), k_bob)

    @property
    def bits(self) -> str:
        """Bitstring of the phases in element order."""
        return "".join("1" if state else "0" for state in self.theta)

    @property
    def n_elements(self) -> int:
        """Number of RIS elements N."""
        return len(self.theta)

    @property
    def beta(self) -> float:
        """Element allocation ratio K_b / N."""
        return self.k_bob / self.n_elements if self.n_elements else 0.0

    @property
    def signs(self) -> FloatArray:
        """Reflection coefficients exp(-j theta) as real signs."""
        return np.where(self.theta, -1.0, 1.0)


@dataclass(frozen=True)
class CascadeGains:
    """Effective cascaded gains G_{p,u} for p in {s, a} and u in {b, e}."""

    g_sb: complex
    """CS transmitter to Bob."""

    g_se: complex
    """CS transmitter to Eve."""

    g_ab: complex
    """AN transmitter to Bob."""

    g_ae: complex
    """AN transmitter to Eve."""

    def __post_init__(self) -> None:
        for name in ("g_sb", "g_se", "g_ab", "g_ae"):
            if not np.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")


def partition_gains(
    h_tx: ArrayLike,
    config: PhaseConfig,
    h_rx: ArrayLike,
) -> tuple[complex, complex]:
    """Return the Bob- and Eve-partition contributions of a cascaded gain.

    Args:
        h_tx: Transmitter-to-element coefficients.
        config: Phase configuration.
        h_rx: Element-to-receiver coefficients.

    Returns:
        Tuple of ``(G_b, G_e)``, the sums over ``0..k_bob-1``
        and ``k_bob..N-1`` respectively.

    Raises:
        ShapeError: Raised if the vector lengths do not match.

    """
    terms = cascade_terms(h_tx, h_rx, config.n_elements) * config.signs
    k = config.k_bob
    return complex(terms[:k].sum()), complex(terms[k:].sum())


def cascaded_gain(h_tx: ArrayLike, config: PhaseConfig, h_rx: ArrayLike) -> complex:
    """Return the cascaded gain summed over all RIS elements.

    Args:
        h_tx: Transmitter-to-element coefficients.
        config: Phase configuration.
        h_rx: Element-to-receiver coefficients.

    Returns:
        Sum of the two partition contributions.

    Raises:
        ShapeError: Raised if the vector lengths do not match.

    """
    g_bob, g_eve = partition_gains(h_tx, config, h_rx)
    return g_bob + g_eve


def all_gains(channels: ChannelSet, config: PhaseConfig) -> CascadeGains:
    """Return the four cascaded gains under one phase configuration.

    Raises:
        ShapeError: Raised if the vector lengths do not match.

    """
    return CascadeGains(
        g_sb=cascaded_gain(channels.h_s_ris, config, channels.h_ris_bob),
        g_se=cascaded_gain(channels.h_s_ris, config, channels.h_ris_eve),
        g_ab=cascaded_gain(channels.h_a_ris, config, channels.h_ris_bob),
        g_ae=cascaded_gain(channels.h_a_ris, config, channels.h_ris_eve),
    )


def cascade_terms(h_tx: ArrayLike, h_rx: ArrayLike, n: int, /) -> ComplexArray:
    """Return the element-wise products ``h_tx * h_rx`` of length ``n``.

    Raises:
        ShapeError: Raised if the vector lengths do not match ``n``.

    """
    tx = np.asarray(h_tx, dtype=np.complex128).reshape(-1)
    rx = np.asarray(h_rx, dtype=np.complex128).reshape(-1)

    if not len(tx) == len(rx) == n:
        raise ShapeError(f"length mismatch: {len(tx)}, {len(rx)} vs N={n}")

    return tx * rx


@dataclass
class PartitionSum:
    """Running sum of signed cascade terms over an index range.

    A flip of element ``n`` changes the sum by ``-2 * sign[n] * term[n]``.

    Args:
        terms: Cascade terms of all N elements.
        signs: Signs of all N elements (a working copy is kept).
        start: First index of the range.
        stop: One past the last index of the range.

    """

    terms: ComplexArray
    signs: FloatArray
    start: int
    stop: int
    value: complex = field(init=False)

    def __post_init__(self) -> None:
        self.signs = np.array(self.signs, dtype=float)
        self.value = self.recompute()

    @property
    def power(self) -> float:
        """Squared magnitude of the running sum."""
        return abs(self.value) ** 2

    def flipped(self, n: int, /) -> complex:
        """Return the sum that flipping element ``n`` would give."""
        if not self.start <= n < self.stop:
            return self.value

        return complex(self.value - 2 * self.signs[n] * self.terms[n])

    def flip(self, n: int, /) -> None:
        """Flip element ``n`` (the sum changes only within the range)."""
        self.value = self.flipped(n)
        self.signs[n] = -self.signs[n]

    def recompute(self) -> complex:
        """Return the sum recomputed from scratch."""
        window = slice(self.start, self.stop)
        return complex((self.signs[window] * self.terms[window]).sum())
