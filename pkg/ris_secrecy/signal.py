__all__ = ["SignalFrame", "estimate_sinr", "simulate_received"]


# standard library
from dataclasses import dataclass
from typing import Literal


# dependencies
import numpy as np
from .cascade import PhaseConfig, all_gains
from .scene import ChannelSet, SystemParams
from .utils import (
    SINR_CLAMP_DB,
    ComplexArray,
    FloatArray,
    ParameterError,
    SeedLike,
)


# type hints
Waveform = Literal["gaussian", "qpsk"]


@dataclass(frozen=True, eq=False)
class SignalFrame:
    """Sample-level transmit and received signals of one frame."""

    s_samples: ComplexArray
    """Unit-power communication symbols."""

    a_samples: ComplexArray
    """Unit-power artificial-noise symbols."""

    y_bob: ComplexArray
    """Received samples at Bob."""

    y_eve: ComplexArray
    """Received samples at Eve."""

    sample_rate: float
    """Sampling rate (Hz)."""

    @property
    def sample_count(self) -> int:
        """Number of samples in the frame."""
        return len(self.s_samples)

    @property
    def time(self) -> FloatArray:
        """Sample timestamps (s)."""
        return np.arange(self.sample_count) / self.sample_rate


def unit_symbols(
    rng: np.random.Generator,
    count: int,
    waveform: Waveform,
) -> ComplexArray:
    """Draw unit-power circularly-symmetric symbols."""
    if waveform == "qpsk":
        bits = rng.integers(0, 2, size=(2, count))
        return ((1 - 2 * bits[0]) + 1j * (1 - 2 * bits[1])) / np.sqrt(2)

    return (rng.standard_normal(count) + 1j * rng.standard_normal(count)) / np.sqrt(2)


def simulate_received(
    channels: ChannelSet,
    config: PhaseConfig,
    alpha: float,
    params: SystemParams,
    sample_count: int,
    seed: SeedLike,
    waveform: Waveform = "gaussian",
) -> SignalFrame:
    """Simulate the received signals at Bob and Eve.

    ``y_u = sqrt(alpha P) G_su s + sqrt((1 - alpha) P) G_au a + n_u``
    with ``n_u`` circularly-symmetric Gaussian of variance ``sigma_u^2``.

    Args:
        channels: Channel coefficients.
        config: Phase configuration.
        alpha: Fraction of the total power given to the CS.
        params: System parameters.
        sample_count: Number of samples.
        seed: Seed of the random generator.
        waveform: Symbol distribution of ``s`` and ``a``.

    Returns:
        Frame with the transmit symbols and the received samples.

    Raises:
        ParameterError: Raised if ``sample_count`` is not positive
            or ``alpha`` is not within ``[0, 1]``.

    """
    if sample_count < 1:
        raise ParameterError("sample_count must be positive")

    if not 0.0 <= alpha <= 1.0:
        raise ParameterError(f"alpha must be within [0, 1]: {alpha!r}")

    rng = np.random.default_rng(seed)
    s = unit_symbols(rng, sample_count, waveform)
    a = unit_symbols(rng, sample_count, waveform)
    gains = all_gains(channels, config)
    amp_cs = np.sqrt(alpha * params.total_power)
    amp_an = np.sqrt((1.0 - alpha) * params.total_power)

    def receive(g_cs: complex, g_an: complex, noise_power: float) -> ComplexArray:
        noise = unit_symbols(rng, sample_count, "gaussian") * np.sqrt(noise_power)
        return amp_cs * g_cs * s + amp_an * g_an * a + noise

    return SignalFrame(
        s_samples=s,
        a_samples=a,
        y_bob=receive(gains.g_sb, gains.g_ab, params.noise_power_bob),
        y_eve=receive(gains.g_se, gains.g_ae, params.noise_power_eve),
        sample_rate=params.sample_rate,
    )


def estimate_sinr(frame: SignalFrame) -> tuple[float, float]:
    """Estimate the SINRs of a frame with genie-aided separation.

    Each received signal is projected onto the known CS symbols. The
    projection gives the signal power and the residual gives the
    interference-plus-noise power. Estimates are clamped at +150 dB.

    Args:
        frame: Simulated frame with known transmit symbols.

    Returns:
        Tuple of the empirical linear SINRs at Bob and Eve.

    Raises:
        ParameterError: Raised if a received signal or the CS
            symbols have zero power.

    """
    s = frame.s_samples
    s_power = float(np.mean(np.abs(s) ** 2))

    if s_power == 0.0:
        raise ParameterError("degenerate frame: zero-power CS symbols")

    clamp = 10 ** (SINR_CLAMP_DB / 10)
    estimates: list[float] = []

    for name, y in (("y_bob", frame.y_bob), ("y_eve", frame.y_eve)):
        if not np.any(np.abs(y) > 0):
            raise ParameterError(f"degenerate frame: zero-power {name}")

        coefficient = np.vdot(s, y) / np.vdot(s, s)
        signal = abs(coefficient) ** 2 * s_power
        residual = float(np.mean(np.abs(y - coefficient * s) ** 2))

        if residual == 0.0 or signal / residual > clamp:
            estimates.append(clamp)
        else:
            estimates.append(signal / residual)

    return estimates[0], estimates[1]
