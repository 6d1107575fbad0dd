__all__ = [
    "LinkMetrics",
    "capacity",
    "evaluate",
    "evaluate_gains",
    "secrecy_capacity",
    "secrecy_gap",
    "sinr",
]


# standard library
from dataclasses import dataclass


# dependencies
import numpy as np
from .cascade import CascadeGains, PhaseConfig, all_gains
from .scene import ChannelSet, SystemParams
from .utils import InvariantError, ParameterError, ensure_finite


@dataclass(frozen=True)
class LinkMetrics:
    """SINRs and capacities (bits/s/Hz) of Bob's and Eve's links.

    Raises:
        InvariantError: Raised if a field is negative or not finite, or
            ``c_secrecy`` is not the clamped capacity difference.

    """

    sinr_bob: float
    sinr_eve: float
    c_bob: float
    c_eve: float
    c_secrecy: float

    def __post_init__(self) -> None:
        for name, value in vars(self).items():
            if not (np.isfinite(value) and value >= 0):
                raise InvariantError(f"{name} must be finite and non-negative")

        if self.c_secrecy != secrecy_capacity(self.c_bob, self.c_eve):
            raise InvariantError("c_secrecy must equal max(c_bob - c_eve, 0)")


def sinr(
    alpha: float,
    total_power: float,
    g_signal: complex,
    g_noise: complex,
    noise_power: float,
) -> float:
    """Return the SINR of a receiver under CS and AN transmission.

    ``alpha * P |G_s|^2 / ((1 - alpha) * P |G_a|^2 + sigma^2)``.

    Args:
        alpha: Fraction of the total power given to the CS.
        total_power: Total transmit power P (W).
        g_signal: Cascaded gain of the CS link.
        g_noise: Cascaded gain of the AN link.
        noise_power: Receiver noise power sigma^2 (W).

    Returns:
        Linear SINR.

    Raises:
        ParameterError: Raised if ``alpha`` is not within ``[0, 1]``
            or a power is not strictly positive.

    """
    if not 0.0 <= ensure_finite("alpha", alpha) <= 1.0:
        raise ParameterError(f"alpha must be within [0, 1]: {alpha!r}")

    if ensure_finite("total_power", total_power) <= 0:
        raise ParameterError("total_power must be positive")

    if ensure_finite("noise_power", noise_power) <= 0:
        raise ParameterError("noise_power must be positive")

    signal = alpha * total_power * abs(g_signal) ** 2
    interference = (1.0 - alpha) * total_power * abs(g_noise) ** 2
    return signal / (interference + noise_power)


def capacity(gamma: float) -> float:
    """Return the achievable capacity ``log2(1 + gamma)`` in bits/s/Hz.

    Raises:
        ParameterError: Raised if ``gamma`` is negative.

    """
    if ensure_finite("gamma", gamma) < 0:
        raise ParameterError(f"gamma must be non-negative: {gamma!r}")

    return float(np.log2(1.0 + gamma))


def secrecy_capacity(c_bob: float, c_eve: float) -> float:
    """Return the secrecy capacity ``max(c_bob - c_eve, 0)``."""
    return max(c_bob - c_eve, 0.0)


def secrecy_gap(metrics: LinkMetrics, /) -> float:
    """Return the signed capacity separation ``c_bob - c_eve``."""
    return metrics.c_bob - metrics.c_eve


def evaluate_gains(
    gains: CascadeGains,
    alpha: float,
    params: SystemParams,
) -> LinkMetrics:
    """Return the link metrics for precomputed cascaded gains.

    Raises:
        ParameterError: Raised if ``alpha`` is not within ``[0, 1]``.

    """
    p = params.total_power
    sinr_bob = sinr(alpha, p, gains.g_sb, gains.g_ab, params.noise_power_bob)
    sinr_eve = sinr(alpha, p, gains.g_se, gains.g_ae, params.noise_power_eve)
    c_bob, c_eve = capacity(sinr_bob), capacity(sinr_eve)

    return LinkMetrics(
        sinr_bob=sinr_bob,
        sinr_eve=sinr_eve,
        c_bob=c_bob,
        c_eve=c_eve,
        c_secrecy=secrecy_capacity(c_bob, c_eve),
    )


def evaluate(
    channels: ChannelSet,
    config: PhaseConfig,
    alpha: float,
    params: SystemParams,
) -> LinkMetrics:
    """Return the link metrics of a phase configuration.

    Bob's SINR uses ``(g_sb, g_ab, noise_power_bob)`` and
    Eve's SINR uses ``(g_se, g_ae, noise_power_eve)``.

    Args:
        channels: Channel coefficients.
        config: Phase configuration.
        alpha: Fraction of the total power given to the CS.
        params: System parameters.

    Returns:
        SINRs, capacities and the secrecy capacity.

    Raises:
        ParameterError: Raised if ``alpha`` is not within ``[0, 1]``.
        ShapeError: Raised if the vector lengths do not match.

    """
    return evaluate_gains(all_gains(channels, config), alpha, params)
