"""Propagation loss models behind a single pluggable interface.

A model is any object with ``loss(freq_hz, distance_m, rng) -> dB`` and a
``deterministic`` attribute. Models are stateless; randomness comes only from
the caller-supplied generator, so independent streams give independent draws
and the same seed replays the same losses bit for bit.
"""

from __future__ import annotations

import math

import numpy as np

from .domain import FREE_SPACE, LOG_DISTANCE_SHADOWING, SPEED_OF_LIGHT, PathlossSpec


def fspl(freq_hz: float, distance_m: float, exponent: float = 2.0) -> float:
    """Free-space path loss in dB.

    Args:
        freq_hz: carrier frequency in Hz.
        distance_m: transmitter-receiver separation in meters.
        exponent: path loss exponent, 2.0 in free space.
    """
    if freq_hz <= 0.0:
        raise ValueError(f"frequency must be positive, got {freq_hz}")
    if distance_m <= 0.0:
        raise ValueError(f"distance must be positive, got {distance_m}")
    return 10.0 * exponent * math.log10(4.0 * math.pi * freq_hz * distance_m / SPEED_OF_LIGHT)


def log_distance_shadowing(
    freq_hz: float,
    distance_m: float,
    exponent: float,
    sigma_db: float,
    ref_distance_m: float,
    rng: np.random.Generator | None = None,
) -> float:
    """Log-distance path loss with log-normal shadowing, in dB.

    Free-space loss at the close-in reference distance, a 10*n*log10(d/d0)
    distance slope, plus a zero-mean Gaussian shadowing term of standard
    deviation ``sigma_db`` drawn from ``rng``. The reference term uses the
    free-space exponent 2; the slope uses the configured exponent.
    """
    if ref_distance_m <= 0.0:
        raise ValueError(f"reference distance must be positive, got {ref_distance_m}")
    if distance_m < ref_distance_m:
        raise ValueError(
            f"model undefined below the reference distance ({distance_m} < {ref_distance_m})"
        )
    if sigma_db < 0.0:
        raise ValueError(f"shadowing sigma must be >= 0, got {sigma_db}")
    loss = fspl(freq_hz, ref_distance_m, 2.0) + 10.0 * exponent * math.log10(
        distance_m / ref_distance_m
    )
    if sigma_db > 0.0:
        if rng is None:
            raise ValueError("sigma_db > 0 requires an rng for the shadowing draw")
        loss += rng.normal(0.0, sigma_db)
    return loss


class FreeSpacePathloss:
    """Deterministic free-space model."""

    deterministic = True

    def __init__(self, exponent: float = 2.0):
        self.exponent = exponent

    def loss(self, freq_hz: float, distance_m: float, rng=None) -> float:
        return fspl(freq_hz, distance_m, self.exponent)


class LogDistanceShadowingPathloss:
    """Log-distance slope with per-call Gaussian shadowing."""

    def __init__(self, exponent: float = 2.0, sigma_db: float = 2.7, ref_distance_m: float = 1.0):
        self.exponent = exponent
        self.sigma_db = sigma_db
        self.ref_distance_m = ref_distance_m

    @property
    def deterministic(self) -> bool:
        return self.sigma_db == 0.0

    def loss(self, freq_hz: float, distance_m: float, rng=None) -> float:
        return log_distance_shadowing(
            freq_hz, distance_m, self.exponent, self.sigma_db, self.ref_distance_m, rng
        )


# Registry so configs can select models (including user ones) by name.
_MODEL_FACTORIES = {
    FREE_SPACE: lambda spec: FreeSpacePathloss(exponent=spec.exponent),
    LOG_DISTANCE_SHADOWING: lambda spec: LogDistanceShadowingPathloss(
        exponent=spec.exponent, sigma_db=spec.sigma_db, ref_distance_m=spec.ref_distance_m
    ),
}


def register_pathloss_model(name: str, factory) -> None:
    """Register ``factory(spec: PathlossSpec) -> model`` under a config name."""
    _MODEL_FACTORIES[name] = factory


def build_pathloss_model(spec: PathlossSpec):
    try:
        factory = _MODEL_FACTORIES[spec.name]
    except KeyError:
        known = ", ".join(sorted(_MODEL_FACTORIES))
        raise ValueError(f"unknown pathloss model '{spec.name}' (registered: {known})") from None
    return factory(spec)
