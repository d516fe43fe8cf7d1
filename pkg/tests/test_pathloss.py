"""Propagation model checks against independent evaluations."""

import math

import numpy as np
import pytest

from d2dsim.domain import SPEED_OF_LIGHT, PathlossSpec
from d2dsim.pathloss import (
    FreeSpacePathloss,
    LogDistanceShadowingPathloss,
    build_pathloss_model,
    fspl,
    log_distance_shadowing,
    register_pathloss_model,
)


def fspl_oracle(freq_hz, distance_m, exponent=2.0):
    """Independent evaluation as a sum of dB terms instead of one log."""
    n = exponent
    return (
        10.0 * n * math.log10(4.0 * math.pi)
        + 10.0 * n * math.log10(freq_hz)
        + 10.0 * n * math.log10(distance_m)
        - 10.0 * n * math.log10(SPEED_OF_LIGHT)
    )


def test_fspl_zero_at_unit_log_argument():
    f = 2.1e9
    d = SPEED_OF_LIGHT / (4.0 * math.pi * f)  # ~0.011355 m
    assert fspl(f, d) == pytest.approx(0.0, abs=1e-9)


def test_fspl_reference_values():
    assert fspl(2.1e9, 100.0) == pytest.approx(fspl_oracle(2.1e9, 100.0), abs=1e-9)
    assert fspl(2.1e9, 100.0) == pytest.approx(78.89, abs=0.01)
    assert fspl(2.1e9, 1.0) == pytest.approx(38.89, abs=0.01)


def test_fspl_decade_slope_is_exactly_20n_db():
    assert fspl(2.1e9, 100.0) - fspl(2.1e9, 1.0) == pytest.approx(40.0, abs=1e-9)
    assert fspl(2.1e9, 1000.0, exponent=3.0) - fspl(2.1e9, 100.0, exponent=3.0) == pytest.approx(
        30.0, abs=1e-9
    )


def test_fspl_matches_oracle_on_randomized_inputs():
    rng = np.random.default_rng(1)
    for _ in range(25):
        f = float(rng.uniform(1e8, 1e11))
        d = float(rng.uniform(0.5, 5e3))
        n = float(rng.uniform(1.5, 4.0))
        assert fspl(f, d, n) == pytest.approx(fspl_oracle(f, d, n), abs=1e-9)


def test_fspl_monotonic_in_distance_and_frequency():
    rng = np.random.default_rng(2)
    for _ in range(20):
        f = float(rng.uniform(1e9, 6e9))
        d = float(rng.uniform(1.0, 400.0))
        assert fspl(f, d * 1.5) > fspl(f, d)
        assert fspl(f * 1.5, d) > fspl(f, d)


def test_fspl_domain_errors():
    with pytest.raises(ValueError):
        fspl(2.1e9, 0.0)
    with pytest.raises(ValueError):
        fspl(2.1e9, -5.0)
    with pytest.raises(ValueError):
        fspl(0.0, 10.0)


def test_log_distance_at_reference_equals_fspl():
    f = 2.1e9
    assert log_distance_shadowing(f, 1.0, 2.0, 0.0, 1.0) == pytest.approx(
        fspl(f, 1.0), abs=1e-12
    )
    assert log_distance_shadowing(f, 7.5, 3.1, 0.0, 7.5) == pytest.approx(
        fspl(f, 7.5), abs=1e-12
    )


def test_log_distance_collapses_to_fspl_for_n2_d0_1():
    f = 2.1e9
    rng = np.random.default_rng(3)
    for _ in range(20):
        d = float(rng.uniform(1.0, 2000.0))
        assert log_distance_shadowing(f, d, 2.0, 0.0, 1.0) == pytest.approx(
            fspl(f, d), abs=1e-9
        )


def test_log_distance_rejects_below_reference():
    with pytest.raises(ValueError):
        log_distance_shadowing(2.1e9, 0.5, 2.0, 0.0, 1.0)


def test_shadowing_statistics():
    f, d = 2.1e9, 100.0
    rng = np.random.default_rng(4)
    deterministic = log_distance_shadowing(f, d, 2.0, 0.0, 1.0)
    draws = np.array(
        [log_distance_shadowing(f, d, 2.0, 2.7, 1.0, rng) for _ in range(10_000)]
    )
    assert abs(draws.mean() - deterministic) < 0.15
    assert abs(draws.std(ddof=1) - 2.7) < 0.15


def test_shadowing_distribution_is_gaussian_shaped():
    # fraction of draws within 1 and 2 sigma of the mean
    f, d, sigma = 2.1e9, 50.0, 2.7
    rng = np.random.default_rng(5)
    center = log_distance_shadowing(f, d, 2.0, 0.0, 1.0)
    draws = np.array(
        [log_distance_shadowing(f, d, 2.0, sigma, 1.0, rng) for _ in range(10_000)]
    )
    within_1 = np.mean(np.abs(draws - center) < sigma)
    within_2 = np.mean(np.abs(draws - center) < 2 * sigma)
    assert abs(within_1 - 0.6827) < 0.02
    assert abs(within_2 - 0.9545) < 0.01


def test_same_seed_gives_identical_loss_sequence():
    model = LogDistanceShadowingPathloss(sigma_db=2.7)
    seq1 = [model.loss(2.1e9, 10.0 + i, np.random.default_rng(7)) for i in range(5)]
    seq2 = [model.loss(2.1e9, 10.0 + i, np.random.default_rng(7)) for i in range(5)]
    assert seq1 == seq2
    rng_a, rng_b = np.random.default_rng(8), np.random.default_rng(8)
    many_a = [model.loss(2.1e9, 20.0, rng_a) for _ in range(50)]
    many_b = [model.loss(2.1e9, 20.0, rng_b) for _ in range(50)]
    assert many_a == many_b


def test_sigma_zero_model_is_deterministic():
    model = LogDistanceShadowingPathloss(sigma_db=0.0)
    assert model.deterministic
    assert model.loss(2.1e9, 55.0) == model.loss(2.1e9, 55.0)
    assert FreeSpacePathloss().deterministic
    assert not LogDistanceShadowingPathloss(sigma_db=2.7).deterministic


def test_registry_builds_configured_models():
    free = build_pathloss_model(PathlossSpec(name="free_space", exponent=2.5))
    assert isinstance(free, FreeSpacePathloss) and free.exponent == 2.5
    lds = build_pathloss_model(PathlossSpec(sigma_db=1.5, ref_distance_m=2.0))
    assert isinstance(lds, LogDistanceShadowingPathloss)
    assert lds.sigma_db == 1.5 and lds.ref_distance_m == 2.0


def test_registry_supports_custom_models():
    class FlatLoss:
        deterministic = True

        def loss(self, freq_hz, distance_m, rng=None):
            return 60.0

    register_pathloss_model("flat_60db", lambda spec: FlatLoss())
    model = build_pathloss_model(PathlossSpec(name="flat_60db"))
    assert model.loss(2.1e9, 123.0) == 60.0
    with pytest.raises(ValueError, match="unknown pathloss model"):
        build_pathloss_model(PathlossSpec(name="does_not_exist"))
