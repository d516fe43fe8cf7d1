"""Acceptance suite: one test per release criterion, one line printed each.

Run under pytest, or standalone for a compact report:

    python3 tests/test_acceptance.py
"""

import json
import math
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from d2dsim.agents import GreedyDistancePolicy, OraclePolicy, RandomPolicy, exhaustive_oracle, make_policy
from d2dsim.cli import run_experiment
from d2dsim.domain import (
    Action,
    Device,
    DeviceId,
    DeviceKind,
    Mode,
    PathlossSpec,
    Position,
    RfParams,
    default_scenario,
)
from d2dsim.env import D2DEnv
from d2dsim.linkbudget import (
    capacity_mbps,
    compute_step_reports,
    eirp,
    rx_power,
    sinr_db,
)
from d2dsim.pathloss import fspl, log_distance_shadowing

from scenarios import two_pair_offload_sim

BASELINE_REFERENCE_MBPS = 94.75


def _report(name: str, detail: str) -> None:
    print(f"[PASS] {name}: {detail}")


# -- criterion 1: formula oracles -------------------------------------------------


def test_formula_oracles():
    rng = np.random.default_rng(1001)
    checks = 0

    # fspl vs dB-sum decomposition
    for _ in range(25):
        f = float(rng.uniform(1e8, 1e11))
        d = float(rng.uniform(0.5, 5e3))
        n = float(rng.uniform(1.5, 4.0))
        expected = (
            10 * n * math.log10(4 * math.pi) + 10 * n * math.log10(f)
            + 10 * n * math.log10(d) - 10 * n * math.log10(299792458.0)
        )
        assert abs(fspl(f, d, n) - expected) < 1e-9
        checks += 1

    # log-distance (sigma=0) vs reference + slope decomposition
    for _ in range(25):
        f = float(rng.uniform(1e9, 6e9))
        d0 = float(rng.uniform(0.5, 10.0))
        d = d0 * float(rng.uniform(1.0, 500.0))
        n = float(rng.uniform(1.5, 4.0))
        expected = fspl(f, d0, 2.0) + 10 * n * (math.log10(d) - math.log10(d0))
        assert abs(log_distance_shadowing(f, d, n, 0.0, d0) - expected) < 1e-9
        checks += 1

    # eirp, both device classes
    for _ in range(25):
        p = float(rng.uniform(-10, 46))
        s = int(rng.integers(1, 64))
        g, l_ix, l_bd = (float(rng.uniform(0, 20)), float(rng.uniform(0, 6)),
                         float(rng.uniform(0, 6)))
        l_cb, g_amp = float(rng.uniform(0, 4)), float(rng.uniform(0, 10))
        ue_dev = Device(DeviceId(DeviceKind.D2D_TX, 0), Position(0, 0), RfParams(
            tx_power_dbm=p, num_subcarriers=s, antenna_gain_dbi=g,
            interference_margin_db=l_ix, body_loss_db=l_bd))
        assert abs(eirp(ue_dev) - (p - 10 * math.log10(s) + g - l_ix - l_bd)) < 1e-9
        bs_dev = Device(DeviceId(DeviceKind.BASE_STATION, 0), Position(0, 0), RfParams(
            tx_power_dbm=p, num_subcarriers=s, antenna_gain_dbi=g,
            interference_margin_db=l_ix, cable_loss_db=l_cb, amplifier_gain_db=g_amp))
        assert abs(eirp(bs_dev) - (p - 10 * math.log10(s) + g - l_ix - l_cb + g_amp)) < 1e-9
        checks += 2

    # rx_power via independent eirp + receive chain
    for _ in range(25):
        p = float(rng.uniform(0, 23))
        s = int(rng.integers(1, 16))
        pl = float(rng.uniform(40, 130))
        g_rx, l_bd_rx = float(rng.uniform(0, 10)), float(rng.uniform(0, 5))
        tx = Device(DeviceId(DeviceKind.CELLULAR_UE, 0), Position(0, 0), RfParams(
            tx_power_dbm=p, num_subcarriers=s, antenna_gain_dbi=0.0,
            interference_margin_db=3.0, body_loss_db=3.0))
        rx = Device(DeviceId(DeviceKind.D2D_RX, 0), Position(0, 0), RfParams(
            tx_power_dbm=0.0, antenna_gain_dbi=g_rx, body_loss_db=l_bd_rx))
        expected = (p - 10 * math.log10(s) - 3 - 3) - pl + (g_rx - l_bd_rx)
        assert abs(rx_power(tx, rx, p, pl) - expected) < 1e-9
        checks += 1

    # sinr vs linear milliwatt arithmetic
    for _ in range(25):
        signal = float(rng.uniform(-120, -40))
        interferers = [float(rng.uniform(-130, -60)) for _ in range(int(rng.integers(0, 6)))]
        noise = float(rng.uniform(-130, -90))
        denom = sum(10 ** (x / 10) for x in interferers) + 10 ** (noise / 10)
        expected = 10 * math.log10(10 ** (signal / 10) / denom)
        assert abs(sinr_db(signal, interferers, noise) - expected) < 1e-9
        checks += 1

    # capacity vs log2 evaluation, and exact linearity in bandwidth
    for _ in range(25):
        s_db = float(rng.uniform(-30, 60))
        b = float(rng.uniform(0.05, 20.0))
        expected = b * math.log2(1 + 10 ** (s_db / 10))
        assert abs(capacity_mbps(s_db, b) - expected) < 1e-9
        checks += 1

    _report("formula-oracles", f"{checks} randomized checks within 1e-9")


# -- criterion 2: shadowing statistics ---------------------------------------------


def test_shadowing_statistics():
    rng = np.random.default_rng(1002)
    f, d, sigma = 2.1e9, 100.0, 2.7
    deterministic = log_distance_shadowing(f, d, 2.0, 0.0, 1.0)
    draws = np.array([
        log_distance_shadowing(f, d, 2.0, sigma, 1.0, rng) for _ in range(10_000)
    ])
    mean_err = abs(draws.mean() - deterministic)
    sd_err = abs(draws.std(ddof=1) - sigma)
    assert mean_err < 0.15, f"sample mean off by {mean_err:.3f} dB"
    assert sd_err < 0.15, f"sample sd off by {sd_err:.3f} dB"
    _report("shadowing-statistics",
            f"10^4 draws: mean err {mean_err:.3f} dB, sd err {sd_err:.3f} dB")


# -- criterion 3: two-pair offload choice ------------------------------------------


def test_two_pair_offload_choice():
    sim = two_pair_offload_sim()
    assignment, total = exhaustive_oracle(sim, [20.0])
    assert assignment[1][0] == 0, "distant pair must share the cue's rb"
    assert assignment[0][0] == 1, "near pair must take the idle rb"
    _report("two-pair-offload-choice",
            f"oracle picks pairs (near->idle rb, far->shared rb), total {total:.3f} Mbps")


# -- criterion 4: baseline calibration ----------------------------------------------


def _episode_means(config, policy_name, episodes, seed, key="mean_total_capacity_mbps"):
    rows = []
    run_experiment(
        config, make_policy(policy_name), episodes, seed,
        lambda rec: rows.append(rec[key]) if rec["type"] == "episode" else None,
    )
    return np.asarray(rows)


def test_baseline_calibration():
    config = default_scenario(num_due_pairs=0, seed=2024)
    means = _episode_means(config, "noop", episodes=1000, seed=2024)
    mean = float(means.mean())
    low, high = 0.75 * BASELINE_REFERENCE_MBPS, 1.25 * BASELINE_REFERENCE_MBPS
    assert low <= mean <= high, f"baseline {mean:.2f} outside [{low:.2f}, {high:.2f}]"
    _report("baseline-calibration",
            f"1000-episode mean {mean:.2f} Mbps vs reference {BASELINE_REFERENCE_MBPS} +-25%")


# -- criterion 5: policy ordering ----------------------------------------------------


def test_policy_ordering():
    episodes, seed = 100, 3030
    base = default_scenario(seed=seed)
    greedy = _episode_means(base.with_updates(num_due_pairs=10), "greedy", episodes, seed)
    baseline = _episode_means(base.with_updates(num_due_pairs=0), "noop", episodes, seed)
    random_50 = _episode_means(base.with_updates(num_due_pairs=50), "random", episodes, seed)

    def gap_over_se(a, b):
        gap = a.mean() - b.mean()
        se = math.sqrt(a.var(ddof=1) / len(a) + b.var(ddof=1) / len(b))
        return gap, se

    g1, se1 = gap_over_se(greedy, baseline)
    g2, se2 = gap_over_se(baseline, random_50)
    assert g1 > 2 * se1, f"greedy-baseline gap {g1:.2f} <= 2*SE {2 * se1:.2f}"
    assert g2 > 2 * se2, f"baseline-random gap {g2:.2f} <= 2*SE {2 * se2:.2f}"
    _report("policy-ordering",
            f"greedy {greedy.mean():.2f} > baseline {baseline.mean():.2f} > "
            f"random {random_50.mean():.2f} Mbps (gaps {g1:.2f}>{2*se1:.2f}, {g2:.2f}>{2*se2:.2f})")


# -- criterion 6: sweep determinism ---------------------------------------------------


def test_sweep_determinism():
    with tempfile.TemporaryDirectory() as tmp:
        tmp_path = Path(tmp)
        config_path = tmp_path / "config.json"
        config_path.write_text(default_scenario(seed=5).to_json())
        outputs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            proc = subprocess.run(
                [sys.executable, "-m", "d2dsim.cli", "sweep",
                 "--config", str(config_path), "--policy", "random",
                 "--densities", "5,10", "--trials", "2", "--episodes", "5",
                 "--seed", "5", "--out", str(out)],
                capture_output=True, text=True, timeout=300,
            )
            assert proc.returncode == 0, proc.stderr
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1], "sweep outputs differ between invocations"
        rows = outputs[0].decode().strip().splitlines()
    assert len(rows) == 5
    _report("sweep-determinism", f"two invocations byte-identical ({len(outputs[0])} bytes)")


# -- criterion 7: oracle dominance -----------------------------------------------------


def test_oracle_dominance():
    rng = np.random.default_rng(1007)
    greedy = GreedyDistancePolicy(power_dbm=5.0)
    random_policy = RandomPolicy()
    instances = 0
    for _ in range(200):
        k = int(rng.integers(1, 4))
        m = int(rng.integers(1, k + 1))
        n = int(rng.integers(1, 3))
        p = int(rng.integers(1, 3))
        power_range = (5.0, 5.0) if p == 1 else (0.0, 20.0)
        config = default_scenario(
            num_due_pairs=n, seed=int(rng.integers(0, 2**31))
        ).with_updates(
            num_rbs=k, num_cues=m, due_power_levels=p,
            due_power_range_dbm=power_range,
            pathloss_model=PathlossSpec(sigma_db=0.0),
        )
        env = D2DEnv(config)

        def one_step_total(actions):
            env.reset(seed=config.seed)
            return env.step(actions).info["metrics"].total_capacity_mbps

        observations = env.reset(seed=config.seed)
        oracle_actions = OraclePolicy(config.due_power_grid()).act(env, observations, rng)
        oracle_total = one_step_total(oracle_actions)
        for policy in (greedy, random_policy):
            observations = env.reset(seed=config.seed)
            actions = policy.act(env, observations, rng)
            total = one_step_total(actions)
            assert oracle_total >= total, (
                f"oracle {oracle_total} < {type(policy).__name__} {total}"
            )
        instances += 1
    _report("oracle-dominance", f"oracle >= greedy and >= random on {instances} instances")


# -- criterion 8: subcarrier cancellation -----------------------------------------------


def test_subcarrier_cancellation():
    """Interference-limited check: every transmitter on one shared RB and a
    vanishing noise floor, so the per-subcarrier split cancels in the ratio."""
    rng = np.random.default_rng(1008)
    steps = 0
    from d2dsim.pathloss import FreeSpacePathloss

    model = FreeSpacePathloss()
    for _ in range(50):
        n_pairs = int(rng.integers(2, 5))
        layout = []
        for i in range(n_pairs):
            x, y = float(rng.uniform(-400, 400)), float(rng.uniform(-400, 400))
            dx, dy = float(rng.uniform(3, 20)), float(rng.uniform(3, 20))
            power = float(rng.uniform(0, 20))
            layout.append((x, y, dx, dy, power))

        def build(scale):
            devices, actions = {}, []
            for i, (x, y, dx, dy, power) in enumerate(layout):
                rf = RfParams(tx_power_dbm=power, num_subcarriers=scale,
                              noise_dbm=-400.0)
                tx = Device(DeviceId(DeviceKind.D2D_TX, i), Position(x, y), rf)
                rx = Device(DeviceId(DeviceKind.D2D_RX, i), Position(x + dx, y + dy), rf)
                devices[tx.id], devices[rx.id] = tx, rx
                actions.append(Action(tx.id, rx.id, Mode.D2D, rb=0, tx_power_dbm=power))
            return compute_step_reports(
                devices, actions, model, np.random.default_rng(0),
                carrier_freq_hz=2.1e9, rb_bandwidth_hz=180e3,
            )

        for r1, r12 in zip(build(1), build(12)):
            assert abs(r1.sinr_db - r12.sinr_db) < 1e-9, (
                f"sinr moved by {abs(r1.sinr_db - r12.sinr_db):.2e} dB"
            )
        steps += 1
    _report("subcarrier-cancellation", f"sinr invariant under 12x split on {steps} steps")


if __name__ == "__main__":
    criteria = [
        test_formula_oracles,
        test_shadowing_statistics,
        test_two_pair_offload_choice,
        test_baseline_calibration,
        test_policy_ordering,
        test_sweep_determinism,
        test_oracle_dominance,
        test_subcarrier_cancellation,
    ]
    failures = 0
    for criterion in criteria:
        try:
            criterion()
        except AssertionError as exc:
            failures += 1
            name = criterion.__name__.removeprefix("test_").replace("_", "-")
            print(f"[FAIL] {name}: {exc}")
    sys.exit(1 if failures else 0)
