"""Compare the propagation models and visualize the shadowing spread.

Prints a loss table over distance, then saves pathloss_models.png with the
free-space curve, the log-distance mean, and one shadowed realization.
"""

import numpy as np

from d2dsim import fspl, log_distance_shadowing

FREQ_HZ = 2.1e9
rng = np.random.default_rng(7)

print("distance    free-space    log-distance n=2.7    one shadowed draw (sigma=2.7)")
for d in (1, 10, 30, 100, 300, 500):
    clean = fspl(FREQ_HZ, d)
    sloped = log_distance_shadowing(FREQ_HZ, d, 2.7, 0.0, 1.0)
    noisy = log_distance_shadowing(FREQ_HZ, d, 2.7, 2.7, 1.0, rng)
    print(f"{d:6d} m   {clean:8.2f} dB   {sloped:12.2f} dB        {noisy:8.2f} dB")

# sample statistics at a fixed distance
draws = np.array([log_distance_shadowing(FREQ_HZ, 100.0, 2.0, 2.7, 1.0, rng) for _ in range(10_000)])
print(f"\n10^4 draws at 100 m, n=2.0: mean {draws.mean():.2f} dB "
      f"(deterministic {fspl(FREQ_HZ, 100.0):.2f}), sd {draws.std(ddof=1):.2f} dB")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not available, skipping the figure")
else:
    distances = np.linspace(1.0, 500.0, 400)
    free = [fspl(FREQ_HZ, d) for d in distances]
    urban = [log_distance_shadowing(FREQ_HZ, d, 3.0, 0.0, 1.0) for d in distances]
    shadowed = [log_distance_shadowing(FREQ_HZ, d, 2.0, 2.7, 1.0, rng) for d in distances]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(distances, free, label="free space (n=2)")
    ax.plot(distances, urban, label="log-distance n=3.0")
    ax.plot(distances, shadowed, ".", ms=2, alpha=0.5, label="n=2.0 with 2.7 dB shadowing")
    ax.set_xlabel("distance [m]")
    ax.set_ylabel("path loss [dB]")
    ax.set_xscale("log")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig("pathloss_models.png", dpi=120)
    print("wrote pathloss_models.png")
