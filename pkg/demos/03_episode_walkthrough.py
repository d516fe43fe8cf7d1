"""One full episode of the default scenario with three D2D pairs.

Shows the reset/step loop, what an action index means, and the per-step
metrics the environment reports.
"""

import numpy as np

from d2dsim import D2DEnv, default_scenario
from d2dsim.agents import RandomPolicy

env = D2DEnv(default_scenario(num_due_pairs=3, seed=11))
spaces = env.spaces()
print(f"pairs: {spaces['num_pairs']}, actions per pair: {spaces['action_space']['n']} "
      f"({spaces['action_space']['num_rbs']} RBs x "
      f"{spaces['action_space']['num_power_levels']} power levels)")
print(f"observation length: {spaces['observation_space']['length']}\n")

policy = RandomPolicy()
rng = np.random.default_rng(11)
observations = env.reset()

print("step  actions (pair: rb@power)            total    cue     due   busiest-rb")
done = False
step = 0
while not done:
    actions = policy.act(env, observations, rng)
    decoded = ", ".join(
        f"{pair}: rb{env.action_map.decode(idx)[0]}@{env.action_map.decode(idx)[1]:.0f}dBm"
        for pair, idx in sorted(actions.items())
    )
    result = env.step(actions)
    m = result.info["metrics"]
    busiest = int(np.argmax(m.per_rb_occupancy))
    print(f"{step:4d}  {decoded:36s} {m.total_capacity_mbps:6.2f} "
          f"{m.cue_capacity_mbps:6.2f} {m.due_capacity_mbps:6.2f}   "
          f"rb{busiest} x{m.per_rb_occupancy[busiest]}")
    observations = result.observations
    done = result.done
    step += 1

print(f"\nepisode over after {step} frames; rewards last step: "
      f"{ {p: round(r, 3) for p, r in result.rewards.items()} }")
print("every UE is repositioned on the next reset()")
