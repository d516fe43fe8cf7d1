"""Drive a `d2dsim serve` subprocess over stdio, message by message.

This is exactly what a remote agent process does: query the spaces, reset,
step, close. Run from the repository root (uses configs/).
"""

import json
import subprocess
import sys
from pathlib import Path

config = Path(__file__).resolve().parent.parent / "configs" / "single_cell_full_load.json"
server = subprocess.Popen(
    [sys.executable, "-m", "d2dsim.cli", "serve", "--config", str(config)],
    stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True,
)


def call(payload):
    print(f"-> {json.dumps(payload)}")
    server.stdin.write(json.dumps(payload) + "\n")
    server.stdin.flush()
    reply = json.loads(server.stdout.readline())
    shown = json.dumps(reply)
    if len(shown) > 160:
        shown = shown[:157] + "..."
    print(f"<- {shown}\n")
    return reply


spaces = call({"type": "spaces"})
print(f"   {spaces['num_pairs']} pairs, {spaces['action_space']['n']} actions each, "
      f"observations of length {spaces['observation_space']['length']}\n")

call({"type": "step", "actions": {"0": 1}})  # error: reset required

call({"type": "reset", "seed": 42})
for step in range(3):
    reply = call({"type": "step", "actions": {str(p): 11 * p for p in range(spaces["num_pairs"])}})
    metrics = reply["info"]["metrics"]
    print(f"   step {step}: total {metrics['total_capacity_mbps']:.2f} Mbps, "
          f"done={reply['done']}\n")

call({"type": "close"})
server.wait(timeout=10)
print(f"server exited with {server.returncode}")
