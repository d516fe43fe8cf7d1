"""Newline-delimited JSON protocol: one client drives one environment.

Requests are single-line JSON objects with a ``type`` field:

    {"type": "spaces"}
    {"type": "reset"}            or {"type": "reset", "seed": 42}
    {"type": "step", "actions": {"0": 13, "1": 200}}
    {"type": "close"}

Replies mirror the request type; errors come back as
``{"type": "error", "code": ..., "message": ...}`` and leave the session
open. All floats are rendered at 9 significant digits.
"""

from __future__ import annotations

import json

from .domain import ScenarioConfig
from .env import D2DEnv
from .serialize import dumps_canonical, metrics_to_dict, report_to_dict

ERR_MALFORMED = "malformed_json"
ERR_UNKNOWN_TYPE = "unknown_type"
ERR_RESET_REQUIRED = "reset_required"
ERR_INVALID_ACTION = "invalid_action"
ERR_BAD_REQUEST = "bad_request"


class ProtocolSession:
    """State machine for one client session over any line transport."""

    def __init__(self, config: ScenarioConfig):
        self.env = D2DEnv(config)
        self.closed = False

    def handle_line(self, line: str) -> str:
        """Process one request line, return the reply line (no newline)."""
        try:
            message = json.loads(line)
        except json.JSONDecodeError as exc:
            return self._error(ERR_MALFORMED, f"could not parse request: {exc}")
        if not isinstance(message, dict) or "type" not in message:
            return self._error(ERR_MALFORMED, "request must be an object with a 'type' field")
        kind = message["type"]
        if kind == "spaces":
            return dumps_canonical({"type": "spaces", **self.env.spaces()})
        if kind == "reset":
            return self._reset(message)
        if kind == "step":
            return self._step(message)
        if kind == "close":
            self.closed = True
            return dumps_canonical({"type": "close"})
        return self._error(ERR_UNKNOWN_TYPE, f"unknown request type {kind!r}")

    def _reset(self, message: dict) -> str:
        seed = message.get("seed")
        if seed is not None and not isinstance(seed, int):
            return self._error(ERR_BAD_REQUEST, "seed must be an integer")
        observations = self.env.reset(seed)
        return dumps_canonical({"type": "reset", "observations": _obs_payload(observations)})

    def _step(self, message: dict) -> str:
        actions_raw = message.get("actions", {})
        if not isinstance(actions_raw, dict):
            return self._error(ERR_BAD_REQUEST, "'actions' must be an object of pair -> index")
        try:
            actions = {int(pair): int(index) for pair, index in actions_raw.items()}
        except (TypeError, ValueError):
            return self._error(ERR_INVALID_ACTION, "action keys and indices must be integers")
        try:
            result = self.env.step(actions)
        except RuntimeError as exc:
            return self._error(ERR_RESET_REQUIRED, str(exc))
        except ValueError as exc:
            return self._error(ERR_INVALID_ACTION, str(exc))
        return dumps_canonical(
            {
                "type": "step",
                "observations": _obs_payload(result.observations),
                "rewards": {str(pair): value for pair, value in result.rewards.items()},
                "done": result.done,
                "info": {
                    "metrics": metrics_to_dict(result.info["metrics"]),
                    "reports": [report_to_dict(r) for r in result.info["reports"]],
                },
            }
        )

    @staticmethod
    def _error(code: str, message: str) -> str:
        return dumps_canonical({"type": "error", "code": code, "message": message})


def _obs_payload(observations) -> dict:
    return {str(pair): vec.tolist() for pair, vec in observations.items()}


def run_session(config: ScenarioConfig, reader, writer) -> None:
    """Drive one session over text file objects until close or EOF."""
    session = ProtocolSession(config)
    for line in reader:
        if not line.strip():
            continue
        writer.write(session.handle_line(line) + "\n")
        writer.flush()
        if session.closed:
            break
