"""Thin episodic-environment client for the d2dsim wire protocol.

Talks newline-delimited JSON to a ``d2dsim serve`` process, either spawned
as a child over stdio or reached over TCP. The adapter adds no semantics:
every observation and reward byte originates from a server reply, and action
maps are forwarded as-is. One adapter per connection; not thread-safe.
"""

from __future__ import annotations

import json
import socket
import subprocess

import numpy as np


class ProtocolError(RuntimeError):
    """An error reply from the server, carrying its code."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


class _StdioTransport:
    def __init__(self, command: list[str]):
        self._proc = subprocess.Popen(
            command, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True
        )

    def request_line(self, line: str) -> str:
        proc = self._proc
        if proc.poll() is not None:
            raise ConnectionError("server process has exited")
        proc.stdin.write(line + "\n")
        proc.stdin.flush()
        reply = proc.stdout.readline()
        if not reply:
            raise ConnectionError("server closed the stream")
        return reply

    def close(self) -> None:
        if self._proc.poll() is None:
            try:
                self._proc.stdin.close()
            except OSError:
                pass
            self._proc.wait(timeout=10)


class _TcpTransport:
    def __init__(self, host: str, port: int, timeout: float):
        try:
            self._sock = socket.create_connection((host, port), timeout=timeout)
        except OSError as exc:
            raise ConnectionError(f"cannot connect to {host}:{port}: {exc}") from exc
        self._sock.settimeout(timeout)
        self._reader = self._sock.makefile("r", encoding="utf-8")
        self._writer = self._sock.makefile("w", encoding="utf-8")

    def request_line(self, line: str) -> str:
        self._writer.write(line + "\n")
        self._writer.flush()
        reply = self._reader.readline()
        if not reply:
            raise ConnectionError("server closed the connection")
        return reply

    def close(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass


class RemoteEnv:
    """Environment handle over one protocol connection.

    Space descriptors are queried on connect; ``reset`` and ``step`` mirror
    the usual episodic API. Protocol error replies surface as
    :class:`ProtocolError` with the server's code.
    """

    def __init__(self, transport):
        self._transport = transport
        self.spaces = self._call({"type": "spaces"})
        self.num_pairs: int = self.spaces["num_pairs"]
        self.pair_ids: list[int] = list(self.spaces["pair_ids"])
        self.action_space_n: int = self.spaces["action_space"]["n"]
        self.power_levels_dbm: list[float] = self.spaces["action_space"]["power_levels_dbm"]
        self.num_rbs: int = self.spaces["action_space"]["num_rbs"]
        self.observation_length: int = self.spaces["observation_space"]["length"]

    # -- connection ---------------------------------------------------------

    @classmethod
    def spawn(cls, command: list[str]) -> "RemoteEnv":
        """Spawn ``command`` (a serve invocation) and drive it over stdio."""
        return cls(_StdioTransport(command))

    @classmethod
    def connect_tcp(cls, host: str, port: int, timeout: float = 10.0) -> "RemoteEnv":
        return cls(_TcpTransport(host, port, timeout))

    def close(self) -> None:
        try:
            self._call({"type": "close"})
        except (ConnectionError, ProtocolError):
            pass
        self._transport.close()

    def __enter__(self) -> "RemoteEnv":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    # -- episodic API ---------------------------------------------------------

    def reset(self, seed: int | None = None) -> dict[int, np.ndarray]:
        payload = {"type": "reset"}
        if seed is not None:
            payload["seed"] = seed
        reply = self._call(payload)
        return _decode_observations(reply["observations"])

    def step(self, actions: dict[int, int]):
        """Returns (observations, rewards, done, info) from the server reply."""
        reply = self._call({
            "type": "step",
            "actions": {str(pair): int(index) for pair, index in actions.items()},
        })
        observations = _decode_observations(reply["observations"])
        rewards = {int(pair): float(v) for pair, v in reply["rewards"].items()}
        return observations, rewards, bool(reply["done"]), reply["info"]

    # -- plumbing ---------------------------------------------------------------

    def _call(self, payload: dict) -> dict:
        line = self._transport.request_line(json.dumps(payload))
        reply = json.loads(line)
        if reply.get("type") == "error":
            raise ProtocolError(reply.get("code", "unknown"), reply.get("message", ""))
        return reply


def _decode_observations(payload: dict) -> dict[int, np.ndarray]:
    return {int(pair): np.asarray(vec, dtype=np.float64) for pair, vec in payload.items()}


class FlatView:
    """Single-agent framing: concatenated observations, one joint discrete
    action with pair 0 as the least significant digit."""

    def __init__(self, env: RemoteEnv):
        self.env = env
        self.per_pair_n = env.action_space_n
        self.action_space_n = self.per_pair_n ** env.num_pairs
        self.observation_length = env.observation_length * env.num_pairs

    def split_joint_action(self, joint: int) -> dict[int, int]:
        if not 0 <= joint < self.action_space_n:
            raise ValueError(f"joint action {joint} outside [0, {self.action_space_n})")
        actions = {}
        for pair in self.env.pair_ids:
            joint, digit = divmod(joint, self.per_pair_n)
            actions[pair] = digit
        return actions

    def join_actions(self, actions: dict[int, int]) -> int:
        joint = 0
        for pair in reversed(self.env.pair_ids):
            joint = joint * self.per_pair_n + actions[pair]
        return joint

    def _flatten(self, observations: dict[int, np.ndarray]) -> np.ndarray:
        if not observations:
            return np.zeros(0, dtype=np.float64)
        return np.concatenate([observations[p] for p in self.env.pair_ids])

    def reset(self, seed: int | None = None) -> np.ndarray:
        return self._flatten(self.env.reset(seed))

    def step(self, joint_action: int):
        observations, rewards, done, info = self.env.step(self.split_joint_action(joint_action))
        mean_reward = sum(rewards.values()) / len(rewards) if rewards else 0.0
        return self._flatten(observations), mean_reward, done, info
