"""Live websocket service around the simulation loop.

One process runs the sim in wall-clock time and broadcasts state frames
to every connected client at the configured rate (default 40 Hz).  The
first client to connect is the leader: its input frames replace the
scripted leader force until it disconnects.  Later clients get the same
stream read-only.  Every frame on the wire is one JSON text message
{"v": 1, "type": "state"|"input"|"cmd"|"error", "payload": {...}}; the
websocket layer supplies the length delimiting.

Network handlers never touch the sim directly: validated messages go
into a queue the loop drains between tick batches, so every change
lands on a tick boundary.
"""

import asyncio
import json
import math
import time

import numpy as np
import websockets

from .scenarios import Scenario
from .sim import TICK_COLUMNS, Sim, SimFault

PROTOCOL_VERSION = 1
_COL = {name: i for i, name in enumerate(TICK_COLUMNS)}

# params fields a set command may touch, all spring/damper pairs
_SETTABLE = ("k_goal", "b_goal", "k_hand", "b_hand", "k_couple", "b_couple")


def _frame(kind, payload):
    return json.dumps({"v": PROTOCOL_VERSION, "type": kind,
                       "payload": payload})


def _error(message):
    return _frame("error", {"message": message})


class _Reject(ValueError):
    """Client message failed validation; text goes back in an error frame."""


def _parse_message(raw):
    """Validate one wire message; returns (type, payload) or raises _Reject."""
    try:
        msg = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError):
        raise _Reject("frame is not valid JSON")
    if not isinstance(msg, dict):
        raise _Reject("frame must be a JSON object")
    if msg.get("v") != PROTOCOL_VERSION:
        raise _Reject(f"unsupported protocol version {msg.get('v')!r}")
    kind = msg.get("type")
    payload = msg.get("payload")
    if kind not in ("input", "cmd"):
        raise _Reject(f"unsupported frame type {kind!r}")
    if not isinstance(payload, dict):
        raise _Reject("payload must be an object")

    if kind == "input":
        try:
            f = (float(payload["f_x"]), float(payload["f_y"]),
                 float(payload.get("m_z", 0.0)))
        except (KeyError, TypeError, ValueError):
            raise _Reject("input needs numeric f_x, f_y and optional m_z")
        if not all(math.isfinite(v) for v in f):
            raise _Reject("input forces must be finite")
        return kind, {"f_x": f[0], "f_y": f[1], "m_z": f[2]}

    action = payload.get("action")
    if action in ("pause", "resume", "reset"):
        return kind, {"action": action}
    if action == "set-case":
        case = payload.get("case")
        if case not in (1, 2, 3, 4):
            raise _Reject("set-case needs case 1..4")
        return kind, {"action": action, "case": int(case)}
    if action == "set":
        name = payload.get("param")
        if name not in _SETTABLE:
            raise _Reject(f"cannot set {name!r}; allowed: "
                          + ", ".join(_SETTABLE))
        try:
            value = float(payload["value"])
        except (KeyError, TypeError, ValueError):
            raise _Reject("set needs a numeric value")
        if not math.isfinite(value) or value < 0:
            raise _Reject("value must be finite and non-negative")
        return kind, {"action": action, "param": name, "value": value}
    raise _Reject(f"unknown cmd action {payload.get('action')!r}")


class LiveServer:
    """Real-time sim loop plus its websocket endpoint."""

    def __init__(self, scenario=None, broadcast_hz=40.0, **sim_kw):
        if scenario is None:
            scenario = Scenario(name="live", duration=1.0, model="hold")
        self.sim = Sim(scenario, **sim_kw)
        self.broadcast_hz = float(broadcast_hz)
        self.frame_interval = 1.0 / self.broadcast_hz
        self.paused = False
        self.seq = 0
        self._external = None       # (force 2-vector, moment) or None
        self._clients = []          # connection order; [0] is the leader
        self._inbox = asyncio.Queue()
        self._last_row = None
        self._server = None
        self._loop_task = None
        self._fault = None

    # -- lifecycle

    async def start(self, port=0):
        """Bind and start ticking; returns the actual port."""
        self._server = await websockets.serve(self._handler, "127.0.0.1",
                                              port)
        self._loop_task = asyncio.ensure_future(self._run_loop())
        return self._server.sockets[0].getsockname()[1]

    async def stop(self):
        if self._loop_task is not None:
            self._loop_task.cancel()
            try:
                await self._loop_task
            except asyncio.CancelledError:
                pass
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()

    async def wait_closed(self):
        await self._loop_task

    # -- wire handling

    def _role(self, ws):
        return "leader" if self._clients and self._clients[0] is ws \
            else "observer"

    async def _handler(self, ws):
        self._clients.append(ws)
        try:
            await ws.send(self._state_frame())
            async for raw in ws:
                try:
                    kind, payload = _parse_message(raw)
                except _Reject as bad:
                    await ws.send(_error(str(bad)))
                    continue
                if self._role(ws) != "leader":
                    await ws.send(_error("read-only stream: "
                                         "another client leads"))
                    continue
                await self._inbox.put((kind, payload))
        except websockets.ConnectionClosed:
            pass
        finally:
            was_leader = self._role(ws) == "leader"
            self._clients.remove(ws)
            if was_leader:
                # scripted leader resumes until someone else takes over
                self._external = None

    def _apply(self, kind, payload):
        if kind == "input":
            self._external = (np.array([payload["f_x"], payload["f_y"]]),
                              payload["m_z"])
            return
        action = payload["action"]
        if action == "pause":
            self.paused = True
        elif action == "resume":
            self.paused = False
        elif action == "reset":
            self.sim.reset()
            self._external = None
            self._last_row = None
        elif action == "set-case":
            self.sim.request_case(payload["case"])
        elif action == "set":
            v = payload["value"]
            setattr(self.sim.params, payload["param"],
                    np.array([v, v], dtype=float))

    # -- the loop

    async def _run_loop(self):
        dt = self.sim.cfg.dt
        max_batch = max(1, int(0.1 / dt))   # never advance >100 ms at once
        debt = 0.0
        last = time.monotonic()
        while True:
            while not self._inbox.empty():
                self._apply(*self._inbox.get_nowait())
            now = time.monotonic()
            if not self.paused and self._fault is None:
                debt += (now - last) / dt
            last = now
            n = min(int(debt), max_batch)
            debt = min(debt - n, float(max_batch))   # drop unrecoverable time
            for _ in range(n):
                try:
                    self._last_row = self.sim.tick(external=self._external)
                except SimFault as fault:
                    self._fault = f"tick {fault.tick}: {fault.reason}"
                    break
            await self._broadcast(self._state_frame())
            await asyncio.sleep(self.frame_interval)

    async def _broadcast(self, text):
        dead = []
        for ws in self._clients:
            try:
                await ws.send(text)
            except websockets.ConnectionClosed:
                dead.append(ws)
        for ws in dead:
            if ws in self._clients:
                self._clients.remove(ws)

    # -- state serialization

    def _state_frame(self):
        sim = self.sim
        row = self._last_row

        def col(name):
            return float(row[_COL[name]]) if row is not None else 0.0

        heading = sim.stance.heading
        dx = sim.object.pos - sim.robot.pos
        separation = float(np.cos(heading) * dx[0]
                           + np.sin(heading) * dx[1])
        payload = {
            "seq": self.seq,
            "t": sim.t,
            "paused": self.paused,
            "case": sim.scenario.case,
            "external": self._external is not None,
            "separation": separation,
            "robot": {"x": float(sim.robot.pos[0]),
                      "y": float(sim.robot.pos[1]),
                      "vx": float(sim.robot.vel[0]),
                      "vy": float(sim.robot.vel[1])},
            "object": {"x": float(sim.object.pos[0]),
                       "y": float(sim.object.pos[1]),
                       "vx": float(sim.object.vel[0]),
                       "vy": float(sim.object.vel[1]),
                       "yaw": float(sim.object_yaw)},
            "stance": {"x": float(sim.stance.pos[0]),
                       "y": float(sim.stance.pos[1]),
                       "heading": float(heading), "side": sim.stance.side},
            "swing": {"x": col("swing_x"), "y": col("swing_y"),
                      "z": col("swing_z")},
            "plan": [{"x": float(s.pos[0]), "y": float(s.pos[1]),
                      "side": s.side} for s in sim.plan.steps],
            "forces": {"leader_fx": col("leader_fx"),
                       "leader_fy": col("leader_fy"),
                       "leader_mz": col("leader_mz"),
                       "hand_fx": col("hand_fx"),
                       "hand_fy": col("hand_fy"),
                       "hand_mz": col("hand_mz")},
            "k_x": sim.k_forward,
            "eps_x": col("eps_x"),
            "eps_y": col("eps_y"),
            "fault": self._fault,
        }
        self.seq += 1
        return _frame("state", payload)
