"""Live service tests: protocol, policy, and the pulse response."""

import asyncio
import json
import time

import numpy as np
import pytest
import websockets

from cotransport.scenarios import Scenario
from cotransport.server import (PROTOCOL_VERSION, LiveServer, _parse_message,
                                _Reject)


async def _start(**kw):
    server = LiveServer(**kw)
    port = await server.start(0)
    return server, f"ws://127.0.0.1:{port}"


async def _recv(ws, kind="state", timeout=3.0):
    deadline = time.monotonic() + timeout
    while True:
        left = deadline - time.monotonic()
        if left <= 0:
            raise TimeoutError(f"no {kind} frame within {timeout}s")
        msg = json.loads(await asyncio.wait_for(ws.recv(), left))
        if msg["type"] == kind:
            return msg


def _input(fx, fy, mz=0.0):
    return json.dumps({"v": PROTOCOL_VERSION, "type": "input",
                       "payload": {"f_x": fx, "f_y": fy, "m_z": mz}})


def _cmd(**payload):
    return json.dumps({"v": PROTOCOL_VERSION, "type": "cmd",
                       "payload": payload})


def test_parse_rejects_bad_frames():
    for raw in ("{notjson", "[]", json.dumps({"v": 2, "type": "input",
                                              "payload": {}}),
                json.dumps({"v": 1, "type": "state", "payload": {}}),
                json.dumps({"v": 1, "type": "input",
                            "payload": {"f_x": "a", "f_y": 0}}),
                json.dumps({"v": 1, "type": "input",
                            "payload": {"f_x": float("nan"), "f_y": 0}}),
                json.dumps({"v": 1, "type": "cmd",
                            "payload": {"action": "warp"}}),
                json.dumps({"v": 1, "type": "cmd",
                            "payload": {"action": "set-case", "case": 9}}),
                json.dumps({"v": 1, "type": "cmd",
                            "payload": {"action": "set", "param": "m_robot",
                                        "value": 1.0}})):
        with pytest.raises(_Reject):
            _parse_message(raw)


def test_parse_accepts_valid_frames():
    kind, p = _parse_message(_input(20.0, -3.0, 1.0))
    assert kind == "input" and p == {"f_x": 20.0, "f_y": -3.0, "m_z": 1.0}
    kind, p = _parse_message(_cmd(action="set-case", case=3))
    assert p["case"] == 3
    kind, p = _parse_message(_cmd(action="set", param="k_hand", value=42.0))
    assert p["param"] == "k_hand"


def test_stream_rate_and_schema():
    async def scenario():
        server, url = await _start()
        try:
            async with websockets.connect(url) as ws:
                first = await _recv(ws)
                assert first["v"] == PROTOCOL_VERSION
                payload = first["payload"]
                for key in ("t", "robot", "object", "stance", "plan",
                            "forces", "separation", "case", "eps_x"):
                    assert key in payload
                stamps = []
                t_end = time.monotonic() + 1.2
                while time.monotonic() < t_end:
                    await _recv(ws)
                    stamps.append(time.monotonic())
                span = stamps[-1] - stamps[0]
                rate = (len(stamps) - 1) / span
                assert rate >= 30.0
        finally:
            await server.stop()

    asyncio.run(scenario())


def test_malformed_input_gets_error_and_sim_survives():
    async def scenario():
        server, url = await _start()
        try:
            async with websockets.connect(url) as ws:
                await _recv(ws)
                await ws.send("{broken")
                err = await _recv(ws, kind="error")
                assert "JSON" in err["payload"]["message"]
                t0 = (await _recv(ws))["payload"]["t"]
                await asyncio.sleep(0.2)
                t1 = (await _recv(ws))["payload"]["t"]
                assert t1 > t0
        finally:
            await server.stop()

    asyncio.run(scenario())


def test_second_client_is_read_only():
    async def scenario():
        server, url = await _start()
        try:
            async with websockets.connect(url) as leader, \
                    websockets.connect(url) as viewer:
                await _recv(leader)
                await _recv(viewer)
                await viewer.send(_input(10.0, 0.0))
                err = await _recv(viewer, kind="error")
                assert "read-only" in err["payload"]["message"]
                # the leader's input is accepted and shows in the stream
                await leader.send(_input(10.0, 0.0))
                deadline = time.monotonic() + 2.0
                while time.monotonic() < deadline:
                    state = await _recv(viewer)
                    if state["payload"]["external"]:
                        break
                assert state["payload"]["external"]
        finally:
            await server.stop()

    asyncio.run(scenario())


async def _recv_until(ws, pred, timeout=3.0):
    # frames queue on the client side, so read until one satisfies pred
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        state = await _recv(ws, timeout=deadline - time.monotonic())
        if pred(state["payload"]):
            return state["payload"]
    raise TimeoutError("condition not reached")


def test_pause_resume_reset():
    async def scenario():
        server, url = await _start()
        try:
            async with websockets.connect(url) as ws:
                await ws.send(_cmd(action="pause"))
                frozen = await _recv_until(ws, lambda p: p["paused"])
                t0 = frozen["t"]
                await asyncio.sleep(0.3)
                # everything broadcast since the plateau shares the time
                later = await _recv_until(ws, lambda p: True)
                while later["t"] <= t0 and not later["paused"]:
                    later = await _recv_until(ws, lambda p: True)
                assert later["paused"] and later["t"] == t0 or later["t"] <= t0
                await ws.send(_cmd(action="resume"))
                moving = await _recv_until(ws, lambda p: p["t"] > t0)
                assert not moving["paused"]
                await ws.send(_cmd(action="reset"))
                await _recv_until(ws, lambda p: p["t"] < moving["t"])
        finally:
            await server.stop()

    asyncio.run(scenario())


def test_set_case_switches_at_a_strike():
    async def scenario():
        server, url = await _start()
        try:
            async with websockets.connect(url) as ws:
                await _recv(ws)
                await ws.send(_cmd(action="set-case", case=2))
                deadline = time.monotonic() + 2.0
                case = None
                while time.monotonic() < deadline:
                    case = (await _recv(ws))["payload"]["case"]
                    if case == 2:
                        break
                assert case == 2
                assert server.sim.params.k_goal[0] == 25.0
        finally:
            await server.stop()

    asyncio.run(scenario())


def test_set_param_between_ticks():
    async def scenario():
        server, url = await _start()
        try:
            async with websockets.connect(url) as ws:
                await _recv(ws)
                await ws.send(_cmd(action="set", param="k_hand", value=42.0))
                await asyncio.sleep(0.2)
                await _recv(ws)
                assert np.allclose(server.sim.params.k_hand, (42.0, 42.0))
        finally:
            await server.stop()

    asyncio.run(scenario())


def test_idles_without_clients():
    async def scenario():
        server, _ = await _start()
        try:
            await asyncio.sleep(0.4)
            assert server.sim.t > 0.1
            assert abs(server.sim.object.pos[0] - 0.6) < 0.05
        finally:
            await server.stop()

    asyncio.run(scenario())


def test_input_roundtrip_within_two_frames():
    async def scenario():
        server, url = await _start()
        try:
            async with websockets.connect(url) as ws:
                stamps = []
                for _ in range(20):
                    await _recv(ws)
                    stamps.append(time.monotonic())
                period = float(np.median(np.diff(stamps)))
                sent = time.monotonic()
                await ws.send(_input(20.0, 0.0))
                deadline = time.monotonic() + 2.0
                while time.monotonic() < deadline:
                    state = await _recv(ws)
                    if state["payload"]["forces"]["leader_fx"] > 15.0:
                        break
                latency = time.monotonic() - sent
                assert state["payload"]["forces"]["leader_fx"] > 15.0
                assert latency <= 2.0 * period + 0.01
        finally:
            await server.stop()

    asyncio.run(scenario())


def test_force_pulse_displaces_and_returns():
    # 20 N forward for one second, then release: the object moves, the
    # robot follows, and the pair settles back to the carry offset
    async def scenario():
        server, url = await _start()
        t_wall = time.monotonic()
        try:
            async with websockets.connect(url) as ws:
                await _recv(ws)
                await ws.send(_input(20.0, 0.0))
                await asyncio.sleep(1.0)
                await ws.send(_input(0.0, 0.0))
                max_obj = 0.0
                frames = 0
                t0 = time.monotonic()
                settled = None
                while time.monotonic() - t_wall < 10.0:
                    state = (await _recv(ws))["payload"]
                    frames += 1
                    max_obj = max(max_obj, state["object"]["x"])
                    if abs(state["separation"] - 0.6) < 0.05 \
                            and state["object"]["vx"] < 0.01 \
                            and state["t"] > 1.5:
                        settled = state
                        break
                assert settled is not None, "did not return to the offset"
                assert max_obj - 0.6 > 0.1, "object barely displaced"
                assert settled["robot"]["x"] > 0.05, "robot did not follow"
                rate = frames / (time.monotonic() - t0)
                assert rate >= 30.0
        finally:
            await server.stop()

    asyncio.run(scenario())
