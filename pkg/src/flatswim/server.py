"""Live simulation service speaking newline-delimited JSON over WebSocket.

One tick owner advances the world; every connected client receives the
same state stream. Clients inject commands and light toggles; commands
take effect on the next tick regardless of client cadence, so the
simulation remains deterministic for a given command timeline.
"""

from __future__ import annotations

import asyncio
import json
import math

from websockets.asyncio.server import serve as ws_serve

from flatswim.control import COMMAND_KINDS, Command
from flatswim.engine import Simulation
from flatswim.scenario import ScenarioConfig

PROTOCOL_VERSION = 1


def _state_message(sim: Simulation) -> dict:
    r = sim.robot
    battery = r.battery_charge
    return {
        "type": "state",
        "t": sim.t,
        "x": r.position[0],
        "y": r.position[1],
        "theta": r.heading,
        "v": [r.linear_velocity[0], r.linear_velocity[1]],
        "omega": r.angular_velocity,
        "battery_J": None if battery == math.inf else battery,
        "power_W": sim.power_w,
        "active": sorted(r.active_set),
        "fins": {"phase": sim.fin_phase(), "f_act": sim.last_f_act},
        "obstacles": [[o.position[0], o.position[1]] for o in sim.obstacles],
        "lights": list(sim.lights_on),
        "sunk": r.sunk,
    }


def _world_message(sim: Simulation) -> dict:
    cfg = sim.config
    design = cfg.robot.design
    return {
        "type": "world",
        "protocol": PROTOCOL_VERSION,
        "scenario": cfg.name,
        "dt": cfg.dt,
        "arena": {"width": cfg.arena.width, "height": cfg.arena.height},
        "robot": {
            "variant": design.variant,
            "body_length_mm": design.body_length_mm,
            "fin_span_mm": design.fin_span_mm,
            "actuator_count": design.actuator_count,
            "radius": cfg.robot.params.footprint_radius,
        },
        "obstacles": [
            {"x": o.position[0], "y": o.position[1], "radius": o.radius}
            for o in sim.obstacles
        ],
        "lights": [
            {"x": lc.x, "y": lc.y, "power": lc.power, "on": on}
            for lc, on in zip(cfg.lights, sim.lights_on)
        ],
        "state": _state_message(sim),
    }


class SimulationService:
    """WebSocket service around one Simulation tick owner."""

    def __init__(
        self,
        config: ScenarioConfig,
        host: str = "127.0.0.1",
        port: int = 8765,
        stream_hz: float = 30.0,
        realtime: bool = True,
        speed: float = 1.0,
    ):
        self.sim = Simulation(config)
        self.host = host
        self.port = port
        self.realtime = realtime
        self.speed = speed
        self.stream_every = max(1, int(round(1.0 / (stream_hz * config.dt))))
        self._clients: set = set()
        self._server = None
        self._tick_task: asyncio.Task | None = None
        self._stopping = asyncio.Event()

    # -- lifecycle ----------------------------------------------------------

    async def start(self) -> None:
        self._server = await ws_serve(self._handler, self.host, self.port)
        if self.realtime:
            self._tick_task = asyncio.create_task(self._tick_loop())

    async def stop(self) -> None:
        self._stopping.set()
        if self._tick_task is not None:
            self._tick_task.cancel()
            try:
                await self._tick_task
            except asyncio.CancelledError:
                pass
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()

    @property
    def bound_port(self) -> int:
        sock = next(iter(self._server.sockets))
        return sock.getsockname()[1]

    # -- ticking --------------------------------------------------------------

    async def advance(self, ticks: int) -> None:
        """Advance the simulation by whole ticks, broadcasting on cadence."""
        for _ in range(ticks):
            self.sim.tick()
            if self.sim.tick_index % self.stream_every == 0:
                await self._broadcast(_state_message(self.sim))

    async def _tick_loop(self) -> None:
        dt = self.sim.config.dt
        loop = asyncio.get_running_loop()
        start_wall = loop.time()
        start_t = self.sim.t
        while not self._stopping.is_set():
            elapsed = (loop.time() - start_wall) * self.speed
            behind = int((start_t + elapsed - self.sim.t) / dt)
            if behind > 0:
                await self.advance(min(behind, 1000))
            await asyncio.sleep(dt)

    async def _broadcast(self, message: dict) -> None:
        if not self._clients:
            return
        data = json.dumps(message) + "\n"
        results = await asyncio.gather(
            *(client.send(data) for client in self._clients), return_exceptions=True
        )
        del results  # send failures surface as disconnects in the handler

    # -- protocol ---------------------------------------------------------------

    async def _handler(self, connection) -> None:
        self._clients.add(connection)
        try:
            await connection.send(json.dumps(_world_message(self.sim)) + "\n")
            async for raw in connection:
                if isinstance(raw, bytes):
                    raw = raw.decode("utf-8", errors="replace")
                for line in raw.splitlines():
                    line = line.strip()
                    if not line:
                        continue
                    reply = self._process(line)
                    await connection.send(json.dumps(reply) + "\n")
        finally:
            self._clients.discard(connection)

    def _process(self, line: str) -> dict:
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as exc:
            return {"type": "error", "msg": f"malformed JSON: {exc.msg}"}
        if not isinstance(msg, dict) or "type" not in msg:
            return {"type": "error", "msg": "message must be an object with a 'type'"}
        kind = msg["type"]
        if kind == "cmd":
            cmd = msg.get("cmd")
            if cmd not in COMMAND_KINDS:
                return {"type": "error", "msg": f"unknown command {cmd!r}"}
            try:
                effective_t = self.sim.inject(Command(cmd, source="teleop"))
            except ValueError as exc:
                return {"type": "error", "msg": str(exc)}
            return {"type": "ack", "cmd": cmd, "t": effective_t}
        if kind == "light":
            try:
                index = int(msg.get("id"))
                on = bool(msg.get("on"))
                self.sim.set_light(index, on)
            except (TypeError, ValueError, IndexError) as exc:
                return {"type": "error", "msg": f"light toggle failed: {exc}"}
            return {"type": "ack", "light": index, "on": on}
        return {"type": "error", "msg": f"unknown message type {kind!r}"}


async def serve_async(
    config: ScenarioConfig,
    port: int,
    host: str = "127.0.0.1",
    stream_hz: float = 30.0,
    realtime: bool = True,
    speed: float = 1.0,
) -> SimulationService:
    """Start the service; returns the running instance."""
    service = SimulationService(
        config, host=host, port=port, stream_hz=stream_hz, realtime=realtime, speed=speed
    )
    await service.start()
    return service


def serve(config: ScenarioConfig, port: int, host: str = "127.0.0.1", stream_hz: float = 30.0) -> None:
    """Blocking entry point: run the service until interrupted."""

    async def _main() -> None:
        service = await serve_async(config, port, host=host, stream_hz=stream_hz)
        print(f"flatswim service on ws://{host}:{service.bound_port} "
              f"(scenario {config.name!r}, stream every {service.stream_every} ticks)",
              flush=True)
        try:
            await asyncio.Event().wait()
        finally:
            await service.stop()

    try:
        asyncio.run(_main())
    except KeyboardInterrupt:
        pass
