"""WebSocket gateway: accepts sessions, pumps frames through the engine.

Each connection owns an isolated Session; the only shared state is the
immutable default layout and server config. Messages are JSON texts, one
per WebSocket frame, so ordering within a session is the transport's.
"""

from __future__ import annotations

import asyncio
import json
import logging
from dataclasses import dataclass, field
from typing import Optional

from websockets.asyncio.server import serve as ws_serve

from .keyboard import KeyboardLayout, build_layout
from .protocol import ERR_MALFORMED, InputInjector, MockInjector, Session, SessionConfig

log = logging.getLogger("airinput.server")

DEFAULT_PORT = 8765
PORT_ENV_VAR = "GESTURE_PORT"


@dataclass
class ServerConfig:
    defaults: SessionConfig = field(default_factory=SessionConfig)
    layouts: dict[str, KeyboardLayout] = field(default_factory=lambda: {"default": build_layout()})
    injector: Optional[InputInjector] = None


class GatewayServer:
    """Owns the listening socket; one Session per connection."""

    def __init__(self, config: Optional[ServerConfig] = None):
        self.config = config or ServerConfig()
        self._server = None

    async def _handler(self, ws):
        session = Session(
            layouts=self.config.layouts,
            defaults=self.config.defaults,
            injector=self.config.injector or MockInjector(),
        )
        try:
            async for raw in ws:
                try:
                    msg = json.loads(raw)
                    if not isinstance(msg, dict):
                        raise ValueError("message must be a JSON object")
                except (json.JSONDecodeError, ValueError) as exc:
                    await ws.send(
                        json.dumps(
                            {"type": "error", "code": ERR_MALFORMED, "message": str(exc)}
                        )
                    )
                    continue
                for out in session.handle(msg):
                    await ws.send(json.dumps(out))
                if session.closed:
                    break
        except Exception:  # noqa: BLE001 - a dying session must not kill the server
            log.exception("session %s aborted", session.id)
        finally:
            await ws.close()

    async def start(self, port: int, host: str = "127.0.0.1") -> int:
        self._server = await ws_serve(self._handler, host, port)
        return self._server.sockets[0].getsockname()[1]

    async def stop(self):
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()
            self._server = None


async def serve_forever(port: int, config: Optional[ServerConfig] = None, host: str = "0.0.0.0"):
    server = GatewayServer(config)
    bound = await server.start(port, host=host)
    log.info("listening on ws://%s:%d", host, bound)
    try:
        await asyncio.Future()
    finally:
        await server.stop()
