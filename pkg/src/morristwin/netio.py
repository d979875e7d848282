"""Shared asyncio plumbing for the newline-delimited TCP protocol.

A LineChannel owns one connection end: it frames outbound envelopes with
per-channel monotonic ids and reads inbound frames with the 64 KiB cap
enforced while buffering, so an oversized line is skipped (through its
newline) without killing the connection.
"""

import asyncio

from .protocol import MAX_FRAME_BYTES, DecodeError, Envelope, decode_frame, encode


class ConnectionClosed(Exception):
    pass


class LineChannel:
    def __init__(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
        self._reader = reader
        self._writer = writer
        self._buffer = bytearray()
        self._next_id = 1
        self.closed = False

    def send(self, kind: str, body: dict | None = None,
             re: int | None = None) -> int:
        """Queue one frame; returns its message id. Writes are buffered by
        the transport, so this never blocks the caller."""
        msg_id = self._next_id
        self._next_id += 1
        env = Envelope(msg_id, kind, body or {}, re)
        if not self.closed:
            try:
                self._writer.write(encode(env))
            except (ConnectionError, RuntimeError):
                self.closed = True
        return msg_id

    async def _read_line(self) -> bytes:
        while True:
            nl = self._buffer.find(b"\n")
            if nl >= 0:
                line = bytes(self._buffer[:nl])
                del self._buffer[: nl + 1]
                if len(line) > MAX_FRAME_BYTES:
                    raise DecodeError(MAX_FRAME_BYTES, "oversized frame")
                return line
            if len(self._buffer) > MAX_FRAME_BYTES:
                await self._skip_to_newline()
                raise DecodeError(MAX_FRAME_BYTES, "oversized frame")
            chunk = await self._reader.read(65536)
            if not chunk:
                self.closed = True
                raise ConnectionClosed()
            self._buffer.extend(chunk)

    async def _skip_to_newline(self) -> None:
        while True:
            nl = self._buffer.find(b"\n")
            if nl >= 0:
                del self._buffer[: nl + 1]
                return
            self._buffer.clear()
            chunk = await self._reader.read(65536)
            if not chunk:
                self.closed = True
                raise ConnectionClosed()
            self._buffer.extend(chunk)

    async def recv(self) -> Envelope:
        """Next decoded frame. Raises DecodeError for one bad frame (the
        connection stays usable) and ConnectionClosed at EOF."""
        line = await self._read_line()
        return decode_frame(line)

    async def drain(self) -> None:
        try:
            await self._writer.drain()
        except (ConnectionError, RuntimeError):
            self.closed = True

    def close(self) -> None:
        self.closed = True
        try:
            self._writer.close()
        except RuntimeError:
            pass

    @property
    def peername(self) -> str:
        info = self._writer.get_extra_info("peername")
        return f"{info[0]}:{info[1]}" if info else "?"


async def open_channel(host: str, port: int) -> LineChannel:
    reader, writer = await asyncio.open_connection(host, port)
    return LineChannel(reader, writer)
