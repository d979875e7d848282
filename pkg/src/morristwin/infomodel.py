"""Hierarchical typed address space with per-path revisions and
prefix subscriptions.

The store is the single shared surface between the orchestrator and its
observers: every externally visible fact (game state, seats, cells,
orchestration processes) lives at a slash-separated path holding one
typed, revision-counted value. Writes to a path are serialized by the
store lock; subscribers receive a snapshot event per existing matching
path, then every change, in revision order.
"""

import queue
import re
import threading
from dataclasses import dataclass

TEXT = "text"
INTEGER = "integer"
BOOLEAN = "boolean"
STATE_BLOB = "state"
MOVE_BLOB = "move"
TIMESTAMP = "timestamp"

_PATH_RE = re.compile(r"^(/[a-z0-9_-]+)+$")


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


_TYPE_CHECKS = {
    TEXT: lambda v: isinstance(v, str),
    STATE_BLOB: lambda v: isinstance(v, str),
    MOVE_BLOB: lambda v: isinstance(v, str),
    INTEGER: _is_int,
    TIMESTAMP: _is_int,
    BOOLEAN: lambda v: isinstance(v, bool),
}


class AddressSpaceError(Exception):
    pass


class InvalidPath(AddressSpaceError):
    pass


class DuplicatePath(AddressSpaceError):
    pass


class UnknownPath(AddressSpaceError):
    pass


class BadType(AddressSpaceError):
    pass


class TypeMismatch(AddressSpaceError):
    pass


@dataclass(frozen=True, slots=True)
class Event:
    path: str
    value: object
    revision: int


class _Node:
    __slots__ = ("type_tag", "value", "revision")

    def __init__(self, type_tag, value):
        self.type_tag = type_tag
        self.value = value
        self.revision = 1


class Subscription:
    """Ordered event stream for one path prefix. Events are queued under
    the store lock, so per-path revision order is preserved."""

    def __init__(self, sub_id: int, prefix: str):
        self.id = sub_id
        self.prefix = prefix
        self._queue: queue.SimpleQueue[Event] = queue.SimpleQueue()

    def _offer(self, event: Event) -> None:
        self._queue.put(event)

    def get(self, timeout: float | None = None) -> Event:
        return self._queue.get(timeout=timeout)

    def drain(self) -> list[Event]:
        events = []
        while True:
            try:
                events.append(self._queue.get_nowait())
            except queue.Empty:
                return events

    def matches(self, path: str) -> bool:
        return path == self.prefix or path.startswith(self.prefix + "/")


def validate_path(path: str) -> str:
    if not isinstance(path, str) or not _PATH_RE.match(path):
        raise InvalidPath(f"bad node path: {path!r}")
    return path


class AddressSpace:
    def __init__(self):
        self._nodes: dict[str, _Node] = {}
        self._subs: dict[int, Subscription] = {}
        self._next_sub = 1
        self._lock = threading.RLock()

    def define(self, path: str, type_tag: str, initial) -> None:
        validate_path(path)
        check = _TYPE_CHECKS.get(type_tag)
        if check is None:
            raise BadType(f"unknown value type {type_tag!r}")
        if not check(initial):
            raise BadType(f"initial value {initial!r} is not {type_tag}")
        with self._lock:
            if path in self._nodes:
                raise DuplicatePath(path)
            node = _Node(type_tag, initial)
            self._nodes[path] = node
            self._fanout(path, node)

    def write(self, path: str, value) -> int:
        with self._lock:
            node = self._nodes.get(path)
            if node is None:
                raise UnknownPath(path)
            if not _TYPE_CHECKS[node.type_tag](value):
                raise TypeMismatch(
                    f"{path}: {value!r} is not {node.type_tag}"
                )
            node.value = value
            node.revision += 1
            self._fanout(path, node)
            return node.revision

    def publish(self, path: str, type_tag: str, value) -> int:
        """Define the node if absent, else write it."""
        with self._lock:
            if path not in self._nodes:
                self.define(path, type_tag, value)
                return 1
            return self.write(path, value)

    def read(self, path: str):
        with self._lock:
            node = self._nodes.get(path)
            if node is None:
                raise UnknownPath(path)
            return node.value, node.revision

    def paths(self) -> list[str]:
        with self._lock:
            return sorted(self._nodes)

    def snapshot(self) -> dict[str, tuple]:
        with self._lock:
            return {p: (n.value, n.revision) for p, n in self._nodes.items()}

    def subscribe(self, prefix: str) -> Subscription:
        validate_path(prefix)
        with self._lock:
            sub = Subscription(self._next_sub, prefix)
            self._next_sub += 1
            # snapshot first: one event per existing matching path
            for path in sorted(self._nodes):
                if sub.matches(path):
                    node = self._nodes[path]
                    sub._offer(Event(path, node.value, node.revision))
            self._subs[sub.id] = sub
            return sub

    def unsubscribe(self, sub_id: int) -> None:
        with self._lock:
            self._subs.pop(sub_id, None)

    def _fanout(self, path: str, node: _Node) -> None:
        event = Event(path, node.value, node.revision)
        for sub in self._subs.values():
            if sub.matches(path):
                sub._offer(event)
