"""
Minimal event emitter used by the training loops.

Listeners are plain callables registered per event name and called in
registration order.
"""

from __future__ import annotations

from collections.abc import Callable
from typing import Any

Listener = Callable[..., Any]


class EventEmitter:
    """
    Publish/subscribe hub.

    Examples:
        >>> emitter = EventEmitter()
        >>> seen = []
        >>> emitter.on("epoch_end", seen.append)
        >>> emitter.emit("epoch_end", 3)
        >>> seen
        [3]
    """

    def __init__(self) -> None:
        """Initialize with no listeners."""
        self._listeners: dict[str, list[Listener]] = {}

    def on(self, event: str, callback: Listener) -> None:
        """Register a listener for ``event``."""
        self._listeners.setdefault(event, []).append(callback)

    def off(self, event: str, callback: Listener) -> None:
        """Remove a previously registered listener."""
        if event in self._listeners:
            self._listeners[event].remove(callback)

    def emit(self, event: str, *args: Any, **kwargs: Any) -> None:
        """Call every listener of ``event``."""
        for callback in list(self._listeners.get(event, ())):
            callback(*args, **kwargs)

    def listener_count(self, event: str) -> int:
        """Number of listeners registered for ``event``."""
        return len(self._listeners.get(event, ()))
