"""Thread identities and the thread-to-core placement map."""

from __future__ import annotations

from typing import Iterator, NamedTuple


class ThreadId(NamedTuple):
    """A thread, identified by its owning process id and thread index."""

    pid: int
    index: int

    def __repr__(self) -> str:
        return f"T({self.pid}.{self.index})"


class Placement:
    """Mutable map of live threads to cores, with a per-core capacity limit.

    Iteration order over threads is assignment order; the engine assigns in
    (pid, index) order, so traversals are deterministic.
    """

    def __init__(self, capacity: int = 1):
        if capacity < 1:
            raise ValueError("core capacity must be >= 1")
        self.capacity = capacity
        self._core_of: dict[ThreadId, int] = {}
        self._on_core: dict[int, list[ThreadId]] = {}

    def assign(self, thread: ThreadId, core: int) -> None:
        if thread in self._core_of:
            raise ValueError(f"{thread} is already placed")
        occupants = self._on_core.setdefault(core, [])
        if len(occupants) >= self.capacity:
            raise ValueError(f"core {core} is full (capacity {self.capacity})")
        occupants.append(thread)
        self._core_of[thread] = core

    def remove(self, thread: ThreadId) -> None:
        core = self._core_of.pop(thread)
        self._on_core[core].remove(thread)

    def move(self, thread: ThreadId, core: int) -> None:
        """Relocate ``thread``; the caller is responsible for capacity checks."""
        old = self._core_of[thread]
        self._on_core[old].remove(thread)
        self._on_core.setdefault(core, []).append(thread)
        self._core_of[thread] = core

    def core_of(self, thread: ThreadId) -> int:
        return self._core_of[thread]

    def threads_on(self, core: int) -> tuple[ThreadId, ...]:
        return tuple(self._on_core.get(core, ()))

    def has_space(self, core: int) -> bool:
        return len(self._on_core.get(core, ())) < self.capacity

    def threads(self) -> list[ThreadId]:
        return list(self._core_of)

    def copy(self) -> "Placement":
        dup = Placement(self.capacity)
        for thread, core in self._core_of.items():
            dup._on_core.setdefault(core, []).append(thread)
            dup._core_of[thread] = core
        return dup

    def __contains__(self, thread: ThreadId) -> bool:
        return thread in self._core_of

    def __len__(self) -> int:
        return len(self._core_of)

    def __iter__(self) -> Iterator[ThreadId]:
        return iter(self._core_of)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Placement):
            return NotImplemented
        return self._core_of == other._core_of

    def __repr__(self) -> str:
        body = ", ".join(f"{t}@c{c}" for t, c in self._core_of.items())
        return f"Placement({body})"
