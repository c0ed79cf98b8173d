"""Fixed-capacity streaming structures for sliding-window extrema.

Every structure preallocates its storage at construction and never grows, so
a monitor's memory is fixed by its formula's interval widths.
"""
from __future__ import annotations

from .core import INF

MISSING = object()


class DelayLine:
    """Returns the value pushed ``delay`` steps earlier (``MISSING`` until then)."""

    __slots__ = ("delay", "buf", "pos")

    def __init__(self, delay: int):
        self.delay = delay
        self.buf = [MISSING] * delay
        self.pos = 0

    @property
    def capacity(self) -> int:
        return len(self.buf)

    def push(self, value):
        if not self.delay:
            return value
        out = self.buf[self.pos]
        self.buf[self.pos] = value
        self.pos = (self.pos + 1) % self.delay
        return out


class MonotonicWindow:
    """Circular monotonic deque of ``(index, value)`` for window max or min.

    For ``kind="max"`` values strictly decrease from front to back, so the
    front holds the window maximum; ``"min"`` is the mirror image.  Each push
    and expiry is amortized O(1).
    """

    __slots__ = ("cap", "idx", "val", "head", "size", "is_max", "identity")

    def __init__(self, capacity: int, kind: str = "max"):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.cap = capacity
        self.idx = [0] * capacity
        self.val = [0.0] * capacity
        self.head = 0
        self.size = 0
        self.is_max = kind == "max"
        self.identity = -INF if self.is_max else INF

    @property
    def capacity(self) -> int:
        return self.cap

    def __len__(self) -> int:
        return self.size

    def push(self, index: int, value: float) -> None:
        cap, val = self.cap, self.val
        if self.is_max:
            while self.size and val[(self.head + self.size - 1) % cap] <= value:
                self.size -= 1
        else:
            while self.size and val[(self.head + self.size - 1) % cap] >= value:
                self.size -= 1
        if self.size == cap:
            raise OverflowError("monotonic window over capacity")
        j = (self.head + self.size) % cap
        self.idx[j] = index
        val[j] = value
        self.size += 1

    def expire(self, oldest: int) -> None:
        """Drop entries whose index is below ``oldest``."""
        while self.size and self.idx[self.head] < oldest:
            self.head = (self.head + 1) % self.cap
            self.size -= 1

    def front(self) -> float:
        return self.val[self.head] if self.size else self.identity

    def cap_values(self, bound: float) -> None:
        """Replace every value ``v`` by ``min(v, bound)`` (max-deques only).

        The capped entries form a prefix; only the newest of them survives.
        """
        if not self.size or self.val[self.head] < bound:
            return
        last = None
        while self.size and self.val[self.head] >= bound:
            last = self.idx[self.head]
            self.head = (self.head + 1) % self.cap
            self.size -= 1
        self.head = (self.head - 1) % self.cap
        self.idx[self.head] = last
        self.val[self.head] = bound
        self.size += 1


def until_combine(x, y):
    """Associative summary for until over adjacent stretches ``x`` then ``y``.

    A summary ``(u, i)`` holds the best ``min(right(t'), inf left over [start, t'))``
    within the stretch and the infimum of ``left`` over it.
    """
    u1, i1 = x
    u2, i2 = y
    m = i1 if i1 <= u2 else u2
    return (u1 if u1 >= m else m, i1 if i1 <= i2 else i2)


UNTIL_IDENTITY = (-INF, INF)


class SlidingUntil:
    """Two-stack sliding-window aggregation of ``until_combine``.

    Supports push at the back, pop at the front and a query of the whole
    window's summary, all amortized O(1), in fixed storage.
    """

    def __init__(self, capacity: int):
        self.cap = capacity
        self.front_idx = [0] * capacity
        self.front_agg = [UNTIL_IDENTITY] * capacity
        self.nfront = 0
        self.back_idx = [0] * capacity
        self.back_elem = [UNTIL_IDENTITY] * capacity
        self.nback = 0
        self.back_agg = UNTIL_IDENTITY

    @property
    def capacity(self) -> int:
        return 2 * self.cap

    def __len__(self) -> int:
        return self.nfront + self.nback

    def push(self, index: int, elem) -> None:
        if self.nfront + self.nback == self.cap:
            raise OverflowError("sliding until window over capacity")
        self.back_idx[self.nback] = index
        self.back_elem[self.nback] = elem
        self.nback += 1
        self.back_agg = until_combine(self.back_agg, elem)

    def _flip(self) -> None:
        agg = UNTIL_IDENTITY
        # newest element ends at the bottom of the front stack
        for k in range(self.nback - 1, -1, -1):
            agg = until_combine(self.back_elem[k], agg)
            self.front_idx[self.nfront] = self.back_idx[k]
            self.front_agg[self.nfront] = agg
            self.nfront += 1
        self.nback = 0
        self.back_agg = UNTIL_IDENTITY

    def oldest(self):
        if not self.nfront:
            if not self.nback:
                return None
            return self.back_idx[0]
        return self.front_idx[self.nfront - 1]

    def pop(self) -> None:
        if not self.nfront:
            self._flip()
        self.nfront -= 1

    def expire(self, oldest: int) -> None:
        while len(self) and self.oldest() < oldest:
            self.pop()

    def query(self):
        front = self.front_agg[self.nfront - 1] if self.nfront else UNTIL_IDENTITY
        return until_combine(front, self.back_agg)
