import threading


class MultCounter:
    """Running total of real-valued scalar multiplications.

    One complex scalar multiplication is charged as 4 real ones. Additions
    are never charged. Increments are guarded by a lock so a counter can be
    shared across threads, although each solve normally owns its own.
    """

    def __init__(self, total=0):
        if total < 0:
            raise ValueError("counter cannot start negative")
        self._total = int(total)
        self._lock = threading.Lock()

    @property
    def total(self):
        return self._total

    def add(self, n):
        n = int(n)
        if n < 0:
            raise ValueError(f"cannot charge a negative count ({n})")
        with self._lock:
            self._total += n

    def __repr__(self):
        return f"MultCounter(total={self._total})"


def charge(counter, n):
    """Charge ``n`` units to ``counter`` if one was given."""
    if counter is not None:
        counter.add(n)


def vector_charge(v):
    """Real multiplications for scaling ``v`` by a real scalar (or a real dot)."""
    return 2 * v.size if v.dtype.kind == "c" else v.size
