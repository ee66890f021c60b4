"""Exact-membership pool of test vectors seen during one decode."""

import numpy as np


class UniquePool:
    """Hash set over the raw bytes of fixed-length int64 symbol vectors.

    Equality is full sequence equality. Lookups are O(1) amortised, so N
    insertions cost O(N n) for length-n vectors.
    """

    def __init__(self, length: int | None = None, capacity_hint: int = 0):
        self.length = length
        self.capacity_hint = capacity_hint
        self._seen: set[bytes] = set()

    def __len__(self) -> int:
        return len(self._seen)

    @property
    def count(self) -> int:
        return len(self._seen)

    def _key(self, tv) -> bytes:
        arr = np.ascontiguousarray(tv, dtype=np.int64)
        if self.length is None:
            self.length = arr.shape[0]
        elif arr.shape[0] != self.length:
            raise ValueError(f"vector length {arr.shape[0]} != pool length {self.length}")
        return arr.tobytes()

    def insert_if_new(self, tv) -> bool:
        key = self._key(tv)
        if key in self._seen:
            return False
        self._seen.add(key)
        return True

    def __contains__(self, tv) -> bool:
        return self._key(tv) in self._seen

    def insert_rows(self, rows) -> np.ndarray:
        """insert_if_new on each row in order; returns the boolean mask of new rows."""
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        if rows.ndim != 2:
            raise ValueError("expected a 2-D array of vectors")
        if self.length is None:
            self.length = rows.shape[1]
        elif rows.shape[1] != self.length:
            raise ValueError(f"vector length {rows.shape[1]} != pool length {self.length}")
        seen = self._seen
        width = rows.shape[1] * 8
        buf = rows.tobytes()
        mask = np.zeros(rows.shape[0], dtype=bool)
        for r in range(rows.shape[0]):
            key = buf[r * width : (r + 1) * width]
            if key not in seen:
                seen.add(key)
                mask[r] = True
        return mask
