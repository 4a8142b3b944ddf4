"""
Strength-proportional sampling over a growing set of weights.

CumulativeWeightIndex is a Fenwick tree (binary indexed tree) supporting
append, point increase and inverse-CDF search in O(log n). NaiveWeightIndex
offers the same interface backed by a linear scan and serves as the oracle.

Both resolve a variate u to the smallest position i whose prefix sum is
strictly greater than u * total. The answers agree exactly whenever every
partial sum is exact in floating point, e.g. integer or dyadic weights.
For other real weights the tree adds partial sums in a different order
than the left-to-right scan, so when u * total falls within rounding of a
prefix boundary the two may return neighbouring positive positions.
Neither ever returns a position of weight zero.
"""
from typing import Iterable, List, Optional, Sequence

from trafficweb.core.errors import EmptyDistributionError, ParameterDomainError


def _check_weight(w: float) -> float:
    w = float(w)
    if not w >= 0:
        raise ParameterDomainError(f"Weights must be non-negative, got {w}")
    return w


def _last_positive(weights: Sequence[float]) -> int:
    for i in range(len(weights) - 1, -1, -1):
        if weights[i] > 0:
            return i
    raise EmptyDistributionError("Cannot sample from an index with zero total weight")


def naive_sample(weights: Sequence[float], u: float) -> int:
    """Linear-scan reference for CumulativeWeightIndex.sample"""
    total = 0.0
    for w in weights:
        total += w
    if not total > 0:
        raise EmptyDistributionError("Cannot sample from an index with zero total weight")
    target = u * total
    running = 0.0
    for i, w in enumerate(weights):
        running += w
        if running > target:
            return i
    # u * total rounded up to the total
    return _last_positive(weights)


class CumulativeWeightIndex:
    """Fenwick tree over a growable array of non-negative weights."""

    def __init__(self, capacity: int = 0):
        self._capacity = max(int(capacity), 0)
        self._tree: List[float] = [0.0] * (self._capacity + 1)
        self._weights: List[float] = []
        self._total = 0.0

    @classmethod
    def build(cls, weights: Iterable[float], capacity: Optional[int] = None) -> "CumulativeWeightIndex":
        values = [_check_weight(w) for w in weights]
        index = cls(max(capacity or 0, len(values)))
        index._weights = values
        index._rebuild()
        return index

    def _rebuild(self) -> None:
        # Linear-time construction: push each node's partial sum into its parent
        capacity = self._capacity
        tree = [0.0] * (capacity + 1)
        total = 0.0
        for i, w in enumerate(self._weights, start=1):
            tree[i] = w
            total += w
        for i in range(1, capacity + 1):
            parent = i + (i & -i)
            if parent <= capacity:
                tree[parent] += tree[i]
        self._tree = tree
        self._total = total

    def __len__(self) -> int:
        return len(self._weights)

    @property
    def total(self) -> float:
        return self._total

    @property
    def capacity(self) -> int:
        return self._capacity

    def weights(self) -> List[float]:
        return list(self._weights)

    def _add(self, position: int, dw: float) -> None:
        tree = self._tree
        capacity = self._capacity
        j = position + 1
        while j <= capacity:
            tree[j] += dw
            j += j & -j

    def append(self, w: float) -> None:
        w = _check_weight(w)
        if len(self._weights) == self._capacity:
            self._weights.append(w)
            self._capacity = max(1, 2 * self._capacity)
            self._rebuild()
            return
        self._weights.append(w)
        self._total += w
        self._add(len(self._weights) - 1, w)

    def increase(self, i: int, dw: float) -> None:
        if not 0 <= i < len(self._weights):
            raise IndexError(f"position {i} out of range for index of size {len(self._weights)}")
        if not dw >= 0:
            raise ParameterDomainError(f"Weight increments must be non-negative, got {dw}")
        self._weights[i] += dw
        self._total += dw
        self._add(i, dw)

    def prefix_sum(self, i: int) -> float:
        """Sum of weights[0..i] inclusive"""
        if not 0 <= i < len(self._weights):
            raise IndexError(f"position {i} out of range for index of size {len(self._weights)}")
        tree = self._tree
        j = i + 1
        s = 0.0
        while j > 0:
            s += tree[j]
            j -= j & -j
        return s

    def sample(self, u: float) -> int:
        if not self._total > 0:
            raise EmptyDistributionError("Cannot sample from an index with zero total weight")
        tree = self._tree
        capacity = self._capacity
        remaining = u * self._total
        position = 0
        step = 1 << (capacity.bit_length() - 1)
        # Largest position whose prefix sum is <= target; the answer is the next one
        while step:
            nxt = position + step
            if nxt <= capacity and tree[nxt] <= remaining:
                position = nxt
                remaining -= tree[nxt]
            step >>= 1
        weights = self._weights
        # rounding can stop the descent on a zero weight sitting at a boundary
        while position < len(weights) and weights[position] == 0:
            position += 1
        if position >= len(weights):
            return _last_positive(weights)
        return position


class NaiveWeightIndex:
    """Same interface as CumulativeWeightIndex, linear time everywhere."""

    def __init__(self, capacity: int = 0):
        self._weights: List[float] = []
        self._total = 0.0

    @classmethod
    def build(cls, weights: Iterable[float], capacity: Optional[int] = None) -> "NaiveWeightIndex":
        index = cls()
        for w in weights:
            index.append(w)
        return index

    def __len__(self) -> int:
        return len(self._weights)

    @property
    def total(self) -> float:
        return self._total

    def weights(self) -> List[float]:
        return list(self._weights)

    def append(self, w: float) -> None:
        w = _check_weight(w)
        self._weights.append(w)
        self._total += w

    def increase(self, i: int, dw: float) -> None:
        if not 0 <= i < len(self._weights):
            raise IndexError(f"position {i} out of range for index of size {len(self._weights)}")
        if not dw >= 0:
            raise ParameterDomainError(f"Weight increments must be non-negative, got {dw}")
        self._weights[i] += dw
        self._total += dw

    def prefix_sum(self, i: int) -> float:
        if not 0 <= i < len(self._weights):
            raise IndexError(f"position {i} out of range for index of size {len(self._weights)}")
        s = 0.0
        for w in self._weights[: i + 1]:
            s += w
        return s

    def sample(self, u: float) -> int:
        if not self._total > 0:
            raise EmptyDistributionError("Cannot sample from an index with zero total weight")
        target = u * self._total
        running = 0.0
        for i, w in enumerate(self._weights):
            running += w
            if running > target:
                return i
        return _last_positive(self._weights)
