"""Seeded variate streams.

The growth engine consumes exactly one uniform variate per target draw
(accepted or rejected), in draw order. Anything exposing ``uniform()``
can drive it.
"""
from __future__ import annotations

from typing import Iterable, List, Protocol

import numpy as np

from trafficweb.core.config import SEED_LIMIT

_BLOCK = 4096


class VariateStream(Protocol):
    def uniform(self) -> float:
        ...


class SeededRNG:
    """PCG64 generator handing out uniforms in [0, 1) one at a time."""

    def __init__(self, seed: int):
        if not 0 <= seed < SEED_LIMIT:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self._seed = seed
        self._generator = np.random.default_rng(seed)
        self._buffer: List[float] = []
        self._cursor = 0

    @property
    def seed(self) -> int:
        return self._seed

    def uniform(self) -> float:
        # Block refills keep the stream identical to drawing one at a time
        if self._cursor == len(self._buffer):
            self._buffer = self._generator.random(_BLOCK).tolist()
            self._cursor = 0
        value = self._buffer[self._cursor]
        self._cursor += 1
        return value

    def derive(self, offset: int) -> SeededRNG:
        """Generator for ensemble member ``offset``: seed + offset (mod 2^64)"""
        return SeededRNG((self._seed + offset) % SEED_LIMIT)


class ScriptedVariates:
    """Replays a fixed list of variates; used for hand-traced steps."""

    def __init__(self, values: Iterable[float]):
        self._values = list(values)
        self._cursor = 0

    @property
    def consumed(self) -> int:
        return self._cursor

    def uniform(self) -> float:
        if self._cursor >= len(self._values):
            raise IndexError(f"scripted variates exhausted after {self._cursor} draws")
        value = self._values[self._cursor]
        self._cursor += 1
        return value
