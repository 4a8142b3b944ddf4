from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import networkx as nx
import numpy as np

from trafficweb.services.growth_service import GrowthState


@dataclass(frozen=True, eq=False)
class GraphView:
    """
    Immutable snapshot of a weighted directed graph.

    Node ids are 0-based birth order. Edges are stored as parallel arrays
    ordered by source. s_in here is the sum of in-edge weights,
    without the node's own initial strength.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    birth: np.ndarray
    m: Optional[int] = None
    delta: Optional[float] = None
    n0: Optional[int] = None
    seed: Optional[int] = None

    @classmethod
    def from_state(cls, state: GrowthState) -> "GraphView":
        n = state.size
        src = np.fromiter(
            (i for i in range(n) for _ in state.out_targets[i]), dtype=np.int64
        )
        dst = np.fromiter(
            (j for targets in state.out_targets for j in targets), dtype=np.int64
        )
        weight = np.fromiter(
            (w for weights in state.out_weights for w in weights), dtype=np.float64
        )
        params = state.params
        return cls(
            n=n,
            src=src,
            dst=dst,
            weight=weight,
            birth=np.asarray(state.birth, dtype=np.int64),
            m=params.m,
            delta=params.delta,
            n0=params.n0,
            seed=params.rng_seed,
        )

    @property
    def n_edges(self) -> int:
        return int(self.src.size)

    @cached_property
    def k_in(self) -> np.ndarray:
        return np.bincount(self.dst, minlength=self.n).astype(np.int64)

    @cached_property
    def k_out(self) -> np.ndarray:
        return np.bincount(self.src, minlength=self.n).astype(np.int64)

    @cached_property
    def s_in(self) -> np.ndarray:
        return np.bincount(self.dst, weights=self.weight, minlength=self.n).astype(np.float64)

    @cached_property
    def s_out(self) -> np.ndarray:
        return np.bincount(self.src, weights=self.weight, minlength=self.n).astype(np.float64)

    @cached_property
    def is_seed(self) -> np.ndarray:
        if self.n0 is None:
            return np.zeros(self.n, dtype=bool)
        return np.arange(self.n) < self.n0

    @cached_property
    def undirected(self) -> nx.Graph:
        """Simple undirected projection: reciprocal pairs merge, self-loops dropped"""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from((int(a), int(b)) for a, b in zip(self.src, self.dst) if a != b)
        return graph

    @cached_property
    def degree(self) -> np.ndarray:
        """Undirected degree k of every node in the simple projection"""
        graph = self.undirected
        return np.fromiter((graph.degree[i] for i in range(self.n)), dtype=np.int64, count=self.n)
