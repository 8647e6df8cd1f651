"""Exact max-flow / min-cut with symbolic infinite capacities.

Capacities are :class:`~fractions.Fraction` (or ints) or the :data:`INF` tag.
Internally every finite capacity is scaled by the lcm of the denominators so
the augmenting loop runs on Python ints; infinite residuals are ``None``.
Augmenting paths are breadth-first (Edmonds-Karp), so the number of
augmentations is O(V*E) whatever the capacity values are.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union


class Infinite:
    """Absorbing capacity tag.  Compares above every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("qbst.INF")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__


INF = Infinite()
Capacity = Union[Fraction, int, Infinite]


class NoFiniteCut(ValueError):
    """Every source/sink cut has infinite capacity."""


@dataclass
class FlowNetwork:
    node_count: int
    source: int
    sink: int
    arcs: list[tuple[int, int, Capacity]] = field(default_factory=list)

    def add_arc(self, tail: int, head: int, capacity: Capacity) -> int:
        if capacity is not INF and capacity < 0:
            raise ValueError(f"negative capacity {capacity}")
        self.arcs.append((tail, head, capacity))
        return len(self.arcs) - 1

    def copy(self) -> "FlowNetwork":
        return FlowNetwork(self.node_count, self.source, self.sink, list(self.arcs))


@dataclass(frozen=True)
class CutResult:
    value: Capacity
    source_side: frozenset[int]


class FlowSolution:
    """A maximum flow together with its final residual network."""

    def __init__(self, net: FlowNetwork):
        if net.source == net.sink:
            raise ValueError("source and sink coincide")
        self.net = net
        n = net.node_count
        scale = 1
        for _, _, c in net.arcs:
            if c is not INF:
                scale = math.lcm(scale, Fraction(c).denominator)
        self.scale = scale
        # residual arcs 2i (forward) and 2i+1 (backward) for input arc i
        self.head: list[int] = []
        self.res: list = []
        self.adj: list[list[int]] = [[] for _ in range(n)]
        for t, h, c in net.arcs:
            fwd = None if c is INF else int(Fraction(c) * scale)
            self.adj[t].append(len(self.head))
            self.head.append(h)
            self.res.append(fwd)
            self.adj[h].append(len(self.head))
            self.head.append(t)
            self.res.append(0)
        self.augmentations = 0
        self._value = self._run()

    def _run(self):
        s, t = self.net.source, self.net.sink
        head, res, adj = self.head, self.res, self.adj
        total = 0
        while True:
            pred = [-1] * self.net.node_count
            pred[s] = -2
            queue = deque([s])
            while queue and pred[t] == -1:
                u = queue.popleft()
                for e in adj[u]:
                    r = res[e]
                    if r is not None and r <= 0:
                        continue
                    w = head[e]
                    if pred[w] == -1:
                        pred[w] = e
                        queue.append(w)
            if pred[t] == -1:
                return total
            bottleneck = None
            w = t
            while w != s:
                e = pred[w]
                r = res[e]
                if r is not None and (bottleneck is None or r < bottleneck):
                    bottleneck = r
                w = head[e ^ 1]
            if bottleneck is None:
                return INF
            w = t
            while w != s:
                e = pred[w]
                if res[e] is not None:
                    res[e] -= bottleneck
                if res[e ^ 1] is not None:
                    res[e ^ 1] += bottleneck
                w = head[e ^ 1]
            total += bottleneck
            self.augmentations += 1

    @property
    def value(self) -> Capacity:
        if self._value is INF:
            return INF
        return Fraction(self._value, self.scale)

    def flow(self) -> list[Fraction]:
        """Flow on each input arc, in input order."""
        return [Fraction(self.res[2 * i + 1], self.scale) for i in range(len(self.net.arcs))]

    def _reach(self, start: int, forward: bool) -> set[int]:
        seen = {start}
        stack = [start]
        head, res, adj = self.head, self.res, self.adj
        while stack:
            u = stack.pop()
            for e in adj[u]:
                if forward:
                    r, w = res[e], head[e]
                else:
                    # arc w -> u in the residual graph is residual edge e ^ 1
                    r, w = res[e ^ 1], head[e]
                if (r is None or r > 0) and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    def _require_finite(self):
        if self._value is INF:
            raise NoFiniteCut("no finite cut separates source from sink")

    def minimal_cut(self) -> CutResult:
        self._require_finite()
        return CutResult(self.value, frozenset(self._reach(self.net.source, True)))

    def maximal_cut(self) -> CutResult:
        self._require_finite()
        reaches_sink = self._reach(self.net.sink, False)
        side = frozenset(set(range(self.net.node_count)) - reaches_sink)
        return CutResult(self.value, side)


def max_flow(net: FlowNetwork) -> tuple[Capacity, list[Fraction]]:
    sol = FlowSolution(net)
    if sol.value is INF:
        return INF, []
    return sol.value, sol.flow()


def min_cut_minimal(net: FlowNetwork) -> CutResult:
    """Source side = vertices reachable from the source in the residual graph."""
    return FlowSolution(net).minimal_cut()


def min_cut_maximal(net: FlowNetwork) -> CutResult:
    """Source side = vertices that cannot reach the sink in the residual graph."""
    return FlowSolution(net).maximal_cut()


def cut_capacity(net: FlowNetwork, side) -> Capacity:
    """Capacity of the arcs leaving ``side``; used by the brute-force checks."""
    side = set(side)
    total: Capacity = Fraction(0)
    for t, h, c in net.arcs:
        if t in side and h not in side:
            if c is INF:
                return INF
            total += c
    return total
