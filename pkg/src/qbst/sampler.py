"""Random sampling of Steiner centres from a BCR solution.

A centre ``v`` is drawn with probability ``x(delta+(v)) / M`` where ``M`` is
the total outgoing mass of all Steiner vertices; after ``ceil(M ln 3)``
draws the answer is a minimum spanning tree on the terminals plus the drawn
centres.  Draws are exact: each probability is realized as an integer weight
over the common denominator of the masses.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import accumulate
from typing import Iterable, Optional

from .model import ArcVector, ComponentVector, Instance


class ZeroMass(ValueError):
    pass


class DisconnectedAfterRetries(RuntimeError):
    pass


MAX_RETRIES = 64


def _ln3_upper(bits: int = 64) -> Fraction:
    """Dyadic upper bound on ln 3 with ``bits`` fractional bits."""
    with localcontext() as ctx:
        ctx.prec = 60
        ln3 = Decimal(3).ln()
    return Fraction(math.ceil(Fraction(ln3) * 2**bits), 2**bits)


LN3_UPPER = _ln3_upper()


@dataclass(frozen=True)
class SamplingPlan:
    mass_per_centre: dict[int, Fraction]
    M: Fraction
    rounds: int
    seed: int

    def probabilities(self) -> dict[int, Fraction]:
        return {v: m / self.M for v, m in self.mass_per_centre.items()}


@dataclass(frozen=True)
class SampledTree:
    sampled_vertices: tuple[int, ...]
    tree_edges: tuple[int, ...]
    cost: Fraction
    retries: int


def outgoing_mass(x: ArcVector, v: int) -> Fraction:
    return sum((val for (t, _), val in x.items() if t == v), Fraction(0))


def build_plan(x: ArcVector, inst: Instance, seed: int = 0) -> SamplingPlan:
    masses = {v: outgoing_mass(x, v) for v in inst.steiner}
    masses = {v: m for v, m in masses.items() if m}
    M = sum(masses.values(), Fraction(0))
    if not M:
        if len(inst.terminals) >= 2 and not _terminals_connected(inst):
            raise ZeroMass("no Steiner mass, and the terminals alone are disconnected")
        return SamplingPlan({}, Fraction(0), 0, seed)
    return SamplingPlan(masses, M, math.ceil(M * LN3_UPPER), seed)


def _terminals_connected(inst: Instance) -> bool:
    _, edges = minimum_spanning_tree(inst, set(inst.terminals))
    return len(edges) == len(inst.terminals) - 1


def _find(parent: list[int], v: int) -> int:
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


def minimum_spanning_tree(inst: Instance, vertices: set[int]) -> tuple[Fraction, list[int]]:
    """Kruskal on the subgraph induced by ``vertices``; ties broken by edge id.

    Returns the forest when the subgraph is disconnected.
    """
    parent = list(range(inst.n))
    order = sorted(
        (i for i, (u, v, _) in enumerate(inst.edges) if u in vertices and v in vertices),
        key=lambda i: (inst.edges[i][2], i),
    )
    cost = Fraction(0)
    chosen = []
    for i in order:
        u, v, c = inst.edges[i]
        ru, rv = _find(parent, u), _find(parent, v)
        if ru != rv:
            parent[ru] = rv
            chosen.append(i)
            cost += c
    return cost, chosen


class _Sampler:
    def __init__(self, plan: SamplingPlan):
        self.centres = sorted(plan.mass_per_centre)
        den = 1
        for m in plan.mass_per_centre.values():
            den = math.lcm(den, m.denominator)
        weights = [int(plan.mass_per_centre[v] * den) for v in self.centres]
        self.cum = list(accumulate(weights))

    def draw(self, rng: random.Random) -> int:
        k = rng.randrange(self.cum[-1])
        return self.centres[bisect_right(self.cum, k)]


def sample_tree(plan: SamplingPlan, inst: Instance, trial: int = 0) -> SampledTree:
    """One run of the sampler.  The generator is seeded from ``(plan.seed, trial)``.

    A draw whose induced subgraph does not connect everything is discarded
    and redrawn from scratch, at most :data:`MAX_RETRIES` times.
    """
    rng = random.Random(f"{plan.seed}/{trial}")
    need = set(inst.terminals)
    if plan.rounds == 0:
        cost, edges = minimum_spanning_tree(inst, need)
        return SampledTree((), tuple(edges), cost, 0)
    sampler = _Sampler(plan)
    for retries in range(MAX_RETRIES + 1):
        drawn = tuple(sampler.draw(rng) for _ in range(plan.rounds))
        span = need | set(drawn)
        cost, edges = minimum_spanning_tree(inst, span)
        if len(edges) == len(span) - 1:
            return SampledTree(drawn, tuple(edges), cost, retries)
    raise DisconnectedAfterRetries(f"{MAX_RETRIES} redraws left the sampled subgraph disconnected")


def verify_distribution(x: ArcVector, y: ComponentVector, inst: Instance) -> tuple[bool, Optional[int]]:
    """Per Steiner vertex: the y-mass of components centred there equals x(delta+(v)).

    Returns ``(False, v)`` for the first centre where the identity fails.
    """
    per_centre: dict[int, Fraction] = {}
    for K, val in y.items():
        if K.centre is not None:
            per_centre[K.centre] = per_centre.get(K.centre, 0) + val
    for v in inst.steiner:
        if per_centre.get(v, 0) != outgoing_mass(x, v):
            return False, v
    return True, None


def tree_is_spanning(inst: Instance, vertices: Iterable[int], edges: Iterable[int]) -> bool:
    """Structural check: ``edges`` is a spanning tree of ``vertices``."""
    vertices = set(vertices)
    edges = list(edges)
    if len(edges) != len(vertices) - 1:
        return False
    parent = list(range(inst.n))
    for i in edges:
        u, v, _ = inst.edges[i]
        if u not in vertices or v not in vertices:
            return False
        ru, rv = _find(parent, u), _find(parent, v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True
