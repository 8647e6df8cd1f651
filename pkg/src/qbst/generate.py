"""Random connected quasi-bipartite instances for tests and experiments."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import Instance, validate_instance


@dataclass(frozen=True)
class GeneratorConfig:
    max_vertices: int = 12
    min_vertices: int = 0
    min_terminals: int = 2
    max_terminals: int = 7
    max_steiner_degree: int = 5
    p_terminal_edge: float = 0.3
    p_steiner_edge: float = 0.5
    max_numerator: int = 20
    max_denominator: int = 5
    # when set, every Steiner vertex gets one of these degrees exactly
    steiner_degrees: Optional[tuple[int, ...]] = None
    # when set, costs are drawn from this list instead of p/q
    cost_values: Optional[tuple[int, ...]] = None


# Steiner vertices with 2-3 terminal neighbours and small integer costs; these
# have fractional relaxation optima far more often than uniform random graphs.
HYPERSTAR = GeneratorConfig(
    min_vertices=12,
    min_terminals=4,
    p_terminal_edge=0.1,
    steiner_degrees=(2, 3, 3, 3),
    cost_values=(1, 1, 1, 2),
)


def random_cost(rng: random.Random, cfg: GeneratorConfig) -> Fraction:
    if cfg.cost_values:
        return Fraction(rng.choice(cfg.cost_values))
    return Fraction(rng.randint(1, cfg.max_numerator), rng.randint(1, cfg.max_denominator))


def random_instance(rng: random.Random, cfg: GeneratorConfig = GeneratorConfig()) -> Instance:
    """Vertex labels are shuffled so terminals and the root land anywhere."""
    k = rng.randint(cfg.min_terminals, cfg.max_terminals)
    n = rng.randint(max(k, cfg.min_vertices), cfg.max_vertices)
    labels = list(range(n))
    rng.shuffle(labels)
    terminals = labels[:k]
    tset = set(terminals)
    steiner = labels[k:]
    edges: dict[tuple[int, int], Fraction] = {}

    def add(u, v):
        edges[(min(u, v), max(u, v))] = random_cost(rng, cfg)

    for i, u in enumerate(terminals):
        for v in terminals[i + 1:]:
            if rng.random() < cfg.p_terminal_edge:
                add(u, v)
    for s in steiner:
        if cfg.steiner_degrees:
            nbrs = rng.sample(terminals, min(k, rng.choice(cfg.steiner_degrees)))
        else:
            nbrs = [t for t in terminals if rng.random() < cfg.p_steiner_edge]
            rng.shuffle(nbrs)
        for t in nbrs[: cfg.max_steiner_degree]:
            add(s, t)

    # join components; every component with an edge contains a terminal
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in edges:
        parent[find(u)] = find(v)
    degree = {v: 0 for v in range(n)}
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    while True:
        comps: dict[int, list[int]] = {}
        for v in range(n):
            comps.setdefault(find(v), []).append(v)
        if len(comps) == 1:
            break
        groups = sorted(comps.values())
        a = next(g for g in groups if tset.intersection(g))
        b = next(g for g in groups if g is not a)
        u = rng.choice([t for t in a if t in tset])
        candidates = [v for v in b if v in tset or degree[v] < cfg.max_steiner_degree]
        v = rng.choice(candidates or b)
        add(u, v)
        degree[u] += 1
        degree[v] += 1
        parent[find(u)] = find(v)
    return validate_instance(
        n, [(u, v, c) for (u, v), c in sorted(edges.items())], terminals, rng.choice(terminals)
    )


def corpus(seed: int, size: int, configs: tuple[GeneratorConfig, ...] = (GeneratorConfig(), HYPERSTAR)) -> list[Instance]:
    """``size`` instances cycling through ``configs``; deterministic in ``seed``."""
    rng = random.Random(seed)
    return [random_instance(rng, configs[i % len(configs)]) for i in range(size)]


def random_minimal_point(rng: random.Random, dg) -> dict:
    """A random minimal feasible BCR point (not necessarily optimal).

    Random fractional values on most arcs are doubled until no cut is
    violated, then pruned with :func:`qbst.bcr.make_minimal`.  These points
    are fractional far more often than LP optima on small instances.
    """
    from .bcr import make_minimal, separate

    x = {a: Fraction(rng.randint(1, 6), rng.choice([2, 3, 4, 6])) for a in dg.arc_keys() if rng.random() < 0.8}
    while separate(dg, x):
        x = {a: v * 2 for a, v in x.items()} if x else {a: Fraction(1) for a in dg.arc_keys()}
        if len(x) < len(dg.arcs) and rng.random() < 0.3:
            x = {a: x.get(a, Fraction(1, 2)) for a in dg.arc_keys()}
    return make_minimal(dg, x)
