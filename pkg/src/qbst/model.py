"""Exact-rational graph and full-component data model.

Vertices are dense integers ``0..n-1``.  Arcs of the bidirected graph are
identified by their ``(tail, head)`` pair, which is unique because parallel
edges are collapsed on validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

Arc = tuple[int, int]
ArcVector = dict[Arc, Fraction]


class ValidationError(ValueError):
    """Raised when a raw instance violates the model invariants."""


class SteinerSteinerEdge(ValidationError):
    pass


class NegativeCost(ValidationError):
    pass


class RootNotTerminal(ValidationError):
    pass


class EmptyTerminalSet(ValidationError):
    pass


class SelfLoop(ValidationError):
    pass


class VertexOutOfRange(ValidationError):
    pass


@dataclass(frozen=True)
class Instance:
    """Undirected quasi-bipartite Steiner tree instance.

    ``edges`` holds ``(u, v, cost)`` with ``u < v``; build instances through
    :func:`validate_instance` so the invariants hold.
    """

    n: int
    edges: tuple[tuple[int, int, Fraction], ...]
    terminals: frozenset[int]
    root: int

    def is_terminal(self, v: int) -> bool:
        return v in self.terminals

    @property
    def steiner(self) -> list[int]:
        return [v for v in range(self.n) if v not in self.terminals]

    def neighbours(self, v: int) -> list[int]:
        out = []
        for a, b, _ in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)

    def edge_cost(self, u: int, v: int) -> Fraction:
        key = (min(u, v), max(u, v))
        for a, b, c in self.edges:
            if (a, b) == key:
                return c
        raise KeyError(key)


def validate_instance(
    n: int,
    edges: Iterable[tuple[int, int, object]],
    terminals: Iterable[int],
    root: Optional[int] = None,
) -> Instance:
    """Canonicalize and check a raw instance.

    Costs may be anything :class:`fractions.Fraction` accepts (ints, strings
    like ``"3/2"``, Fractions); floats are rejected.  Parallel edges collapse
    to the cheapest one, keeping the position of the first occurrence.  The
    root defaults to the lowest terminal id.
    """
    terms = frozenset(int(t) for t in terminals)
    if not terms:
        raise EmptyTerminalSet("instance has no terminals")
    for t in terms:
        if not 0 <= t < n:
            raise VertexOutOfRange(f"terminal {t} outside 0..{n - 1}")
    if root is None:
        root = min(terms)
    if root not in terms:
        raise RootNotTerminal(f"root {root} is not a terminal")

    order: list[tuple[int, int]] = []
    cheapest: dict[tuple[int, int], Fraction] = {}
    for u, v, c in edges:
        u, v = int(u), int(v)
        if isinstance(c, float):
            raise TypeError("edge costs must be exact (int, Fraction or 'p/q')")
        cost = Fraction(c)
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"edge ({u}, {v}) outside 0..{n - 1}")
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        if u not in terms and v not in terms:
            raise SteinerSteinerEdge(f"edge ({u}, {v}) joins two Steiner vertices")
        if cost < 0:
            raise NegativeCost(f"edge ({u}, {v}) has negative cost {cost}")
        key = (min(u, v), max(u, v))
        if key not in cheapest:
            order.append(key)
            cheapest[key] = cost
        elif cost < cheapest[key]:
            cheapest[key] = cost
    return Instance(
        n=n,
        edges=tuple((u, v, cheapest[(u, v)]) for u, v in order),
        terminals=terms,
        root=root,
    )


@dataclass(frozen=True)
class Digraph:
    """Bidirected version of an instance.

    Edge ``i`` yields arc ids ``2i`` (``u -> v``) and ``2i + 1`` (``v -> u``).
    """

    instance: Instance
    arcs: tuple[tuple[int, int, Fraction], ...]
    cost: dict[Arc, Fraction] = field(compare=False, repr=False)
    arc_id: dict[Arc, int] = field(compare=False, repr=False)

    @property
    def n(self) -> int:
        return self.instance.n

    @property
    def terminals(self) -> frozenset[int]:
        return self.instance.terminals

    @property
    def root(self) -> int:
        return self.instance.root

    def arc_keys(self) -> list[Arc]:
        return [(t, h) for t, h, _ in self.arcs]

    def has_arc(self, tail: int, head: int) -> bool:
        return (tail, head) in self.cost


def bidirect(inst: Instance) -> Digraph:
    arcs = []
    for u, v, c in inst.edges:
        arcs.append((u, v, c))
        arcs.append((v, u, c))
    cost = {(t, h): c for t, h, c in arcs}
    arc_id = {(t, h): i for i, (t, h, _) in enumerate(arcs)}
    return Digraph(instance=inst, arcs=tuple(arcs), cost=cost, arc_id=arc_id)


def cut_arcs(dg: Digraph, U: Iterable[int]) -> set[Arc]:
    """Arcs leaving ``U``."""
    inside = set(U)
    return {(t, h) for t, h, _ in dg.arcs if t in inside and h not in inside}


@dataclass(frozen=True)
class DirectedFullComponent:
    """A star around ``centre`` oriented toward ``sink``, or a single arc.

    Equality and hashing use ``(centre, sink, sources)`` only.
    """

    centre: Optional[int]
    sink: int
    sources: frozenset[int]
    cost: Fraction = field(default=Fraction(0), compare=False)

    def __post_init__(self):
        if not self.sources:
            raise ValueError("a full component needs at least one source")
        if self.sink in self.sources:
            raise ValueError("sink cannot also be a source")
        if self.centre is None and len(self.sources) != 1:
            raise ValueError("a component without centre has exactly one source")

    @property
    def arcs(self) -> list[Arc]:
        if self.centre is None:
            (w,) = self.sources
            return [(w, self.sink)]
        v = self.centre
        return [(w, v) for w in sorted(self.sources)] + [(v, self.sink)]

    @property
    def sink_arc(self) -> Arc:
        return self.arcs[-1]

    def terminals(self) -> frozenset[int]:
        return self.sources | {self.sink}

    def sort_key(self) -> tuple:
        centre = -1 if self.centre is None else self.centre
        return (centre, self.sink, tuple(sorted(self.sources)))

    def __repr__(self) -> str:
        srcs = ",".join(str(w) for w in sorted(self.sources))
        mid = "" if self.centre is None else f"->{self.centre}"
        return f"K({{{srcs}}}{mid}->{self.sink})"


def make_component(
    dg: Digraph, sink: int, sources: Iterable[int], centre: Optional[int] = None
) -> DirectedFullComponent:
    """Build a component whose cost is read off ``dg``; all its arcs must exist."""
    K = DirectedFullComponent(centre=centre, sink=sink, sources=frozenset(sources))
    missing = [a for a in K.arcs if a not in dg.cost]
    if missing:
        raise ValueError(f"component {K!r} uses missing arcs {missing}")
    if centre is not None and centre in dg.terminals:
        raise ValueError(f"centre {centre} is a terminal")
    return DirectedFullComponent(
        centre=centre,
        sink=sink,
        sources=K.sources,
        cost=sum((dg.cost[a] for a in K.arcs), Fraction(0)),
    )


ComponentVector = dict[DirectedFullComponent, Fraction]


def component_crosses(K: DirectedFullComponent, U: Iterable[int]) -> bool:
    inside = set(U)
    return K.sink not in inside and not K.sources.isdisjoint(inside)


def clean(vec: dict) -> dict:
    """Drop zero entries; negative entries are a bug."""
    out = {}
    for k, val in vec.items():
        if val < 0:
            raise ValueError(f"negative entry {val} at {k!r}")
        if val:
            out[k] = val
    return out


def arc_cost(dg: Digraph, x: ArcVector) -> Fraction:
    return sum((dg.cost[a] * val for a, val in x.items()), Fraction(0))


def component_cost(y: ComponentVector) -> Fraction:
    return sum((K.cost * val for K, val in y.items()), Fraction(0))


def fmt_rational(q: Fraction) -> str:
    """Exact ``p/q`` rendering used in reports (integers keep ``/1``)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"
