"""Decompose a minimal BCR solution into directed full components.

The point ``(x, y)`` starts at ``(x, 0)`` and weight is shifted from the arcs
of one feasible star ``K`` onto ``y_K`` at a time until every arc that
leaves a Steiner vertex is empty.  Every test below is a min-cut in the
auxiliary digraph built by :func:`build_support_digraph`, in which each
component of ``y`` gets its own copy of its centre.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, TextIO

from .flow import INF, FlowNetwork, FlowSolution
from .model import (
    ArcVector,
    ComponentVector,
    Digraph,
    DirectedFullComponent,
    clean,
    component_crosses,
    fmt_rational,
    make_component,
)

log = logging.getLogger(__name__)


class InvariantBreach(RuntimeError):
    """The point left the polyhedron or a structural guarantee failed."""


class NoFeasibleComponent(InvariantBreach):
    pass


@dataclass
class PolyhedronPoint:
    x: ArcVector
    y: ComponentVector = field(default_factory=dict)

    def shifted(self, K: DirectedFullComponent, lam: Fraction) -> "PolyhedronPoint":
        x = dict(self.x)
        for a in K.arcs:
            x[a] = x.get(a, 0) - lam
        y = dict(self.y)
        y[K] = y.get(K, 0) + lam
        return PolyhedronPoint(clean(x), clean(y))

    def slack(self, U: Iterable[int]) -> Fraction:
        """``x(delta+(U)) + y(Delta+(U)) - 1``."""
        U = set(U)
        total = sum((val for (t, h), val in self.x.items() if t in U and h not in U), Fraction(0))
        total += sum((val for K, val in self.y.items() if component_crosses(K, U)), Fraction(0))
        return total - 1


@dataclass(frozen=True)
class FeasibilityFamilies:
    centre: int
    sink: int
    C: frozenset[int]
    Xstar: tuple[frozenset[int], ...]
    Ystar: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class StepResult:
    component: DirectedFullComponent
    lam: Fraction
    binding_set: Optional[frozenset[int]] = None
    rounds: int = 1


def _set_key(S: frozenset[int]) -> tuple:
    return (min(S) if S else -1, tuple(sorted(S)))


def phi(y: ComponentVector, dg: Optional[Digraph] = None) -> ArcVector:
    x: dict = {}
    for K, val in y.items():
        for a in K.arcs:
            if dg is not None and not dg.has_arc(*a):
                raise ValueError(f"{K!r} uses arc {a} missing from the digraph")
            x[a] = x.get(a, 0) + val
    return clean(x)


class SupportGraph:
    """Base auxiliary network of a point of the polyhedron.

    Nodes ``0..n-1`` are the vertices, ``n`` is the super source and
    ``n + 1 + i`` is the private centre of the ``i``-th support component.
    """

    def __init__(self, pt: PolyhedronPoint, dg: Digraph):
        self.dg = dg
        self.n = dg.n
        self.s = dg.n
        self.components = sorted(pt.y, key=DirectedFullComponent.sort_key)
        self.arcs: list[tuple[int, int, object]] = []
        for a in dg.arc_keys():
            val = pt.x.get(a, 0)
            if val:
                self.arcs.append((a[0], a[1], val))
        for i, K in enumerate(self.components):
            vk = self.n + 1 + i
            for w in sorted(K.sources):
                self.arcs.append((w, vk, INF))
            self.arcs.append((vk, K.sink, pt.y[K]))

    @property
    def node_count(self) -> int:
        return self.n + 1 + len(self.components)

    def network(self, extra: Iterable[tuple[int, int, object]] = ()) -> FlowNetwork:
        net = FlowNetwork(self.node_count, self.s, self.dg.root, list(self.arcs))
        for t, h, c in extra:
            if t != h:
                net.add_arc(t, h, c)
        return net

    def solve(self, extra: Iterable[tuple[int, int, object]] = ()) -> FlowSolution:
        return FlowSolution(self.network(extra))

    def vertex_side(self, side: Iterable[int]) -> frozenset[int]:
        return frozenset(v for v in side if v < self.n)


def build_support_digraph(pt: PolyhedronPoint, dg: Digraph) -> SupportGraph:
    return SupportGraph(pt, dg)


def _maximal(sets: Iterable[frozenset[int]]) -> tuple[frozenset[int], ...]:
    uniq = set(sets)
    keep = [S for S in uniq if not any(S < T for T in uniq)]
    return tuple(sorted(keep, key=_set_key))


def _minimal(sets: Iterable[frozenset[int]]) -> tuple[frozenset[int], ...]:
    uniq = set(sets)
    keep = [S for S in uniq if not any(T < S for T in uniq)]
    return tuple(sorted(keep, key=_set_key))


def candidate_sources(pt: PolyhedronPoint, dg: Digraph, centre: int, sink: int) -> list[int]:
    """Neighbours ``w != sink`` of the centre with ``x(w, centre) > 0``."""
    return sorted(
        t for (t, h) in pt.x if h == centre and t != sink and pt.x[(t, h)] > 0
    )


def compute_families(
    pt: PolyhedronPoint, dg: Digraph, centre: int, sink: int, D: Optional[SupportGraph] = None
) -> FeasibilityFamilies:
    v, u, r = centre, sink, dg.root
    D = D or build_support_digraph(pt, dg)
    s = D.s

    def tight(sol: FlowSolution) -> bool:
        value = sol.value
        if value is not INF and value < 1:
            raise InvariantBreach(f"cut of value {value} < 1: point is outside the polyhedron")
        return value == 1

    C = []
    for w in candidate_sources(pt, dg, v, u):
        # no valid set holds the root, so neither test can succeed
        if w == r or u == r:
            C.append(w)
            continue
        if not tight(D.solve([(s, w, INF), (s, u, INF), (v, r, INF)])):
            C.append(w)
    Cset = frozenset(C)

    X, Y = [], []
    for w in C:
        if w == r:
            continue
        sol = D.solve([(s, w, INF), (v, u, INF), (u, r, INF)])
        if tight(sol):
            X.append(D.vertex_side(sol.maximal_cut().source_side) & Cset)
        sol = D.solve([(s, w, INF), (s, v, INF), (u, r, INF)])
        if tight(sol):
            Y.append(D.vertex_side(sol.minimal_cut().source_side) & Cset)
    return FeasibilityFamilies(v, u, Cset, _maximal(X), _minimal(Y))


def find_feasible_component(
    fam: FeasibilityFamilies, pt: PolyhedronPoint, dg: Digraph
) -> DirectedFullComponent:
    """Pick one source per set of ``Ystar`` with at most one per ``Xstar`` set.

    Terminals of ``C`` outside every ``Xstar`` set act as singleton sets.
    The choice is a maximum flow in a small bipartite network.
    """
    v, u = fam.centre, fam.sink
    if not fam.C:
        raise NoFeasibleComponent(f"no eligible source for centre {v}, sink {u}")
    if not fam.Ystar:
        w = max(sorted(fam.C), key=lambda t: pt.x.get((t, v), 0))
        return make_component(dg, u, [w], v)

    covered = frozenset().union(*fam.Xstar) if fam.Xstar else frozenset()
    xsets = sorted(list(fam.Xstar) + [frozenset([w]) for w in fam.C - covered], key=_set_key)
    ysets = list(fam.Ystar)
    p, q = len(xsets), len(ysets)
    net = FlowNetwork(p + q + 2, 0, p + q + 1)
    for i in range(p):
        net.add_arc(0, 1 + i, 1)
    pairs = {}
    for i, X in enumerate(xsets):
        for j, Y in enumerate(ysets):
            shared = X & Y
            if shared:
                pairs[net.add_arc(1 + i, 1 + p + j, 1)] = min(shared)
    for j in range(q):
        net.add_arc(1 + p + j, p + q + 1, 1)
    sol = FlowSolution(net)
    if sol.value != q:
        raise NoFeasibleComponent(
            f"matching covers {sol.value} of {q} Y-sets for centre {v}, sink {u}: {fam}"
        )
    flow = sol.flow()
    sources = sorted(w for arc, w in pairs.items() if flow[arc] == 1)
    return make_component(dg, u, sources, v)


def cut_count(K: DirectedFullComponent, U: Iterable[int]) -> int:
    """``|delta+(U) & K| - Delta+_K(U)``: how fast ``U`` loses slack per unit step."""
    U = set(U)
    arcs_out = sum(1 for t, h in K.arcs if t in U and h not in U)
    return arcs_out - int(component_crosses(K, U))


def max_step_lambda(pt: PolyhedronPoint, K: DirectedFullComponent, dg: Digraph) -> StepResult:
    """Largest ``lam`` keeping ``(x - lam chi_K, y + lam e_K)`` in the polyhedron."""
    lam = min(pt.x.get(a, Fraction(0)) for a in K.arcs)
    if lam <= 0:
        raise InvariantBreach(f"{K!r} uses an empty arc")
    binding = None
    others = sorted(dg.terminals - {dg.root})
    rounds = 0
    while True:
        rounds += 1
        D = build_support_digraph(pt.shifted(K, lam), dg)
        worst = None
        for w in others:
            sol = D.solve([(D.s, w, INF)])
            if worst is None or sol.value < worst[0]:
                worst = (sol.value, sol)
        if worst is None or worst[0] >= 1:
            return StepResult(K, lam, binding, rounds)
        U = D.vertex_side(worst[1].minimal_cut().source_side)
        alpha = cut_count(K, U)
        if alpha <= 0:
            raise InvariantBreach(f"set {sorted(U)} violated but not crossed twice by {K!r}")
        new = pt.slack(U) / alpha
        if not 0 < new < lam:
            raise InvariantBreach(f"step for {K!r} shrank to {new} (was {lam})")
        lam, binding = new, U


@dataclass
class StepRecord:
    centre: Optional[int]
    sink: int
    sources: tuple[int, ...]
    lam: Fraction
    kind: str

    def as_dict(self) -> dict:
        return {
            "centre": self.centre,
            "sink": self.sink,
            "sources": list(self.sources),
            "lambda": fmt_rational(self.lam),
            "kind": self.kind,
        }


class Decomposer:
    """Stateful run of the decomposition; see :func:`decompose`.

    With ``oracle=True`` every step is cross-checked against brute-force
    enumeration of all valid vertex sets (exponential in ``n``): membership
    in the polyhedron, persistence of tight sets, the min-cut families, the
    feasibility conditions of the chosen star, uncrossing of tight pairs and
    maximality of the step.  Any disagreement raises :class:`InvariantBreach`.
    """

    def __init__(self, dg: Digraph, x: ArcVector, oracle: bool = False, trace: Optional[TextIO] = None):
        self.dg = dg
        self.x0 = clean(dict(x))
        self.oracle = oracle
        self.trace = trace
        self.steps: list[StepRecord] = []
        self.iterations = 0
        self.checks = {"families": 0, "components": 0, "uncrossed_pairs": 0, "points": 0}
        self.families_log: list[FeasibilityFamilies] = []

    def _emit(self, rec: StepRecord) -> None:
        self.steps.append(rec)
        if self.trace is not None:
            self.trace.write(json.dumps(rec.as_dict(), sort_keys=True) + "\n")

    def _next_sink_arc(self, x: ArcVector):
        R = self.dg.terminals
        arcs = [a for a, val in x.items() if a[0] not in R and a[1] in R and val > 0]
        return min(arcs) if arcs else None

    def run(self) -> ComponentVector:
        dg = self.dg
        pt = PolyhedronPoint(dict(self.x0), {})
        if self.oracle:
            from . import oracle as _oracle

            table = _oracle.SlackTable(dg, pt.x, pt.y)
            table.require_feasible()
        while (arc := self._next_sink_arc(pt.x)) is not None:
            v, u = arc
            while pt.x.get(arc, 0) > 0:
                D = build_support_digraph(pt, dg)
                fam = compute_families(pt, dg, v, u, D)
                self.families_log.append(fam)
                K = find_feasible_component(fam, pt, dg)
                if self.oracle:
                    self._oracle_before(table, fam, K)
                step = max_step_lambda(pt, K, dg)
                new = pt.shifted(K, step.lam)
                if self.oracle:
                    table = self._oracle_after(table, new, K, step)
                saturating = any(a not in new.x for a in K.arcs)
                kind = "saturating" if saturating else "set-binding"
                self._emit(StepRecord(v, u, tuple(sorted(K.sources)), step.lam, kind))
                pt = new
                self.iterations += 1
        # what is left joins two terminals; any Steiner-incident mass is a breach
        leftover = {}
        for (t, h), val in sorted(pt.x.items(), key=lambda kv: dg.arc_id[kv[0]]):
            if t not in dg.terminals or h not in dg.terminals:
                raise InvariantBreach(f"arc {(t, h)} still carries {val} after the main loop")
            K = make_component(dg, h, [t])
            leftover[K] = val
            self._emit(StepRecord(None, h, (t,), val, "terminal-arc"))
        y = dict(pt.y)
        for K, val in leftover.items():
            y[K] = y.get(K, 0) + val
        return clean(y)

    def _oracle_before(self, table, fam: FeasibilityFamilies, K: DirectedFullComponent) -> None:
        from . import oracle as _oracle

        brute = _oracle.families_bruteforce(table, fam.centre, fam.sink)
        self.checks["families"] += 1
        if (brute.C, brute.Xstar, brute.Ystar) != (fam.C, fam.Xstar, fam.Ystar):
            raise InvariantBreach(f"min-cut families {fam} differ from enumeration {brute}")
        problems = _oracle.feasibility_conditions(table, brute, K)
        self.checks["components"] += 1
        if problems:
            raise InvariantBreach(f"{K!r} fails conditions {problems}")
        self.checks["uncrossed_pairs"] += table.check_uncrossing()

    def _oracle_after(self, table, new: PolyhedronPoint, K, step: StepResult):
        from . import oracle as _oracle

        expected = table.max_step(K)
        if expected != step.lam:
            raise InvariantBreach(f"step {step.lam} for {K!r}, enumeration says {expected}")
        after = _oracle.SlackTable(self.dg, new.x, new.y)
        after.require_feasible()
        lost = table.tight_masks() - after.tight_masks()
        if lost:
            raise InvariantBreach(f"{len(lost)} tight sets became slack after {K!r}")
        self.checks["points"] += 1
        return after


def decompose(
    x: ArcVector, dg: Digraph, oracle: bool = False, trace: Optional[TextIO] = None
) -> ComponentVector:
    """Components ``y`` with ``phi(y) == x``, same cost, feasible for the component LP.

    ``x`` must be a minimal feasible BCR solution (see
    :func:`qbst.bcr.make_minimal`).
    """
    return Decomposer(dg, x, oracle=oracle, trace=trace).run()
