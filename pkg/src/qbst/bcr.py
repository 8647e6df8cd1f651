"""Bidirected cut relaxation solved by cutting planes over the exact simplex."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, TextIO

from .flow import INF, FlowNetwork, FlowSolution
from .model import ArcVector, Digraph, arc_cost, clean
from .simplex import Infeasible, Tableau

log = logging.getLogger(__name__)


@dataclass
class BcrSolution:
    x: ArcVector
    objective_value: Fraction
    generated_cuts: list[frozenset[int]] = field(default_factory=list)
    is_minimal: bool = False
    rounds: int = 0


def _x_network(dg: Digraph, x: ArcVector, extra_nodes: int = 0) -> FlowNetwork:
    net = FlowNetwork(dg.n + extra_nodes, 0, dg.root)
    for (t, h) in dg.arc_keys():
        val = x.get((t, h), 0)
        if val:
            net.add_arc(t, h, val)
    return net


def separate(
    dg: Digraph, x: ArcVector, terminals: Optional[Iterable[int]] = None, root: Optional[int] = None
) -> list[frozenset[int]]:
    """Violated valid sets, one minimal min-cut per terminal, deduplicated.

    An empty list certifies that ``x`` satisfies every cut constraint.
    """
    terminals = sorted(dg.terminals if terminals is None else terminals)
    root = dg.root if root is None else root
    base = _x_network(dg, x)
    base.sink = root
    found: list[frozenset[int]] = []
    for w in terminals:
        if w == root:
            continue
        net = base.copy()
        net.source = w
        cut = FlowSolution(net).minimal_cut()
        if cut.value < 1 and cut.source_side not in found:
            found.append(cut.source_side)
    return found


def _cut_row(dg: Digraph, U: frozenset[int]) -> dict[int, int]:
    return {i: 1 for i, (t, h, _) in enumerate(dg.arcs) if t in U and h not in U}


def solve_bcr(dg: Digraph, minimal: bool = True, cut_log: Optional[TextIO] = None) -> BcrSolution:
    """Optimal (and by default minimal) solution of the bidirected cut relaxation.

    Raises :class:`~qbst.simplex.Infeasible` when some terminal cannot reach
    the root.
    """
    others = sorted(dg.terminals - {dg.root})
    if not others:
        return BcrSolution(x={}, objective_value=Fraction(0), is_minimal=True)

    tab = Tableau([c for _, _, c in dg.arcs])
    cuts: list[frozenset[int]] = []
    seen: set[frozenset[int]] = set()

    def add(U: frozenset[int]) -> None:
        seen.add(U)
        cuts.append(U)
        if cut_log is not None:
            cut_log.write("U: " + " ".join(str(v) for v in sorted(U)) + "\n")
        tab.add_row(_cut_row(dg, U), 1)

    for w in others:
        add(frozenset([w]))
    rounds = 0
    while True:
        rounds += 1
        tab.dual_simplex()
        vals = tab.solution()
        x = clean({a: vals[i] for i, a in enumerate(dg.arc_keys())})
        new = [U for U in separate(dg, x) if U not in seen]
        if not new:
            break
        for U in new:
            add(U)
    log.debug("BCR converged after %d rounds with %d cuts", rounds, len(cuts))
    # the last separation pass returned nothing new; confirm nothing at all is violated
    if separate(dg, x):
        raise Infeasible("separation still reports violated cuts")
    if minimal:
        x = make_minimal(dg, x)
    return BcrSolution(
        x=x,
        objective_value=arc_cost(dg, x),
        generated_cuts=cuts,
        is_minimal=minimal,
        rounds=rounds,
    )


def arc_slack(dg: Digraph, x: ArcVector, arc: tuple[int, int]):
    """Minimum of ``x(delta+(U)) - 1`` over valid ``U`` with ``arc`` leaving ``U``.

    Returns :data:`~qbst.flow.INF` when no valid set is left by ``arc``.
    """
    p, q = arc
    r = dg.root
    if p == r:
        return INF
    s = dg.n
    base = _x_network(dg, x, extra_nodes=1)
    base.source, base.sink = s, r
    base.add_arc(s, p, INF)
    if q != r:
        base.add_arc(q, r, INF)
    best = INF
    for w in sorted(dg.terminals):
        if w in (r, q):
            continue
        net = base.copy()
        net.add_arc(s, w, INF)
        value = FlowSolution(net).value
        if value < best:
            best = value
    if best is INF:
        return INF
    return best - 1


def make_minimal(dg: Digraph, x: ArcVector) -> ArcVector:
    """Lower arcs one at a time (ascending arc id) down to their slack."""
    x = dict(x)
    for a in dg.arc_keys():
        val = x.get(a, 0)
        if not val:
            continue
        slack = arc_slack(dg, x, a)
        if slack < 0:
            raise ValueError(f"x violates a cut through arc {a}")
        x[a] = val - (val if slack is INF else min(val, slack))
    return clean(x)
