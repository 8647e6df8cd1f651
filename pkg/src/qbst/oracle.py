"""Brute-force ground truth for small instances.

Everything here enumerates vertex or terminal subsets explicitly and is
exponential on purpose: it shares no code path with the min-cut machinery it
is used to check.  Subsets are bitmasks; slacks are integers scaled by the
lcm of all denominators so whole tables are evaluated with numpy.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .decompose import FeasibilityFamilies, InvariantBreach, _maximal, _minimal
from .model import (
    ArcVector,
    ComponentVector,
    DirectedFullComponent,
    Digraph,
    Instance,
    bidirect,
    component_crosses,
    make_component,
)
from .simplex import LinearProgram, simplex_solve


class TooLarge(ValueError):
    pass


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _members(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def valid_vertex_masks(dg: Digraph) -> np.ndarray:
    """All ``U`` subset of ``V`` with a terminal and without the root."""
    if dg.n > 20:
        raise TooLarge(f"{dg.n} vertices is too many for enumeration")
    m = np.arange(1 << dg.n, dtype=np.int64)
    keep = ((m >> dg.root) & 1 == 0) & ((m & _mask(dg.terminals)) != 0)
    return m[keep]


def _scaled(values: Iterable[Fraction]) -> int:
    scale = 1
    for v in values:
        scale = math.lcm(scale, Fraction(v).denominator)
    return scale


class SlackTable:
    """``x(delta+(U)) + y(Delta+(U)) - 1`` for every valid vertex set ``U``."""

    def __init__(self, dg: Digraph, x: ArcVector, y: ComponentVector):
        self.dg = dg
        self.x = dict(x)
        self.y = dict(y)
        self.masks = valid_vertex_masks(dg)
        self.scale = _scaled(list(x.values()) + list(y.values()))
        total = sum(x.values(), Fraction(0)) + sum(y.values(), Fraction(0)) + 1
        dtype = np.int64 if total * self.scale < 2**62 else object
        m = self.masks.astype(dtype) if dtype is object else self.masks
        slack = np.full(len(m), -self.scale, dtype=dtype)
        for (t, h), val in x.items():
            crossing = ((m >> t) & 1 == 1) & ((m >> h) & 1 == 0)
            slack = slack + crossing.astype(dtype) * int(val * self.scale)
        for K, val in y.items():
            crossing = ((m >> K.sink) & 1 == 0) & ((m & _mask(K.sources)) != 0)
            slack = slack + crossing.astype(dtype) * int(val * self.scale)
        self.slack = slack
        self._tight = self.masks[np.asarray(slack == 0, dtype=bool)]

    def require_feasible(self) -> None:
        low = int(np.argmin(self.slack)) if len(self.slack) else None
        if low is not None and self.slack[low] < 0:
            U = sorted(_members(int(self.masks[low])))
            value = Fraction(int(self.slack[low]), self.scale) + 1
            raise InvariantBreach(f"valid set {U} has value {value} < 1")

    def tight(self) -> np.ndarray:
        return self._tight

    def tight_masks(self) -> set[int]:
        return {int(t) for t in self._tight}

    def check_uncrossing(self) -> int:
        """Every tight pair sharing a terminal has tight meet and join.

        Returns the number of pairs checked; raises on a counterexample.
        """
        T = np.sort(self._tight)
        R = _mask(self.dg.terminals)
        checked = 0
        for i, S in enumerate(T):
            rest = T[i + 1:]
            sel = rest[(rest & S & R) != 0]
            if not len(sel):
                continue
            checked += len(sel)
            meet, join = sel & S, sel | S
            ok = np.isin(meet, T) & np.isin(join, T)
            if not ok.all():
                bad = int(sel[~ok][0])
                raise InvariantBreach(
                    f"tight sets {sorted(_members(int(S)))} and {sorted(_members(bad))} do not uncross"
                )
        return checked

    def max_step(self, K: DirectedFullComponent) -> Fraction:
        """Largest shift onto ``K``, minimizing ``slack(U) / alpha(U)`` over all ``U``."""
        best = min(self.x.get(a, Fraction(0)) for a in K.arcs)
        m = self.masks
        alpha = np.zeros(len(m), dtype=np.int64)
        for t, h in K.arcs:
            alpha += ((m >> t) & 1 == 1) & ((m >> h) & 1 == 0)
        alpha -= ((m >> K.sink) & 1 == 0) & ((m & _mask(K.sources)) != 0)
        for idx in np.nonzero(alpha > 0)[0]:
            ratio = Fraction(int(self.slack[idx]), self.scale * int(alpha[idx]))
            if ratio < best:
                best = ratio
        return best


@dataclass(frozen=True)
class BruteFamilies(FeasibilityFamilies):
    X: tuple[frozenset[int], ...] = ()
    Y: tuple[frozenset[int], ...] = ()


def families_bruteforce(table: SlackTable, centre: int, sink: int) -> BruteFamilies:
    """Eligible sources and the X/Y families straight from the tight-set list."""
    v, u = centre, sink
    tight = [int(t) for t in table.tight()]
    cands = sorted(t for (t, h), val in table.x.items() if h == v and t != u and val > 0)
    C = frozenset(
        w for w in cands
        if not any(U >> u & 1 and U >> w & 1 and not U >> v & 1 for U in tight)
    )
    Cmask = _mask(C)
    X = [_members(U & Cmask) for U in tight if not U >> u & 1 and not U >> v & 1]
    X = [S for S in X if S]
    Y = [_members(U & Cmask) for U in tight if U >> v & 1 and not U >> u & 1]
    return BruteFamilies(
        centre=v, sink=u, C=C, Xstar=_maximal(X), Ystar=_minimal(Y),
        X=tuple(sorted(set(X), key=sorted)), Y=tuple(sorted(set(Y), key=sorted)),
    )


def feasibility_conditions(table: SlackTable, fam: BruteFamilies, K: DirectedFullComponent) -> list[str]:
    """Names of the violated conditions for ``K`` (empty list: all hold).

    ``a``: positive arcs, ``b``: sources eligible, ``c``: at most one source
    per X-set, ``d``: at least one source per Y-set, ``tight``: no tight set
    is left by more arcs of ``K`` than ``K`` itself crosses it.
    """
    bad = []
    if any(table.x.get(a, 0) <= 0 for a in K.arcs):
        bad.append("a")
    if not K.sources <= fam.C:
        bad.append("b")
    if any(len(K.sources & X) > 1 for X in fam.X):
        bad.append("c")
    if any(not (K.sources & Y) for Y in fam.Y):
        bad.append("d")
    for U in table.tight():
        members = _members(int(U))
        arcs_out = sum(1 for t, h in K.arcs if t in members and h not in members)
        if arcs_out > int(component_crosses(K, members)):
            bad.append("tight")
            break
    return bad


def enumerate_components(inst: Instance, max_sources: Optional[int] = None) -> list[DirectedFullComponent]:
    dg = bidirect(inst)
    R = inst.terminals
    if max_sources is None:
        max_sources = max(len(R) - 1, 1)
    comps = []
    for u, v, _ in inst.edges:
        if u in R and v in R:
            comps.append(make_component(dg, v, [u]))
            comps.append(make_component(dg, u, [v]))
    for c in inst.steiner:
        N = [w for w in inst.neighbours(c) if w in R]
        for k in range(2, min(len(N), max_sources + 1) + 1):
            for S in itertools.combinations(N, k):
                for sink in S:
                    comps.append(make_component(dg, sink, [w for w in S if w != sink], c))
    return comps


def valid_terminal_sets(inst: Instance) -> list[frozenset[int]]:
    others = sorted(inst.terminals - {inst.root})
    out = []
    for k in range(1, len(others) + 1):
        out.extend(frozenset(S) for S in itertools.combinations(others, k))
    return out


def solve_dcr_bruteforce(
    inst: Instance, max_sources: Optional[int] = None, limit: int = 12
) -> tuple[ComponentVector, Fraction]:
    """Optimum of the component LP written out over every valid terminal set."""
    if len(inst.terminals) > limit:
        raise TooLarge(f"{len(inst.terminals)} terminals exceeds the oracle limit {limit}")
    if len(inst.terminals) == 1:
        return {}, Fraction(0)
    comps = enumerate_components(inst, max_sources)
    lp = LinearProgram(objective={K: K.cost for K in comps})
    for U in valid_terminal_sets(inst):
        lp.constraints.append(({K: 1 for K in comps if component_crosses(K, U)}, Fraction(1)))
    values, obj = simplex_solve(lp)
    return {K: v for K, v in values.items() if v}, obj


def check_feasible_dcr(
    inst: Instance, y: ComponentVector, limit: int = 20
) -> tuple[bool, Optional[frozenset[int]]]:
    """Exhaustively check every valid terminal set; returns the first violated one."""
    R = sorted(inst.terminals - {inst.root})
    if len(R) + 1 > limit:
        raise TooLarge(f"{len(R) + 1} terminals exceeds the exhaustive limit {limit}")
    if not R:
        return True, None
    scale = _scaled(y.values())
    # bit i of a subset code stands for terminal R[i]
    codes = np.arange(1, 1 << len(R), dtype=np.int64)
    pos = {t: i for i, t in enumerate(R)}
    total = np.zeros(len(codes), dtype=object if sum(y.values(), Fraction(0)) * scale >= 2**62 else np.int64)
    for K, val in y.items():
        srcs = sum(1 << pos[w] for w in K.sources if w in pos)
        if not srcs:
            continue
        sink_out = np.ones(len(codes), dtype=bool) if K.sink not in pos else (codes >> pos[K.sink]) & 1 == 0
        crossing = sink_out & ((codes & srcs) != 0)
        total = total + crossing.astype(total.dtype) * int(val * scale)
    short = np.nonzero(total < scale)[0]
    if len(short):
        code = int(codes[short[0]])
        return False, frozenset(R[i] for i in range(len(R)) if code >> i & 1)
    return True, None


def borchers_du_rho(k: int) -> Fraction:
    """Loss factor from restricting to components with at most ``k`` terminals."""
    if k < 2:
        raise ValueError("k must be at least 2")
    t = k.bit_length() - 1
    s = k - (1 << t)
    return Fraction((t + 1) * 2**t + s, t * 2**t + s)


def crosses_mask(K: DirectedFullComponent, U: int) -> int:
    return int(not U >> K.sink & 1 and U & _mask(K.sources) != 0)


def submodularity_witness(K: DirectedFullComponent, U: int, W: int) -> bool:
    """True when the submodular inequality fails for ``U``, ``W``."""
    lhs = crosses_mask(K, U) + crosses_mask(K, W)
    rhs = crosses_mask(K, U & W) + crosses_mask(K, U | W)
    return lhs < rhs


def check_submodularity(
    K: DirectedFullComponent, terminals: Iterable[int], trials: int = 1000, seed: int = 0
) -> tuple[bool, Optional[tuple[frozenset[int], frozenset[int]]]]:
    """Random subsets ``U``, ``W`` of ``terminals``; returns a witness on failure."""
    rng = random.Random(seed)
    pool = sorted(set(terminals) | K.terminals())
    for _ in range(trials):
        U = _mask(w for w in pool if rng.random() < 0.5)
        W = _mask(w for w in pool if rng.random() < 0.5)
        if submodularity_witness(K, U, W):
            return False, (_members(U), _members(W))
    return True, None


def submodularity_exhaustive(K: DirectedFullComponent, terminals: Iterable[int]) -> int:
    """Number of violating pairs over all ``U``, ``W`` subsets of ``terminals``."""
    pool = sorted(set(terminals) | K.terminals())
    if len(pool) > 10:
        raise TooLarge("exhaustive submodularity check is limited to 10 terminals")
    # subsets in local coordinates: bit i stands for pool[i]
    codes = np.arange(1 << len(pool), dtype=np.int64)
    src = sum(1 << i for i, w in enumerate(pool) if w in K.sources)
    sink = 1 << pool.index(K.sink)
    f = (((codes & sink) == 0) & ((codes & src) != 0)).astype(np.int8)
    U, W = codes[:, None], codes[None, :]
    bad = f[U] + f[W] < f[U & W] + f[U | W]
    return int(bad.sum())
