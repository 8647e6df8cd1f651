"""Exact rational simplex for covering-type LPs ``min c.x, A x >= b, x >= 0``.

The tableau is kept in dictionary form over ``gmpy2.mpq``::

    basic_i = rhs_i + sum_j rows[i][j] * nonbasic_j
    objective = obj + sum_j cost[j] * nonbasic_j

Rows can be appended to an optimal dictionary, which keeps it dual feasible,
so cutting-plane loops re-optimize with a few dual pivots.  Both the primal
and the dual method use smallest-index (Bland) pivoting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from gmpy2 import mpq


class Infeasible(Exception):
    pass


class Unbounded(Exception):
    pass


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


@dataclass
class LinearProgram:
    """``min objective . x`` subject to ``coefficients . x >= rhs`` and ``x >= 0``."""

    objective: dict[Hashable, Fraction]
    constraints: list[tuple[dict[Hashable, Fraction], Fraction]] = field(default_factory=list)

    def variables(self) -> list[Hashable]:
        seen = dict.fromkeys(self.objective)
        for coefs, _ in self.constraints:
            seen.update(dict.fromkeys(coefs))
        return list(seen)


class Tableau:
    """Simplex dictionary over ``nvars`` structural variables.

    Variable ids ``0..nvars-1`` are structural; the slack of the ``k``-th
    added row has id ``nvars + k``.
    """

    def __init__(self, costs: Sequence):
        self.nvars = len(costs)
        self.nonbasic = list(range(self.nvars))
        self.basic: list[int] = []
        self.rows: list[list] = []
        self.rhs: list = []
        self.cost = [mpq(c) for c in costs]
        self.obj = mpq(0)
        self.pivots = 0
        self._row_of: dict[int, int] = {}

    def add_row(self, coefs: Mapping[int, object], rhs) -> None:
        """Append ``sum coefs[j] x_j >= rhs`` expressed over the current basis."""
        width = len(self.nonbasic)
        pos = {v: j for j, v in enumerate(self.nonbasic)}
        row = [mpq(0)] * width
        const = -mpq(rhs)
        for var, a in coefs.items():
            a = mpq(a)
            if not a:
                continue
            if var in pos:
                row[pos[var]] += a
            else:
                i = self._row_of[var]
                const += a * self.rhs[i]
                src = self.rows[i]
                for j in range(width):
                    if src[j]:
                        row[j] += a * src[j]
        slack = self.nvars + len(self.rows)
        self._row_of[slack] = len(self.rows)
        self.basic.append(slack)
        self.rows.append(row)
        self.rhs.append(const)

    def set_objective(self, costs: Sequence) -> None:
        """Replace the objective, rewriting it over the current nonbasics."""
        width = len(self.nonbasic)
        pos = {v: j for j, v in enumerate(self.nonbasic)}
        new = [mpq(0)] * width
        obj = mpq(0)
        for var, c in enumerate(costs):
            c = mpq(c)
            if not c:
                continue
            if var in pos:
                new[pos[var]] += c
            else:
                i = self._row_of[var]
                obj += c * self.rhs[i]
                src = self.rows[i]
                for j in range(width):
                    if src[j]:
                        new[j] += c * src[j]
        self.cost = new
        self.obj = obj

    def pivot(self, r: int, j: int) -> None:
        rows, rhs = self.rows, self.rhs
        prow = rows[r]
        a = prow[j]
        inv = 1 / a
        new = [-v * inv if v else v for v in prow]
        new[j] = inv
        new_rhs = -rhs[r] * inv
        nz = [k for k, v in enumerate(new) if v]
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row[j]
            if not f:
                continue
            row[j] = 0
            for k in nz:
                row[k] += f * new[k]
            rhs[i] += f * new_rhs
        f = self.cost[j]
        if f:
            self.cost[j] = 0
            for k in nz:
                self.cost[k] += f * new[k]
            self.obj += f * new_rhs
        rows[r] = new
        rhs[r] = new_rhs
        leaving, entering = self.basic[r], self.nonbasic[j]
        self.basic[r], self.nonbasic[j] = entering, leaving
        del self._row_of[leaving]
        self._row_of[entering] = r
        self.pivots += 1

    def dual_simplex(self) -> None:
        """Restore primal feasibility from a dual feasible dictionary."""
        if any(c < 0 for c in self.cost):
            raise ValueError("dictionary is not dual feasible")
        while True:
            r = None
            for i, b in enumerate(self.rhs):
                if b < 0 and (r is None or self.basic[i] < self.basic[r]):
                    r = i
            if r is None:
                return
            row = self.rows[r]
            best = None
            for j, a in enumerate(row):
                if a > 0:
                    ratio = self.cost[j] / a
                    if (
                        best is None
                        or ratio < best[0]
                        or (ratio == best[0] and self.nonbasic[j] < self.nonbasic[best[1]])
                    ):
                        best = (ratio, j)
            if best is None:
                raise Infeasible(f"row of variable {self.basic[r]} cannot be satisfied")
            self.pivot(r, best[1])

    def primal_simplex(self) -> None:
        """Optimize from a primal feasible dictionary."""
        while True:
            j = None
            for k, c in enumerate(self.cost):
                if c < 0 and (j is None or self.nonbasic[k] < self.nonbasic[j]):
                    j = k
            if j is None:
                return
            best = None
            for i, row in enumerate(self.rows):
                a = row[j]
                if a < 0:
                    ratio = self.rhs[i] / -a
                    if (
                        best is None
                        or ratio < best[0]
                        or (ratio == best[0] and self.basic[i] < self.basic[best[1]])
                    ):
                        best = (ratio, i)
            if best is None:
                raise Unbounded(f"variable {self.nonbasic[j]} can grow without bound")
            self.pivot(best[1], j)

    def solution(self) -> list[Fraction]:
        vals = [Fraction(0)] * self.nvars
        for i, var in enumerate(self.basic):
            if var < self.nvars:
                vals[var] = _to_fraction(self.rhs[i])
        return vals

    def objective_value(self) -> Fraction:
        return _to_fraction(self.obj)


def simplex_solve(lp: LinearProgram) -> tuple[dict[Hashable, Fraction], Fraction]:
    """Optimal basic solution of ``lp``; raises :class:`Infeasible` or :class:`Unbounded`.

    With non-negative costs the all-slack dictionary is dual feasible and the
    dual method runs directly.  Otherwise a zero objective is used first to
    reach primal feasibility, then the primal method takes over.
    """
    names = lp.variables()
    index = {v: i for i, v in enumerate(names)}
    costs = [Fraction(lp.objective.get(v, 0)) for v in names]
    tab = Tableau([0] * len(names) if any(c < 0 for c in costs) else costs)
    for coefs, rhs in lp.constraints:
        tab.add_row({index[v]: a for v, a in coefs.items()}, rhs)
    tab.dual_simplex()
    if any(c < 0 for c in costs):
        tab.set_objective(costs)
        tab.primal_simplex()
    vals = tab.solution()
    return {v: vals[i] for v, i in index.items()}, tab.objective_value()
