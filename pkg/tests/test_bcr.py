import io
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qbst.bcr import arc_slack, make_minimal, separate, solve_bcr
from qbst.flow import INF
from qbst.generate import GeneratorConfig, random_instance
from qbst.model import bidirect, cut_arcs, validate_instance
from qbst.oracle import SlackTable, solve_dcr_bruteforce
from qbst.simplex import Infeasible

half = Fraction(1, 2)


def cut_value(dg, x, U):
    return sum(x.get(a, 0) for a in cut_arcs(dg, U))


def test_separation_on_empty_path(path_dg):
    found = separate(path_dg, {})
    assert found and all(1 in U and 0 not in U for U in found)
    assert all(cut_value(path_dg, {}, U) == 0 for U in found)


def test_separation_accepts_arborescence(star_dg):
    assert separate(star_dg, {(1, 3): 1, (2, 3): 1, (3, 0): 1}) == []


def test_separation_on_half_root_arc(star_dg):
    x = {(1, 3): Fraction(1), (2, 3): Fraction(1), (3, 0): half}
    found = separate(star_dg, x)
    assert found
    for U in found:
        assert 3 in U and 0 not in U and cut_value(star_dg, x, U) == half
    assert frozenset().union(*found) == {1, 2, 3}
    assert cut_value(star_dg, x, {1, 2, 3}) == half


def test_path_optimum(path_dg):
    sol = solve_bcr(path_dg)
    assert sol.x == {(1, 2): 1, (2, 0): 1}
    assert sol.objective_value == 2 and sol.is_minimal


def test_star_optimum(star_dg):
    sol = solve_bcr(star_dg)
    assert sol.x == {(1, 3): 1, (2, 3): 1, (3, 0): 1}
    assert sol.objective_value == 3


def test_single_terminal():
    sol = solve_bcr(bidirect(validate_instance(2, [(0, 1, 4)], [0])))
    assert sol.x == {} and sol.objective_value == 0


def test_isolated_terminal_is_infeasible():
    inst = validate_instance(4, [(0, 3, 1), (1, 3, 1)], [0, 1, 2])
    with pytest.raises(Infeasible):
        solve_bcr(bidirect(inst))


def test_cut_log_lists_generated_sets(star_dg):
    buf = io.StringIO()
    sol = solve_bcr(star_dg, cut_log=buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == len(sol.generated_cuts)
    assert lines[0] == "U: 1"


def test_make_minimal_is_a_fixed_point(star_dg):
    x = {(1, 3): Fraction(1), (2, 3): Fraction(1), (3, 0): Fraction(1)}
    assert make_minimal(star_dg, x) == x


def test_make_minimal_halves_doubled_path(path_dg):
    x = {a: Fraction(2) for a in path_dg.arc_keys()}
    assert make_minimal(path_dg, x) == {(1, 2): 1, (2, 0): 1}


def test_make_minimal_drops_dead_end_arc():
    # Steiner leaf 3 hangs off terminal a=1
    inst = validate_instance(4, [(0, 2, 1), (1, 2, 1), (1, 3, 1)], [0, 1])
    dg = bidirect(inst)
    assert arc_slack(dg, {(1, 2): 1, (2, 0): 1, (1, 3): 1}, (1, 3)) == 1
    out = make_minimal(dg, {(1, 2): Fraction(1), (2, 0): Fraction(1), (1, 3): Fraction(1)})
    assert out == {(1, 2): 1, (2, 0): 1}


def test_arc_leaving_root_has_no_cut(path_dg):
    assert arc_slack(path_dg, {}, (0, 2)) is INF


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_optimum_is_feasible_minimal_and_equals_component_lp(seed):
    import random

    inst = random_instance(random.Random(seed), GeneratorConfig(max_vertices=8, max_terminals=5))
    dg = bidirect(inst)
    sol = solve_bcr(dg)
    table = SlackTable(dg, sol.x, {})
    table.require_feasible()
    # minimal: every positive arc leaves some tight set
    tight = [{i for i in range(dg.n) if int(m) >> i & 1} for m in table.tight()]
    for t, h in sol.x:
        assert any(t in U and h not in U for U in tight)
    assert sol.objective_value == solve_dcr_bruteforce(inst)[1]
