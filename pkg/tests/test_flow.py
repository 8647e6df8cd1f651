import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qbst.flow import INF, FlowNetwork, FlowSolution, NoFiniteCut, cut_capacity, max_flow, min_cut_maximal, min_cut_minimal


def net(n, arcs, s=0, t=None):
    return FlowNetwork(n, s, n - 1 if t is None else t, [(a, b, c) for a, b, c in arcs])


def test_single_arc():
    value, flow = max_flow(net(2, [(0, 1, Fraction(3, 2))]))
    assert value == Fraction(3, 2) and flow == [Fraction(3, 2)]


def test_parallel_paths():
    assert max_flow(net(4, [(0, 1, 1), (1, 3, 1), (0, 2, Fraction(1, 2)), (2, 3, 1)]))[0] == Fraction(3, 2)


def test_infinite_arc_into_cut():
    assert max_flow(net(3, [(0, 1, INF), (1, 2, 1), (0, 2, 1)]))[0] == 2


def test_minimal_cut_on_saturated_path():
    n = net(3, [(0, 1, 1), (1, 2, 1)])
    assert min_cut_minimal(n).source_side == {0}
    assert min_cut_maximal(n).source_side == {0, 1}


def test_bottleneck_second_arc():
    n = net(3, [(0, 1, 2), (1, 2, 1)])
    assert min_cut_minimal(n).source_side == {0, 1}
    assert min_cut_maximal(n).source_side == {0, 1}


def test_bottleneck_first_arc():
    n = net(3, [(0, 1, 1), (1, 2, 2)])
    assert min_cut_minimal(n).source_side == {0}
    assert min_cut_maximal(n).source_side == {0}


def test_symmetric_diamond_nesting():
    n = net(4, [(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)])
    lo, hi = min_cut_minimal(n), min_cut_maximal(n)
    assert lo.value == hi.value == 2
    assert lo.source_side <= hi.source_side


def test_unbounded_flow_and_no_finite_cut():
    n = net(3, [(0, 1, INF), (1, 2, INF)])
    assert max_flow(n)[0] is INF
    with pytest.raises(NoFiniteCut):
        min_cut_minimal(n)


def test_infinity_arithmetic():
    assert INF + 1 is INF and INF > 10**9 and not INF < 5
    assert INF == INF


def test_negative_capacity_rejected():
    with pytest.raises(ValueError):
        FlowNetwork(2, 0, 1).add_arc(0, 1, -1)


def brute_min_cut(n: FlowNetwork):
    interior = [v for v in range(n.node_count) if v not in (n.source, n.sink)]
    best = INF
    for k in range(len(interior) + 1):
        for S in itertools.combinations(interior, k):
            cap = cut_capacity(n, {n.source, *S})
            if cap < best:
                best = cap
    return best


@st.composite
def networks(draw):
    k = draw(st.integers(0, 6))
    size = k + 2
    cap = st.one_of(
        st.builds(Fraction, st.integers(0, 9), st.integers(1, 4)),
        st.just(INF),
    )
    arcs = draw(
        st.lists(st.tuples(st.integers(0, size - 1), st.integers(0, size - 1), cap), max_size=20)
    )
    return FlowNetwork(size, 0, size - 1, [a for a in arcs if a[0] != a[1]])


@settings(max_examples=150, deadline=None)
@given(networks())
def test_flow_equals_brute_force_cut(n):
    sol = FlowSolution(n)
    assert sol.value == brute_min_cut(n)
    if sol.value is not INF:
        flow = sol.flow()
        for i, (_, _, c) in enumerate(n.arcs):
            assert 0 <= flow[i] and (c is INF or flow[i] <= c)
        for v in range(1, n.node_count - 1):
            out = sum(flow[i] for i, (a, _, _) in enumerate(n.arcs) if a == v)
            inn = sum(flow[i] for i, (_, b, _) in enumerate(n.arcs) if b == v)
            assert out == inn
        lo, hi = sol.minimal_cut(), sol.maximal_cut()
        assert lo.source_side <= hi.source_side
        assert cut_capacity(n, lo.source_side) == cut_capacity(n, hi.source_side) == sol.value
