import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qbst.generate import GeneratorConfig, random_instance
from qbst.model import make_component, validate_instance
from qbst.oracle import (
    TooLarge,
    borchers_du_rho,
    check_feasible_dcr,
    check_submodularity,
    enumerate_components,
    solve_dcr_bruteforce,
    submodularity_exhaustive,
    submodularity_witness,
    valid_terminal_sets,
    _mask,
)


def test_star_component_count(star):
    comps = enumerate_components(star)
    assert len(comps) == 9
    assert all(K.centre == 3 for K in comps)


def test_terminal_edge_components():
    inst = validate_instance(2, [(0, 1, 1)], [0, 1])
    assert {(K.sources, K.sink) for K in enumerate_components(inst)} == {
        (frozenset({1}), 0),
        (frozenset({0}), 1),
    }


def test_steiner_leaf_contributes_nothing():
    inst = validate_instance(3, [(0, 1, 1), (1, 2, 1)], [0, 1])
    assert all(K.centre is None for K in enumerate_components(inst))


def test_max_sources_limits_component_size(star):
    assert len(enumerate_components(star, max_sources=1)) == 6


def test_component_lp_values(path, star):
    assert solve_dcr_bruteforce(path)[1] == 2
    assert solve_dcr_bruteforce(star)[1] == 3
    assert solve_dcr_bruteforce(validate_instance(1, [], [0])) == ({}, 0)


def test_component_lp_size_guard():
    n = 14
    inst = validate_instance(n, [(i, n - 1, 1) for i in range(13)], range(13))
    with pytest.raises(TooLarge):
        solve_dcr_bruteforce(inst)


def test_valid_terminal_sets(star):
    assert sorted(map(sorted, valid_terminal_sets(star))) == [[1], [1, 2], [2]]


def test_feasibility_check(star_dg, star):
    assert check_feasible_dcr(star, {}) == (False, frozenset({1}))
    only_a = {make_component(star_dg, 0, [1], 3): Fraction(1)}
    assert check_feasible_dcr(star, only_a) == (False, frozenset({2}))
    full = {make_component(star_dg, 0, [1, 2], 3): Fraction(1)}
    assert check_feasible_dcr(star, full) == (True, None)


def test_rho_values():
    assert [borchers_du_rho(k) for k in (2, 3, 4, 5)] == [2, Fraction(5, 3), Fraction(3, 2), Fraction(13, 9)]
    with pytest.raises(ValueError):
        borchers_du_rho(1)


def test_rho_decreases_towards_one():
    vals = [borchers_du_rho(k) for k in range(2, 200)]
    assert all(a > b > 1 for a, b in zip(vals, vals[1:]))
    assert borchers_du_rho(2**40) < Fraction(103, 100)


def test_submodularity_identical_sets(star_dg):
    K = make_component(star_dg, 0, [1, 2], 3)
    for U in range(8):
        assert not submodularity_witness(K, U, U)


def test_submodularity_sink_outside_one_set(star_dg):
    # sink outside U and inside W, a source in each
    K = make_component(star_dg, 0, [1, 2], 3)
    assert not submodularity_witness(K, _mask({1}), _mask({0, 2}))


def test_submodularity_exhaustive_small(star_dg):
    for K in enumerate_components(validate_instance(4, [(0, 3, 1), (1, 3, 1), (2, 3, 1)], [0, 1, 2])):
        assert submodularity_exhaustive(K, [0, 1, 2]) == 0


def test_submodularity_random_trials(star_dg):
    K = make_component(star_dg, 0, [1, 2], 3)
    assert check_submodularity(K, range(10), trials=2000, seed=3) == (True, None)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.randoms(use_true_random=False))
def test_value_invariant_under_relabeling(seed, shuffler):
    inst = random_instance(random.Random(seed), GeneratorConfig(max_vertices=8, max_terminals=5))
    perm = list(range(inst.n))
    shuffler.shuffle(perm)
    relabeled = validate_instance(
        inst.n,
        [(perm[u], perm[v], c) for u, v, c in inst.edges],
        [perm[t] for t in inst.terminals],
        perm[inst.root],
    )
    assert solve_dcr_bruteforce(inst)[1] == solve_dcr_bruteforce(relabeled)[1]


def test_adding_components_never_raises_value(star):
    # restricting to at most one source can only cost more
    assert solve_dcr_bruteforce(star, max_sources=1)[1] >= solve_dcr_bruteforce(star)[1]


def test_deleting_steiner_vertex_never_lowers_value():
    # star plus a direct triangle; dropping the centre leaves only the triangle
    edges = [(0, 3, 1), (1, 3, 1), (2, 3, 1), (0, 1, 2), (1, 2, 2), (0, 2, 2)]
    full = validate_instance(4, edges, [0, 1, 2])
    reduced = validate_instance(4, [e for e in edges if 3 not in e[:2]], [0, 1, 2])
    assert solve_dcr_bruteforce(reduced)[1] >= solve_dcr_bruteforce(full)[1]
