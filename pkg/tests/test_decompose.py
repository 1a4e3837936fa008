import random
from dataclasses import replace

from rulestates import FAMILIES, build_paired, clause, fuzz_weights, mkstate
from x3hd.decompose import (
    balanced_bisection,
    branch_cut_variables,
    brute_force_base,
    build_clause_graph,
    connected_components,
)
from x3hd.model import Formula, initial_state
from x3hd.oracle import state_eval
from x3hd.poly import ONE, ZERO, HDPoly
from x3hd.solver import SolveOptions, solve

EXAMPLE = [[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, -6]]


def ring(size, first_var=1):
    # size clauses, 2*size variables, every consecutive pair shares one
    out = []
    hubs = [first_var + 2 * i for i in range(size)]
    spokes = [first_var + 2 * i + 1 for i in range(size)]
    for i in range(size):
        out.append([hubs[i], spokes[i], hubs[(i + 1) % size]])
    return out


def test_graph_shapes():
    st = mkstate([clause(1, 2, 3), clause(4, 5, 6)])
    g = build_clause_graph(st)
    assert g.n_vertices() == 2 and not g.edge_vars

    st2 = mkstate([clause(1, 2, 3), clause(1, 4, 5)])
    g2 = build_clause_graph(st2)
    assert g2.edge_vars == {(0, 1): frozenset({1})}

    # similar clauses collapse into one vertex
    st3 = mkstate([clause(1, 2, 3), clause(-1, 2, -3), clause(2, 4, 5)])
    g3 = build_clause_graph(st3)
    assert g3.n_vertices() == 2
    assert g3.members[0] == (0, 1)


def test_graph_density_bound():
    # under the decomposition preconditions, classes <= ceil(2n/3)
    rng = random.Random(3)
    for seed in range(10):
        st, _ = build_paired(ring(6), rng)
        g = build_clause_graph(st, debug=True)
        n = len(st.V)
        assert g.n_vertices() <= (2 * n + 2) // 3


def test_components_split_and_multiply():
    for seed in range(25):
        case = FAMILIES["component_split"](seed)
        product = case.parent.p_main
        for comp in case.children:
            assert comp.p_main == ONE
            product = product * state_eval(comp)
        assert product == state_eval(case.parent)


def test_components_disjoint_union_of_worked_example():
    shifted = [[k + 7 if k > 0 else k - 7 for k in cl] for cl in EXAMPLE]
    union = Formula.from_dimacs(EXAMPLE + shifted, 14)
    st = initial_state(union)
    comps = connected_components(st)
    assert len(comps) == 2
    report = solve(union, SolveOptions(base_threshold=4))
    single = HDPoly({4: 12, 0: 4})
    assert report.poly == single * single


def test_components_of_connected_state():
    st = mkstate([clause(1, 2, 3), clause(3, 4, 5)])
    assert len(connected_components(st)) == 1
    assert connected_components(mkstate([])) == []


def test_bisection_balance_and_determinism():
    rng = random.Random(9)
    st, _ = build_paired(ring(6), rng)
    g = build_clause_graph(st)
    a = balanced_bisection(g, seed=0)
    b = balanced_bisection(g, seed=0)
    assert a == b
    zeros = a.sides.count(0)
    assert abs(zeros - (len(a.sides) - zeros)) <= 1
    # a six-cycle splits with two crossing edges
    assert a.cut_size == 2


def test_bisection_path_and_clique():
    # path of four vertices: split across one edge
    st = mkstate([clause(1, 2, 3), clause(3, 4, 5), clause(5, 6, 7), clause(7, 8, 9)])
    g = build_clause_graph(st)
    bis = balanced_bisection(g, seed=0)
    assert bis.cut_size == 1

    # complete graph on four vertices always cuts four edges
    # (one dedicated shared variable per clause pair)
    st4 = mkstate(
        [clause(1, 2, 3), clause(1, 4, 5), clause(2, 4, 6), clause(3, 5, 6)]
    )
    g4 = build_clause_graph(st4)
    assert all(len(g4.adjacency[v]) == 3 for v in range(4))
    bis4 = balanced_bisection(g4, seed=1)
    assert bis4.cut_size == 4


def test_bisection_repair_limits_stranded_vertices():
    rng = random.Random(33)
    for seed in range(12):
        st, _ = build_paired(ring(5), rng)
        g = build_clause_graph(st)
        bis = balanced_bisection(g, seed=seed)
        stranded = [
            v
            for v in range(g.n_vertices())
            if g.adjacency[v]
            and all(bis.sides[u] != bis.sides[v] for u in g.adjacency[v])
        ]
        assert len(stranded) <= 1


def test_cut_branch_conservation():
    for seed in range(20):
        case = FAMILIES["case2_split"](seed)
        parent = state_eval(case.parent)
        total = sum((state_eval(c) for c in case.children if c is not None), ZERO)
        assert parent == total


def test_cut_branch_child_count():
    rng = random.Random(1)
    st, _ = build_paired(ring(6), rng)
    g = build_clause_graph(st)
    bis = balanced_bisection(g, seed=0)
    children = branch_cut_variables(st, bis)
    assert len(children) == 4 ** len(bis.cut_vars)


def test_cut_branch_group_size_bound():
    # after branching the cut and simplifying, each residual group holds
    # at most (m - k + 2) / 2 dissimilar classes
    rng = random.Random(17)
    for seed in range(8):
        st, _ = build_paired(ring(6), rng)
        g = build_clause_graph(st)
        m = g.n_vertices()
        bis = balanced_bisection(g, seed=seed)
        k = bis.cut_size
        bound = (m - k + 2) / 2
        for child in branch_cut_variables(st, bis):
            if child is None:
                continue
            for comp in connected_components(child):
                assert len(build_clause_graph(comp).members) <= bound


def test_base_matches_reference_on_random_states():
    rng = random.Random(7)
    for seed in range(60):
        shapes = rng.choice(
            [
                [[1, 2, 3]],
                [[1, 2, 3], [3, 4, 5]],
                [[1, 2, 3], [1, 4, 5], [2, 4, 6]],
                ring(3),
            ]
        )
        st, _ = build_paired(shapes, rng, extra_vars=(20,))
        st = fuzz_weights(st, rng)
        if rng.random() < 0.4:
            v = rng.choice(sorted(st.V))
            st = replace(st, s1=dict(st.s1) | {v: rng.randrange(2)})
        assert brute_force_base(st) == state_eval(st)


def test_base_on_worked_example():
    st = initial_state(Formula.from_dimacs(EXAMPLE, 7))
    assert brute_force_base(st) == HDPoly({4: 12, 0: 4})


def test_base_trivial_cases():
    st = mkstate([])
    assert brute_force_base(st) == ONE
    scaled = replace(st, p_main=HDPoly({2: 3}))
    assert brute_force_base(scaled) == HDPoly({2: 3})
    dead = mkstate([clause(1, 1)])
    assert brute_force_base(dead) == ZERO
