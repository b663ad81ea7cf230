import pytest
from conftest import complete, cycle, path
from hypothesis import given
from hypothesis import strategies as st

from muvc.generators import gen_partial_ktree, gen_random_tree
from muvc.graph import Graph, induced_delete, is_unique_min_vc, parse_graph
from muvc.oracle import solve_muvc_bruteforce
from muvc.tree import solve_muvc_tree
from muvc.treewidth import (
    EXACT,
    FORGET,
    INTRODUCE,
    JOIN,
    LEAF,
    TRUNCATED,
    DecompositionError,
    TreeDecomposition,
    forest_decomposition,
    format_td,
    make_nice,
    parse_td,
    solve_muvc_tw,
    tw_dp,
    tw_finalize,
)

K2_TD = TreeDecomposition(((0, 1),), ())
C4_TD = TreeDecomposition(((0, 1, 2), (0, 2, 3)), ((0, 1),))


def test_parse_td():
    td = parse_td("c comment\ns td 2 3 4\nb 1 1 2 3\nb 2 1 3 4\n1 2\n")
    assert td == C4_TD
    assert parse_td(format_td(td, 4)) == td


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("b 1 1 2\n", "missing"),
        ("s td 1 2 2\nb 1 1 2\nb 1 1\n", "duplicate bag"),
        ("s td 2 2 2\nb 1 1 2\n", "expected bags"),
        ("s td 1 2 2\nb 1 1 x\n", "malformed"),
    ],
)
def test_parse_td_errors(text, fragment):
    with pytest.raises(DecompositionError, match=fragment):
        parse_td(text)


def test_validate_reports_problems():
    with pytest.raises(DecompositionError, match="edge 1 3"):
        TreeDecomposition(((0, 1), (1, 2)), ((0, 1),)).validate(complete(3))
    with pytest.raises(DecompositionError, match="vertex 1 are not connected"):
        TreeDecomposition(((0, 1), (1, 2), (0, 2)), ((0, 1), (1, 2))).validate(complete(3))
    with pytest.raises(DecompositionError, match="vertex 3 is in no bag"):
        TreeDecomposition(((0, 1),), ()).validate(path(3))


def test_nice_k2_shape():
    nice = make_nice(K2_TD, complete(2))
    assert nice.kind == (LEAF, INTRODUCE, INTRODUCE, FORGET, FORGET)
    assert nice.bags[-1] == () and nice.width == 1


def _check_nice(nice):
    for x in range(len(nice)):
        kids = nice.children[x]
        bag = set(nice.bags[x])
        k = nice.kind[x]
        assert all(c < x for c in kids)
        if k == LEAF:
            assert not bag and not kids
        elif k == INTRODUCE:
            assert bag == set(nice.bags[kids[0]]) | {nice.vertex[x]} and nice.vertex[x] not in nice.bags[kids[0]]
        elif k == FORGET:
            assert bag == set(nice.bags[kids[0]]) - {nice.vertex[x]} and nice.vertex[x] in nice.bags[kids[0]]
        else:
            assert len(kids) == 2 and all(set(nice.bags[c]) == bag for c in kids)
    assert nice.bags[nice.root] == ()


@given(st.integers(1, 14), st.integers(1, 3), st.integers(0, 10**6))
def test_make_nice_structure(n, k, seed):
    g, td = gen_partial_ktree(n, k, seed, keep=0.8)
    nice = make_nice(td, g)
    _check_nice(nice)
    assert nice.width == td.width
    assert len(nice) <= 4 * (td.width + 1) * max(n, 1) + 2


def test_forest_decomposition_has_width_one(example_text):
    g = parse_graph(example_text)
    td = forest_decomposition(g)
    td.validate(g)
    assert td.width == 1
    _check_nice(make_nice(td, g))


def test_leaf_table():
    nice = make_nice(K2_TD, complete(2))
    assert tw_dp(nice, complete(2))[0] == {((0,), (1,)): (0, ())}


def test_k2_forget_step():
    g = complete(2)
    nice = make_nice(K2_TD, g)
    tables = tw_dp(nice, g)
    x = nice.kind.index(FORGET)
    assert nice.bags[x] == (1,)
    keys = {key: val[0] for key, val in tables[x].items()}
    # keeping vertex 0: avoiding 1 costs one cover vertex, taking 1 costs none
    assert keys[((0, 1), (1, 1))] == 0
    # deleting vertex 0 leaves an isolated terminal
    assert keys[((0, 0), (1, 1))] == 1


def test_isolated_vertex_forget():
    g = Graph(1)
    nice = make_nice(TreeDecomposition(((0,),), ()), g)
    tables = tw_dp(nice, g)
    assert ((0,), (1,)) in tables[nice.root]
    assert tables[nice.root][((0,), (1,))][0] == 0


def test_finalize_examples(example_text):
    assert solve_muvc_tw(complete(2), K2_TD)[0] == 1
    assert solve_muvc_tw(parse_graph(example_text))[0] == 2
    assert solve_muvc_tw(cycle(4), C4_TD)[0] == 1


def test_invalid_decomposition_is_rejected():
    with pytest.raises(DecompositionError):
        solve_muvc_tw(cycle(4), TreeDecomposition(((0, 1, 2), (2, 3)), ((0, 1),)))


def _invariant_tracer(g, nice, seen):
    delta_max = g.max_degree

    def trace(x, bag, table):
        for (delta, beta), _ in table.items():
            assert delta[0] == 0
            for mask, d in enumerate(delta):
                assert 0 <= d <= delta_max * bin(mask).count("1")
            assert set(beta) <= {1, 2}
        if nice.kind[x] == INTRODUCE:
            assert len(table) == len(seen[nice.children[x][0]])
        seen[x] = table

    return trace


@given(st.integers(1, 10), st.integers(1, 3), st.integers(0, 10**6), st.floats(0.4, 1.0))
def test_matches_oracle_with_invariants(n, k, seed, keep):
    g, td = gen_partial_ktree(n, k, seed, keep=keep)
    nice = make_nice(td, g)
    seen = {}
    tables = tw_dp(nice, g, EXACT, trace=_invariant_tracer(g, nice, seen))
    opt, witness = tw_finalize(nice, tables)
    assert opt == solve_muvc_bruteforce(g).opt
    h, _ = induced_delete(g, witness)
    assert is_unique_min_vc(h)[0]


@given(st.integers(1, 16), st.integers(1, 3), st.integers(0, 10**6))
def test_truncation_is_lossless(n, k, seed):
    g, td = gen_partial_ktree(n, k, seed, keep=0.9, max_degree=4)
    assert solve_muvc_tw(g, td, TRUNCATED) == solve_muvc_tw(g, td, EXACT)


def test_trees_match_forest_solver():
    for seed in range(40):
        g = gen_random_tree(1 + (seed * 37) % 200, seed)
        assert solve_muvc_tw(g)[0] == solve_muvc_tree(g)[0]


def test_terminal_edges_accounted_once():
    # a single bag holding a triangle: every edge is materialised at exactly one forget
    g = complete(3)
    td = TreeDecomposition(((0, 1, 2),), ())
    assert solve_muvc_tw(g, td)[0] == 2


def test_join_nodes_appear_for_branching_decompositions():
    g, td = gen_partial_ktree(12, 2, 5)
    nice = make_nice(td, g)
    if any(len([e for e in td.edges if i in e]) > 2 for i in range(len(td.bags))):
        assert JOIN in nice.kind


@given(st.integers(2, 14), st.integers(1, 3), st.integers(0, 10**6))
def test_forgotten_neighbourhoods_are_closed(n, k, seed):
    g, td = gen_partial_ktree(n, k, seed)
    nice = make_nice(td, g)
    forgotten = []
    for x in range(len(nice)):
        below = set().union(*(forgotten[c] for c in nice.children[x])) if nice.children[x] else set()
        if nice.kind[x] == FORGET:
            below.add(nice.vertex[x])
        forgotten.append(below)
        bag = set(nice.bags[x])
        # forgotten vertices have their whole neighbourhood accounted below this node
        for v in below:
            assert set(g.neighbors(v).tolist()) <= below | bag
