import itertools

import pytest
from conftest import complete, naive_muvc, path
from hypothesis import given
from hypothesis import strategies as st
from strategies import builder_corpus, forests

from muvc.cliquewidth import (
    CORRECTED,
    LITERAL,
    AddEdges,
    ExpressionError,
    Relabel,
    Singleton,
    Union,
    _eta,
    _singleton_chars,
    cograph_expression,
    cotree_graph,
    cw_dp,
    cw_finalize,
    empty_set_characteristic,
    eval_cw_expression,
    format_cw_expression,
    parse_cw_expression,
    path_expression,
    postorder,
    solve_muvc_cw,
    solve_muvc_cw_fpt,
    tree_expression,
    width,
)
from muvc.generators import example_tree, gen_random_cotree, gen_random_tree
from muvc.graph import Graph, induced_delete, is_unique_min_vc
from muvc.oracle import solve_muvc_bruteforce
from muvc.tree import NotAForestError, solve_muvc_tree

K2_TEXT = "(eta 1 2 (union (v 1 a) (v 2 b)))"
K3_TEXT = "(eta 1 2 (eta 2 3 (eta 1 3 (union (v 1 p) (union (v 2 q) (v 3 r))))))"


def test_parse_k2():
    e = parse_cw_expression(K2_TEXT)
    assert e == AddEdges(1, 2, Union(Singleton(1, "a"), Singleton(2, "b")))
    lg = eval_cw_expression(e)
    assert lg.graph == Graph(2, [(0, 1)])
    assert dict(zip(lg.names, lg.labels)) == {"a": 1, "b": 2}


def test_single_vertex():
    lg = eval_cw_expression(parse_cw_expression("(v 1 a)"))
    assert lg.graph == Graph(1) and lg.labels == (1,)


@pytest.mark.parametrize("text", [K2_TEXT, K3_TEXT, "(rho 1 2 (union (v 1 x) (v 3 y)))", "(v 4 z)"])
def test_print_parse_round_trip(text):
    e = parse_cw_expression(text)
    assert parse_cw_expression(format_cw_expression(e)) == e


@given(forests(12))
def test_builder_round_trip(g):
    e = tree_expression(g)
    assert parse_cw_expression(format_cw_expression(e)) == e


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("(foo 1 (v 1 a))", "unknown constructor"),
        ("(eta 1 1 (v 1 a))", "two distinct labels"),
        ("(rho 2 2 (v 1 a))", "two distinct labels"),
        ("(union (v 1 a) (v 2 a))", "duplicate vertex"),
        ("(union (v 1 a) (v 2 b)", "unbalanced"),
        ("(v 0 a)", "label"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(ExpressionError, match=fragment):
        parse_cw_expression(text)


def test_numeric_names_are_ids():
    lg = eval_cw_expression(parse_cw_expression("(eta 1 2 (union (v 2 3) (union (v 1 1) (v 1 2))))"))
    assert lg.names == ("1", "2", "3")
    assert lg.graph == Graph(3, [(0, 2), (1, 2)])


# -- builders ----------------------------------------------------------------------


def test_path_builder_k2():
    e = path_expression(2)
    assert width(e) == 2
    assert eval_cw_expression(e).graph == path(2)


@pytest.mark.parametrize("n", [1, 3, 4, 9])
def test_path_builder(n):
    e = path_expression(n)
    assert width(e) <= 3
    assert eval_cw_expression(e).graph == path(n)


def test_tree_builder_example():
    e = tree_expression(example_tree())
    assert width(e) <= 3
    assert eval_cw_expression(e).graph == example_tree()


@given(forests(16))
def test_tree_builder_evaluates_to_input(g):
    e = tree_expression(g)
    assert width(e) <= 3
    assert eval_cw_expression(e).graph == g


def test_tree_builder_rejects_cycles():
    with pytest.raises(NotAForestError):
        tree_expression(Graph(3, [(0, 1), (1, 2), (0, 2)]))


def test_cograph_join_of_two_leaves():
    e = cograph_expression(("join", [("leaf", "1"), ("leaf", "2")]))
    assert width(e) == 2
    assert eval_cw_expression(e).graph == complete(2)


def test_cograph_complement_semantics():
    # join of a 2-vertex union with a single leaf: the path 1-3-2
    tree = ("join", [("union", [("leaf", "1"), ("leaf", "2")]), ("leaf", "3")])
    assert cotree_graph(tree) == Graph(3, [(0, 2), (1, 2)])


@pytest.mark.parametrize("bad", [("node", []), ("join", []), "x"])
def test_cograph_builder_rejects_non_cotrees(bad):
    with pytest.raises(ExpressionError):
        cograph_expression(bad)


@given(st.integers(1, 14), st.integers(0, 10**6))
def test_random_cotree_width_two(n, seed):
    e = cograph_expression(gen_random_cotree(n, seed))
    assert width(e) <= 2
    assert eval_cw_expression(e).graph.n == n


# -- transforms --------------------------------------------------------------------


def test_singleton_characteristics():
    deleted, kept = _singleton_chars(2, 2)
    assert deleted == ((0, 0, 0, 0), (1, 1, 1, 1))
    # label sets in bit order: {}, {1}, {2}, {1,2}
    assert kept == ((0, 0, 1, 1), (1, 1, 1, 1))


def test_k2_empty_set_path():
    e = parse_cw_expression(K2_TEXT)
    base = empty_set_characteristic(e)
    union = e.child
    assert base[id(union)][0] == (0, 1, 1, 2)
    alpha, beta = base[id(e)]
    assert alpha[0] == 1 and beta[0] == 2


def test_k2_deleting_one_vertex():
    e = parse_cw_expression(K2_TEXT)
    tables = cw_dp(e)
    hits = [(key, s) for key, (s, _) in tables[id(e)].items() if key[0][0] == 0 and key[1][0] == 1]
    assert min(s for _, s in hits) == 1


def test_union_of_two_singletons():
    e = parse_cw_expression("(union (v 1 a) (v 2 b))")
    alpha, _ = empty_set_characteristic(e)[id(e)]
    assert alpha[0] == 0 and alpha[3] == 2


def _char(alpha, beta):
    return tuple(alpha), tuple(beta)


@pytest.mark.parametrize(
    "alpha, beta, expect",
    [
        # label-1 side strictly cheaper
        ((5, 2, 3, 4), (1, 2, 1, 1), (2, 2)),
        # label-2 side strictly cheaper
        ((5, 3, 2, 4), (1, 1, 2, 1), (2, 2)),
        # tie, the full set matches and everything is unique
        ((5, 3, 3, 3), (1, 1, 1, 1), (3, 1)),
        # tie, the full set is costlier
        ((5, 3, 3, 4), (1, 1, 1, 1), (3, 2)),
        # tie, the full set is not unique
        ((5, 3, 3, 3), (1, 1, 1, 2), (3, 2)),
    ],
)
def test_eta_branches(alpha, beta, expect):
    na, nb = _eta(_char(alpha, beta), 1, 2, 2)
    assert (na[0], nb[0]) == expect
    # label sets touching i or j pass through
    assert na[1:] == tuple(alpha[1:]) and nb[1:] == tuple(beta[1:])


def test_eta_merge_requires_unique_sides():
    ch = _char((5, 3, 3, 3), (1, 2, 1, 1))
    assert _eta(ch, 1, 2, 2, LITERAL)[1][0] == 1
    assert _eta(ch, 1, 2, 2, CORRECTED)[1][0] == 2


def test_literal_merge_rule_misreads_triangle():
    e = parse_cw_expression(K3_TEXT)
    assert solve_muvc_cw(e, rule=LITERAL)[0] == 0
    assert solve_muvc_cw(e)[0] == 2
    assert naive_muvc(complete(3)) == 2


def test_relabel_moves_label():
    e = parse_cw_expression("(rho 1 2 (union (v 1 a) (v 2 b)))")
    assert eval_cw_expression(e).labels == (2, 2)


# -- solver ------------------------------------------------------------------------


def test_k2_optimum():
    assert solve_muvc_cw(parse_cw_expression(K2_TEXT))[0] == 1


def test_p3_optimum():
    assert solve_muvc_cw(path_expression(3)) == (0, frozenset())


def test_cograph_triangle():
    e = cograph_expression(("join", [("leaf", "1"), ("leaf", "2"), ("leaf", "3")]))
    assert eval_cw_expression(e).graph == complete(3)
    assert solve_muvc_cw(e)[0] == 2


def test_example_tree_via_builder():
    e = tree_expression(example_tree())
    opt, s = solve_muvc_cw(e)
    assert opt == 2
    assert is_unique_min_vc(induced_delete(example_tree(), s)[0])[0]


def test_fpt_k2_zero_budget():
    assert solve_muvc_cw_fpt(parse_cw_expression(K2_TEXT), 0) is None
    assert solve_muvc_cw_fpt(parse_cw_expression(K2_TEXT), 1)[0] == 1


def test_fpt_rejects_negative_budget():
    with pytest.raises(ValueError):
        solve_muvc_cw_fpt(path_expression(2), -1)


@pytest.mark.parametrize("kind, e, g", builder_corpus(45, 10, seed=7))
def test_matches_oracle(kind, e, g):
    opt, s = solve_muvc_cw(e)
    assert opt == solve_muvc_bruteforce(g).opt
    assert len(s) == opt and is_unique_min_vc(induced_delete(g, s)[0])[0]


@pytest.mark.parametrize("kind, e, g", builder_corpus(30, 9, seed=11))
def test_fpt_against_xp(kind, e, g):
    opt = solve_muvc_cw(e)[0]
    for k in range(opt + 2):
        got = solve_muvc_cw_fpt(e, k)
        if k < opt:
            assert got is None
        else:
            assert got[0] == opt
            assert is_unique_min_vc(induced_delete(g, got[1])[0])[0]


@given(forests(25))
def test_agrees_with_tree_solver(g):
    assert solve_muvc_cw(tree_expression(g))[0] == solve_muvc_tree(g)[0]


# -- traced invariants -------------------------------------------------------------


def _traced(e, **kw):
    seen = []
    cw_dp(e, trace=lambda node, table: seen.append((node, dict(table))), **kw)
    return seen


@pytest.mark.parametrize("kind, e, g", builder_corpus(15, 8, seed=3))
def test_alpha_monotone_in_label_set(kind, e, g):
    d = width(e)
    for _, table in _traced(e):
        for alpha, _ in table:
            for small, big in itertools.product(range(1 << d), repeat=2):
                if small & big == small:
                    assert alpha[small] <= alpha[big]


@pytest.mark.parametrize("kind, e, g", builder_corpus(15, 8, seed=5))
def test_relabelled_source_is_always_full(kind, e, g):
    d = width(e)
    for node, table in _traced(e):
        if isinstance(node, Relabel):
            bit = 1 << (node.src - 1)
            for alpha, beta in table:
                for m in range(1 << d):
                    assert alpha[m] == alpha[m | bit] and beta[m] == beta[m | bit]


@pytest.mark.parametrize("kind, e, g", builder_corpus(15, 8, seed=9))
def test_differences_bounded_by_deletions(kind, e, g):
    base = empty_set_characteristic(e)
    for node, table in _traced(e):
        ref = base[id(node)][0]
        for (alpha, _), (size, _) in table.items():
            assert all(0 <= r - a <= size for r, a in zip(ref, alpha))


def test_fpt_keys_are_differences():
    e = tree_expression(gen_random_tree(12, 4))
    k = 3
    for node, table in _traced(e, budget=k):
        for (diff, _), (size, _) in table.items():
            assert size <= k
            assert all(0 <= x <= size for x in diff)


def test_finalize_none_without_unique_entry():
    e = parse_cw_expression(K2_TEXT)
    assert cw_finalize(e, cw_dp(e, budget=0)) is None


def test_postorder_visits_children_first():
    e = parse_cw_expression(K3_TEXT)
    order = postorder(e)
    assert order[-1] is e and len(order) == 8
