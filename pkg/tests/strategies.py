import itertools

from hypothesis import strategies as st

from muvc.graph import Graph


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [p for p, k in zip(pairs, keep) if k])


@st.composite
def forests(draw, max_n=14):
    n = draw(st.integers(1, max_n))
    edges = []
    for v in range(1, n):
        if draw(st.integers(0, 9)) > 0:
            edges.append((draw(st.integers(0, v - 1)), v))
    return Graph(n, edges)


def builder_corpus(count, max_n, seed, min_n=1):
    """Seeded paths, trees and cographs with their builder expressions, cycling through the three kinds."""
    import random

    from muvc.cliquewidth import cograph_expression, eval_cw_expression, path_expression, tree_expression
    from muvc.generators import gen_random_cotree, gen_random_tree

    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(min_n, max_n)
        kind = ("path", "tree", "cograph")[i % 3]
        if kind == "path":
            e = path_expression(n)
        elif kind == "tree":
            e = tree_expression(gen_random_tree(n, rng.randrange(2**32)))
        else:
            e = cograph_expression(gen_random_cotree(n, rng.randrange(2**32)))
        out.append((kind, e, eval_cw_expression(e).graph))
    return out


def small_formulas(n_clauses, max_nx, max_ny=5):
    """Every typed formula with the given clause count whose variables all occur (clauses unordered)."""
    import itertools

    from muvc.generators import TypedFormula

    out = []
    for nx in range(max_nx + 1):
        for ny in range(max_ny + 1):
            names = [("x", i) for i in range(1, nx + 1)] + [("y", i) for i in range(1, ny + 1)]
            for picks in itertools.combinations_with_replacement(list(itertools.combinations(names, 3)), n_clauses):
                if set().union(*picks) != set(names):
                    continue
                for signs in itertools.product((True, False), repeat=3 * n_clauses):
                    lits = [(k, i, s) for (k, i), s in zip(itertools.chain(*picks), signs)]
                    out.append(TypedFormula(nx, ny, tuple(tuple(lits[3 * c : 3 * c + 3]) for c in range(n_clauses))))
    return out
