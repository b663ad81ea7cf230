import itertools

import pytest
from hypothesis import HealthCheck, settings

from muvc.graph import Graph, is_vertex_cover

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

EXAMPLE_TEXT = "p 9 8\ne 1 2\ne 1 4\ne 1 6\ne 1 8\ne 1 9\ne 2 3\ne 4 5\ne 6 7\n"


@pytest.fixture
def example_text():
    return EXAMPLE_TEXT


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return Graph(n, list(itertools.combinations(range(n), 2)))


def naive_min_covers(g):
    """Every minimum vertex cover by plain subset enumeration, independent of the package's oracle."""
    for r in range(g.n + 1):
        found = [frozenset(c) for c in itertools.combinations(range(g.n), r) if is_vertex_cover(g, c)]
        if found:
            return found
    return [frozenset()]


def naive_muvc(g):
    """Smallest modulator by nested enumeration over deletion sets and covers."""
    from muvc.graph import induced_delete

    for r in range(g.n + 1):
        for s in itertools.combinations(range(g.n), r):
            h, _ = induced_delete(g, s)
            if len(naive_min_covers(h)) == 1:
                return r
    raise AssertionError("unreachable: deleting everything leaves a unique cover")


def tree_code(g):
    """AHU canonical string of a tree, rooted at its centre(s); equal codes mean isomorphic trees."""
    adj = g.adjacency_lists
    if g.n <= 2:
        return str(g.n)
    degree = [len(a) for a in adj]
    layer = [v for v in range(g.n) if degree[v] == 1]
    left = g.n
    while left > 2:
        left -= len(layer)
        nxt = []
        for v in layer:
            for u in adj[v]:
                degree[u] -= 1
                if degree[u] == 1:
                    nxt.append(u)
        layer = nxt

    def encode(v, parent):
        return "(" + "".join(sorted(encode(u, v) for u in adj[v] if u != parent)) + ")"

    return min(encode(c, -1) for c in layer)


ACCEPTANCE_LINES = []


def report_criterion(number, title, ok, detail=""):
    """Record one acceptance verdict; the lines are repeated in the terminal summary."""
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
