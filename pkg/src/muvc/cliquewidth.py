"""MU-VC over clique-width expressions.

Expressions are built from four operations on vertex-labelled graphs:

* ``(v i name)``   a single vertex ``name`` with label ``i``,
* ``(union A B)``  disjoint union,
* ``(eta i j A)``  add every edge between a label-``i`` and a label-``j`` vertex,
* ``(rho i j A)``  relabel every ``i`` vertex to ``j``.

For a vertex set ``M`` a label is *full* when every vertex carrying it lies in
``M`` (labels with no vertices are always full).  A characteristic stores, for
every label set ``I`` (bitmask, bit ``i-1`` for label ``i``), the size ``alpha``
of the smallest cover whose full labels include ``I`` and a flag ``beta`` (1 if
that smallest cover is unique, 2 otherwise).  The table maps each
characteristic to the fewest deletions producing it.
"""

from __future__ import annotations

import re
from collections.abc import Callable, Iterator
from dataclasses import dataclass

from .graph import Graph, GraphError, VertexSet


class ExpressionError(GraphError):
    pass


# -- syntax ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Singleton:
    label: int
    name: str


@dataclass(frozen=True)
class Union:
    left: "CwExpression"
    right: "CwExpression"


@dataclass(frozen=True)
class AddEdges:
    i: int
    j: int
    child: "CwExpression"


@dataclass(frozen=True)
class Relabel:
    src: int
    dst: int
    child: "CwExpression"


CwExpression = Singleton | Union | AddEdges | Relabel


def children(e: CwExpression) -> tuple[CwExpression, ...]:
    if isinstance(e, Singleton):
        return ()
    if isinstance(e, Union):
        return (e.left, e.right)
    return (e.child,)


def postorder(e: CwExpression) -> list[CwExpression]:
    """Subexpressions, children before parents (shared subterms are visited once per occurrence)."""
    out: list[CwExpression] = []
    stack: list[tuple[CwExpression, bool]] = [(e, False)]
    while stack:
        node, done = stack.pop()
        if done:
            out.append(node)
            continue
        stack.append((node, True))
        for c in reversed(children(node)):
            stack.append((c, False))
    return out


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_cw_expression(text: str) -> CwExpression:
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise ExpressionError("empty expression")
    # explicit stack of partially read terms: [head, args...]
    stack: list[list] = []
    result = None
    pos = 0
    while pos < len(tokens):
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            if pos >= len(tokens) or tokens[pos] in "()":
                raise ExpressionError(f"expected a constructor after '(' at token {pos}")
            stack.append([tokens[pos]])
            pos += 1
        elif tok == ")":
            if not stack:
                raise ExpressionError(f"unbalanced ')' at token {pos}")
            term = _build(stack.pop())
            if stack:
                stack[-1].append(term)
            elif result is None:
                result = term
            else:
                raise ExpressionError("more than one expression in input")
        else:
            if not stack:
                raise ExpressionError(f"unexpected token {tok!r} outside parentheses")
            stack[-1].append(tok)
    if stack or result is None:
        raise ExpressionError("unbalanced '(' in expression")
    _check_names(result)
    return result


def _label(tok, head: str) -> int:
    if not isinstance(tok, str) or not tok.isdigit() or int(tok) < 1:
        raise ExpressionError(f"'{head}' expects positive integer labels, got {tok!r}")
    return int(tok)


def _build(parts: list) -> CwExpression:
    head, args = parts[0], parts[1:]
    if head == "v":
        if len(args) != 2 or not isinstance(args[1], str):
            raise ExpressionError("'v' takes a label and a vertex name")
        return Singleton(_label(args[0], head), args[1])
    if head == "union":
        if len(args) != 2 or isinstance(args[0], str) or isinstance(args[1], str):
            raise ExpressionError("'union' takes two subexpressions")
        return Union(args[0], args[1])
    if head in ("eta", "rho"):
        if len(args) != 3 or isinstance(args[2], str):
            raise ExpressionError(f"'{head}' takes two labels and a subexpression")
        i, j = _label(args[0], head), _label(args[1], head)
        if i == j:
            raise ExpressionError(f"'{head}' needs two distinct labels, got {i} {j}")
        return AddEdges(i, j, args[2]) if head == "eta" else Relabel(i, j, args[2])
    raise ExpressionError(f"unknown constructor {head!r}")


def _check_names(e: CwExpression) -> None:
    seen: set[str] = set()
    for node in postorder(e):
        if isinstance(node, Singleton):
            if node.name in seen:
                raise ExpressionError(f"duplicate vertex name {node.name!r}")
            seen.add(node.name)


def format_cw_expression(e: CwExpression) -> str:
    text: dict[int, str] = {}
    for node in postorder(e):
        if isinstance(node, Singleton):
            s = f"(v {node.label} {node.name})"
        elif isinstance(node, Union):
            s = f"(union {text[id(node.left)]} {text[id(node.right)]})"
        elif isinstance(node, AddEdges):
            s = f"(eta {node.i} {node.j} {text[id(node.child)]})"
        else:
            s = f"(rho {node.src} {node.dst} {text[id(node.child)]})"
        text[id(node)] = s
    return text[id(e)]


def width(e: CwExpression) -> int:
    """Largest label index used; the DP works over label sets of this size."""
    best = 0
    for node in postorder(e):
        if isinstance(node, Singleton):
            best = max(best, node.label)
        elif isinstance(node, AddEdges):
            best = max(best, node.i, node.j)
        elif isinstance(node, Relabel):
            best = max(best, node.src, node.dst)
    return best


@dataclass(frozen=True)
class LabeledGraph:
    graph: Graph
    labels: tuple[int, ...]
    names: tuple[str, ...]


def vertex_names(e: CwExpression) -> tuple[str, ...]:
    """Vertex names indexed by vertex id.

    Purely numeric names ``1..n`` are read as 1-based ids; otherwise vertices are
    numbered in order of appearance.
    """
    names = [node.name for node in postorder(e) if isinstance(node, Singleton)]
    if all(s.isdigit() for s in names) and sorted(int(s) for s in names) == list(range(1, len(names) + 1)):
        return tuple(sorted(names, key=int))
    return tuple(names)


def eval_cw_expression(e: CwExpression) -> LabeledGraph:
    names = vertex_names(e)
    index = {s: i for i, s in enumerate(names)}
    # per subexpression: label -> vertices, tracked by object identity
    groups: dict[int, dict[int, list[int]]] = {}
    edges: set[tuple[int, int]] = set()
    for node in postorder(e):
        if isinstance(node, Singleton):
            g = {node.label: [index[node.name]]}
        elif isinstance(node, Union):
            g = {k: list(v) for k, v in groups.pop(id(node.left)).items()}
            for k, vs in groups.pop(id(node.right)).items():
                g.setdefault(k, []).extend(vs)
        elif isinstance(node, AddEdges):
            g = groups.pop(id(node.child))
            for a in g.get(node.i, []):
                for b in g.get(node.j, []):
                    edges.add((min(a, b), max(a, b)))
        else:
            g = groups.pop(id(node.child))
            moved = g.pop(node.src, [])
            if moved:
                g.setdefault(node.dst, []).extend(moved)
        groups[id(node)] = g
    final = groups[id(e)]
    labels = [0] * len(names)
    for k, vs in final.items():
        for v in vs:
            labels[v] = k
    return LabeledGraph(Graph(len(names), sorted(edges)), tuple(labels), names)


# -- builders --------------------------------------------------------------------------


def _balanced_union(parts: list[CwExpression]) -> CwExpression:
    while len(parts) > 1:
        parts = [Union(parts[i], parts[i + 1]) if i + 1 < len(parts) else parts[i] for i in range(0, len(parts), 2)]
    return parts[0]


def path_expression(n: int) -> CwExpression:
    """Path ``1-2-...-n``; the newest end carries label 2, interior vertices label 3."""
    if n < 1:
        raise ExpressionError("path needs at least one vertex")
    e: CwExpression = Singleton(2, "1")
    for v in range(2, n + 1):
        e = AddEdges(1, 2, Union(e, Singleton(1, str(v))))
        if v < n:
            e = Relabel(1, 2, Relabel(2, 3, e))
    return e


def tree_expression(g: Graph) -> CwExpression:
    """Width-3 expression for a forest; vertex ``v`` is named ``v + 1``.

    Every subtree is produced with its root on label 1 and the rest on label 2.
    """
    from .tree import _rooted_forest

    if g.n == 0:
        raise ExpressionError("cannot build an expression for the empty graph")
    order, parent = _rooted_forest(g)
    kids: list[list[int]] = [[] for _ in range(g.n)]
    for v in order.tolist():
        if parent[v] >= 0:
            kids[int(parent[v])].append(v)
    built: dict[int, CwExpression] = {}
    for v in reversed(order.tolist()):
        e: CwExpression = Singleton(1, str(v + 1))
        if kids[v]:
            below = _balanced_union([Relabel(1, 3, built.pop(c)) for c in kids[v]])
            e = Relabel(3, 2, AddEdges(1, 3, Union(e, below)))
        built[v] = e
    return _balanced_union([built[int(r)] for r in order[parent[order] < 0]])


Cotree = tuple  # ("leaf", name) | ("union", [children]) | ("join", [children])


def cograph_expression(cotree: Cotree) -> CwExpression:
    """Width-2 expression for a cotree; every vertex ends on label 1."""
    built: dict[int, CwExpression] = {}
    stack: list[tuple[Cotree, bool]] = [(cotree, False)]
    while stack:
        node, done = stack.pop()
        if not isinstance(node, tuple) or len(node) != 2 or node[0] not in ("leaf", "union", "join"):
            raise ExpressionError(f"malformed cotree node {node!r}")
        if node[0] == "leaf":
            built[id(node)] = Singleton(1, str(node[1]))
            continue
        if not node[1]:
            raise ExpressionError(f"cotree {node[0]} node without children")
        if not done:
            stack.append((node, True))
            stack.extend((c, False) for c in node[1])
            continue
        parts = [built.pop(id(c)) for c in node[1]]
        if node[0] == "union":
            built[id(node)] = _balanced_union(parts)
        else:
            acc = parts[0]
            for p in parts[1:]:
                acc = Relabel(2, 1, AddEdges(1, 2, Union(acc, Relabel(1, 2, p))))
            built[id(node)] = acc
    return built[id(cotree)]


def cotree_graph(cotree: Cotree) -> Graph:
    return eval_cw_expression(cograph_expression(cotree)).graph


# -- the dynamic program ----------------------------------------------------------------

Char = tuple[tuple[int, ...], tuple[int, ...]]  # (alpha, beta) over label sets
CwTable = dict[Char, tuple[int, tuple]]

# the merge case of the edge-adding transform needs uniqueness on all three label
# sets; checking only the largest one accepts K3 as uniquely coverable
CORRECTED, LITERAL = "corrected", "literal"


def _singleton_chars(label: int, d: int) -> tuple[Char, Char]:
    """Characteristics for the vertex deleted and kept."""
    full = 1 << d
    bit = 1 << (label - 1)
    deleted = ((0,) * full, (1,) * full)
    kept = (tuple(1 if m & bit else 0 for m in range(full)), (1,) * full)
    return deleted, kept


def _eta(ch: Char, i: int, j: int, d: int, rule: str = CORRECTED) -> Char:
    a, b = ch
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    na = list(a)
    nb = list(b)
    for m in range(1 << d):
        if m & (bi | bj):
            continue
        ai, aj, aij = a[m | bi], a[m | bj], a[m | bi | bj]
        if ai < aj:
            na[m], nb[m] = ai, b[m | bi]
        elif aj < ai:
            na[m], nb[m] = aj, b[m | bj]
        else:
            na[m] = ai
            if rule == LITERAL:
                unique = aij == ai and b[m | bi | bj] == 1
            else:
                unique = aij == ai and b[m | bi | bj] == 1 and b[m | bi] == 1 and b[m | bj] == 1
            nb[m] = 1 if unique else 2
    return tuple(na), tuple(nb)


def _rho(ch: Char, i: int, j: int, d: int) -> Char:
    a, b = ch
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    src = [(m | bi) if m & bj else (m & ~bi) for m in range(1 << d)]
    return tuple(a[s] for s in src), tuple(b[s] for s in src)


def _union(c1: Char, c2: Char) -> Char:
    return (
        tuple(x + y for x, y in zip(c1[0], c2[0])),
        tuple(min(2, x * y) for x, y in zip(c1[1], c2[1])),
    )


def empty_set_characteristic(e: CwExpression, d: int | None = None, rule: str = CORRECTED) -> dict[int, Char]:
    """Characteristic of the empty deletion set at every subexpression (keyed by ``id``)."""
    if d is None:
        d = width(e)
    out: dict[int, Char] = {}
    for node in postorder(e):
        if isinstance(node, Singleton):
            out[id(node)] = _singleton_chars(node.label, d)[1]
        elif isinstance(node, Union):
            out[id(node)] = _union(out[id(node.left)], out[id(node.right)])
        elif isinstance(node, AddEdges):
            out[id(node)] = _eta(out[id(node.child)], node.i, node.j, d, rule)
        else:
            out[id(node)] = _rho(out[id(node.child)], node.src, node.dst, d)
    return out


def _put(table: CwTable, key: Char, size: int, back: tuple) -> None:
    old = table.get(key)
    if old is None or size < old[0]:
        table[key] = (size, back)


def cw_dp(
    e: CwExpression,
    d: int | None = None,
    budget: int | None = None,
    rule: str = CORRECTED,
    trace: Callable[[CwExpression, CwTable], None] | None = None,
) -> dict[int, CwTable]:
    """Tables for every subexpression (keyed by ``id``).

    With ``budget`` set, entries needing more than ``budget`` deletions are
    dropped; keys are then the differences from the empty-set characteristic,
    which lie in ``[0, budget]``.
    """
    if d is None:
        d = width(e)
    base = empty_set_characteristic(e, d, rule) if budget is not None else None

    def encode(node: CwExpression, ch: Char) -> Char:
        if base is None:
            return ch
        ref = base[id(node)][0]
        return tuple(r - a for r, a in zip(ref, ch[0])), ch[1]

    def decode(node: CwExpression, key: Char) -> Char:
        if base is None:
            return key
        ref = base[id(node)][0]
        return tuple(r - x for r, x in zip(ref, key[0])), key[1]

    def entries(node: CwExpression) -> Iterator[tuple[Char, Char, int]]:
        for key, (s, _) in tables[id(node)].items():
            yield key, decode(node, key), s

    tables: dict[int, CwTable] = {}
    for node in postorder(e):
        table: CwTable = {}
        if isinstance(node, Singleton):
            deleted, kept = _singleton_chars(node.label, d)
            _put(table, encode(node, kept), 0, (False,))
            if budget is None or budget >= 1:
                _put(table, encode(node, deleted), 1, (True,))
        elif isinstance(node, Union):
            right = list(entries(node.right))
            for k1, c1, s1 in entries(node.left):
                for k2, c2, s2 in right:
                    s = s1 + s2
                    if budget is not None and s > budget:
                        continue
                    _put(table, encode(node, _union(c1, c2)), s, (k1, k2))
        elif isinstance(node, AddEdges):
            for k, c, s in entries(node.child):
                _put(table, encode(node, _eta(c, node.i, node.j, d, rule)), s, (k,))
        else:
            for k, c, s in entries(node.child):
                _put(table, encode(node, _rho(c, node.src, node.dst, d)), s, (k,))
        if trace is not None:
            trace(node, table)
        tables[id(node)] = table
    return tables


def cw_finalize(e: CwExpression, tables: dict[int, CwTable]) -> tuple[int, VertexSet] | None:
    """Fewest deletions whose result has a unique minimum cover, with a witness.

    Returns None when the table holds no such entry (only possible under a budget).
    """
    best = None
    for key, (s, _) in tables[id(e)].items():
        if key[1][0] == 1 and (best is None or (s, key) < best):
            best = (s, key)
    if best is None:
        return None
    size, key = best
    index = {s: i for i, s in enumerate(vertex_names(e))}
    deleted: list[int] = []
    stack = [(e, key)]
    while stack:
        node, key = stack.pop()
        back = tables[id(node)][key][1]
        if isinstance(node, Singleton):
            if back[0]:
                deleted.append(index[node.name])
        elif isinstance(node, Union):
            stack.append((node.left, back[0]))
            stack.append((node.right, back[1]))
        else:
            stack.append((node.child, back[0]))
    witness = frozenset(deleted)
    assert len(witness) == size
    return size, witness


def solve_muvc_cw(e: CwExpression, rule: str = CORRECTED) -> tuple[int, VertexSet]:
    """Exact optimum over all deletion sets; vertex ids follow :func:`vertex_names`."""
    result = cw_finalize(e, cw_dp(e, rule=rule))
    assert result is not None
    return result


def solve_muvc_cw_fpt(e: CwExpression, k: int) -> tuple[int, VertexSet] | None:
    """Optimum if it is at most ``k``, else None; tables are limited to ``k`` deletions."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return cw_finalize(e, cw_dp(e, budget=k))
