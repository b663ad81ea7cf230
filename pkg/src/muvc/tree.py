"""Linear-time MU-VC on forests.

A rooted tree is generated by a term over three operations: ``Leaf(r)``,
``Extend(t, r)`` which hangs the tree ``t`` below a fresh root ``r``, and
``Join(t1, t2)`` which glues two trees at their common root.  The dynamic
program attaches to every term a table indexed by twelve reduced
characteristics ``(delta, beta0, beta1)``:

* ``delta`` is ``min(2, a0 - a1)`` where ``a0`` / ``a1`` are the reduced sizes of
  the smallest covers avoiding / containing the root,
* ``beta0`` / ``beta1`` are 1 when that smallest cover is unique and 2 otherwise.

Each table entry is the fewest deletions (never the root) realising that
characteristic.  Tables are stored normalised (minimum subtracted) and
interned, so identical subtrees share one transition computation; a path of a
million vertices touches only a handful of distinct tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.sparse import csgraph, csr_matrix

from .graph import Graph, GraphError, VertexSet

LEAF, EXTEND, JOIN = 0, 1, 2

# characteristic index <-> (delta, beta0, beta1)
CHARS: tuple[tuple[int, int, int], ...] = tuple(
    (d, b0, b1) for d in range(3) for b0 in (1, 2) for b1 in (1, 2)
)

def char_index(delta: int, beta0: int, beta1: int) -> int:
    return delta * 4 + (beta0 - 1) * 2 + (beta1 - 1)


class NotAForestError(GraphError):
    pass


@dataclass(frozen=True)
class NeatTreeDecomposition:
    """Array form of a Leaf/Extend/Join term, children stored before parents.

    ``vertex[i]`` is the root of the subtree generated by node ``i``.  For
    ``Extend`` nodes ``left`` is the child term; for ``Join`` nodes ``left`` and
    ``right`` are the two glued terms.  ``roots`` lists the top node of every
    component.
    """

    kind: np.ndarray
    vertex: np.ndarray
    left: np.ndarray
    right: np.ndarray
    roots: tuple[int, ...]

    def __len__(self) -> int:
        return int(self.kind.size)

    def term(self, node: int | None = None) -> tuple:
        """Nested-tuple view: ``("leaf", v)``, ``("extend", t, v)``, ``("join", t1, t2)``."""
        if node is None:
            (node,) = self.roots
        kind, vertex = self.kind.tolist(), self.vertex.tolist()
        left, right = self.left.tolist(), self.right.tolist()
        built: dict[int, tuple] = {}
        stack = [node]
        while stack:
            x = stack[-1]
            kids = [left[x]] if kind[x] == EXTEND else [left[x], right[x]] if kind[x] == JOIN else []
            todo = [c for c in kids if c not in built]
            if todo:
                stack.extend(todo)
                continue
            stack.pop()
            if kind[x] == LEAF:
                built[x] = ("leaf", vertex[x])
            elif kind[x] == EXTEND:
                built[x] = ("extend", built[left[x]], vertex[x])
            else:
                built[x] = ("join", built[left[x]], built[right[x]])
        return built[node]

    def edges(self) -> set[tuple[int, int]]:
        """Edge set of the forest the term evaluates to."""
        out = set()
        for x in np.nonzero(self.kind == EXTEND)[0]:
            u, v = int(self.vertex[x]), int(self.vertex[self.left[x]])
            out.add((min(u, v), max(u, v)))
        return out


def _rooted_forest(g: Graph, roots: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """BFS order and parent array (``-1`` at roots) of a forest.

    Components are rooted at their lowest-index vertex unless ``roots`` is given.
    A virtual super-root joined to every component root lets one scipy BFS
    cover the whole forest.
    """
    n = g.n
    ncomp, labels = csgraph.connected_components(g.to_csr(), directed=False)
    if g.m != n - ncomp:
        raise NotAForestError(f"not a forest: {n} vertices, {g.m} edges, {ncomp} components")
    if roots is None:
        roots = np.full(ncomp, n, dtype=np.int64)
        np.minimum.at(roots, labels, np.arange(n))
    e = g.edges
    src = np.concatenate([e[:, 0], e[:, 1], np.full(roots.size, n)])
    dst = np.concatenate([e[:, 1], e[:, 0], roots])
    adj = csr_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n + 1, n + 1))
    order, pred = csgraph.breadth_first_order(adj, n, directed=True, return_predecessors=True)
    parent = pred[:n].astype(np.int64)
    parent[parent == n] = -1
    return order[1:].astype(np.int64), parent


def build_neat_decomposition(g: Graph, root: int | None = None) -> NeatTreeDecomposition:
    """Leaf/Extend/Join term generating ``g`` rooted at ``root``.

    Forests are accepted when ``root`` is None; each component is rooted at its
    lowest vertex.  A vertex with children ``c1 < c2 < ...`` becomes
    ``Join(...Join(Extend(t1, v), Extend(t2, v))..., Extend(tk, v))``.
    """
    n = g.n
    if root is not None:
        if not 0 <= root < n:
            raise GraphError(f"root {root} out of range")
        order, parent = _rooted_forest(g, np.array([root], dtype=np.int64))
        if order.size != n:
            raise NotAForestError("not a tree: graph is disconnected")
    else:
        order, parent = _rooted_forest(g)

    has_parent = parent >= 0
    child = np.nonzero(has_parent)[0]
    par = parent[child]
    nkids = np.bincount(par, minlength=n)
    block = np.where(nkids == 0, 1, 2 * nkids - 1)
    rev = order[::-1]
    start = np.zeros(n, dtype=np.int64)
    start[rev] = np.concatenate([[0], np.cumsum(block[rev])[:-1]])
    total = int(block.sum())
    top = np.where(nkids <= 1, start, start + 2 * nkids - 2)

    kind = np.full(total, LEAF, dtype=np.int8)
    vertex = np.empty(total, dtype=np.int64)
    left = np.full(total, -1, dtype=np.int64)
    right = np.full(total, -1, dtype=np.int64)

    leaves = np.nonzero(nkids == 0)[0]
    vertex[start[leaves]] = leaves

    # rank of each child among its siblings, siblings ordered by index
    srt = np.lexsort((child, par))
    child, par = child[srt], par[srt]
    first = np.concatenate([[0], np.cumsum(nkids)[:-1]])
    rank = np.arange(child.size) - first[par]
    ext = start[par] + rank
    kind[ext] = EXTEND
    vertex[ext] = par
    left[ext] = top[child]

    jmask = rank >= 1
    jpar, jrank = par[jmask], rank[jmask]
    jid = start[jpar] + nkids[jpar] + jrank - 1
    kind[jid] = JOIN
    vertex[jid] = jpar
    left[jid] = np.where(jrank == 1, start[jpar], jid - 1)
    right[jid] = start[jpar] + jrank

    comp_roots = order[parent[order] < 0]
    return NeatTreeDecomposition(kind, vertex, left, right, tuple(int(top[r]) for r in comp_roots))


# -- reduced-characteristic transitions ------------------------------------------------

Table = tuple  # 12 entries, each an int size or None for "unreachable"


def _extend_table(t: Table) -> tuple[Table, tuple]:
    """Hang ``t`` below a new root.  Returns the table and per-entry backpointers
    ``(child_char, child_root_deleted)``."""
    out: list = [None] * 12
    back: list = [None] * 12
    for c, s in enumerate(t):
        if s is None:
            continue
        d, b0, b1 = CHARS[c]
        # keep the child root
        nd = 0 if d >= 1 else 1
        nb1 = b0 if d == 0 else (b1 if d == 2 else 2)
        k = char_index(nd, b1, nb1)
        if out[k] is None or s < out[k] or (s == out[k] and back[k][1]):
            out[k], back[k] = s, (c, False)
        # delete the child root
        k = char_index(0, b1, b1)
        if out[k] is None or s + 1 < out[k]:
            out[k], back[k] = s + 1, (c, True)
    return tuple(out), tuple(back)


def _join_tables(t1: Table, t2: Table) -> tuple[Table, tuple]:
    out: list = [None] * 12
    back: list = [None] * 12
    items2 = [(c, s) for c, s in enumerate(t2) if s is not None]
    for c1, s1 in enumerate(t1):
        if s1 is None:
            continue
        d1, x0, x1 = CHARS[c1]
        for c2, s2 in items2:
            d2, y0, y1 = CHARS[c2]
            k = char_index(min(2, d1 + d2), min(2, x0 * y0), min(2, x1 * y1))
            s = s1 + s2
            if out[k] is None or s < out[k]:
                out[k], back[k] = s, (c1, c2)
    return tuple(out), tuple(back)


def _finalize_options(t: Table) -> list[tuple[int, int, bool]]:
    """Feasible (size, char, root_deleted) choices at a component root."""
    opts = []
    for c, s in enumerate(t):
        if s is None:
            continue
        d, b0, b1 = CHARS[c]
        if (d == 0 and b0 == 1) or (d == 2 and b1 == 1):
            opts.append((s, c, False))
        if b1 == 1:
            opts.append((s + 1, c, True))
    return opts


class _Interner:
    """Normalised tables with memoised transitions."""

    def __init__(self) -> None:
        self.tables: list[Table] = []
        self.ids: dict[Table, int] = {}
        self.ext: dict[int, tuple[int, int, tuple]] = {}
        self.join: dict[tuple[int, int], tuple[int, int, tuple]] = {}

    def intern(self, t: Table) -> tuple[int, int]:
        low = min(s for s in t if s is not None)
        norm = tuple(None if s is None else s - low for s in t)
        sid = self.ids.get(norm)
        if sid is None:
            sid = self.ids[norm] = len(self.tables)
            self.tables.append(norm)
        return sid, low

    def extend(self, sid: int) -> tuple[int, int, tuple]:
        hit = self.ext.get(sid)
        if hit is None:
            t, back = _extend_table(self.tables[sid])
            nid, low = self.intern(t)
            hit = self.ext[sid] = (nid, low, back)
        return hit

    def join2(self, a: int, b: int) -> tuple[int, int, tuple]:
        hit = self.join.get((a, b))
        if hit is None:
            t, back = _join_tables(self.tables[a], self.tables[b])
            nid, low = self.intern(t)
            hit = self.join[(a, b)] = (nid, low, back)
        return hit


class ReducedDp(NamedTuple):
    """Per-node interned state id and offset; ``table(i)`` rebuilds the full table."""

    decomposition: NeatTreeDecomposition
    state: list[int]
    offset: list[int]
    interner: _Interner

    def table(self, node: int) -> dict[tuple[int, int, int], int]:
        base = self.offset[node]
        t = self.interner.tables[self.state[node]]
        return {CHARS[c]: s + base for c, s in enumerate(t) if s is not None}


def tree_dp_reduced(td: NeatTreeDecomposition) -> ReducedDp:
    """Bottom-up reduced-characteristic DP over every node of ``td``."""
    memo = _Interner()
    leaf_id, _ = memo.intern(tuple(0 if c == 0 else None for c in range(12)))
    kind = td.kind.tolist()
    left = td.left.tolist()
    right = td.right.tolist()
    size = len(kind)
    state = [0] * size
    offset = [0] * size
    ext_memo, join_memo = memo.ext, memo.join
    for i in range(size):
        k = kind[i]
        if k == EXTEND:
            c = left[i]
            sid = state[c]
            hit = ext_memo.get(sid)
            if hit is None:
                hit = memo.extend(sid)
            state[i] = hit[0]
            offset[i] = offset[c] + hit[1]
        elif k == JOIN:
            a, b = left[i], right[i]
            key = (state[a], state[b])
            hit = join_memo.get(key)
            if hit is None:
                hit = memo.join2(*key)
            state[i] = hit[0]
            offset[i] = offset[a] + offset[b] + hit[1]
        else:
            state[i] = leaf_id
    return ReducedDp(td, state, offset, memo)


def tree_finalize(dp: ReducedDp, node: int | None = None) -> tuple[int, VertexSet]:
    """Optimum and one witness for the component whose top node is ``node``."""
    td = dp.decomposition
    if node is None:
        (node,) = td.roots
    return _finalize_many(dp, [node])


def _finalize_many(dp: ReducedDp, tops: list[int]) -> tuple[int, VertexSet]:
    td = dp.decomposition
    memo = dp.interner
    kind = td.kind.tolist()
    left = td.left.tolist()
    right = td.right.tolist()
    state = dp.state
    chosen = [-1] * len(kind)
    total = 0
    gone_vertices: list[int] = []
    for top in tops:
        # prefer keeping the root on ties, then the lowest characteristic index
        best = min(_finalize_options(memo.tables[state[top]]), key=lambda o: (o[0], o[2], o[1]))
        total += best[0] + dp.offset[top]
        chosen[top] = best[1]
        if best[2]:
            gone_vertices.append(int(td.vertex[top]))
    gone_nodes: list[int] = []
    ext_memo, join_memo = memo.ext, memo.join
    for i in range(len(kind) - 1, -1, -1):
        c = chosen[i]
        if c < 0:
            continue
        k = kind[i]
        if k == EXTEND:
            child = left[i]
            child_char, gone = ext_memo[state[child]][2][c]
            chosen[child] = child_char
            if gone:
                gone_nodes.append(child)
        elif k == JOIN:
            c1, c2 = join_memo[(state[left[i]], state[right[i]])][2][c]
            chosen[left[i]] = c1
            chosen[right[i]] = c2
    if gone_nodes:
        gone_vertices.extend(td.vertex[np.array(gone_nodes, dtype=np.int64)].tolist())
    witness = frozenset(gone_vertices)
    assert len(witness) == total
    return total, witness


def solve_muvc_tree(g: Graph) -> tuple[int, VertexSet]:
    """Optimum and witness for MU-VC on a forest (components rooted at their lowest vertex)."""
    if g.n == 0:
        return 0, frozenset()
    td = build_neat_decomposition(g)
    dp = tree_dp_reduced(td)
    return _finalize_many(dp, list(td.roots))


# -- full characteristics (cross-check) -----------------------------------------------

FullChar = tuple[int, int, int, int]  # (a0, a1, b0, b1)


def _full_extend(t: dict[FullChar, int]) -> dict[FullChar, int]:
    out: dict[FullChar, int] = {}
    for (a0, a1, b0, b1), s in t.items():
        # keep the child root: a cover avoiding the new root must take the child root
        n0 = a1 + 1
        if a0 < a1 + 1:
            n1, nb1 = a0, b0
        elif a0 > a1 + 1:
            n1, nb1 = a1 + 1, b1
        else:
            n1, nb1 = a0, 2
        key = (n0, n1, b1, nb1)
        if s < out.get(key, s + 1):
            out[key] = s
        key = (a1, a1, b1, b1)
        if s + 1 < out.get(key, s + 2):
            out[key] = s + 1
    return out


def _full_join(t1: dict[FullChar, int], t2: dict[FullChar, int]) -> dict[FullChar, int]:
    out: dict[FullChar, int] = {}
    items2 = list(t2.items())
    for (a0, a1, b0, b1), s1 in t1.items():
        for (c0, c1, e0, e1), s2 in items2:
            key = (a0 + c0, a1 + c1, min(2, b0 * e0), min(2, b1 * e1))
            s = s1 + s2
            if s < out.get(key, s + 1):
                out[key] = s
    return out


def tree_dp_full(td: NeatTreeDecomposition) -> list[dict[FullChar, int]]:
    """Full-characteristic tables for every node; quadratic key space, cross-checking only."""
    kind = td.kind.tolist()
    left = td.left.tolist()
    right = td.right.tolist()
    tables: list[dict[FullChar, int]] = []
    for i in range(len(kind)):
        if kind[i] == LEAF:
            tables.append({(0, 0, 1, 1): 0})
        elif kind[i] == EXTEND:
            tables.append(_full_extend(tables[left[i]]))
        else:
            tables.append(_full_join(tables[left[i]], tables[right[i]]))
    return tables


def full_finalize(t: dict[FullChar, int]) -> int:
    best = None
    for (a0, a1, b0, b1), s in t.items():
        if (a0 < a1 + 1 and b0 == 1) or (a1 + 1 < a0 and b1 == 1):
            best = s if best is None else min(best, s)
        if b1 == 1:
            best = s + 1 if best is None else min(best, s + 1)
    assert best is not None
    return best


def reduce_full_table(t: dict[FullChar, int]) -> dict[tuple[int, int, int], int]:
    """Project a full table onto reduced characteristics, keeping minima."""
    out: dict[tuple[int, int, int], int] = {}
    for (a0, a1, b0, b1), s in t.items():
        key = (min(2, a0 - a1), b0, b1)
        if s < out.get(key, s + 1):
            out[key] = s
    return out
