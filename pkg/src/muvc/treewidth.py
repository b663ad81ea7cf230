"""MU-VC over nice tree decompositions.

At a node with bag ``B`` the partial graph is everything introduced below,
minus edges whose endpoints both still sit in ``B``: an edge is accounted for
exactly when its first endpoint is forgotten, so the bag is always an
independent terminal set.

A reduced characteristic stores, for every subset ``D`` of the bag (a bitmask
over bag positions), how much smaller the best cover containing exactly ``D``
of the terminals is compared with the best cover avoiding all terminals
(``delta``), and whether that best cover is unique (``beta`` in {1, 2}).
Terminals never count towards cover sizes and are never deleted.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass

from .graph import Graph, GraphError, VertexSet


class DecompositionError(GraphError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags (0-based vertex ids) and undirected tree edges between bag indices."""

    bags: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def validate(self, g: Graph) -> None:
        """Raise :class:`DecompositionError` naming the first violated condition."""
        nb = len(self.bags)
        if nb == 0:
            if g.n:
                raise DecompositionError("empty decomposition for a nonempty graph")
            return
        if len(self.edges) != nb - 1:
            raise DecompositionError(f"decomposition has {nb} bags but {len(self.edges)} tree edges")
        adj: list[list[int]] = [[] for _ in range(nb)]
        for a, b in self.edges:
            if not (0 <= a < nb and 0 <= b < nb) or a == b:
                raise DecompositionError(f"bad tree edge ({a + 1}, {b + 1})")
            adj[a].append(b)
            adj[b].append(a)
        seen = {0}
        stack = [0]
        while stack:
            for y in adj[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != nb:
            raise DecompositionError("decomposition tree is disconnected")
        holders: list[list[int]] = [[] for _ in range(g.n)]
        for i, bag in enumerate(self.bags):
            for v in bag:
                if not 0 <= v < g.n:
                    raise DecompositionError(f"bag {i + 1} names vertex {v + 1} outside the graph")
                holders[v].append(i)
        for v in range(g.n):
            if not holders[v]:
                raise DecompositionError(f"vertex {v + 1} is in no bag")
            own = set(holders[v])
            start = holders[v][0]
            reach = {start}
            stack = [start]
            while stack:
                for y in adj[stack.pop()]:
                    if y in own and y not in reach:
                        reach.add(y)
                        stack.append(y)
            if reach != own:
                raise DecompositionError(f"bags containing vertex {v + 1} are not connected")
        bagsets = [set(b) for b in self.bags]
        for u, v in g.edge_list():
            if not any(u in bagsets[i] for i in holders[v]):
                raise DecompositionError(f"edge {u + 1} {v + 1} is not covered by any bag")


def parse_td(text: str, source: str | None = None) -> TreeDecomposition:
    """Parse the PACE ``.td`` format (1-based bag and vertex ids)."""
    where = f"{source}:" if source else ""
    header = None
    bags: dict[int, tuple[int, ...]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("#"):
            continue
        tok = line.split()
        try:
            if tok[0] == "s":
                if len(tok) != 5 or tok[1] != "td":
                    raise ValueError
                header = (int(tok[2]), int(tok[3]), int(tok[4]))
            elif tok[0] == "b":
                bid = int(tok[1])
                content = tuple(sorted(int(t) - 1 for t in tok[2:]))
            else:
                if len(tok) != 2:
                    raise ValueError
                edges.append((int(tok[0]), int(tok[1])))
                continue
        except ValueError:
            raise DecompositionError(f"{where}{lineno}: malformed line {line!r}") from None
        if tok[0] == "b":
            if bid in bags:
                raise DecompositionError(f"{where}{lineno}: duplicate bag {bid}")
            bags[bid] = content
    if header is None:
        raise DecompositionError(f"{where} missing 's td' header")
    nbags, _, _ = header
    if sorted(bags) != list(range(1, nbags + 1)):
        raise DecompositionError(f"{where} expected bags 1..{nbags}, found {len(bags)}")
    return TreeDecomposition(tuple(bags[i] for i in range(1, nbags + 1)), tuple((a - 1, b - 1) for a, b in edges))


def format_td(td: TreeDecomposition, n: int) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    lines += ["b " + " ".join(str(x) for x in [i + 1, *(v + 1 for v in bag)]) for i, bag in enumerate(td.bags)]
    lines += [f"{a + 1} {b + 1}" for a, b in td.edges]
    return "\n".join(lines) + "\n"


def forest_decomposition(g: Graph) -> TreeDecomposition:
    """Width-1 decomposition of a forest: one bag per edge, one per isolated vertex."""
    from .tree import _rooted_forest

    order, parent = _rooted_forest(g)
    bags: list[tuple[int, ...]] = []
    edges: list[tuple[int, int]] = []
    up_bag: dict[int, int] = {}  # vertex -> bag holding it with its parent (or itself if a root)
    top_of_component: list[int] = []
    for v in order.tolist():
        p = int(parent[v])
        if p < 0:
            up_bag[v] = len(bags)
            bags.append((v,))
            top_of_component.append(up_bag[v])
        else:
            up_bag[v] = len(bags)
            bags.append((min(v, p), max(v, p)))
            edges.append((up_bag[p], up_bag[v]))
    for a, b in zip(top_of_component, top_of_component[1:]):
        edges.append((a, b))
    return TreeDecomposition(tuple(bags), tuple(edges))


# -- nice decompositions ----------------------------------------------------------------

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Nodes listed children-first; the last node is the root with an empty bag."""

    kind: tuple[str, ...]
    vertex: tuple[int, ...]  # introduced / forgotten vertex, -1 otherwise
    children: tuple[tuple[int, ...], ...]
    bags: tuple[tuple[int, ...], ...]  # sorted

    def __len__(self) -> int:
        return len(self.kind)

    @property
    def root(self) -> int:
        return len(self.kind) - 1

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1


def make_nice(td: TreeDecomposition, g: Graph, validate: bool = True) -> NiceTreeDecomposition:
    """Convert a tree decomposition into a nice one of the same width rooted at bag 0."""
    if validate:
        td.validate(g)
    kind: list[str] = []
    vertex: list[int] = []
    children: list[tuple[int, ...]] = []
    bags: list[tuple[int, ...]] = []

    def emit(k: str, v: int, kids: tuple[int, ...], bag: Iterable[int]) -> int:
        kind.append(k)
        vertex.append(v)
        children.append(kids)
        bags.append(tuple(sorted(bag)))
        return len(kind) - 1

    def morph(node: int, src: tuple[int, ...], dst: Iterable[int]) -> int:
        """Chain of forgets then introduces turning bag ``src`` into ``dst``."""
        cur = set(src)
        dst = set(dst)
        for v in sorted(cur - dst):
            cur.discard(v)
            node = emit(FORGET, v, (node,), cur)
        for v in sorted(dst - cur):
            cur.add(v)
            node = emit(INTRODUCE, v, (node,), cur)
        return node

    if not td.bags:
        emit(LEAF, -1, (), ())
        return NiceTreeDecomposition(tuple(kind), tuple(vertex), tuple(children), tuple(bags))

    nb = len(td.bags)
    adj: list[list[int]] = [[] for _ in range(nb)]
    for a, b in td.edges:
        adj[a].append(b)
        adj[b].append(a)
    parent = [-1] * nb
    order = [0]
    seen = [False] * nb
    seen[0] = True
    for x in order:
        for y in sorted(adj[x]):
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                order.append(y)
    kids_of: list[list[int]] = [[] for _ in range(nb)]
    for y in order[1:]:
        kids_of[parent[y]].append(y)

    top: dict[int, int] = {}  # decomposition bag -> nice node whose bag equals it
    for x in reversed(order):
        bag = td.bags[x]
        if not kids_of[x]:
            node = morph(emit(LEAF, -1, (), ()), (), bag)
        else:
            branches = [morph(top[c], td.bags[c], bag) for c in kids_of[x]]
            node = branches[0]
            for other in branches[1:]:
                node = emit(JOIN, -1, (node, other), bag)
        top[x] = node
    morph(top[0], td.bags[0], ())
    return NiceTreeDecomposition(tuple(kind), tuple(vertex), tuple(children), tuple(bags))


# -- the dynamic program ----------------------------------------------------------------

Char = tuple[tuple[int, ...], tuple[int, ...]]  # (delta vector, beta vector) over bag subsets
TwTable = dict[Char, tuple[int, tuple]]  # char -> (size, backpointer)

EXACT, TRUNCATED = "exact", "degree-truncated"


def _popcount_table(k: int) -> list[int]:
    return [bin(m).count("1") for m in range(1 << k)]


def _insert_zero_bit(mask: int, pos: int) -> int:
    low = mask & ((1 << pos) - 1)
    return low | ((mask >> pos) << (pos + 1))


def _remove_bit(mask: int, pos: int) -> int:
    low = mask & ((1 << pos) - 1)
    return low | ((mask >> (pos + 1)) << pos)


def _put(table: TwTable, key: Char, size: int, back: tuple, prefer: bool = False) -> None:
    old = table.get(key)
    if old is None or size < old[0] or (prefer and size == old[0]):
        table[key] = (size, back)


def tw_dp(
    nice: NiceTreeDecomposition,
    g: Graph,
    mode: str = EXACT,
    trace: Callable[[int, tuple[int, ...], TwTable], None] | None = None,
) -> list[TwTable]:
    """Tables for every nice node.  ``trace(node, bag, table)`` sees each finished table."""
    if mode not in (EXACT, TRUNCATED):
        raise ValueError(f"unknown mode {mode!r}")
    max_deg = g.max_degree
    adj = [set(a) for a in g.adjacency_lists]
    tables: list[TwTable] = []
    for x in range(len(nice)):
        k = nice.kind[x]
        bag = nice.bags[x]
        table: TwTable = {}
        if k == LEAF:
            table[((0,), (1,))] = (0, ())
        elif k == INTRODUCE:
            (y,) = nice.children[x]
            pos = bag.index(nice.vertex[x])
            src = [_remove_bit(m, pos) for m in range(1 << len(bag))]
            for (dy, by), (s, _) in tables[y].items():
                key = (tuple(dy[i] for i in src), tuple(by[i] for i in src))
                table[key] = (s, ((dy, by),))
        elif k == JOIN:
            y, z = nice.children[x]
            right = list(tables[z].items())
            for (d1, b1), (s1, _) in tables[y].items():
                for (d2, b2), (s2, _) in right:
                    key = (
                        tuple(a + b for a, b in zip(d1, d2)),
                        tuple(min(2, a * b) for a, b in zip(b1, b2)),
                    )
                    _put(table, key, s1 + s2, ((d1, b1), (d2, b2)))
        else:
            (y,) = nice.children[x]
            v = nice.vertex[x]
            ybag = nice.bags[y]
            pos = ybag.index(v)
            nmask = 0
            for i, u in enumerate(bag):
                if u in adj[v]:
                    nmask |= 1 << i
            plain = [_insert_zero_bit(m, pos) for m in range(1 << len(bag))]
            plus = [m | (1 << pos) for m in plain]
            vbit = 1 << pos
            for (dy, by), (s, _) in tables[y].items():
                ckey = (dy, by)
                # keep v: it leaves the terminal set and may or may not join the cover
                dv = dy[vbit]
                gamma = 0 if nmask == 0 and dv <= 1 else dv - 1
                dx: list[int] = []
                bx: list[int] = []
                for m in range(1 << len(bag)):
                    d_in, d_out = dy[plus[m]], dy[plain[m]]
                    covered = (nmask & m) == nmask
                    if covered and d_in <= d_out + 1:
                        dx.append(d_out - gamma)
                    else:
                        dx.append(d_in - gamma - 1)
                    if covered and d_in < d_out + 1:
                        bx.append(by[plain[m]])
                    elif not covered or d_in > d_out + 1:
                        bx.append(by[plus[m]])
                    else:
                        bx.append(2)
                _put(table, (tuple(dx), tuple(bx)), s, (ckey, False), prefer=True)
                # delete v
                dx2 = tuple(dy[p] - dv for p in plus)
                bx2 = tuple(by[p] for p in plus)
                _put(table, (dx2, bx2), s + 1, (ckey, True))
        if mode == TRUNCATED and k == FORGET:
            pc = _popcount_table(len(bag))
            table = {
                key: val for key, val in table.items() if all(0 <= d <= max_deg * pc[m] for m, d in enumerate(key[0]))
            }
        if trace is not None:
            trace(x, bag, table)
        tables.append(table)
    return tables


def tw_finalize(nice: NiceTreeDecomposition, tables: list[TwTable]) -> tuple[int, VertexSet]:
    """Best root entry with a unique cover, and the deletions that realise it."""
    root = nice.root
    best = None
    for key, (s, _) in tables[root].items():
        if key[1][0] == 1 and (best is None or s < best[0] or (s == best[0] and key < best[1])):
            best = (s, key)
    assert best is not None, "root table has no unique-cover entry"
    size, key = best
    deleted: list[int] = []
    stack = [(root, key)]
    while stack:
        x, key = stack.pop()
        back = tables[x][key][1]
        k = nice.kind[x]
        if k == INTRODUCE:
            stack.append((nice.children[x][0], back[0]))
        elif k == JOIN:
            stack.append((nice.children[x][0], back[0]))
            stack.append((nice.children[x][1], back[1]))
        elif k == FORGET:
            if back[1]:
                deleted.append(nice.vertex[x])
            stack.append((nice.children[x][0], back[0]))
    witness = frozenset(deleted)
    assert len(witness) == size
    return size, witness


def solve_muvc_tw(
    g: Graph, td: TreeDecomposition | None = None, mode: str = EXACT, validate: bool = True
) -> tuple[int, VertexSet]:
    """MU-VC through a tree decomposition; forests get a width-1 one when ``td`` is None."""
    if td is None:
        td = forest_decomposition(g)
    nice = make_nice(td, g, validate=validate)
    return tw_finalize(nice, tw_dp(nice, g, mode))
