"""Simple undirected graphs, the ``.gr`` edge-list format and exact vertex cover primitives.

Vertices are the integers ``0..n-1``.  Files use 1-based ids; the conversion
happens only in :func:`parse_graph` and :func:`format_graph`.
"""

from __future__ import annotations

from collections.abc import Iterable
from functools import cached_property

import numpy as np
from scipy import sparse

VertexSet = frozenset


class GraphError(ValueError):
    """Raised when an edge list does not describe a simple undirected graph."""


class GraphFormatError(GraphError):
    """A ``.gr`` file violates the format; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class UncoverableError(ValueError):
    """Both endpoints of an edge are forbidden from entering the cover."""


class Graph:
    """Immutable simple graph stored as a sorted edge array plus CSR adjacency."""

    __slots__ = ("n", "edges", "indptr", "indices", "__dict__")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] | np.ndarray = ()):
        if n < 0:
            raise GraphError(f"negative vertex count {n}")
        arr = np.asarray(edges if isinstance(edges, np.ndarray) else list(edges), dtype=np.int64)
        if arr.size == 0:
            arr = np.zeros((0, 2), dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise GraphError("edges must be pairs")
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            bad = arr[(arr < 0).any(axis=1) | (arr >= n).any(axis=1)][0]
            raise GraphError(f"endpoint out of range in edge {tuple(int(x) for x in bad)} (n={n})")
        if np.any(arr[:, 0] == arr[:, 1]):
            v = int(arr[arr[:, 0] == arr[:, 1]][0, 0])
            raise GraphError(f"self-loop at vertex {v}")
        arr = np.sort(arr, axis=1)
        keys = arr[:, 0] * max(n, 1) + arr[:, 1]
        order = np.argsort(keys, kind="stable")
        arr, keys = arr[order], keys[order]
        dup = np.nonzero(keys[1:] == keys[:-1])[0]
        if dup.size:
            u, v = arr[dup[0]]
            raise GraphError(f"duplicate edge {{{int(u)}, {int(v)}}}")
        self.n = int(n)
        self.edges = arr
        self.edges.flags.writeable = False
        both = np.concatenate([arr, arr[:, ::-1]])
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        self.indices = both[:, 1].copy()
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(both[:, 0], minlength=n), out=self.indptr[1:])
        self.indices.flags.writeable = False
        self.indptr.flags.writeable = False

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.size and nb[i] == v)

    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edges]

    @cached_property
    def adjacency_lists(self) -> list[list[int]]:
        ind = self.indices.tolist()
        ptr = self.indptr.tolist()
        return [ind[ptr[v] : ptr[v + 1]] for v in range(self.n)]

    @cached_property
    def adjacency_masks(self) -> list[int]:
        """Neighbourhoods as Python int bitmasks (bit ``u`` set iff ``u`` is adjacent)."""
        masks = [0] * self.n
        for u, v in self.edge_list():
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return masks

    def to_csr(self) -> sparse.csr_matrix:
        data = np.ones(self.indices.size, dtype=np.int8)
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.edges.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def parse_graph(text: str | bytes, source: str | None = None) -> Graph:
    """Parse the ``.gr`` format: ``p <n> <m>`` then ``m`` lines ``e <u> <v>`` (1-based)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n = m = None
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] == "p":
            if n is not None:
                raise GraphFormatError("second header line", lineno, source)
            if len(tok) != 3:
                raise GraphFormatError(f"malformed header {line!r}, expected 'p <n> <m>'", lineno, source)
            try:
                n, m = int(tok[1]), int(tok[2])
            except ValueError:
                raise GraphFormatError(f"malformed header {line!r}", lineno, source) from None
            if n < 0 or m < 0:
                raise GraphFormatError(f"malformed header {line!r}", lineno, source)
        elif tok[0] == "e":
            if n is None:
                raise GraphFormatError("edge line before header", lineno, source)
            if len(tok) != 3:
                raise GraphFormatError(f"malformed edge line {line!r}", lineno, source)
            try:
                u, v = int(tok[1]), int(tok[2])
            except ValueError:
                raise GraphFormatError(f"malformed edge line {line!r}", lineno, source) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"endpoint out of range in {line!r} (n={n})", lineno, source)
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}", lineno, source)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"duplicate edge {u} {v} (first on line {seen[key]})", lineno, source)
            seen[key] = lineno
            edges.append((u - 1, v - 1))
        else:
            raise GraphFormatError(f"unknown line type {tok[0]!r}", lineno, source)
    if n is None:
        raise GraphFormatError("missing header 'p <n> <m>'", None, source)
    if len(edges) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(edges)}", None, source)
    return Graph(n, edges)


def format_graph(g: Graph, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"p {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edge_list())
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read(), source=str(path))


def is_vertex_cover(g: Graph, m: Iterable[int]) -> bool:
    """True iff every edge of ``g`` has an endpoint in ``m``."""
    inside = np.zeros(g.n, dtype=bool)
    idx = np.fromiter(m, dtype=np.int64)
    if idx.size:
        inside[idx] = True
    e = g.edges
    return bool(np.all(inside[e[:, 0]] | inside[e[:, 1]]))


def induced_delete(g: Graph, s: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Return ``G - S`` together with ``kept`` where ``kept[i]`` is the old id of new vertex ``i``."""
    drop = np.zeros(g.n, dtype=bool)
    idx = np.fromiter(s, dtype=np.int64)
    if idx.size:
        drop[idx] = True
    kept = np.nonzero(~drop)[0]
    remap = np.full(g.n, -1, dtype=np.int64)
    remap[kept] = np.arange(kept.size)
    e = g.edges
    keep_e = ~(drop[e[:, 0]] | drop[e[:, 1]])
    return Graph(int(kept.size), remap[e[keep_e]]), tuple(int(v) for v in kept)


# -- exact minimum vertex cover by branch and bound --------------------------------------


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _matching_bound(adj: list[int], alive: int) -> int:
    """Size of a greedy maximal matching in ``G[alive]``; a lower bound on any cover."""
    size = 0
    free = alive
    while free:
        low = free & -free
        v = low.bit_length() - 1
        free ^= low
        nb = adj[v] & free
        if nb:
            free &= ~(nb & -nb)
            size += 1
    return size


def _branch(adj: list[int], alive: int, budget: int, decide: bool) -> int | None:
    """Smallest cover of ``G[alive]`` with fewer than ``budget`` vertices, or None.

    With ``decide`` set, the first cover under budget is returned instead of the smallest.
    """
    forced = 0
    changed = True
    while changed:
        changed = False
        best_v, best_d, best_nb = -1, -1, 0
        for v in _bits(alive):
            if not (alive >> v) & 1:
                continue
            nb = adj[v] & alive
            if not nb:
                alive &= ~(1 << v)
                continue
            if nb & (nb - 1) == 0:
                forced |= nb
                alive &= ~(nb | (1 << v))
                budget -= 1
                changed = True
                continue
            d = nb.bit_count()
            if d > best_d:
                best_v, best_d, best_nb = v, d, nb
        if budget <= 0:
            return None
    if not alive or best_v < 0:
        return forced
    if _matching_bound(adj, alive) >= budget:
        return None
    v, nb = best_v, best_nb
    best = None
    sub = _branch(adj, alive & ~(1 << v), budget - 1, decide)
    if sub is not None:
        best = sub | (1 << v)
        if decide:
            return forced | best
        budget = best.bit_count()
    k = nb.bit_count()
    if k < budget:
        sub = _branch(adj, alive & ~(nb | (1 << v)), budget - k, decide)
        if sub is not None:
            best = sub | nb
    return None if best is None else forced | best


def _prepare(g: Graph, forbidden: Iterable[int]) -> tuple[list[int], int, int]:
    adj = g.adjacency_masks
    fmask = 0
    for v in forbidden:
        fmask |= 1 << v
    forced = 0
    for v in _bits(fmask):
        if adj[v] & fmask:
            u = (adj[v] & fmask).bit_length() - 1
            raise UncoverableError(f"edge {{{min(u, v)}, {max(u, v)}}} has both endpoints forbidden")
        forced |= adj[v]
    alive = ((1 << g.n) - 1) & ~fmask & ~forced
    return adj, alive, forced


def min_vertex_cover(g: Graph, forbidden: Iterable[int] = ()) -> VertexSet:
    """A minimum vertex cover of ``g`` containing no vertex of ``forbidden``."""
    adj, alive, forced = _prepare(g, forbidden)
    cover = _branch(adj, alive, alive.bit_count() + 1, decide=False)
    assert cover is not None
    return frozenset(_bits(cover | forced))


def min_vc_size(g: Graph, forbidden: Iterable[int] = ()) -> int:
    """Exact size of a minimum vertex cover avoiding ``forbidden``."""
    return len(min_vertex_cover(g, forbidden))


def has_cover_within(g: Graph, size: int, forbidden: Iterable[int] = ()) -> bool:
    """Decide whether a cover of at most ``size`` vertices avoiding ``forbidden`` exists."""
    try:
        adj, alive, forced = _prepare(g, forbidden)
    except UncoverableError:
        return False
    budget = size - forced.bit_count() + 1
    if budget <= 0:
        return False
    return _branch(adj, alive, budget, decide=True) is not None


def is_unique_min_vc(g: Graph) -> tuple[bool, VertexSet]:
    """Decide whether ``g`` has exactly one minimum vertex cover.

    A minimum cover ``M`` is the only one iff forbidding any single ``v`` in ``M``
    forces a strictly larger cover.  Returns the flag and ``M``.
    """
    cover = min_vertex_cover(g)
    size = len(cover)
    degree = g.degrees
    # low-degree vertices are the likeliest to have a swap partner; try them first
    for v in sorted(cover, key=lambda x: (int(degree[x]), x)):
        if has_cover_within(g, size, forbidden=(v,)):
            return False, cover
    return True, cover
