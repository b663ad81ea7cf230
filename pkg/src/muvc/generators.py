"""Instance families: the separation trees, gadget graphs from 1-in-3 SAT, random corpora.

All randomness goes through :class:`random.Random` seeded by the caller, so a
seed fully determines the output on every platform.
"""

from __future__ import annotations

import heapq
import itertools
import random
import re
from dataclasses import dataclass, field

from .cliquewidth import Cotree
from .graph import Graph, GraphError
from .treewidth import TreeDecomposition

# 1-based edges of the 9-vertex example tree; vertex 1 is the hub
EXAMPLE_TREE_EDGES = ((1, 2), (1, 4), (1, 6), (1, 8), (1, 9), (2, 3), (4, 5), (6, 7))


def example_tree() -> Graph:
    return Graph(9, [(u - 1, v - 1) for u, v in EXAMPLE_TREE_EDGES])


def gen_gk(k: int) -> Graph:
    """Separation tree ``G_k``: the example tree plus ``k - 3`` two-edge paths hanging off vertex 1.

    MU-VC stays at 2 while the partial-assignment variant grows with ``k``.
    """
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    edges = [(u - 1, v - 1) for u, v in EXAMPLE_TREE_EDGES]
    n = 9
    for _ in range(k - 3):
        edges += [(0, n), (n, n + 1)]
        n += 2
    return Graph(n, edges)


# -- typed 3-CNF formulas --------------------------------------------------------------


class FormulaError(ValueError):
    pass


Literal = tuple[str, int, bool]  # (kind 'x' | 'y', 1-based index, positive)


@dataclass(frozen=True)
class TypedFormula:
    n_x: int
    n_y: int
    clauses: tuple[tuple[Literal, Literal, Literal], ...]

    def variables(self) -> list[tuple[str, int]]:
        return [("x", i) for i in range(1, self.n_x + 1)] + [("y", i) for i in range(1, self.n_y + 1)]

    def occurrences(self) -> dict[tuple[str, int], list[tuple[int, int]]]:
        """Per variable, its (clause, slot) positions in clause order."""
        occ: dict[tuple[str, int], list[tuple[int, int]]] = {v: [] for v in self.variables()}
        for c, clause in enumerate(self.clauses):
            for t, (kind, i, _) in enumerate(clause):
                occ[(kind, i)].append((c, t))
        return occ


_LIT = re.compile(r"^(-?)([xy])(\d+)$")


def parse_formula(text: str) -> TypedFormula:
    """Format: ``x <count>``, ``y <count>``, then one clause per line such as ``x1 -y2 y3``."""
    counts: dict[str, int] = {}
    clauses: list[tuple[Literal, Literal, Literal]] = []
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] in ("x", "y") and len(tok) == 2 and not clauses:
            if tok[0] in counts or not tok[1].isdigit():
                raise FormulaError(f"line {lineno}: bad variable count {line!r}")
            counts[tok[0]] = int(tok[1])
            continue
        if set(counts) != {"x", "y"}:
            raise FormulaError(f"line {lineno}: clauses must follow the 'x <count>' and 'y <count>' lines")
        if len(tok) != 3:
            raise FormulaError(f"line {lineno}: a clause needs exactly 3 literals, got {len(tok)}")
        lits = []
        for t in tok:
            m = _LIT.match(t)
            if not m:
                raise FormulaError(f"line {lineno}: bad literal {t!r}")
            sign, kind, idx = m.groups()
            if not 1 <= int(idx) <= counts[kind]:
                raise FormulaError(f"line {lineno}: variable {kind}{idx} out of range")
            lits.append((kind, int(idx), sign == ""))
        clauses.append(tuple(lits))
    if set(counts) != {"x", "y"}:
        raise FormulaError("missing 'x <count>' or 'y <count>' line")
    f = TypedFormula(counts["x"], counts["y"], tuple(clauses))
    validate_formula(f)
    return f


def validate_formula(f: TypedFormula) -> None:
    for c, clause in enumerate(f.clauses):
        if len(clause) != 3:
            raise FormulaError(f"clause {c + 1} has {len(clause)} literals")
        if len({(k, i) for k, i, _ in clause}) != 3:
            raise FormulaError(f"clause {c + 1} repeats a variable")
    for (kind, i), occ in f.occurrences().items():
        if not occ:
            raise FormulaError(f"variable {kind}{i} occurs in no clause")


def format_formula(f: TypedFormula) -> str:
    lines = [f"x {f.n_x}", f"y {f.n_y}"]
    for clause in f.clauses:
        lines.append(" ".join(("" if pos else "-") + f"{k}{i}" for k, i, pos in clause))
    return "\n".join(lines) + "\n"


def exactly_one_satisfied(f: TypedFormula, x: tuple[bool, ...], y: tuple[bool, ...]) -> bool:
    value = {"x": x, "y": y}
    return all(sum(value[k][i - 1] == pos for k, i, pos in clause) == 1 for clause in f.clauses)


def uq_one_in_three(f: TypedFormula) -> tuple[bool, tuple[bool, ...] | None]:
    """Is there an x-assignment with exactly one y-extension satisfying every clause exactly once?

    Exhaustive over all assignments; returns the first such x-assignment.
    """
    for x in itertools.product((False, True), repeat=f.n_x):
        count = 0
        for y in itertools.product((False, True), repeat=f.n_y):
            if exactly_one_satisfied(f, x, y):
                count += 1
                if count > 1:
                    break
        if count == 1:
            return True, x
    return False, None


# -- gadget graphs ---------------------------------------------------------------------


@dataclass
class GadgetGraph:
    """Graph plus one role tag per vertex and lookup tables for the named vertices."""

    graph: Graph
    roles: tuple[str, ...]
    formula: TypedFormula
    clause_vertices: list[dict[str, int]] = field(default_factory=list)  # l1 l2 l3 w z
    cycle: dict[tuple[str, int], list[int]] = field(default_factory=dict)  # colored vertices 1..q (index 0 unused)
    bold: dict[int, dict[str, int]] = field(default_factory=dict)  # x index -> u1..u6
    wz: dict[tuple[str, int], list[tuple[int, int, int, int]]] = field(default_factory=dict)  # (a, b, w, z)

    def vertex(self, tag: str) -> int:
        return self.roles.index(tag)


def _var_name(kind: str, i: int) -> str:
    return f"{kind}{i}"


def gen_hardness_instance(
    f: TypedFormula, ordering: dict[tuple[int, int], int] | None = None
) -> GadgetGraph:
    """Gadget graph whose MU-VC optimum equals the number of x-variables on yes-instances.

    ``ordering`` maps each (clause, slot) to the occurrence number (1-based) used
    for that literal in its variable's gadget; the default numbers occurrences
    in clause order.
    """
    validate_formula(f)
    occ = f.occurrences()
    if ordering is None:
        ordering = {pos: j + 1 for positions in occ.values() for j, pos in enumerate(positions)}
    for var, positions in occ.items():
        got = sorted(ordering.get(p, 0) for p in positions)
        if got != list(range(1, len(positions) + 1)):
            raise FormulaError(f"ordering for {_var_name(*var)} is not a permutation of 1..{len(positions)}")

    roles: list[str] = []
    edges: list[tuple[int, int]] = []

    def add(tag: str) -> int:
        roles.append(tag)
        return len(roles) - 1

    inst = GadgetGraph(Graph(0), (), f)

    for c in range(len(f.clauses)):
        cv = {t: add(f"{t}_c{c + 1}") for t in ("l1", "l2", "l3", "w", "z")}
        edges += [(cv["l1"], cv["l2"]), (cv["l2"], cv["l3"]), (cv["l1"], cv["l3"])]
        edges += [(cv[t], cv["w"]) for t in ("l1", "l2", "l3")] + [(cv["w"], cv["z"])]
        inst.clause_vertices.append(cv)

    for kind, i in f.variables():
        name = _var_name(kind, i)
        q = 4 * len(occ[(kind, i)])
        inner = {4 * (j - 1) + t for j in range(1, q // 4 + 1) for t in (2, 3)}
        ring = [-1]
        for t in range(1, q + 1):
            color = "red" if t % 2 else "blue"
            ring.append(add(f"{name}^{t}:{color}:{'inner' if t in inner else 'outer'}"))
        inst.cycle[(kind, i)] = ring
        order = ring[1:]
        if kind == "x":
            u = {
                "u1": add(f"u1_{name}:red"),
                "u2": add(f"u2_{name}"),
                "u3": add(f"u3_{name}"),
                "u4": add(f"u4_{name}:blue"),
                "u5": add(f"u5_{name}"),
                "u6": add(f"u6_{name}"),
            }
            inst.bold[i] = u
            edges += [(u["u1"], u["u2"]), (u["u2"], u["u3"]), (u["u4"], u["u5"]), (u["u5"], u["u6"])]
            order = order + [u["u1"], u["u4"]]
        pairs = []
        for t in range(len(order)):
            a, b = order[t], order[(t + 1) % len(order)]
            edges.append((a, b))
            w = add(f"w_{name}^{t + 1}")
            z = add(f"z_{name}^{t + 1}")
            edges += [(a, w), (b, w), (w, z)]
            pairs.append((a, b, w, z))
        inst.wz[(kind, i)] = pairs

    # first step: every literal's outer clause vertex meets the matching inner colored vertex
    inner_of: dict[tuple[int, int], int] = {}
    for c, clause in enumerate(f.clauses):
        for t, (kind, i, positive) in enumerate(clause):
            j = ordering[(c, t)]
            idx = 4 * (j - 1) + (2 if positive else 3)
            inner_of[(c, t)] = idx
            edges.append((inst.clause_vertices[c][f"l{t + 1}"], inst.cycle[(kind, i)][idx]))

    # second step: chain the three variable gadgets of each clause around it
    for c, clause in enumerate(f.clauses):
        ring = [inst.cycle[(k, i)] for k, i, _ in clause]
        pos = [inner_of[(c, t)] for t in range(3)]
        for a, b in ((2, 0), (0, 1), (1, 2)):
            edges.append((ring[a][pos[a] - 1], ring[b][pos[b] + 1]))

    inst.graph = Graph(len(roles), edges)
    inst.roles = tuple(roles)
    return inst


def hardness_size(f: TypedFormula) -> int:
    """Vertex count predicted from the gadget sizes."""
    occ = f.occurrences()
    total = 5 * len(f.clauses)
    for (kind, _), positions in occ.items():
        p = 4 * len(positions)
        total += 3 * (p + 2) + 4 if kind == "x" else 3 * p
    return total


def check_hardness_structure(inst: GadgetGraph) -> list[str]:
    """Local gadget checks; returns a list of violations (empty when the instance is well formed)."""
    g = inst.graph
    problems: list[str] = []
    if g.max_degree > 5:
        problems.append(f"maximum degree {g.max_degree} exceeds 5")
    if g.n != hardness_size(inst.formula):
        problems.append(f"{g.n} vertices, expected {hardness_size(inst.formula)}")
    for c, cv in enumerate(inst.clause_vertices):
        ls = [cv["l1"], cv["l2"], cv["l3"]]
        for a, b in itertools.combinations(ls, 2):
            if not g.has_edge(a, b):
                problems.append(f"clause {c + 1}: outer vertices not a triangle")
        if sorted(g.neighbors(cv["w"]).tolist()) != sorted(ls + [cv["z"]]):
            problems.append(f"clause {c + 1}: w must see exactly the triangle and z")
        if g.degree(cv["z"]) != 1:
            problems.append(f"clause {c + 1}: z is not a pendant")
        for v in ls:
            if g.degree(v) != 4:
                problems.append(f"clause {c + 1}: outer vertex has degree {g.degree(v)}, expected 4")
    for var, ring in inst.cycle.items():
        name = _var_name(*var)
        q = len(ring) - 1
        if q % 4:
            problems.append(f"{name}: {q} colored vertices is not a multiple of 4")
        for t in range(1, q + 1):
            want = "red" if t % 2 else "blue"
            if f":{want}:" not in inst.roles[ring[t]]:
                problems.append(f"{name}^{t}: wrong color")
        for a, b, w, z in inst.wz[var]:
            if not g.has_edge(a, b):
                problems.append(f"{name}: colored pair not adjacent")
            if sorted(g.neighbors(w).tolist()) != sorted([a, b, z]) or g.degree(z) != 1:
                problems.append(f"{name}: w/z pendant structure broken")
        if var[0] == "x":
            u = inst.bold[var[1]]
            want_edges = [("u1", "u2"), ("u2", "u3"), ("u4", "u5"), ("u5", "u6"), ("u1", "u4")]
            for a, b in want_edges:
                if not g.has_edge(u[a], u[b]):
                    problems.append(f"{name}: missing bold edge {a}-{b}")
            if g.degree(u["u3"]) != 1 or g.degree(u["u6"]) != 1:
                problems.append(f"{name}: bold pendant paths broken")
            if not (g.has_edge(u["u1"], ring[q]) and g.has_edge(u["u4"], ring[1])):
                problems.append(f"{name}: bold pair not spliced into the cycle")
    return problems


# -- random corpora --------------------------------------------------------------------


def prufer_to_edges(seq: list[int], n: int) -> list[tuple[int, int]]:
    """Decode a Prüfer sequence over ``0..n-1`` into tree edges."""
    if n == 1:
        return []
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return edges


def gen_random_tree(n: int, seed: int) -> Graph:
    """Uniform labelled tree on ``n`` vertices from a random Prüfer sequence."""
    if n < 1:
        raise GraphError("a tree needs at least one vertex")
    rng = random.Random(seed)
    seq = [rng.randrange(n) for _ in range(max(0, n - 2))]
    return Graph(n, prufer_to_edges(seq, n))


def all_labelled_trees(n: int):
    """Every labelled tree on ``n`` vertices, one per Prüfer sequence."""
    for seq in itertools.product(range(n), repeat=max(0, n - 2)):
        yield Graph(n, prufer_to_edges(list(seq), n))


def gen_random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdős–Rényi ``G(n, p)``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = random.Random(seed)
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def gen_partial_ktree(
    n: int, k: int, seed: int, keep: float = 1.0, max_degree: int | None = None
) -> tuple[Graph, TreeDecomposition]:
    """Random subgraph of a ``k``-tree together with a width-``k`` decomposition.

    Each edge of the ``k``-tree survives with probability ``keep``; with
    ``max_degree`` set, edges are then dropped until no vertex exceeds it.
    """
    if n < 1:
        raise GraphError("need at least one vertex")
    rng = random.Random(seed)
    k = min(k, n - 1)
    base = tuple(range(k + 1))
    bags = [base]
    tree_edges: list[tuple[int, int]] = []
    edges = set(itertools.combinations(base, 2))
    for v in range(k + 1, n):
        host = rng.randrange(len(bags))
        clique = tuple(sorted(rng.sample(bags[host], k)))
        edges.update((u, v) for u in clique)
        bags.append(clique + (v,))
        tree_edges.append((host, len(bags) - 1))
    kept = sorted(e for e in sorted(edges) if rng.random() < keep)
    if max_degree is not None:
        deg = [0] * n
        for u, v in kept:
            deg[u] += 1
            deg[v] += 1
        rng.shuffle(kept)
        trimmed = []
        for u, v in kept:
            if deg[u] > max_degree or deg[v] > max_degree:
                deg[u] -= 1
                deg[v] -= 1
            else:
                trimmed.append((u, v))
        kept = sorted(trimmed)
    return Graph(n, kept), TreeDecomposition(tuple(bags), tuple(tree_edges))


def gen_random_cotree(n: int, seed: int) -> Cotree:
    """Random cotree on leaves ``1..n`` with alternating union/join levels."""
    if n < 1:
        raise GraphError("need at least one vertex")
    rng = random.Random(seed)
    names = [str(i) for i in range(1, n + 1)]
    rng.shuffle(names)

    def build(part: list[str], kind: str) -> Cotree:
        if len(part) == 1:
            return ("leaf", part[0])
        parts = rng.randint(2, min(3, len(part)))
        cuts = sorted(rng.sample(range(1, len(part)), parts - 1))
        pieces = [part[a:b] for a, b in zip([0, *cuts], [*cuts, len(part)])]
        other = "join" if kind == "union" else "union"
        return (kind, [build(p, other) for p in pieces])

    return build(names, rng.choice(["union", "join"]))
