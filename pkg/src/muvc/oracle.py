"""Exhaustive reference solvers used as ground truth by the test suites.

Small graphs (up to ``DENSE_LIMIT`` vertices) are handled with a dense table over
all ``2^n`` vertex subsets.  For every set ``S`` a superset transform yields the
minimum size of a cover containing ``S`` together with the number of such
minimum covers (capped at two).  Covers of ``G`` containing ``S`` correspond
one-to-one to covers of ``G - S``, so this single table answers both problems.

Larger graphs fall back to enumerating candidate sets by size and running the
branch-and-bound uniqueness check on each.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .graph import Graph, VertexSet, induced_delete, is_unique_min_vc, min_vc_size

DENSE_LIMIT = 22

_INF = np.int16(10_000)


class InfeasibleError(ValueError):
    """No modulator of the allowed size exists."""


@dataclass(frozen=True)
class OracleResult:
    opt: int
    witness: VertexSet
    unique_cover: VertexSet


def _cover_table(g: Graph) -> np.ndarray:
    """Boolean array indexed by bitmask: is the subset a vertex cover?"""
    n = g.n
    masks = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(1 << n, dtype=bool)
    for u, v in g.edge_list():
        ok &= ((masks >> u) & 1 | (masks >> v) & 1).astype(bool)
    return ok


def _popcounts(n: int) -> np.ndarray:
    pc = np.zeros(1 << n, dtype=np.int16)
    for b in range(n):
        pc[1 << b : 1 << (b + 1)] = pc[: 1 << b] + 1
    return pc


def _superset_min_count(size: np.ndarray, count: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """For every mask, the minimum of ``size`` over supersets and how many attain it (capped at 2)."""
    size = size.copy()
    count = count.copy()
    for b in range(n):
        view_s = size.reshape(-1, 2, 1 << b)
        view_c = count.reshape(-1, 2, 1 << b)
        lo_s, hi_s = view_s[:, 0, :], view_s[:, 1, :]
        lo_c, hi_c = view_c[:, 0, :], view_c[:, 1, :]
        tie = lo_s == hi_s
        better = hi_s < lo_s
        new_c = np.where(better, hi_c, np.where(tie, np.minimum(lo_c + hi_c, 2), lo_c))
        lo_s[...] = np.minimum(lo_s, hi_s)
        lo_c[...] = new_c
    return size, count


def _mask_to_set(mask: int) -> VertexSet:
    return frozenset(i for i in range(mask.bit_length()) if (mask >> i) & 1)


def _pick(candidates: np.ndarray, pc: np.ndarray) -> int:
    """Smallest set first, then the lexicographically least sorted index tuple."""
    best = int(pc[candidates].min())
    tied = candidates[pc[candidates] == best]
    return min((int(m) for m in tied), key=lambda m: sorted(_mask_to_set(m)))


def enumerate_min_vcs(g: Graph) -> list[VertexSet]:
    """All minimum vertex covers, sorted lexicographically by their sorted vertex tuples."""
    if g.n > DENSE_LIMIT:
        raise ValueError(f"enumeration limited to {DENSE_LIMIT} vertices, got {g.n}")
    ok = _cover_table(g)
    pc = _popcounts(g.n)
    best = int(pc[ok].min())
    found = np.nonzero(ok & (pc == best))[0]
    return sorted((_mask_to_set(int(m)) for m in found), key=sorted)


def _unique_cover_after(g: Graph, s: VertexSet) -> VertexSet:
    h, kept = induced_delete(g, s)
    unique, cover = is_unique_min_vc(h)
    assert unique
    return frozenset(kept[v] for v in cover)


def solve_muvc_bruteforce(g: Graph, k_max: int | None = None) -> OracleResult:
    """Smallest ``S`` with ``|S| <= k_max`` such that ``G - S`` has a unique minimum cover.

    Ties are broken by size, then lexicographically on the sorted vertex tuple.
    Raises :class:`InfeasibleError` when every such ``S`` is larger than ``k_max``.
    """
    if k_max is None:
        k_max = g.n
    if g.n <= DENSE_LIMIT:
        ok = _cover_table(g)
        pc = _popcounts(g.n)
        size = np.where(ok, pc, _INF).astype(np.int16)
        _, count = _superset_min_count(size, ok.astype(np.int8), g.n)
        good = np.nonzero(count == 1)[0]
        good = good[pc[good] <= k_max]
        if good.size == 0:
            raise InfeasibleError(f"no modulator of size <= {k_max}")
        s = _mask_to_set(_pick(good, pc))
        return OracleResult(len(s), s, _unique_cover_after(g, s))
    for r in range(min(k_max, g.n) + 1):
        for combo in itertools.combinations(range(g.n), r):
            h, kept = induced_delete(g, combo)
            unique, cover = is_unique_min_vc(h)
            if unique:
                return OracleResult(r, frozenset(combo), frozenset(kept[v] for v in cover))
    raise InfeasibleError(f"no modulator of size <= {k_max}")


def muvc_feasible_within(g: Graph, k: int) -> VertexSet | None:
    """Return some ``S`` of size exactly ``k`` leaving a unique minimum cover, or None.

    Works on graphs of any size by enumeration; meant for small ``k``.
    """
    for combo in itertools.combinations(range(g.n), k):
        h, _ = induced_delete(g, combo)
        if is_unique_min_vc(h)[0]:
            return frozenset(combo)
    return None


def solve_pauvc_bruteforce(g: Graph) -> int:
    """Minimum ``|P|`` such that exactly one minimum vertex cover of ``G`` contains ``P``.

    Any minimum cover itself is such a ``P``, so a value always exists.
    """
    if g.n > DENSE_LIMIT:
        raise ValueError(f"PAU-VC oracle limited to {DENSE_LIMIT} vertices, got {g.n}")
    ok = _cover_table(g)
    pc = _popcounts(g.n)
    mvc = min_vc_size(g)
    is_min = (ok & (pc == mvc)).astype(np.int8)
    # all minimum covers share one size, so a plain capped superset count suffices
    size = np.where(is_min.astype(bool), 0, 1).astype(np.int16)
    _, count = _superset_min_count(size, is_min, g.n)
    good = np.nonzero(count == 1)[0]
    return int(pc[good].min())
