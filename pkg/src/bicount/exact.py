"""Exact butterfly counting.

Three global counters over the same wedge-counting skeleton:

* ``count_ibs``  -- layer-selected baseline; picks the start layer whose
  opposite side has the smaller sum of squared degrees, then processes
  every wedge whose end ID exceeds its start ID.
* ``count_vp``   -- vertex-priority counter; processes only wedges whose
  start vertex outranks both the middle and the end, with early breaks
  over priority-sorted adjacency.
* ``count_vpp``  -- cache-aware variant; processes the same number of
  wedges but requires the END vertex to outrank start and middle, walking
  each neighbor list from its high-priority side, and expects the graph to
  have been projected so high-priority IDs are contiguous.

Plus a quadruple-enumeration brute-force oracle, per-vertex counts, and
the caterpillar / clustering-coefficient statistics.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from time import perf_counter

from .errors import CountOverflowError, GuardError
from .graph import BipartiteGraph, PriorityMap, ProjectionMapping
from .graph import assign_priorities, project, sort_adjacency

COUNT_LIMIT = 1 << 128
BRUTE_FORCE_EDGE_GUARD = 10_000


@dataclass
class CountReport:
    """A butterfly count plus instrumentation for one counting run.

    ``wedges_processed`` counts wedges that passed the active predicate and
    updated a counter; ``end_accesses`` always equals it.  A middle access
    is one examination of a neighbor as a potential wedge middle (including
    the examination that triggers an early break); a start access is one
    start-vertex visit.  Everything except ``elapsed`` is deterministic.
    """

    butterflies: int
    wedges_processed: int
    start_accesses: int
    middle_accesses: int
    end_accesses: int
    elapsed: float

    def counters(self) -> tuple[int, int, int, int, int]:
        """The deterministic fields, for equality checks across runs."""
        return (self.butterflies, self.wedges_processed, self.start_accesses,
                self.middle_accesses, self.end_accesses)


class WedgeCounter:
    """Dense per-vertex wedge counters with an O(touched) reset.

    Entries are all zero between start-vertex passes; ``touched`` holds the
    vertices with a nonzero count so a pass never pays for the full array.
    """

    __slots__ = ("counts", "touched")

    def __init__(self, n: int):
        self.counts = [0] * n
        self.touched: list[int] = []

    def add(self, w: int) -> None:
        c = self.counts[w]
        if not c:
            self.touched.append(w)
        self.counts[w] = c + 1

    def drain(self):
        """Yield (vertex, count) for touched vertices, zeroing as it goes."""
        counts = self.counts
        for w in self.touched:
            c = counts[w]
            counts[w] = 0
            yield w, c
        self.touched.clear()


def _check_limit(value: int, what: str) -> int:
    if value >= COUNT_LIMIT:
        raise CountOverflowError(f"{what} exceeded 128 bits")
    return value


def _pairs(c: int) -> int:
    return c * (c - 1) // 2


def count_ibs(g: BipartiteGraph) -> CountReport:
    """Layer-selected baseline counter; exact on any graph.

    Starts from the upper layer unless the upper layer's squared-degree sum
    is strictly smaller (then the lower layer starts, keeping the heavier
    wedge work off the middles).  Ties keep the upper layer.
    """
    t0 = perf_counter()
    adjacency = g.adjacency
    degrees = g.degrees
    upper_sq = sum(degrees[u] * degrees[u] for u in g.upper_vertices())
    lower_sq = sum(degrees[v] * degrees[v] for v in g.lower_vertices())
    starts = g.lower_vertices() if upper_sq < lower_sq else g.upper_vertices()

    # Per-middle adjacency sorted by ID so the (end > start) suffix can be
    # sliced instead of filtered; wedge membership is unchanged.
    by_id = [sorted(a) for a in adjacency]
    counter = WedgeCounter(g.vertex_count)
    counts, touched = counter.counts, counter.touched
    append = touched.append
    butterflies = 0
    wedges = 0
    middle_accesses = 0
    for u in starts:
        for v in adjacency[u]:
            lst = by_id[v]
            suffix = lst[bisect_right(lst, u):]
            wedges += len(suffix)
            for w in suffix:
                c = counts[w]
                if not c:
                    append(w)
                counts[w] = c + 1
        if touched:
            for w in touched:
                c = counts[w]
                counts[w] = 0
                if c > 1:
                    butterflies += c * (c - 1) // 2
            touched.clear()
        middle_accesses += len(adjacency[u])
    _check_limit(butterflies, "butterfly count")
    return CountReport(butterflies, wedges, len(starts), middle_accesses,
                       wedges, perf_counter() - t0)


def count_vp(g: BipartiteGraph, p: PriorityMap) -> CountReport:
    """Vertex-priority counter.  Requires priority-sorted adjacency.

    Processes wedge (u, v, w) only when u outranks both v and w; because
    neighbor lists ascend by priority, each inner loop stops at the first
    neighbor that ties or outranks the start.
    """
    t0 = perf_counter()
    n = g.vertex_count
    adjacency = g.adjacency
    pr = p.priority
    counter = WedgeCounter(n)
    counts, touched = counter.counts, counter.touched
    append = touched.append
    butterflies = 0
    wedges = 0
    middle_accesses = 0
    for u in range(n):
        pu = pr[u]
        for v in adjacency[u]:
            middle_accesses += 1
            if pr[v] >= pu:
                break
            for w in adjacency[v]:
                if pr[w] >= pu:
                    break
                c = counts[w]
                if not c:
                    append(w)
                counts[w] = c + 1
                wedges += 1
        if touched:
            for w in touched:
                c = counts[w]
                counts[w] = 0
                if c > 1:
                    butterflies += c * (c - 1) // 2
            touched.clear()
    _check_limit(butterflies, "butterfly count")
    return CountReport(butterflies, wedges, n, middle_accesses, wedges,
                       perf_counter() - t0)


def end_dominant_pass(u: int, adjacency, pr, counts, touched) -> tuple[int, int, int]:
    """One start-vertex pass of the end-dominant rule; returns
    (butterflies, wedges, middle_accesses) and leaves counters zeroed.

    Neighbor lists ascend by priority, so walking them reversed visits
    candidates in descending priority and the walk stops at the first end
    vertex that fails to outrank both the start and the middle.
    """
    pu = pr[u]
    wedges = 0
    middles = 0
    append = touched.append
    for v in adjacency[u]:
        middles += 1
        pv = pr[v]
        limit = pv if pv > pu else pu
        for w in reversed(adjacency[v]):
            if pr[w] <= limit:
                break
            c = counts[w]
            if not c:
                append(w)
            counts[w] = c + 1
            wedges += 1
    butterflies = 0
    for w in touched:
        c = counts[w]
        counts[w] = 0
        if c > 1:
            butterflies += c * (c - 1) // 2
    touched.clear()
    return butterflies, wedges, middles


def count_vpp(g: BipartiteGraph, p: PriorityMap) -> CountReport:
    """Cache-aware counter over a projected, priority-sorted graph.

    Processes exactly as many wedges as ``count_vp`` on the same graph, but
    the end vertex carries the dominant priority, concentrating end-vertex
    accesses on the hot IDs the projection packed together.
    """
    t0 = perf_counter()
    n = g.vertex_count
    adjacency = g.adjacency
    pr = p.priority
    counter = WedgeCounter(n)
    counts, touched = counter.counts, counter.touched
    butterflies = 0
    wedges = 0
    middle_accesses = 0
    for u in range(n):
        b, w, m = end_dominant_pass(u, adjacency, pr, counts, touched)
        butterflies += b
        wedges += w
        middle_accesses += m
    _check_limit(butterflies, "butterfly count")
    return CountReport(butterflies, wedges, n, middle_accesses, wedges,
                       perf_counter() - t0)


def prepare_vp(g: BipartiteGraph) -> tuple[BipartiteGraph, PriorityMap]:
    """Priorities assigned and adjacency sorted, ready for ``count_vp``."""
    p = assign_priorities(g)
    return sort_adjacency(g, p), p


def prepare_vpp(g: BipartiteGraph) -> tuple[BipartiteGraph, PriorityMap, ProjectionMapping]:
    """Project, re-rank, and sort, ready for ``count_vpp`` and friends."""
    p = assign_priorities(g)
    projected, mapping = project(g, p)
    p2 = assign_priorities(projected)
    return sort_adjacency(projected, p2), p2, mapping


def count_butterflies(g: BipartiteGraph, algo: str = "vpp") -> CountReport:
    """Run one of the exact engines on a raw graph."""
    if algo == "ibs":
        return count_ibs(g)
    if algo == "vp":
        return count_vp(*prepare_vp(g))
    if algo == "vpp":
        prepared, p2, _ = prepare_vpp(g)
        return count_vpp(prepared, p2)
    raise ValueError(f"unknown algorithm {algo!r}")


def brute_force_count(g: BipartiteGraph) -> int:
    """Independent oracle: enumerate upper pairs x lower pairs and test the
    four edges by adjacency membership, one butterfly at a time.

    No wedge counters and no binomial arithmetic, so a systematic bug in
    the counting engines cannot be mirrored here.  Guarded to small graphs.
    """
    if g.edge_count > BRUTE_FORCE_EDGE_GUARD:
        raise GuardError(f"brute force limited to {BRUTE_FORCE_EDGE_GUARD} edges, "
                         f"got {g.edge_count}")
    neighbor_sets = [set(a) for a in g.adjacency]
    lowers = list(g.lower_vertices())
    total = 0
    for u, w in combinations(g.upper_vertices(), 2):
        nu = neighbor_sets[u]
        nw = neighbor_sets[w]
        for i, v in enumerate(lowers):
            if v in nu and v in nw:
                for x in lowers[i + 1:]:
                    if x in nu and x in nw:
                        total += 1
    return total


def count_per_vertex(g: BipartiteGraph) -> list[int]:
    """Butterflies containing each vertex, via a full two-hop pass per start.

    For every start u the pass counts, per two-hop neighbor w, the common
    neighborhood size c and adds C(c, 2); no priority pruning, every vertex
    is its own start.
    """
    n = g.vertex_count
    adjacency = g.adjacency
    counter = WedgeCounter(n)
    result = [0] * n
    for u in range(n):
        for v in adjacency[u]:
            for w in adjacency[v]:
                if w != u:
                    counter.add(w)
        total = 0
        for _, c in counter.drain():
            if c > 1:
                total += _pairs(c)
        result[u] = _check_limit(total, "per-vertex butterfly count")
    return result


def count_caterpillars(g: BipartiteGraph) -> int:
    """Exact number of three-edge simple paths, in O(m).

    Each three-path has a unique middle edge (u, v) and is determined by
    one extra neighbor on each side, giving (deg(u)-1) * (deg(v)-1) paths
    anchored at that edge.
    """
    degrees = g.degrees
    total = 0
    for u, v in g.edges:
        total += (degrees[u] - 1) * (degrees[v] - 1)
    return _check_limit(total, "caterpillar count")


def clustering_coefficient(g: BipartiteGraph) -> Fraction | None:
    """4 * butterflies / caterpillars, or None when there are no caterpillars."""
    cate = count_caterpillars(g)
    if cate == 0:
        return None
    prepared, p2, _ = prepare_vpp(g)
    return Fraction(4 * count_vpp(prepared, p2).butterflies, cate)


def iter_start_dominant_wedges(g: BipartiteGraph, p: PriorityMap):
    """Yield every wedge (start, middle, end) the start-dominant rule
    processes: start outranks middle and end.  Instrumentation-grade (no
    early breaks); order-independent of adjacency sorting."""
    pr = p.priority
    adjacency = g.adjacency
    for u in range(g.vertex_count):
        pu = pr[u]
        for v in adjacency[u]:
            if pr[v] < pu:
                for w in adjacency[v]:
                    if pr[w] < pu:
                        yield (u, v, w)


def iter_end_dominant_wedges(g: BipartiteGraph, p: PriorityMap):
    """Yield every wedge the end-dominant rule processes: end outranks
    middle and start.  Instrumentation-grade."""
    pr = p.priority
    adjacency = g.adjacency
    for u in range(g.vertex_count):
        pu = pr[u]
        for v in adjacency[u]:
            pv = pr[v]
            for w in adjacency[v]:
                if pr[w] > pu and pr[w] > pv:
                    yield (u, v, w)
