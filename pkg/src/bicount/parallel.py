"""Shared-memory parallel butterfly counting.

Workers share the read-only projected graph and priority map; each owns a
private counter table and partial sum.  Dynamic mode hands start vertices
one at a time to idle workers through a lock-guarded cursor over a queue
ordered by the chosen strategy; static mode precomputes the whole
partition.  Counts are integers, so the reduction is order-independent
and the result is identical for every thread count, mode, strategy, and
seed.
"""

from __future__ import annotations

import os
import random
import threading
from dataclasses import dataclass
from time import perf_counter

from .errors import ConfigError, CountOverflowError
from .exact import COUNT_LIMIT, CountReport, WedgeCounter, end_dominant_pass
from .graph import BipartiteGraph, PriorityMap

MODES = ("dynamic", "static")
STRATEGIES = ("priority", "random", "heuristic")


@dataclass(frozen=True)
class ScheduleConfig:
    mode: str = "dynamic"
    strategy: str = "priority"
    threads: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")


@dataclass
class ThreadReport:
    thread: int
    butterflies: int
    wedges_processed: int
    vertices_handled: int


def estimate_workload(g: BipartiteGraph, p: PriorityMap, u: int) -> int:
    """Cheap start-vertex workload estimate: the number of two-hop entries
    (v, w) with v a neighbor of u and w a neighbor of v outranking v."""
    pr = p.priority
    adjacency = g.adjacency
    total = 0
    for v in adjacency[u]:
        pv = pr[v]
        for w in adjacency[v]:
            if pr[w] > pv:
                total += 1
    return total


def estimate_all_workloads(g: BipartiteGraph, p: PriorityMap) -> list[int]:
    """All start-vertex estimates in O(n + m): precompute, per middle v,
    how many of its neighbors outrank it, then sum over each start's
    middles."""
    pr = p.priority
    adjacency = g.adjacency
    n = g.vertex_count
    outranked = [0] * n
    for v in range(n):
        pv = pr[v]
        outranked[v] = sum(1 for w in adjacency[v] if pr[w] > pv)
    return [sum(outranked[v] for v in adjacency[u]) for u in range(n)]


def greedy_assign(workloads: list[int], threads: int) -> list[list[int]]:
    """Longest-processing-time greedy: jobs sorted by descending workload,
    each to the least-loaded thread.  Returns per-thread job-index lists."""
    order = sorted(range(len(workloads)), key=lambda j: -workloads[j])
    assignment: list[list[int]] = [[] for _ in range(threads)]
    loads = [0] * threads
    for j in order:
        t = min(range(threads), key=loads.__getitem__)
        assignment[t].append(j)
        loads[t] += workloads[j]
    return assignment


def make_static_assignment(g: BipartiteGraph, p: PriorityMap,
                           cfg: ScheduleConfig) -> list[list[int]]:
    """Partition all vertices over cfg.threads per the named strategy:
    priority sends p(u) mod t to thread index p(u) mod t, random draws a
    uniform thread per vertex from the seeded generator, heuristic runs
    the greedy assignment over estimated workloads."""
    if cfg.mode != "static":
        raise ConfigError("static assignment requested for a non-static config")
    n = g.vertex_count
    t = cfg.threads
    if cfg.strategy == "priority":
        assignment: list[list[int]] = [[] for _ in range(t)]
        pr = p.priority
        for u in range(n):
            assignment[pr[u] % t].append(u)
        return assignment
    if cfg.strategy == "random":
        rng = random.Random(cfg.seed)
        assignment = [[] for _ in range(t)]
        for u in range(n):
            assignment[rng.randrange(t)].append(u)
        return assignment
    return greedy_assign(estimate_all_workloads(g, p), t)


def makespan(assignment: list[list[int]], workloads: list[int]) -> int:
    """Maximum per-thread workload sum; every vertex must appear exactly once."""
    seen = [False] * len(workloads)
    for lane in assignment:
        for u in lane:
            if u < 0 or u >= len(workloads) or seen[u]:
                raise ValueError(f"vertex {u} missing or assigned twice")
            seen[u] = True
    if not all(seen):
        raise ValueError(f"vertex {seen.index(False)} unassigned")
    return max((sum(workloads[u] for u in lane) for lane in assignment), default=0)


def simulate_list_schedule(workloads: list[int], threads: int,
                           order: list[int] | None = None) -> list[list[int]]:
    """Deterministic model of dynamic dispatch: jobs in queue order go to
    the thread that frees earliest.  Used for schedule-quality checks."""
    if order is None:
        order = list(range(len(workloads)))
    assignment: list[list[int]] = [[] for _ in range(threads)]
    loads = [0] * threads
    for j in order:
        t = min(range(threads), key=loads.__getitem__)
        assignment[t].append(j)
        loads[t] += workloads[j]
    return assignment


def _dynamic_order(g: BipartiteGraph, p: PriorityMap, cfg: ScheduleConfig) -> list[int]:
    n = g.vertex_count
    if cfg.strategy == "priority":
        return p.descending_vertices()
    if cfg.strategy == "random":
        order = list(range(n))
        random.Random(cfg.seed).shuffle(order)
        return order
    workloads = estimate_all_workloads(g, p)
    return sorted(range(n), key=lambda u: -workloads[u])


def _memory_guard(n: int, threads: int) -> None:
    """Refuse thread counts whose per-thread counter tables cannot fit."""
    needed = n * threads * 8
    try:
        physical = os.sysconf("SC_PHYS_PAGES") * os.sysconf("SC_PAGE_SIZE")
    except (ValueError, OSError, AttributeError):
        return
    if needed > physical // 2:
        raise ConfigError(f"{threads} threads over {n} vertices needs ~{needed} "
                          f"bytes of counter space; reduce threads")


class _Cursor:
    """Shared fetch-and-increment dispatch point for dynamic scheduling."""

    __slots__ = ("_value", "_lock")

    def __init__(self):
        self._value = 0
        self._lock = threading.Lock()

    def next(self) -> int:
        with self._lock:
            value = self._value
            self._value = value + 1
            return value


def count_parallel(g: BipartiteGraph, p: PriorityMap,
                   cfg: ScheduleConfig) -> tuple[CountReport, list[ThreadReport]]:
    """Parallel end-dominant counting over a projected, sorted graph.

    The count always equals the sequential engine's; per-thread wedge
    totals partition the sequential total.
    """
    t0 = perf_counter()
    n = g.vertex_count
    adjacency = g.adjacency
    pr = p.priority
    t = cfg.threads
    _memory_guard(n, t)

    results: list[tuple[int, int, int, int]] = [(0, 0, 0, 0)] * t
    if cfg.mode == "dynamic":
        order = _dynamic_order(g, p, cfg)
        cursor = _Cursor()

        def run(tid: int) -> None:
            counter = WedgeCounter(n)
            counts, touched = counter.counts, counter.touched
            butterflies = wedges = middles = handled = 0
            while True:
                i = cursor.next()
                if i >= n:
                    break
                b, w, m = end_dominant_pass(order[i], adjacency, pr, counts, touched)
                butterflies += b
                wedges += w
                middles += m
                handled += 1
            results[tid] = (butterflies, wedges, middles, handled)
    else:
        assignment = make_static_assignment(g, p, cfg)

        def run(tid: int) -> None:
            counter = WedgeCounter(n)
            counts, touched = counter.counts, counter.touched
            butterflies = wedges = middles = handled = 0
            for u in assignment[tid]:
                b, w, m = end_dominant_pass(u, adjacency, pr, counts, touched)
                butterflies += b
                wedges += w
                middles += m
                handled += 1
            results[tid] = (butterflies, wedges, middles, handled)

    workers = [threading.Thread(target=run, args=(tid,)) for tid in range(t)]
    for worker in workers:
        worker.start()
    for worker in workers:
        worker.join()

    # Reduce in thread-index order; integer addition makes the total
    # independent of which worker handled which start vertex.
    butterflies = sum(r[0] for r in results)
    if butterflies >= COUNT_LIMIT:
        raise CountOverflowError("butterfly count exceeded 128 bits")
    wedges = sum(r[1] for r in results)
    middles = sum(r[2] for r in results)
    handled = sum(r[3] for r in results)
    report = CountReport(butterflies, wedges, handled, middles, wedges,
                         perf_counter() - t0)
    thread_reports = [ThreadReport(tid, r[0], r[1], r[3])
                      for tid, r in enumerate(results)]
    return report, thread_reports
