"""Bipartite graph representation, edge-list parsing, vertex priorities,
and the locality-oriented relabeling used by the cache-aware counters.

Internal vertex IDs are dense: lower-layer vertices occupy [0, lower_count)
and upper-layer vertices occupy [lower_count, lower_count + upper_count),
so every upper ID is strictly greater than every lower ID.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import ParseError

COMMENT_PREFIXES = ("%", "#")


class BipartiteGraph:
    """Immutable two-layer adjacency structure.

    Edges are stored as (upper, lower) internal-ID pairs; the order of the
    edge sequence is the canonical edge index used by per-edge counters.
    `external_labels[v]` is the label the vertex had in the input file (the
    two layers have independent label namespaces).  Treat instances as
    frozen after construction; they are safe to share across threads.
    """

    __slots__ = ("upper_count", "lower_count", "edges", "adjacency",
                 "degrees", "external_labels", "duplicates_dropped")

    def __init__(self, upper_count, lower_count, edges, adjacency, degrees,
                 external_labels, duplicates_dropped=0):
        self.upper_count = upper_count
        self.lower_count = lower_count
        self.edges = edges
        self.adjacency = adjacency
        self.degrees = degrees
        self.external_labels = external_labels
        self.duplicates_dropped = duplicates_dropped

    @property
    def vertex_count(self) -> int:
        return self.upper_count + self.lower_count

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def is_upper(self, v: int) -> bool:
        return v >= self.lower_count

    def upper_vertices(self) -> range:
        return range(self.lower_count, self.lower_count + self.upper_count)

    def lower_vertices(self) -> range:
        return range(self.lower_count)

    @classmethod
    def build(cls, pairs: Iterable[tuple[int, int]], upper_count: int | None = None,
              lower_count: int | None = None) -> "BipartiteGraph":
        """Build a graph from (upper-index, lower-index) pairs.

        Indices are per-layer and dense; explicit layer counts allow
        degree-0 vertices.  Duplicate pairs are dropped and counted.
        """
        pairs = list(pairs)
        if upper_count is None:
            upper_count = max((u for u, _ in pairs), default=-1) + 1
        if lower_count is None:
            lower_count = max((v for _, v in pairs), default=-1) + 1
        seen = set()
        edges = []
        dropped = 0
        for u, v in pairs:
            if not (0 <= u < upper_count and 0 <= v < lower_count):
                raise ValueError(f"edge ({u}, {v}) outside layer ranges "
                                 f"{upper_count}x{lower_count}")
            key = (u, v)
            if key in seen:
                dropped += 1
                continue
            seen.add(key)
            edges.append((lower_count + u, v))
        labels = list(range(lower_count)) + list(range(upper_count))
        return cls._assemble(upper_count, lower_count, edges, labels, dropped)

    @classmethod
    def _assemble(cls, upper_count, lower_count, edges, labels, dropped):
        """Build adjacency and degrees from internal-ID (upper, lower) edges."""
        n = upper_count + lower_count
        adjacency = [[] for _ in range(n)]
        for u, v in edges:
            adjacency[u].append(v)
            adjacency[v].append(u)
        degrees = [len(a) for a in adjacency]
        return cls(upper_count, lower_count, edges, adjacency, degrees,
                   labels, dropped)

    def replace_edges(self, edges: list[tuple[int, int]]) -> "BipartiteGraph":
        """Same vertex universe (counts and labels), different edge subset."""
        return BipartiteGraph._assemble(self.upper_count, self.lower_count,
                                        list(edges), self.external_labels, 0)


@dataclass(frozen=True)
class PriorityMap:
    """Total order over vertices: degree-major, internal-ID-minor.

    `priority[v]` is an integer in [1, n]; the n values form a permutation.
    A vertex outranks another iff its degree is larger, or the degrees tie
    and its internal ID is larger (uppers therefore win cross-layer ties).
    """

    priority: list[int]

    def ascending_vertices(self) -> list[int]:
        """Vertex IDs ordered by ascending priority."""
        order = [0] * len(self.priority)
        for v, p in enumerate(self.priority):
            order[p - 1] = v
        return order

    def descending_vertices(self) -> list[int]:
        order = self.ascending_vertices()
        order.reverse()
        return order


@dataclass(frozen=True)
class ProjectionMapping:
    """Bijective per-layer relabeling; `inverse[forward[v]] == v` for all v."""

    forward: list[int]
    inverse: list[int]


def _iter_label_pairs(lines: Iterable[str]):
    """Yield (line_number, upper_label, lower_label) from edge-list lines."""
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(lineno, f"expected two columns, got {len(tokens)}: {line!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(lineno, f"non-integer label in {line!r}") from None
        if u < 0 or v < 0:
            raise ParseError(lineno, f"negative label in {line!r}")
        yield lineno, u, v


def parse_edge_list(source: Iterable[str] | str) -> BipartiteGraph:
    """Parse an edge-list stream into a graph.

    Format: one edge per line, two whitespace-separated nonnegative integer
    labels, first column upper-layer and second column lower-layer (the two
    columns are independent namespaces).  Lines starting with '%' or '#'
    and blank lines are ignored.  Labels are remapped to dense internal IDs
    in first-seen order; duplicate edges are dropped and counted on the
    returned graph's `duplicates_dropped`.  An empty stream yields the
    empty graph.
    """
    if isinstance(source, str):
        source = source.splitlines()
    upper_ids: dict[int, int] = {}
    lower_ids: dict[int, int] = {}
    raw_edges = []
    for _, ulabel, vlabel in _iter_label_pairs(source):
        ui = upper_ids.setdefault(ulabel, len(upper_ids))
        vi = lower_ids.setdefault(vlabel, len(lower_ids))
        raw_edges.append((ui, vi))
    l, r = len(lower_ids), len(upper_ids)
    seen = set()
    edges = []
    dropped = 0
    for ui, vi in raw_edges:
        if (ui, vi) in seen:
            dropped += 1
            continue
        seen.add((ui, vi))
        edges.append((l + ui, vi))
    labels = [0] * (l + r)
    for label, vi in lower_ids.items():
        labels[vi] = label
    for label, ui in upper_ids.items():
        labels[l + ui] = label
    return BipartiteGraph._assemble(r, l, edges, labels, dropped)


def load_edge_list(path) -> BipartiteGraph:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_edge_list(handle)


def format_edge_list(g: BipartiteGraph) -> str:
    """Serialize back to the input format using external labels."""
    labels = g.external_labels
    return "".join(f"{labels[u]} {labels[v]}\n" for u, v in g.edges)


def save_edge_list(g: BipartiteGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(format_edge_list(g))


def assign_priorities(g: BipartiteGraph) -> PriorityMap:
    """Compute the unique degree-major, ID-minor priority permutation.

    Runs in O(n + max_degree) via a counting sort over degrees, so ties
    resolve by ascending internal ID within each degree bucket.
    """
    n = g.vertex_count
    degrees = g.degrees
    if n == 0:
        return PriorityMap([])
    buckets = [0] * (max(degrees) + 2)
    for d in degrees:
        buckets[d + 1] += 1
    for i in range(1, len(buckets)):
        buckets[i] += buckets[i - 1]
    priority = [0] * n
    cursor = buckets
    for v in range(n):
        slot = cursor[degrees[v]]
        cursor[degrees[v]] = slot + 1
        priority[v] = slot + 1
    return PriorityMap(priority)


def sort_adjacency(g: BipartiteGraph, p: PriorityMap) -> BipartiteGraph:
    """Return a copy whose adjacency lists ascend by neighbor priority.

    Linear time: emitting vertices in ascending priority order into fresh
    lists leaves every list sorted.  Idempotent.
    """
    n = g.vertex_count
    lists: list[list[int]] = [[] for _ in range(n)]
    adjacency = g.adjacency
    for u in p.ascending_vertices():
        for v in adjacency[u]:
            lists[v].append(u)
    return BipartiteGraph(g.upper_count, g.lower_count, g.edges, lists,
                          g.degrees, g.external_labels, g.duplicates_dropped)


def project(g: BipartiteGraph, p: PriorityMap) -> tuple[BipartiteGraph, ProjectionMapping]:
    """Relabel each layer by priority rank so hot vertices pack together.

    Rank 0 is the highest priority within the layer; new lower IDs are the
    lower-layer ranks, new upper IDs are lower_count + upper-layer ranks.
    The result is isomorphic to the input (edge i maps to edge i) and the
    returned mapping is invertible for reporting.
    """
    n = g.vertex_count
    l = g.lower_count
    forward = [0] * n
    inverse = [0] * n
    lower_rank = 0
    upper_rank = 0
    for v in p.descending_vertices():
        if v < l:
            new_id = lower_rank
            lower_rank += 1
        else:
            new_id = l + upper_rank
            upper_rank += 1
        forward[v] = new_id
        inverse[new_id] = v
    edges = [(forward[u], forward[v]) for u, v in g.edges]
    adjacency: list[list[int]] = [[] for _ in range(n)]
    degrees = [0] * n
    labels = [0] * n
    for v in range(n):
        nv = forward[v]
        adjacency[nv] = [forward[w] for w in g.adjacency[v]]
        degrees[nv] = g.degrees[v]
        labels[nv] = g.external_labels[v]
    projected = BipartiteGraph(g.upper_count, g.lower_count, edges, adjacency,
                               degrees, labels, g.duplicates_dropped)
    return projected, ProjectionMapping(forward, inverse)
