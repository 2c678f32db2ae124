"""Finite graphs with self-loops and bitmask edge sets.

Vertices are dense integers 0..n-1.  Edges are unordered pairs (u, v) with
u == v allowed (self-loop); each edge has a stable id equal to its position
in the edge tuple.  Every edge set in this package is an int bitmask over
edge ids: bit e is set iff edge e belongs to the set.  All derived data is
precomputed at construction, so Graph values are immutable and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable

from .errors import FormatError


class Graph:
    """An undirected graph, simple apart from self-loops."""

    __slots__ = ("n", "edges", "full_mask", "_index", "_inc", "_adj", "_part_cache")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        norm: list[tuple[int, int]] = []
        index: dict[tuple[int, int], int] = {}
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) has an endpoint outside 0..{n - 1}")
            e = (u, v) if u <= v else (v, u)
            if e in index:
                raise ValueError(f"duplicate edge {e}; parallel edges are not supported")
            index[e] = len(norm)
            norm.append(e)
        self.n = n
        self.edges = tuple(norm)
        self.full_mask = (1 << len(norm)) - 1
        self._index = index
        inc = [0] * n
        adj: list[list[int]] = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(self.edges):
            inc[u] |= 1 << eid
            inc[v] |= 1 << eid
            if u != v:
                adj[u].append(v)
                adj[v].append(u)
        self._inc = tuple(inc)
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._part_cache: dict[int, _PartTable] = {}

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def m(self) -> int:
        return len(self.edges)

    def endpoints(self, e: int) -> tuple[int, int]:
        return self.edges[e]

    def edge_id(self, u: int, v: int) -> int:
        key = (u, v) if u <= v else (v, u)
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"no edge {key}") from None

    def has_edge(self, u: int, v: int) -> bool:
        key = (u, v) if u <= v else (v, u)
        return key in self._index

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Neighbors via non-loop edges, ascending."""
        return self._adj[v]

    def incident_mask(self, v: int) -> int:
        return self._inc[v]

    def edge_mask(self, ids: Iterable[int]) -> int:
        mask = 0
        for e in ids:
            if not 0 <= e < self.m:
                raise ValueError(f"edge id {e} out of range")
            mask |= 1 << e
        return mask

    def mask_of(self, pairs: Iterable[tuple[int, int]]) -> int:
        return self.edge_mask(self.edge_id(u, v) for u, v in pairs)

    def edge_ids(self, mask: int) -> tuple[int, ...]:
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return tuple(out)

    def edge_pairs(self, mask: int) -> tuple[tuple[int, int], ...]:
        return tuple(self.edges[e] for e in self.edge_ids(mask))

    def format_edges(self, mask: int) -> str:
        return "{" + ",".join(f"{u}-{v}" for u, v in self.edge_pairs(mask)) + "}"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self.edges)!r})"


def closure(g: Graph) -> Graph:
    """The graph with a self-loop added at every vertex that lacks one.

    Original edge ids are preserved; new loops are appended in vertex order.
    """
    edges = list(g.edges)
    for v in g.vertices:
        if not g.has_edge(v, v):
            edges.append((v, v))
    return Graph(g.n, edges)


def is_closure(g: Graph) -> bool:
    return all(g.has_edge(v, v) for v in g.vertices)


def incident_edges(g: Graph, v: int) -> int:
    """Bitmask of edges having v as an endpoint (including a loop at v)."""
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} not in graph")
    return g.incident_mask(v)


def connected_components(g: Graph) -> list[frozenset[int]]:
    """Vertex sets of the connected components, ordered by minimum vertex."""
    seen = [False] * g.n
    out: list[frozenset[int]] = []
    for start in g.vertices:
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        stack = [start]
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        out.append(frozenset(comp))
    return out


def component_edge_masks(g: Graph) -> list[int]:
    """Edge masks of the connected components, aligned with connected_components."""
    comps = connected_components(g)
    where = {}
    for i, comp in enumerate(comps):
        for v in comp:
            where[v] = i
    masks = [0] * len(comps)
    for eid, (u, _v) in enumerate(g.edges):
        masks[where[u]] |= 1 << eid
    return masks


def boundary(g: Graph, x: int) -> frozenset[int]:
    """Vertices incident to at least one edge inside x and one outside x."""
    rest = g.full_mask & ~x
    return frozenset(
        v for v in g.vertices if g._inc[v] & x and g._inc[v] & rest
    )


def vertices_of_mask(g: Graph, mask: int) -> frozenset[int]:
    """All endpoints of the edges in mask."""
    out = set()
    for e in g.edge_ids(mask):
        u, v = g.edges[e]
        out.add(u)
        out.add(v)
    return frozenset(out)


def is_connected_set(g: Graph, u: Iterable[int]) -> bool:
    """Whether the vertex set u induces a connected subgraph (loops ignored)."""
    us = set(u)
    if not us:
        return True
    start = min(us)
    seen = {start}
    stack = [start]
    while stack:
        w = stack.pop()
        for x in g.neighbors(w):
            if x in us and x not in seen:
                seen.add(x)
                stack.append(x)
    return seen == us


@dataclass(frozen=True)
class Part:
    """One part of an edge component graph.

    kind "edge": a single edge with both endpoints under cops.
    kind "component": a cop-free component C together with its edges into the
    cop set; vertices holds V(C) plus the neighboring cop vertices.
    Edge masks refer to host edge ids, i.e. the natural bijection onto host
    edges is applied once and for all.
    """

    kind: str
    vertices: frozenset[int]
    edge_mask: int


class EdgeComponentGraph:
    """The parts of a graph relative to a cop set, indexed by host edge id."""

    __slots__ = ("host", "cop_set", "parts", "part_of_edge")

    def __init__(self, host: Graph, cop_set: frozenset[int], parts: tuple[Part, ...],
                 part_of_edge: tuple[int, ...]):
        self.host = host
        self.cop_set = cop_set
        self.parts = parts
        self.part_of_edge = part_of_edge

    def part_containing(self, e: int) -> Part:
        return self.parts[self.part_of_edge[e]]


class _PartTable:
    """Cached, mask-level view of the parts for one cop set."""

    __slots__ = ("masks", "singles", "of_edge", "vertex_sets", "kinds")

    def __init__(self, masks, singles, of_edge, vertex_sets, kinds):
        self.masks: tuple[int, ...] = masks
        self.singles: tuple[bool, ...] = singles
        self.of_edge: tuple[int, ...] = of_edge
        self.vertex_sets: tuple[frozenset[int], ...] = vertex_sets
        self.kinds: tuple[str, ...] = kinds


def _vertex_mask(vs: Iterable[int]) -> int:
    mask = 0
    for v in vs:
        mask |= 1 << v
    return mask


def part_table(g: Graph, x_mask: int) -> _PartTable:
    """Parts of g relative to the cop set given as a vertex bitmask.

    Results are cached on the graph; tables are immutable once built.
    """
    cached = g._part_cache.get(x_mask)
    if cached is not None:
        return cached

    records: list[tuple[str, frozenset[int], int]] = []
    # Single-edge parts: edges with both endpoints under cops.
    for eid, (u, v) in enumerate(g.edges):
        if x_mask >> u & 1 and x_mask >> v & 1:
            records.append(("edge", frozenset((u, v)), 1 << eid))
    # Component parts: cop-free components with their edges toward the cops.
    comp_of = [-1] * g.n
    comps: list[list[int]] = []
    for start in g.vertices:
        if x_mask >> start & 1 or comp_of[start] >= 0:
            continue
        cid = len(comps)
        comp_of[start] = cid
        verts = [start]
        stack = [start]
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if not x_mask >> w & 1 and comp_of[w] < 0:
                    comp_of[w] = cid
                    verts.append(w)
                    stack.append(w)
        comps.append(verts)
    comp_masks = [0] * len(comps)
    comp_verts = [set(vs) for vs in comps]
    for eid, (u, v) in enumerate(g.edges):
        if x_mask >> u & 1 and x_mask >> v & 1:
            continue
        cid = comp_of[v] if x_mask >> u & 1 else comp_of[u]
        comp_masks[cid] |= 1 << eid
        comp_verts[cid].add(u)
        comp_verts[cid].add(v)
    for cid in range(len(comps)):
        records.append(("component", frozenset(comp_verts[cid]), comp_masks[cid]))

    def order_key(rec):
        kind, verts, mask = rec
        if mask:
            return (0, (mask & -mask).bit_length())
        return (1, min(verts))

    records.sort(key=order_key)
    masks = tuple(mask for _, _, mask in records)
    singles = tuple(kind == "edge" for kind, _, _ in records)
    vertex_sets = tuple(verts for _, verts, _ in records)
    kinds = tuple(kind for kind, _, _ in records)
    of_edge = [-1] * g.m
    for idx, mask in enumerate(masks):
        for e in g.edge_ids(mask):
            of_edge[e] = idx
    table = _PartTable(masks, singles, tuple(of_edge), vertex_sets, kinds)
    g._part_cache[x_mask] = table
    return table


def edge_component_graph(g: Graph, x: Iterable[int]) -> EdgeComponentGraph:
    """Decompose g into single-edge parts inside the cop set x and one part
    per cop-free component; every host edge lands in exactly one part."""
    cops = frozenset(x)
    for v in cops:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} not in graph")
    table = part_table(g, _vertex_mask(cops))
    parts = tuple(
        Part(kind, verts, mask)
        for kind, verts, mask in zip(table.kinds, table.vertex_sets, table.masks)
    )
    return EdgeComponentGraph(g, cops, parts, table.of_edge)


def robber_component(g: Graph, x: Iterable[int], e: int) -> int:
    """Edge mask of the part containing edge e relative to cop set x."""
    if not 0 <= e < g.m:
        raise ValueError(f"edge id {e} out of range")
    table = part_table(g, _vertex_mask(x))
    return table.masks[table.of_edge[e]]


# ---------------------------------------------------------------------------
# PACE-style text format: `c` comments, `p tw <n> <m>` header, one edge per
# line as `u v` with 1-based vertices; `v v` encodes a self-loop.

def write_graph(g: Graph, out: IO[str]) -> None:
    out.write(f"p tw {g.n} {g.m}\n")
    for u, v in g.edges:
        out.write(f"{u + 1} {v + 1}\n")


def dumps_graph(g: Graph) -> str:
    import io

    buf = io.StringIO()
    write_graph(g, buf)
    return buf.getvalue()


def read_graph(inp: IO[str]) -> Graph:
    n = None
    m = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(inp, 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise FormatError(f"line {lineno}: repeated header")
            if len(parts) != 4 or parts[1] != "tw":
                raise FormatError(f"line {lineno}: expected 'p tw <n> <m>'")
            n, m = int(parts[2]), int(parts[3])
            continue
        if n is None:
            raise FormatError(f"line {lineno}: edge before header")
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'u v'")
        u, v = int(parts[0]), int(parts[1])
        if not (1 <= u <= n and 1 <= v <= n):
            raise FormatError(f"line {lineno}: vertex out of range")
        edges.append((u - 1, v - 1))
    if n is None:
        raise FormatError("missing 'p tw' header")
    if m is not None and m != len(edges):
        raise FormatError(f"header declares {m} edges, found {len(edges)}")
    try:
        return Graph(n, edges)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def loads_graph(text: str) -> Graph:
    import io

    return read_graph(io.StringIO(text))
