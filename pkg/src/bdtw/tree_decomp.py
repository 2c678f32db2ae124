"""Rooted trees, tree decompositions, validation, and bag tightening.

Width is the maximum bag size minus one.  Depth is measured at the leaves:
the largest number of distinct vertices collected in the bags along a
root-to-leaf path.  A childless root counts as a leaf.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .errors import FormatError, NotApplicableError
from .graphs import Graph, is_connected_set
from .validation import Report


class RootedTree:
    """A rooted tree over dense node ids; the root is its own parent."""

    __slots__ = ("parent", "root", "children", "depth")

    def __init__(self, parent: Sequence[int]):
        parent = tuple(parent)
        n = len(parent)
        roots = [t for t in range(n) if parent[t] == t]
        if n == 0:
            self.parent = parent
            self.root = -1
            self.children = ()
            self.depth = ()
            return
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {roots}")
        children: list[list[int]] = [[] for _ in range(n)]
        for t in range(n):
            p = parent[t]
            if not 0 <= p < n:
                raise ValueError(f"parent of {t} out of range")
            if t != p:
                children[p].append(t)
        depth = [-1] * n
        depth[roots[0]] = 0
        order = [roots[0]]
        for t in order:
            for c in children[t]:
                depth[c] = depth[t] + 1
                order.append(c)
        if len(order) != n:
            raise ValueError("tree is not connected (or has a parent cycle)")
        self.parent = parent
        self.root = roots[0]
        self.children = tuple(tuple(sorted(cs)) for cs in children)
        self.depth = tuple(depth)

    @property
    def size(self) -> int:
        return len(self.parent)

    @property
    def nodes(self) -> range:
        return range(len(self.parent))

    def is_leaf(self, t: int) -> bool:
        return not self.children[t]

    def leaves(self) -> list[int]:
        return [t for t in self.nodes if not self.children[t]]

    def neighbors(self, t: int) -> list[int]:
        """Parent first (if any), then children ascending."""
        out = [] if t == self.root else [self.parent[t]]
        out.extend(self.children[t])
        return out

    def edges(self) -> list[tuple[int, int]]:
        """(parent, child) pairs, ordered by child id."""
        return [(self.parent[t], t) for t in self.nodes if t != self.root]

    def path_from_root(self, t: int) -> tuple[int, ...]:
        path = []
        while True:
            path.append(t)
            if t == self.root:
                break
            t = self.parent[t]
        return tuple(reversed(path))

    def is_ancestor(self, a: int, b: int) -> bool:
        """Whether a lies on the path from the root to b (a == b included)."""
        while self.depth[b] > self.depth[a]:
            b = self.parent[b]
        return a == b

    def gca(self, a: int, b: int) -> int:
        while self.depth[a] > self.depth[b]:
            a = self.parent[a]
        while self.depth[b] > self.depth[a]:
            b = self.parent[b]
        while a != b:
            a = self.parent[a]
            b = self.parent[b]
        return a

    def path_between(self, a: int, b: int) -> tuple[int, ...]:
        """Nodes on the unique a-b path, in order."""
        g = self.gca(a, b)
        up = []
        t = a
        while t != g:
            up.append(t)
            t = self.parent[t]
        down = []
        t = b
        while t != g:
            down.append(t)
            t = self.parent[t]
        return tuple(up + [g] + list(reversed(down)))

    def bfs_nodes(self) -> list[int]:
        """Level order from the root; ties within a level by node id."""
        if self.root < 0:
            return []
        by_level: dict[int, list[int]] = {}
        for t in self.nodes:
            by_level.setdefault(self.depth[t], []).append(t)
        out = []
        for level in sorted(by_level):
            out.extend(sorted(by_level[level]))
        return out

    def induced_connected(self, nodes: Iterable[int]) -> bool:
        """Whether the node set induces a connected subtree."""
        ns = set(nodes)
        if not ns:
            return True
        start = min(ns)
        seen = {start}
        stack = [start]
        while stack:
            t = stack.pop()
            for w in self.neighbors(t):
                if w in ns and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen == ns


@dataclass(frozen=True)
class TreeDecomposition:
    tree: RootedTree
    host: Graph
    bags: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.bags) != self.tree.size:
            raise ValueError("one bag per tree node required")

    def bag(self, t: int) -> frozenset[int]:
        return self.bags[t]


def validate_td(td: TreeDecomposition) -> Report:
    """Check vertex/edge coverage and connectivity of every vertex trace."""
    report = Report()
    g = td.host
    covered = set()
    for b in td.bags:
        covered |= b
        for v in b:
            if not 0 <= v < g.n:
                report.add("T1", "bags", f"bag vertex {v} not in host")
    for v in g.vertices:
        if v not in covered:
            report.add("T1", f"vertex {v}", "vertex appears in no bag")
    for u, v in g.edges:
        if not any(u in b and v in b for b in td.bags):
            report.add("T1", f"edge {u}-{v}", "no bag contains both endpoints")
    for v in g.vertices:
        trace = [t for t in td.tree.nodes if v in td.bags[t]]
        if trace and not td.tree.induced_connected(trace):
            report.add("T2", f"vertex {v}", f"trace {trace} is disconnected")
    return report


def td_width(td: TreeDecomposition) -> int:
    if not td.bags:
        return -1
    return max(len(b) for b in td.bags) - 1


def td_depth(td: TreeDecomposition) -> int:
    """Max over leaves of the number of distinct vertices on the root path."""
    if td.tree.size == 0:
        return 0
    best = 0
    for leaf in td.tree.leaves():
        seen: set[int] = set()
        for t in td.tree.path_from_root(leaf):
            seen |= td.bags[t]
        best = max(best, len(seen))
    return best


def check_connected_trace(td: TreeDecomposition, u: Iterable[int]) -> bool:
    """Whether the nodes whose bags meet u induce a connected subtree.

    Only defined for u connected in the host; holds in every valid
    decomposition, so this doubles as a property check.
    """
    us = set(u)
    if not is_connected_set(td.host, us):
        raise NotApplicableError("u must be connected in the host graph")
    trace = [t for t in td.tree.nodes if us & td.bags[t]]
    return td.tree.induced_connected(trace)


def _removal_keeps_valid(td: TreeDecomposition, t: int, v: int) -> bool:
    """Whether dropping v from bag t preserves T1 and T2."""
    g = td.host
    others = [s for s in td.tree.nodes if s != t and v in td.bags[s]]
    if not others:
        return False
    inc = g.incident_mask(v)
    for e in g.edge_ids(inc):
        a, b = g.endpoints(e)
        # Coverage must survive without relying on bag t still containing v.
        ok = any(
            a in td.bags[s] and b in td.bags[s] and s != t for s in td.tree.nodes
        )
        if not ok:
            return False
    return td.tree.induced_connected(others)


def tighten(td: TreeDecomposition) -> TreeDecomposition:
    """Greedily remove vertices from bags while validity is preserved.

    Scans (node, vertex) pairs in increasing order and repeats to a fixpoint,
    so the result is deterministic.  Width and depth never increase.
    """
    bags = [set(b) for b in td.bags]
    changed = True
    while changed:
        changed = False
        current = TreeDecomposition(td.tree, td.host, tuple(frozenset(b) for b in bags))
        for t in td.tree.nodes:
            for v in sorted(bags[t]):
                if _removal_keeps_valid(current, t, v):
                    bags[t].discard(v)
                    changed = True
                    current = TreeDecomposition(
                        td.tree, td.host, tuple(frozenset(b) for b in bags)
                    )
    return TreeDecomposition(td.tree, td.host, tuple(frozenset(b) for b in bags))


# ---------------------------------------------------------------------------
# PACE-style .td files, extended with an `r <root-bag-id>` line.  Bag ids and
# vertices are 1-based in files.  The writer adds a `c depth <d>` comment.

def write_td(td: TreeDecomposition, out: IO[str]) -> None:
    width_plus_one = max((len(b) for b in td.bags), default=0)
    out.write(f"c depth {td_depth(td)}\n")
    out.write(f"s td {td.tree.size} {width_plus_one} {td.host.n}\n")
    for t in td.tree.nodes:
        verts = " ".join(str(v + 1) for v in sorted(td.bags[t]))
        out.write(f"b {t + 1}{' ' + verts if verts else ''}\n")
    for p, c in td.tree.edges():
        out.write(f"{p + 1} {c + 1}\n")
    if td.tree.size:
        out.write(f"r {td.tree.root + 1}\n")


def dumps_td(td: TreeDecomposition) -> str:
    import io

    buf = io.StringIO()
    write_td(td, buf)
    return buf.getvalue()


def read_td(inp: IO[str], host: Graph) -> TreeDecomposition:
    n_bags = None
    bags: dict[int, frozenset[int]] = {}
    links: list[tuple[int, int]] = []
    root_id = None
    for lineno, raw in enumerate(inp, 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if len(parts) != 5 or parts[1] != "td":
                raise FormatError(f"line {lineno}: expected 's td <bags> <w+1> <n>'")
            n_bags = int(parts[2])
            if int(parts[4]) != host.n:
                raise FormatError(
                    f"line {lineno}: decomposition is for {parts[4]} vertices, host has {host.n}"
                )
        elif parts[0] == "b":
            bid = int(parts[1]) - 1
            bags[bid] = frozenset(int(v) - 1 for v in parts[2:])
        elif parts[0] == "r":
            root_id = int(parts[1]) - 1
        else:
            if len(parts) != 2:
                raise FormatError(f"line {lineno}: expected a tree edge '<id> <id>'")
            links.append((int(parts[0]) - 1, int(parts[1]) - 1))
    if n_bags is None:
        raise FormatError("missing 's td' header")
    if set(bags) != set(range(n_bags)):
        raise FormatError("bag ids must be 1..<#bags>")
    if root_id is None:
        root_id = 0
    adj: dict[int, list[int]] = {t: [] for t in range(n_bags)}
    for a, b in links:
        if not (0 <= a < n_bags and 0 <= b < n_bags):
            raise FormatError(f"tree edge ({a + 1},{b + 1}) references unknown bag")
        adj[a].append(b)
        adj[b].append(a)
    parent = [-1] * n_bags
    parent[root_id] = root_id
    order = [root_id]
    for t in order:
        for w in adj[t]:
            if parent[w] < 0:
                parent[w] = t
                order.append(w)
    if len(order) != n_bags:
        raise FormatError("tree edges do not form a tree on the bags")
    tree = RootedTree(parent)
    return TreeDecomposition(tree, host, tuple(bags[t] for t in range(n_bags)))


def loads_td(text: str, host: Graph) -> TreeDecomposition:
    import io

    return read_td(io.StringIO(text), host)
