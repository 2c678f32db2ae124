"""Pre-tree decompositions: a rooted tree with bags and directed edge cones.

Each directed tree edge (s, t) carries a cone, an edge set of the host graph
(the part of the graph "behind" t as seen from s).  The local blocks at a
node are its cones toward all neighbors, parent first; at a childless
non-root node the second block is the complement of its cone toward the
parent.  An edge is exact when its two opposite cones partition the host's
edges; the whole decomposition is exact when additionally every bag equals
the boundary of its local blocks.

Hosts are normally closure graphs (a self-loop at every vertex), which makes
vertices hideable positions; the validators themselves are host-agnostic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .errors import FormatError, NotApplicableError
from .graphs import Graph, boundary, closure, component_edge_masks, connected_components, read_graph, write_graph
from .partitions import EdgePartition
from .tree_decomp import RootedTree, TreeDecomposition, tighten, validate_td
from .validation import Report


@dataclass
class PreTreeDecomposition:
    tree: RootedTree
    host: Graph
    bags: tuple[frozenset[int], ...]
    cones: dict[tuple[int, int], int]

    def __post_init__(self):
        if len(self.bags) != self.tree.size:
            raise ValueError("one bag per tree node required")
        expected = set()
        for p, c in self.tree.edges():
            expected.add((p, c))
            expected.add((c, p))
        if set(self.cones) != expected:
            raise ValueError("cones must cover every directed tree edge exactly")
        for key, mask in self.cones.items():
            if mask & ~self.host.full_mask:
                raise ValueError(f"cone {key} mentions edges outside the host")

    def cone(self, s: int, t: int) -> int:
        return self.cones[(s, t)]

    def bag(self, t: int) -> frozenset[int]:
        return self.bags[t]


def local_blocks(ptd: PreTreeDecomposition, t: int) -> tuple[int, ...]:
    """Raw local blocks at t: cones toward neighbors (parent first); at a
    childless non-root node, its parent cone plus that cone's complement."""
    tree = ptd.tree
    if t != tree.root and not tree.children[t]:
        up = ptd.cone(t, tree.parent[t])
        return (up, ptd.host.full_mask & ~up)
    return tuple(ptd.cone(t, u) for u in tree.neighbors(t))


def local_partition(ptd: PreTreeDecomposition, t: int) -> EdgePartition:
    return EdgePartition(ptd.host, local_blocks(ptd, t))


def local_boundary(ptd: PreTreeDecomposition, t: int) -> frozenset[int]:
    out: set[int] = set()
    for b in local_blocks(ptd, t):
        out |= boundary(ptd.host, b)
    return frozenset(out)


def validate_ptd(ptd: PreTreeDecomposition) -> Report:
    report = Report()
    tree, g = ptd.tree, ptd.host
    if tree.size == 0:
        if g.n:
            report.add("PT1", "tree", "empty tree for a non-empty host")
        return report

    root = tree.root
    if ptd.bags[root]:
        report.add("PT1", f"node {root}", f"root bag {sorted(ptd.bags[root])} is non-empty")
    comps = connected_components(g)
    comp_masks = component_edge_masks(g)
    child_cones = [ptd.cone(root, c) for c in tree.children[root]]
    for comp, mask in zip(comps, comp_masks):
        if mask not in child_cones:
            report.add(
                "PT1",
                f"component {sorted(comp)}",
                "no root child whose cone is exactly this component's edges",
            )

    for t in tree.nodes:
        if t != root and not tree.children[t]:
            up = ptd.cone(tree.parent[t], t)
            if bin(up).count("1") > 1:
                report.add("PT2", f"leaf {t}", f"cone from parent has {bin(up).count('1')} edges")

    for t in tree.nodes:
        blocks = local_blocks(ptd, t)
        union = 0
        overlap = 0
        for b in blocks:
            overlap |= union & b
            union |= b
        if overlap:
            report.add("PT3", f"node {t}", f"blocks overlap on edges {g.edge_ids(overlap)}")
        if union != g.full_mask:
            missing = g.full_mask & ~union
            report.add("PT3", f"node {t}", f"blocks miss edges {g.edge_ids(missing)}")
        if overlap == 0 and union == g.full_mask:
            delta = local_boundary(ptd, t)
            if not delta <= ptd.bags[t]:
                report.add(
                    "PT3",
                    f"node {t}",
                    f"bag {sorted(ptd.bags[t])} misses boundary vertices {sorted(delta - ptd.bags[t])}",
                )

    for p, c in tree.edges():
        both = ptd.cone(p, c) & ptd.cone(c, p)
        if both:
            report.add("PT4", f"edge {p}-{c}", f"opposite cones share edges {g.edge_ids(both)}")
    return report


def is_exact_edge(ptd: PreTreeDecomposition, s: int, t: int) -> bool:
    return ptd.cone(s, t) | ptd.cone(t, s) == ptd.host.full_mask


def is_exact(ptd: PreTreeDecomposition) -> bool:
    if any(not is_exact_edge(ptd, p, c) for p, c in ptd.tree.edges()):
        return False
    return all(ptd.bags[t] == local_boundary(ptd, t) for t in ptd.tree.nodes)


def ptd_width(ptd: PreTreeDecomposition) -> int:
    if not ptd.bags:
        return -1
    return max(len(b) for b in ptd.bags) - 1


def ptd_depth(ptd: PreTreeDecomposition) -> int:
    """Max over all nodes of the telescoping bag-difference sum on its root path."""
    tree = ptd.tree
    if tree.size == 0:
        return 0
    best = 0
    for t in tree.nodes:
        total = 0
        for s in tree.path_from_root(t):
            if s != tree.root:
                total += len(ptd.bags[s] - ptd.bags[tree.parent[s]])
        best = max(best, total)
    return best


def _require_exact_prefix(ptd: PreTreeDecomposition, subtree: Iterable[int]) -> set[int]:
    """Validate the subtree shape the exact-prefix observations assume: it
    contains the root, is upward-closed, keeps either all or none of each
    node's children, and all its internal edges are exact."""
    nodes = set(subtree)
    tree = ptd.tree
    if tree.root not in nodes:
        raise NotApplicableError("subtree must contain the root")
    for t in nodes:
        if t != tree.root and tree.parent[t] not in nodes:
            raise NotApplicableError(f"subtree is not upward-closed at node {t}")
    for t in nodes:
        inside = [c for c in tree.children[t] if c in nodes]
        if inside and len(inside) != len(tree.children[t]):
            raise NotApplicableError(
                f"subtree keeps only some children of node {t}; it must cut at whole nodes"
            )
    for t in nodes:
        if t != tree.root and tree.parent[t] in nodes:
            if not is_exact_edge(ptd, tree.parent[t], t):
                raise NotApplicableError(f"edge {tree.parent[t]}-{t} inside the subtree is not exact")
    return nodes


def check_exact_subtree_partition(ptd: PreTreeDecomposition, subtree: Iterable[int]) -> bool:
    """The cones into the subtree's leaves must partition the host's edges."""
    nodes = _require_exact_prefix(ptd, subtree)
    tree = ptd.tree
    blocks = []
    for t in sorted(nodes):
        if t == tree.root:
            continue
        if not any(c in nodes for c in tree.children[t]):
            blocks.append(ptd.cone(tree.parent[t], t))
    union = 0
    for b in blocks:
        if b & union:
            return False
        union |= b
    return union == ptd.host.full_mask


def check_exact_subtree_depth(ptd: PreTreeDecomposition, subtree: Iterable[int]) -> bool:
    """Boundary traces are connected inside the subtree and the telescoping
    sum along every root path equals the union of boundaries on it."""
    nodes = _require_exact_prefix(ptd, subtree)
    tree = ptd.tree
    delta = {t: local_boundary(ptd, t) for t in nodes}
    for v in ptd.host.vertices:
        trace = [t for t in nodes if v in delta[t]]
        if trace and not tree.induced_connected(trace):
            return False
    for t in nodes:
        path = tree.path_from_root(t)
        total = 0
        union: set[int] = set()
        for s in path:
            union |= delta[s]
            if s != tree.root:
                total += len(delta[s] - delta[tree.parent[s]])
        if total != len(union):
            return False
    return True


def check_exact_path_nesting(ptd: PreTreeDecomposition, path: Sequence[int]) -> bool:
    """Forward cones along a path of exact edges are nested decreasing."""
    tree = ptd.tree
    for a, b in zip(path, path[1:]):
        if tree.parent[a] != b and tree.parent[b] != a:
            raise NotApplicableError(f"{a}-{b} is not a tree edge")
        if not is_exact_edge(ptd, a, b):
            raise NotApplicableError(f"path edge {a}-{b} is not exact")
    for (a, b), (b2, c) in zip(zip(path, path[1:]), zip(path[1:], path[2:])):
        fwd1 = ptd.cone(a, b)
        fwd2 = ptd.cone(b2, c)
        if fwd2 & ~fwd1:
            return False
    return True


def _isolated_loop_vertex(host: Graph, cone_mask: int) -> int | None:
    """The vertex v if cone_mask is exactly one self-loop vv of a vertex whose
    only incident edge is that loop; otherwise None."""
    if bin(cone_mask).count("1") != 1:
        return None
    e = cone_mask.bit_length() - 1
    u, v = host.endpoints(e)
    if u != v:
        return None
    if host.incident_mask(v) != cone_mask:
        return None
    return v


def to_tree_decomposition(ptd: PreTreeDecomposition, g: Graph) -> TreeDecomposition:
    """Turn an exact pre-tree decomposition of closure(g) into a tree
    decomposition of g on the same tree.

    Bags are copied, except that a leaf whose incoming cone is the lone
    self-loop of an otherwise edgeless vertex gets the bag {v}; without this
    the vertex would appear in no bag.  Width and depth bounds carry over.
    """
    if ptd.host != closure(g):
        raise ValueError("decomposition host must be the closure of g")
    if not is_exact(ptd):
        raise ValueError("input pre-tree decomposition is not exact")
    tree = ptd.tree
    bags = list(ptd.bags)
    for t in tree.nodes:
        if t != tree.root and not tree.children[t]:
            v = _isolated_loop_vertex(ptd.host, ptd.cone(tree.parent[t], t))
            if v is not None:
                bags[t] = frozenset((v,))
    return TreeDecomposition(tree, g, tuple(bags))


def from_tree_decomposition(td: TreeDecomposition) -> PreTreeDecomposition:
    """Build an exact pre-tree decomposition of closure(host) from a valid
    tree decomposition.

    The decomposition is tightened first.  Per component the touched subtree
    is copied under a fresh root; every vertex contributes one leaf carrying
    its self-loop and every non-loop edge one leaf carrying that edge, each
    attached at the shallowest copied node whose bag contains it.  Loops
    already present in the host are covered by the vertex leaves.  Cones
    accumulate from descendant leaves; bags become the local boundaries.
    """
    report = validate_td(td)
    if not report.ok:
        raise ValueError(f"input tree decomposition is invalid:\n{report}")
    td = tighten(td)
    g = td.host
    gc = closure(g)
    full = gc.full_mask

    parent: list[int] = [0]
    attached: list[int] = [0]  # direct leaf-cone mask per new node
    down_into: list[int] = [0]  # cone from parent into the node, filled later

    def new_node(par: int) -> int:
        nid = len(parent)
        parent.append(par)
        attached.append(0)
        down_into.append(0)
        return nid

    comps = connected_components(g)
    for comp in comps:
        comp_sorted = sorted(comp)
        if len(comp_sorted) == 1 and not g.incident_mask(comp_sorted[0]):
            v = comp_sorted[0]
            leaf = new_node(0)
            down_into[leaf] = 1 << gc.edge_id(v, v)
            continue
        touched = [t for t in td.tree.nodes if td.bags[t] & comp]
        touched.sort(key=lambda t: (td.tree.depth[t], t))
        top = touched[0]
        copy_of: dict[int, int] = {}
        for t in touched:
            par = 0 if t == top else copy_of[td.tree.parent[t]]
            copy_of[t] = new_node(par)
        for v in comp_sorted:
            hosts = [t for t in touched if v in td.bags[t]]
            t_v = min(hosts, key=lambda t: (td.tree.depth[t], t))
            leaf = new_node(copy_of[t_v])
            down_into[leaf] = 1 << gc.edge_id(v, v)
        for eid, (u, v) in enumerate(g.edges):
            if u == v or u not in comp:
                continue
            hosts = [t for t in touched if u in td.bags[t] and v in td.bags[t]]
            t_e = min(hosts, key=lambda t: (td.tree.depth[t], t))
            leaf = new_node(copy_of[t_e])
            down_into[leaf] = 1 << eid

    n_nodes = len(parent)
    tree = RootedTree(parent)
    # Accumulate cones bottom-up: the cone into a node is everything attached
    # at or below it.
    for t in sorted(tree.nodes, key=lambda t: -tree.depth[t]):
        if t != tree.root:
            mask = attached[t] | down_into[t]
            down_into[t] = mask
            attached[tree.parent[t]] |= mask
    cones: dict[tuple[int, int], int] = {}
    for p, c in tree.edges():
        cones[(p, c)] = down_into[c]
        cones[(c, p)] = full & ~down_into[c]

    ptd = PreTreeDecomposition(tree, gc, tuple(frozenset() for _ in range(n_nodes)), cones)
    bags = tuple(local_boundary(ptd, t) for t in tree.nodes)
    return PreTreeDecomposition(tree, gc, bags, cones)


# ---------------------------------------------------------------------------
# Text format.  A file is self-contained: first the host graph in PACE form
# (1-based vertices), then one `n <id> <parent-id> : <bag vertices>` line per
# node and one `g <s> <t> : <edge ids>` line per directed tree edge.  Node
# ids, bag vertices, and edge ids in the records are the in-memory 0-based
# ids; bag vertices refer to host vertices, edge ids to the graph section's
# edge order.

def write_ptd(ptd: PreTreeDecomposition, out: IO[str], extra: Iterable[str] = ()) -> None:
    write_graph(ptd.host, out)
    for t in ptd.tree.nodes:
        verts = " ".join(str(v) for v in sorted(ptd.bags[t]))
        par = t if t == ptd.tree.root else ptd.tree.parent[t]
        out.write(f"n {t} {par} :{' ' + verts if verts else ''}\n")
    for (s, t), mask in sorted(ptd.cones.items()):
        ids = " ".join(str(e) for e in ptd.host.edge_ids(mask))
        out.write(f"g {s} {t} :{' ' + ids if ids else ''}\n")
    for line in extra:
        out.write(line.rstrip("\n") + "\n")


def dumps_ptd(ptd: PreTreeDecomposition) -> str:
    import io

    buf = io.StringIO()
    write_ptd(ptd, buf)
    return buf.getvalue()


def _parse_ptd_lines(inp: IO[str]):
    """Split a ptd-style file into (host graph, node/cone records, extras)."""
    import io

    graph_lines: list[str] = []
    records: list[tuple[str, list[str], int]] = []
    for lineno, raw in enumerate(inp, 1):
        line = raw.strip()
        if not line:
            continue
        tag = line.split()[0]
        if tag in ("n", "g", "B", "m"):
            records.append((tag, line.split(), lineno))
        else:
            graph_lines.append(line)
    host = read_graph(io.StringIO("\n".join(graph_lines) + "\n"))
    return host, records


def read_ptd(inp: IO[str]) -> PreTreeDecomposition:
    host, records = _parse_ptd_lines(inp)
    nodes: dict[int, tuple[int, frozenset[int]]] = {}
    cones: dict[tuple[int, int], int] = {}
    for tag, parts, lineno in records:
        if tag == "n":
            try:
                sep = parts.index(":")
            except ValueError:
                raise FormatError(f"line {lineno}: node record missing ':'")
            nid, par = int(parts[1]), int(parts[2])
            nodes[nid] = (par, frozenset(int(v) for v in parts[sep + 1:]))
        elif tag == "g":
            try:
                sep = parts.index(":")
            except ValueError:
                raise FormatError(f"line {lineno}: cone record missing ':'")
            s, t = int(parts[1]), int(parts[2])
            cones[(s, t)] = host.edge_mask(int(e) for e in parts[sep + 1:])
    if set(nodes) != set(range(len(nodes))):
        raise FormatError("node ids must be dense 0..N-1")
    parent = [nodes[t][0] for t in range(len(nodes))]
    bags = tuple(nodes[t][1] for t in range(len(nodes)))
    try:
        tree = RootedTree(parent)
        ptd = PreTreeDecomposition(tree, host, bags, cones)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    report = validate_ptd(ptd)
    if not report.ok:
        raise FormatError(f"file parses but violates the axioms:\n{report}")
    return ptd


def loads_ptd(text: str) -> PreTreeDecomposition:
    import io

    return read_ptd(io.StringIO(text))
