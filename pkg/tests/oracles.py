"""Independent brute-force oracles used to compute expected test values.

Everything here works from first principles on tiny inputs and stays
deliberately separate from the library's implementations: definitions are
evaluated literally, partitions are enumerated, and the game oracle is a
plain recursive minimax without memoization.
"""

from __future__ import annotations

import itertools

from bdtw.graphs import Graph


def boundary_oracle(g: Graph, edge_ids: set[int]) -> set[int]:
    """Literal evaluation: v with one incident edge inside and one outside."""
    out = set()
    rest = set(range(g.m)) - set(edge_ids)
    for v in g.vertices:
        inside = any(v in g.endpoints(e) for e in edge_ids)
        outside = any(v in g.endpoints(e) for e in rest)
        if inside and outside:
            out.add(v)
    return out


def partitions_of_set(items: tuple) -> list[list[list]]:
    """All set partitions of the items (no empty blocks)."""
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    out = []
    for smaller in partitions_of_set(rest):
        for i in range(len(smaller)):
            out.append(smaller[:i] + [[first] + smaller[i]] + smaller[i + 1:])
        out.append([[first]] + smaller)
    return out


def edge_partitions(g: Graph) -> list[tuple[int, ...]]:
    """All partitions of the edge set as tuples of masks (no empty blocks;
    the trivial all-in-one partition of an edgeless graph is one empty block)."""
    if g.m == 0:
        return [(0,)]
    out = []
    for blocks in partitions_of_set(tuple(range(g.m))):
        out.append(tuple(sum(1 << e for e in b) for b in blocks))
    return out


def connected_vertex_subsets(g: Graph, max_size: int) -> list[set[int]]:
    out = []
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(g.vertices, size):
            us = set(combo)
            start = combo[0]
            seen = {start}
            stack = [start]
            while stack:
                w = stack.pop()
                for x in g.neighbors(w):
                    if x in us and x not in seen:
                        seen.add(x)
                        stack.append(x)
            if seen == us:
                out.append(us)
    return out


# ---------------------------------------------------------------------------
# A from-scratch game oracle.  States are (cop tuple, robber edge set,
# placements used); parts are recomputed with fresh searches every time and
# nothing is cached, so it is slow but independent.

def _components_without(g: Graph, cops: frozenset[int]) -> list[set[int]]:
    left = [v for v in g.vertices if v not in cops]
    seen = set()
    comps = []
    for start in left:
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        stack = [start]
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if w not in cops and w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def parts_oracle(g: Graph, cops: frozenset[int]) -> list[frozenset[int]]:
    """Edge sets of the parts relative to the cop set, captures included."""
    parts = []
    for e in range(g.m):
        u, v = g.endpoints(e)
        if u in cops and v in cops:
            parts.append(frozenset([e]))
    for comp in _components_without(g, cops):
        edges = frozenset(
            e for e in range(g.m)
            if any(w in comp for w in g.endpoints(e))
        )
        if edges:
            parts.append(edges)
    return parts


def part_containing_oracle(g: Graph, cops: frozenset[int], edges: frozenset[int]) -> frozenset[int]:
    for p in parts_oracle(g, cops):
        if edges & p:
            return p
    raise AssertionError("edge belongs to no part")


def naive_cop_wins(g: Graph, k: int, q: int, monotone: bool,
                   node_limit: int = 2_000_000) -> bool:
    """Plain minimax on the game tree, no memoization.

    Raises RuntimeError when the node budget runs out, so callers can scope
    the oracle to instances it can afford.
    """
    counter = [0]

    def cop_to_move(cops: frozenset[int], robber: frozenset[int], used: int) -> bool:
        counter[0] += 1
        if counter[0] > node_limit:
            raise RuntimeError("oracle node limit exceeded")
        if used >= q:
            return False
        moves = set()
        cop_list = sorted(cops)
        for r_size in range(len(cop_list) + 1):
            for removed in itertools.combinations(cop_list, r_size):
                mid = cops - set(removed)
                if len(mid) >= k:
                    continue
                if monotone:
                    if part_containing_oracle(g, frozenset(mid), robber) != robber:
                        continue
                for v in g.vertices:
                    if v not in mid:
                        moves.add(frozenset(mid | {v}))
        for new_cops in sorted(moves, key=sorted):
            mid_part = part_containing_oracle(g, cops & new_cops, robber)
            ok = True
            for part in parts_oracle(g, new_cops):
                if not part <= mid_part:
                    continue
                e = min(part)
                u, v = g.endpoints(e)
                if len(part) == 1 and u in new_cops and v in new_cops:
                    continue  # capture
                if not cop_to_move(new_cops, part, used + 1):
                    ok = False
                    break
            if ok:
                return True
        return False

    starts = parts_oracle(g, frozenset())
    if not starts:
        return True
    return all(cop_to_move(frozenset(), p, 0) for p in sorted(starts, key=sorted))
