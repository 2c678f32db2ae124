"""Strategy trees: a cop strategy replayed against all robber behaviors,
recorded as a pre-tree decomposition.

Each non-root node t with parent s stands for: the robber sits in the part
cone(s, t) under the cop set bag(s), and the cops answer with bag(t).  A
node is a leaf when its incoming part is a single edge already covered by
the parent's cops.  Children of t are the parts under bag(t) that meet the
incoming part; the cone back to the parent is the complement of the child
cones, so non-monotone moves show up as non-exact tree edges.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .errors import StrategyError
from .game import (
    GameConfig,
    Strategy,
    _macro_moves,
    _part_of,
    _vmask,
    is_capture_mask,
    replay_cop_strategy,
)
from .graphs import Graph, is_closure, part_table, vertices_of_mask
from .pre_tree import PreTreeDecomposition, is_exact_edge, write_ptd, _parse_ptd_lines
from .tree_decomp import RootedTree


@dataclass(frozen=True)
class Move:
    """One cop macro-move: remove a set, then place one vertex."""

    removed: tuple[int, ...]
    placed: int


@dataclass
class StrategyTree:
    ptd: PreTreeDecomposition
    branching: frozenset[int]
    move_log: dict[int, Move]
    strategy: Strategy | None = None

    @property
    def host(self) -> Graph:
        return self.ptd.host

    def is_branching(self, t: int) -> bool:
        return t in self.branching


def _move_between(old: frozenset[int], new: frozenset[int]) -> Move:
    added = new - old
    if len(added) == 1:
        return Move(tuple(sorted(old - new)), next(iter(added)))
    if not added and new:
        # The placement re-used a removed cop; pick the canonical realization.
        placed = min(new)
        return Move(tuple(sorted((old - new) | {placed})), placed)
    raise StrategyError(f"{sorted(old)} -> {sorted(new)} is not a macro-move")


def build(g: Graph, sigma: Strategy, cfg: GameConfig,
          max_placements: int | None = None) -> StrategyTree:
    """Replay sigma from every initial robber component into a tree.

    The host must be a closure graph.  Raises if sigma is undefined on a
    reached position, plays an illegal move, or fails to capture within the
    placement cutoff (cfg.q unless max_placements overrides it); the error
    carries the escaping play.
    """
    if not is_closure(g):
        raise ValueError("strategy trees are built over closure graphs")
    cutoff = cfg.q if max_placements is None else max_placements
    full = g.full_mask

    parent: list[int] = [0]
    bags: list[frozenset[int]] = [frozenset()]
    cones: dict[tuple[int, int], int] = {}
    move_log: dict[int, Move] = {}
    branching: set[int] = set()

    queue: deque[tuple[int, int, int, int]] = deque()  # node, parent, in-cone, used
    for mask in part_table(g, 0).masks:
        if mask:
            child = len(parent)
            parent.append(0)
            bags.append(frozenset())
            cones[(0, child)] = mask
            queue.append((child, 0, mask, 0))

    def play_to(t: int) -> list[tuple[frozenset[int], int]]:
        steps = []
        while t != 0:
            s = parent[t]
            steps.append((bags[s], cones[(s, t)]))
            t = s
        return list(reversed(steps))

    while queue:
        t, s, in_cone, used = queue.popleft()
        cops_prev = bags[s]
        if is_capture_mask(g, _vmask(cops_prev), in_cone):
            u, v = g.endpoints(in_cone.bit_length() - 1)
            bags[t] = frozenset((u, v))
            cones[(t, s)] = full & ~in_cone
            continue
        if used >= cutoff:
            raise StrategyError(
                f"strategy does not capture within {cutoff} placements; "
                f"escaping play: {play_to(t)}"
            )
        new_cops = sigma.next_cops(cops_prev, in_cone)
        x_mask = _vmask(cops_prev)
        new_mask = _vmask(new_cops)
        if new_mask not in _macro_moves(g, cfg.k, False, x_mask, in_cone):
            raise StrategyError(
                f"strategy plays illegal move {sorted(new_cops)} at cops="
                f"{sorted(cops_prev)} part={g.format_edges(in_cone)}"
            )
        bags[t] = new_cops
        move = _move_between(cops_prev, new_cops)
        move_log[t] = move
        if move.placed in vertices_of_mask(g, in_cone):
            branching.add(t)
        child_cones = []
        for mask in part_table(g, new_mask).masks:
            if mask & in_cone:
                child = len(parent)
                parent.append(t)
                bags.append(frozenset())
                cones[(t, child)] = mask
                child_cones.append(mask)
                queue.append((child, t, mask, used + 1))
        union = 0
        for mask in child_cones:
            union |= mask
        cones[(t, s)] = full & ~union

    tree = RootedTree(parent)
    ptd = PreTreeDecomposition(tree, g, tuple(bags), cones)
    return StrategyTree(ptd, frozenset(branching), move_log, sigma)


def mark_branching(st: StrategyTree) -> frozenset[int]:
    """Nodes whose creating move placed a cop touching the robber's part."""
    out = set()
    tree = st.ptd.tree
    for t, move in st.move_log.items():
        in_cone = st.ptd.cone(tree.parent[t], t)
        if move.placed in vertices_of_mask(st.host, in_cone):
            out.add(t)
    return frozenset(out)


def structural_branching(st: StrategyTree) -> frozenset[int]:
    """Nodes with a child whose cone is a single self-loop; coincides with
    mark_branching on replay-built trees.

    A loop vv becomes a lone child cone only when the move at the node
    placed v while the robber could reach vv, which is exactly a placement
    into the escape space.  This covers vertices whose only edge is their
    loop: catching a robber hiding there still takes a placement onto it.
    The root is excluded: its child cones are whole components (a bare
    vertex's component is a lone loop) and no move creates them."""
    g = st.host
    out = set()
    for t in st.ptd.tree.nodes:
        if t == st.ptd.tree.root:
            continue
        for c in st.ptd.tree.children[t]:
            mask = st.ptd.cone(t, c)
            if mask.bit_count() != 1:
                continue
            u, v = g.endpoints(mask.bit_length() - 1)
            if u == v:
                out.add(t)
                break
    return frozenset(out)


def move_is_monotone(st: StrategyTree, t: int) -> bool:
    """Whether the move creating t kept the robber part from growing at its
    removal stage."""
    tree = st.ptd.tree
    s = tree.parent[t]
    move = st.move_log[t]
    in_cone = st.ptd.cone(s, t)
    mid = _vmask(st.ptd.bags[s]) & ~_vmask(move.removed)
    return _part_of(st.host, mid, in_cone) == in_cone


def check_monotone_exact(st: StrategyTree) -> bool:
    """Each tree edge is exact iff its move was monotone, and every
    non-exact edge's removal stage strictly shrinks the cop set.

    A macro-move bundles removals with one fresh placement, so the moved-to
    bag itself need not shrink across a non-exact edge; the strict shrink
    happens at the removal stage, before the placement."""
    tree = st.ptd.tree
    for t in tree.nodes:
        if t == tree.root or not tree.children[t]:
            continue
        s = tree.parent[t]
        exact = is_exact_edge(st.ptd, s, t)
        if move_is_monotone(st, t) != exact:
            return False
        if not exact:
            removed = set(st.move_log[t].removed) & st.ptd.bags[s]
            if not removed:
                return False
    return True


def check_self_loop_cones(st: StrategyTree) -> bool:
    """At every internal non-root node, each self-loop of a bag vertex sits
    in the cone toward the parent or forms a singleton child cone."""
    g = st.host
    tree = st.ptd.tree
    for s in tree.nodes:
        if s == tree.root or not tree.children[s]:
            continue
        up = st.ptd.cone(s, tree.parent[s])
        for v in st.ptd.bags[s]:
            loop = 1 << g.edge_id(v, v)
            if loop & up:
                continue
            if not any(st.ptd.cone(s, c) == loop for c in tree.children[s]):
                return False
    return True


def depth_iff_winning(st: StrategyTree, cfg: GameConfig) -> bool:
    """Whether the tree's depth is at most q exactly when the strategy wins
    the q-placement game."""
    from .pre_tree import ptd_depth

    if st.strategy is None:
        raise StrategyError("strategy tree was loaded without its strategy")
    outcome = replay_cop_strategy(st.host, st.strategy, cfg)
    return (ptd_depth(st.ptd) <= cfg.q) == outcome.wins


@dataclass
class FuzzResult:
    strategy: Strategy
    placements_bound: int  # the fuzzed strategy wins with this many placements
    injected: int
    detour_keys: list[tuple[frozenset[int], int]] = field(default_factory=list)


def fuzz_nonmonotone(g: Graph, sigma: Strategy, cfg: GameConfig, slack: int,
                     seed: int = 0) -> FuzzResult:
    """Inject up to `slack` redundant place-then-remove detours into a
    winning strategy.

    Each detour places a fresh cop w at one strategy key and removes it with
    the next move, costing one extra placement on plays through that key.
    Detour placements prefer a vertex inside the robber part with a free
    neighbor there, which makes the follow-up removal grow the part and
    yields a genuinely non-monotone (non-exact) tree edge.  The perturbed
    strategy is replay-verified to win with q + injected placements.
    """
    rng = random.Random(seed)
    moves = dict(sigma.moves)
    injected = 0
    detour_keys: list[tuple[frozenset[int], int]] = []

    for _ in range(slack):
        candidates = []
        for (cops, part), target in moves.items():
            if len(cops) >= cfg.k:
                continue
            if (cops, part) in detour_keys:
                continue
            if len(target - cops) != 1:
                continue  # detours assume a fresh-placement move to resume
            x_mask = _vmask(cops)
            table = part_table(g, x_mask)
            idx = table.of_edge[(part & -part).bit_length() - 1]
            if table.singles[idx]:
                continue
            free = sorted(table.vertex_sets[idx] - cops - (target - cops))
            incident = [
                w for w in free
                if any(u not in cops and u != w for u in _part_neighbors(g, part, w))
            ]
            for w in incident or free:
                candidates.append(((cops, part), target, w, w in incident))
        if not candidates:
            break
        # Prefer detours that will force a non-monotone edge.
        candidates.sort(key=lambda c: (not c[3], sorted(c[0][0]), c[0][1], c[2]))
        preferred = [c for c in candidates if c[3]] or candidates
        key, target, w, _inc = preferred[rng.randrange(len(preferred))]
        cops, part = key
        detour_cops = cops | {w}
        responses = [
            q for q in part_table(g, _vmask(detour_cops)).masks
            if q and q & ~part == 0 and not is_capture_mask(g, _vmask(detour_cops), q)
        ]
        if any((detour_cops, q) in moves for q in responses):
            continue
        moves[key] = detour_cops
        for q in responses:
            moves[(detour_cops, q)] = target
        injected += 1
        detour_keys.append(key)

    fuzzed = Strategy(moves)
    bound = cfg.q + injected
    outcome = replay_cop_strategy(g, fuzzed, GameConfig(cfg.k, bound))
    if not outcome.wins:
        raise StrategyError("fuzzed strategy unexpectedly fails; this is a bug")
    return FuzzResult(fuzzed, bound, injected, detour_keys)


def _part_neighbors(g: Graph, part: int, w: int) -> list[int]:
    """Endpoints opposite w over the part's edges at w."""
    out = []
    for e in g.edge_ids(part & g.incident_mask(w)):
        u, v = g.endpoints(e)
        out.append(v if u == w else u)
    return out


# ---------------------------------------------------------------------------
# Serialization: the pre-tree decomposition format plus `B <node>` branching
# markers and `m <node> : remove <v...> place <v>` move-log lines.  The
# strategy itself is not serialized; trees loaded from files carry
# strategy=None.

def write_strategy_tree(st: StrategyTree, out) -> None:
    extra = [f"B {t}" for t in sorted(st.branching)]
    for t in sorted(st.move_log):
        move = st.move_log[t]
        removed = " ".join(str(v) for v in move.removed)
        extra.append(
            f"m {t} :{(' remove ' + removed) if removed else ''} place {move.placed}"
        )
    write_ptd(st.ptd, out, extra)


def dumps_strategy_tree(st: StrategyTree) -> str:
    import io

    buf = io.StringIO()
    write_strategy_tree(st, buf)
    return buf.getvalue()


def read_strategy_tree(inp) -> StrategyTree:
    import io

    from .errors import FormatError
    from .pre_tree import loads_ptd

    host, records = _parse_ptd_lines(inp)
    ptd_lines = []
    branching: set[int] = set()
    move_log: dict[int, Move] = {}
    for tag, parts, lineno in records:
        if tag == "B":
            branching.add(int(parts[1]))
        elif tag == "m":
            t = int(parts[1])
            try:
                pi = parts.index("place")
            except ValueError:
                raise FormatError(f"line {lineno}: move record missing 'place'")
            placed = int(parts[pi + 1])
            removed = tuple(
                int(v) for v in parts[3:pi] if v != "remove"
            )
            move_log[t] = Move(removed, placed)
        else:
            ptd_lines.append(" ".join(parts))
    from .graphs import dumps_graph

    ptd = loads_ptd(dumps_graph(host) + "\n".join(ptd_lines) + "\n")
    return StrategyTree(ptd, frozenset(branching), move_log, None)


def loads_strategy_tree(text: str) -> StrategyTree:
    import io

    return read_strategy_tree(io.StringIO(text))
