"""Breadth-first exactification of a strategy tree.

Nodes are processed in BFS order.  At each internal node the free edges of
its child tree-edges (edges missing from both cones) are reassigned so that
the node's local partition has minimum boundary, then the change is pushed
through the already-processed subtree: cones pointing toward the node gain
the moved edges, cones pointing away lose them.  After step i all tree
edges with both endpoints in the processed region plus its neighbors are
exact; after the last step the whole decomposition is exact, with width and
depth no larger than the input's.

verify_step re-checks, per step, everything the correctness argument
relies on: the axioms, exactness of the processed region, that unprocessed
nodes' child cones only shrink, per-node bag sizes, per-path depth sums,
three vertex-tracking claims, and the exchange inequality at the greatest
common ancestor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .errors import BudgetExceededError, ConsistencyError
from .game import GameConfig, RobberStrategy, Strategy, solve
from .graphs import Graph, boundary, closure
from .pre_tree import (
    PreTreeDecomposition,
    is_exact,
    is_exact_edge,
    ptd_depth,
    ptd_width,
    to_tree_decomposition,
    validate_ptd,
)
from .strategy_tree import StrategyTree, build, fuzz_nonmonotone
from .tree_decomp import RootedTree, TreeDecomposition, validate_td
from .validation import Report

DEFAULT_FREE_EDGE_CAP = 20


@dataclass
class StepState:
    """The decomposition after a prefix of the construction's steps."""

    tree: RootedTree
    host: Graph
    index: int
    beta: tuple[frozenset[int], ...]
    gamma: dict[tuple[int, int], int]
    processed: tuple[int, ...]

    def scope(self) -> set[int]:
        """Processed nodes plus their tree neighbors."""
        out = set(self.processed)
        for t in self.processed:
            out.update(self.tree.neighbors(t))
        return out

    def as_ptd(self) -> PreTreeDecomposition:
        return PreTreeDecomposition(self.tree, self.host, self.beta, dict(self.gamma))


@dataclass
class ExtensionChoice:
    """Chosen free-edge reassignment at one node: per-child masks, their
    union, and the per-child leftover complements."""

    children: tuple[int, ...]
    f: tuple[int, ...]
    f_union: int
    f_star: tuple[int, ...]
    boundary_size: int


def bfs_order(st: StrategyTree | PreTreeDecomposition) -> list[int]:
    """Level order with ties by node id; the root comes first."""
    ptd = st.ptd if isinstance(st, StrategyTree) else st
    return ptd.tree.bfs_nodes()


def initial_state(ptd: PreTreeDecomposition) -> StepState:
    return StepState(ptd.tree, ptd.host, 0, tuple(ptd.bags), dict(ptd.cones), ())


def _blocks_at(state: StepState, t: int) -> list[int]:
    tree = state.tree
    if t != tree.root and not tree.children[t]:
        up = state.gamma[(t, tree.parent[t])]
        return [up, state.host.full_mask & ~up]
    return [state.gamma[(t, u)] for u in tree.neighbors(t)]


def _delta(state: StepState, t: int) -> frozenset[int]:
    out: set[int] = set()
    for b in _blocks_at(state, t):
        out |= boundary(state.host, b)
    return frozenset(out)


def choose_extensions(state: StepState, node: int,
                      free_edge_cap: int = DEFAULT_FREE_EDGE_CAP) -> ExtensionChoice:
    """Optimal assignment of free edges to the node's child cones.

    An edge is free for a child when neither cone of that tree edge holds
    it; each free edge may move into at most one child for which it is
    free.  Objectives, in order: minimum boundary of the resulting local
    partition, minimum number of moved edges, lexicographically least
    assignment vector.  The search is exhaustive (with pruning by the
    boundary forced so far), so a cap bounds the free-edge count.
    """
    g = state.host
    tree = state.tree
    children = tree.children[node]
    full = g.full_mask
    m_free = [
        full & ~(state.gamma[(node, c)] | state.gamma[(c, node)]) for c in children
    ]
    free_union = 0
    for m in m_free:
        free_union |= m
    free_edges = list(g.edge_ids(free_union))
    if len(free_edges) > free_edge_cap:
        raise BudgetExceededError(
            f"{len(free_edges)} free edges at node {node} exceed the cap {free_edge_cap}"
        )

    neighbors = tree.neighbors(node)
    child_block_index = {c: neighbors.index(c) for c in children}
    blocks0 = [state.gamma[(node, u)] for u in neighbors]
    block_of_edge: dict[int, int] = {}
    for bi, b in enumerate(blocks0):
        for e in g.edge_ids(b):
            block_of_edge[e] = bi
    options = [
        [None] + [j for j, m in enumerate(m_free) if m >> e & 1] for e in free_edges
    ]

    def boundary_count(blocks: list[int]) -> int:
        count = 0
        for v in g.vertices:
            inc = g.incident_mask(v)
            hit = 0
            for b in blocks:
                if inc & b:
                    hit += 1
                    if hit == 2:
                        count += 1
                        break
        return count

    best: list = [None, None, None]  # boundary, |F|, assignment tuple

    def evaluate(assign: list[int | None]) -> tuple[int, int]:
        blocks = list(blocks0)
        moved = 0
        for e, j in zip(free_edges, assign):
            if j is None:
                continue
            moved += 1
            bit = 1 << e
            src = block_of_edge.get(e)
            if src is not None:
                blocks[src] &= ~bit
            blocks[child_block_index[children[j]]] |= bit
        return boundary_count(blocks), moved

    def forced_boundary(assign: list[int | None], depth: int) -> int:
        # Vertices already split between two decided blocks stay boundary
        # no matter how the remaining free edges are assigned.
        blocks = list(blocks0)
        undecided = 0
        for idx, e in enumerate(free_edges):
            bit = 1 << e
            if idx < depth:
                j = assign[idx]
                if j is not None:
                    src = block_of_edge.get(e)
                    if src is not None:
                        blocks[src] &= ~bit
                    blocks[child_block_index[children[j]]] |= bit
            else:
                undecided |= bit
                src = block_of_edge.get(e)
                if src is not None:
                    blocks[src] &= ~bit
        count = 0
        for v in g.vertices:
            inc = g.incident_mask(v) & ~undecided
            hit = 0
            for b in blocks:
                if inc & b:
                    hit += 1
                    if hit == 2:
                        count += 1
                        break
        return count

    assign: list[int | None] = [None] * len(free_edges)

    def search(depth: int, moved: int) -> None:
        if best[0] is not None:
            forced = forced_boundary(assign, depth)
            if forced > best[0] or (forced == best[0] and moved > best[1]):
                return
        if depth == len(free_edges):
            b_size, n_moved = evaluate(assign)
            key = (b_size, n_moved)
            if best[0] is None or key < (best[0], best[1]):
                best[0], best[1] = key
                best[2] = tuple(assign)
            return
        for j in options[depth]:
            assign[depth] = j
            search(depth + 1, moved + (j is not None))
        assign[depth] = None

    search(0, 0)
    chosen = best[2]
    f_masks = [0] * len(children)
    for e, j in zip(free_edges, chosen):
        if j is not None:
            f_masks[j] |= 1 << e
    f_union = 0
    for m in f_masks:
        f_union |= m
    f_star = tuple((m | f_union) & ~fj for m, fj in zip(m_free, f_masks))
    return ExtensionChoice(tuple(children), tuple(f_masks), f_union, f_star, best[0])


def apply_step(state: StepState, node: int, choice: ExtensionChoice | None) -> StepState:
    """Process one node: reassign free edges below it and push the change
    through the processed region.  Leaf nodes are identity steps.

    The result is axiom-checked; a violation is an internal error.
    """
    tree = state.tree
    g = state.host
    processed = state.processed + (node,)
    if not tree.children[node]:
        new_state = StepState(tree, g, state.index + 1, state.beta, dict(state.gamma), processed)
        return new_state
    if choice is None:
        raise ValueError("internal nodes need an extension choice")

    f = choice.f_union
    f_by_child = dict(zip(choice.children, choice.f))
    f_star_by_child = dict(zip(choice.children, choice.f_star))
    scope = set(processed)
    for t in processed:
        scope.update(tree.neighbors(t))

    gamma = dict(state.gamma)
    for p in sorted(scope):
        for c in tree.children[p]:
            down = state.gamma[(p, c)]
            up = state.gamma[(c, p)]
            if p == node:
                fj = f_by_child[c]
                gamma[(p, c)] = (down & ~f) | fj
                gamma[(c, p)] = up | f_star_by_child[c]
            elif p in f_by_child:
                gamma[(p, c)] = down & ~f_star_by_child[p]
            elif tree.is_ancestor(c, node):
                gamma[(p, c)] = down | f
                gamma[(c, p)] = up & ~f
            else:
                # The moved edges leave every block of p's partition other
                # than the one toward the processed node.  A child outside
                # the region is not re-balanced itself: only the cone seen
                # from p changes, its own cones stay put.
                gamma[(p, c)] = down & ~f
                if c in scope:
                    gamma[(c, p)] = up | f

    interim = StepState(tree, g, state.index + 1, state.beta, gamma, processed)
    beta = tuple(
        _delta(interim, t) if t in scope else state.beta[t] for t in tree.nodes
    )
    new_state = StepState(tree, g, state.index + 1, beta, gamma, processed)
    report = validate_ptd(new_state.as_ptd())
    if not report.ok:
        raise ConsistencyError(
            f"axiom violated after processing node {node}:\n{report}"
        )
    return new_state


def verify_step(prev: StepState, next_state: StepState, original: StrategyTree) -> Report:
    """Re-check every per-step property the width/depth argument relies on."""
    report = Report()
    tree = next_state.tree
    node = next_state.processed[-1]
    scope_prev = prev.scope()
    scope_next = next_state.scope()
    beta0 = original.ptd.bags
    gamma0 = original.ptd.cones

    ptd_next = next_state.as_ptd()
    report.merge(validate_ptd(ptd_next))

    for p, c in tree.edges():
        if p in scope_next and c in scope_next:
            if not is_exact_edge(ptd_next, p, c):
                report.add("exactness", f"edge {p}-{c}",
                           "processed-region edge is not exact")

    processed = set(next_state.processed)
    for x in tree.nodes:
        if x in processed:
            continue
        for c in tree.children[x]:
            extra = next_state.gamma[(x, c)] & ~gamma0[(x, c)]
            if extra:
                report.add(
                    "only-remove", f"edge {x}-{c}",
                    f"unprocessed parent's cone gained edges {next_state.host.edge_ids(extra)}",
                )

    node_children = set(tree.children[node])
    for p, c in tree.edges():
        down_was, down_now = prev.gamma[(p, c)], next_state.gamma[(p, c)]
        up_was, up_now = prev.gamma[(c, p)], next_state.gamma[(c, p)]
        if p not in scope_next and c not in scope_next:
            if down_was != down_now or up_was != up_now:
                report.add("locality", f"edge {p}-{c}",
                           "cone changed outside the processed region")
        if (p in scope_next and c in scope_next
                and p not in node_children and c not in node_children):
            # Away from the processed node's child edges, one direction
            # gains exactly what the other loses.
            if down_now & ~down_was != up_was & ~up_now or \
                    up_now & ~up_was != down_was & ~down_now:
                report.add("balance", f"edge {p}-{c}",
                           "cone transfer between directions is unbalanced")

    for t in tree.nodes:
        if len(next_state.beta[t]) > len(prev.beta[t]):
            report.add("width", f"node {t}",
                       f"bag grew from {sorted(prev.beta[t])} to {sorted(next_state.beta[t])}")
    wid0 = ptd_width(original.ptd)
    if ptd_width(ptd_next) > wid0:
        report.add("width", "global", f"width {ptd_width(ptd_next)} exceeds original {wid0}")

    def path_sum(beta, t) -> int:
        total = 0
        for s in tree.path_from_root(t):
            if s != tree.root:
                total += len(beta[s] - beta[tree.parent[s]])
        return total

    for t in sorted(scope_next):
        if path_sum(next_state.beta, t) > path_sum(beta0, t):
            report.add("depth", f"node {t}",
                       f"path sum {path_sum(next_state.beta, t)} exceeds original "
                       f"{path_sum(beta0, t)}")

    children = tree.children[node]
    for c in children:
        new_here = next_state.beta[c] - next_state.beta[node]
        orig_here = beta0[c] - beta0[node]
        if not new_here <= orig_here:
            report.add("claim-child-new", f"node {c}",
                       f"{sorted(new_here - orig_here)} newly placed here but not originally")

    for t in sorted(scope_prev):
        gained = next_state.beta[t] - prev.beta[t]
        if gained:
            for t_star in tree.path_between(t, node):
                missing = gained - next_state.beta[t_star]
                if missing:
                    report.add(
                        "claim-gained-on-path", f"node {t}",
                        f"vertices {sorted(missing)} gained at {t} but absent at {t_star}",
                    )
        lost = prev.beta[t] - next_state.beta[t]
        if lost:
            for t_star in sorted(scope_prev):
                if t in tree.path_between(t_star, node):
                    still = lost & next_state.beta[t_star]
                    if still:
                        report.add(
                            "claim-lost-behind", f"node {t}",
                            f"vertices {sorted(still)} lost at {t} but present at {t_star}",
                        )

    for t in sorted(scope_prev):
        union_prev: set[int] = set()
        union_next: set[int] = set()
        for s in tree.path_from_root(t):
            union_prev |= prev.beta[s]
            union_next |= next_state.beta[s]
        u_new = union_next - union_prev
        t_star = tree.gca(t, node)
        w_gone = prev.beta[t_star] - next_state.beta[t_star]
        if len(u_new) > len(w_gone):
            report.add(
                "exchange", f"node {t}",
                f"|U|={len(u_new)} exceeds |W|={len(w_gone)} at ancestor {t_star}",
            )
    return report


def iterate_steps(st: StrategyTree,
                  free_edge_cap: int = DEFAULT_FREE_EDGE_CAP,
                  ) -> Iterator[tuple[int, StepState, StepState, ExtensionChoice | None]]:
    """Yield (node, state before, state after, choice) for every step."""
    state = initial_state(st.ptd)
    for node in bfs_order(st):
        choice = None
        if st.ptd.tree.children[node]:
            choice = choose_extensions(state, node, free_edge_cap)
        after = apply_step(state, node, choice)
        yield node, state, after, choice
        state = after


def run(st: StrategyTree, verify: bool = False,
        free_edge_cap: int = DEFAULT_FREE_EDGE_CAP,
        trace: Callable[[str], None] | None = None) -> PreTreeDecomposition:
    """Exactify a strategy tree.

    The result is an exact pre-tree decomposition whose width and depth do
    not exceed the input's.  With verify=True every step is re-checked and
    a non-empty report raises ConsistencyError.
    """
    final = None
    g = st.ptd.host
    for node, before, after, choice in iterate_steps(st, free_edge_cap):
        if verify:
            report = verify_step(before, after, st)
            if not report.ok:
                raise ConsistencyError(f"step {after.index} at node {node}:\n{report}")
        if trace is not None:
            fs = "{" + ";".join(str(list(g.edge_ids(m))) for m in choice.f) + "}" if choice else "{}"
            ptd_now = after.as_ptd()
            trace(
                f"step {after.index} node {node} F={fs} "
                f"width={ptd_width(ptd_now)} depth={ptd_depth(ptd_now)}"
            )
        final = after
    result = final.as_ptd() if final is not None else st.ptd
    if not is_exact(result):
        raise ConsistencyError("construction finished but the result is not exact")
    if ptd_width(result) > ptd_width(st.ptd) or ptd_depth(result) > ptd_depth(st.ptd):
        raise ConsistencyError("construction enlarged width or depth")
    return result


def check_branching_depth_bound(result: PreTreeDecomposition, st: StrategyTree) -> bool:
    """Final depth is at most the maximum number of branching nodes on any
    root-to-leaf path of the original tree."""
    tree = st.ptd.tree
    if tree.size == 0:
        return ptd_depth(result) == 0
    bound = 0
    for leaf in tree.leaves():
        count = sum(1 for t in tree.path_from_root(leaf) if t in st.branching)
        bound = max(bound, count)
    return ptd_depth(result) <= bound


@dataclass
class PipelineResult:
    member: bool
    td: TreeDecomposition | None
    robber_certificate: RobberStrategy | None
    strategy_tree: StrategyTree | None = None
    exact_ptd: PreTreeDecomposition | None = None
    placements_bound: int | None = None
    fuzz_injected: int = 0


def monotonize_pipeline(g: Graph, k: int, q: int, *,
                        monotone_solver: bool = False,
                        fuzz_slack: int = 0, seed: int = 0,
                        verify: bool = False,
                        budget: int | None = None,
                        free_edge_cap: int = DEFAULT_FREE_EDGE_CAP) -> PipelineResult:
    """Solve the game on the closure, turn a winning strategy into a tree,
    exactify it, and convert to a tree decomposition of g.

    On a robber win the result carries the robber's certificate instead.
    With fuzz_slack > 0 the strategy is perturbed with redundant detours
    first; the decomposition bounds then hold for q + injected placements.
    """
    gc = closure(g)
    cfg = GameConfig(k, q, monotone=monotone_solver)
    res = solve(gc, cfg, budget)
    if res.winner == "robber":
        assert isinstance(res.strategy, RobberStrategy)
        return PipelineResult(False, None, res.strategy)
    sigma = res.strategy
    assert isinstance(sigma, Strategy)
    bound = q
    injected = 0
    if fuzz_slack:
        fz = fuzz_nonmonotone(gc, sigma, GameConfig(k, q), fuzz_slack, seed)
        sigma = fz.strategy
        bound = fz.placements_bound
        injected = fz.injected
    st = build(gc, sigma, GameConfig(k, bound))
    exact = run(st, verify=verify, free_edge_cap=free_edge_cap)
    td = to_tree_decomposition(exact, g)
    report = validate_td(td)
    if not report.ok:
        raise ConsistencyError(f"pipeline produced an invalid decomposition:\n{report}")
    return PipelineResult(True, td, None, st, exact, bound, injected)
