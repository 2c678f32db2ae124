"""The placement-limited cops-and-robber game and an exhaustive solver.

A position is (cop set X, robber part, placements used).  The robber part is
the edge mask of the part of the edge component graph under X that holds the
robber's edge; two robber edges in the same part are the same position.  A
cop turn is a macro-move: remove any subset R of X, then place one vertex v
not in X \\ R, which increments the placement counter.  Pure removals are
not offered as turns: they can never capture and any removal folds into the
next placement, which keeps the search well-founded on the counter.  In the
monotone variant a macro-move is legal only if the robber part does not grow
at its removal stage.

The solver computes, per (cop set, part), the interval of placement budgets
for which the position is known lost/won, so one run answers every q up to
a cap.  All iteration orders are canonical; results are deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .errors import BudgetExceededError, StrategyError
from .graphs import Graph, part_table

DEFAULT_BUDGET = 50_000_000


@dataclass(frozen=True)
class GameConfig:
    k: int
    q: int
    monotone: bool = False

    def __post_init__(self):
        if self.k < 1 or self.q < 1:
            raise ValueError("k and q must be at least 1")


@dataclass(frozen=True)
class GamePosition:
    cops: frozenset[int]
    robber: int
    placements_used: int


@dataclass
class Strategy:
    """A positional cop strategy: (cop set, robber part mask) -> next cop set."""

    moves: dict[tuple[frozenset[int], int], frozenset[int]] = field(default_factory=dict)

    def next_cops(self, cops: frozenset[int], robber: int) -> frozenset[int]:
        try:
            return self.moves[(cops, robber)]
        except KeyError:
            raise StrategyError(
                f"strategy undefined at cops={sorted(cops)} part={robber:#x}"
            ) from None

    def __len__(self) -> int:
        return len(self.moves)


def _vmask(vs: Iterable[int]) -> int:
    mask = 0
    for v in vs:
        mask |= 1 << v
    return mask


def _vset(mask: int) -> frozenset[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def _part_of(g: Graph, x_mask: int, p_mask: int) -> int:
    """Edge mask of the part under x_mask containing the nonempty part p_mask."""
    e = (p_mask & -p_mask).bit_length() - 1
    table = part_table(g, x_mask)
    return table.masks[table.of_edge[e]]


def _macro_moves(g: Graph, k: int, monotone: bool, x_mask: int, p_mask: int) -> list[int]:
    """Distinct legal follow-up cop sets, ascending as bitmasks."""
    out: set[int] = set()
    n = g.n
    r = x_mask
    while True:
        mid = x_mask & ~r
        if mid.bit_count() < k:
            if not monotone or _part_of(g, mid, p_mask) == p_mask:
                for v in range(n):
                    bit = 1 << v
                    if not mid & bit:
                        out.add(mid | bit)
        if r == 0:
            break
        r = (r - 1) & x_mask
    return sorted(out)


def _responses(g: Graph, x_mask: int, p_mask: int, new_mask: int) -> tuple[int, ...]:
    """Nonempty parts under new_mask reachable from the robber part."""
    mid = x_mask & new_mask
    pm = _part_of(g, mid, p_mask)
    table = part_table(g, new_mask)
    return tuple(q for q in table.masks if q and q & ~pm == 0)


def legal_cop_moves(g: Graph, cfg: GameConfig, pos: GamePosition) -> list[frozenset[int]]:
    """All cop sets reachable by one macro-move, or [] once placements run out."""
    if pos.placements_used >= cfg.q:
        return []
    x_mask = _vmask(pos.cops)
    return [_vset(m) for m in _macro_moves(g, cfg.k, cfg.monotone, x_mask, pos.robber)]


def legal_robber_responses(g: Graph, pos: GamePosition, new_cops: frozenset[int]) -> list[int]:
    """Part masks under the new cop set the robber may occupy next."""
    return list(_responses(g, _vmask(pos.cops), pos.robber, _vmask(new_cops)))


def is_capture(g: Graph, cops: frozenset[int], robber: int) -> bool:
    """Whether the robber part is a single edge with all endpoints under cops."""
    if robber == 0 or robber & (robber - 1):
        return False
    e = robber.bit_length() - 1
    u, v = g.endpoints(e)
    return u in cops and v in cops


def initial_parts(g: Graph) -> list[int]:
    """Edge masks of the components the robber may start in (nonempty only)."""
    return [m for m in part_table(g, 0).masks if m]


class _Solver:
    """Exhaustive solver for one (graph, k, variant) combination."""

    def __init__(self, g: Graph, k: int, monotone: bool, budget: int | None = None):
        self.g = g
        self.k = k
        self.monotone = monotone
        self.budget = DEFAULT_BUDGET if budget is None else budget
        self.expansions = 0
        # (cops, part) -> [largest budget known lost, smallest budget known won]
        self.bounds: dict[tuple[int, int], list] = {}
        self._moves_cache: dict[tuple[int, int], list[int]] = {}
        self._resp_cache: dict[tuple[int, int], tuple[int, ...]] = {}

    def _moves(self, x_mask: int, p_mask: int) -> list[int]:
        key = (x_mask, p_mask if self.monotone else -1)
        cached = self._moves_cache.get(key)
        if cached is None:
            moves = _macro_moves(self.g, self.k, self.monotone, x_mask, p_mask)
            # Pure placements first: they make progress toward capture.
            moves.sort(key=lambda m: (m & x_mask != x_mask, m))
            cached = self._moves_cache[key] = moves
        return cached

    def _resp(self, x_mask: int, p_mask: int, new_mask: int) -> tuple[int, ...]:
        mid = x_mask & new_mask
        pm = _part_of(self.g, mid, p_mask)
        key = (new_mask, pm)
        cached = self._resp_cache.get(key)
        if cached is None:
            table = part_table(self.g, new_mask)
            cached = self._resp_cache[key] = tuple(
                q for q in table.masks if q and q & ~pm == 0
            )
        return cached

    def win(self, x_mask: int, p_mask: int, b: int) -> bool:
        """Whether the cops capture from (x, part) using at most b placements."""
        if b <= 0:
            return False
        entry = self.bounds.setdefault((x_mask, p_mask), [0, None])
        if b <= entry[0]:
            return False
        if entry[1] is not None and b >= entry[1]:
            return True
        self.expansions += 1
        if self.expansions > self.budget:
            raise BudgetExceededError(
                f"solver expanded {self.expansions} positions (budget {self.budget})"
            )
        g = self.g
        result = False
        for new_mask in self._moves(x_mask, p_mask):
            ok = True
            for q_mask in self._resp(x_mask, p_mask, new_mask):
                if is_capture_mask(g, new_mask, q_mask):
                    continue
                if not self.win(new_mask, q_mask, b - 1):
                    ok = False
                    break
            if ok:
                result = True
                break
        if result:
            if entry[1] is None or b < entry[1]:
                entry[1] = b
        else:
            if b > entry[0]:
                entry[0] = b
        return result

    def cost(self, x_mask: int, p_mask: int, cap: int) -> int | None:
        """Minimum placements to guarantee capture, or None if above cap."""
        entry = self.bounds.setdefault((x_mask, p_mask), [0, None])
        b = entry[0] + 1
        while b <= cap:
            if entry[1] is not None and entry[1] <= cap:
                # Known win at entry[1]; tighten from below.
                if b >= entry[1]:
                    return entry[1]
            if self.win(x_mask, p_mask, b):
                return b
            b = entry[0] + 1
        return None

    def game_cost(self, cap: int) -> int | None:
        """Placements needed against the robber's best initial component."""
        worst = 0
        for p_mask in initial_parts(self.g):
            c = self.cost(0, p_mask, cap)
            if c is None:
                return None
            worst = max(worst, c)
        return worst

    def _candidates(self, x_mask: int, p_mask: int) -> list[tuple[tuple[int, ...], int, int]]:
        """(removal tuple, placement, new mask) triples in tie-break order.

        Only fresh placements are enumerated: a macro-move that re-places a
        just-removed cop shrinks the cop set while spending a placement and
        can never be part of a minimum-cost line.
        """
        xs = sorted(_vset(x_mask))
        subsets = sorted(
            itertools.chain.from_iterable(
                itertools.combinations(xs, r) for r in range(len(xs) + 1)
            )
        )
        out = []
        for rem in subsets:
            mid = x_mask & ~_vmask(rem)
            if mid.bit_count() >= self.k:
                continue
            if self.monotone and _part_of(self.g, mid, p_mask) != p_mask:
                continue
            for v in range(self.g.n):
                bit = 1 << v
                if x_mask & bit or mid & bit:
                    continue
                out.append((rem, v, mid | bit))
        return out

    def extract_cop_strategy(self, q: int) -> Strategy:
        """Canonical positional strategy from all robber-reachable positions.

        At each position the move minimizing the worst response cost is
        chosen, ties broken by lexicographic (removal set, placed vertex).
        """
        sigma = Strategy()
        stack = [(0, p) for p in sorted(initial_parts(self.g), reverse=True)]
        while stack:
            x_mask, p_mask = stack.pop()
            key = (_vset(x_mask), p_mask)
            if key in sigma.moves:
                continue
            c = self.cost(x_mask, p_mask, q)
            if c is None:
                raise StrategyError("position is not winnable within the placement bound")
            chosen = None
            for rem, v, new_mask in self._candidates(x_mask, p_mask):
                responses = self._resp(x_mask, p_mask, new_mask)
                comp = [
                    qm for qm in responses if not is_capture_mask(self.g, new_mask, qm)
                ]
                if all(self.cost(new_mask, qm, c - 1) is not None for qm in comp):
                    chosen = (new_mask, comp)
                    break
            if chosen is None:
                raise StrategyError("no move realizes the computed cost")
            new_mask, comp = chosen
            sigma.moves[key] = _vset(new_mask)
            for qm in sorted(comp, reverse=True):
                stack.append((new_mask, qm))
        return sigma


def is_capture_mask(g: Graph, cops_mask: int, robber: int) -> bool:
    if robber == 0 or robber & (robber - 1):
        return False
    u, v = g.endpoints(robber.bit_length() - 1)
    return bool(cops_mask >> u & 1) and bool(cops_mask >> v & 1)


class RobberStrategy:
    """A robber certificate backed by the solver's position values."""

    def __init__(self, solver: _Solver, q: int):
        self._solver = solver
        self.q = q

    def initial_choice(self) -> int:
        for p_mask in initial_parts(self._solver.g):
            if self._solver.cost(0, p_mask, self.q) is None:
                return p_mask
        raise StrategyError("cop player wins; there is no robber certificate")

    def respond(self, cops: frozenset[int], robber: int, placements_used: int,
                new_cops: frozenset[int]) -> int:
        """A surviving part after the given cop move."""
        s = self._solver
        x_mask = _vmask(cops)
        new_mask = _vmask(new_cops)
        left = self.q - placements_used - 1
        for q_mask in s._resp(x_mask, robber, new_mask):
            if is_capture_mask(s.g, new_mask, q_mask):
                continue
            if left == 0 or not s.win(new_mask, q_mask, left):
                return q_mask
        raise StrategyError("no surviving response; position was already lost")


@dataclass
class SolveResult:
    winner: str  # "cop" | "robber"
    strategy: Strategy | RobberStrategy | None
    position_count: int
    values: dict[tuple[frozenset[int], int], tuple[int, int | None]]


def solve(g: Graph, cfg: GameConfig, budget: int | None = None) -> SolveResult:
    """Decide the game exactly and extract a strategy for the winner."""
    solver = _Solver(g, cfg.k, cfg.monotone, budget)
    starts = initial_parts(g)
    if not starts:
        return SolveResult("cop", Strategy(), 0, {})
    cop_wins = solver.game_cost(cfg.q) is not None
    if cop_wins:
        strategy: Strategy | RobberStrategy = solver.extract_cop_strategy(cfg.q)
    else:
        strategy = RobberStrategy(solver, cfg.q)
    values = {
        (_vset(x), p): (entry[0], entry[1])
        for (x, p), entry in solver.bounds.items()
    }
    return SolveResult(
        "cop" if cop_wins else "robber", strategy, len(solver.bounds), values
    )


def minimum_placements(g: Graph, k: int, monotone: bool, cap: int,
                       budget: int | None = None) -> int | None:
    """Fewest placements with which k cops win, or None if more than cap."""
    return _Solver(g, k, monotone, budget).game_cost(cap)


def winners_agree(g: Graph, k: int, q: int, budget: int | None = None) -> bool:
    """Whether all four game variants (monotone or not, on g or its closure)
    report the same winner."""
    from .graphs import closure

    answers = []
    for host in (g, closure(g)):
        for monotone in (False, True):
            res = minimum_placements(host, k, monotone, q, budget)
            answers.append(res is not None and res <= q)
    return len(set(answers)) == 1


@dataclass
class ReplayResult:
    wins: bool
    max_placements: int
    escape: tuple | None  # a play the strategy fails to win, if any


def replay_cop_strategy(g: Graph, sigma: Strategy, cfg: GameConfig,
                        validate_moves: bool = True) -> ReplayResult:
    """Play sigma against every robber behavior.

    Returns whether every play ends in capture within q placements, the
    maximum placements any play needed, and an escaping play otherwise.
    """
    memo: dict[tuple[int, int, int], int | None] = {}

    def walk(x_mask: int, p_mask: int, used: int, trail: list) -> tuple[int | None, tuple | None]:
        """Max placements to finish all branches from here, or None + witness."""
        key = (x_mask, p_mask, used)
        if key in memo:
            return memo[key], None
        cops = _vset(x_mask)
        if used >= cfg.q:
            return None, tuple(trail + [("survived", cops, p_mask)])
        try:
            new_cops = sigma.next_cops(cops, p_mask)
        except StrategyError:
            return None, tuple(trail + [("undefined", cops, p_mask)])
        new_mask = _vmask(new_cops)
        if validate_moves and new_mask not in _macro_moves(g, cfg.k, cfg.monotone, x_mask, p_mask):
            raise StrategyError(
                f"illegal move {sorted(new_cops)} from cops={sorted(cops)} part={p_mask:#x}"
            )
        worst = used + 1
        for q_mask in _responses(g, x_mask, p_mask, new_mask):
            step = ("move", cops, p_mask, new_cops, q_mask)
            if is_capture_mask(g, new_mask, q_mask):
                continue
            sub, witness = walk(new_mask, q_mask, used + 1, trail + [step])
            if sub is None:
                return None, witness
            worst = max(worst, sub)
        memo[key] = worst
        return worst, None

    overall = 0
    for p_mask in initial_parts(g):
        result, witness = walk(0, p_mask, 0, [("start", frozenset(), p_mask)])
        if result is None:
            return ReplayResult(False, cfg.q, witness)
        overall = max(overall, result)
    return ReplayResult(True, overall, None)


def format_round(g: Graph, i: int, cops: frozenset[int], j: int, robber: int) -> str:
    cop_str = "{" + ",".join(str(v) for v in sorted(cops)) + "}"
    part_str = "{" + ",".join(str(e) for e in g.edge_ids(robber)) + "}"
    return f"round {i}: cops {cop_str} j={j} robber-part {part_str}"
