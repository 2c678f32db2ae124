"""Command-line interface.

Subcommands: decide membership with optional certificate, solve a game,
exactify a strategy-tree file, verify artifacts, sweep the equivalence of
the game variants over a corpus, and play interactively against the solver.

Exit codes follow a 0/1/2 contract where a yes/no answer exists: 0 for the
positive answer (member, valid, all-agree), 1 for the negative one, 2 for
errors such as unreadable files or exhausted search budgets.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import __version__
from .corpus import parse_corpus_spec
from .errors import BdtwError
from .game import (
    GameConfig,
    Strategy,
    _Solver,
    _vmask,
    format_round,
    initial_parts,
    is_capture_mask,
    legal_cop_moves,
    legal_robber_responses,
    GamePosition,
    minimum_placements,
    solve,
)
from .graphs import Graph, closure, read_graph
from .monotonize import monotonize_pipeline, run
from .pre_tree import read_ptd, validate_ptd, write_ptd, ptd_depth, ptd_width
from .strategy_tree import read_strategy_tree
from .tree_decomp import read_td, td_depth, td_width, validate_td, write_td

BUDGET_ENV = "BDTW_BUDGET"


def _default_budget(args) -> int | None:
    if args.budget is not None:
        return args.budget
    env = os.environ.get(BUDGET_ENV)
    return int(env) if env else None


def _load_graph(path: str) -> Graph:
    with open(path) as f:
        return read_graph(f)


def _fmt_set(vs) -> str:
    return "{" + ",".join(str(v) for v in sorted(vs)) + "}"


def cmd_decide(args) -> int:
    g = _load_graph(args.graph)
    budget = _default_budget(args)
    if args.certificate or args.via_nonmonotone:
        result = monotonize_pipeline(
            g, args.k, args.q,
            monotone_solver=not args.via_nonmonotone,
            verify=args.verify, budget=budget, seed=args.seed,
        )
        member = result.member
        if member and args.certificate:
            with open(args.certificate, "w") as f:
                if args.format == "ptd":
                    write_ptd(result.exact_ptd, f)
                else:
                    write_td(result.td, f)
    else:
        cost = minimum_placements(closure(g), args.k, False, args.q, budget)
        member = cost is not None
    print(f"{'IN' if member else 'NOT IN'} T^{args.k}_{args.q}")
    return 0 if member else 1


def cmd_solve(args) -> int:
    g = _load_graph(args.graph)
    if args.closure:
        g = closure(g)
    cfg = GameConfig(args.k, args.q, monotone=args.monotone)
    result = solve(g, cfg, _default_budget(args))
    print(f"winner: {result.winner}")
    print(f"positions: {result.position_count}")
    if args.strategy_out and isinstance(result.strategy, Strategy):
        with open(args.strategy_out, "w") as f:
            for (cops, part), nxt in sorted(
                result.strategy.moves.items(), key=lambda kv: (sorted(kv[0][0]), kv[0][1])
            ):
                part_ids = ",".join(str(e) for e in g.edge_ids(part))
                f.write(f"({_fmt_set(cops)} | {{{part_ids}}}) -> {_fmt_set(nxt)}\n")
        print(f"strategy dump written to {args.strategy_out}")
    return 0


def cmd_monotonize(args) -> int:
    with open(args.tree) as f:
        st = read_strategy_tree(f)
    trace = (lambda line: print(line, file=sys.stderr)) if args.trace else None
    exact = run(st, verify=args.verify, trace=trace)
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        write_ptd(exact, out)
    finally:
        if args.output:
            out.close()
    print(
        f"exact: width={ptd_width(exact)} depth={ptd_depth(exact)}",
        file=sys.stderr,
    )
    return 0


def _sniff_kind(path: str) -> str:
    with open(path) as f:
        for raw in f:
            line = raw.strip()
            if not line or line.startswith("c"):
                continue
            tag = line.split()[0]
            if tag == "s":
                return "td"
            if tag in ("B", "m"):
                return "st"
    return "ptd"


def cmd_verify(args) -> int:
    kind = args.type
    if kind == "auto":
        kind = _sniff_kind(args.artifact)
    if kind == "td":
        if not args.graph:
            print("error: verifying a .td file needs --graph", file=sys.stderr)
            return 2
        host = _load_graph(args.graph)
        with open(args.artifact) as f:
            td = read_td(f, host)
        report = validate_td(td)
        extra = f"width={td_width(td)} depth={td_depth(td)}"
    else:
        with open(args.artifact) as f:
            artifact = read_strategy_tree(f) if kind == "st" else read_ptd(f)
        ptd = artifact.ptd if kind == "st" else artifact
        report = validate_ptd(ptd)
        extra = f"width={ptd_width(ptd)} depth={ptd_depth(ptd)}"
    if report.ok:
        print(f"ok ({kind}, {extra})")
        return 0
    print(report)
    return 1


def _parse_range(text: str) -> range:
    if "-" in text:
        lo, _, hi = text.partition("-")
        return range(int(lo), int(hi) + 1)
    return range(int(text), int(text) + 1)


def _equivalence_worker(item):
    name, n, edges, k, q_max, budget = item
    g = Graph(n, edges)
    gc = closure(g)
    answers = {}
    for label, host in (("plain", g), ("closure", gc)):
        for monotone in (False, True):
            cost = minimum_placements(host, k, monotone, q_max, budget)
            answers[(label, monotone)] = cost
    rows = []
    for q in range(1, q_max + 1):
        wins = {key: c is not None and c <= q for key, c in answers.items()}
        agree = len(set(wins.values())) == 1
        rows.append((name, k, q, agree))
    return rows


def cmd_equivalence(args) -> int:
    instances = []
    for spec_text in args.corpus:
        spec = parse_corpus_spec(spec_text, args.seed)
        instances.extend(spec.instances())
    ks = _parse_range(args.k)
    qs = _parse_range(args.q)
    q_max = max(qs)
    budget = _default_budget(args)
    items = [
        (name, g.n, g.edges, k, q_max, budget)
        for name, g in instances
        for k in ks
    ]
    start = time.monotonic()
    if args.jobs > 1:
        import multiprocessing

        with multiprocessing.Pool(args.jobs) as pool:
            all_rows = pool.map(_equivalence_worker, items)
    else:
        all_rows = [_equivalence_worker(item) for item in items]
    elapsed = time.monotonic() - start
    checked = 0
    disagreements = []
    for rows in all_rows:
        for name, k, q, agree in rows:
            if q not in qs:
                continue
            checked += 1
            if not agree:
                disagreements.append((name, k, q))
    print(f"instances: {len(instances)}  grid points: {checked}  "
          f"disagreements: {len(disagreements)}  elapsed: {elapsed:.1f}s")
    for name, k, q in disagreements:
        print(f"DISAGREE {name} k={k} q={q}")
    return 1 if disagreements else 0


def _choose_robber_response(solver: _Solver, q: int, x_mask: int, part: int,
                            used: int, new_mask: int) -> int | None:
    """Best surviving part, else the part postponing capture the longest."""
    best = None
    g = solver.g
    for q_mask in solver._resp(x_mask, part, new_mask):
        if is_capture_mask(g, new_mask, q_mask):
            continue
        left = q - used - 1
        cost = solver.cost(new_mask, q_mask, left) if left > 0 else None
        if left <= 0 or cost is None:
            return q_mask
        if best is None or cost > best[0]:
            best = (cost, q_mask)
    return best[1] if best else None


def cmd_play(args) -> int:
    g = _load_graph(args.graph)
    if args.closure:
        g = closure(g)
    cfg = GameConfig(args.k, args.q)
    solver = _Solver(g, cfg.k, cfg.monotone, _default_budget(args))
    stdin = args._stdin if hasattr(args, "_stdin") else sys.stdin
    log_lines: list[str] = []

    def emit(line: str) -> None:
        print(line)
        log_lines.append(line)

    starts = initial_parts(g)
    if not starts:
        emit("the graph has no edges; cops win immediately")
        return _write_log(args, log_lines)

    if args.side == "robber":
        emit("choose a starting component:")
        for i, p in enumerate(starts):
            emit(f"  [{i}] {g.format_edges(p)}")
        part = starts[_read_index(stdin, emit, len(starts))]
    else:
        part = max(starts, key=lambda p: (solver.cost(0, p, cfg.q) is None,
                                          solver.cost(0, p, cfg.q) or 0, p))
        emit(f"robber starts in {g.format_edges(part)}")

    cops: frozenset[int] = frozenset()
    used = 0
    round_no = 0
    while True:
        emit(format_round(g, round_no, cops, used, part))
        if used >= cfg.q:
            emit("placements exhausted: robber wins")
            break
        pos = GamePosition(cops, part, used)
        moves = legal_cop_moves(g, cfg, pos)
        if args.side == "cop":
            emit("your move: 'place <v> [remove <v...>]' or 'quit'")
            new_cops = _read_cop_move(stdin, emit, cops, moves)
            if new_cops is None:
                emit("session ended")
                break
        else:
            x_mask = _vmask(cops)
            best = None
            for m in moves:
                m_mask = _vmask(m)
                worst = 0
                winning = True
                for q_mask in solver._resp(x_mask, part, m_mask):
                    if is_capture_mask(g, m_mask, q_mask):
                        continue
                    c = solver.cost(m_mask, q_mask, cfg.q - used - 1)
                    if c is None:
                        winning = False
                        break
                    worst = max(worst, c)
                key = (not winning, worst, tuple(sorted(m)))
                if best is None or key < best[0]:
                    best = (key, m)
            new_cops = best[1]
            emit(f"cops move to {_fmt_set(new_cops)}")
        used += 1
        round_no += 1
        responses = legal_robber_responses(g, GamePosition(cops, part, used - 1), new_cops)
        live = [p for p in responses if not is_capture_mask(g, _vmask(new_cops), p)]
        if args.side == "robber":
            if not live:
                cops = new_cops
                part = responses[0]
                emit(format_round(g, round_no, cops, used, part))
                emit("captured: cops win")
                break
            emit("choose your part:")
            for i, p in enumerate(live):
                emit(f"  [{i}] {g.format_edges(p)}")
            idx = _read_index(stdin, emit, len(live))
            cops, part = new_cops, live[idx]
        else:
            choice = _choose_robber_response(solver, cfg.q, _vmask(cops), part, used - 1,
                                             _vmask(new_cops))
            if choice is None:
                cops = new_cops
                part = responses[0]
                emit(format_round(g, round_no, cops, used, part))
                emit("captured: cops win")
                break
            cops, part = new_cops, choice
            emit(f"robber moves to {g.format_edges(part)}")
    return _write_log(args, log_lines)


def _write_log(args, lines: list[str]) -> int:
    if args.log:
        with open(args.log, "w") as f:
            f.write("\n".join(lines) + "\n")
    return 0


def _read_index(stdin, emit, n: int) -> int:
    while True:
        raw = stdin.readline()
        if not raw:
            raise EOFError("input ended mid-session")
        token = raw.strip()
        if token.isdigit() and int(token) < n:
            return int(token)
        emit(f"enter a number in 0..{n - 1}")


def _read_cop_move(stdin, emit, cops, moves) -> frozenset[int] | None:
    legal = set(moves)
    while True:
        raw = stdin.readline()
        if not raw:
            raise EOFError("input ended mid-session")
        tokens = raw.split()
        if not tokens:
            continue
        if tokens[0] == "quit":
            return None
        try:
            place_at = tokens.index("place")
            v = int(tokens[place_at + 1])
            removed = set()
            if "remove" in tokens:
                rem_at = tokens.index("remove")
                removed = {int(t) for t in tokens[rem_at + 1:] if t.isdigit()}
            candidate = frozenset((set(cops) - removed) | {v})
        except (ValueError, IndexError):
            emit("could not parse; use 'place <v> [remove <v...>]'")
            continue
        if candidate in legal:
            return candidate
        emit("illegal move, try again")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bdtw",
        description="bounded-depth treewidth via the placement-limited cops-and-robber game",
    )
    parser.add_argument("--version", action="version", version=f"bdtw {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide membership, optionally with a certificate")
    p.add_argument("graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--certificate", metavar="FILE")
    p.add_argument("--via-nonmonotone", action="store_true",
                   help="certify through the non-monotone solver plus exactification")
    p.add_argument("--verify", action="store_true", help="re-check every construction step")
    p.add_argument("--format", choices=["td", "ptd"], default="td")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("solve", help="solve one game instance")
    p.add_argument("graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--monotone", action="store_true")
    p.add_argument("--closure", action="store_true", help="play on the closure graph")
    p.add_argument("--strategy-out", metavar="FILE")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("monotonize", help="exactify a strategy-tree file")
    p.add_argument("tree")
    p.add_argument("-o", "--output", metavar="FILE")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_monotonize)

    p = sub.add_parser("verify", help="validate a decomposition artifact")
    p.add_argument("artifact")
    p.add_argument("--graph", metavar="FILE", help="host graph for .td artifacts")
    p.add_argument("--type", choices=["td", "ptd", "st", "auto"], default="auto")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("equivalence", help="check the game variants agree over a corpus")
    p.add_argument("--corpus", action="append", required=True,
                   help="e.g. all-graphs:3, paths:2-5, named:K4,C5 (repeatable)")
    p.add_argument("--k", required=True, help="value or range, e.g. 1-3")
    p.add_argument("--q", required=True, help="value or range, e.g. 1-5")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_equivalence)

    p = sub.add_parser("play", help="play one side against the solver")
    p.add_argument("graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--as", dest="side", choices=["robber", "cop"], required=True)
    p.add_argument("--closure", action="store_true")
    p.add_argument("--log", metavar="FILE")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_play)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BdtwError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
