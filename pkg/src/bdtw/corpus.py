"""Small-graph corpus generation for sweeps and tests."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graphs import Graph


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])

def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])

def star_graph(n: int) -> Graph:
    """One center (vertex 0) and n-1 rays."""
    return Graph(n, [(0, i) for i in range(1, n)])

def complete_graph(n: int) -> Graph:
    return Graph(n, list(itertools.combinations(range(n), 2)))

def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])

def grid_graph(rows: int, cols: int) -> Graph:
    def vid(r, c):
        return r * cols + c

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return Graph(rows * cols, edges)


def all_graphs(n: int) -> list[Graph]:
    """All labeled loop-free graphs on exactly n vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    out = []
    for bits in range(1 << len(pairs)):
        out.append(Graph(n, [p for i, p in enumerate(pairs) if bits >> i & 1]))
    return out


NAMED = {
    "E1": lambda: Graph(2, [(0, 1)]),
    "P3": lambda: path_graph(3),
    "P4": lambda: path_graph(4),
    "P5": lambda: path_graph(5),
    "P6": lambda: path_graph(6),
    "C3": lambda: cycle_graph(3),
    "C4": lambda: cycle_graph(4),
    "C5": lambda: cycle_graph(5),
    "C6": lambda: cycle_graph(6),
    "K2": lambda: complete_graph(2),
    "K3": lambda: complete_graph(3),
    "K4": lambda: complete_graph(4),
    "K2,3": lambda: complete_bipartite(2, 3),
    "GRID2x3": lambda: grid_graph(2, 3),
}


def named_graph(name: str) -> Graph:
    try:
        return NAMED[name]()
    except KeyError:
        raise ValueError(f"unknown graph name {name!r}; known: {sorted(NAMED)}") from None


@dataclass(frozen=True)
class CorpusSpec:
    """A parsed corpus description, e.g. 'all-graphs:3', 'paths:2-5',
    'cycles:3-6', 'stars:3-5', 'complete:2-4', 'grids:2x2-2x3'."""

    family: str
    params: tuple
    seed: int = 0

    def instances(self) -> list[tuple[str, Graph]]:
        fam, params = self.family, self.params
        out: list[tuple[str, Graph]] = []
        if fam == "all-graphs":
            (n,) = params
            for i, g in enumerate(all_graphs(n)):
                out.append((f"all-graphs-{n}#{i}", g))
        elif fam == "named":
            for name in params:
                out.append((name, named_graph(name)))
        else:
            makers = {
                "paths": path_graph,
                "cycles": cycle_graph,
                "stars": star_graph,
                "complete": complete_graph,
            }
            if fam in makers:
                lo, hi = params
                for n in range(lo, hi + 1):
                    out.append((f"{fam}-{n}", makers[fam](n)))
            elif fam == "grids":
                (dims,) = params
                for r, c in dims:
                    out.append((f"grid-{r}x{c}", grid_graph(r, c)))
            else:
                raise ValueError(f"unknown corpus family {fam!r}")
        return out


def parse_corpus_spec(text: str, seed: int = 0) -> CorpusSpec:
    if ":" not in text:
        if text in NAMED:
            return CorpusSpec("named", (text,), seed)
        raise ValueError(f"corpus spec {text!r} needs 'family:params' or a graph name")
    family, _, arg = text.partition(":")
    family = family.strip()
    arg = arg.strip()
    if family == "all-graphs":
        return CorpusSpec(family, (int(arg),), seed)
    if family == "named":
        return CorpusSpec(family, tuple(s.strip() for s in arg.split(",")), seed)
    if family == "grids":
        dims = []
        for chunk in arg.split(","):
            r, _, c = chunk.partition("x")
            dims.append((int(r), int(c)))
        return CorpusSpec(family, (tuple(dims),), seed)
    if family in ("paths", "cycles", "stars", "complete"):
        if "-" in arg:
            lo, _, hi = arg.partition("-")
            return CorpusSpec(family, (int(lo), int(hi)), seed)
        return CorpusSpec(family, (int(arg), int(arg)), seed)
    raise ValueError(f"unknown corpus family {family!r}")
