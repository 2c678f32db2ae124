"""Ordered partitions of a graph's edge set and their boundary width.

Blocks are addressed by index because the same edge set may legitimately
occur as several blocks (empty blocks in particular).  Complements are
always taken relative to the host's full edge set, self-loops included.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotApplicableError
from .graphs import Graph, boundary


@dataclass(frozen=True)
class EdgePartition:
    """A partition of E(host) into an ordered tuple of edge masks."""

    host: Graph
    blocks: tuple[int, ...]

    def __post_init__(self):
        union = 0
        for b in self.blocks:
            if b & union:
                raise ValueError("blocks overlap")
            union |= b
        if union != self.host.full_mask:
            raise ValueError("blocks do not cover the edge set")

    def block(self, i: int) -> int:
        return self.blocks[i]

    def __len__(self) -> int:
        return len(self.blocks)

    def edge_lists(self) -> list[list[int]]:
        """Debug view: blocks as lists of edge ids."""
        return [list(self.host.edge_ids(b)) for b in self.blocks]


def f_extension(p: EdgePartition, block_index: int, f: int) -> EdgePartition:
    """Move the edges of f into the chosen block and out of every other."""
    if not 0 <= block_index < len(p.blocks):
        raise IndexError(f"block index {block_index} out of range")
    if f & ~p.host.full_mask:
        raise ValueError("f contains edge ids outside the host")
    blocks = tuple(
        b | f if i == block_index else b & ~f for i, b in enumerate(p.blocks)
    )
    return EdgePartition(p.host, blocks)


def partition_boundary(p: EdgePartition) -> frozenset[int]:
    """Union of the edge-set boundaries of all blocks."""
    out: set[int] = set()
    for b in p.blocks:
        out |= boundary(p.host, b)
    return frozenset(out)


def partition_width(p: EdgePartition) -> int:
    return len(partition_boundary(p))


def check_submodularity_instance(
    p: EdgePartition, q: EdgePartition, x_index: int, y_index: int
) -> bool:
    """Whether wid(P)+wid(Q) >= wid(P with X extended by the complement of Y)
    + wid(Q with Y extended by the complement of X).

    Only defined when X and Y do not jointly cover the edge set.
    """
    if p.host != q.host:
        raise ValueError("partitions must share a host graph")
    full = p.host.full_mask
    x = p.block(x_index)
    y = q.block(y_index)
    if x | y == full:
        raise NotApplicableError("X and Y cover every edge; inequality not applicable")
    lhs = partition_width(p) + partition_width(q)
    rhs = partition_width(f_extension(p, x_index, full & ~y)) + partition_width(
        f_extension(q, y_index, full & ~x)
    )
    return lhs >= rhs
