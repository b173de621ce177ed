"""Bounded breadth-first search over generator products.

A semi-decision procedure: it finds short witnesses but a miss only means
nothing was found within the bounds, never that the target is unreachable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .automata import Witness
from .mat2 import IDENTITY, Mat2, require_sl2
from .words import reduced_form


class SearchBudgetExceeded(RuntimeError):
    """The search visited more nodes than allowed."""


@dataclass(frozen=True)
class SearchConfig:
    max_depth: int = 8
    max_entry_magnitude: Optional[int] = None
    dedupe: bool = True
    max_nodes: Optional[int] = None

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.max_entry_magnitude is not None and self.max_entry_magnitude < 1:
            raise ValueError("max_entry_magnitude must be positive")


def _within(M: Mat2, bound: Optional[int]) -> bool:
    return bound is None or max(abs(M.a), abs(M.b), abs(M.c), abs(M.d)) <= bound


def bfs_search(
    gens: Sequence[Mat2],
    predicate: Callable[[Mat2], bool],
    cfg: SearchConfig = SearchConfig(),
) -> Optional[Witness]:
    """Shortest, then lexicographically least, product satisfying ``predicate``.

    Products have length 0 (the identity) to ``cfg.max_depth``.  Returns None
    when nothing is found within the bounds.
    """
    gens = [require_sl2(M, "generator") for M in gens]
    frontier: list[tuple[Mat2, tuple[int, ...]]] = [(IDENTITY, ())]
    seen = {IDENTITY}
    nodes = 0
    for depth in range(cfg.max_depth + 1):
        nxt = []
        for M, path in frontier:
            nodes += 1
            if cfg.max_nodes is not None and nodes > cfg.max_nodes:
                raise SearchBudgetExceeded(f"more than {cfg.max_nodes} nodes visited")
            if predicate(M):
                red = reduced_form(M)
                return Witness(red.word, red.sign, M, path)
            if depth == cfg.max_depth:
                continue
            for i, G in enumerate(gens, 1):
                P = M @ G
                if not _within(P, cfg.max_entry_magnitude):
                    continue
                if cfg.dedupe:
                    if P in seen:
                        continue
                    seen.add(P)
                nxt.append((P, path + (i,)))
        frontier = nxt
        if not frontier:
            break
    return None


def reachable_set(gens: Sequence[Mat2], depth: int, dedupe: bool = True) -> set[Mat2]:
    """All products of length at most ``depth``."""
    found: set[Mat2] = set()

    def collect(M: Mat2) -> bool:
        found.add(M)
        return False

    bfs_search(gens, collect, SearchConfig(max_depth=depth, dedupe=dedupe))
    return found
