"""Pseudo-multigraph attached to a word, and the word classification built on it.

Vertices are letter positions; edge j joins the letter containing x_j to the
letter containing y_j (a loop when both sit in one letter).  Loops and
parallel edges count as cycles.
"""

from __future__ import annotations

from dataclasses import dataclass

from .words import MINUS, PLUS, Word, j_set, letter_symbols, letter_text


@dataclass(frozen=True)
class WordGraph:
    n_vertices: int
    edges: tuple  # tuple of (j, source_pos, target_pos), positions 1-based


def build_graph(w: Word) -> WordGraph:
    """Graph of a word: vertex per letter position, edge per index pair."""
    pos_of = {}
    for pos, letter in enumerate(w.letters, start=1):
        for sym in letter_symbols(letter):
            pos_of[sym] = pos
    edges = []
    for j in sorted(j_set(w)):
        edges.append((j, pos_of[(PLUS, j)], pos_of[(MINUS, j)]))
    return WordGraph(len(w.letters), tuple(edges))


class _DSU:
    """Union-find with loop and parallel-edge cycle detection."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge; returns False when a,b were already connected (a cycle)."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def components(w: Word) -> list[list[int]]:
    """Connected components as sorted lists of 1-based positions."""
    g = build_graph(w)
    dsu = _DSU(g.n_vertices + 1)
    for _, s, t in g.edges:
        dsu.union(s, t)
    groups: dict[int, list[int]] = {}
    for pos in range(1, g.n_vertices + 1):
        groups.setdefault(dsu.find(pos), []).append(pos)
    return sorted(groups.values(), key=lambda block: block[0])


def has_cycle(w: Word) -> bool:
    g = build_graph(w)
    dsu = _DSU(g.n_vertices + 1)
    for _, s, t in g.edges:
        if not dsu.union(s, t):
            return True
    return False


def is_irreducible(w: Word) -> bool:
    """Connected graph."""
    return len(components(w)) == 1


def is_factorized(w: Word) -> bool:
    """Every connected component occupies a contiguous block of positions."""
    for block in components(w):
        if block[-1] - block[0] + 1 != len(block):
            return False
    return True


def is_tree(w: Word) -> bool:
    """Connected and acyclic (loops and parallel edges are cycles)."""
    g = build_graph(w)
    dsu = _DSU(g.n_vertices + 1)
    for _, s, t in g.edges:
        if not dsu.union(s, t):
            return False
    return len(components(w)) == 1


def to_dot(w: Word) -> str:
    """Deterministic DOT export: vertices in position order, edges by index."""
    g = build_graph(w)
    lines = [f'graph "{w.text}" {{']
    for pos, letter in enumerate(w.letters, start=1):
        lines.append(f'  v{pos} [label="{letter_text(letter)}"];')
    for j, s, t in g.edges:
        lines.append(f'  v{s} -- v{t} [label="{j}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
