"""Levelled candidate-prefix trie with threshold and top-c*k expansion.

Candidates are always full root-to-tip sequences without adjacent repeats;
each expansion step either fans a surviving prefix out to every non-repeat
symbol (threshold variant) or follows only the retained frequent adjacent
pairs for that level (pruned variant).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .ldp import CandidateSet
from .series import SaxAlphabet, SymbolSequence


class EmptyFrontierError(Exception):
    """No candidate survives an expansion step; the run must terminate."""


@dataclass(eq=False)
class TrieNode:
    symbol: int | None
    depth: int
    count: float = 0.0
    children: dict[int, "TrieNode"] = field(default_factory=dict)


class Trie:
    """Mutable prefix trie recording per-node selection tallies."""

    def __init__(self):
        self.root = TrieNode(symbol=None, depth=0)

    def insert(self, seq: SymbolSequence, count: float) -> None:
        node = self.root
        for s in seq.symbols:
            if s in node.children:
                node = node.children[s]
            else:
                child = TrieNode(symbol=s, depth=node.depth + 1)
                node.children[s] = child
                node = child
        node.count = count

    def dump(self) -> str:
        """One node per line: depth, sequence so far, count; indented by depth."""
        lines: list[str] = []

        def walk(node: TrieNode, prefix: tuple[int, ...]):
            if node.symbol is not None:
                seq = SymbolSequence(prefix)
                lines.append(f"{'  ' * (node.depth - 1)}{node.depth} {seq.render()} {node.count:g}")
            for sym in sorted(node.children):
                walk(node.children[sym], prefix + (sym,))

        walk(self.root, ())
        return "\n".join(lines)


@dataclass(eq=False)
class SubShapeTable:
    """Retained frequent adjacent pairs per level, ranked by estimated count.

    Level j holds ordered distinct-symbol pairs (x, y) meaning position j
    carries x and position j+1 carries y (1-indexed); at most c*k pairs are
    kept per level.
    """

    t: int
    levels: Mapping[int, tuple[tuple[tuple[int, int], float], ...]]

    def __post_init__(self):
        for level, entries in self.levels.items():
            for (x, y), _ in entries:
                if x == y:
                    raise ValueError(f"level {level} retains a repeated-symbol pair ({x},{y})")
                if not (0 <= x < self.t and 0 <= y < self.t):
                    raise ValueError(f"level {level} pair ({x},{y}) outside alphabet")

    def pairs_at(self, level: int) -> tuple[tuple[tuple[int, int], float], ...]:
        return self.levels.get(level, ())

    def first_symbols(self) -> tuple[int, ...]:
        """Distinct first symbols of the retained level-1 pairs, rank order."""
        seen: list[int] = []
        for (x, _), _ in self.pairs_at(1):
            if x not in seen:
                seen.append(x)
        return tuple(seen)


def pair_index(x: int, y: int, t: int) -> int:
    """Index of the ordered distinct pair (x, y) in the t*(t-1) pair domain."""
    if x == y:
        raise ValueError("adjacent pair symbols are distinct by construction")
    return x * (t - 1) + (y if y < x else y - 1)


def index_pair(idx: int, t: int) -> tuple[int, int]:
    x, rem = divmod(idx, t - 1)
    y = rem if rem < x else rem + 1
    return x, y


def expand_baseline(frontier: Sequence[tuple[SymbolSequence, float]],
                    alphabet: SaxAlphabet, threshold: float) -> CandidateSet:
    """Drop prefixes below the threshold, then fan each survivor out to every
    symbol except its own last one.  Returns full root-to-tip sequences."""
    survivors = [seq for seq, count in frontier if count >= threshold]
    if not survivors:
        raise EmptyFrontierError("every prefix fell below the pruning threshold")
    out: list[SymbolSequence] = []
    for prefix in survivors:
        last = prefix.symbols[-1] if prefix.symbols else None
        for sym in range(alphabet.size):
            if sym != last:
                out.append(SymbolSequence(prefix.symbols + (sym,), compressed=True))
    return CandidateSet(tuple(out))


def expand_pruned(frontier: Sequence[SymbolSequence], table: SubShapeTable,
                  level: int, c: int, k: int) -> CandidateSet:
    """Extend each prefix only along the retained pairs whose first symbol
    matches the prefix tip; prefixes with no matching pair are dropped."""
    if len(frontier) > c * k:
        raise ValueError(f"frontier of {len(frontier)} exceeds the top-{c * k} bound")
    out: list[SymbolSequence] = []
    for prefix in frontier:
        tip = prefix.symbols[-1]
        for (x, y), _ in table.pairs_at(level):
            if x == tip:
                out.append(SymbolSequence(prefix.symbols + (y,), compressed=True))
    if not out:
        raise EmptyFrontierError(f"no retained level-{level} pair extends any prefix")
    return CandidateSet(tuple(out))


def prune_topck(nodes: Sequence[tuple[SymbolSequence, float]],
                c: int, k: int) -> list[tuple[SymbolSequence, float]]:
    """Keep the min(c*k, n) highest-count entries; ties prefer the
    lexicographically smaller sequence.  Deterministic."""
    ranked = sorted(nodes, key=lambda item: (-item[1], item[0].symbols))
    return ranked[: min(c * k, len(ranked))]
