"""Re-Pair style ingestion: repeatedly replace the most frequent adjacent pair.

The working sequence is a doubly linked list over positions of the input.
Every adjacent pair of live positions is indexed by its left position, and
pairs occurring at least twice sit in a bucket keyed by their occurrence
count. Replacing one occurrence only touches the pairs formed with its two
neighbours, so a whole run is linear in the input length up to hashing.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, List, Optional, Set, Tuple

from ..errors import ErrorCode, SlpError
from .core import Pair, Rule, Slp, Terminal, make_slp

HOLE = -1
END = -1

SymPair = Tuple[int, int]


class _PairIndex:
    """Occurrences per pair plus frequency buckets for pairs seen twice or more."""

    def __init__(self) -> None:
        self.occ: Dict[SymPair, Set[int]] = defaultdict(set)
        self.buckets: Dict[int, Set[SymPair]] = defaultdict(set)
        self.top = 0

    def add(self, pair: SymPair, pos: int) -> None:
        where = self.occ[pair]
        count = len(where)
        where.add(pos)
        if count >= 2:
            self.buckets[count].discard(pair)
        if count + 1 >= 2:
            self.buckets[count + 1].add(pair)
            if count + 1 > self.top:
                self.top = count + 1

    def remove(self, pair: SymPair, pos: int) -> None:
        where = self.occ.get(pair)
        if where is None or pos not in where:
            return
        count = len(where)
        where.discard(pos)
        if count >= 2:
            self.buckets[count].discard(pair)
        if count - 1 >= 2:
            self.buckets[count - 1].add(pair)
        if not where:
            del self.occ[pair]

    def most_frequent(self) -> Optional[SymPair]:
        while self.top >= 2 and not self.buckets.get(self.top):
            self.top -= 1
        if self.top < 2:
            return None
        return next(iter(self.buckets[self.top]))

    def take(self, pair: SymPair) -> List[int]:
        where = self.occ.pop(pair)
        if len(where) >= 2:
            self.buckets[len(where)].discard(pair)
        return sorted(where)


def build_grammar(text: str, max_rules: Optional[int] = None) -> Slp:
    """Compress `text` into an SLP whose expansion is exactly `text`.

    Terminals are numbered in code point order. Pairs are replaced while
    some pair occurs at least twice (or until `max_rules` is reached);
    what is left is folded left to right.
    """
    if not text:
        raise SlpError(ErrorCode.EMPTY_INPUT, "cannot build a grammar for empty text")
    if max_rules is not None and max_rules < 1:
        raise SlpError(ErrorCode.INVALID_PARAMS, f"max_rules must be positive, got {max_rules}")

    alphabet = sorted(set(text))
    rules: List[Rule] = [Terminal(ch) for ch in alphabet]
    ids = {ch: v for v, ch in enumerate(alphabet)}
    seq = [ids[ch] for ch in text]
    n = len(seq)
    nxt = list(range(1, n)) + [END]
    prv = [END] + list(range(n - 1))

    index = _PairIndex()
    for pos in range(n - 1):
        index.add((seq[pos], seq[pos + 1]), pos)

    while max_rules is None or len(rules) < max_rules:
        target = index.most_frequent()
        if target is None:
            break
        a, b = target
        symbol = len(rules)
        rules.append(Pair(a, b))
        # Left to right, so overlapping occurrences in runs resolve greedily.
        for i in index.take(target):
            if seq[i] != a:
                continue
            j = nxt[i]
            if j == END or seq[j] != b:
                continue
            h, k = prv[i], nxt[j]
            if h != END:
                left = (seq[h], a)
                if left != target:
                    index.remove(left, h)
            if k != END:
                right = (b, seq[k])
                if right != target:
                    index.remove(right, j)
            seq[i] = symbol
            seq[j] = HOLE
            nxt[i] = k
            if k != END:
                prv[k] = i
            if h != END:
                index.add((seq[h], symbol), h)
            if k != END:
                index.add((symbol, seq[k]), i)

    out: List[int] = []
    pos = 0
    while pos != END:
        out.append(seq[pos])
        pos = nxt[pos]

    acc = out[0]
    for symbol in out[1:]:
        rules.append(Pair(acc, symbol))
        acc = len(rules) - 1
    return make_slp(rules)
