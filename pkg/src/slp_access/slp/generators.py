"""Deterministic random grammars for tests and benchmarks."""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, List

import numpy as np

from ..errors import ErrorCode, SlpError
from .core import Pair, Rule, Slp, Terminal, make_slp

MODES = ("random", "chain", "balanced", "doubling")


def random_slp(seed: int, n_rules: int, alphabet: str = "ab", mode: str = "random") -> Slp:
    """Grammar with `n_rules` rules over `alphabet`; identical for identical seeds.

    Modes:
      random    both children uniform over earlier rules
      chain     each pair joins its predecessor with a terminal (height n_rules - |alphabet|)
      balanced  child heights differ by at most one
      doubling  each pair joins its predecessor with one of the two previous rules;
                keep n_rules small, the length grows geometrically
    """
    if mode not in MODES:
        raise SlpError(ErrorCode.INVALID_PARAMS, f"unknown mode {mode!r}")
    if not alphabet or len(set(alphabet)) != len(alphabet):
        raise SlpError(ErrorCode.INVALID_PARAMS, "alphabet must be non-empty and duplicate-free")
    if n_rules < len(alphabet):
        raise SlpError(ErrorCode.INVALID_PARAMS, f"n_rules {n_rules} < alphabet size {len(alphabet)}")

    rng = np.random.default_rng(seed)
    a = len(alphabet)
    rules: List[Rule] = [Terminal(ch) for ch in alphabet]
    heights: List[int] = [0] * a
    by_height: Dict[int, List[int]] = defaultdict(list)
    by_height[0].extend(range(a))

    for v in range(a, n_rules):
        if mode == "random":
            left, right = int(rng.integers(0, v)), int(rng.integers(0, v))
        elif mode == "chain":
            left, right = v - 1, int(rng.integers(0, a))
            if rng.random() < 0.5:
                left, right = right, left
        elif mode == "doubling":
            left, right = v - 1, int(rng.integers(max(0, v - 2), v))
            if rng.random() < 0.5:
                left, right = right, left
        else:
            left = int(rng.integers(0, v))
            h = heights[left]
            near = [by_height.get(x, []) for x in (h - 1, h, h + 1)]
            pick = int(rng.integers(0, sum(len(bucket) for bucket in near)))
            for bucket in near:
                if pick < len(bucket):
                    right = bucket[pick]
                    break
                pick -= len(bucket)
            if rng.random() < 0.5:
                left, right = right, left
        rules.append(Pair(left, right))
        h = 1 + max(heights[left], heights[right])
        heights.append(h)
        by_height[h].append(v)

    return make_slp(rules)
