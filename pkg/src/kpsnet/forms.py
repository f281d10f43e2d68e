"""Symmetric multilinear forms over a field, stored by orbit representative.

A symmetric tensor a[j_1..j_t] with each index in range(n) is kept as one
entry per non-decreasing index tuple, in ``combinations_with_replacement``
order.  For t = 2 this is the upper triangle of the matrix read row by row.
All values here are integer-encoded field elements.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb
from typing import Sequence

from .field import Field


@lru_cache(maxsize=None)
def multi_indices(n: int, t: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations_with_replacement(range(n), t))


@lru_cache(maxsize=None)
def index_position(n: int, t: int) -> dict[tuple[int, ...], int]:
    return {idx: i for i, idx in enumerate(multi_indices(n, t))}


def free_count(n: int, t: int) -> int:
    return comb(n + t - 1, t)


def contract(field: Field, n: int, t: int, entries: Sequence[int], vec: Sequence[int]) -> tuple[int, ...]:
    """Fix the first slot to ``vec``: b[J] = sum_j a[j, J] * vec[j] for sorted (t-1)-tuples J."""
    pos = index_position(n, t)
    out = []
    for rest in multi_indices(n, t - 1):
        acc = 0
        for j, v in enumerate(vec):
            if v:
                a = entries[pos[tuple(sorted((j,) + rest))]]
                if a:
                    acc = field.add(acc, field.mul(a, v))
        out.append(acc)
    return tuple(out)


def evaluate(field: Field, n: int, entries: Sequence[int], vecs: Sequence[Sequence[int]]) -> int:
    """Full evaluation sum over ordered index tuples of a[sorted] * prod vecs[s][idx_s]."""
    t = len(vecs)
    if t == 0:
        return entries[0]
    pos = index_position(n, t)
    acc = 0
    for idx in itertools.product(range(n), repeat=t):
        term = entries[pos[tuple(sorted(idx))]]
        for s, i in enumerate(idx):
            if not term:
                break
            term = field.mul(term, vecs[s][i])
        if term:
            acc = field.add(acc, term)
    return acc
