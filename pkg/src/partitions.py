# src/partitions.py
"""Integer partitions and hooklengths of Ferrers diagrams."""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from typing import Iterator

from errors import DomainError

Partition = tuple[int, ...]


def iter_partitions(d: int) -> Iterator[Partition]:
    """Yield the partitions of d in reverse-lexicographic order, (d) first, (1,...,1) last."""
    if d < 0:
        raise DomainError(f"cannot partition a negative integer ({d})")
    if d == 0:
        yield ()
        return
    parts = [d]
    while True:
        yield tuple(parts)
        # strip trailing 1s, decrement the last part > 1, refill greedily
        ones = 0
        while parts and parts[-1] == 1:
            parts.pop()
            ones += 1
        if not parts:
            return
        k = parts.pop() - 1
        rest = ones + 1
        parts.append(k)
        while rest > k:
            parts.append(k)
            rest -= k
        if rest:
            parts.append(rest)


@lru_cache(maxsize=None)
def enumerate_partitions(d: int) -> tuple[Partition, ...]:
    return tuple(iter_partitions(d))


def conjugate(mu: Partition) -> Partition:
    if not mu:
        return ()
    return tuple(sum(1 for p in mu if p > j) for j in range(mu[0]))


@lru_cache(maxsize=None)
def hooklengths(mu: Partition) -> tuple[int, ...]:
    """Hooklength arm + leg + 1 of every cell, sorted descending."""
    conj = conjugate(mu)
    hooks = [
        (mu[i] - j - 1) + (conj[j] - i - 1) + 1
        for i in range(len(mu))
        for j in range(mu[i])
    ]
    return tuple(sorted(hooks, reverse=True))


def hook_counts(mu: Partition) -> Counter:
    """Hook multiset as {hooklength: multiplicity}."""
    return Counter(hooklengths(mu))


@lru_cache(maxsize=None)
def partition_count(d: int) -> int:
    """p(d) by Euler's pentagonal-number recurrence."""
    if d < 0:
        raise DomainError(f"p(d) needs d >= 0 (got {d})")
    p = [1] + [0] * d
    for n in range(1, d + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p[d]
