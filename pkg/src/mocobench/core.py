"""Representations, Pareto dominance, the non-dominated archive, and seeded RNG streams.

All dominance logic assumes canonical minimization: maximization objectives
are negated at evaluation time and un-negated only when reporting.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

__all__ = [
    "ObjectiveVector",
    "BitString",
    "Permutation",
    "Genotype",
    "Solution",
    "Archive",
    "RngStream",
    "dominates",
    "nondominated_filter",
]

# Objective vectors are plain tuples of floats in canonical minimization form.
ObjectiveVector = tuple


class BitString:
    """Binary genotype over {0,1}^D, stored as a uint8 array."""

    __slots__ = ("bits",)
    representation = "bits"

    def __init__(self, bits, validate: bool = True):
        self.bits = np.asarray(bits, dtype=np.uint8)
        if validate:
            if self.bits.ndim != 1 or len(self.bits) == 0:
                raise ValueError("bit-string must be a non-empty 1-D sequence")
            if not np.isin(self.bits, (0, 1)).all():
                raise ValueError("bit-string entries must be 0 or 1")

    def __len__(self) -> int:
        return len(self.bits)

    def __eq__(self, other) -> bool:
        return isinstance(other, BitString) and np.array_equal(self.bits, other.bits)

    def __repr__(self) -> str:
        return f"BitString({''.join(map(str, self.bits.tolist()))})"


class Permutation:
    """Permutation genotype: a bijection on {0, ..., D-1}, stored as an int64 array."""

    __slots__ = ("order",)
    representation = "perm"

    def __init__(self, order, validate: bool = True):
        self.order = np.asarray(order, dtype=np.int64)
        if validate:
            d = len(self.order)
            if self.order.ndim != 1 or d == 0:
                raise ValueError("permutation must be a non-empty 1-D sequence")
            seen = np.zeros(d, dtype=bool)
            if (self.order < 0).any() or (self.order >= d).any():
                raise ValueError("permutation entries must lie in 0..D-1")
            seen[self.order] = True
            if not seen.all():
                raise ValueError("permutation entries must be distinct")

    def __len__(self) -> int:
        return len(self.order)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.order, other.order)

    def __repr__(self) -> str:
        return f"Permutation({self.order.tolist()})"


Genotype = Union[BitString, Permutation]


class Solution:
    """A genotype paired with its cached objective vector (canonical minimization)."""

    __slots__ = ("genotype", "objectives")

    def __init__(self, genotype, objectives):
        self.genotype = genotype
        self.objectives = tuple(objectives)

    def __repr__(self) -> str:
        return f"Solution(objectives={self.objectives})"


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """Pareto dominance under minimization: a is no worse everywhere and differs.

    Raises ValueError on length mismatch.
    """
    if len(a) != len(b):
        raise ValueError(f"objective vectors differ in length: {len(a)} vs {len(b)}")
    strict = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            strict = True
    return strict


def nondominated_filter(points: Iterable[Sequence[float]]) -> list[tuple]:
    """Return the unique non-dominated subset of `points` by pairwise scan.

    Duplicates are collapsed; output is in lexicographic order. This is the
    brute-force oracle the archive is tested against, so it deliberately
    avoids any incremental bookkeeping.
    """
    pts = list(points)
    if not pts:
        return []
    m = len(pts[0])
    for p in pts:
        if len(p) != m:
            raise ValueError("all points must have the same length")
    arr = np.unique(np.asarray(pts, dtype=float), axis=0)
    n = len(arr)
    dominated = np.zeros(n, dtype=bool)
    chunk = max(1, 2_000_000 // max(1, n))
    for lo in range(0, n, chunk):
        block = arr[lo : lo + chunk]
        # rows are unique, so "<= everywhere" against a different row is dominance
        le = (arr[None, :, :] <= block[:, None, :]).all(axis=2)
        le[np.arange(len(block)), lo + np.arange(len(block))] = False
        dominated[lo : lo + chunk] = le.any(axis=1)
    return [tuple(row) for row in arr[~dominated].tolist()]


class Archive:
    """Duplicate-free set of mutually non-dominated solutions.

    For m = 2 the members are kept sorted ascending by first objective
    (hence strictly descending in the second), giving O(log n) dominance
    checks via binary search. For m >= 3 a linear scan is used.
    """

    __slots__ = ("m", "members", "_f1")

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("objective count must be positive")
        self.m = m
        self.members: list[Solution] = []
        self._f1: list[float] = []  # first objectives, m == 2 only

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Solution]:
        return iter(self.members)

    def objectives(self) -> list[tuple]:
        return [s.objectives for s in self.members]

    def contains_objectives(self, objs: Sequence[float]) -> bool:
        """True iff some member has exactly this objective vector."""
        if self.m == 2:
            i = bisect_left(self._f1, objs[0])
            return i < len(self.members) and self.members[i].objectives == tuple(objs)
        objs = tuple(objs)
        return any(s.objectives == objs for s in self.members)

    def try_insert(self, candidate: Solution) -> bool:
        """Insert `candidate` unless a member weakly dominates it.

        Returns True and removes every member the candidate dominates when
        accepted; returns False and leaves the archive untouched when some
        member dominates the candidate or duplicates its objective vector.
        """
        objs = candidate.objectives
        if len(objs) != self.m:
            raise ValueError(f"candidate has {len(objs)} objectives, archive expects {self.m}")
        if self.m == 2:
            return self._try_insert_2d(candidate)
        return self._try_insert_nd(candidate)

    def _try_insert_2d(self, candidate: Solution) -> bool:
        a, b = candidate.objectives
        members = self.members
        f1 = self._f1
        i = bisect_left(f1, a)
        # the member just left of i has f1 < a and the best f2 among those
        if i > 0 and members[i - 1].objectives[1] <= b:
            return False
        if i < len(members) and f1[i] == a and members[i].objectives[1] <= b:
            return False
        j = i
        n = len(members)
        while j < n and members[j].objectives[1] >= b:
            j += 1
        if j > i:
            del members[i:j]
            del f1[i:j]
        members.insert(i, candidate)
        f1.insert(i, a)
        return True

    def _try_insert_nd(self, candidate: Solution) -> bool:
        objs = candidate.objectives
        for s in self.members:
            if s.objectives == objs or dominates(s.objectives, objs):
                return False
        self.members = [s for s in self.members if not dominates(objs, s.objectives)]
        self.members.append(candidate)
        return True


class RngStream:
    """Deterministic random stream: PCG64 behind a buffer of uniform doubles.

    Every draw is derived from one flat sequence of float64 samples produced
    by ``numpy.random.Generator(PCG64(seed)).random()`` in fixed-size blocks,
    so a seed fully determines the stream on every platform (PCG64 output is
    specified by its reference constants and frozen by numpy's stream
    compatibility policy). Integers are obtained as floor(u * n), which is
    exact for any n below 2**53.
    """

    __slots__ = ("seed", "_gen", "_buf", "_pos")
    _BLOCK = 16384

    def __init__(self, seed: int):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._gen = np.random.Generator(np.random.PCG64(self.seed))
        self._buf = self._gen.random(self._BLOCK)
        self._pos = 0

    def u01(self) -> float:
        """Next uniform double in [0, 1)."""
        pos = self._pos
        if pos == self._BLOCK:
            self._buf = self._gen.random(self._BLOCK)
            pos = 0
        self._pos = pos + 1
        return self._buf[pos]

    def u01_array(self, n: int) -> np.ndarray:
        """Next `n` uniform doubles (read-only view or fresh array)."""
        pos = self._pos
        end = pos + n
        if end <= self._BLOCK:
            self._pos = end
            return self._buf[pos:end]
        out = np.empty(n)
        filled = self._BLOCK - pos
        out[:filled] = self._buf[pos:]
        while filled < n:
            self._buf = self._gen.random(self._BLOCK)
            take = min(self._BLOCK, n - filled)
            out[filled : filled + take] = self._buf[:take]
            filled += take
        self._pos = take
        return out

    def randint(self, n: int) -> int:
        """Uniform integer in {0, ..., n-1}."""
        return int(self.u01() * n)
