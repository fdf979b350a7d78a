"""Base moves and the scale-bounded neighbourhood sampler.

A base move is the smallest representation-specific variation: a 1-bit flip,
a 2-bit flip, a 2-opt segment reversal, or a 2-swap transposition. Sampling
"within scale s" draws a step count k uniformly from {1..s} and composes k
base moves, so offspring land anywhere in the radius-s ball around the
parent rather than exactly on its boundary.
"""

from __future__ import annotations

from enum import Enum
from typing import Iterator

import numpy as np

from . import _kernels
from .core import BitString, Genotype, Permutation, RngStream

__all__ = [
    "MoveKind",
    "default_move",
    "draw_step_count",
    "apply_base_move",
    "sample_within_scale",
    "neighborhood",
    "neighborhood_size",
]


class MoveKind(Enum):
    ONE_BIT_FLIP = "one_bit_flip"
    TWO_BIT_FLIP = "two_bit_flip"
    TWO_OPT = "two_opt"
    TWO_SWAP = "two_swap"


_BIT_KINDS = (MoveKind.ONE_BIT_FLIP, MoveKind.TWO_BIT_FLIP)
_PERM_KINDS = (MoveKind.TWO_OPT, MoveKind.TWO_SWAP)

# Per-problem operator assignments (overridable by configuration).
_DEFAULT_MOVES = {
    "knapsack": MoveKind.TWO_BIT_FLIP,
    "nk": MoveKind.ONE_BIT_FLIP,
    "tsp": MoveKind.TWO_OPT,
    "qap": MoveKind.TWO_SWAP,
}


def default_move(problem_kind: str) -> MoveKind:
    """Default operator for a problem kind."""
    try:
        return _DEFAULT_MOVES[problem_kind]
    except KeyError:
        raise ValueError(f"no default move for problem kind {problem_kind!r}") from None


def _check_compatible(genotype: Genotype, kind: MoveKind) -> None:
    if kind in _BIT_KINDS and not isinstance(genotype, BitString):
        raise TypeError(f"{kind.value} applies to bit-strings only")
    if kind in _PERM_KINDS and not isinstance(genotype, Permutation):
        raise TypeError(f"{kind.value} applies to permutations only")


def draw_step_count(scale: int, rng: RngStream, max_steps: int | None = None) -> int:
    """Draw the composed-move count: uniform on {1..scale}, then clamped.

    Consumes no randomness when scale <= 1. The clamp covers bit-flip moves
    whose distinct-position requirement cannot accommodate the drawn k.
    """
    if scale <= 1:
        k = 1
    else:
        k = 1 + rng.randint(scale)
    if max_steps is not None and k > max_steps:
        k = max_steps
    return k


def _sample(genotype: Genotype, kind: MoveKind, scale: int, rng: RngStream) -> Genotype:
    if kind in _BIT_KINDS:
        bits = genotype.bits
        d = len(bits)
        per_move = 1 if kind is MoveKind.ONE_BIT_FLIP else 2
        if d < per_move:
            raise ValueError(f"{kind.value} needs at least {per_move} bits")
        k = draw_step_count(scale, rng, max_steps=d // per_move)
        n_flips = k * per_move
        child = bits.copy()
        _kernels.flip_distinct_bits(child, n_flips, rng.u01_array(n_flips))
        return BitString(child, validate=False)
    order = genotype.order
    d = len(order)
    if d < 2:
        raise ValueError(f"{kind.value} needs at least 2 positions")
    k = draw_step_count(scale, rng)
    child = order.copy()
    us = rng.u01_array(2 * k)
    if kind is MoveKind.TWO_OPT:
        _kernels.apply_two_opt(child, k, us)
    else:
        _kernels.apply_two_swap(child, k, us)
    return Permutation(child, validate=False)


def apply_base_move(genotype: Genotype, kind: MoveKind, rng: RngStream) -> Genotype:
    """Apply one uniformly chosen base move; the result always differs from the input."""
    _check_compatible(genotype, kind)
    return _sample(genotype, kind, 1, rng)


def sample_within_scale(
    genotype: Genotype, kind: MoveKind, scale: int, rng: RngStream
) -> Genotype:
    """Sample from the radius-`scale` neighbourhood of `genotype`.

    Draws k uniform on {1..scale} and composes k base moves. For bit-flip
    kinds all flipped positions are distinct, so the Hamming distance is
    exactly k (1-bit) or 2k (2-bit); k is clamped when the bit budget runs
    out. Permutation kinds apply k independent sequential moves, which may
    occasionally cancel.
    """
    if scale < 1:
        raise ValueError("scale must be at least 1")
    _check_compatible(genotype, kind)
    return _sample(genotype, kind, scale, rng)


def neighborhood(genotype: Genotype, kind: MoveKind) -> Iterator[Genotype]:
    """Enumerate the full scale-1 neighbourhood in deterministic ascending order.

    Bit flips iterate position (pairs) lexicographically; 2-opt iterates
    segment endpoints (i, j) with i < j lexicographically; 2-swap iterates
    position pairs the same way.
    """
    _check_compatible(genotype, kind)
    if kind is MoveKind.ONE_BIT_FLIP:
        bits = genotype.bits
        for i in range(len(bits)):
            child = bits.copy()
            child[i] ^= 1
            yield BitString(child, validate=False)
    elif kind is MoveKind.TWO_BIT_FLIP:
        bits = genotype.bits
        d = len(bits)
        for i in range(d - 1):
            for j in range(i + 1, d):
                child = bits.copy()
                child[i] ^= 1
                child[j] ^= 1
                yield BitString(child, validate=False)
    elif kind is MoveKind.TWO_OPT:
        order = genotype.order
        d = len(order)
        for i in range(d - 1):
            for j in range(i + 1, d):
                child = order.copy()
                child[i : j + 1] = child[i : j + 1][::-1]
                yield Permutation(child, validate=False)
    else:
        order = genotype.order
        d = len(order)
        for i in range(d - 1):
            for j in range(i + 1, d):
                child = order.copy()
                child[i], child[j] = child[j], child[i]
                yield Permutation(child, validate=False)


def neighborhood_size(d: int, kind: MoveKind) -> int:
    """Number of neighbours enumerated by `neighborhood` for dimension d."""
    if kind is MoveKind.ONE_BIT_FLIP:
        return d
    return d * (d - 1) // 2
