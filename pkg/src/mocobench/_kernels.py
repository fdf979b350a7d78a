"""JIT-compiled inner-loop kernels.

These run millions of times per search; randomness is drawn by the caller
(one flat stream of uniform doubles) and passed in, so seeds stay fully
under caller control and streams are identical with or without the JIT.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def knapsack_eval_repair(x, values, weights, capacities, removal_order, out):
    """Greedy-ratio repair followed by evaluation; mutates `x` in place.

    While any knapsack is over capacity, deselects items in ascending order
    of their best value/weight ratio (`removal_order` is that precomputed
    order). Writes negated total values into `out`.
    """
    m, d = values.shape
    load = np.zeros(m, dtype=np.int64)
    for i in range(d):
        if x[i]:
            for j in range(m):
                load[j] += weights[j, i]
    violated = False
    for j in range(m):
        if load[j] > capacities[j]:
            violated = True
            break
    if violated:
        for oi in range(d):
            i = removal_order[oi]
            if not x[i]:
                continue
            x[i] = 0
            for j in range(m):
                load[j] -= weights[j, i]
            feasible = True
            for j in range(m):
                if load[j] > capacities[j]:
                    feasible = False
                    break
            if feasible:
                break
    for j in range(m):
        total = 0
        for i in range(d):
            if x[i]:
                total += values[j, i]
        out[j] = -float(total)


@njit(cache=True)
def tsp_eval(order, costs, out):
    """Cyclic tour cost under each cost matrix."""
    m = costs.shape[0]
    d = order.shape[0]
    for j in range(m):
        total = costs[j, order[d - 1], order[0]]
        for i in range(d - 1):
            total += costs[j, order[i], order[i + 1]]
        out[j] = total


@njit(cache=True)
def qap_eval(perm, flows, dist, out):
    """Flow-weighted distance sum; `perm` maps facility -> location."""
    m = flows.shape[0]
    d = perm.shape[0]
    for j in range(m):
        total = 0.0
        for a in range(d):
            pa = perm[a]
            for b in range(d):
                total += flows[j, a, b] * dist[pa, perm[b]]
        out[j] = total


@njit(cache=True)
def nk_eval(bits, neighborhoods, tables, out):
    """Negated mean table contribution per objective.

    `neighborhoods[i]` lists the own bit index first, then the K partner
    indices; the table code uses the own bit as the most significant bit.
    """
    m = tables.shape[0]
    d = neighborhoods.shape[0]
    width = neighborhoods.shape[1]
    for j in range(m):
        out[j] = 0.0
    for i in range(d):
        code = 0
        for t in range(width):
            code = (code << 1) | bits[neighborhoods[i, t]]
        for j in range(m):
            out[j] += tables[j, i, code]
    for j in range(m):
        out[j] = -(out[j] / d)


@njit(cache=True)
def flip_distinct_bits(bits, n_flips, us):
    """Flip `n_flips` distinct positions chosen by partial Fisher-Yates."""
    n = bits.shape[0]
    pool = np.arange(n)
    for t in range(n_flips):
        r = t + int(us[t] * (n - t))
        pool[t], pool[r] = pool[r], pool[t]
        bits[pool[t]] ^= 1


@njit(cache=True)
def apply_two_opt(order, k, us):
    """Apply k segment reversals in place; each consumes two doubles.

    The two cut points form an unordered distinct pair, uniform over all
    contiguous segments of length >= 2.
    """
    d = order.shape[0]
    for t in range(k):
        i = int(us[2 * t] * d)
        j = int(us[2 * t + 1] * (d - 1))
        if j >= i:
            j += 1
        if i > j:
            i, j = j, i
        while i < j:
            order[i], order[j] = order[j], order[i]
            i += 1
            j -= 1


@njit(cache=True)
def apply_two_swap(order, k, us):
    """Apply k transpositions of distinct positions in place."""
    d = order.shape[0]
    for t in range(k):
        i = int(us[2 * t] * d)
        j = int(us[2 * t + 1] * (d - 1))
        if j >= i:
            j += 1
        order[i], order[j] = order[j], order[i]


@njit(cache=True)
def fill_random_permutation(out, us):
    """Unbiased Fisher-Yates shuffle of 0..n-1 using n-1 doubles."""
    n = out.shape[0]
    for i in range(n):
        out[i] = i
    for t in range(n - 1):
        r = t + int(us[t] * (n - t))
        out[t], out[r] = out[r], out[t]
