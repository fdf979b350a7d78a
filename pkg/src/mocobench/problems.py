"""Seeded random instances and evaluators for the four benchmark problems.

Supported kinds: multi-objective 0-1 knapsack, symmetric-cost traveling
salesman, quadratic assignment, and NK-landscape. Knapsack and NK are
maximization problems; their objectives are negated at evaluation time so
everything downstream works in canonical minimization form.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Union

import numpy as np

from . import _kernels
from .core import BitString, Genotype, Permutation, RngStream

__all__ = [
    "KnapsackInstance",
    "TspInstance",
    "QapInstance",
    "NkInstance",
    "ProblemInstance",
    "PROBLEM_KINDS",
    "generate_instance",
    "evaluate",
    "evaluate_knapsack",
    "evaluate_tsp",
    "evaluate_qap",
    "evaluate_nk",
    "make_evaluator",
    "random_genotype",
    "to_natural",
    "save_instance",
    "load_instance",
    "instance_id",
]

PROBLEM_KINDS = ("knapsack", "tsp", "qap", "nk")


@dataclass(eq=False)
class KnapsackInstance:
    """0-1 knapsack with m value/weight rows and per-knapsack capacities.

    Values and weights are integers in [10, 100]; capacity j is half the
    total weight of row j (floored). Infeasible genotypes are repaired by
    greedily dropping the selected item with the lowest max-over-objectives
    value/weight ratio until all capacities hold.
    """

    D: int
    m: int
    seed: int
    values: np.ndarray  # (m, D) int64
    weights: np.ndarray  # (m, D) int64
    capacities: np.ndarray  # (m,) int64
    removal_order: np.ndarray = field(init=False)  # ascending best-ratio order

    kind = "knapsack"
    maximization = True
    representation = "bits"
    K = None

    def __post_init__(self):
        if self.values.shape != (self.m, self.D) or self.weights.shape != (self.m, self.D):
            raise ValueError("value/weight matrices must have shape (m, D)")
        ratios = (self.values / self.weights).max(axis=0)
        self.removal_order = np.argsort(ratios, kind="stable")


@dataclass(eq=False)
class TspInstance:
    """Symmetric TSP with m independent cost matrices, entries in [0, 1)."""

    D: int
    m: int
    seed: int
    costs: np.ndarray  # (m, D, D) float64, symmetric, zero diagonal

    kind = "tsp"
    maximization = False
    representation = "perm"
    K = None

    def __post_init__(self):
        if self.costs.shape != (self.m, self.D, self.D):
            raise ValueError("cost matrices must have shape (m, D, D)")


@dataclass(eq=False)
class QapInstance:
    """QAP with m flow matrices and Euclidean distances between D locations.

    Flow entries are uniform in [0, 100]; locations are uniform points in
    [0, 5000]^2. A genotype maps facility index to location index.
    """

    D: int
    m: int
    seed: int
    flows: np.ndarray  # (m, D, D) float64
    locations: np.ndarray  # (D, 2) float64
    distances: np.ndarray  # (D, D) float64

    kind = "qap"
    maximization = False
    representation = "perm"
    K = None

    def __post_init__(self):
        if self.flows.shape != (self.m, self.D, self.D):
            raise ValueError("flow matrices must have shape (m, D, D)")
        if self.distances.shape != (self.D, self.D):
            raise ValueError("distance matrix must have shape (D, D)")


@dataclass(eq=False)
class NkInstance:
    """NK-landscape: D bits, each interacting with K random partners.

    Each (objective, bit) pair has a lookup table of 2^(K+1) values in
    [0, 1); the table index packs the own bit as the most significant bit
    followed by the partner bits in stored order. Objectives are means over
    bits, negated for minimization.
    """

    D: int
    m: int
    K: int
    seed: int
    partners: np.ndarray  # (D, K) int64, distinct, never the own index
    tables: np.ndarray  # (m, D, 2^(K+1)) float64
    neighborhoods: np.ndarray = field(init=False)  # (D, K+1): own index first

    kind = "nk"
    maximization = True
    representation = "bits"

    def __post_init__(self):
        if self.partners.shape != (self.D, self.K):
            raise ValueError("partners must have shape (D, K)")
        if self.tables.shape != (self.m, self.D, 2 ** (self.K + 1)):
            raise ValueError("tables must have shape (m, D, 2^(K+1))")
        self.neighborhoods = np.concatenate(
            [np.arange(self.D, dtype=np.int64)[:, None], self.partners], axis=1
        )


ProblemInstance = Union[KnapsackInstance, TspInstance, QapInstance, NkInstance]


# ---------------------------------------------------------------------------
# Generation


def generate_instance(
    kind: str, D: int, m: int, K: int | None = None, seed: int = 0
) -> ProblemInstance:
    """Generate a seeded random instance of the given kind.

    Deterministic in (kind, D, m, K, seed). K applies to NK landscapes only
    and must satisfy 0 <= K <= D-1.
    """
    if kind not in PROBLEM_KINDS:
        raise ValueError(f"unknown problem kind {kind!r}")
    if D < 2:
        raise ValueError("D must be at least 2")
    if m < 2:
        raise ValueError("m must be at least 2")
    if kind != "nk" and K is not None:
        raise ValueError(f"K applies to NK landscapes only, not {kind!r}")
    gen = np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))
    if kind == "knapsack":
        values = gen.integers(10, 101, size=(m, D), dtype=np.int64)
        weights = gen.integers(10, 101, size=(m, D), dtype=np.int64)
        capacities = weights.sum(axis=1) // 2
        return KnapsackInstance(D, m, seed, values, weights, capacities)
    if kind == "tsp":
        costs = np.empty((m, D, D))
        for j in range(m):
            upper = np.triu(gen.random((D, D)), k=1)
            costs[j] = upper + upper.T
        return TspInstance(D, m, seed, costs)
    if kind == "qap":
        flows = gen.uniform(0.0, 100.0, size=(m, D, D))
        locations = gen.uniform(0.0, 5000.0, size=(D, 2))
        deltas = locations[:, None, :] - locations[None, :, :]
        distances = np.sqrt((deltas**2).sum(axis=2))
        return QapInstance(D, m, seed, flows, locations, distances)
    # nk
    if K is None:
        raise ValueError("NK landscapes require K")
    if not 0 <= K <= D - 1:
        raise ValueError("K must satisfy 0 <= K <= D-1")
    partners = np.empty((D, K), dtype=np.int64)
    pool = np.arange(D, dtype=np.int64)
    for i in range(D):
        others = np.delete(pool, i)
        partners[i] = others[gen.permutation(D - 1)[:K]]
    tables = gen.random((m, D, 2 ** (K + 1)))
    return NkInstance(D, m, K, seed, partners, tables)


# ---------------------------------------------------------------------------
# Evaluation


def evaluate_knapsack(inst: KnapsackInstance, genotype: BitString) -> tuple[BitString, tuple]:
    """Repair (if needed) and evaluate; returns (repaired genotype, objectives).

    The input genotype is not modified; the returned one replaces the
    candidate everywhere downstream. Objectives are negated totals.
    """
    if len(genotype) != inst.D:
        raise ValueError("genotype length must equal D")
    bits = genotype.bits.copy()
    out = np.empty(inst.m)
    _kernels.knapsack_eval_repair(
        bits, inst.values, inst.weights, inst.capacities, inst.removal_order, out
    )
    return BitString(bits, validate=False), tuple(out.tolist())


def evaluate_tsp(inst: TspInstance, genotype: Permutation) -> tuple:
    """Total cyclic tour cost per objective."""
    if len(genotype) != inst.D:
        raise ValueError("genotype length must equal D")
    out = np.empty(inst.m)
    _kernels.tsp_eval(genotype.order, inst.costs, out)
    return tuple(out.tolist())


def evaluate_qap(inst: QapInstance, genotype: Permutation) -> tuple:
    """Sum of flow times distance over all facility pairs, per objective."""
    if len(genotype) != inst.D:
        raise ValueError("genotype length must equal D")
    out = np.empty(inst.m)
    _kernels.qap_eval(genotype.order, inst.flows, inst.distances, out)
    return tuple(out.tolist())


def evaluate_nk(inst: NkInstance, genotype: BitString) -> tuple:
    """Negated mean table contribution per objective."""
    if len(genotype) != inst.D:
        raise ValueError("genotype length must equal D")
    out = np.empty(inst.m)
    _kernels.nk_eval(genotype.bits, inst.neighborhoods, inst.tables, out)
    return tuple(out.tolist())


def evaluate(inst: ProblemInstance, genotype: Genotype) -> tuple[Genotype, tuple]:
    """Uniform evaluation: returns (possibly repaired genotype, objectives)."""
    if inst.kind == "knapsack":
        return evaluate_knapsack(inst, genotype)
    if inst.kind == "tsp":
        return genotype, evaluate_tsp(inst, genotype)
    if inst.kind == "qap":
        return genotype, evaluate_qap(inst, genotype)
    return genotype, evaluate_nk(inst, genotype)


def make_evaluator(inst: ProblemInstance) -> Callable[[Genotype], tuple[Genotype, tuple]]:
    """Bind an instance into a fast single-run evaluator closure.

    The returned callable owns its genotype argument (knapsack repair happens
    in place), so callers must pass freshly created genotypes. One evaluator
    serves one sequential run; it reuses a scratch output buffer.
    """
    out = np.empty(inst.m)
    if inst.kind == "knapsack":
        values, weights = inst.values, inst.weights
        capacities, order = inst.capacities, inst.removal_order
        kp = _kernels.knapsack_eval_repair

        def eval_knapsack(g):
            kp(g.bits, values, weights, capacities, order, out)
            return g, tuple(out.tolist())

        return eval_knapsack
    if inst.kind == "tsp":
        costs = inst.costs
        tsp = _kernels.tsp_eval

        def eval_tsp(g):
            tsp(g.order, costs, out)
            return g, tuple(out.tolist())

        return eval_tsp
    if inst.kind == "qap":
        flows, dist = inst.flows, inst.distances
        qap = _kernels.qap_eval

        def eval_qap(g):
            qap(g.order, flows, dist, out)
            return g, tuple(out.tolist())

        return eval_qap
    neighborhoods, tables = inst.neighborhoods, inst.tables
    nk = _kernels.nk_eval

    def eval_nk(g):
        nk(g.bits, neighborhoods, tables, out)
        return g, tuple(out.tolist())

    return eval_nk


def random_genotype(inst: ProblemInstance, rng: RngStream) -> Genotype:
    """Uniform random genotype: i.i.d. bits, or an unbiased random shuffle."""
    d = inst.D
    if inst.representation == "bits":
        bits = (rng.u01_array(d) < 0.5).astype(np.uint8)
        return BitString(bits, validate=False)
    order = np.empty(d, dtype=np.int64)
    _kernels.fill_random_permutation(order, rng.u01_array(d - 1))
    return Permutation(order, validate=False)


def to_natural(inst: ProblemInstance, objectives) -> tuple:
    """Map canonical (minimization) objectives back to the problem's sense."""
    if inst.maximization:
        return tuple(-v for v in objectives)
    return tuple(objectives)


# ---------------------------------------------------------------------------
# Persistence


def instance_id(kind: str, D: int, m: int, K: int | None, seed: int) -> str:
    """Canonical file-name stem for an instance specification."""
    mid = f"{kind}-d{D}-m{m}"
    if kind == "nk":
        mid += f"-k{K}"
    return f"{mid}-s{seed}"


def _payload(inst: ProblemInstance) -> dict:
    if inst.kind == "knapsack":
        return {
            "values": inst.values.tolist(),
            "weights": inst.weights.tolist(),
            "capacities": inst.capacities.tolist(),
        }
    if inst.kind == "tsp":
        return {"costs": inst.costs.tolist()}
    if inst.kind == "qap":
        return {
            "flows": inst.flows.tolist(),
            "locations": inst.locations.tolist(),
            "distances": inst.distances.tolist(),
        }
    return {"partners": inst.partners.tolist(), "tables": inst.tables.tolist()}


def save_instance(inst: ProblemInstance, path: str | Path) -> None:
    """Write an instance as a self-describing JSON document (atomic replace)."""
    doc = {
        "kind": inst.kind,
        "D": inst.D,
        "m": inst.m,
        "seed": inst.seed,
        "payload": _payload(inst),
    }
    if inst.kind == "nk":
        doc["K"] = inst.K
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(doc, sort_keys=True))
    os.replace(tmp, path)


def load_instance(path: str | Path) -> ProblemInstance:
    """Load an instance written by save_instance; round trip is lossless."""
    doc = json.loads(Path(path).read_text())
    kind, D, m, seed = doc["kind"], doc["D"], doc["m"], doc["seed"]
    p = doc["payload"]
    if kind == "knapsack":
        return KnapsackInstance(
            D,
            m,
            seed,
            np.asarray(p["values"], dtype=np.int64),
            np.asarray(p["weights"], dtype=np.int64),
            np.asarray(p["capacities"], dtype=np.int64),
        )
    if kind == "tsp":
        return TspInstance(D, m, seed, np.asarray(p["costs"], dtype=float))
    if kind == "qap":
        return QapInstance(
            D,
            m,
            seed,
            np.asarray(p["flows"], dtype=float),
            np.asarray(p["locations"], dtype=float),
            np.asarray(p["distances"], dtype=float),
        )
    if kind == "nk":
        return NkInstance(
            D,
            m,
            doc["K"],
            seed,
            np.asarray(p["partners"], dtype=np.int64),
            np.asarray(p["tables"], dtype=float),
        )
    raise ValueError(f"unknown problem kind {kind!r}")
