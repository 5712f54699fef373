"""Recursive estimator for the q = 2 Tutte value of a decomposed binary matroid.

The recursion follows the decomposition tree. A 1-sum multiplies the two
estimates. For a 2-sum or 3-sum the smaller side is estimated (through its
minors along the shared elements) to high accuracy and replaced by a
reweighting of the shared elements on the larger side, and the recursion
continues on the larger side alone. Base pieces are evaluated by the exact
oracle; the noisy oracle mode perturbs each base value by a random factor
``e^u`` with ``|u|`` at most the accuracy requested for that call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

import numpy as np

from .decompose import Certificate, DecompTree, Leaf, SumNode, decompose, tree_minor, tree_summary
from .matroid import BinaryMatroid, WeightedMatroid
from .signatures import RHO, replace_2sum_from_estimates, replace_3sum_from_estimates
from .tutte import dual_evaluate, tutte_exact

EPS_FLOOR = 1e-11


class AccuracyUnderflow(ArithmeticError):
    """The requested accuracy is below what float evaluation can honour."""


def noisy_oracle(true_value: float, accuracy: float, rng: np.random.Generator | int | None = None) -> float:
    """``true_value * e^u`` with ``u`` uniform on ``[-accuracy, accuracy]``."""
    if accuracy <= 0:
        raise ValueError("accuracy must be positive")
    rng = np.random.default_rng(rng)
    return float(true_value) * math.exp(rng.uniform(-accuracy, accuracy))


def size_measure(obj) -> int:
    """Ground-set size of a matroid, weighted matroid or tree node.

    For a sum node this is ``|E1| + |E2|`` (shared elements excluded); each
    child counts its shared elements.
    """
    if isinstance(obj, (BinaryMatroid, WeightedMatroid, Leaf, SumNode)):
        return obj.size
    raise TypeError(f"no size for {type(obj).__name__}")


class BudgetEntry(NamedTuple):
    path: str
    kind: str
    size: int
    eps: float
    small_size: int
    minor_eps: float
    large_eps: float
    local_eps: float


@dataclass
class Stats:
    max_depth: int = 0
    nodes: dict = field(default_factory=dict)
    base_sizes: list = field(default_factory=list)
    large_calls: dict = field(default_factory=dict)
    budget: list = field(default_factory=list)
    oracle_calls: int = 0

    def bump(self, kind: str) -> None:
        self.nodes[kind] = self.nodes.get(kind, 0) + 1

    def as_dict(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "nodes": dict(self.nodes),
            "base_sizes": list(self.base_sizes),
            "oracle_calls": self.oracle_calls,
            "large_calls_per_node": sorted(set(self.large_calls.values())),
        }


class EstimateResult(NamedTuple):
    value: float
    eps: float
    oracle: str
    stats: Stats
    tree: DecompTree

    def within(self, exact: float, slack: float = 0.0) -> bool:
        """Whether ``exact`` lies in the ``e^{+-eps}`` sandwich around ``value``."""
        bound = self.eps + slack
        return math.exp(-bound) * exact <= self.value <= math.exp(bound) * exact


class _Engine:
    def __init__(self, oracle: str, rng: np.random.Generator | None):
        if oracle not in ("exact", "noisy"):
            raise ValueError(f"unknown oracle mode {oracle!r}")
        self.noisy = oracle == "noisy"
        self.rng = rng
        self.stats = Stats()

    def base(self, leaf: DecompTree, weights: Mapping[str, float], eps: float) -> float:
        w = WeightedMatroid(leaf.matroid, tuple(float(weights[x]) for x in leaf.matroid.labels))
        if isinstance(leaf, Leaf) and leaf.tag == "cographic":
            val = dual_evaluate(w, check=False, exact=False)
        else:
            val = tutte_exact(w, exact=False)
        self.stats.oracle_calls += 1
        self.stats.base_sizes.append(leaf.size)
        if self.noisy:
            val *= math.exp(self.rng.uniform(-eps, eps))
        return val

    def run(self, node: DecompTree, weights: Mapping[str, float], eps: float, depth: int, path: str) -> float:
        if eps < EPS_FLOOR:
            raise AccuracyUnderflow(f"{path}: accuracy {eps:.3g} is below the floating-point floor {EPS_FLOOR}")
        self.stats.max_depth = max(self.stats.max_depth, depth)
        if isinstance(node, Leaf):
            self.stats.bump(f"leaf:{node.tag}")
            return self.base(node, weights, eps)
        self.stats.bump(f"sum{node.k}")
        m = node.size
        if node.k == 1:
            el, er = eps * node.left.size / m, eps * node.right.size / m
            self.stats.budget.append(BudgetEntry(path, "sum1", m, eps, node.right.size, er, el, 0.0))
            return (self.run(node.left, weights, el, depth + 1, path + ".L")
                    * self.run(node.right, weights, er, depth + 1, path + ".R"))
        big, small = node.left, node.right
        if small.size > big.size:
            big, small = small, big
        m2 = small.size
        local = eps * m2 / (2 * m)
        large_eps = eps * (m - m2) / m
        chi = 0.0 if not self.noisy else local * RHO
        shared = list(node.shared)
        if node.k == 2:
            acc = eps * RHO * m2 / (2 * m)
            p = shared[0]
            z0 = self.run(tree_minor(small, delete=[p]), weights, acc, depth + 1, path + ".R\\p")
            z1 = self.run(tree_minor(small, contract=[p]), weights, acc, depth + 1, path + ".R/p")
            w1 = _weighted(big, weights)
            repl = replace_2sum_from_estimates(w1, p, z0, z1, chi)
        else:
            acc = eps * RHO * m2 / (4 * m)
            zs = [self.run(tree_minor(small, delete=shared), weights, acc, depth + 1, path + ".R\\T")]
            for j in range(3):
                others = [x for x in shared if x != shared[j]]
                zs.append(self.run(tree_minor(small, contract=[shared[j]], delete=others), weights, acc,
                                   depth + 1, f"{path}.R/p{j + 1}"))
            w1 = _weighted(big, weights)
            s_tilde = [zs[j] / zs[0] for j in (1, 2, 3)]
            repl = replace_3sum_from_estimates(w1, shared, zs[0], s_tilde, chi)
        self.stats.budget.append(BudgetEntry(path, f"sum{node.k}", m, eps, m2, acc, large_eps, local))
        self.stats.large_calls[path] = self.stats.large_calls.get(path, 0) + 1
        new_weights = dict(weights)
        for x in shared:
            new_weights[x] = float(repl.weighted.weight(x))
        return float(repl.scale) * self.run(big, new_weights, large_eps, depth + 1, path + ".L")


def _weighted(node: DecompTree, weights: Mapping[str, float]) -> WeightedMatroid:
    m = node.matroid
    return WeightedMatroid(m, tuple(float(weights.get(x, 0.0)) for x in m.labels))


def estimate(w: WeightedMatroid, eps: float, certificate: Certificate | DecompTree | None = None,
             oracle: str = "exact", seed: int | None = None) -> EstimateResult:
    """Estimate ``Z(M; gamma)`` to within a factor ``e^{+-eps}``.

    ``certificate`` may be a parsed certificate (validated against ``w``) or
    an already validated tree; otherwise the decomposition is searched.
    """
    if not 0 < eps <= 1:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    if any(g < 0 for g in w.weights):
        raise ValueError("weights must be non-negative")
    if isinstance(certificate, (Leaf, SumNode)):
        tree = certificate
        if not tree.matroid.same_cycle_space(w.matroid):
            raise ValueError("tree does not decompose the given matroid")
    else:
        tree = decompose(w.matroid, certificate)
    engine = _Engine(oracle, np.random.default_rng(seed) if oracle == "noisy" else None)
    weights = {x: float(g) for x, g in zip(w.labels, w.weights)}
    value = engine.run(tree, weights, eps, 0, "root")
    return EstimateResult(value, eps, oracle, engine.stats, tree)


def _pairs(items) -> str:
    return ",".join(items) or "none"


def format_result(result: EstimateResult) -> str:
    """Key-value text block describing an estimate."""
    summary = tree_summary(result.tree)
    stats = result.stats.as_dict()
    lines = [
        f"estimate: {result.value!r}",
        f"eps: {result.eps!r}",
        f"oracle: {result.oracle}",
        f"tree.depth: {summary['depth']}",
        "tree.leaves: " + _pairs(f"{k}={v}" for k, v in sorted(summary["leaves"].items())),
        "tree.sums: " + _pairs(f"{k}-sum={v}" for k, v in sorted(summary["sums"].items())),
        f"stats.max_depth: {stats['max_depth']}",
        "stats.nodes: " + _pairs(f"{k}={v}" for k, v in sorted(stats["nodes"].items())),
        f"stats.oracle_calls: {stats['oracle_calls']}",
        "stats.base_sizes: " + _pairs(str(s) for s in stats["base_sizes"]),
    ]
    return "\n".join(lines)
