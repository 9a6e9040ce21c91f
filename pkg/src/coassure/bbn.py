"""Discrete Bayesian network: CPT construction, exact inference, enumeration oracle.

All nodes are binary with the ordered state pair (not_violated, violated).
CPT rows are indexed by the binary encoding of the parent states, first
parent most significant, violated = 1; each row is the distribution
(p_not_violated, p_violated).

Two inference routes are deliberately kept independent:
:func:`posterior_marginals` runs variable elimination with a min-degree
ordering, while :func:`brute_force_marginals` materializes the full joint
tensor and sums it. Their agreement is the correctness check for both.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    InconsistentEvidenceError,
    InferenceError,
    ModelError,
    NotFoundError,
    ParseError,
)
from .links import NetworkSpec, NoisyOrCpt, OrCpt, PriorCpt

NOT_VIOLATED = "not_violated"
VIOLATED = "violated"
STATES = (NOT_VIOLATED, VIOLATED)

ROW_SUM_TOL = 1e-12
ENUMERATION_LIMIT = 24

Evidence = Mapping[str, str]
Posterior = dict[str, float]


def noisy_or_row(parent_flags: Sequence[int], weights: Sequence[float], leak: float = 0.0) -> float:
    """P(violated) for one noisy-OR row: 1 - (1-leak) * prod over set flags of (1-w_i)."""
    if len(parent_flags) != len(weights):
        raise ModelError(
            f"{len(parent_flags)} parent flags but {len(weights)} weights"
        )
    survive = 1.0 - leak
    for flag, weight in zip(parent_flags, weights):
        if flag:
            survive *= 1.0 - weight
    return 1.0 - survive


def _rows(n_parents: int) -> Iterable[tuple[int, ...]]:
    """All parent-flag combinations in row order (first parent = MSB)."""
    for index in range(2 ** n_parents):
        yield tuple((index >> (n_parents - 1 - i)) & 1 for i in range(n_parents))


def noisy_or_cpt(weights: Sequence[float], leak: float = 0.0) -> tuple[tuple[float, float], ...]:
    """Full noisy-OR table for the given per-parent weights."""
    table = []
    for flags in _rows(len(weights)):
        p = noisy_or_row(flags, weights, leak)
        table.append((1.0 - p, p))
    return tuple(table)


def or_cpt(n_parents: int) -> tuple[tuple[float, float], ...]:
    """Deterministic OR: violated iff any parent is violated."""
    return tuple(
        (0.0, 1.0) if any(flags) else (1.0, 0.0) for flags in _rows(n_parents)
    )


def prior_cpt(p_violated: float) -> tuple[tuple[float, float], ...]:
    return ((1.0 - p_violated, p_violated),)


@dataclass(frozen=True)
class Node:
    id: str
    parents: tuple[str, ...]
    cpt: tuple[tuple[float, float], ...]


class Network:
    """Validated, immutable DAG of binary nodes with materialized CPTs."""

    def __init__(self, nodes: Sequence[Node]):
        self.nodes: tuple[Node, ...] = tuple(nodes)
        self._by_id = {n.id: n for n in self.nodes}
        if len(self._by_id) != len(self.nodes):
            raise ModelError("duplicate node ids in network")
        for node in self.nodes:
            for parent in node.parents:
                if parent not in self._by_id:
                    raise ModelError(f"node {node.id!r}: unknown parent {parent!r}")
            expected_rows = 2 ** len(node.parents)
            if len(node.cpt) != expected_rows:
                raise ModelError(
                    f"node {node.id!r}: cpt has {len(node.cpt)} rows, expected {expected_rows}"
                )
            for row in node.cpt:
                if len(row) != 2:
                    raise ModelError(f"node {node.id!r}: cpt row must have two entries")
                if not all(0.0 <= p <= 1.0 for p in row):
                    raise ModelError(f"node {node.id!r}: cpt entries must be in [0, 1]")
                if abs(row[0] + row[1] - 1.0) > ROW_SUM_TOL:
                    raise ModelError(f"node {node.id!r}: cpt row {row} does not sum to 1")
        self.topo_order = self._toposort()

    def _toposort(self) -> tuple[str, ...]:
        remaining = {n.id: set(n.parents) for n in self.nodes}
        order: list[str] = []
        while remaining:
            ready = sorted(nid for nid, deps in remaining.items() if not deps)
            if not ready:
                raise ModelError("network contains a cycle")
            for nid in ready:
                order.append(nid)
                del remaining[nid]
            for deps in remaining.values():
                deps.difference_update(ready)
        return tuple(order)

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._by_id

    def node(self, node_id: str) -> Node:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise NotFoundError(f"no network node {node_id!r}") from None

    def descendants(self, node_id: str) -> set[str]:
        children: dict[str, set[str]] = {n.id: set() for n in self.nodes}
        for node in self.nodes:
            for parent in node.parents:
                children[parent].add(node.id)
        seen: set[str] = set()
        stack = [node_id]
        while stack:
            for child in children[stack.pop()]:
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        return seen


def build_network(spec: NetworkSpec) -> Network:
    """Materialize a network spec into full CPTs."""
    nodes = []
    for node_spec in spec.nodes:
        if isinstance(node_spec.cpt, PriorCpt):
            cpt = prior_cpt(node_spec.cpt.p)
        elif isinstance(node_spec.cpt, NoisyOrCpt):
            cpt = noisy_or_cpt(node_spec.cpt.weights, node_spec.cpt.leak)
        elif isinstance(node_spec.cpt, OrCpt):
            cpt = or_cpt(len(node_spec.parents))
        else:
            raise ModelError(f"node {node_spec.id!r}: unknown cpt spec {node_spec.cpt!r}")
        nodes.append(Node(node_spec.id, node_spec.parents, cpt))
    return Network(nodes)


def _check_evidence(network: Network, evidence: Evidence) -> dict[str, int]:
    observed: dict[str, int] = {}
    for node_id, state in evidence.items():
        if node_id not in network:
            raise NotFoundError(f"evidence names unknown node {node_id!r}")
        if state not in STATES:
            raise InferenceError(
                f"evidence for {node_id!r} must be 'violated' or 'not_violated', got {state!r}"
            )
        observed[node_id] = STATES.index(state)
    return observed


# -- variable elimination -----------------------------------------------------

class _Factor:
    __slots__ = ("vars", "table")

    def __init__(self, variables: tuple[str, ...], table: np.ndarray):
        self.vars = variables
        self.table = table


def _node_factor(node: Node, observed: Mapping[str, int]) -> _Factor:
    shape = (2,) * len(node.parents) + (2,)
    table = np.asarray(node.cpt, dtype=float).reshape(shape)
    variables = node.parents + (node.id,)
    # Slice out observed variables immediately.
    index = tuple(observed.get(v, slice(None)) for v in variables)
    kept = tuple(v for v in variables if v not in observed)
    return _Factor(kept, table[index])


def _multiply(a: _Factor, b: _Factor) -> _Factor:
    union = a.vars + tuple(v for v in b.vars if v not in a.vars)
    return _Factor(union, _expand(a, union) * _expand(b, union))


def _expand(factor: _Factor, union: tuple[str, ...]) -> np.ndarray:
    if factor.vars == union:
        return factor.table
    perm = [factor.vars.index(v) for v in union if v in factor.vars]
    table = np.transpose(factor.table, perm)
    shape = tuple(2 if v in factor.vars else 1 for v in union)
    return table.reshape(shape)

def _sum_out(factor: _Factor, var: str) -> _Factor:
    axis = factor.vars.index(var)
    kept = factor.vars[:axis] + factor.vars[axis + 1:]
    return _Factor(kept, factor.table.sum(axis=axis))


def _min_degree_order(factors: list[_Factor], eliminate: set[str]) -> list[str]:
    """Greedy min-degree elimination order on the interaction graph."""
    neighbors: dict[str, set[str]] = {}
    for factor in factors:
        for v in factor.vars:
            neighbors.setdefault(v, set()).update(factor.vars)
    for v, adjacent in neighbors.items():
        adjacent.discard(v)
    order = []
    pending = set(eliminate)
    while pending:
        var = min(pending, key=lambda v: (len(neighbors.get(v, ()) & set(neighbors)), v))
        order.append(var)
        pending.discard(var)
        adjacent = neighbors.pop(var, set())
        for u in adjacent:
            if u in neighbors:
                neighbors[u].discard(var)
                neighbors[u].update(a for a in adjacent if a != u and a in neighbors)
    return order


def _eliminate_all(factors: list[_Factor], eliminate: set[str]) -> list[_Factor]:
    factors = list(factors)
    for var in _min_degree_order(factors, eliminate):
        touching = [f for f in factors if var in f.vars]
        rest = [f for f in factors if var not in f.vars]
        if not touching:
            continue
        product = touching[0]
        for f in touching[1:]:
            product = _multiply(product, f)
        factors = rest + [_sum_out(product, var)]
    return factors


def _scalar(factors: list[_Factor]) -> float:
    value = 1.0
    for f in factors:
        value *= float(f.table.reshape(()))
    return value


def posterior_marginals(network: Network, evidence: Evidence) -> Posterior:
    """Exact P(node = violated | evidence) for every node, by variable elimination.

    Observed nodes report exactly 0.0 or 1.0. Raises
    InconsistentEvidenceError when the evidence has probability zero.
    """
    observed = _check_evidence(network, evidence)
    base = [_node_factor(node, observed) for node in network.nodes]
    unobserved = [n.id for n in network.nodes if n.id not in observed]

    # P(evidence): eliminating everything must leave positive mass.
    z = _scalar(_eliminate_all(base, set(unobserved)))
    if z <= 0.0:
        raise InconsistentEvidenceError("evidence has probability zero under the model")

    posterior: Posterior = {}
    for node_id, state_index in observed.items():
        posterior[node_id] = float(state_index)
    for node_id in unobserved:
        remaining = _eliminate_all(base, set(unobserved) - {node_id})
        result = _Factor((), np.array(1.0))
        for factor in remaining:
            result = _multiply(result, factor)
        vec = _expand(result, (node_id,))
        total = float(vec[0] + vec[1])
        if total <= 0.0:
            raise InconsistentEvidenceError("evidence has probability zero under the model")
        posterior[node_id] = float(vec[1]) / total
    return posterior


# -- enumeration oracle ---------------------------------------------------------

def brute_force_marginals(network: Network, evidence: Evidence) -> Posterior:
    """Posterior marginals by summing the full joint over all assignments.

    Independent of the variable-elimination path; bounded to
    ENUMERATION_LIMIT nodes because the joint is materialized in full.
    """
    if len(network) > ENUMERATION_LIMIT:
        raise InferenceError(
            f"network has {len(network)} nodes; enumeration is bounded to {ENUMERATION_LIMIT}"
        )
    observed = _check_evidence(network, evidence)
    n = len(network)
    axis_of = {node.id: i for i, node in enumerate(network.nodes)}

    joint = np.ones((2,) * n)
    for node in network.nodes:
        axes = [axis_of[p] for p in node.parents] + [axis_of[node.id]]
        table = np.asarray(node.cpt, dtype=float).reshape((2,) * len(axes))
        order = np.argsort(axes)
        table = np.transpose(table, order)
        shape = [1] * n
        for axis in axes:
            shape[axis] = 2
        joint *= table.reshape(shape)

    for node_id, state_index in observed.items():
        mask = np.zeros(2)
        mask[state_index] = 1.0
        shape = [1] * n
        shape[axis_of[node_id]] = 2
        joint *= mask.reshape(shape)

    total = float(joint.sum())
    if total <= 0.0:
        raise InconsistentEvidenceError("evidence has probability zero under the model")

    posterior: Posterior = {}
    for node in network.nodes:
        axis = axis_of[node.id]
        other_axes = tuple(i for i in range(n) if i != axis)
        marginal = joint.sum(axis=other_axes)
        posterior[node.id] = float(marginal[1]) / total
    # Pin observed nodes to exact point masses, matching the main path.
    for node_id, state_index in observed.items():
        posterior[node_id] = float(state_index)
    return posterior


# -- interchange format ----------------------------------------------------------

def network_to_doc(network: Network) -> dict:
    return {
        "nodes": [
            {"id": n.id, "parents": list(n.parents), "cpt": [list(row) for row in n.cpt]}
            for n in network.nodes
        ]
    }


def network_from_doc(doc: Mapping) -> Network:
    if not isinstance(doc, Mapping):
        raise ParseError("network document must be a JSON object")
    unknown = set(doc) - {"nodes"}
    if unknown:
        raise ParseError(f"unknown key(s) in network document: {', '.join(sorted(unknown))}")
    raw_nodes = doc.get("nodes", [])
    if not isinstance(raw_nodes, list):
        raise ParseError("'nodes' must be a list")
    nodes = []
    for entry in raw_nodes:
        if not isinstance(entry, Mapping):
            raise ParseError("node entry must be an object")
        unknown = set(entry) - {"id", "parents", "cpt"}
        if unknown:
            raise ParseError(f"unknown key(s) in node: {', '.join(sorted(unknown))}")
        try:
            node_id = entry["id"]
            parents = entry["parents"]
            cpt = entry["cpt"]
        except KeyError as exc:
            raise ParseError(f"node missing required key {exc.args[0]!r}") from None
        if not isinstance(parents, list):
            raise ParseError(f"node {node_id}: 'parents' must be a list")
        if not isinstance(cpt, list):
            raise ParseError(f"node {node_id}: 'cpt' must be a list of rows")
        rows = []
        for row in cpt:
            if not isinstance(row, list) or len(row) != 2:
                raise ParseError(f"node {node_id}: each cpt row must be a pair")
            rows.append((float(row[0]), float(row[1])))
        nodes.append(Node(node_id, tuple(parents), tuple(rows)))
    return Network(nodes)
