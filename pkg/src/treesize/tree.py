"""Rooted tensor/sum trees over qubit-labeled leaves.

A tree node is one of

* ``Leaf(qubit, a, b)`` -- the single-qubit superposition ``a|0> + b|1>``
  (not required to be normalized; sum weights live in the leaves),
* ``Prod(children)`` -- tensor product of children on disjoint qubit sets,
* ``Sum(children)`` -- sum of children on identical qubit sets.

Canonical form: no Sum directly under Sum, no Prod directly under Prod,
every internal node has at least two children, children sorted by a
structural key.  The size of a tree is its number of leaves; the tree size
of a state is the minimum size over all trees evaluating to it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadPartition, QubitCoverage
from .states import ILO, PureState, normalize


@dataclass(frozen=True)
class Leaf:
    qubit: int
    a: complex
    b: complex


@dataclass(frozen=True)
class Prod:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Sum:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


TreeNode = Leaf | Prod | Sum


def is_leaf(node) -> bool:
    return not hasattr(node, "children")


def qubits(node) -> frozenset[int]:
    """Set of qubits covered by a tree (node or shape)."""
    if is_leaf(node):
        return frozenset((node.qubit,))
    out: frozenset[int] = frozenset()
    for child in node.children:
        out |= qubits(child)
    return out


def size(node) -> int:
    """Number of leaves."""
    if is_leaf(node):
        return 1
    return sum(size(c) for c in node.children)


def iter_leaves(node):
    """Leaves in deterministic pre-order."""
    if is_leaf(node):
        yield node
    else:
        for child in node.children:
            yield from iter_leaves(child)


def validate(node) -> None:
    """Check the structural invariants, raising QubitCoverage on violation."""
    if is_leaf(node):
        return
    if len(node.children) < 2:
        raise QubitCoverage("internal nodes need at least two children")
    child_sets = [qubits(c) for c in node.children]
    if isinstance(node, Prod):
        seen: set[int] = set()
        for cs in child_sets:
            if seen & cs:
                raise QubitCoverage(f"product children overlap on qubits {sorted(seen & cs)}")
            seen |= cs
        if any(isinstance(c, Prod) for c in node.children):
            raise QubitCoverage("product directly under product (not canonical)")
    else:
        first = child_sets[0]
        if any(cs != first for cs in child_sets):
            raise QubitCoverage("sum children cover different qubit sets")
        if any(isinstance(c, Sum) for c in node.children):
            raise QubitCoverage("sum directly under sum (not canonical)")
    for child in node.children:
        validate(child)


def structural_key(node):
    """Total order on trees/shapes: by size, then qubit set, then structure."""
    if is_leaf(node):
        return (1, (node.qubit,), 0, ())
    tag = 1 if isinstance(node, Prod) else 2
    return (size(node), tuple(sorted(qubits(node))), tag, tuple(structural_key(c) for c in node.children))


def canonical(node) -> TreeNode:
    """Flatten nested Sums/Prods, merge aligned single-qubit leaf sums, sort children."""
    if is_leaf(node):
        return node
    kind = type(node)
    flat = []
    for child in (canonical(c) for c in node.children):
        if isinstance(child, kind):
            flat.extend(child.children)
        else:
            flat.append(child)
    if isinstance(node, Sum) and all(is_leaf(c) for c in flat):
        qs = {c.qubit for c in flat}
        if len(qs) == 1:
            q = qs.pop()
            return Leaf(q, sum(c.a for c in flat), sum(c.b for c in flat))
    if len(flat) == 1:
        return flat[0]
    return kind(tuple(sorted(flat, key=structural_key)))


def _eval_node(node, leaf_value):
    """Evaluate to (array over sorted qubit axes, sorted qubit tuple).

    ``leaf_value`` maps a visit counter to a ``(..., 2)`` array, so the same
    walk serves scalar trees and batched shape optimization.  The counter
    advances in pre-order.
    """
    counter = [0]

    def walk(nd):
        if is_leaf(nd):
            val = leaf_value(counter[0], nd)
            counter[0] += 1
            return np.asarray(val, dtype=complex), (nd.qubit,)
        if isinstance(nd, Prod):
            acc, qs = walk(nd.children[0])
            for child in nd.children[1:]:
                arr, cqs = walk(child)
                acc = acc[..., :, None] * arr[..., None, :]
                acc = acc.reshape(acc.shape[: acc.ndim - 2] + (acc.shape[-2] * arr.shape[-1],))
                qs = qs + cqs
            k = len(qs)
            order = np.argsort(qs)
            batch = acc.shape[:-1]
            acc = acc.reshape(batch + (2,) * k)
            acc = np.transpose(acc, tuple(range(len(batch))) + tuple(len(batch) + o for o in order))
            return acc.reshape(batch + (2**k,)), tuple(qs[o] for o in order)
        acc, qs = walk(nd.children[0])
        for child in nd.children[1:]:
            arr, cqs = walk(child)
            if cqs != qs:
                raise QubitCoverage("sum children cover different qubit sets")
            acc = acc + arr
        return acc, qs

    return walk(node)


def evaluate_raw(tree: TreeNode) -> np.ndarray:
    """Unnormalized amplitude vector over the tree's qubits (ascending order)."""
    validate(tree)
    arr, _ = _eval_node(tree, lambda _i, leaf: np.array([leaf.a, leaf.b]))
    return arr


def evaluate(tree: TreeNode, n_qubits: int | None = None) -> PureState:
    """Normalized state of a tree covering qubits 1..n exactly."""
    qs = qubits(tree)
    n = max(qs) if n_qubits is None else n_qubits
    if qs != frozenset(range(1, n + 1)):
        raise QubitCoverage(f"tree covers qubits {sorted(qs)}, expected 1..{n}")
    return normalize(evaluate_raw(tree), n)


def ilo_pullback_tree(tree: TreeNode, op: ILO) -> TreeNode:
    """Absorb an ILO into every leaf on its qubit; shape and size unchanged.

    ``evaluate(result)`` equals ``apply_ilo(evaluate(tree), op)`` up to global
    phase, which is the mechanism making tree size SLOCC-invariant.
    """
    if op.qubit not in qubits(tree):
        raise BadPartition(f"qubit {op.qubit} not covered by tree")

    def walk(nd):
        if is_leaf(nd):
            if nd.qubit != op.qubit:
                return nd
            a, b = op.m @ np.array([nd.a, nd.b])
            return Leaf(nd.qubit, complex(a), complex(b))
        return type(nd)(tuple(walk(c) for c in nd.children))

    return walk(tree)


def scale_tree(tree: TreeNode, factor: complex) -> TreeNode:
    """Multiply the evaluated vector by ``factor`` (scales sums through all children)."""
    if is_leaf(tree):
        return Leaf(tree.qubit, factor * tree.a, factor * tree.b)
    if isinstance(tree, Prod):
        return Prod((scale_tree(tree.children[0], factor),) + tree.children[1:])
    return Sum(tuple(scale_tree(c, factor) for c in tree.children))


def product_of_kets(vectors: dict[int, np.ndarray]) -> Prod | Leaf:
    """Product tree from per-qubit 2-vectors, e.g. ``{1: [1,0], 2: [0,1]}``."""
    leaves = [Leaf(q, complex(v[0]), complex(v[1])) for q, v in sorted(vectors.items())]
    return leaves[0] if len(leaves) == 1 else Prod(tuple(leaves))


# ---------------------------------------------------------------------------
# JSON wire format: {"leaf": {"qubit": q, "a": [re, im], "b": [re, im]}},
# {"prod": [...]}, {"sum": [...]}.

def tree_to_json(tree: TreeNode) -> dict:
    if is_leaf(tree):
        return {
            "leaf": {
                "qubit": tree.qubit,
                "a": [complex(tree.a).real, complex(tree.a).imag],
                "b": [complex(tree.b).real, complex(tree.b).imag],
            }
        }
    tag = "prod" if isinstance(tree, Prod) else "sum"
    return {tag: [tree_to_json(c) for c in tree.children]}


def tree_from_json(data) -> TreeNode:
    if "leaf" in data:
        leaf = data["leaf"]
        return Leaf(int(leaf["qubit"]), complex(*leaf["a"]), complex(*leaf["b"]))
    if "prod" in data:
        return Prod(tuple(tree_from_json(c) for c in data["prod"]))
    if "sum" in data:
        return Sum(tuple(tree_from_json(c) for c in data["sum"]))
    raise QubitCoverage(f"unrecognized tree node {sorted(data)}")
