"""Tree shapes: trees with qubit labels but no leaf amplitudes.

Provides the named catalog (the product/entangled pair shapes for two
qubits, T_P/T_B/T_GHZ/T_W for three, and the tensor-rooted primitives
T4..T9 plus their sum composites for four) and exhaustive enumeration of
all canonical shapes under a leaf budget.  Shapes carry concrete qubit
assignments; which qubits cross between branches matters for tree size,
so every inequivalent assignment is kept.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache

from .errors import BudgetTooLarge, Unsupported
from .tree import Leaf, Prod, Sum, TreeNode, is_leaf, iter_leaves, size, structural_key

DEFAULT_SHAPE_CAP = 10**6
SHAPE_CAP_ENV = "TREESIZE_MAX_SHAPES"


@dataclass(frozen=True)
class ShapeLeaf:
    qubit: int


@dataclass(frozen=True)
class ShapeProd:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(sorted(self.children, key=structural_key)))


@dataclass(frozen=True)
class ShapeSum:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(sorted(self.children, key=structural_key)))


TreeShape = ShapeLeaf | ShapeProd | ShapeSum


def shape_of(tree: TreeNode) -> TreeShape:
    """Forget amplitudes, keep structure and qubit labels."""
    if is_leaf(tree):
        return ShapeLeaf(tree.qubit)
    cls = ShapeProd if isinstance(tree, Prod) else ShapeSum
    return cls(tuple(shape_of(c) for c in tree.children))


def instantiate(shape: TreeShape, values) -> TreeNode:
    """Tree from a shape plus per-leaf ``(a, b)`` pairs in pre-order."""
    values = list(values)
    counter = [0]

    def walk(nd):
        if is_leaf(nd):
            a, b = values[counter[0]]
            counter[0] += 1
            return Leaf(nd.qubit, complex(a), complex(b))
        cls = Prod if isinstance(nd, ShapeProd) else Sum
        return cls(tuple(walk(c) for c in nd.children))

    out = walk(shape)
    if counter[0] != len(values):
        raise ValueError(f"shape has {counter[0]} leaves, got {len(values)} values")
    return out


@dataclass(frozen=True)
class CatalogEntry:
    """A named shape family with all inequivalent qubit-to-leaf assignments."""

    name: str
    size: int
    variants: tuple


def _leaf(q):
    return ShapeLeaf(q)


def _te(qa, qb):
    pair = ShapeProd((_leaf(qa), _leaf(qb)))
    return ShapeSum((pair, pair))


def _tp3(qs):
    return ShapeProd(tuple(_leaf(q) for q in qs))


def _tb(singleton, pair):
    return ShapeProd((_leaf(singleton), _te(*pair)))


def _tghz(qs):
    term = _tp3(qs)
    return ShapeSum((term, term))


def _tw(qs, inner_singleton):
    rest = tuple(q for q in qs if q != inner_singleton)
    branch = ShapeProd((_leaf(inner_singleton), _te(*rest)))
    return ShapeSum((_tp3(qs), branch))


def _t4():
    return ShapeProd(tuple(_leaf(q) for q in (1, 2, 3, 4)))


def _t6(pair):
    rest = tuple(q for q in (1, 2, 3, 4) if q not in pair)
    return ShapeProd((_leaf(rest[0]), _leaf(rest[1]), _te(*pair)))


def _t7(singleton):
    rest = tuple(q for q in (1, 2, 3, 4) if q != singleton)
    return ShapeProd((_leaf(singleton), _tghz(rest)))


def _t8(pairing):
    (a, b), (c, d) = pairing
    return ShapeProd((_te(a, b), _te(c, d)))


def _t9(singleton, inner_singleton):
    rest = tuple(q for q in (1, 2, 3, 4) if q != singleton)
    return ShapeProd((_leaf(singleton), _tw(rest, inner_singleton)))


def _pairings4():
    return [((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))]


def _sum_combos(branch_lists):
    """Deduplicated ShapeSums over one variant choice per branch family."""
    seen = {}
    for combo in itertools.product(*branch_lists):
        shape = ShapeSum(tuple(combo))
        seen.setdefault(structural_key(shape), shape)
    return tuple(seen[k] for k in sorted(seen))


def catalog(n: int) -> list[CatalogEntry]:
    """Named shapes for ``n`` qubits, sizes as drawn in the source figures."""
    if n == 2:
        return [
            CatalogEntry("product", 2, (ShapeProd((_leaf(1), _leaf(2))),)),
            CatalogEntry("T_E", 4, (_te(1, 2),)),
        ]
    if n == 3:
        pairs = [(2, 3), (1, 3), (1, 2)]
        return [
            CatalogEntry("T_P", 3, (_tp3((1, 2, 3)),)),
            CatalogEntry("T_B", 5, tuple(_tb(s, p) for s, p in zip((1, 2, 3), pairs))),
            CatalogEntry("T_GHZ", 6, (_tghz((1, 2, 3)),)),
            CatalogEntry("T_W", 8, tuple(_tw((1, 2, 3), s) for s in (1, 2, 3))),
        ]
    if n == 4:
        t4 = (_t4(),)
        t6 = tuple(_t6(p) for p in itertools.combinations((1, 2, 3, 4), 2))
        t7 = tuple(_t7(s) for s in (1, 2, 3, 4))
        t8 = tuple(_t8(p) for p in _pairings4())
        t9 = tuple(_t9(s, i) for s in (1, 2, 3, 4) for i in (q for q in (1, 2, 3, 4) if q != s))
        entries = [
            CatalogEntry("T4", 4, t4),
            CatalogEntry("T6", 6, t6),
            CatalogEntry("T7", 7, t7),
            CatalogEntry("T8", 8, t8),
            CatalogEntry("T9", 9, t9),
            CatalogEntry("T4+T4+T4", 12, _sum_combos([t4, t4, t4])),
            CatalogEntry("T4+T8", 12, _sum_combos([t4, t8])),
            CatalogEntry("T6+T7", 13, _sum_combos([t6, t7])),
            CatalogEntry("T4+T9", 13, _sum_combos([t4, t9])),
            CatalogEntry("T7+T7", 14, _sum_combos([t7, t7])),
            CatalogEntry("T6+T9", 15, _sum_combos([t6, t9])),
            CatalogEntry("T7+T8", 15, _sum_combos([t7, t8])),
            CatalogEntry("T4+T4+T7", 15, _sum_combos([t4, t4, t7])),
            CatalogEntry("T8+T8", 16, _sum_combos([t8, t8])),
        ]
        return entries
    raise Unsupported(f"catalog covers 2-4 qubits, got n={n}")


# ---------------------------------------------------------------------------
# Exhaustive enumeration.  Canonical shapes over a qubit set Q:
#   |Q| = 1: the single leaf;
#   products: one non-product child per block of a >=2-block set partition
#     (leaf for singleton blocks, a sum otherwise);
#   sums: multisets of >= 2 products over Q.

def _set_partitions(items: tuple):
    if len(items) == 1:
        yield [items]
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [(first,) + part[i]] + part[i + 1 :]
        yield [(first,)] + part


@lru_cache(maxsize=None)
def _products_over(qs: tuple, budget: int) -> tuple:
    if len(qs) < 2 or budget < len(qs):
        return ()
    out = []
    for blocks in _set_partitions(qs):
        if len(blocks) < 2:
            continue
        options = []
        for block in blocks:
            if len(block) == 1:
                options.append((ShapeLeaf(block[0]),))
            else:
                options.append(_sums_over(tuple(sorted(block)), budget - (len(qs) - len(block))))
        for combo in itertools.product(*options):
            if sum(size(c) for c in combo) <= budget:
                out.append(ShapeProd(combo))
    return tuple(dict.fromkeys(out))


@lru_cache(maxsize=None)
def _sums_over(qs: tuple, budget: int) -> tuple:
    terms = sorted(_products_over(qs, budget - len(qs)), key=structural_key)
    out = []

    def extend(start: int, chosen: list, used: int):
        if len(chosen) >= 2:
            out.append(ShapeSum(tuple(chosen)))
        for i in range(start, len(terms)):
            s = size(terms[i])
            if used + s > budget:
                continue
            chosen.append(terms[i])
            extend(i, chosen, used + s)
            chosen.pop()

    extend(0, [], 0)
    return tuple(out)


def shape_cap() -> int:
    raw = os.environ.get(SHAPE_CAP_ENV)
    return int(raw) if raw else DEFAULT_SHAPE_CAP


def enumerate_shapes(n: int, max_leaves: int, cap: int | None = None) -> list[TreeShape]:
    """All structurally distinct canonical shapes on qubits 1..n with <= max_leaves.

    Deterministically ordered by (size, structural key); includes every
    catalog shape.  Raises BudgetTooLarge if the result would exceed the cap
    (default 10**6, overridable via TREESIZE_MAX_SHAPES).
    """
    if not 2 <= n <= 4:
        raise Unsupported(f"enumeration covers 2-4 qubits, got n={n}")
    if max_leaves > 16:
        raise BudgetTooLarge("enumeration is limited to 16 leaves")
    cap = shape_cap() if cap is None else cap
    qs = tuple(range(1, n + 1))
    shapes = list(_products_over(qs, max_leaves)) + list(_sums_over(qs, max_leaves))
    if len(shapes) > cap:
        raise BudgetTooLarge(f"{len(shapes)} shapes exceeds cap {cap}")
    return sorted(shapes, key=lambda s: (size(s), structural_key(s)))


def shapes_by_size(n: int, max_leaves: int, cap: int | None = None) -> dict[int, list[TreeShape]]:
    """Enumerated shapes grouped by leaf count."""
    grouped: dict[int, list[TreeShape]] = {}
    for shape in enumerate_shapes(n, max_leaves, cap):
        grouped.setdefault(size(shape), []).append(shape)
    return grouped


def leaf_qubit_order(shape: TreeShape) -> tuple[int, ...]:
    """Qubit labels of the leaves in pre-order (the instantiation order)."""
    return tuple(leaf.qubit for leaf in iter_leaves(shape))
