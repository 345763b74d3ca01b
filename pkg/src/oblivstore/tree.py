"""Heap-array geometry of the bucket tree.

Buckets live in a growable array; bucket ``i`` has children ``2i+1`` and
``2i+2`` where those indices exist. A leaf is a childless bucket, so for a
tree of ``n`` buckets the leaves are exactly ``range(n // 2, n)``. The tree
may end mid-level: a node with a single child is not a leaf.
"""

from __future__ import annotations

from .errors import InvalidLeafError, NotALeafError


def parent(index: int) -> int:
    return (index - 1) // 2


def is_leaf(index: int, n: int) -> bool:
    """True when bucket ``index`` is childless in a tree of ``n`` buckets."""
    return 0 <= index < n and 2 * index + 1 >= n


def leaf_range(n: int) -> range:
    """All leaf indices of a tree with ``n`` buckets."""
    return range(n // 2, n)


def path_indices(leaf: int, n: int) -> list[int]:
    """Bucket indices from the root to ``leaf``, inclusive.

    Raises InvalidLeafError if ``leaf`` is outside the tree and NotALeafError
    if it has a child.
    """
    if not 0 <= leaf < n:
        raise InvalidLeafError(f"leaf {leaf} outside tree of {n} buckets")
    if 2 * leaf + 1 < n:
        raise NotALeafError(f"bucket {leaf} has children in tree of {n} buckets")
    path = [leaf]
    node = leaf
    while node > 0:
        node = parent(node)
        path.append(node)
    path.reverse()
    return path
