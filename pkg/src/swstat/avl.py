"""A small AVL-balanced ordered map that charges every key comparison to a Meter."""
from __future__ import annotations

from typing import Any, Iterator, Optional

from .meter import Meter


class _Node:
    __slots__ = ("key", "value", "left", "right", "height")

    def __init__(self, key, value):
        self.key = key
        self.value = value
        self.left: Optional[_Node] = None
        self.right: Optional[_Node] = None
        self.height = 1


def _h(node: Optional[_Node]) -> int:
    return node.height if node is not None else 0


def _fix(node: _Node) -> None:
    lh, rh = _h(node.left), _h(node.right)
    node.height = (lh if lh > rh else rh) + 1


def _rotate_right(node: _Node) -> _Node:
    top = node.left
    node.left = top.right
    top.right = node
    _fix(node)
    _fix(top)
    return top


def _rotate_left(node: _Node) -> _Node:
    top = node.right
    node.right = top.left
    top.left = node
    _fix(node)
    _fix(top)
    return top


def _balance(node: _Node) -> _Node:
    _fix(node)
    diff = _h(node.left) - _h(node.right)
    if diff > 1:
        if _h(node.left.left) < _h(node.left.right):
            node.left = _rotate_left(node.left)
        return _rotate_right(node)
    if diff < -1:
        if _h(node.right.right) < _h(node.right.left):
            node.right = _rotate_right(node.right)
        return _rotate_left(node)
    return node


class OrderedMap:
    """Balanced search tree keyed by totally ordered keys.

    Each node visited on a search path costs one three-way comparison on
    ``meter.comparisons``; every public lookup or update costs one
    ``meter.dict_ops``.  Stored entries are charged ``cells_per_entry`` cells.
    """

    def __init__(self, meter: Optional[Meter] = None, cells_per_entry: int = 2):
        self.meter = meter if meter is not None else Meter()
        self.cells_per_entry = cells_per_entry
        self._root: Optional[_Node] = None
        self._len = 0

    def __len__(self) -> int:
        return self._len

    def _find(self, key) -> Optional[_Node]:
        meter = self.meter
        meter.dict_ops += 1
        node = self._root
        while node is not None:
            meter.comparisons += 1
            k = node.key
            if key < k:
                node = node.left
            elif key > k:
                node = node.right
            else:
                return node
        return None

    def get(self, key, default=None):
        meter = self.meter
        meter.dict_ops += 1
        node = self._root
        steps = 0
        while node is not None:
            steps += 1
            k = node.key
            if key < k:
                node = node.left
            elif key > k:
                node = node.right
            else:
                meter.comparisons += steps
                return node.value
        meter.comparisons += steps
        return default

    def __contains__(self, key) -> bool:
        return self._find(key) is not None

    def __getitem__(self, key):
        node = self._find(key)
        if node is None:
            raise KeyError(key)
        return node.value

    def __setitem__(self, key, value) -> None:
        self.meter.dict_ops += 1
        self._root = self._insert(self._root, key, value)

    def _insert(self, node: Optional[_Node], key, value) -> _Node:
        if node is None:
            self._len += 1
            self.meter.hold(self.cells_per_entry)
            return _Node(key, value)
        self.meter.comparisons += 1
        if key < node.key:
            node.left = self._insert(node.left, key, value)
        elif key > node.key:
            node.right = self._insert(node.right, key, value)
        else:
            node.value = value
            return node
        return _balance(node)

    def max_item(self) -> tuple[Any, Any]:
        node = self._root
        if node is None:
            raise KeyError("max_item on empty map")
        while node.right is not None:
            node = node.right
        return node.key, node.value

    def pop_max(self) -> tuple[Any, Any]:
        if self._root is None:
            raise KeyError("pop_max on empty map")
        self.meter.dict_ops += 1
        out: list = []
        self._root = self._pop_max(self._root, out)
        self._len -= 1
        self.meter.release(self.cells_per_entry)
        return out[0]

    def _pop_max(self, node: _Node, out: list) -> Optional[_Node]:
        if node.right is None:
            out.append((node.key, node.value))
            return node.left
        node.right = self._pop_max(node.right, out)
        return _balance(node)

    def items(self) -> Iterator[tuple[Any, Any]]:
        stack: list[_Node] = []
        node = self._root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            yield node.key, node.value
            node = node.right

    def clear(self) -> None:
        self.meter.release(self.cells_per_entry * self._len)
        self._root = None
        self._len = 0

    def height(self) -> int:
        return _h(self._root)
