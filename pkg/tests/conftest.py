"""Shared graph builders for the test suite."""

import pytest

from spangray.embedgraph import MultiGraph, build_embedding


def fan_graph():
    """Hub 0, rim path 1-2-3-4; spokes and rim edges interleaved so the
    dual-tree labeling is the identity for the natural root."""
    return MultiGraph(5, ((0, 1), (1, 2), (0, 2), (2, 3), (0, 3), (3, 4), (0, 4)))


def fan_embedding():
    return build_embedding(fan_graph(), (0, 1, 2, 3, 4))


def diamond_graph():
    return MultiGraph(4, ((0, 1), (1, 2), (0, 2), (2, 3), (0, 3)))


def diamond_embedding():
    return build_embedding(diamond_graph(), (0, 1, 2, 3))


def cycle_graph(n):
    return MultiGraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def bundle_graph(c):
    """Two vertices joined by c parallel edges."""
    return MultiGraph(2, tuple((0, 1) for _ in range(c)))


def complete_graph(n):
    return MultiGraph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def k33_graph():
    return MultiGraph(6, tuple((i, j) for i in range(3) for j in range(3, 6)))


def wheel_graph(k):
    """Hub k joined to a k-cycle 0..k-1."""
    rim = tuple((i, (i + 1) % k) for i in range(k))
    return MultiGraph(k + 1, rim + tuple((i, k) for i in range(k)))


def triangle_with_parallel():
    """Triangle plus a parallel copy of one side; smallest mixed
    digon/triangle multigraph."""
    return MultiGraph(3, ((0, 1), (1, 2), (0, 2), (0, 2)))


def loopy_triangle():
    return MultiGraph(3, ((0, 1), (1, 2), (0, 2), (1, 1)))


@pytest.fixture
def fan():
    return fan_graph()


@pytest.fixture
def fan_emb():
    return fan_embedding()


@pytest.fixture
def diamond():
    return diamond_graph()


@pytest.fixture
def diamond_emb():
    return diamond_embedding()
