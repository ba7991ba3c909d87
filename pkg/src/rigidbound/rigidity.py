"""Laman graphs: the (2,3)-pebble game, Henneberg steps and enumeration."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Literal

from .graph import Graph, canonical_form, induced_subgraph, _bits

log = logging.getLogger(__name__)

TRIANGLE = Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])

# (n, H1 count, H2 count) for Laman graphs up to isomorphism
EXPECTED_COUNTS = {3: (1, 0), 4: (1, 0), 5: (3, 0), 6: (11, 2), 7: (61, 9), 8: (499, 109)}


class NotLamanError(ValueError):
    pass


# -- pebble game --------------------------------------------------------------

class PebbleGame:
    """Incremental (2,3)-pebble game.

    Each vertex starts with two pebbles.  An edge is accepted when four
    pebbles can be collected on its endpoints; one of them then covers it.
    """

    def __init__(self, n: int):
        self.pebbles = [2] * n
        self.out: list[list[int]] = [[] for _ in range(n)]

    def _find_pebble(self, root: int, blocked: int) -> bool:
        # depth-first search along edge orientations; reverse the path found
        parent = {root: None}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y in parent or y == blocked:
                    continue
                parent[y] = x
                if self.pebbles[y]:
                    self.pebbles[y] -= 1
                    self.pebbles[root] += 1
                    while parent[y] is not None:
                        x = parent[y]
                        self.out[x].remove(y)
                        self.out[y].append(x)
                        y = x
                    return True
                stack.append(y)
        return False

    def try_add(self, u: int, v: int) -> bool:
        while self.pebbles[u] + self.pebbles[v] < 4:
            if self.pebbles[u] < 2 and self._find_pebble(u, v):
                continue
            if self.pebbles[v] < 2 and self._find_pebble(v, u):
                continue
            return False
        self.pebbles[u] -= 1
        self.out[u].append(v)
        return True


def pebble_rank(g: Graph) -> int:
    """Rank of the edge set in the planar generic rigidity matroid."""
    game = PebbleGame(g.n)
    return sum(game.try_add(u, v) for u, v in g.edges())


def is_laman(g: Graph) -> bool:
    if g.n < 2:
        return False
    m = g.edge_count
    return m == 2 * g.n - 3 and pebble_rank(g) == m


def is_rigid(g: Graph) -> bool:
    return pebble_rank(g) == 2 * g.n - 3


def is_redundantly_rigid(g: Graph) -> bool:
    target = 2 * g.n - 3
    if pebble_rank(g) != target:
        return False
    return all(pebble_rank(g.with_edges(remove=[e])) == target for e in g.edges())


def is_laman_naive(g: Graph) -> bool:
    """Definition check over all vertex subsets; exponential, for testing."""
    if g.edge_count != 2 * g.n - 3:
        return False
    edges = g.edges()
    for k in range(2, g.n):
        for sub in combinations(range(g.n), k):
            s = set(sub)
            if sum(u in s and v in s for u, v in edges) > 2 * k - 3:
                return False
    return True


# -- Henneberg steps ----------------------------------------------------------

@dataclass(frozen=True)
class HennebergStep:
    kind: Literal["H1", "H2"]
    attach: tuple[int, ...]
    removed: tuple[int, int] | None = None

    def __post_init__(self):
        if len(set(self.attach)) != len(self.attach):
            raise ValueError("attachment vertices must be distinct")
        if self.kind == "H1":
            if len(self.attach) != 2 or self.removed is not None:
                raise ValueError("H1 attaches to two vertices and removes nothing")
        elif self.kind == "H2":
            if len(self.attach) != 3 or self.removed is None:
                raise ValueError("H2 attaches to three vertices and removes one edge")
            if not set(self.removed) <= set(self.attach) or len(set(self.removed)) != 2:
                raise ValueError("H2 removed edge must join two attachment vertices")
        else:
            raise ValueError(f"unknown step kind {self.kind!r}")

    def apply(self, g: Graph) -> Graph:
        if self.removed is not None:
            if not g.has_edge(*self.removed):
                raise ValueError(f"edge {self.removed} not present")
            g = g.with_edges(remove=[self.removed])
        return g.add_vertex(self.attach)

    def to_json(self) -> dict:
        d = {"kind": self.kind, "attach": list(self.attach)}
        if self.removed is not None:
            d["removed"] = list(self.removed)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "HennebergStep":
        removed = tuple(d["removed"]) if d.get("removed") is not None else None
        return cls(d["kind"], tuple(d["attach"]), removed)


@dataclass(frozen=True)
class HennebergTrace:
    steps: tuple[HennebergStep, ...] = field(default_factory=tuple)

    def replay(self) -> Graph:
        g = TRIANGLE
        for step in self.steps:
            g = step.apply(g)
        return g

    def extended(self, step: HennebergStep) -> "HennebergTrace":
        return HennebergTrace(self.steps + (step,))

    def __len__(self) -> int:
        return len(self.steps)


def successor_steps(g: Graph) -> Iterator[tuple[HennebergStep, Graph]]:
    """Every single Henneberg step on ``g`` with its resulting labeled graph."""
    for pair in combinations(range(g.n), 2):
        step = HennebergStep("H1", pair)
        yield step, step.apply(g)
    for triple in combinations(range(g.n), 3):
        for e in combinations(triple, 2):
            if g.has_edge(*e):
                step = HennebergStep("H2", triple, e)
                yield step, step.apply(g)


def henneberg_successors(g: Graph) -> list[Graph]:
    return [child for _, child in successor_steps(g)]


def enumerate_laman(n: int) -> dict[bytes, tuple[Graph, HennebergTrace]]:
    """One representative per isomorphism class of Laman graphs on ``n`` vertices.

    Breadth first from the triangle; each level is deduplicated by canonical
    code and the first trace reaching a class is kept.  Keys are sorted.
    """
    if not 3 <= n <= 10:
        raise ValueError("enumeration supported for 3 <= n <= 10")
    level = {canonical_form(TRIANGLE): (TRIANGLE, HennebergTrace())}
    for k in range(4, n + 1):
        nxt: dict[bytes, tuple[Graph, HennebergTrace]] = {}
        for code in sorted(level):
            parent, trace = level[code]
            for step, child in successor_steps(parent):
                c = canonical_form(child)
                if c not in nxt:
                    nxt[c] = (child, trace.extended(step))
        level = {c: nxt[c] for c in sorted(nxt)}
        log.debug("n=%d: %d Laman graphs", k, len(level))
    return level


# -- H1 / H2 classification ---------------------------------------------------

def h1_removal_order(g: Graph) -> list[int] | None:
    """Degree-2 vertex removal sequence reducing ``g`` to a triangle, if any.

    Backtracks over all removal choices (memoised on the surviving vertex set).
    """

    @lru_cache(maxsize=None)
    def reduce(alive: int) -> tuple[int, ...] | None:
        if alive.bit_count() == 3:
            return ()
        for v in _bits(alive):
            if (g.adj[v] & alive).bit_count() == 2:
                rest = reduce(alive & ~(1 << v))
                if rest is not None:
                    return (v,) + rest
        return None

    order = reduce((1 << g.n) - 1)
    return None if order is None else list(order)


def classify(g: Graph) -> Literal["H1", "H2"]:
    if not is_laman(g):
        raise NotLamanError("classification requires a Laman graph")
    return "H1" if h1_removal_order(g) is not None else "H2"


def h1_trace(g: Graph) -> tuple[HennebergTrace, list[int]]:
    """All-H1 trace for an H1 graph plus the vertex labeling it replays to.

    ``labels[i]`` is the vertex of ``g`` created as vertex ``i`` by the replay.
    """
    order = h1_removal_order(g)
    if order is None:
        raise ValueError("graph is not H1")
    labels = sorted(set(range(g.n)) - set(order))
    pos = {v: i for i, v in enumerate(labels)}
    steps = []
    for v in reversed(order):
        a, b = sorted(pos[u] for u in g.neighbors(v) if u in pos)
        steps.append(HennebergStep("H1", (a, b)))
        pos[v] = len(labels)
        labels.append(v)
    return HennebergTrace(tuple(steps)), labels


def remove_degree2(g: Graph, v: int) -> Graph:
    if g.degree(v) != 2:
        raise ValueError(f"vertex {v} has degree {g.degree(v)}")
    return induced_subgraph(g, [u for u in range(g.n) if u != v])
