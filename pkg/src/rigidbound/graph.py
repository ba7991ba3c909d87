"""Small simple graphs stored as per-vertex neighbour bitsets.

Vertices are ``0..n-1`` with ``n <= 16``.  Everything here is immutable and
pure, so graphs can be used as dict keys and shared between workers.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

MAX_VERTICES = 16


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in 1..{MAX_VERTICES}, got {self.n}")
        if len(self.adj) != self.n:
            raise ValueError("adjacency must have one row per vertex")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"vertex {u} has a neighbour outside 0..{self.n - 1}")
            if row >> u & 1:
                raise ValueError(f"self-loop at vertex {u}")
            for v in _bits(row):
                if not self.adj[v] >> u & 1:
                    raise ValueError(f"adjacency not symmetric at {{{u}, {v}}}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {{{u}, {v}}} outside 0..{n - 1}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, combinations(range(n), 2))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in ascending lexicographic order."""
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u] >> (u + 1) << (u + 1))]

    def non_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in combinations(range(self.n), 2) if not self.has_edge(u, v)]

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def with_edges(self, add: Iterable[Sequence[int]] = (), remove: Iterable[Sequence[int]] = ()) -> "Graph":
        adj = list(self.adj)
        for u, v in remove:
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        for u, v in add:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph(self.n, tuple(adj))

    def add_vertex(self, neighbors: Iterable[int]) -> "Graph":
        """Return a copy with a new vertex ``n`` joined to ``neighbors``."""
        adj = list(self.adj) + [0]
        for u in neighbors:
            adj[u] |= 1 << self.n
            adj[self.n] |= 1 << u
        return Graph(self.n + 1, tuple(adj))

    def remove_vertex(self, v: int) -> "Graph":
        return induced_subgraph(self, [u for u in range(self.n) if u != v])

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Apply ``perm``: vertex ``u`` of ``g`` becomes ``perm[u]``."""
    if sorted(perm) != list(range(g.n)):
        raise ValueError("relabeling must be a permutation of 0..n-1")
    return Graph.from_edges(g.n, ((perm[u], perm[v]) for u, v in g.edges()))


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """Subgraph on ``vertices``, reindexed 0..k-1 in ascending original order."""
    keep = sorted(set(vertices))
    if not keep:
        raise ValueError("induced subgraph needs at least one vertex")
    if keep[0] < 0 or keep[-1] >= g.n:
        raise ValueError("vertex set not contained in the graph")
    pos = {v: i for i, v in enumerate(keep)}
    return Graph.from_edges(
        len(keep), ((pos[u], pos[v]) for u, v in g.edges() if u in pos and v in pos)
    )


def degree_sequence(g: Graph) -> list[int]:
    return sorted(g.degree(v) for v in range(g.n))


def min_degree(g: Graph) -> int:
    return min(g.degree(v) for v in range(g.n))


def _connected(g: Graph, alive: int) -> bool:
    if not alive:
        return True
    start = alive & -alive
    seen = frontier = start
    while frontier:
        nxt = 0
        for v in _bits(frontier):
            nxt |= g.adj[v]
        frontier = nxt & alive & ~seen
        seen |= frontier
    return seen == alive


def is_connected(g: Graph) -> bool:
    return _connected(g, (1 << g.n) - 1)


def is_k_connected(g: Graph, k: int) -> bool:
    """True iff removing fewer than ``k`` vertices never disconnects ``g``.

    Complete graphs count as ``(n-1)``-connected.  Brute force over vertex
    cuts, which is fine for the graph sizes handled here.
    """
    if not 1 <= k <= g.n - 1:
        raise ValueError(f"k must lie in 1..{g.n - 1}")
    full = (1 << g.n) - 1
    for size in range(k):
        for cut in combinations(range(g.n), size):
            mask = full
            for v in cut:
                mask &= ~(1 << v)
            if not _connected(g, mask):
                return False
    return True


# -- canonical labeling -------------------------------------------------------

def _refine(g: Graph, cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition.

    A cell is split by each vertex's neighbour counts into the current cells;
    sub-cells are ordered by that signature, so the result is label-invariant.
    """
    while True:
        masks = [sum(1 << v for v in cell) for cell in cells]
        out: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                sig = tuple((g.adj[v] & m).bit_count() for m in masks)
                groups.setdefault(sig, []).append(v)
            if len(groups) > 1:
                changed = True
            out.extend(groups[s] for s in sorted(groups))
        cells = out
        if not changed:
            return cells


def _code_bits(g: Graph, order: Sequence[int]) -> int:
    """Upper-triangle adjacency bits of ``g`` relabeled by position in ``order``."""
    bits = 0
    n = g.n
    for i in range(n):
        row = g.adj[order[i]]
        for j in range(i + 1, n):
            bits = (bits << 1) | (row >> order[j] & 1)
    return bits


def _search(g: Graph, cells: list[list[int]], best: list):
    cells = _refine(g, cells)
    for idx, cell in enumerate(cells):
        if len(cell) > 1:
            break
    else:
        order = [cell[0] for cell in cells]
        bits = _code_bits(g, order)
        if best[0] is None or bits < best[0]:
            best[0], best[1] = bits, order
        return
    # Swapping two twins (same neighbours apart from each other) fixes the
    # partition and the graph, so individualizing either gives the same codes.
    seen: list[int] = []
    for v in cell:
        if any(g.adj[v] & ~(1 << u) == g.adj[u] & ~(1 << v) for u in seen):
            continue
        seen.append(v)
        rest = [u for u in cell if u != v]
        _search(g, cells[:idx] + [[v], rest] + cells[idx + 1:], best)


def canonical_labeling(g: Graph) -> list[int]:
    """Vertex order whose relabeled adjacency code is minimal.

    Colour refinement followed by exhaustive individualisation of every
    remaining cell, skipping vertices that are twins of one already tried.  ``order[i]`` is the vertex that receives label ``i``.
    """
    best: list = [None, None]
    _search(g, _degree_cells(g), best)
    return best[1]


def _degree_cells(g: Graph) -> list[list[int]]:
    by_degree: dict[int, list[int]] = {}
    for v in range(g.n):
        by_degree.setdefault(g.degree(v), []).append(v)
    return [by_degree[d] for d in sorted(by_degree)]


def _pack(n: int, bits: int) -> bytes:
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 7) // 8
    return bytes([n]) + (bits << (8 * nbytes - nbits)).to_bytes(nbytes, "big")


def canonical_form(g: Graph) -> bytes:
    """Isomorphism-class code: ``n`` as one byte, then the canonical
    upper-triangle adjacency bits row-major, zero padded to whole bytes."""
    order = canonical_labeling(g)
    return _pack(g.n, _code_bits(g, order))


def canonical_graph(g: Graph) -> Graph:
    order = canonical_labeling(g)
    perm = [0] * g.n
    for i, v in enumerate(order):
        perm[v] = i
    return relabel(g, perm)


def graph_from_code(code: bytes) -> Graph:
    n = code[0]
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 7) // 8
    bits = int.from_bytes(code[1:1 + nbytes], "big") >> (8 * nbytes - nbits)
    edges = []
    pos = nbits - 1
    for i in range(n):
        for j in range(i + 1, n):
            if bits >> pos & 1:
                edges.append((i, j))
            pos -= 1
    return Graph.from_edges(n, edges)


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and canonical_form(g) == canonical_form(h)


# -- graph6 -------------------------------------------------------------------

def to_graph6(g: Graph) -> str:
    bits = [int(g.has_edge(i, j)) for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    chars = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        chars.append(chr(val + 63))
    return "".join(chars)


def from_graph6(line: str) -> Graph:
    line = line.strip()
    if line.startswith(">>graph6<<"):
        line = line[10:]
    if not line:
        raise ValueError("empty graph6 string")
    n = ord(line[0]) - 63
    if not 1 <= n <= MAX_VERTICES:
        raise ValueError(f"graph6 vertex count {n} outside 1..{MAX_VERTICES}")
    nbits = n * (n - 1) // 2
    data = line[1:]
    if len(data) != (nbits + 5) // 6:
        raise ValueError(f"graph6 string has wrong length for n={n}")
    bits = []
    for ch in data:
        val = ord(ch) - 63
        if not 0 <= val < 64:
            raise ValueError(f"invalid graph6 character {ch!r}")
        bits.extend((val >> s) & 1 for s in range(5, -1, -1))
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


def read_graph6(path) -> list[Graph]:
    with open(path) as fh:
        return [from_graph6(line) for line in fh if line.strip()]


def write_graph6(path, graphs: Iterable[Graph]) -> None:
    with open(path, "w") as fh:
        for g in graphs:
            fh.write(to_graph6(g) + "\n")
