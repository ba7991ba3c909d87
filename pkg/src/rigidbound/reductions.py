"""Cheap embedding-count bounds that avoid any polynomial algebra."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from types import MappingProxyType
from typing import Mapping

from .graph import Graph, induced_subgraph, min_degree
from .rigidity import is_laman

# Best known tight maximum number of planar embeddings of Laman graphs.
MAX_EMBEDDINGS: Mapping[int, int] = MappingProxyType({3: 2, 4: 4, 5: 8, 6: 24, 7: 56})

# Lower bounds on the maximum for each n (tight through n = 7).
KNOWN_LOWER_BOUNDS: Mapping[int, int] = MappingProxyType({3: 2, 4: 4, 5: 8, 6: 24, 7: 56, 8: 112})


def h1_bound(n: int) -> int:
    """Each H1 step at most doubles the count, starting from 2 at n = 3."""
    if n < 3:
        raise ValueError("n must be at least 3")
    return 2 ** (n - 2)


def degree2_bound(g: Graph, table: Mapping[int, int] = MAX_EMBEDDINGS) -> int | None:
    if min_degree(g) != 2 or g.n - 1 not in table:
        return None
    return 2 * table[g.n - 1]


def degree2_vertex(g: Graph) -> int | None:
    return next((v for v in range(g.n) if g.degree(v) == 2), None)


@dataclass(frozen=True)
class GluingWitness:
    """Two Laman pieces sharing ``shared`` plus a single ``bridge`` edge."""

    A: tuple[int, ...]
    B: tuple[int, ...]
    shared: int
    bridge: tuple[int, int]

    def verify(self, g: Graph) -> bool:
        a, b = set(self.A), set(self.B)
        if a | b != set(range(g.n)) or a & b != {self.shared}:
            return False
        u, v = self.bridge
        if not g.has_edge(u, v) or {u, v} & {self.shared}:
            return False
        if not ((u in a and v in b) or (u in b and v in a)):
            return False
        crossing = [(x, y) for x, y in g.edges() if (x in a) != (y in a) or (x in b) != (y in b)]
        crossing = [e for e in crossing if not (set(e) <= a or set(e) <= b)]
        if crossing != [tuple(sorted(self.bridge))]:
            return False
        return is_laman(induced_subgraph(g, a)) and is_laman(induced_subgraph(g, b))

    def to_json(self) -> dict:
        return {"A": list(self.A), "B": list(self.B), "shared": self.shared, "bridge": list(self.bridge)}


def gluing_bound(w: GluingWitness, table: Mapping[int, int] = MAX_EMBEDDINGS) -> int | None:
    """Product of the pieces' maxima times 2 for the bridging edge."""
    if len(w.A) not in table or len(w.B) not in table:
        return None
    return table[len(w.A)] * table[len(w.B)] * 2


def _gluings(g: Graph):
    full = (1 << g.n) - 1
    for v in range(g.n):
        others = [u for u in range(g.n) if u != v]
        # A always contains the smallest other vertex so each split is seen once
        first, rest = others[0], others[1:]
        for r in range(len(rest) + 1):
            for extra in combinations(rest, r):
                a_only = (1 << first) | sum(1 << u for u in extra)
                b_only = full & ~a_only & ~(1 << v)
                na, nb = a_only.bit_count() + 1, b_only.bit_count() + 1
                if na < 3 or nb < 3:
                    continue
                cross = [(x, y) for x, y in g.edges()
                         if (a_only >> x & 1 and b_only >> y & 1) or (b_only >> x & 1 and a_only >> y & 1)]
                if len(cross) != 1:
                    continue
                A = tuple(sorted([v, first, *extra]))
                B = tuple(sorted(set(range(g.n)) - set(A) | {v}))
                if is_laman(induced_subgraph(g, A)) and is_laman(induced_subgraph(g, B)):
                    for side in (A, B):
                        yield GluingWitness(side, B if side is A else A, v, cross[0])


def find_gluing(g: Graph, table: Mapping[int, int] = MAX_EMBEDDINGS) -> GluingWitness | None:
    """Gluing witness with the smallest applicable bound, ties by smallest ``A``.

    Witnesses whose piece sizes fall outside ``table`` are still returned
    (bound ``None``) when no bounded witness exists.
    """
    best = None
    best_key = None
    for w in _gluings(g):
        bound = gluing_bound(w, table)
        key = (bound is None, bound or 0, w.A)
        if best_key is None or key < best_key:
            best, best_key = w, key
    return best
