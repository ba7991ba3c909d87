"""Cayley-Menger minor equations and their Newton supports.

Matrix entries are squared distances.  Known entries ``c_ij`` (graph edges)
are treated as independent generic symbols; unknown entries ``x_ij``
(non-edges) are the system variables, indexed ``0..m-1`` in ascending
lexicographic order of the vertex pair.

Vertex numbering is 0-based throughout.  In the common 1-based notation
where row 1 of the matrix is the border of ones, ``D(2,3,4,6)`` is the minor
on vertices ``{0, 1, 2, 4}`` here and ``x_13`` is the pair ``(0, 2)``.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .graph import Graph

# 62-bit primes used for the randomized non-vanishing certificate.
PRIMES = (
    2596871869076781797, 2849647038907036729, 4483689775824492683, 4056509224170998797,
    3274088667306116599, 4555684730531950193, 4103518836017640349, 3534075908275365161,
)
RETRIES = 4

Point = tuple[int, ...]


@dataclass(frozen=True)
class DistanceAssignment:
    n: int
    known: tuple[tuple[int, int], ...]
    unknown: tuple[tuple[int, int], ...]

    @classmethod
    def from_graph(cls, g: Graph) -> "DistanceAssignment":
        return cls(g.n, tuple(g.edges()), tuple(g.non_edges()))

    @property
    def m(self) -> int:
        return len(self.unknown)

    def var_index(self, i: int, j: int) -> int:
        return self.unknown.index((min(i, j), max(i, j)))

    def is_known(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.known

    def var_name(self, idx: int, one_based: bool = False) -> str:
        i, j = self.unknown[idx]
        off = 1 if one_based else 0
        return f"x_{i + off}{j + off}" if max(i, j) + off < 10 else f"x_{i + off}_{j + off}"


@dataclass(frozen=True)
class MinorEquation:
    X: tuple[int, int, int, int]
    vars: tuple[int, ...]
    support: tuple[Point, ...]

    @property
    def usable(self) -> bool:
        return bool(self.vars)

    def embed(self, variables: Sequence[int]) -> list[Point]:
        """Support points as exponent vectors over ``variables``."""
        pos = {v: k for k, v in enumerate(variables)}
        cols = [pos[v] for v in self.vars]
        out = []
        for p in self.support:
            q = [0] * len(variables)
            for c, e in zip(cols, p):
                q[c] = e
            out.append(tuple(q))
        return out

    def to_json(self) -> dict:
        return {"X": list(self.X), "vars": list(self.vars), "points": [list(p) for p in self.support]}

    @classmethod
    def from_json(cls, d: dict) -> "MinorEquation":
        return cls(tuple(d["X"]), tuple(d["vars"]), tuple(sorted(tuple(p) for p in d["points"])))


def _perm_sign(p: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def _bordered_expansion():
    """Leibniz expansion of the bordered 5x5 determinant on 4 points.

    Returns ``{exponents over the 6 local pairs: coefficient}``; pair order is
    ``combinations(range(4), 2)``.
    """
    pairs = list(combinations(range(4), 2))
    slot = {p: k for k, p in enumerate(pairs)}
    terms: dict[tuple[int, ...], int] = {}
    for p in permutations(range(5)):
        if any(p[r] == r for r in range(5)):
            continue  # zero diagonal
        exps = [0] * 6
        for r in range(1, 5):
            c = p[r]
            if c:
                exps[slot[(min(r, c) - 1, max(r, c) - 1)]] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + _perm_sign(p)
    return {k: v for k, v in terms.items() if v}


_EXPANSION = _bordered_expansion()
_LOCAL_PAIRS = list(combinations(range(4), 2))


def _nonzero_mod_p(poly: dict[tuple[int, ...], int], rng: random.Random) -> bool:
    """Randomized identity test for a polynomial in the known distances."""
    if not poly:
        return False
    if all(not e for e in poly):
        return any(poly.values())
    nvars = len(next(iter(poly)))
    for attempt in range(RETRIES + 1):
        p = PRIMES[rng.randrange(len(PRIMES))]
        point = [rng.randrange(1, p) for _ in range(nvars)]
        total = 0
        for exps, coef in poly.items():
            term = coef
            for val, e in zip(point, exps):
                if e:
                    term = term * pow(val, e, p) % p
            total = (total + term) % p
        if total:
            return True
    return False


def minor_support(g: Graph, da: DistanceAssignment, X: Iterable[int],
                  rng: random.Random | None = None) -> MinorEquation:
    """Monomial support, in the unknowns, of the bordered minor on ``X``."""
    X = tuple(sorted(X))
    if len(X) != 4 or len(set(X)) != 4:
        raise ValueError("a Cayley-Menger minor needs exactly 4 distinct vertices")
    if X[0] < 0 or X[-1] >= g.n:
        raise ValueError("minor vertices outside the graph")
    rng = rng or random.Random(0)
    glob = [(X[a], X[b]) for a, b in _LOCAL_PAIRS]
    unknown_slots = [k for k, pr in enumerate(glob) if not g.has_edge(*pr)]
    known_slots = [k for k in range(6) if k not in unknown_slots]
    variables = sorted(da.var_index(*glob[k]) for k in unknown_slots)
    slot_of_var = {da.var_index(*glob[k]): k for k in unknown_slots}
    var_slots = [slot_of_var[v] for v in variables]

    coeffs: dict[Point, dict[tuple[int, ...], int]] = {}
    for exps, c in _EXPANSION.items():
        mono = tuple(exps[k] for k in var_slots)
        known = tuple(exps[k] for k in known_slots)
        poly = coeffs.setdefault(mono, {})
        poly[known] = poly.get(known, 0) + c
    support = tuple(sorted(m for m, poly in coeffs.items() if _nonzero_mod_p(poly, rng)))
    return MinorEquation(X, tuple(variables), support)


def full_system(g: Graph, da: DistanceAssignment | None = None, seed: int = 0) -> list[MinorEquation]:
    """All ``C(n, 4)`` minors of ``g``, in lexicographic order of ``X``."""
    da = da or DistanceAssignment.from_graph(g)
    rng = random.Random(seed)
    return [minor_support(g, da, X, rng) for X in combinations(range(g.n), 4)]


def dump_supports(equations: Sequence[MinorEquation], fh) -> None:
    json.dump([e.to_json() for e in equations], fh, indent=1)
    fh.write("\n")


def load_supports(fh) -> list[MinorEquation]:
    data = json.load(fh)
    if isinstance(data, dict):
        data = data["equations"]
    return [MinorEquation.from_json(d) for d in data]
