"""Square minor subsystems, their mixed volumes, and per-graph bounds.

A subsystem picks ``k`` unknown distances ``S`` and ``k`` minor equations
involving only those unknowns.  It yields an embedding bound when

* ``G + S`` is generically globally rigid, so the values of ``S`` pin the
  configuration up to congruence, and
* the equations cut out finitely many values of ``S``, certified by a
  full-rank Jacobian at a random realization (modulo a large prime).

Every embedding and its mirror image share the same distance vector, so
the bound is ``mirror_factor * MV`` with ``mirror_factor = 2`` by default.
"""
from __future__ import annotations

import enum
import logging
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .cayley_menger import (
    PRIMES, RETRIES, DistanceAssignment, MinorEquation, _EXPANSION, _LOCAL_PAIRS, full_system,
)
from .graph import Graph, canonical_form, canonical_graph, is_k_connected
from .mixed_volume import mixed_volume
from .reductions import (
    MAX_EMBEDDINGS, GluingWitness, degree2_bound, degree2_vertex, find_gluing, gluing_bound, h1_bound,
)
from .rigidity import classify, h1_trace, is_laman, is_redundantly_rigid, NotLamanError

log = logging.getLogger(__name__)

MIRROR_FACTOR = 2


class Rule(str, enum.Enum):
    H1 = "H1"
    DEGREE2 = "DEGREE2"
    GLUING = "GLUING"
    MIXED_VOLUME = "MIXED_VOLUME"
    NOT_BOUNDED = "NOT_BOUNDED"


@dataclass(frozen=True)
class Budget:
    """Search limits.

    ``max_vars`` caps ``|S|``; ``max_candidates`` caps the number of covering
    equation selections examined per graph; ``extra_levels`` is how many
    larger ``|S|`` levels are still explored after the first level that
    produced a valid candidate.
    """

    max_vars: int = 8
    max_candidates: int = 100_000
    extra_levels: int = 0

    def __post_init__(self):
        if self.max_vars < 1 or self.max_candidates < 1 or self.extra_levels < 0:
            raise ValueError(f"invalid budget {self}")


@dataclass(frozen=True)
class Subsystem:
    equations: tuple[MinorEquation, ...]
    vars: tuple[int, ...]
    mv: int

    def __post_init__(self):
        if len(self.equations) != len(self.vars):
            raise ValueError("subsystem must be square")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("repeated variable")
        covered = set().union(*(e.vars for e in self.equations)) if self.equations else set()
        if covered != set(self.vars):
            raise ValueError("equations must involve exactly the subsystem variables")

    def supports(self) -> list[list[tuple[int, ...]]]:
        return [e.embed(self.vars) for e in self.equations]

    def to_json(self, da: DistanceAssignment) -> dict:
        return {
            "vars": list(self.vars),
            "pairs": [list(da.unknown[v]) for v in self.vars],
            "equations": [e.to_json() for e in self.equations],
            "mv": self.mv,
        }


@dataclass
class SearchResult:
    """Outcome of ``find_best_subsystem``; ``best`` is ``None`` when nothing valid was found."""

    best: Subsystem | None
    examined: int = 0
    exhausted: bool = False
    levels: dict[int, int | None] = field(default_factory=dict)

    @property
    def bounded(self) -> bool:
        return self.best is not None


# -- certificates -----------------------------------------------------------------

def _unknown_pairs(da: DistanceAssignment, S) -> list[tuple[int, int]]:
    return [da.unknown[v] for v in S]


def uniquely_determining(g: Graph, S) -> bool:
    """Whether ``g`` plus the edges ``S`` is generically globally rigid.

    ``S`` is an iterable of vertex pairs that are not edges of ``g``.
    Uses the planar characterization: 3-connected and redundantly rigid.
    """
    S = [tuple(sorted(e)) for e in S]
    if any(g.has_edge(*e) for e in S):
        raise ValueError("S must consist of non-edges")
    h = g.with_edges(add=S)
    if h.edge_count == h.n * (h.n - 1) // 2:
        return True
    return h.n >= 4 and is_k_connected(h, 3) and is_redundantly_rigid(h)


class Jacobian:
    """Partial derivatives of every minor in the unknown distances.

    Evaluated at a random planar configuration over ``GF(p)``.  Since the
    configuration satisfies every minor, a nonsingular ``k x k`` block means
    the corresponding square system has an isolated solution there, and
    hence generically finitely many.
    """

    def __init__(self, g: Graph, da: DistanceAssignment, equations: Sequence[MinorEquation],
                 rng: random.Random, prime: int = PRIMES[0]):
        self.p = p = prime
        pts = [(rng.randrange(p), rng.randrange(p)) for _ in range(g.n)]
        self.entries: dict[tuple[tuple[int, ...], int], int] = {}
        for e in equations:
            X = e.X
            vals = [((pts[X[a]][0] - pts[X[b]][0]) ** 2 + (pts[X[a]][1] - pts[X[b]][1]) ** 2) % p
                    for a, b in _LOCAL_PAIRS]
            for v in e.vars:
                i, j = da.unknown[v]
                slot = _LOCAL_PAIRS.index((X.index(i), X.index(j)))
                total = 0
                for exps, c in _EXPANSION.items():
                    if not exps[slot]:
                        continue
                    term = c * exps[slot]
                    for s, k in enumerate(exps):
                        k -= s == slot
                        if k:
                            term = term * pow(vals[s], k, p) % p
                    total += term
                self.entries[(e.X, v)] = total % p

    def nonsingular(self, equations: Sequence[MinorEquation], S: Sequence[int]) -> bool:
        p, k = self.p, len(S)
        M = [[self.entries.get((e.X, v), 0) for v in S] for e in equations]
        for c in range(k):
            piv = next((r for r in range(c, k) if M[r][c]), None)
            if piv is None:
                return False
            M[c], M[piv] = M[piv], M[c]
            inv = pow(M[c][c], p - 2, p)
            for r in range(c + 1, k):
                if M[r][c]:
                    f = M[r][c] * inv % p
                    M[r] = [(a - f * b) % p for a, b in zip(M[r], M[c])]
        return True


class FinitenessCertifier:
    """Rank test with a few independent random realizations to rule out bad luck."""

    def __init__(self, g: Graph, da: DistanceAssignment, equations: Sequence[MinorEquation], seed: int = 0):
        self._args = (g, da, equations)
        self._rng = random.Random(seed)
        self._jacobians: list[Jacobian] = []

    def _jacobian(self, i: int) -> Jacobian:
        while len(self._jacobians) <= i:
            prime = PRIMES[len(self._jacobians) % len(PRIMES)]
            self._jacobians.append(Jacobian(*self._args, self._rng, prime))
        return self._jacobians[i]

    def __call__(self, equations: Sequence[MinorEquation], S: Sequence[int]) -> bool:
        return any(self._jacobian(i).nonsingular(equations, S) for i in range(RETRIES))


def certify_finite(g: Graph, equations: Sequence[MinorEquation], S: Sequence[int], seed: int = 0) -> bool:
    da = DistanceAssignment.from_graph(g)
    return FinitenessCertifier(g, da, equations, seed)(equations, S)


# -- search -----------------------------------------------------------------------

def find_best_subsystem(g: Graph, system: Sequence[MinorEquation] | None = None,
                        budget: Budget = Budget(), seed: int = 0, check_finite: bool = True,
                        verify: bool = True) -> SearchResult:
    """Minimum mixed-volume valid square subsystem, searched by ascending ``|S|``.

    Variable sets and equation selections are visited in lexicographic
    order, so the first candidate reaching the minimum wins ties.  Mixed
    volumes are computed with the running best as a cut-off.
    """
    da = DistanceAssignment.from_graph(g)
    eqs = [e for e in (system if system is not None else full_system(g, da, seed)) if e.usable]
    certifier = FinitenessCertifier(g, da, eqs, seed) if check_finite else None
    result = SearchResult(None)
    memo: dict[tuple, tuple[int, bool]] = {}
    first_valid = None

    for k in range(1, min(budget.max_vars, da.m) + 1):
        if first_valid is not None and k > first_valid + budget.extra_levels:
            break
        level_best = None
        for S in combinations(range(da.m), k):
            s = set(S)
            pool = [e for e in eqs if s.issuperset(e.vars)]
            if len(pool) < k or set().union(*(e.vars for e in pool)) != s:
                continue
            if not uniquely_determining(g, _unknown_pairs(da, S)):
                continue
            for sel in combinations(pool, k):
                if set().union(*(e.vars for e in sel)) != s:
                    continue
                if result.examined >= budget.max_candidates:
                    result.exhausted = True
                    result.levels[k] = level_best
                    return result
                result.examined += 1
                if certifier is not None and not certifier(sel, S):
                    continue
                supports = [e.embed(S) for e in sel]
                key = tuple(sorted(tuple(sp) for sp in supports))
                limit = result.best.mv if result.best else None
                value, exact = memo.get(key, (None, False))
                if value is None or (not exact and (limit is None or value < limit)):
                    value = mixed_volume(supports, seed=seed, verify=verify, limit=limit)
                    exact = limit is None or value < limit
                    memo[key] = (value, exact)
                if value == 0:
                    continue
                first_valid = k if first_valid is None else first_valid
                level_best = value if level_best is None else min(level_best, value)
                if result.best is None or value < result.best.mv:
                    result.best = Subsystem(tuple(sel), S, value)
        result.levels[k] = level_best
    return result


# -- bound reports ----------------------------------------------------------------

@dataclass
class BoundReport:
    code: bytes
    n: int
    laman_class: str
    rule: Rule
    bound: int | None
    witness: dict | None

    def to_json(self) -> dict:
        return {"code": self.code.hex(), "n": self.n, "class": self.laman_class,
                "rule": self.rule.value, "bound": self.bound, "witness": self.witness}

    def csv_row(self) -> list:
        return [self.code.hex(), self.laman_class, self.rule.value, "" if self.bound is None else self.bound]


CSV_HEADER = ["code", "class", "rule", "bound"]


def graph_bound(g: Graph, table: Mapping[int, int] = MAX_EMBEDDINGS, budget: Budget = Budget(),
                seed: int = 0, mirror_factor: int = MIRROR_FACTOR, check_finite: bool = True,
                verify: bool = True) -> BoundReport:
    """Bound for one Laman graph from the first rule in the cascade that applies.

    Order: H1 class, a degree-2 vertex, a gluing witness, then the
    subsystem search.  Witness vertex labels refer to the canonical graph.
    """
    if mirror_factor not in (1, 2):
        raise ValueError("mirror_factor must be 1 or 2")
    if not is_laman(g):
        raise NotLamanError("graph is not Laman")
    g = canonical_graph(g)
    code = canonical_form(g)
    cls = classify(g)
    base = dict(code=code, n=g.n, laman_class=cls)
    if cls == "H1":
        trace, _ = h1_trace(g)
        return BoundReport(**base, rule=Rule.H1, bound=h1_bound(g.n),
                           witness={"trace": [s.to_json() for s in trace.steps]})
    bound = degree2_bound(g, table)
    if bound is not None:
        return BoundReport(**base, rule=Rule.DEGREE2, bound=bound, witness={"vertex": degree2_vertex(g)})
    w = find_gluing(g, table)
    if w is not None and gluing_bound(w, table) is not None:
        return BoundReport(**base, rule=Rule.GLUING, bound=gluing_bound(w, table), witness=w.to_json())
    da = DistanceAssignment.from_graph(g)
    res = find_best_subsystem(g, budget=budget, seed=seed, check_finite=check_finite, verify=verify)
    if res.best is None:
        log.warning("no valid subsystem within budget (%d candidates examined)", res.examined)
        return BoundReport(**base, rule=Rule.NOT_BOUNDED, bound=None,
                           witness={"examined": res.examined, "exhausted": res.exhausted})
    witness = res.best.to_json(da)
    witness.update(mirror_factor=mirror_factor, examined=res.examined, exhausted=res.exhausted)
    return BoundReport(**base, rule=Rule.MIXED_VOLUME, bound=mirror_factor * res.best.mv, witness=witness)


def gluing_from_json(d: dict) -> GluingWitness:
    return GluingWitness(tuple(d["A"]), tuple(d["B"]), d["shared"], tuple(d["bridge"]))
