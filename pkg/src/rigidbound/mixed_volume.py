"""Exact normalized mixed volume of lattice supports.

``mixed_volume`` uses random integer liftings and enumerates the mixed cells
of the induced fine mixed subdivision; the normalization makes the mixed
volume of ``m`` unit simplices equal to 1, i.e. the Bernstein root count.
``mixed_volume_oracle`` recomputes it independently by polarization over
exact Minkowski-sum volumes.
"""
from __future__ import annotations

import logging
import random
import warnings
from collections import Counter
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Sequence

from . import _lp
from .polytope import det, minkowski_sum, volume

log = logging.getLogger(__name__)

Point = tuple[int, ...]
LIFT_RANGE = 1 << 20
MAX_LIFT_ATTEMPTS = 10


class DegenerateLifting(Exception):
    """The lifting induced a non-fine mixed subdivision."""


class LiftingMismatch(RuntimeError):
    """Two independent liftings disagreed (should never happen)."""


class DegenerateSupportWarning(UserWarning):
    pass


@dataclass(frozen=True)
class MixedCell:
    edges: tuple[tuple[Point, Point], ...]
    volume: int


def _normalize(supports: Iterable[Iterable[Sequence[int]]]) -> list[tuple[Point, ...]]:
    out = [tuple(sorted({tuple(int(c) for c in p) for p in s})) for s in supports]
    m = len(out)
    for i, s in enumerate(out):
        if not s:
            raise ValueError(f"support {i} is empty")
        for p in s:
            if len(p) != m:
                raise ValueError(f"support {i} has a point of dimension {len(p)}, expected {m}")
    return out


# -- mixed cells --------------------------------------------------------------

class _Node:
    """Inner normals ``y0 + B t`` still allowed, with constraints ``A t >= b``.

    Everything is kept in the reduced coordinates ``t``, so a child only has
    to eliminate one more parameter.
    """

    __slots__ = ("y0", "basis", "rows")

    def __init__(self, y0, basis, rows):
        self.y0 = y0          # point in Q^m
        self.basis = basis    # list of f direction vectors in Q^m
        self.rows = rows      # list of (coeffs in Q^f, rhs)

    def values(self, pts, lift):
        """Each point's lifted height ``<p, y> + w`` as ``(constant, coeffs in t)``."""
        out = []
        for p, w in zip(pts, lift):
            c = w + sum(a * b for a, b in zip(p, self.y0) if a)
            out.append((c, [sum(a * b for a, b in zip(p, d) if a) for d in self.basis]))
        return out

    def child(self, vals, a, b):
        """Restrict to normals where points ``a`` and ``b`` tie for the minimum.

        Returns the child node, ``None`` if it is empty, or raises
        ``DegenerateLifting`` on a dependent but consistent tie.
        """
        ca, va = vals[a]
        cb, vb = vals[b]
        coef = [x - y for x, y in zip(vb, va)]
        rhs = ca - cb
        new_rows = [([x - y for x, y in zip(vc, va)], ca - cc)
                    for k, (cc, vc) in enumerate(vals) if k != a and k != b]
        k = next((j for j, x in enumerate(coef) if x), None)
        if k is None:
            if rhs:
                return None
            if _feasible_rows(self.rows + new_rows, len(self.basis)):
                raise DegenerateLifting("dependent edges share a lower face")
            return None
        inv = 1 / coef[k]
        shift = rhs * inv
        ratios = [x * inv for x in coef]
        dk = self.basis[k]
        y0 = [y + d * shift for y, d in zip(self.y0, dk)]
        basis = [[x - d * ratios[l] for x, d in zip(dl, dk)]
                 for l, dl in enumerate(self.basis) if l != k]
        rows = []
        for alpha, beta in self.rows + new_rows:
            ak = alpha[k]
            if ak:
                rows.append(([x - ak * r for l, (x, r) in enumerate(zip(alpha, ratios)) if l != k],
                             beta - ak * shift))
            else:
                rows.append((alpha[:k] + alpha[k + 1:], beta))
        return _Node(y0, basis, rows)


def _interval(rows):
    """Feasible interval of one-parameter constraints, or ``None`` if empty."""
    lo = hi = None
    for (a,), b in rows:
        if a > 0:
            t = b / a
            if lo is None or t > lo:
                lo = t
        elif a < 0:
            t = b / a
            if hi is None or t < hi:
                hi = t
        elif b > 0:
            return None
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def _feasible_rows(rows, f: int) -> bool:
    if f == 0:
        return all(b <= 0 for _, b in rows)
    if f == 1:
        return _interval(rows) is not None
    return _lp.feasible([], rows, f)[0]


def _envelope_edges(vals, lo, hi) -> list[tuple[int, int]]:
    """Edges whose tie is met for ``lo < t < hi`` on a one-parameter family.

    ``vals`` holds each point's height as ``(constant, [slope])``; the edges are
    the breakpoints of the lower envelope of these lines.
    """
    icept = [c for c, _ in vals]
    slope = [v[0] for _, v in vals]
    n = len(vals)
    if lo is None:
        key = lambda i: (-slope[i], icept[i])  # as t -> -inf the steepest line is lowest
    else:
        key = lambda i: (icept[i] + slope[i] * lo, slope[i])
    order = sorted(range(n), key=key)
    cur = order[0]
    if key(order[1]) == key(cur):
        raise DegenerateLifting("lower face with more than two points")
    t = lo
    edges = []
    while True:
        best_t, best = None, []
        for j in range(n):
            if slope[j] < slope[cur]:
                tj = (icept[j] - icept[cur]) / (slope[cur] - slope[j])
                if t is not None and tj < t:
                    continue
                if best_t is None or tj < best_t:
                    best_t, best = tj, [j]
                elif tj == best_t:
                    best.append(j)
        if best_t is None or (hi is not None and best_t > hi):
            return edges
        if (t is not None and best_t == t) or (hi is not None and best_t == hi) or len(best) > 1:
            raise DegenerateLifting("lower face with more than two points")
        nxt = best[0]
        edges.append((min(cur, nxt), max(cur, nxt)))
        cur, t = nxt, best_t


def _lower_edges(pts: Sequence[Point], lift: Sequence[int]) -> list[tuple[int, int]]:
    """Pairs of points spanning an edge of the lower hull of one lifted support."""
    m = len(pts[0])
    root = _root(m)
    vals = root.values(pts, lift)
    out = []
    for a, b in combinations(range(len(pts)), 2):
        node = root.child(vals, a, b)
        if node is not None and _feasible_rows(node.rows, m - 1):
            out.append((a, b))
    return out


def _root(m: int) -> _Node:
    Q = _lp.Q
    return _Node([Q(0)] * m, [[Q(int(i == j)) for i in range(m)] for j in range(m)], [])


def mixed_cells(supports: Sequence[Sequence[Point]], lifts: Sequence[Sequence[int]],
                limit: int | None = None) -> list[MixedCell]:
    """Mixed cells of the subdivision induced by ``lifts``.

    Depth-first over one lower edge per support; a partial choice survives
    only if some inner normal makes all chosen edges simultaneously lower.
    Once the chosen edges pin the normal to a line, the last support's edges
    are read off a one-dimensional lower envelope.  Raises
    ``DegenerateLifting`` when the lifting is not generic.  With ``limit``,
    stops once the accumulated volume reaches it.
    """
    m = len(supports)
    if m == 1:
        xs = sorted(p[0] for p in supports[0])
        return [MixedCell(((min(supports[0]), max(supports[0])),), xs[-1] - xs[0])]
    nz = [_active_coords(s) for s in supports]
    last = max(range(m), key=lambda j: (len(supports[j]), len(nz[j]), -j))
    cand = [[] if j == last else _lower_edges(s, w) for j, (s, w) in enumerate(zip(supports, lifts))]
    order: list[int] = []
    seen: set[int] = set()
    left = set(range(m)) - {last}
    while left:
        i = min(left, key=lambda j: (-len(nz[j] & seen), len(nz[j] - seen), len(cand[j]), j))
        order.append(i)
        seen |= nz[i]
        left.discard(i)
    order.append(last)

    cells: list[MixedCell] = []
    total = 0

    def record(chosen):
        nonlocal total
        edges = [None] * m
        for i, (a, b) in zip(order, chosen):
            edges[i] = (supports[i][a], supports[i][b])
        vol = abs(det([[q - p for p, q in zip(*e)] for e in edges]))
        if vol == 0:
            raise DegenerateLifting("dependent edges share a lower face")
        cells.append(MixedCell(tuple(edges), vol))
        total += vol

    def dfs(depth: int, node: _Node, chosen: list):
        if limit is not None and total >= limit:
            return
        i = order[depth]
        vals = node.values(supports[i], lifts[i])
        free = m - depth - 1
        for a, b in cand[i]:
            sub = node.child(vals, a, b)
            if sub is None:
                continue
            if free == 1:
                span = _interval(sub.rows)
                if span is None:
                    continue
                j = order[m - 1]
                for c, d in _envelope_edges(sub.values(supports[j], lifts[j]), *span):
                    record(chosen + [(a, b), (c, d)])
                continue
            if depth > 0 and not _feasible_rows(sub.rows, free):
                continue
            dfs(depth + 1, sub, chosen + [(a, b)])

    dfs(0, _root(m), [])
    return cells


def _random_lifts(supports, rng: random.Random) -> list[tuple[int, ...]]:
    return [tuple(rng.randrange(LIFT_RANGE) for _ in s) for s in supports]


def _block_mv(supports: list[tuple[Point, ...]], rng: random.Random, limit: int | None = None) -> int:
    for attempt in range(MAX_LIFT_ATTEMPTS):
        lifts = _random_lifts(supports, rng)
        try:
            return sum(c.volume for c in mixed_cells(supports, lifts, limit))
        except DegenerateLifting as exc:
            log.debug("lifting attempt %d degenerate: %s", attempt, exc)
    raise RuntimeError(f"no generic lifting found in {MAX_LIFT_ATTEMPTS} attempts")


# -- block triangular decomposition ---------------------------------------------

def _active_coords(s: Sequence[Point]) -> set[int]:
    return {k for k in range(len(s[0])) if any(p[k] != s[0][k] for p in s)}


def _matching(active: list[set[int]], m: int) -> list[int] | None:
    match_coord: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for k in sorted(active[i]):
            if k in seen:
                continue
            seen.add(k)
            if k not in match_coord or augment(match_coord[k], seen):
                match_coord[k] = i
                return True
        return False

    for i in range(m):
        if not augment(i, set()):
            return None
    out = [0] * m
    for k, i in match_coord.items():
        out[i] = k
    return out


def _sccs(adj: list[set[int]]) -> list[list[int]]:
    """Tarjan; components come out in reverse topological order (sinks first)."""
    index, low, on, stack, out = {}, {}, set(), [], []
    counter = [0]

    def visit(v):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on.add(v)
        for w in sorted(adj[v]):
            if w not in index:
                visit(w)
                low[v] = min(low[v], low[w])
            elif w in on:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on.discard(w)
                comp.append(w)
                if w == v:
                    break
            out.append(sorted(comp))

    for v in range(len(adj)):
        if v not in index:
            visit(v)
    return out


def block_decomposition(supports: Sequence[Sequence[Point]]) -> list[list[tuple[Point, ...]]] | None:
    """Split into irreducible blocks whose mixed volumes multiply.

    Returns ``None`` when some ``k`` supports span fewer than ``k`` coordinate
    directions (the mixed volume is then zero).  Each block is a list of
    supports restricted to the block's own coordinates.
    """
    m = len(supports)
    active = [_active_coords(s) for s in supports]
    match = _matching(active, m)
    if match is None:
        return None
    owner = {match[i]: i for i in range(m)}
    adj = [{owner[k] for k in active[i] if owner[k] != i} for i in range(m)]
    blocks = []
    for comp in _sccs(adj):
        coords = sorted(match[i] for i in comp)
        blocks.append([tuple(sorted({tuple(p[k] for k in coords) for p in supports[i]})) for i in comp])
    return blocks


def _canonical_key(block: list[tuple[Point, ...]]) -> tuple:
    k = len(block)

    def key_for(perm):
        sups = []
        for s in block:
            pts = [tuple(p[c] for c in perm) for p in s]
            lo = [min(p[c] for p in pts) for c in range(k)]
            sups.append(tuple(sorted(tuple(a - b for a, b in zip(p, lo)) for p in pts)))
        return tuple(sorted(sups))

    if k > 5:
        return key_for(range(k))
    return min(key_for(perm) for perm in permutations(range(k)))


_CACHE: dict[tuple, int] = {}

# Per-process tallies: "verified" blocks confirmed by a second lifting,
# "cached" lookups, "cut_off" computations stopped early at their limit.
STATS: Counter = Counter()


def clear_cache() -> None:
    _CACHE.clear()


def _lifted_block(block, seed: int, verify: bool, limit: int | None) -> int:
    k = len(block)
    if k == 1:
        xs = [p[0] for p in block[0]]
        return max(xs) - min(xs)
    key = _canonical_key(block)
    if key in _CACHE:
        STATS["cached"] += 1
        return _CACHE[key]
    rng = random.Random(seed)
    value = _block_mv(block, rng, limit)
    if limit is not None and value >= limit:
        STATS["cut_off"] += 1
        return value
    if verify:
        other = _block_mv(block, random.Random(seed ^ 0x5DEECE66D), None)
        if other != value:
            raise LiftingMismatch(f"liftings disagree: {value} != {other}")
        STATS["verified"] += 1
    _CACHE[key] = value
    return value


def mixed_volume(supports: Iterable[Iterable[Sequence[int]]], seed: int = 0, verify: bool = True,
                 decompose: bool = True, limit: int | None = None) -> int:
    """Normalized mixed volume of ``m`` supports in ``Z^m``.

    ``verify`` recomputes every block under a second independent lifting and
    raises ``LiftingMismatch`` on disagreement.  ``decompose`` splits the
    system into block-triangular pieces first.  With ``limit`` the result is
    exact when below ``limit`` and otherwise only known to be ``>= limit``.
    """
    sups = _normalize(supports)
    if not sups:
        raise ValueError("need at least one support")
    if any(len(s) == 1 for s in sups):
        warnings.warn("a support is a single point; mixed volume is 0", DegenerateSupportWarning, stacklevel=2)
        return 0
    if decompose:
        blocks = block_decomposition(sups)
        if blocks is None:
            return 0
    else:
        blocks = [sups]
    blocks.sort(key=len)
    result = 1
    for block in blocks:
        sub_limit = None if limit is None else -(-limit // result)
        if decompose:
            value = _lifted_block(block, seed, verify, sub_limit)
        else:
            value = _block_mv(block, random.Random(seed), sub_limit)
            if verify and (sub_limit is None or value < sub_limit):
                other = _block_mv(block, random.Random(seed ^ 0x5DEECE66D), None)
                if other != value:
                    raise LiftingMismatch(f"liftings disagree: {value} != {other}")
                STATS["verified"] += 1
        result *= value
        if result == 0 or (limit is not None and result >= limit):
            return result
    return result


def mixed_volume_oracle(supports: Iterable[Iterable[Sequence[int]]]) -> int:
    """Mixed volume by inclusion-exclusion over Minkowski sums (``m <= 4``)."""
    sups = _normalize(supports)
    m = len(sups)
    if m > 4:
        raise ValueError("oracle limited to m <= 4")
    total = 0
    for r in range(1, m + 1):
        for idx in combinations(range(m), r):
            total += (-1) ** (m - r) * volume(minkowski_sum(*(sups[i] for i in idx)))
    if total.denominator != 1:
        raise ArithmeticError(f"non-integral mixed volume {total}")
    return int(total)
