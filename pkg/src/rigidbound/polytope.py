"""Exact lattice-polytope helpers: determinants, ranks, Minkowski sums, volumes.

Integer inputs only; nothing here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Iterable, Sequence

Point = tuple[int, ...]


def det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss elimination)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(rows: Sequence[Sequence[int]]) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    r, ncols = 0, len(a[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def affine_dim(points: Iterable[Point]) -> int:
    pts = list(dict.fromkeys(points))
    if len(pts) <= 1:
        return 0
    p0 = pts[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in pts[1:]])


def minkowski_sum(*supports: Iterable[Point]) -> set[Point]:
    acc: set[Point] | None = None
    for s in supports:
        s = set(s)
        if acc is None:
            acc = s
        else:
            acc = {tuple(a + b for a, b in zip(p, q)) for p in acc for q in s}
    return acc or set()


def _orient(simplex: Sequence[Point], p: Point) -> int:
    base = simplex[0]
    rows = [[a - b for a, b in zip(q, base)] for q in simplex[1:]]
    rows.append([a - b for a, b in zip(p, base)])
    return det(rows)


def volume(points: Iterable[Point]) -> Fraction:
    """Euclidean volume of the convex hull of integer points.

    Built as a placing triangulation: points are inserted one at a time and
    coned over every boundary facet they see strictly.  Lower-dimensional
    hulls have volume zero.
    """
    pts = sorted(set(points))
    if not pts:
        return Fraction(0)
    d = len(pts[0])
    if d == 0:
        return Fraction(1)
    if d == 1:
        return Fraction(pts[-1][0] - pts[0][0])
    # initial full-dimensional simplex, greedily
    simplex = [pts[0]]
    for p in pts[1:]:
        cand = simplex + [p]
        if affine_dim(cand) == len(cand) - 1:
            simplex = cand
            if len(simplex) == d + 1:
                break
    if len(simplex) < d + 1:
        return Fraction(0)
    # (d+1) * interior reference point, kept integral
    scale = d + 1
    inner = tuple(sum(c) for c in zip(*simplex))

    def sees(facet: tuple[Point, ...], p: Point) -> bool:
        fs = [tuple(scale * c for c in q) for q in facet]
        ps = tuple(scale * c for c in p)
        s_in = _orient(fs, inner)
        s_p = _orient(fs, ps)
        return s_p != 0 and (s_p > 0) != (s_in > 0)

    total = abs(_orient(simplex[:d], simplex[d]))
    boundary = {tuple(sorted(f)) for f in combinations(simplex, d)}
    for p in pts:
        if p in simplex:
            continue
        visible = [f for f in boundary if sees(f, p)]
        if not visible:
            continue
        ridge_count: dict[tuple[Point, ...], int] = {}
        for f in visible:
            total += abs(_orient(f, p))
            for r in combinations(f, d - 1):
                ridge_count[r] = ridge_count.get(r, 0) + 1
            boundary.discard(f)
        for r, cnt in ridge_count.items():
            if cnt == 1:
                boundary.add(tuple(sorted(r + (p,))))
    return Fraction(total, factorial(d))
