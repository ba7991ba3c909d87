"""Exact feasibility test for small systems of linear (in)equalities.

Rows are ``(coeffs, rhs)`` meaning ``coeffs . y == rhs`` or ``coeffs . y >= rhs``
over free rational ``y``.  Works in dictionary form: free variables are
pivoted out first, then Chvatal's single-artificial phase one with Bland's
rule decides whether the remaining slack system is feasible.
"""
from __future__ import annotations

from typing import Sequence

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q


def _pivot(rows, consts, r, q):
    """Swap the basic variable of row ``r`` with nonbasic column ``q``."""
    row = rows[r]
    a = row[q]
    inv = 1 / a
    new = [-x * inv for x in row]
    new[q] = inv
    c = -consts[r] * inv
    rows[r], consts[r] = new, c
    for i in range(len(rows)):
        if i == r:
            continue
        ri = rows[i]
        f = ri[q]
        if f:
            for j in range(len(ri)):
                ri[j] += f * new[j]
            ri[q] = f * inv
            consts[i] += f * c


def feasible(eqs: Sequence[tuple[Sequence[int], int]],
             ges: Sequence[tuple[Sequence[int], int]],
             nvars: int) -> tuple[bool, int, list]:
    """Decide whether ``{y : eqs hold, ges hold}`` is non-empty.

    Returns ``(feasible, free_dim, slack_values)``: ``free_dim`` is the
    dimension left after the equalities (0 means they pin ``y`` uniquely)
    and ``slack_values`` are the slacks of ``ges`` at the unique point when
    ``free_dim == 0`` (otherwise empty).
    """
    # dictionary: each row is  basic = const + sum(coef[j] * nonbasic[j])
    # nonbasic column kinds: 'free', 'slack' or dropped (fixed to zero)
    rows = [[Q(c) for c in coeffs] for coeffs, _ in eqs] + [[Q(c) for c in coeffs] for coeffs, _ in ges]
    consts = [Q(-rhs) for _, rhs in eqs] + [Q(-rhs) for _, rhs in ges]
    n_eq = len(eqs)
    kind = ["free"] * nvars
    is_eq = [True] * n_eq + [False] * len(ges)
    basic = list(range(len(rows)))  # row -> original constraint index

    # equalities: pivot a free column in, then fix that slack at zero
    alive = [True] * len(rows)
    for r in range(n_eq):
        q = next((j for j in range(nvars) if kind[j] == "free" and rows[r][j]), None)
        if q is None:
            if consts[r] != 0:
                return False, -1, []
            alive[r] = False
            continue
        _pivot(rows, consts, r, q)
        kind[q] = "dropped"
        alive[r] = False
        for i in range(len(rows)):
            rows[i][q] = Q(0)
    free_dim = sum(k == "free" for k in kind)

    # inequalities: pivot remaining free variables out
    for q in range(nvars):
        if kind[q] != "free":
            continue
        r = next((i for i in range(len(rows)) if alive[i] and rows[i][q]), None)
        if r is None:
            kind[q] = "dropped"
            continue
        _pivot(rows, consts, r, q)
        kind[q] = "slack"
        alive[r] = False  # row now defines the free variable

    live = [i for i in range(len(rows)) if alive[i]]
    if free_dim == 0:
        vals = [Q(0)] * len(ges)
        for i in live:
            vals[basic[i] - n_eq] = consts[i]
        return all(v >= 0 for v in vals), 0, vals

    cols = [j for j in range(nvars) if kind[j] == "slack"]
    if all(consts[i] >= 0 for i in live):
        return True, free_dim, []

    # phase one on: s_B = const + A s_N + x0,  maximize -x0
    A = [[rows[i][j] for j in cols] + [Q(1)] for i in live]
    b = [consts[i] for i in live]
    nb = list(range(len(cols))) + [-1]  # -1 labels x0
    bv = [1000 + i for i in range(len(live))]  # basic labels (ordered for Bland)
    obj = [Q(0)] * len(cols) + [Q(-1)]
    obj_c = Q(0)
    q = len(cols)
    r = min(range(len(b)), key=lambda i: (b[i], bv[i]))
    A_rows, A_consts = A, b

    def piv(r, q):
        nonlocal obj_c
        _pivot(A_rows, A_consts, r, q)
        f = obj[q]
        if f:
            new = A_rows[r]
            for j in range(len(obj)):
                obj[j] += f * new[j]
            obj[q] = f * new[q]
            obj_c += f * A_consts[r]
        bv[r], nb[q] = nb[q], bv[r]

    piv(r, q)
    while True:
        # Bland: smallest label among improving columns
        cand = [j for j in range(len(obj)) if obj[j] > 0]
        if not cand:
            break
        q = min(cand, key=lambda j: nb[j])
        best = None
        for i in range(len(A_rows)):
            a = A_rows[i][q]
            if a < 0:
                ratio = A_consts[i] / -a
                key = (ratio, bv[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # unbounded objective cannot happen (bounded by 0)
            break
        piv(best[1], q)
    return obj_c == 0, free_dim, []
