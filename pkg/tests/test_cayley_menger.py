import io
import json
import random
from functools import lru_cache
from itertools import combinations

import pytest
import sympy as sp

from rigidbound.cayley_menger import (
    DistanceAssignment, MinorEquation, dump_supports, full_system, load_supports, minor_support,
)
from rigidbound.graph import Graph
from rigidbound.rigidity import TRIANGLE

from conftest import catalog

K4E = Graph.complete(4).with_edges(remove=[(0, 1)])
EXAMPLE8 = Graph.from_edges(8, [(0, 1), (0, 4), (0, 5), (1, 2), (1, 3), (1, 7), (2, 4), (2, 5), (3, 4),
                                (3, 6), (4, 7), (5, 6), (6, 7)])


@lru_cache(maxsize=None)
def systems8():
    return [full_system(g) for g, _ in catalog(8).values()]


def sympy_support(g, X):
    """Monomial support of the bordered minor by exact symbolic expansion."""
    X = sorted(X)
    sym = {}
    for i, j in combinations(X, 2):
        name = ("c" if g.has_edge(i, j) else "x") + f"_{i}_{j}"
        sym[(i, j)] = sp.Symbol(name)
    M = sp.zeros(5, 5)
    for k in range(1, 5):
        M[0, k] = M[k, 0] = 1
    for a, b in combinations(range(4), 2):
        M[a + 1, b + 1] = M[b + 1, a + 1] = sym[(X[a], X[b])]
    xs = [sym[p] for p in sorted(sym) if not g.has_edge(*p)]
    poly = sp.Poly(sp.expand(M.det()), *xs) if xs else None
    return xs, (set(poly.monoms()) if poly is not None else {()})


def test_distance_assignment():
    da = DistanceAssignment.from_graph(EXAMPLE8)
    assert (len(da.known), da.m) == (13, 15)
    assert da.var_name(da.var_index(0, 2), one_based=True) == "x_13"
    assert da.is_known(1, 0) and not da.is_known(0, 2)


def test_all_known_is_constant():
    eq = minor_support(Graph.complete(4), DistanceAssignment.from_graph(Graph.complete(4)), (0, 1, 2, 3))
    assert eq.vars == () and eq.support == ((),) and not eq.usable


def test_single_unknown_is_quadratic():
    eqs = full_system(K4E)
    assert len(eqs) == 1
    assert eqs[0].vars == (0,) and eqs[0].support == ((0,), (1,), (2,))


@pytest.mark.parametrize("X", [(0, 1, 2), (0, 1, 2, 2), (0, 1, 2, 9)])
def test_rejects_bad_vertex_sets(X):
    with pytest.raises(ValueError):
        minor_support(EXAMPLE8, DistanceAssignment.from_graph(EXAMPLE8), X)


def test_seventy_equations_covering_all_unknowns():
    for eqs in systems8():
        assert len(eqs) == 70
        assert set().union(*(e.vars for e in eqs)) == set(range(15))


def test_example_minors():
    da = DistanceAssignment.from_graph(EXAMPLE8)
    names = lambda e: [da.var_name(v, one_based=True) for v in e.vars]
    # 1-based minor D(2,3,4,6) is the vertex set {0,1,2,4}
    assert names(minor_support(EXAMPLE8, da, (0, 1, 2, 4))) == ["x_13", "x_25"]
    assert names(minor_support(EXAMPLE8, da, (3, 4, 6, 7))) == ["x_48", "x_57"]
    three = minor_support(EXAMPLE8, da, (0, 1, 4, 5))
    assert names(three) == ["x_25", "x_26", "x_56"]
    assert len(three.support) == 10


def test_against_symbolic_expansion():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(4, 6)
        g, _ = rng.choice(list(catalog(n).values()))
        X = tuple(sorted(rng.sample(range(n), 4)))
        eq = minor_support(g, DistanceAssignment.from_graph(g), X, random.Random(rng.random()))
        xs, monos = sympy_support(g, X)
        assert set(eq.support) == monos, (g, X)


def test_degree_caps_everywhere():
    for eqs in systems8():
        for e in eqs:
            for p in e.support:
                assert max(p, default=0) <= 2 and sum(p) <= 3


def test_independent_of_randomness():
    g, _ = list(catalog(7).values())[40]
    assert full_system(g, seed=1) == full_system(g, seed=99)


def test_json_round_trip():
    eqs = full_system(EXAMPLE8)[:5]
    buf = io.StringIO()
    dump_supports(eqs, buf)
    buf.seek(0)
    assert load_supports(buf) == eqs
    wrapped = io.StringIO(json.dumps({"equations": [e.to_json() for e in eqs]}))
    assert load_supports(wrapped) == eqs
    assert MinorEquation.from_json(eqs[0].to_json()) == eqs[0]


def test_embed():
    eq = MinorEquation((0, 1, 2, 3), (2, 5), ((0, 1), (2, 0)))
    assert eq.embed([5, 7, 2]) == [(1, 0, 0), (0, 0, 2)]
