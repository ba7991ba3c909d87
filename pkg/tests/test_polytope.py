import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from rigidbound import _lp
from rigidbound.polytope import affine_dim, det, minkowski_sum, rank, volume

matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n))


@settings(max_examples=200)
@given(matrices)
def test_det_matches_exact_rational_elimination(rows):
    assert det(rows) == sympy.Matrix(rows).det()


def test_rank_and_affine_dim():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([]) == 0
    assert affine_dim([(0, 0), (1, 1), (2, 2)]) == 1
    assert affine_dim([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]) == 3


def test_minkowski_sum():
    assert minkowski_sum([(0, 0), (1, 0)], [(0, 0), (0, 1)]) == {(0, 0), (1, 0), (0, 1), (1, 1)}


def test_volume_examples():
    assert volume([(0, 0), (1, 0), (0, 1)]) == Fraction(1, 2)
    assert volume([(0, 0), (2, 0), (0, 2), (2, 2), (1, 1)]) == 4
    assert volume([(0,), (3,), (1,)]) == 3
    assert volume([(0, 0), (1, 1), (2, 2)]) == 0
    assert volume(list(product([0, 1], repeat=3))) == 1


@pytest.mark.parametrize("d", [2, 3, 4])
def test_volume_against_qhull(d):
    rng = random.Random(d)
    for _ in range(40):
        pts = {tuple(rng.randint(0, 4) for _ in range(d)) for _ in range(rng.randint(d + 1, 12))}
        v = volume(pts)
        if affine_dim(pts) < d:
            assert v == 0
            continue
        assert float(v) == pytest.approx(ConvexHull(np.array(sorted(pts))).volume, rel=1e-9)


def test_lp_against_highs():
    rng = random.Random(1)
    for _ in range(500):
        nv = rng.randint(1, 4)
        eqs = [([rng.randint(-3, 3) for _ in range(nv)], rng.randint(-3, 3)) for _ in range(rng.randint(0, 2))]
        ges = [([rng.randint(-3, 3) for _ in range(nv)], rng.randint(-5, 5)) for _ in range(rng.randint(0, 6))]
        ok, free_dim, vals = _lp.feasible(eqs, ges, nv)
        res = linprog(np.zeros(nv), A_ub=-np.array([c for c, _ in ges]).reshape(-1, nv) if ges else None,
                      b_ub=-np.array([b for _, b in ges]) if ges else None,
                      A_eq=np.array([c for c, _ in eqs]).reshape(-1, nv) if eqs else None,
                      b_eq=np.array([b for _, b in eqs]) if eqs else None,
                      bounds=[(None, None)] * nv, method="highs")
        assert ok == (res.status == 0), (eqs, ges)


def test_lp_unique_point_slacks():
    ok, free_dim, vals = _lp.feasible([([1, 0], 2), ([0, 1], 3)], [([1, 1], 4)], 2)
    assert ok and free_dim == 0 and vals == [1]
