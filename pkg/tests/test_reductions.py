import pytest

from rigidbound.graph import Graph
from rigidbound.reductions import (
    KNOWN_LOWER_BOUNDS, MAX_EMBEDDINGS, GluingWitness, degree2_bound, degree2_vertex, find_gluing,
    gluing_bound, h1_bound,
)
from rigidbound.rigidity import TRIANGLE, classify

from conftest import catalog


def h2_split(n):
    h2 = [g for g, _ in catalog(n).values() if classify(g) == "H2"]
    deg2 = [g for g in h2 if degree2_bound(g) is not None]
    rest = [g for g in h2 if degree2_bound(g) is None]
    glued = [g for g in rest if find_gluing(g) is not None]
    return h2, deg2, rest, glued


def test_table_is_frozen():
    assert dict(MAX_EMBEDDINGS) == {3: 2, 4: 4, 5: 8, 6: 24, 7: 56}
    with pytest.raises(TypeError):
        MAX_EMBEDDINGS[8] = 1
    assert KNOWN_LOWER_BOUNDS[8] == 112


@pytest.mark.parametrize("n,expected", [(3, 2), (4, 4), (8, 64)])
def test_h1_bound(n, expected):
    assert h1_bound(n) == expected


def test_h1_bound_domain():
    with pytest.raises(ValueError):
        h1_bound(2)


def test_degree2_examples():
    assert degree2_bound(TRIANGLE) is None
    with_deg2 = [g for g, _ in catalog(8).values() if min(g.degree(v) for v in range(8)) == 2]
    assert with_deg2 and all(degree2_bound(g) == 112 for g in with_deg2)
    assert all(g.degree(degree2_vertex(g)) == 2 for g in with_deg2)


def bowtie_with_bridge():
    # triangles {0,1,2} and {2,3,4} share vertex 2; bridge 0-3
    return Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4), (0, 3)])


def test_gluing_on_two_triangles():
    g = bowtie_with_bridge()
    w = find_gluing(g)
    assert w is not None and w.verify(g)
    assert (len(w.A), len(w.B), w.shared) == (3, 3, 2)
    assert gluing_bound(w) == 8


def test_gluing_bound_arithmetic():
    w = GluingWitness((0, 1, 2, 3), (3, 4, 5, 6, 7), 3, (0, 4))
    assert gluing_bound(w) == 64
    assert gluing_bound(GluingWitness(w.B, w.A, 3, (0, 4))) == 64
    assert gluing_bound(GluingWitness(tuple(range(8)), (7, 8, 9), 7, (0, 8))) is None


def test_gluing_absent_on_triangle():
    assert find_gluing(TRIANGLE) is None


def test_witness_verify_rejects_bad_splits():
    g = bowtie_with_bridge()
    assert not GluingWitness((0, 1, 2), (2, 3, 4), 2, (1, 2)).verify(g)
    assert not GluingWitness((0, 1, 2, 3), (2, 3, 4), 2, (0, 3)).verify(g)


def test_cascade_counts_at_eight():
    h2, deg2, rest, glued = h2_split(8)
    assert (len(h2), len(deg2), len(rest), len(glued)) == (109, 77, 32, 5)
    for g in glued:
        w = find_gluing(g)
        assert w.verify(g) and gluing_bound(w) == 64


def test_witness_tie_break_is_deterministic():
    _, _, _, glued = h2_split(8)
    for g in glued:
        assert find_gluing(g) == find_gluing(g)
