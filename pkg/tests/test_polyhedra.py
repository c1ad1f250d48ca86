import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from dimilp.errors import AssumptionViolation, DimensionMismatch, UnboundedPolyhedron
from dimilp.exact import is_invertible, lex_less, rat, vec
from dimilp.polyhedra import (
    Basis, ConstraintSet, Halfspace, Infeasible, Optimal, Unbounded, bounding_box, contains, lex_objective,
    lp_lex_solve, pivot, vertex_enumerate,
)

from conftest import fig1_constraints

c10 = vec([1, 0])


def test_contains_examples(fig1_P):
    assert contains(ConstraintSet((), 2), vec([5, 5]))
    assert contains(fig1_P, vec([0, 0]))
    assert not contains(fig1_P, vec([2, 0]))
    with pytest.raises(DimensionMismatch):
        contains(fig1_P, vec([0]))


def test_halfspace_normalization():
    h = Halfspace(vec([-3, 6]), rat(9))
    assert h.normalized() == Halfspace(vec([-1, 2]), rat(3))
    assert Halfspace(vec([0, 0]), rat(5)).is_trivial
    assert Halfspace(vec([0, 0]), rat(-1)).is_empty
    assert str(Halfspace(vec([1, "1/2"]), rat(2))) == "[1 1/2] <= 2"


def test_lp_box_corner():
    res = lp_lex_solve(bounding_box(150, 2), c10)
    assert isinstance(res, Optimal)
    assert res.point == (rat(-150), rat(-150))
    # the two lower bounds -z_k <= 150
    assert res.indices == (1, 3)


def test_lp_fig1(fig1_P):
    res = lp_lex_solve(fig1_P, c10)
    assert res.point == (rat(-78, 29), rat(60, 29))
    assert set(res.basis.halfspaces) == {fig1_P[0], fig1_P[2]}


def test_lp_infeasible_and_unbounded():
    C = ConstraintSet((Halfspace(vec([1]), rat(-1)), Halfspace(vec([-1]), rat(-1))), 1)
    assert isinstance(lp_lex_solve(C, vec([1])), Infeasible)
    C = ConstraintSet((Halfspace(vec([1, 0]), rat(3)),), 2)
    res = lp_lex_solve(C, c10)
    assert isinstance(res, Unbounded)
    r = res.ray
    assert all(h.value(r) <= 0 for h in C)
    assert lex_less(lex_objective(c10, r), (0, 0, 0))


def _random_polytope(rng, d, m, M=20):
    hs = [Halfspace(vec([rng.randint(-6, 6) for _ in range(d)]), rat(rng.randint(-10, 30))) for _ in range(m)]
    return ConstraintSet(tuple(hs), d) + bounding_box(M, d)


def _lex_oracle(C, c):
    verts = vertex_enumerate(C)
    if not verts:
        return None
    return min(verts, key=lambda z: tuple(lex_objective(c, z)))


@pytest.mark.parametrize("seed", range(60))
def test_lp_matches_vertex_enumeration(seed):
    rng = random.Random(seed)
    d = rng.choice([1, 2, 3])
    C = _random_polytope(rng, d, rng.randint(1, 6))
    c = vec([rng.randint(-3, 3) for _ in range(d)])
    res = lp_lex_solve(C, c)
    expected = _lex_oracle(C, c)
    if expected is None:
        assert isinstance(res, Infeasible)
        return
    assert isinstance(res, Optimal)
    assert res.point == expected
    assert res.basis.vertex() == res.point
    assert is_invertible(res.basis.A_B)
    assert [C[i] for i in res.indices] == list(res.basis.halfspaces)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_lp_invariant_under_row_order(seed):
    rng = random.Random(seed)
    C = _random_polytope(rng, 2, 5)
    hs = list(C.halfspaces)
    rng.shuffle(hs)
    a = lp_lex_solve(C, c10)
    b = lp_lex_solve(ConstraintSet(tuple(hs), 2), c10)
    assert type(a) is type(b)
    if isinstance(a, Optimal):
        assert a.point == b.point


def test_warm_start_agrees_with_cold(fig1_P):
    C = fig1_P + bounding_box(150, 2)
    cold = lp_lex_solve(C, c10)
    cut = Halfspace(vec([-1, 0]), rat(2))
    warm = lp_lex_solve(C + (cut,), c10, start=cold.indices)
    assert warm.point == lp_lex_solve(C + (cut,), c10).point == (rat(-2), rat(3, 4))


def test_pivot_examples(fig1_P):
    B = lp_lex_solve(fig1_P, c10).basis
    z, B2 = pivot(ConstraintSet(B.halfspaces + (Halfspace.trivial(2),), 2), c10)
    assert z == B.vertex() and B2 == B
    # non-separating cut through the vertex
    through = Halfspace(vec([1, 1]), rat(-78, 29) + rat(60, 29))
    z, B2 = pivot(ConstraintSet(B.halfspaces + (through,), 2), c10)
    assert z == B.vertex()
    # the MIG cut of that vertex is x >= -2
    z, _ = pivot(ConstraintSet(B.halfspaces + (Halfspace(vec([-1, 0]), rat(2)),), 2), c10)
    assert z[0] >= -2
    assert z == (rat(-2), rat(0))
    with pytest.raises(AssumptionViolation):
        pivot(ConstraintSet(B.halfspaces + (Halfspace(vec([1, 0]), rat(-1000)),), 2), c10)


def test_vertex_enumerate_examples(fig1_P):
    assert vertex_enumerate(bounding_box(1, 2)) == sorted(
        (rat(a), rat(b)) for a, b in itertools.product((-1, 1), repeat=2))
    assert set(vertex_enumerate(fig1_P)) == {
        (rat(-78, 29), rat(60, 29)), (rat(-44, 19), rat(18, 19)), (rat(4, 5), rat(-1)), (rat(4, 3), rat(5, 3))}
    empty = ConstraintSet((Halfspace(vec([1]), rat(-1)), Halfspace(vec([-1]), rat(-1))), 1)
    assert vertex_enumerate(empty) == []
    with pytest.raises(UnboundedPolyhedron):
        vertex_enumerate(ConstraintSet((Halfspace(vec([1, 0]), rat(1)),), 2))


def test_basis_requires_square():
    with pytest.raises(DimensionMismatch):
        Basis((Halfspace(vec([1, 0]), rat(1)),))
    B = Basis((Halfspace(vec([1, 0]), rat(1)), Halfspace(vec([0, 2]), rat(1))))
    assert B.vertex() == (rat(1), rat(1, 2))
    assert len(B.fingerprint()) == 12
