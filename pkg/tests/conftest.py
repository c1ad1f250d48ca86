import pytest

from dimilp.cuts import IntegralitySplit
from dimilp.exact import rat
from dimilp.oracles import MilpInstance
from dimilp.polyhedra import ConstraintSet

FIG1_A = [(1, 10), (-5, -8), (-9, -3), (10, -2)]
FIG1_B = [18, 4, 18, 10]


def fig1_constraints() -> ConstraintSet:
    return ConstraintSet.from_rows([tuple(rat(x) for x in a) for a in FIG1_A], [rat(b) for b in FIG1_B])


def fig1_instance(M=150) -> MilpInstance:
    return MilpInstance(fig1_constraints(), (rat(1), rat(0)), IntegralitySplit(1, 1), rat(M))


@pytest.fixture
def fig1():
    return fig1_instance()


@pytest.fixture
def fig1_P():
    return fig1_constraints()


def slice_vertices(P, d_Z, xs):
    """Vertices of every integer slice ``{y : (x, y) in P}`` for ``x`` in ``xs``.

    A halfspace contains the mixed-integer set of ``P`` iff it contains all of these.
    """
    from dimilp.exact import dot, rat
    from dimilp.polyhedra import ConstraintSet, Halfspace, vertex_enumerate

    d = P.dim
    for x in xs:
        x = tuple(rat(v) for v in x)
        if d_Z == d:
            if all(h.contains(x) for h in P):
                yield x
            continue
        sl = ConstraintSet(tuple(Halfspace(h.a[d_Z:], h.b - dot(h.a[:d_Z], x)) for h in P), d - d_Z)
        for y in vertex_enumerate(sl):
            yield x + y


def instance_points(inst):
    """Extreme mixed-integer points of an instance, by slicing over the LP bounding interval."""
    import itertools

    from dimilp.exact import rat_ceil, rat_floor
    from dimilp.polyhedra import vertex_enumerate

    P = inst.boxed()
    verts = vertex_enumerate(P)
    if not verts:
        return []
    d_Z = inst.split.d_Z
    ranges = [range(rat_ceil(min(v[k] for v in verts)), rat_floor(max(v[k] for v in verts)) + 1)
              for k in range(d_Z)]
    return list(slice_vertices(P, d_Z, itertools.product(*ranges)))


def random_basis_pair(rng, max_abs=6):
    """Random invertible basis in d <= 3 whose vertex is fractional in an integer coordinate."""
    from dimilp.cuts import IntegralitySplit, first_fractional
    from dimilp.exact import is_invertible, rat, vec
    from dimilp.polyhedra import Basis, Halfspace

    while True:
        d = rng.choice([1, 2, 2, 3, 3])
        d_Z = rng.randint(1, d)
        A = tuple(vec([rng.randint(-5, 5) for _ in range(d)]) for _ in range(d))
        if not is_invertible(A):
            continue
        b = [rat(rng.randint(-12, 12), rng.choice([1, 2, 3])) for _ in range(d)]
        B = Basis(tuple(Halfspace(a, bi) for a, bi in zip(A, b)))
        z = B.vertex()
        if max(abs(x) for x in z) > max_abs:
            continue
        split = IntegralitySplit(d_Z, d - d_Z)
        if first_fractional(z, split) is not None:
            return B, z, split


def cone_points(B, split, M):
    """Extreme mixed-integer points of the basis cone intersected with ``H_M``."""
    import itertools

    from dimilp.exact import rat_ceil, rat_floor
    from dimilp.polyhedra import bounding_box, vertex_enumerate

    P = B.as_constraints() + bounding_box(M, B.dim)
    verts = vertex_enumerate(P)
    ranges = [range(rat_ceil(min(v[k] for v in verts)), rat_floor(max(v[k] for v in verts)) + 1)
              for k in range(split.d_Z)]
    return list(slice_vertices(P, split.d_Z, itertools.product(*ranges)))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
