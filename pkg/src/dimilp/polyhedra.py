"""Halfspaces, polyhedra and the lexicographic LP solver.

``lp_lex_solve`` minimises the vector objective ``(c.z, z_1, ..., z_d)``
lexicographically over ``{z : a_i.z <= b_i}``. The optimum, when it exists,
is a unique vertex, and it is certified by a *basis*: exactly ``d`` tight
halfspaces with an invertible normal matrix whose simplicial cone already has
that vertex as its lex-optimum.

The solver is a dual simplex on the inequality form. A basis is dual feasible
when every extreme ray ``r_j`` of its cone (``r_j = -A_B^{-1} e_j``) has a
lexicographically positive objective tuple ``(c.r_j, r_j)``. Because the tuple
contains ``r_j`` itself, ratio-test ties are impossible and the method cannot
cycle.
"""

import hashlib
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import AssumptionViolation, DimensionMismatch, SingularMatrix, UnboundedPolyhedron
from .exact import (
    ONE,
    ZERO,
    Rat,
    RatMat,
    RatVec,
    dot,
    format_rat,
    lex_less,
    mat_inverse,
    mat_solve,
    rat,
    transpose,
    vec,
)


@dataclass(frozen=True)
class Halfspace:
    """The set ``{z : a.z <= b}``.

    A zero normal is allowed: with ``b >= 0`` it is the whole space (the
    trivial halfspace), with ``b < 0`` it is empty.
    """

    a: RatVec
    b: Rat

    def __post_init__(self):
        object.__setattr__(self, "a", vec(self.a))
        object.__setattr__(self, "b", rat(self.b))

    @classmethod
    def trivial(cls, d: int) -> "Halfspace":
        return cls((ZERO,) * d, ZERO)

    @property
    def dim(self) -> int:
        return len(self.a)

    @property
    def has_zero_normal(self) -> bool:
        return not any(self.a)

    @property
    def is_trivial(self) -> bool:
        return self.has_zero_normal and self.b >= 0

    @property
    def is_empty(self) -> bool:
        return self.has_zero_normal and self.b < 0

    def value(self, z: Sequence[Rat]) -> Rat:
        return dot(self.a, z)

    def contains(self, z: Sequence[Rat]) -> bool:
        return dot(self.a, z) <= self.b

    def is_tight(self, z: Sequence[Rat]) -> bool:
        return dot(self.a, z) == self.b

    def normalized(self) -> "Halfspace":
        """Positive rescaling with the first nonzero coefficient of ``a`` at +-1.

        Zero-normal halfspaces map to ``0 <= 0`` or ``0 <= -1``.
        """
        if self.has_zero_normal:
            return Halfspace(self.a, ZERO if self.b >= 0 else -ONE)
        lead = next(x for x in self.a if x != 0)
        s = abs(lead)
        if s == 1:
            return self
        return Halfspace(tuple(x / s for x in self.a), self.b / s)

    def __str__(self):
        lhs = " ".join(format_rat(x) for x in self.a)
        return f"[{lhs}] <= {format_rat(self.b)}"


@dataclass(frozen=True)
class ConstraintSet:
    """Ordered intersection of halfspaces in a fixed dimension.

    Order matters: degenerate ties between bases are broken by position.
    """

    halfspaces: Tuple[Halfspace, ...]
    dim: int

    def __post_init__(self):
        hs = tuple(self.halfspaces)
        object.__setattr__(self, "halfspaces", hs)
        if self.dim < 1:
            raise DimensionMismatch("dimension must be positive")
        for h in hs:
            if h.dim != self.dim:
                raise DimensionMismatch(f"halfspace of dim {h.dim} in a set of dim {self.dim}")

    @classmethod
    def of(cls, halfspaces: Iterable[Halfspace], dim: Optional[int] = None) -> "ConstraintSet":
        hs = tuple(halfspaces)
        if dim is None:
            if not hs:
                raise DimensionMismatch("cannot infer dimension of an empty constraint set")
            dim = hs[0].dim
        return cls(hs, dim)

    @classmethod
    def from_rows(cls, A, b) -> "ConstraintSet":
        return cls.of(Halfspace(a, bi) for a, bi in zip(A, b))

    def __len__(self):
        return len(self.halfspaces)

    def __iter__(self):
        return iter(self.halfspaces)

    def __getitem__(self, i):
        return self.halfspaces[i]

    def __add__(self, other) -> "ConstraintSet":
        other_hs = other.halfspaces if isinstance(other, ConstraintSet) else tuple(other)
        return ConstraintSet(self.halfspaces + other_hs, self.dim)


def bounding_box(M, d: int) -> ConstraintSet:
    """The box ``H_M = {-M <= z_k <= M}``, listed as ``z_k <= M`` then ``-z_k <= M``."""
    M = rat(M)
    hs = []
    for k in range(d):
        e = tuple(ONE if j == k else ZERO for j in range(d))
        hs.append(Halfspace(e, M))
        hs.append(Halfspace(tuple(-x for x in e), M))
    return ConstraintSet(tuple(hs), d)


@dataclass(frozen=True)
class Basis:
    """Exactly ``d`` halfspaces whose normals form an invertible matrix."""

    halfspaces: Tuple[Halfspace, ...]

    def __post_init__(self):
        hs = tuple(self.halfspaces)
        object.__setattr__(self, "halfspaces", hs)
        d = len(hs)
        if d == 0 or any(h.dim != d for h in hs):
            raise DimensionMismatch("a basis needs exactly d halfspaces of dimension d")

    @property
    def dim(self) -> int:
        return len(self.halfspaces)

    @property
    def A_B(self) -> RatMat:
        return tuple(h.a for h in self.halfspaces)

    @property
    def b_B(self) -> RatVec:
        return tuple(h.b for h in self.halfspaces)

    def vertex(self) -> RatVec:
        return mat_solve(self.A_B, self.b_B)

    def as_constraints(self) -> ConstraintSet:
        return ConstraintSet(self.halfspaces, self.dim)

    def fingerprint(self) -> str:
        """Stable short digest of the (normalized) member halfspaces."""
        text = ";".join(str(h.normalized()) for h in self.halfspaces)
        return hashlib.sha1(text.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class Optimal:
    point: RatVec
    basis: Basis
    # positions of the basis members in the solved ConstraintSet
    indices: Tuple[int, ...] = field(default=())
    status = "optimal"


@dataclass(frozen=True)
class Infeasible:
    status = "infeasible"


@dataclass(frozen=True)
class Unbounded:
    """The lex objective decreases without bound along ``ray`` (a recession direction)."""

    ray: RatVec = ()
    status = "unbounded"


LexLpOutcome = (Optimal, Infeasible, Unbounded)


def contains(C: ConstraintSet, z: Sequence[Rat]) -> bool:
    if len(z) != C.dim:
        raise DimensionMismatch(f"point of dim {len(z)} for a set of dim {C.dim}")
    return all(h.contains(z) for h in C.halfspaces)


def lex_objective(c: Sequence[Rat], z: Sequence[Rat]) -> RatVec:
    """The tuple ``(c.z, z_1, ..., z_d)`` that lp_lex_solve minimises."""
    return (dot(c, z),) + tuple(z)


def _lex_positive(t) -> bool:
    for x in t:
        if x != 0:
            return x > 0
    return False


def _ray_keys(cols, c):
    # objective tuple of each extreme ray r_j = -col_j
    return [(-dot(c, col),) + tuple(-x for x in col) for col in cols]


def _inverse_columns(A: RatMat):
    return [list(col) for col in transpose(mat_inverse(A))]


def _dual_feasible(cols, c) -> bool:
    return all(_lex_positive(k) for k in _ray_keys(cols, c))


def hadamard_radius(rows: Sequence[Tuple[RatVec, Rat]], d: int) -> Rat:
    """A box radius strictly exceeding every coordinate of every basic solution.

    Rows are scaled to integers, so each basic solution is a ratio of two
    minors of ``[A | b]`` with a denominator of at least one; Hadamard's
    inequality bounds the numerator by the product of the ``d`` largest row
    norms.
    """
    norms = []
    for a, b in rows:
        den = 1
        for x in a + (b,):
            den = math.lcm(den, int(x.denominator))
        sq = sum(int(x * den) ** 2 for x in a + (b,))
        norms.append(math.isqrt(sq) + 1)
    norms.sort(reverse=True)
    R = 1
    for nrm in norms[:d]:
        R *= nrm
    return rat(R + 1)


class _Problem:
    """Deduplicated rows of a ConstraintSet with a map back to input positions."""

    def __init__(self, C: ConstraintSet):
        self.d = C.dim
        self.rows: List[Tuple[RatVec, Rat]] = []
        self.origin: List[int] = []
        self.position = {}
        self.empty = False
        seen = {}
        for i, h in enumerate(C.halfspaces):
            if h.has_zero_normal:
                if h.b < 0:
                    self.empty = True
                continue
            key = h.normalized()
            if key in seen:
                self.position[i] = seen[key]
                continue
            seen[key] = len(self.rows)
            self.position[i] = len(self.rows)
            self.rows.append((h.a, h.b))
            self.origin.append(i)


def _dual_simplex(rows, c, basis, cols, max_pivots=None):
    """Run lexicographic dual simplex pivots from a dual-feasible basis.

    ``basis`` (row indices) and ``cols`` (columns of the basis inverse) are
    updated in place. Returns ``(vertex, pivots)`` or ``(None, pivots)`` when
    the rows are infeasible.
    """
    d = len(basis)
    pivots = 0
    while True:
        bB = [rows[i][1] for i in basis]
        v = [sum((bB[j] * cols[j][k] for j in range(d) if bB[j]), ZERO) for k in range(d)]
        worst, enter = ZERO, None
        for i, (a, b) in enumerate(rows):
            viol = dot(a, v) - b
            if viol > worst:
                worst, enter = viol, i
        if enter is None:
            return tuple(v), pivots
        a = rows[enter][0]
        alpha = [dot(a, col) for col in cols]
        best, best_key = None, None
        for j in range(d):
            if alpha[j] > 0:
                col = cols[j]
                inv = 1 / alpha[j]
                key = (-dot(c, col) * inv,) + tuple(-x * inv for x in col)
                if best is None or key < best_key:
                    best, best_key = j, key
        if best is None:
            return None, pivots
        p = best
        ap = alpha[p]
        colp = [x / ap for x in cols[p]]
        for j in range(d):
            if j != p and alpha[j]:
                f = alpha[j]
                cols[j] = [x - f * y for x, y in zip(cols[j], colp)]
        cols[p] = colp
        basis[p] = enter
        pivots += 1
        if max_pivots is not None and pivots > max_pivots:
            raise AssumptionViolation("pivot budget exceeded")


def _select_basis(rows, c, v, current):
    """Canonical basis at vertex ``v``: the lexicographically smallest index set
    of tight rows that is invertible and dual feasible."""
    d = len(v)
    tight = [i for i, (a, b) in enumerate(rows) if dot(a, v) == b]
    if len(tight) == d:
        return sorted(current)
    for comb in combinations(tight, d):
        A = tuple(rows[i][0] for i in comb)
        try:
            cols = _inverse_columns(A)
        except SingularMatrix:
            continue
        if _dual_feasible(cols, c):
            return list(comb)
    # unreachable: the current basis is tight, invertible and dual feasible
    raise AssertionError("no dual-feasible basis among tight constraints")


def lp_lex_solve(C: ConstraintSet, c: Sequence[Rat], start: Optional[Sequence[int]] = None):
    """Lexicographically minimal minimiser of ``c.z`` over ``C``.

    Parameters
    ----------
    C : ConstraintSet
    c : sequence of Rat
        Cost vector of length ``C.dim``.
    start : sequence of int, optional
        Positions of ``d`` members of ``C`` to warm-start from. Ignored unless
        they form a dual-feasible basis. The outcome never depends on it.

    Returns
    -------
    Optimal, Infeasible or Unbounded
        ``Optimal.basis`` lists its members in input order; at degenerate
        vertices the basis with the smallest member positions is returned.
    """
    c = vec(c)
    d = C.dim
    if len(c) != d:
        raise DimensionMismatch(f"cost of dim {len(c)} for a set of dim {d}")
    prob = _Problem(C)
    if prob.empty:
        return Infeasible()
    rows = list(prob.rows)
    m = len(rows)

    basis = cols = None
    if start is not None:
        idx = [prob.position.get(i) for i in start]
        if len(idx) == d and None not in idx and len(set(idx)) == d:
            try:
                cand = _inverse_columns(tuple(rows[i][0] for i in idx))
            except SingularMatrix:
                cand = None
            if cand is not None and _dual_feasible(cand, c):
                basis, cols = idx, cand

    if basis is None:
        R = hadamard_radius(rows, d)
        basis, cols = [], []
        for k in range(d):
            # z_k >= -R is dual feasible when c_k >= 0, z_k <= R otherwise
            s = -ONE if c[k] >= 0 else ONE
            a = tuple(s if j == k else ZERO for j in range(d))
            rows.append((a, R))
            basis.append(len(rows) - 1)
            cols.append([s if j == k else ZERO for j in range(d)])

    v, _ = _dual_simplex(rows, c, basis, cols)
    if v is None:
        return Infeasible()
    if any(dot(rows[i][0], v) == rows[i][1] for i in range(m, len(rows))):
        # the artificial box is active: no bounded lex-optimum exists
        return Unbounded(_recession_ray(prob.rows, c, d))
    chosen = _select_basis(rows, c, v, basis)
    members = tuple(Halfspace(*rows[i]) for i in chosen)
    return Optimal(v, Basis(members), tuple(prob.origin[i] for i in chosen))


def _recession_ray(rows, c, d) -> RatVec:
    """A direction ``r`` with ``A r <= 0`` and ``(c.r, r) <lex 0``."""
    cone = ConstraintSet(tuple(Halfspace(a, ZERO) for a, _ in rows), d) + bounding_box(1, d)
    res = lp_lex_solve(cone, c)
    assert isinstance(res, Optimal) and lex_less(lex_objective(c, res.point), (ZERO,) * (d + 1))
    return res.point


def pivot(C: ConstraintSet, c: Sequence[Rat]):
    """Re-optimise a basis after appending one cut halfspace.

    ``C`` holds the ``d`` basis members followed by the cut. Starting from the
    basis (dual feasible by construction) at most one dual simplex pivot is
    needed: the cut enters and one member leaves. Returns ``(point, basis)``.

    Raises
    ------
    AssumptionViolation
        If the cut empties the basis cone.
    """
    d = C.dim
    if len(C) != d + 1:
        raise DimensionMismatch(f"pivot expects d+1={d + 1} constraints, got {len(C)}")
    res = lp_lex_solve(C, c, start=range(d))
    if isinstance(res, Infeasible):
        raise AssumptionViolation("cut emptied the basis cone")
    if isinstance(res, Unbounded):
        raise AssumptionViolation("basis cone is not lex-bounded")
    return res.point, res.basis


def vertex_enumerate(C: ConstraintSet) -> List[RatVec]:
    """All vertices of ``C`` by brute force over ``d``-subsets of halfspaces.

    Test oracle only; it shares no code with the simplex. Raises
    ``UnboundedPolyhedron`` when ``C`` is feasible but unbounded.
    """
    d = C.dim
    if any(h.is_empty for h in C.halfspaces):
        return []
    hs = [h for h in C.halfspaces if not h.has_zero_normal]
    verts = _enumerate(hs, d)
    if not verts:
        # no vertices: either infeasible or a polyhedron containing a line
        R = hadamard_radius([(h.a, h.b) for h in hs], d)
        if _enumerate(hs + list(bounding_box(R, d)), d):
            raise UnboundedPolyhedron("polyhedron contains a line")
        return []
    cone = [Halfspace(h.a, ZERO) for h in hs] + list(bounding_box(1, d))
    if any(any(x != 0 for x in r) for r in _enumerate(cone, d)):
        raise UnboundedPolyhedron("polyhedron has a nonzero recession direction")
    return verts


def _enumerate(hs: List[Halfspace], d: int) -> List[RatVec]:
    found = set()
    for comb in combinations(hs, d):
        try:
            z = mat_solve(tuple(h.a for h in comb), tuple(h.b for h in comb))
        except SingularMatrix:
            continue
        if all(h.contains(z) for h in hs):
            found.add(z)
    return sorted(found)
