"""Mixed-integer Gomory, cost-based and intersection cuts.

The MIG cut is built on the standard form of the basis LP
``max cbar.u  s.t.  [A_B, -A_B, I] u = b_B,  u >= 0`` with
``u = (z+, z-, s)``, then rewritten in ``z`` through ``s = b_B - A_B z``.
On the row of an integer variable the complementary ``z-+`` columns carry
coefficient ``-1`` (own column) or ``0`` (others), both of fractional part
zero, so only slack terms survive the rewrite.

All cuts are returned as normalized ``Halfspace`` values in ``<=`` form.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DimensionMismatch, NotInSplit
from .exact import (
    ONE,
    ZERO,
    Rat,
    RatMat,
    RatVec,
    dot,
    frac,
    is_integral,
    mat_inverse,
    rat,
    rat_ceil,
    rat_floor,
    vec,
)
from .polyhedra import Basis, Halfspace


@dataclass(frozen=True)
class IntegralitySplit:
    """The first ``d_Z`` coordinates are integer, the remaining ``d_R`` real."""

    d_Z: int
    d_R: int

    def __post_init__(self):
        if self.d_Z < 0 or self.d_R < 0 or self.d_Z + self.d_R < 1:
            raise ValueError(f"invalid integrality split ({self.d_Z}, {self.d_R})")

    @property
    def d(self) -> int:
        return self.d_Z + self.d_R


@dataclass(frozen=True)
class SplitDisjunction:
    """``{pi.x <= pi0} U {pi.x >= pi0 + 1}`` over the integer coordinates."""

    pi: Tuple[int, ...]
    pi0: int

    def __post_init__(self):
        object.__setattr__(self, "pi", tuple(int(p) for p in self.pi))
        object.__setattr__(self, "pi0", int(self.pi0))


@dataclass(frozen=True)
class StandardForm:
    Abar: RatMat
    cbar: RatVec
    b_B: RatVec
    basic_columns: Tuple[int, ...]
    integer_columns: Tuple[bool, ...]

    @property
    def d(self) -> int:
        return len(self.b_B)

    @property
    def nonbasic_columns(self) -> Tuple[int, ...]:
        basic = set(self.basic_columns)
        return tuple(j for j in range(3 * self.d) if j not in basic)

    def column(self, j: int) -> RatVec:
        return tuple(row[j] for row in self.Abar)


def to_standard_form(B: Basis, c: Sequence[Rat], z: Sequence[Rat], split: IntegralitySplit) -> StandardForm:
    """Standard form of ``min c.z s.t. A_B z <= b_B`` with a basis reproducing ``z``.

    Column ``k`` (``z+_k``) is basic when ``z_k >= 0``, column ``d + k``
    (``z-_k``) otherwise. Slack columns are ``2d .. 3d-1``.
    """
    d = B.dim
    if len(z) != d or len(c) != d or split.d != d:
        raise DimensionMismatch("basis, cost, point and split disagree on dimension")
    A = B.A_B
    Abar = tuple(tuple(A[i]) + tuple(-x for x in A[i]) + tuple(ONE if j == i else ZERO for j in range(d))
                 for i in range(d))
    c = vec(c)
    cbar = tuple(-x for x in c) + c + (ZERO,) * d
    basic = tuple(k if z[k] >= 0 else d + k for k in range(d))
    integer = tuple((j % d) < split.d_Z if j < 2 * d else False for j in range(3 * d))
    return StandardForm(Abar, cbar, B.b_B, basic, integer)


def _basis_inverse(sf: StandardForm) -> RatMat:
    AB = tuple(tuple(row[j] for j in sf.basic_columns) for row in sf.Abar)
    return mat_inverse(AB)


def tableau_row(sf: StandardForm, k: int) -> Tuple[RatVec, Rat]:
    """Row ``k`` of ``u_B = bbar - abar u_N``.

    Returns the coefficients ``abar_k`` aligned with ``sf.nonbasic_columns``
    and ``bbar_k``. ``k`` is zero-based.
    """
    if not 0 <= k < sf.d:
        raise IndexError(f"tableau row {k} out of range")
    inv_row = _basis_inverse(sf)[k]
    abar = tuple(dot(inv_row, sf.column(j)) for j in sf.nonbasic_columns)
    return abar, dot(inv_row, sf.b_B)


def first_fractional(z: Sequence[Rat], split: IntegralitySplit) -> Optional[int]:
    """Smallest integer-constrained index with a fractional value, or None."""
    for k in range(split.d_Z):
        if not is_integral(z[k]):
            return k
    return None


def mig_cut_u(sf: StandardForm, k: int) -> Tuple[Dict[int, Rat], Rat]:
    """The MIG cut on tableau row ``k`` in the ``u`` variables.

    Returns ``(coeffs, f0)`` meaning ``sum(coeffs[j] * u_j) >= f0`` over the
    nonbasic columns ``j``.
    """
    abar, bbar = tableau_row(sf, k)
    f0 = frac(bbar)
    assert f0 != 0, "MIG cut requested on an integral row"
    ratio = f0 / (1 - f0)
    coeffs = {}
    for j, a in zip(sf.nonbasic_columns, abar):
        if sf.integer_columns[j]:
            f = frac(a)
            coeffs[j] = f if f <= f0 else ratio * (1 - f)
        else:
            coeffs[j] = a if a >= 0 else -ratio * a
    return coeffs, f0


def _slack_cut(B: Basis, g: Sequence[Rat], rhs: Rat) -> Halfspace:
    """``sum_j g_j (b_B - A_B z)_j >= rhs`` rewritten as a halfspace in ``z``."""
    d = B.dim
    A = B.A_B
    a = tuple(sum((g[j] * A[j][i] for j in range(d) if g[j]), ZERO) for i in range(d))
    b = dot(g, B.b_B) - rhs
    return Halfspace(a, b).normalized()


def mig_cut(z_LP: Sequence[Rat], B: Basis, split: IntegralitySplit) -> Halfspace:
    """MIG cut on the first fractional integer coordinate of ``z_LP``.

    Returns the trivial halfspace when every integer coordinate is integral.
    The cut is strictly violated by ``z_LP`` and satisfied by every
    mixed-integer point of the basis cone.
    """
    d = B.dim
    if len(z_LP) != d or split.d != d:
        raise DimensionMismatch("point, basis and split disagree on dimension")
    k = first_fractional(z_LP, split)
    if k is None:
        return Halfspace.trivial(d)
    sf = to_standard_form(B, (ZERO,) * d, z_LP, split)
    coeffs, f0 = mig_cut_u(sf, k)
    for j in range(2 * d):
        if j in coeffs:
            assert coeffs[j] == 0, "complementary column survived in the MIG cut"
    g = tuple(coeffs[2 * d + j] for j in range(d))
    cut = _slack_cut(B, g, f0)
    assert cut == _mig_cut_z(z_LP, B, k), "u-space and z-space MIG cuts disagree"
    return cut


def _mig_cut_z(z_LP: Sequence[Rat], B: Basis, k: int) -> Halfspace:
    # Direct z-space form: row k of A_B^{-1} with f0 = frac(z_k). It equals
    # the sign-adjusted tableau cut because the MIG formula is invariant
    # under negating a row together with f0 -> 1 - f0.
    row = mat_inverse(B.A_B)[k]
    f0 = frac(z_LP[k])
    ratio = f0 / (1 - f0)
    g = tuple(a if a >= 0 else -ratio * a for a in row)
    return _slack_cut(B, g, f0)


def cost_cut(c: Sequence[Rat], z: Sequence[Rat]) -> Halfspace:
    """``c.z' >= ceil(c.z)`` stored as ``-c.z' <= -ceil(c.z)``."""
    c = vec(c)
    if len(c) != len(z):
        raise DimensionMismatch("cost and point disagree on dimension")
    return Halfspace(tuple(-x for x in c), rat(-rat_ceil(dot(c, z)))).normalized()


def intersection_cut(z_LP: Sequence[Rat], B: Basis, D: SplitDisjunction) -> Halfspace:
    """Intersection cut of the basis cone at ``z_LP`` with the split ``D``.

    Each extreme ray ``r_j = -A_B^{-1} e_j`` is followed until it meets
    ``pi.x = pi0`` or ``pi.x = pi0 + 1``; a ray parallel to both contributes
    nothing. The cut is ``sum_j (b_B - A_B z)_j / alpha_j >= 1``.

    Raises
    ------
    NotInSplit
        If ``pi.x_LP`` is not strictly between ``pi0`` and ``pi0 + 1``.
    """
    d = B.dim
    dz = len(D.pi)
    if len(z_LP) != d or dz > d:
        raise DimensionMismatch("split, point and basis disagree on dimension")
    pi = tuple(rat(p) for p in D.pi)
    px = dot(pi, z_LP[:dz])
    if not D.pi0 < px < D.pi0 + 1:
        raise NotInSplit(f"pi.x = {px} is not strictly inside ({D.pi0}, {D.pi0 + 1})")
    inv = mat_inverse(B.A_B)
    g = []
    for j in range(d):
        pr = -dot(pi, tuple(inv[i][j] for i in range(dz)))
        if pr < 0:
            g.append(pr / (D.pi0 - px))
        elif pr > 0:
            g.append(pr / (D.pi0 + 1 - px))
        else:
            g.append(ZERO)
    return _slack_cut(B, g, ONE)


def elementary_split(z_LP: Sequence[Rat], k: int, d_Z: int) -> SplitDisjunction:
    """``D(e_k, floor(z_k))`` over ``d_Z`` integer coordinates."""
    return SplitDisjunction(tuple(1 if i == k else 0 for i in range(d_Z)), rat_floor(z_LP[k]))
