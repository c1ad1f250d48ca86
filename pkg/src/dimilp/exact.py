"""Exact rational scalars, vectors and matrices.

Scalars are GMP rationals (``gmpy2.mpq``), which are always kept in lowest
terms with a positive denominator. Vectors are tuples of scalars and matrices
are tuples of row tuples, so every value is immutable and hashable.
"""

from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

import gmpy2

from .errors import DimensionMismatch, SingularMatrix

Rat = type(gmpy2.mpq(0))
RatVec = Tuple[Rat, ...]
RatMat = Tuple[RatVec, ...]

RatLike = Union[int, str, Fraction, Rat]

ZERO = gmpy2.mpq(0)
ONE = gmpy2.mpq(1)


def rat(x: RatLike, den: int = None) -> Rat:
    """Build a rational from an int, a ``"p/q"`` literal, a Fraction or an mpq.

    Floats are rejected: a binary float would silently inject rounding error
    into an otherwise exact pipeline.
    """
    if den is not None:
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return gmpy2.mpq(int(x), int(den))
    if isinstance(x, Rat):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a Fraction or 'p/q' string")
    if isinstance(x, str):
        return parse_rat(x)
    if isinstance(x, Fraction):
        return gmpy2.mpq(x.numerator, x.denominator)
    return gmpy2.mpq(x)


def vec(xs: Iterable[RatLike]) -> RatVec:
    return tuple(rat(x) for x in xs)


def mat(rows: Iterable[Iterable[RatLike]]) -> RatMat:
    m = tuple(vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionMismatch("matrix rows have different lengths")
    return m


def identity(n: int) -> RatMat:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def rat_floor(x: Rat) -> int:
    """Greatest integer not exceeding ``x`` (true floor for negatives)."""
    return int(x.numerator // x.denominator)


def rat_ceil(x: Rat) -> int:
    return -int((-x.numerator) // x.denominator)


def frac(x: Rat) -> Rat:
    """Fractional part ``x - floor(x)``, always in ``[0, 1)``."""
    return x - (x.numerator // x.denominator)


def is_integral(x: Rat) -> bool:
    return x.denominator == 1


def dot(u: Sequence[Rat], v: Sequence[Rat]) -> Rat:
    if len(u) != len(v):
        raise DimensionMismatch(f"dot of lengths {len(u)} and {len(v)}")
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def mat_vec(A: RatMat, x: Sequence[Rat]) -> RatVec:
    return tuple(dot(row, x) for row in A)


def transpose(A: RatMat) -> RatMat:
    return tuple(zip(*A))


def _eliminate(A: RatMat, rhs: Sequence[Sequence[Rat]]):
    """Gauss-Jordan elimination of ``A X = rhs``; ``rhs`` is a list of columns."""
    n = len(A)
    if any(len(row) != n for row in A):
        raise DimensionMismatch("matrix is not square")
    if any(len(col) != n for col in rhs):
        raise DimensionMismatch("right-hand side length differs from matrix size")
    k = len(rhs)
    M = [list(A[i]) + [col[i] for col in rhs] for i in range(n)]
    for j in range(n):
        p = next((i for i in range(j, n) if M[i][j] != 0), None)
        if p is None:
            raise SingularMatrix("matrix is singular")
        if p != j:
            M[j], M[p] = M[p], M[j]
        piv = M[j][j]
        rowj = [v / piv for v in M[j]]
        M[j] = rowj
        for i in range(n):
            if i != j and M[i][j] != 0:
                f = M[i][j]
                Mi = M[i]
                M[i] = [a - f * b for a, b in zip(Mi, rowj)]
    return [tuple(M[i][n + c] for i in range(n)) for c in range(k)]


def mat_solve(A: RatMat, b: Sequence[Rat]) -> RatVec:
    """Exact solution of ``A x = b``.

    Raises
    ------
    SingularMatrix
        If ``A`` is not invertible.
    DimensionMismatch
        If ``A`` is not square or ``b`` has the wrong length.
    """
    return _eliminate(A, [tuple(b)])[0]


def mat_inverse(A: RatMat) -> RatMat:
    n = len(A)
    cols = _eliminate(A, identity(n))
    return transpose(tuple(cols))


def is_invertible(A: RatMat) -> bool:
    try:
        _eliminate(A, [])
    except SingularMatrix:
        return False
    return True


def lex_less(v: Sequence[Rat], w: Sequence[Rat]) -> bool:
    """True iff ``v`` is lexicographically strictly smaller than ``w``."""
    if len(v) != len(w):
        raise DimensionMismatch(f"lex compare of lengths {len(v)} and {len(w)}")
    for a, b in zip(v, w):
        if a != b:
            return a < b
    return False


def format_rat(x: Rat) -> str:
    """Render ``x`` as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    if x.denominator == 1:
        return str(int(x.numerator))
    return f"{int(x.numerator)}/{int(x.denominator)}"


def parse_rat(s: str) -> Rat:
    s = s.strip()
    if "/" in s:
        p, q = s.split("/")
        q = int(q)
        if q == 0:
            raise ZeroDivisionError(f"zero denominator in {s!r}")
        return gmpy2.mpq(int(p), q)
    return gmpy2.mpq(int(s))


def to_decimal(x: Rat, digits: int = 6) -> str:
    return f"{float(x):.{digits}g}"
