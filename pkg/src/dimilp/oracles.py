"""Centralized reference solvers: exhaustive enumeration and Gomory's cutting-plane loop."""

import itertools
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .cuts import IntegralitySplit, cost_cut, mig_cut
from .errors import AssumptionViolation, DimensionMismatch, EnumerationBudgetExceeded, IterationCapExceeded
from .exact import ONE, ZERO, Rat, RatVec, dot, is_integral, lex_less, rat, rat_ceil, rat_floor, vec
from .polyhedra import (
    ConstraintSet,
    Halfspace,
    Infeasible,
    Optimal,
    bounding_box,
    contains,
    lex_objective,
    lp_lex_solve,
)


@dataclass(frozen=True)
class MilpInstance:
    """``min c.z  s.t.  a_i.z <= b_i,  z in Z^d_Z x R^d_R``, boxed by ``H_M``."""

    constraints: ConstraintSet
    c: RatVec
    split: IntegralitySplit
    M: Rat

    def __post_init__(self):
        object.__setattr__(self, "c", vec(self.c))
        object.__setattr__(self, "M", rat(self.M))
        if len(self.constraints) < 1:
            raise ValueError("an instance needs at least one constraint")
        if self.M <= 0:
            raise ValueError("the box radius M must be positive")
        d = self.constraints.dim
        if len(self.c) != d or self.split.d != d:
            raise DimensionMismatch("constraints, cost and split disagree on dimension")

    @property
    def d(self) -> int:
        return self.constraints.dim

    @property
    def n(self) -> int:
        return len(self.constraints)

    def boxed(self) -> ConstraintSet:
        """The constraints conjoined with ``H_M``."""
        return self.constraints + bounding_box(self.M, self.d)


@dataclass(frozen=True)
class MilpSolution:
    z_star: Optional[RatVec] = None
    cost: Optional[Rat] = None

    @property
    def feasible(self) -> bool:
        return self.z_star is not None

    @classmethod
    def infeasible(cls) -> "MilpSolution":
        return cls()


@dataclass(frozen=True)
class CuttingPlaneStep:
    z_LP: RatVec
    mig: Halfspace
    cost_cut: Halfspace


def is_mixed_integer_feasible(z, inst: MilpInstance) -> bool:
    if len(z) != inst.d:
        raise DimensionMismatch(f"point of dim {len(z)} for an instance of dim {inst.d}")
    return all(is_integral(z[k]) for k in range(inst.split.d_Z)) and contains(inst.boxed(), z)


def _integer_ranges(P: ConstraintSet, d_Z: int):
    """Integer range of each integer coordinate over the LP relaxation, or None if empty."""
    d = P.dim
    ranges = []
    for k in range(d_Z):
        e = tuple(ONE if j == k else ZERO for j in range(d))
        lo = lp_lex_solve(P, e)
        if not isinstance(lo, Optimal):
            return None
        hi = lp_lex_solve(P, tuple(-x for x in e))
        ranges.append(range(rat_ceil(lo.point[k]), rat_floor(hi.point[k]) + 1))
    return ranges


def brute_force_milp(inst: MilpInstance, budget: int = 10**6) -> MilpSolution:
    """Exact MILP optimum by enumerating the integer part.

    The integer coordinates range over the integer points of the LP
    relaxation's bounding box; each slice is lex-solved in the real
    coordinates. Ties in cost go to the lexicographically smallest point.
    """
    P = inst.boxed()
    d_Z, d = inst.split.d_Z, inst.d
    c = inst.c
    if d_Z == 0:
        res = lp_lex_solve(P, c)
        if isinstance(res, Optimal):
            return MilpSolution(res.point, dot(c, res.point))
        return MilpSolution.infeasible()

    ranges = _integer_ranges(P, d_Z)
    if ranges is None:
        return MilpSolution.infeasible()
    count = 1
    for r in ranges:
        count *= len(r)
    if count > budget:
        raise EnumerationBudgetExceeded(f"{count} integer points exceed the budget of {budget}")

    best, best_key = None, None
    c_y = c[d_Z:]
    for x in itertools.product(*ranges):
        x = tuple(rat(v) for v in x)
        if d_Z == d:
            if not contains(P, x):
                continue
            z = x
        else:
            slice_ = ConstraintSet(
                tuple(Halfspace(h.a[d_Z:], h.b - dot(h.a[:d_Z], x)) for h in P), d - d_Z)
            res = lp_lex_solve(slice_, c_y)
            if not isinstance(res, Optimal):
                continue
            z = x + res.point
        key = lex_objective(c, z)
        if best_key is None or lex_less(key, best_key):
            best, best_key = z, key
    if best is None:
        return MilpSolution.infeasible()
    return MilpSolution(best, best_key[0])


def centralized_cutting_plane(inst: MilpInstance, max_iterations: Optional[int] = None
                              ) -> Tuple[MilpSolution, List[CuttingPlaneStep]]:
    """Gomory's cutting-plane loop with MIG and cost-based cuts.

    Every iteration appends the MIG cut of the current lex-optimal vertex and
    the cost cut ``c.z >= ceil(c.z_LP)``; earlier cuts are kept. Requires an
    integer optimal cost. If the cuts empty the relaxation the instance has
    no mixed-integer point and an infeasible solution is returned.

    Raises
    ------
    IterationCapExceeded
        After ``max_iterations`` cuts (default ``10 * n * d``).
    AssumptionViolation
        If the boxed relaxation is unbounded.
    """
    if max_iterations is None:
        max_iterations = 10 * inst.n * inst.d
    c, split = inst.c, inst.split
    P = inst.boxed()
    res = lp_lex_solve(P, c)
    if isinstance(res, Infeasible):
        return MilpSolution.infeasible(), []
    if not isinstance(res, Optimal):
        raise AssumptionViolation("boxed relaxation is unbounded")
    trace: List[CuttingPlaneStep] = []
    h_c = cost_cut(c, res.point)
    while not is_mixed_integer_feasible(res.point, inst):
        if len(trace) >= max_iterations:
            raise IterationCapExceeded(f"no mixed-integer point after {len(trace)} cuts", trace)
        h_mig = mig_cut(res.point, res.basis, split)
        trace.append(CuttingPlaneStep(res.point, h_mig, h_c))
        P = P + (h_mig, h_c)
        res = lp_lex_solve(P, c, start=res.indices)
        if isinstance(res, Infeasible):
            # valid cuts only remove non-solutions, so S itself is empty
            return MilpSolution.infeasible(), trace
        if not isinstance(res, Optimal):
            raise AssumptionViolation(f"relaxation became {res.status} after {len(trace)} cuts")
        h_c = cost_cut(c, res.point)
    return MilpSolution(res.point, dot(c, res.point)), trace
