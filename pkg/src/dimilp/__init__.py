"""Exact-arithmetic distributed MILP solver based on cutting-plane consensus."""

from .cuts import IntegralitySplit, SplitDisjunction, cost_cut, elementary_split, intersection_cut, mig_cut
from .errors import (
    AssumptionViolation,
    BadBigM,
    DimilpError,
    FeasibleInstanceUnreachable,
    IterationCapExceeded,
    NoConvergence,
)
from .exact import Rat, format_rat, parse_rat, rat
from .experiments import GenSpec, ScalingReport, generate_instance, run_convergence_experiment, run_scaling_experiment
from .formats import read_instance, write_instance
from .network import Digraph, GraphSchedule, complete_digraph, cycle_digraph, diameter, er_digraph
from .oracles import MilpInstance, MilpSolution, brute_force_milp, centralized_cutting_plane
from .polyhedra import Basis, ConstraintSet, Halfspace, Infeasible, Optimal, Unbounded, bounding_box, lp_lex_solve, pivot
from .simulation import SimulationConfig, SimulationResult, agent_init, agent_step, run_simulation

__version__ = "0.1.0"
