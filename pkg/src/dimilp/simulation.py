"""Synchronous simulation of the DiMILP constraint-exchange algorithm.

Each agent keeps a candidate lex-optimal point ``z`` and the basis ``B``
certifying it. In every round it reads the bases its in-neighbours published
at the end of the previous round, solves a small LP over those bases, its own
basis, its permanent constraints and a cost cut, adds a MIG cut and pivots.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .cuts import IntegralitySplit, cost_cut, mig_cut
from .errors import AssumptionViolation, BadBigM, NoConvergence
from .exact import Rat, RatVec, dot, format_rat, is_integral, to_decimal
from .network import GraphSchedule, diameter
from .oracles import MilpInstance
from .polyhedra import Basis, ConstraintSet, Halfspace, Optimal, bounding_box, lex_objective, lp_lex_solve, pivot

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AgentState:
    id: int
    z: RatVec
    B: Basis
    h: ConstraintSet


@dataclass(frozen=True)
class SimulationConfig:
    """``window=None`` picks ``2 * diameter + 1`` for static graphs and the
    schedule's joint-connectivity window otherwise."""

    max_rounds: int = 1000
    window: Optional[int] = None
    record_cuts: bool = True
    # per-round shuffle of the agent processing order; must not change results
    shuffle_seed: Optional[int] = None

    def __post_init__(self):
        if self.window is not None and (self.window < 1 or self.max_rounds < self.window):
            raise ValueError("need window >= 1 and max_rounds >= window")


@dataclass(frozen=True)
class AgentRecord:
    z: RatVec
    cost: Rat
    basis: str
    cut_emitted: bool
    cut: Optional[Halfspace]
    sent: int


@dataclass(frozen=True)
class RoundTrace:
    t: int
    agents: Tuple[AgentRecord, ...]


@dataclass
class SimulationResult:
    converged: bool
    rounds_to_convergence: Optional[int]
    rounds_run: int
    window: int
    final_z: List[RatVec]
    final_cost: List[Rat]
    traces: List[RoundTrace] = field(repr=False)

    def cost_history(self, agent: int) -> List[Rat]:
        """Cost of ``agent`` (1-based) at rounds ``0..rounds_run``."""
        return [rt.agents[agent - 1].cost for rt in self.traces]


def default_assignment(n: int, N: int) -> List[List[int]]:
    """Split constraint indices ``0..n-1`` into ``N`` contiguous, near-equal blocks."""
    base, extra = divmod(n, N)
    out, start = [], 0
    for i in range(N):
        size = base + (1 if i < extra else 0)
        out.append(list(range(start, start + size)))
        start += size
    return out


def agent_init(inst: MilpInstance, i: int, members: Optional[Sequence[int]] = None) -> AgentState:
    """Initial state of agent ``i`` (1-based).

    The agent holds constraint ``i`` (or the 0-based constraint indices in
    ``members``) intersected with ``H_M`` and starts at its lex-optimum.

    Raises
    ------
    BadBigM
        If the local constraints exclude the whole box.
    """
    if members is None:
        members = [i - 1]
    own = tuple(inst.constraints[k] for k in members)
    h = ConstraintSet(own, inst.d) + bounding_box(inst.M, inst.d)
    res = lp_lex_solve(h, inst.c)
    if not isinstance(res, Optimal):
        raise BadBigM(f"agent {i}: local constraints are {res.status} inside the box", agent=i, round=0)
    return AgentState(i, res.point, res.basis, h)


def _step(s: AgentState, neighbor_bases: Sequence[Basis], c, split: IntegralitySplit):
    h_c = cost_cut(c, s.z)
    # own basis first: at a degenerate vertex the positional tie-break then
    # keeps it, otherwise agents copy equivalent neighbour bases forever
    hs = list(s.B.halfspaces)
    for B in neighbor_bases:
        hs.extend(B.halfspaces)
    hs.extend(s.h.halfspaces)
    hs.append(h_c)
    d = len(s.z)
    H_tmp = ConstraintSet(tuple(hs), d)
    res = lp_lex_solve(H_tmp, c, start=range(d))
    if not isinstance(res, Optimal):
        raise AssumptionViolation(f"agent {s.id}: local LP is {res.status}", agent=s.id)
    h_mig = mig_cut(res.point, res.basis, split)
    z, B = pivot(ConstraintSet(res.basis.halfspaces + (h_mig,), d), c)
    if dot(c, z) < dot(c, s.z):
        raise AssumptionViolation(f"agent {s.id}: cost decreased from {s.z} to {z}", agent=s.id)
    return AgentState(s.id, z, B, s.h), h_mig


def agent_step(s: AgentState, neighbor_bases: Sequence[Basis], c, split: IntegralitySplit) -> AgentState:
    """One DiMILP update of agent ``s`` given its in-neighbours' bases.

    Raises
    ------
    AssumptionViolation
        If the local LP is infeasible or the local cost would decrease.
    """
    return _step(s, neighbor_bases, c, split)[0]


def _record(s: AgentState, c, cut: Optional[Halfspace], record_cuts: bool) -> AgentRecord:
    emitted = cut is not None and not cut.is_trivial
    return AgentRecord(s.z, dot(c, s.z), s.B.fingerprint(), emitted,
                       cut if emitted and record_cuts else None, len(s.B.halfspaces))


def run_simulation(inst: MilpInstance, sched: GraphSchedule, cfg: SimulationConfig = SimulationConfig(),
                   assignment: Optional[Sequence[Sequence[int]]] = None) -> SimulationResult:
    """Run synchronous DiMILP rounds until global stillness or ``cfg.max_rounds``.

    At round ``t >= 1`` every agent reads the round ``t - 1`` bases of its
    in-neighbours under ``sched.at(t)``; all updates are applied together.
    The run halts once no state changed for ``window`` consecutive rounds.
    ``rounds_to_convergence`` is the last round in which some state changed.

    Raises
    ------
    NoConvergence
        When ``max_rounds`` is reached, or when the agents fall still without
        agreeing. The partial result is attached.
    AssumptionViolation
        With the offending agent and round filled in.
    """
    N = sched.N
    if assignment is None:
        assignment = default_assignment(inst.n, N)
    if len(assignment) != N:
        raise ValueError(f"assignment covers {len(assignment)} agents, schedule has {N}")
    window = cfg.window
    if window is None:
        if sched.static is not None:
            window = 2 * diameter(sched.static) + 1
        elif sched.window is not None:
            window = sched.window
        else:
            raise ValueError("time-varying schedule without a window; set SimulationConfig.window")
    c, split, d = inst.c, inst.split, inst.d

    states = [agent_init(inst, i + 1, assignment[i]) for i in range(N)]
    cuts: List[Optional[Halfspace]] = [None] * N
    traces = [RoundTrace(0, tuple(_record(s, c, None, cfg.record_cuts) for s in states))]
    changed = [True] * N
    prev_nbrs: List[Optional[Tuple[int, ...]]] = [None] * N
    rng = random.Random(cfg.shuffle_seed) if cfg.shuffle_seed is not None else None
    last_change = 0
    t = 0
    converged = False
    while t < cfg.max_rounds:
        t += 1
        G = sched.at(t)
        published = [s.B for s in states]
        order = list(range(N))
        if rng is not None:
            rng.shuffle(order)
        new_states = list(states)
        new_cuts = list(cuts)
        for i in order:
            nbrs = tuple(sorted(G.in_neighbors(i + 1)))
            # a step is a pure function of (own state, neighbour bases): skip it
            # when none of them changed in the previous round
            if (t > 1 and nbrs == prev_nbrs[i] and not changed[i]
                    and not any(changed[j - 1] for j in nbrs)):
                continue
            prev_nbrs[i] = nbrs
            try:
                new_states[i], new_cuts[i] = _step(states[i], [published[j - 1] for j in nbrs], c, split)
            except AssumptionViolation as exc:
                exc.agent, exc.round = i + 1, t
                raise
        changed = [(new_states[i].z != states[i].z or new_states[i].B != states[i].B) for i in range(N)]
        states, cuts = new_states, new_cuts
        traces.append(RoundTrace(t, tuple(_record(s, c, k, cfg.record_cuts) for s, k in zip(states, cuts))))
        for rec in traces[-1].agents:
            assert rec.sent == d, "an agent must transmit exactly d halfspaces"
        if any(changed):
            last_change = t
        elif t - last_change >= window:
            converged = True
            break

    result = SimulationResult(
        converged=False,
        rounds_to_convergence=last_change if converged else None,
        rounds_run=t,
        window=window,
        final_z=[s.z for s in states],
        final_cost=[dot(c, s.z) for s in states],
        traces=traces,
    )
    if not converged:
        raise NoConvergence(f"no stillness after {t} rounds", result)
    if len(set(result.final_z)) != 1 or len(set(result.final_cost)) != 1:
        raise NoConvergence(f"agents fell still at round {last_change} without agreeing", result)
    result.converged = True
    return result


def write_trace(result: SimulationResult, path, decimal: bool = False) -> None:
    """Tab-separated trace: one row per agent per round."""
    d = len(result.final_z[0])
    cols = ["round", "agent", "cost"] + [f"z{k + 1}" for k in range(d)] + ["basis", "cut"]
    if decimal:
        cols.append("cost_decimal")
    lines = ["\t".join(cols)]
    for rt in result.traces:
        for i, rec in enumerate(rt.agents, start=1):
            row = [str(rt.t), str(i), format_rat(rec.cost)] + [format_rat(x) for x in rec.z]
            row += [rec.basis, "1" if rec.cut_emitted else "0"]
            if decimal:
                row.append(to_decimal(rec.cost))
            lines.append("\t".join(row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def summary(result: SimulationResult) -> Dict[str, str]:
    out = {
        "converged": str(result.converged).lower(),
        "rounds_to_convergence": "" if result.rounds_to_convergence is None else str(result.rounds_to_convergence),
        "rounds_run": str(result.rounds_run),
        "window": str(result.window),
        "agents": str(len(result.final_z)),
    }
    if result.converged:
        out["z"] = " ".join(format_rat(x) for x in result.final_z[0])
        out["cost"] = format_rat(result.final_cost[0])
    return out


def write_summary(fields: Dict[str, str], path) -> None:
    with open(path, "w") as fh:
        fh.write("".join(f"{k} = {v}\n" for k, v in fields.items()))


def final_x_integral(result: SimulationResult, d_Z: int) -> bool:
    return all(is_integral(z[k]) for z in result.final_z for k in range(d_Z))
