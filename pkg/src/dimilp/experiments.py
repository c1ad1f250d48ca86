"""Random instance generation and the two experiment harnesses."""

import logging
import os
import statistics
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import gmpy2
import numpy as np

from .cuts import IntegralitySplit
from .errors import FeasibleInstanceUnreachable, NoConvergence
from .exact import ONE, ZERO, Rat, format_rat, rat, to_decimal
from .formats import write_instance
from .network import Digraph, GraphSchedule, cycle_digraph, diameter, er_digraph, write_schedule
from .oracles import MilpInstance, MilpSolution, brute_force_milp
from .polyhedra import ConstraintSet, Halfspace
from .simulation import SimulationConfig, SimulationResult, default_assignment, run_simulation, summary, write_summary, write_trace

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GenSpec:
    """Recipe for a random instance.

    ``rejection="constraint"`` draws constraints one at a time and discards a
    draw that would leave no mixed-integer point inside ``H_M``.
    ``rejection="instance"`` redraws the whole instance instead; at ``n``
    beyond about 20 that almost never succeeds.
    """

    n: int
    d_Z: int = 1
    d_R: int = 1
    seed: int = 0
    M: Rat = rat(150)
    denominator_grid: int = 10**6
    c: Optional[Tuple[Rat, ...]] = None
    rejection: str = "constraint"
    max_draws: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "M", rat(self.M))
        if self.n < 1 or self.M <= 0:
            raise ValueError("need n >= 1 and M > 0")
        if self.rejection not in ("constraint", "instance"):
            raise ValueError(f"unknown rejection mode {self.rejection!r}")


def _rationalize(x: float, grid: int) -> Rat:
    return gmpy2.mpq(int(round(x * grid)), grid)


def _draw_row(rng, d: int, grid: int) -> Halfspace:
    vals = rng.standard_normal(d + 1)
    return Halfspace(tuple(_rationalize(v, grid) for v in vals[:d]), _rationalize(vals[d], grid))


def _instance(rows, spec: GenSpec, c, split) -> MilpInstance:
    return MilpInstance(ConstraintSet(tuple(rows), split.d), c, split, spec.M)


def generate(spec: GenSpec) -> Tuple[MilpInstance, int]:
    """Like ``generate_instance`` but also returns the number of Gaussian draws."""
    split = IntegralitySplit(spec.d_Z, spec.d_R)
    d = split.d
    c = spec.c if spec.c is not None else tuple(ONE if k == 0 else ZERO for k in range(d))
    rng = np.random.default_rng(spec.seed)
    grid = spec.denominator_grid

    if spec.rejection == "instance":
        cap = spec.max_draws or 10**4
        for draw in range(1, cap + 1):
            inst = _instance([_draw_row(rng, d, grid) for _ in range(spec.n)], spec, c, split)
            if brute_force_milp(inst).feasible:
                return inst, draw
        raise FeasibleInstanceUnreachable(f"no feasible instance in {cap} draws (n={spec.n})")

    cap = spec.max_draws or 100 * spec.n
    rows: List[Halfspace] = []
    witness = None
    draws = 0
    while len(rows) < spec.n:
        if draws >= cap:
            raise FeasibleInstanceUnreachable(f"only {len(rows)} of {spec.n} constraints after {cap} draws")
        draws += 1
        h = _draw_row(rng, d, grid)
        if witness is not None and h.contains(witness):
            rows.append(h)
            continue
        sol = brute_force_milp(_instance(rows + [h], spec, c, split))
        if sol.feasible:
            rows.append(h)
            witness = sol.z_star
    return _instance(rows, spec, c, split), draws


def generate_instance(spec: GenSpec) -> MilpInstance:
    """Gaussian instance with rationalized coefficients, feasible inside ``H_M``.

    Deterministic in ``spec``. The cost defaults to ``e_1``, so with
    ``d_Z >= 1`` the optimal cost is an integer.

    Raises
    ------
    FeasibleInstanceUnreachable
        If the draw budget runs out.
    """
    inst, draws = generate(spec)
    log.debug("instance n=%d seed=%d accepted after %d draws", spec.n, spec.seed, draws)
    return inst


def trial_seed(seed: int, size: int, trial: int) -> int:
    """Per-trial seed derived from ``(seed, size, trial)``; independent of run order."""
    return int(np.random.SeedSequence([seed, size, trial]).generate_state(1)[0])


@dataclass
class ConvergenceReport:
    instance: MilpInstance
    graph: Digraph
    optimum: MilpSolution
    result: SimulationResult
    draws: int
    # gaps[t][i] = |J_i(t) - J*|
    gaps: List[List[Rat]] = field(repr=False)


def run_convergence_experiment(N: int = 100, p: float = 0.015, M=150, seed: int = 0,
                               out_dir=None, connectivity: str = "cycle", max_rounds: int = 5000,
                               window: Optional[int] = None, constraints_per_agent: int = 1,
                               decimal: bool = False) -> ConvergenceReport:
    """Single DiMILP run on an Erdos-Renyi digraph, tracking ``|J_i(t) - J*|``.

    ``connectivity="cycle"`` adds a random Hamiltonian cycle to the ER draw;
    ``"resample"`` redraws the whole graph until it is strongly connected.
    """
    spec = GenSpec(n=N * constraints_per_agent, seed=seed, M=M)
    inst, draws = generate(spec)
    G = er_digraph(N, p, seed, augment_cycle=(connectivity == "cycle"))
    optimum = brute_force_milp(inst)
    cfg = SimulationConfig(max_rounds=max_rounds, window=window)
    result = run_simulation(inst, GraphSchedule.constant(G), cfg)
    gaps = [[abs(rec.cost - optimum.cost) for rec in rt.agents] for rt in result.traces]
    report = ConvergenceReport(inst, G, optimum, result, draws, gaps)
    if out_dir is not None:
        _write_convergence(report, out_dir, seed, p, decimal)
    return report


def _write_convergence(report: ConvergenceReport, out_dir, seed, p, decimal):
    os.makedirs(out_dir, exist_ok=True)
    write_instance(report.instance, os.path.join(out_dir, "instance.txt"), seed=seed)
    write_schedule(GraphSchedule.constant(report.graph), os.path.join(out_dir, "graph.txt"))
    write_trace(report.result, os.path.join(out_dir, "trace.tsv"), decimal=decimal)
    header = "round\tagent\tgap" + ("\tgap_decimal" if decimal else "")
    lines = [header]
    for t, row in enumerate(report.gaps):
        for i, g in enumerate(row, start=1):
            line = f"{t}\t{i}\t{format_rat(g)}"
            if decimal:
                line += f"\t{to_decimal(g)}"
            lines.append(line)
    with open(os.path.join(out_dir, "cost_gap.tsv"), "w") as fh:
        fh.write("\n".join(lines) + "\n")
    fields = summary(report.result)
    fields.update({
        "seed": str(seed),
        "p": str(p),
        "diameter": str(diameter(report.graph)),
        "edges": str(len(report.graph.edges)),
        "optimal_cost": format_rat(report.optimum.cost),
        "optimal_z": " ".join(format_rat(x) for x in report.optimum.z_star),
        "generator_draws": str(report.draws),
    })
    write_summary(fields, os.path.join(out_dir, "summary.txt"))


def five_numbers(values: Sequence[int]) -> Dict[str, float]:
    """min, quartiles (inclusive method), median and max."""
    vals = sorted(values)
    if len(vals) == 1:
        v = float(vals[0])
        return {"min": v, "q1": v, "median": v, "q3": v, "max": v}
    q1, med, q3 = statistics.quantiles(vals, n=4, method="inclusive")
    return {"min": float(vals[0]), "q1": q1, "median": float(statistics.median(vals)), "q3": q3,
            "max": float(vals[-1])}


@dataclass(frozen=True)
class TrialRow:
    size: int
    trial: int
    seed: int
    converged: bool
    rounds_to_convergence: Optional[int]
    rounds_to_halt: Optional[int]


@dataclass
class ScalingReport:
    """Per network size: raw rounds per trial and their box-plot statistics.

    ``rounds_to_convergence`` is the last round in which any agent changed;
    ``rounds_to_halt`` adds the stillness window, i.e. the round in which the
    ``2 * diameter + 1`` stillness rule declares convergence.
    """

    rows: List[TrialRow]
    sizes: Tuple[int, ...]

    def rounds(self, size: int, statistic: str = "rounds_to_convergence") -> List[int]:
        return [getattr(r, statistic) for r in self.rows if r.size == size and r.converged]

    def failures(self, size: int) -> int:
        return sum(1 for r in self.rows if r.size == size and not r.converged)

    def stats(self, size: int, statistic: str = "rounds_to_convergence") -> Dict[str, float]:
        return five_numbers(self.rounds(size, statistic))

    def medians(self, statistic: str = "rounds_to_convergence") -> List[float]:
        return [self.stats(s, statistic)["median"] for s in self.sizes]


def run_scaling_experiment(sizes: Sequence[int] = (8, 16, 32, 64), trials: int = 50, seed: int = 0,
                           M=150, max_rounds_per_agent: int = 50, out_dir=None,
                           verify: bool = False) -> ScalingReport:
    """DiMILP on directed cycles of each size, ``trials`` instances with ``n = N``.

    Non-convergence is recorded, not raised. With ``verify`` every consensus
    point is checked against the brute-force optimum.
    """
    rows = []
    for N in sizes:
        sched = GraphSchedule.constant(cycle_digraph(N))
        cfg = SimulationConfig(max_rounds=max_rounds_per_agent * N)
        for k in range(trials):
            s = trial_seed(seed, N, k)
            inst = generate_instance(GenSpec(n=N, seed=s, M=M))
            try:
                res = run_simulation(inst, sched, cfg)
            except NoConvergence:
                rows.append(TrialRow(N, k, s, False, None, None))
                continue
            if verify:
                opt = brute_force_milp(inst)
                assert res.final_z[0] == opt.z_star, f"N={N} trial {k}: consensus differs from optimum"
            rows.append(TrialRow(N, k, s, True, res.rounds_to_convergence, res.rounds_run))
            log.info("N=%d trial=%d rounds=%d halt=%d", N, k, res.rounds_to_convergence, res.rounds_run)
    report = ScalingReport(rows, tuple(sizes))
    if out_dir is not None:
        write_scaling(report, out_dir)
    return report


def write_scaling(report: ScalingReport, out_dir) -> None:
    os.makedirs(out_dir, exist_ok=True)
    raw = ["size\ttrial\tseed\tconverged\trounds_to_convergence\trounds_to_halt"]
    for r in report.rows:
        raw.append(f"{r.size}\t{r.trial}\t{r.seed}\t{int(r.converged)}\t"
                   f"{'' if r.rounds_to_convergence is None else r.rounds_to_convergence}\t"
                   f"{'' if r.rounds_to_halt is None else r.rounds_to_halt}")
    with open(os.path.join(out_dir, "scaling_raw.tsv"), "w") as fh:
        fh.write("\n".join(raw) + "\n")
    out = ["size\tstatistic\tconverged\tfailed\tmin\tq1\tmedian\tq3\tmax"]
    for size in report.sizes:
        for stat in ("rounds_to_convergence", "rounds_to_halt"):
            if not report.rounds(size, stat):
                continue
            st = report.stats(size, stat)
            out.append(f"{size}\t{stat}\t{len(report.rounds(size, stat))}\t{report.failures(size)}\t"
                       + "\t".join(f"{st[k]:g}" for k in ("min", "q1", "median", "q3", "max")))
    with open(os.path.join(out_dir, "scaling_summary.tsv"), "w") as fh:
        fh.write("\n".join(out) + "\n")


def read_scaling_raw(path) -> ScalingReport:
    rows = []
    with open(path) as fh:
        next(fh)
        for line in fh:
            size, trial, seed, conv, rc, rh = line.rstrip("\n").split("\t")
            rows.append(TrialRow(int(size), int(trial), int(seed), conv == "1",
                                 int(rc) if rc else None, int(rh) if rh else None))
    sizes = tuple(dict.fromkeys(r.size for r in rows))
    return ScalingReport(rows, sizes)
