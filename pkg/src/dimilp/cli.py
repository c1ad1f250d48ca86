"""Command-line entry point.

Exit codes: 0 on success, 2 when a modelling assumption is violated,
3 when a simulation does not converge.
"""

import argparse
import logging
import os
import sys

from .errors import AssumptionViolation, DimilpError, IterationCapExceeded, NoConvergence
from .exact import format_rat, to_decimal
from .experiments import GenSpec, generate, run_convergence_experiment, run_scaling_experiment
from .formats import dumps_instance, read_instance, write_instance
from .network import GraphSchedule, complete_digraph, cycle_digraph, er_digraph, read_schedule, write_schedule
from .oracles import brute_force_milp, centralized_cutting_plane
from .simulation import SimulationConfig, default_assignment, run_simulation, summary, write_summary, write_trace

EXIT_ASSUMPTION = 2
EXIT_NO_CONVERGENCE = 3


def _print_solution(sol, decimal):
    if not sol.feasible:
        print("status = infeasible")
        return
    print("status = optimal")
    print("z = " + " ".join(format_rat(x) for x in sol.z_star))
    print(f"cost = {format_rat(sol.cost)}")
    if decimal:
        print("z_decimal = " + " ".join(to_decimal(x) for x in sol.z_star))


def _instance_from_args(args):
    inst = read_instance(args.instance)
    if args.m_bound is not None:
        from dataclasses import replace

        inst = replace(inst, M=args.m_bound)
    return inst


def cmd_solve_central(args):
    inst = _instance_from_args(args)
    sol, trace = centralized_cutting_plane(inst, max_iterations=args.max_iterations)
    _print_solution(sol, args.decimal)
    print(f"cuts = {len(trace)}")
    return 0


def cmd_solve_brute(args):
    _print_solution(brute_force_milp(_instance_from_args(args)), args.decimal)
    return 0


def _schedule(args, N):
    if args.graph:
        return read_schedule(args.graph)
    if args.topology == "cycle":
        return GraphSchedule.constant(cycle_digraph(N))
    if args.topology == "complete":
        return GraphSchedule.constant(complete_digraph(N))
    return GraphSchedule.constant(er_digraph(N, args.p, args.seed, augment_cycle=not args.resample))


def cmd_simulate(args):
    inst = _instance_from_args(args)
    N = args.agents or -(-inst.n // args.constraints_per_agent)
    sched = _schedule(args, N)
    cfg = SimulationConfig(max_rounds=args.max_rounds, window=args.window, shuffle_seed=args.shuffle_seed)
    try:
        result = run_simulation(inst, sched, cfg, default_assignment(inst.n, sched.N))
    except NoConvergence as exc:
        if args.out_dir:
            _dump_run(args.out_dir, exc.result, sched, args.decimal)
        raise
    for k, v in summary(result).items():
        print(f"{k} = {v}")
    if args.out_dir:
        _dump_run(args.out_dir, result, sched, args.decimal)
    return 0


def _dump_run(out_dir, result, sched, decimal):
    os.makedirs(out_dir, exist_ok=True)
    write_trace(result, os.path.join(out_dir, "trace.tsv"), decimal=decimal)
    write_summary(summary(result), os.path.join(out_dir, "summary.txt"))
    if sched.static is not None or sched.period is not None:
        write_schedule(sched, os.path.join(out_dir, "graph.txt"))


def cmd_gen_instance(args):
    spec = GenSpec(n=args.n, d_Z=args.d_z, d_R=args.d_r, seed=args.seed, M=args.m_bound,
                   rejection=args.rejection)
    inst, draws = generate(spec)
    if args.output:
        write_instance(inst, args.output, seed=args.seed)
    else:
        sys.stdout.write(dumps_instance(inst, seed=args.seed))
    print(f"# draws = {draws}", file=sys.stderr)
    return 0


def cmd_fig2(args):
    rep = run_convergence_experiment(N=args.agents, p=args.p, M=args.m_bound, seed=args.seed,
                                     out_dir=args.out_dir, max_rounds=args.max_rounds, window=args.window,
                                     connectivity="resample" if args.resample else "cycle",
                                     constraints_per_agent=args.constraints_per_agent, decimal=args.decimal)
    for k, v in summary(rep.result).items():
        print(f"{k} = {v}")
    print(f"optimal_cost = {format_rat(rep.optimum.cost)}")
    print(f"final_gap_zero = {str(all(g == 0 for g in rep.gaps[-1])).lower()}")
    return 0


def cmd_scaling(args):
    rep = run_scaling_experiment(sizes=args.sizes, trials=args.trials, seed=args.seed, M=args.m_bound,
                                 max_rounds_per_agent=args.rounds_per_agent, out_dir=args.out_dir)
    print("size\tstatistic\tconverged\tfailed\tmin\tq1\tmedian\tq3\tmax")
    for size in rep.sizes:
        for stat in ("rounds_to_convergence", "rounds_to_halt"):
            if not rep.rounds(size, stat):
                continue
            st = rep.stats(size, stat)
            print(f"{size}\t{stat}\t{len(rep.rounds(size, stat))}\t{rep.failures(size)}\t"
                  + "\t".join(f"{st[k]:g}" for k in ("min", "q1", "median", "q3", "max")))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--m-bound", default=None, help="box radius M (rational)")
    common.add_argument("--max-rounds", type=int, default=1000)
    common.add_argument("--window", type=int, default=None, help="stillness window (default 2*diam+1)")
    common.add_argument("--out-dir", default=None)
    common.add_argument("--decimal", action="store_true", help="add decimal approximation columns")
    common.add_argument("--constraints-per-agent", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="dimilp", description="Distributed mixed-integer LP by constraint exchange.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve-central", parents=[common], help="centralized cutting-plane solver")
    s.add_argument("instance")
    s.add_argument("--max-iterations", type=int, default=None)
    s.set_defaults(func=cmd_solve_central)

    s = sub.add_parser("solve-brute", parents=[common], help="brute-force enumeration oracle")
    s.add_argument("instance")
    s.set_defaults(func=cmd_solve_brute)

    s = sub.add_parser("simulate", parents=[common], help="run the distributed algorithm")
    s.add_argument("instance")
    s.add_argument("--graph", help="schedule file; overrides --topology")
    s.add_argument("--topology", choices=("cycle", "complete", "er"), default="cycle")
    s.add_argument("--agents", type=int, default=None)
    s.add_argument("--p", type=float, default=0.015)
    s.add_argument("--resample", action="store_true", help="ER: redraw until strongly connected")
    s.add_argument("--shuffle-seed", type=int, default=None)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("gen-instance", parents=[common], help="random Gaussian instance")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d-z", type=int, default=1)
    s.add_argument("--d-r", type=int, default=1)
    s.add_argument("--rejection", choices=("constraint", "instance"), default="constraint")
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_gen_instance)

    exp = sub.add_parser("experiment", help="reproduction experiments")
    esub = exp.add_subparsers(dest="experiment", required=True)
    s = esub.add_parser("fig2", parents=[common], help="single run on an Erdos-Renyi digraph")
    s.add_argument("--agents", type=int, default=100)
    s.add_argument("--p", type=float, default=0.015)
    s.add_argument("--resample", action="store_true", help="redraw until strongly connected instead of adding a cycle")
    s.set_defaults(func=cmd_fig2, max_rounds=5000)
    s = esub.add_parser("scaling", parents=[common], help="Monte Carlo rounds vs. cycle size")
    s.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 64])
    s.add_argument("--trials", type=int, default=50)
    s.add_argument("--rounds-per-agent", type=int, default=50)
    s.set_defaults(func=cmd_scaling)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.m_bound is None:
        args.m_bound = 150 if args.func in (cmd_gen_instance, cmd_fig2, cmd_scaling) else None
    try:
        return args.func(args)
    except NoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (AssumptionViolation, IterationCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except DimilpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
