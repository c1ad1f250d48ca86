"""Acceptance suite: one PASS/FAIL line per criterion, printed in the pytest summary.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import random
import time

import pytest

from dimilp.cuts import elementary_split, first_fractional, intersection_cut, mig_cut
from dimilp.exact import is_integral, rat
from dimilp.experiments import GenSpec, generate_instance, run_convergence_experiment, run_scaling_experiment
from dimilp.network import GraphSchedule, cycle_digraph
from dimilp.oracles import brute_force_milp, centralized_cutting_plane
from dimilp.polyhedra import lp_lex_solve
from dimilp.simulation import SimulationConfig, run_simulation, write_trace

from conftest import cone_points, fig1_instance, random_basis_pair

RESULTS = {}

REFERENCE_MEDIANS = {8: 26.5, 16: 55, 32: 110.5, 64: 213.5}


def record(num, ok, detail):
    RESULTS[num] = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}"
    print(RESULTS[num])
    return ok


def test_criterion_1_fig1_end_to_end():
    t0 = time.perf_counter()
    inst = fig1_instance()
    target = ((rat(-2), rat(3, 4)), rat(-2))
    lp = lp_lex_solve(inst.boxed(), inst.c).point
    brute = brute_force_milp(inst)
    central, _ = centralized_cutting_plane(inst)
    sim = run_simulation(inst, GraphSchedule.constant(cycle_digraph(4)))
    elapsed = time.perf_counter() - t0
    ok = (lp == (rat(-78, 29), rat(60, 29))
          and (brute.z_star, brute.cost) == target
          and (central.z_star, central.cost) == target
          and all((z, c) == target for z, c in zip(sim.final_z, sim.final_cost))
          and elapsed < 1.0)
    assert record(1, ok, f"LP -78/29,60/29; all three solvers at (-2, 3/4) cost -2; {elapsed:.3f}s < 1s")


def test_criterion_2_oracle_sweep():
    t0 = time.perf_counter()
    feasible = agree = 0
    bad = []
    for k in range(200):
        n = 4 + k * 97 // 200
        inst = generate_instance(GenSpec(n=n, seed=10_000 + k))
        ref = brute_force_milp(inst)
        if not ref.feasible:
            continue
        feasible += 1
        sol, _ = centralized_cutting_plane(inst)
        if (sol.z_star, sol.cost) == (ref.z_star, ref.cost):
            agree += 1
        else:
            bad.append(k)
    elapsed = time.perf_counter() - t0
    ok = agree == feasible == 200 and elapsed < 300
    assert record(2, ok, f"{agree}/{feasible} feasible instances agree (n=4..100); {elapsed:.1f}s < 300s"), bad


@pytest.fixture(scope="module")
def cycle_runs():
    runs = []
    for k in range(100):
        N = (4, 8, 16)[k % 3]
        inst = generate_instance(GenSpec(n=N, seed=20_000 + k))
        res = run_simulation(inst, GraphSchedule.constant(cycle_digraph(N)), SimulationConfig(max_rounds=50 * N))
        runs.append((inst, res))
    return runs


def test_criterion_3_consensus(cycle_runs):
    ok_count = 0
    for inst, res in cycle_runs:
        ref = brute_force_milp(inst)
        if (res.converged and len(set(res.final_z)) == 1 and res.final_z[0] == ref.z_star
                and set(res.final_cost) == {ref.cost}):
            ok_count += 1
    worst = max(res.rounds_run / (50 * len(res.final_z)) for _, res in cycle_runs)
    assert record(3, ok_count == 100,
                  f"{ok_count}/100 cycle runs (N=4/8/16) reach the brute-force optimum in consensus; "
                  f"max rounds_run/(50N) = {worst:.2f}")


def test_criterion_4_cut_validity():
    rng = random.Random(4)
    M = 20
    sep = valid = equal = 0
    for _ in range(500):
        B, z, split = random_basis_pair(rng)
        cut = mig_cut(z, B, split)
        sep += cut.value(z) > cut.b
        valid += all(cut.contains(p) for p in cone_points(B, split, M))
        k = first_fractional(z, split)
        equal += intersection_cut(z, B, elementary_split(z, k, split.d_Z)) == cut
    ok = sep == valid == equal == 500
    assert record(4, ok, f"separates {sep}/500, valid on enumerated cone points (M={M}) {valid}/500, "
                         f"equals intersection cut {equal}/500")


def test_criterion_5_trace_properties(cycle_runs):
    runs = list(cycle_runs) + [(fig1_instance(), run_simulation(fig1_instance(), GraphSchedule.constant(cycle_digraph(4))))]
    checked = 0
    ok = True
    for inst, res in runs:
        if not res.converged:
            continue
        for i in range(1, len(res.final_z) + 1):
            hist = res.cost_history(i)
            checked += len(hist)
            ok &= all(a <= b for a, b in zip(hist, hist[1:]))
            # constant over the final stillness window
            ok &= len(set(hist[-res.window - 1:])) == 1
        ok &= all(is_integral(z[k]) for z in res.final_z for k in range(inst.split.d_Z))
    assert record(5, ok, f"{checked} agent-rounds over {len(runs)} runs: costs monotone, eventually constant, x integral")


def test_criterion_6_scaling(tmp_path):
    # the reference rounds count up to the stillness halt (their minima 22/47/94/191 sit at
    # one pass around the cycle plus 2*diam+1), so (a) and (b) are judged on halting rounds
    t0 = time.perf_counter()
    rep = run_scaling_experiment(sizes=(8, 16, 32, 64), trials=50, seed=0, out_dir=tmp_path)
    elapsed = time.perf_counter() - t0
    halt = rep.medians("rounds_to_halt")
    last = rep.medians("rounds_to_convergence")
    paper = [REFERENCE_MEDIANS[s] for s in rep.sizes]
    within = all(abs(m - p) <= 0.3 * p for m, p in zip(halt, paper))
    ratios = [b / a for a, b in zip(halt, halt[1:])]
    linear = all(1.6 <= r <= 2.4 for r in ratios)
    last_within = all(abs(m - p) <= 0.3 * p for m, p in zip(last, paper))
    fails = sum(rep.failures(s) for s in rep.sizes)
    ok = within and linear and elapsed < 1800
    detail = (f"halting-round medians {halt} vs {paper} (+-30%: {within}), ratios "
              f"{[round(r, 2) for r in ratios]} (in [1.6, 2.4]: {linear}); last-change medians {last} "
              f"(+-30%: {last_within}, not the reference quantity); "
              f"{fails} non-converged; {elapsed:.0f}s < 1800s")
    assert record(6, ok, detail)


def test_criterion_7_fig2_run():
    rep = run_convergence_experiment(N=100, p=0.015, M=150, seed=0)
    res = rep.result
    zero = all(g == 0 for g in rep.gaps[-1])
    ok = res.converged and zero and res.rounds_to_convergence <= 50
    assert record(7, ok, f"N=100 ER(0.015) plus random Hamiltonian cycle: converged={res.converged}, final gaps all 0={zero}, "
                         f"rounds_to_convergence={res.rounds_to_convergence} <= 50 (halted at {res.rounds_run})")


def test_criterion_8_snapshot_order(tmp_path):
    identical = 0
    sched = GraphSchedule.constant(cycle_digraph(8))
    base = {}
    for k in range(20):
        inst_seed = 30_000 + k % 5
        inst = generate_instance(GenSpec(n=8, seed=inst_seed))
        if inst_seed not in base:
            p = tmp_path / f"base{inst_seed}.tsv"
            write_trace(run_simulation(inst, sched, SimulationConfig(max_rounds=400)), p, decimal=True)
            base[inst_seed] = p.read_bytes()
        p = tmp_path / f"shuffled{k}.tsv"
        write_trace(run_simulation(inst, sched, SimulationConfig(max_rounds=400, shuffle_seed=k)), p, decimal=True)
        identical += p.read_bytes() == base[inst_seed]
    assert record(8, identical == 20, f"{identical}/20 shuffled-order runs byte-identical to the in-order trace")
