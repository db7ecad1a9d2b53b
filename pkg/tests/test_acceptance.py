"""Exit criteria, one test per criterion, each at its stated tolerance.

Every test appends a PASS/FAIL line that is printed in the pytest terminal
summary; ``python tests/test_acceptance.py`` runs them standalone.
"""
import math
import time

import numpy as np

from greedyrelay import rates as R
from greedyrelay import region as G
from greedyrelay import simulator as Sim
from greedyrelay.infotheory import conditional_mi
from greedyrelay.model import InputDistributions, Schedule, full_mask, members, permute
from conftest import ACCEPTANCE_LINES, bsc_pair, random_awgn, random_dists, random_dmc, unit_awgn
from oracles import h2, joint_entropy_cmi


def record(tag, ok, detail, elapsed=None, limit=None):
    timing = "" if elapsed is None else f" [{elapsed:.2f}s" + (f" < {limit}s]" if limit else "]")
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {tag}: {detail}{timing}")
    return ok


def test_c1_mi_exactness():
    t0 = time.perf_counter()
    u = InputDistributions.uniform((2, 2))
    bsc_err = max(abs(conditional_mi(bsc_pair(e), u, 0, 0b01) - (1 - h2(e))) for e in (0.0, 0.11, 0.5))
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(100):
        dmc = random_dmc(rng, (2, 2, 2))
        d = random_dists(rng, (2, 2, 2))
        for S in range(1, 7):
            for i0 in members(S):
                want = joint_entropy_cmi(dmc, d, i0, members(S))
                worst = max(worst, abs(conditional_mi(dmc, d, i0, S) - want))
    dt = time.perf_counter() - t0
    ok = bsc_err <= 1e-9 and worst <= 1e-10 and dt < 10
    record("C1 MI exactness", ok, f"BSC err {bsc_err:.1e} <= 1e-9, oracle err {worst:.1e} <= 1e-10", dt, 10)
    assert ok


def test_c2_theorem4_formula():
    t0 = time.perf_counter()
    rng = np.random.default_rng(202)
    worst = 0.0
    checked = 0
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        net = random_awgn(rng, n)
        subsets = range(1, full_mask(n)) if n <= 4 else rng.integers(1, full_mask(n), size=16)
        for S in subsets:
            S = int(S)
            for i0 in members(S):
                # one-line evaluation, written independently of the package
                want = math.log2(1 + sum(net.gain_sq[j][i0] * net.powers[j] for j in range(n) if not S >> j & 1) / net.noise_power)
                worst = max(worst, abs(R.cut_rate_awgn_fd(net, (S, i0)) - want))
                checked += 1
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and dt < 5
    record("C2 full-duplex AWGN formula", ok, f"{checked} cuts on 1000 networks, max err {worst:.1e} <= 1e-12", dt, 5)
    assert ok


def test_c3_half_duplex_hand_cases():
    net = unit_awgn(2)
    sym = G.max_symmetric_rate(net, Schedule((1, 1), transmitters=(0b01, 0b10)), tol=1e-8)
    # weights (1/4, 3/4): node 1 transmits a quarter of the time, listens the rest
    skew = Schedule((1, 3), transmitters=(0b01, 0b10))
    fav = R.cut_rate_awgn_hd(net, skew, (0b01, 0))
    ok = abs(sym - 0.5) <= 1e-6 and abs(fav - 0.75) <= 1e-6
    record("C3 half-duplex hand cases", ok, f"symmetric {sym:.9f} vs 0.5, favorable cut {fav:.9f} vs 0.75 (+-1e-6)")
    assert ok


def test_c4_theorem_specializations():
    rng = np.random.default_rng(404)
    mismatches = 0
    compared = 0
    for _ in range(100):
        sizes = tuple(int(s) for s in rng.integers(1, 4, size=3))
        dmc = random_dmc(rng, sizes, [int(m) for m in rng.integers(2, 4, size=3)])
        fams = tuple(random_dists(rng, sizes) for _ in range(int(rng.integers(2, 5))))
        L = int(rng.integers(1, 9))
        single = Schedule((L,), input_distributions=fams[:1])
        equal = Schedule((L,) * len(fams), input_distributions=fams)
        for S in range(1, 7):
            for i0 in members(S):
                mismatches += R.cut_rate_periodic_dmc(dmc, single, (S, i0)) != R.cut_rate_dmc(dmc, fams[0], (S, i0))
                mismatches += R.cut_rate_periodic_dmc(dmc, equal, (S, i0)) != R.cut_rate_periodic_dmc_equal(dmc, fams, (S, i0))
                compared += 2
    record("C4 periodic specializations", mismatches == 0, f"{compared} bitwise comparisons, {mismatches} mismatches")
    assert mismatches == 0


def _random_instance(rng, kind):
    if kind == "dmc":
        n = 3
        sizes = tuple(int(s) for s in rng.integers(2, 4, size=n))
        model = random_dmc(rng, sizes, [int(m) for m in rng.integers(2, 4, size=n)])
        K = int(rng.integers(1, 3))
        sched = Schedule(tuple(int(x) for x in rng.integers(1, 4, size=K)),
                         input_distributions=tuple(random_dists(rng, sizes) for _ in range(K)))
        return model, sched
    n = int(rng.integers(2, 7))
    model = random_awgn(rng, n)
    if kind == "awgn_fd":
        return model, None
    K = int(rng.integers(2, 4))
    tx = tuple(int(t) for t in rng.integers(1, full_mask(n), size=K))
    return model, Schedule(tuple(int(x) for x in rng.integers(1, 4, size=K)), transmitters=tx)


def test_c5_feasibility_structure():
    t0 = time.perf_counter()
    rng = np.random.default_rng(505)
    closure_fail = relabel_fail = feasible_seen = 0
    kinds = ("dmc", "awgn_fd", "awgn_hd")
    for k in range(1000):
        model, sched = _random_instance(rng, kinds[k % 3])
        n = model.n
        table = R.cut_table(model, sched)
        d = rng.dirichlet(np.ones(n))
        r = G.boundary_sample(d, table=table, tol=1e-4) * rng.uniform(0.3, 1.3)
        base = G.check_feasible(r, model, sched, table=table).feasible
        feasible_seen += base
        if base:
            for _ in range(5):
                lower = r * rng.uniform(0, 1, size=n)
                closure_fail += not G.check_feasible(lower, model, sched, table=table).feasible
        perm = rng.permutation(n)
        pm, ps, pr = permute(model, perm, sched, r)
        relabel_fail += G.check_feasible(pr, pm, ps).feasible != base
    dt = time.perf_counter() - t0
    ok = closure_fail == 0 and relabel_fail == 0 and dt < 30
    record("C5 downward closure / relabeling", ok,
           f"1000 instances ({feasible_seen} feasible): {closure_fail} closure, {relabel_fail} relabel counterexamples",
           dt, 30)
    assert ok


def test_c6_coverage_bound():
    t0 = time.perf_counter()
    violations = 0
    worst = {}
    # n = 2: exact
    two = [Sim.run(unit_awgn(2), [0.4, 0.4], Sim.DecodeOracle(m, seed=1), 4).completion_block
           for m in ("greedy", "adversarial_heuristic", "exhaustive_adversarial", "random")]
    exact_two = all(b == 1 for b in two)
    # n = 3, 4: every witness map, every admissible decode sequence
    for n in (3, 4):
        maps = 0
        for w in Sim.all_witness_maps(n):
            b, left = Sim.exhaustive_coverage(w, n)
            violations += left > 0 or b > Sim.coverage_bound(n)
            worst[n] = max(worst.get(n, 0), b)
            maps += 1
        worst[f"maps{n}"] = maps
    # n = 5..8: random and adversarial-heuristic runs
    rng = np.random.default_rng(606)
    runs = 0
    for n in range(5, 9):
        for k in range(2500):
            if k % 2:
                w = Sim.random_witness_map(n, rng)
            else:
                net = random_awgn(rng, n)
                w = Sim.witness_map(G.check_feasible(np.full(n, 0.3 * G.max_symmetric_rate(net, tol=1e-3)), net))
            for mode in ("random", "adversarial_heuristic"):
                try:
                    tr = Sim.simulate(w, n, Sim.DecodeOracle(mode, seed=k), Sim.coverage_bound(n),
                                      stop_when_covered=True, record_frontiers=False)
                    worst[n] = max(worst.get(n, 0), tr.completion_block)
                except Sim.CoverageBoundViolation:
                    violations += 1
                runs += 1
    dt = time.perf_counter() - t0
    ok = violations == 0 and exact_two and runs >= 10_000 and dt < 300
    record("C6 coverage bound 2^(n-2)", ok,
           f"n=2 completion {two}; exhaustive maps n=3: {worst['maps3']}, n=4: {worst['maps4']}; "
           f"{runs} runs n=5..8; worst completion {[worst[n] for n in range(3, 9)]}; {violations} violations",
           dt, 300)
    assert ok


def test_c7_delay_boundedness():
    rng = np.random.default_rng(707)
    failures = 0
    sups = []
    for k in range(100):
        n = int(rng.integers(2, 6))
        net = random_awgn(rng, n)
        d = rng.dirichlet(np.ones(n))
        r = G.boundary_sample(d, net, tol=1e-4) * rng.uniform(0.1, 0.95)
        mode = ("greedy", "adversarial_heuristic")[k % 2]
        tr = Sim.run(net, r, Sim.DecodeOracle(mode), 1000 + 128)
        s = Sim.measure_delays(tr, 1000)
        failures += not s.stabilized
        sups.append(s.sup_delay)
    record("C7 delay stabilization", failures == 0,
           f"100 configs n<=5, {failures} failures, sup delay range {min(sups)}..{max(sups)}")
    assert failures == 0


def test_c8_bisection_sandwich():
    rng = np.random.default_rng(808)
    tol = 1e-6
    bad = 0
    for _ in range(100):
        n = int(rng.integers(2, 9))
        net = random_awgn(rng, n)
        r = G.max_symmetric_rate(net, tol=tol)
        below = G.check_feasible(np.full(n, max(r - 2 * tol, 0.0)), net).feasible
        above = G.check_feasible(np.full(n, r + 2 * tol), net).feasible
        bad += (not below) or above
    record("C8 bisection sandwich", bad == 0, f"100 networks, tol 1e-6, {bad} failures")
    assert bad == 0


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_c"):
            try:
                fn()
            except AssertionError:
                pass
    print("\n".join(ACCEPTANCE_LINES))
