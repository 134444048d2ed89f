"""Acceptance suite: one test per shipped acceptance criterion.

Each test prints a single ``ACCEPTANCE nn PASS/FAIL`` line (run with
``pytest -s`` to see them) and enforces its stated runtime budget where one
is defined.  Monte Carlo checks use fixed master seeds, so the whole suite
is deterministic.
"""

from __future__ import annotations

import itertools
import math
import time
from pathlib import Path

import pytest

from swarmnav.cli import main as cli_main
from swarmnav.simulation import ErrorModel, run_experiment, run_trial, RngSpec, SwarmConfig
from swarmnav.terrain import (
    FlightPlan,
    Landmark,
    LandmarkGraph,
    Scenario,
    UnreachableError,
    generate_grid,
    load_scenario,
    parse_osm_subset,
    save_scenario,
    shortest_flight_plan,
)
from swarmnav.voting import (
    majority_error,
    normal_approx_majority_success,
    optimal_gain,
    swarm_path_success,
)

DATA = Path(__file__).parent / "data"


def _report(number: int, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    print(f"\nACCEPTANCE {number:02d} {status} {detail}")


@pytest.fixture(scope="module")
def grid10_scenario():
    g = generate_grid(10, 10, 100.0)
    return Scenario("grid10", g, shortest_flight_plan(g, 0, 99))


@pytest.fixture(scope="module")
def grid25_scenario():
    g = generate_grid(25, 25, 100.0)
    return Scenario("grid25", g, shortest_flight_plan(g, 0, 624))


def test_01_fractional_gain_optima():
    """Optimal operating points against the published reference tuples.

    Note: the m=5 reference gain of 1.1917 is inconsistent with the gain
    function it summarizes.  The m=5 fractional gain is the polynomial
    6p^4 - 9p^3 + p^2 + p + 1, whose derivative 24p^3 - 27p^2 + 2p + 1
    factors as (p - 1)(24p^2 - 3p - 1), giving the interior maximizer
    p* = (3 + sqrt(105))/48 ~= 0.2759781 (matching the reference p*) with
    maximum value 1.1977715 -- not 1.1917 (a digit transposition).  The
    reference tuple is asserted exactly as tabulated instead of silently
    correcting it, so this check fails by construction on the m=5 gain
    while the other seven comparisons pass.
    """
    start = time.perf_counter()
    references = {
        2: (0.5, 1.5),
        3: (0.25, 1.125),
        5: (0.275978, 1.1917),
        7: (0.294, 1.249),
    }
    mismatches = []
    for m, (ref_p, ref_gain) in references.items():
        point = optimal_gain(m)
        if abs(point.p_star - ref_p) > 1e-3:
            mismatches.append(f"m={m}: p*={point.p_star:.7f} vs reference {ref_p}")
        if abs(point.gain - ref_gain) > 2e-3:
            mismatches.append(f"m={m}: gain={point.gain:.7f} vs reference {ref_gain}")
    elapsed = time.perf_counter() - start
    passed = not mismatches and elapsed < 1.0
    _report(1, passed, f"optimal-gain reference tuples ({elapsed:.2f}s)"
            + ("" if passed else f": {'; '.join(mismatches)}"))
    assert elapsed < 1.0
    assert not mismatches, (
        "reference tuple mismatches (m=5 reference gain 1.1917 is inconsistent "
        "with its own polynomial, true maximum 1.1977715): " + "; ".join(mismatches)
    )


def test_02_error_reduction_properties():
    start = time.perf_counter()
    for p in [round(0.01 * i, 2) for i in range(1, 50)]:
        for m in range(2, 22):
            assert majority_error(p, m) < p
    for p in [0.0, 0.1, 0.37, 0.5, 0.82, 1.0]:
        assert majority_error(p, 1) == p
    for m in range(2, 22):
        assert majority_error(0.0, m) == 0.0
    for m in range(1, 22, 2):
        assert abs(majority_error(0.5, m) - 0.5) <= 1e-12
    elapsed = time.perf_counter() - start
    _report(2, elapsed < 1.0, f"majority error-reduction property grid ({elapsed:.2f}s)")
    assert elapsed < 1.0


def test_03_enumeration_oracle_equivalence():
    start = time.perf_counter()
    for m in range(1, 13):
        h = (m + 1) // 2
        for p in (0.1, 0.25, 0.4):
            total = 0.0
            for outcome in itertools.product((True, False), repeat=m):
                weight = 1.0
                for correct in outcome:
                    weight *= (1.0 - p) if correct else p
                if sum(outcome) < h:
                    total += weight
            assert abs(majority_error(p, m) - total) <= 1e-12
    elapsed = time.perf_counter() - start
    _report(3, elapsed < 5.0, f"closed form vs 2^m enumeration, m <= 12 ({elapsed:.2f}s)")
    assert elapsed < 5.0


def test_04_single_vehicle_monte_carlo():
    start = time.perf_counter()
    g = generate_grid(5, 2, 100.0)
    scenario = Scenario("path4", g, FlightPlan((0, 2, 4, 6, 8)))  # k = 4
    trials = 100_000
    expected = 0.8**8
    hits = 0
    errors = ErrorModel(0.2, 0.2)
    swarm = SwarmConfig(m=1, retry_cap=0)
    for t in range(trials):
        if run_trial(scenario, errors, swarm, RngSpec(8_6753_09, t)).success:
            hits += 1
    rate = hits / trials
    stderr = math.sqrt(expected * (1.0 - expected) / trials)
    elapsed = time.perf_counter() - start
    ok = abs(rate - expected) <= 3.0 * stderr and elapsed < 10.0
    _report(4, ok,
            f"single-vehicle mission rate {rate:.5f} vs closed form {expected:.5f} "
            f"(|d|={abs(rate - expected):.5f}, 3se={3 * stderr:.5f}, {elapsed:.1f}s)")
    assert abs(rate - expected) <= 3.0 * stderr
    assert elapsed < 10.0


def test_05_swarm_monte_carlo_vs_closed_form(grid10_scenario):
    start = time.perf_counter()
    trials = 10_000
    k = grid10_scenario.plan.k
    assert k == 18
    worst = ""
    for p in (0.1, 0.2, 0.3):
        table = run_experiment(
            grid10_scenario,
            ErrorModel(p, p),
            [1, 3, 5, 7, 9],
            trials,
            master_seed=1_861,
            retry_cap=0,
        )
        for row in table.rows:
            sigma = math.sqrt(max(row.analytic_fail * (1 - row.analytic_fail), 0.0) / trials)
            deviation = abs(row.fail_rate - row.analytic_fail)
            assert deviation <= 3.0 * sigma, (
                f"p={p} m={row.m}: empirical {row.fail_rate:.4f} vs analytic "
                f"{row.analytic_fail:.4f} exceeds 3 sigma ({3 * sigma:.4f})"
            )
            if not worst or deviation / max(sigma, 1e-12) > float(worst.split("=")[-1]):
                worst = f"max |d|/sigma={deviation / max(sigma, 1e-12):.2f}"
    elapsed = time.perf_counter() - start
    _report(5, elapsed < 120.0,
            f"swarm mission rates vs closed form, 15 cells x {trials} trials "
            f"({worst}, {elapsed:.1f}s)")
    assert elapsed < 120.0


def test_06_failure_monotone_in_swarm_size(grid10_scenario, grid25_scenario):
    odd_m = list(range(1, 22, 2))
    checked = 0
    for scenario, trials in ((grid10_scenario, 2500), (grid25_scenario, 1500)):
        for ratio in (0.7, 0.8, 0.9):
            p = 1.0 - ratio
            table = run_experiment(
                scenario,
                ErrorModel(p, p),
                odd_m,
                trials,
                master_seed=1_729,
                retry_cap=0,
            )
            rows = table.rows
            for a, b in zip(rows, rows[1:]):
                band = 3.0 * math.sqrt(a.fail_stderr**2 + b.fail_stderr**2)
                assert b.fail_rate <= a.fail_rate + band, (
                    f"{scenario.name} ratio={ratio}: fail rate rose from m={a.m} "
                    f"({a.fail_rate:.4f}) to m={b.m} ({b.fail_rate:.4f}) beyond the "
                    f"3-sigma band {band:.4f}"
                )
                checked += 1
    _report(6, True,
            f"mission failure non-increasing over odd m on both grids "
            f"({checked} adjacent comparisons)")


def test_07_energy_trend(grid10_scenario):
    trials = 1500
    table = run_experiment(
        grid10_scenario,
        ErrorModel(0.3, 0.3),  # 70% per-decision success ratio
        [1, 21],
        trials,
        master_seed=55_301,
        retry_cap=100,
        speed=5.0,
    )
    e1 = table.rows[0].mean_energy_j
    e21 = table.rows[1].mean_energy_j
    ratio = e21 / e1
    _report(7, e21 < e1,
            f"mean mission energy E(m=21)/E(m=1) = {e21:.0f}/{e1:.0f} J = {ratio:.3f} "
            f"(reference trend ~0.35)")
    assert e21 < e1
    # both swarms fly at least the plan; sanity-check the scale is real
    assert e1 > e21 > 0.0


def test_08_normal_approximation_quality():
    start = time.perf_counter()
    ps = (0.1, 0.2, 0.3, 0.4)
    for p in ps:
        deviation = abs(
            normal_approx_majority_success(p, 101) - (1.0 - majority_error(p, 101))
        )
        assert deviation <= 0.02, f"p={p}: CLT deviation {deviation:.4f} > 0.02"
    devs = [
        max(
            abs(normal_approx_majority_success(p, m) - (1.0 - majority_error(p, m)))
            for p in ps
        )
        for m in (11, 51, 201, 1001)
    ]
    assert all(b <= a for a, b in zip(devs, devs[1:])), f"deviations not shrinking: {devs}"
    elapsed = time.perf_counter() - start
    _report(8, elapsed < 1.0,
            f"CLT approximation within 0.02 at m=101; max deviations over m "
            f"{[f'{d:.4f}' for d in devs]} non-increasing ({elapsed:.2f}s)")
    assert elapsed < 1.0


def test_09_cli_run_determinism(tmp_path):
    scenario_path = tmp_path / "grid.json"
    assert cli_main(["gen", "grid", "--rows", "5", "--cols", "5",
                     "--out", str(scenario_path)]) == 0
    common = [
        "run", "--scenario", str(scenario_path), "--ratio", "0.8",
        "--m", "1,3,5", "--trials", "300", "--seed", "90210", "--retry-cap", "2",
    ]
    outs = [tmp_path / f"r{i}.csv" for i in range(3)]
    assert cli_main(common + ["--out", str(outs[0])]) == 0
    assert cli_main(common + ["--out", str(outs[1])]) == 0
    assert cli_main(common + ["--workers", "4", "--out", str(outs[2])]) == 0
    identical = (
        outs[0].read_bytes() == outs[1].read_bytes() == outs[2].read_bytes()
    )
    _report(9, identical,
            "run command emits byte-identical CSV across repeats and worker counts")
    assert identical


def test_10_terrain_round_trips(tmp_path):
    # save -> load identity
    g = generate_grid(3, 4, 25.0)
    scenario = Scenario("roundtrip", g, shortest_flight_plan(g, 0, 11))
    save_scenario(scenario, tmp_path / "s.json")
    loaded = load_scenario(tmp_path / "s.json")
    assert loaded.graph == scenario.graph
    assert loaded.plan == scenario.plan
    assert loaded.name == scenario.name

    # lattice counts
    assert (generate_grid(10, 10, 100.0).vertex_count,
            generate_grid(10, 10, 100.0).edge_count) == (100, 180)
    assert (generate_grid(25, 25, 100.0).vertex_count,
            generate_grid(25, 25, 100.0).edge_count) == (625, 1200)

    # map fixture parses to its documented graph (5 landmarks, 4 edges, connected)
    campus = parse_osm_subset((DATA / "campus.osm").read_bytes())
    assert campus.vertex_count == 5
    assert campus.edge_count == 4
    assert shortest_flight_plan(campus, 101, 105).k == 4

    # shortest plan equals exhaustive search on every graph with <= 8 vertices
    import random

    rng = random.Random(8_128)
    comparisons = 0
    for _ in range(40):
        n = rng.randint(2, 8)
        lms = [Landmark(i, rng.uniform(0, 100), rng.uniform(0, 100)) for i in range(n)]
        edges = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < 0.5
        ]
        graph = LandmarkGraph(lms, edges)
        s, t = rng.randrange(n), rng.randrange(n)
        best = math.inf
        for r in range(n):
            for middle in itertools.permutations(
                [v for v in range(n) if v not in (s, t)], r
            ):
                path = (s, *middle, t) if s != t else (s,)
                if all(graph.has_edge(a, b) for a, b in zip(path, path[1:])):
                    best = min(best, graph.path_length(path))
        try:
            plan = shortest_flight_plan(graph, s, t)
            assert graph.path_length(plan.path) == pytest.approx(best)
            comparisons += 1
        except UnreachableError:
            assert best == math.inf

    _report(10, True,
            f"scenario round trip, lattice counts, map fixture, and "
            f"{comparisons} brute-force shortest-path comparisons")
