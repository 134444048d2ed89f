"""Does a bigger swarm waste energy, or save it?

Each vehicle in a swarm flies the whole mission, but a bigger swarm makes
far fewer wrong turns.  With a 70% per-decision success ratio on the 10x10
grid, the detour overhead at m=1 roughly triples the flown distance, so
the per-vehicle mission energy drops to about a third of the single-vehicle
cost by m=21 even though nothing about the vehicles changed.  The total
fleet energy (m times as many airframes in the air) is also reported for
the opposite perspective.
"""

from swarmnav import (
    ErrorModel,
    PowerModel,
    Scenario,
    generate_grid,
    run_experiment,
    shortest_flight_plan,
    trial_energy,
)

grid = generate_grid(10, 10, 100.0)
scenario = Scenario("grid10", grid, shortest_flight_plan(grid, 0, 99))
power = PowerModel(c0=200.0)  # constant 200 W cruise draw
speed = 5.0

table = run_experiment(
    scenario,
    ErrorModel(0.3, 0.3),
    m_values=[1, 3, 5, 7, 9, 13, 17, 21],
    trials=1500,
    master_seed=9_000,
    retry_cap=100,
    speed=speed,
    power=power,
)

plan_length = grid.path_length(scenario.plan.path)
print(f"plan length {plan_length:.0f} m; straight-through energy "
      f"{power.power(speed) * plan_length / speed:.0f} J per vehicle\n")

print(f"{'m':>3} {'fail':>6} {'mean dist (m)':>14} {'E/vehicle (J)':>14} {'E fleet (J)':>12}")
for row in table.rows:
    fleet = trial_energy(power, row.mean_distance_m, speed, row.m)
    print(f"{row.m:>3} {row.fail_rate:>6.3f} {row.mean_distance_m:>14.1f} "
          f"{row.mean_energy_j:>14.1f} {fleet:>12.0f}")

e1 = table.rows[0].mean_energy_j
e21 = table.rows[-1].mean_energy_j
print(f"\nper-vehicle mission energy ratio E(m=21)/E(m=1) = {e21 / e1:.3f}")
