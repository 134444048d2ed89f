"""From a map extract to a mission: the OSM import path.

Feeds a small OpenStreetMap XML document through the importer, inspects
the resulting landmark graph, derives a flight plan between the two
geometric extremes, and flies a few missions on it.  The XML is inlined
so the script is self-contained; any .osm extract with node/way elements
works the same way (see `swarmnav gen osm`).
"""

from swarmnav import (
    ErrorModel,
    RngSpec,
    Scenario,
    SwarmConfig,
    parse_osm_subset,
    run_trial,
    shortest_flight_plan,
)

# A toy campus: a footpath (way 501) meeting a service road (way 502) at
# node 4.  Node 7 appears in no way, so it is not a landmark.
OSM_DOCUMENT = """<?xml version="1.0" encoding="UTF-8"?>
<osm version="0.6">
  <node id="1" lat="45.3840" lon="-75.6980"/>
  <node id="2" lat="45.3845" lon="-75.6975"/>
  <node id="3" lat="45.3850" lon="-75.6968"/>
  <node id="4" lat="45.3853" lon="-75.6960"/>
  <node id="5" lat="45.3859" lon="-75.6953"/>
  <node id="6" lat="45.3864" lon="-75.6947"/>
  <node id="7" lat="45.3870" lon="-75.7000"/>
  <way id="501">
    <nd ref="1"/><nd ref="2"/><nd ref="3"/><nd ref="4"/>
    <tag k="highway" v="footway"/>
  </way>
  <way id="502">
    <nd ref="4"/><nd ref="5"/><nd ref="6"/>
    <tag k="highway" v="service"/>
  </way>
</osm>
"""

graph = parse_osm_subset(OSM_DOCUMENT)
print(f"imported graph: {graph.vertex_count} landmarks, {graph.edge_count} edges")
for a, b, length in graph.edges():
    print(f"  edge {a}-{b}: {length:.1f} m")

# Pick the south-west-most and north-east-most landmarks as mission ends.
lms = graph.landmarks()
source = min(lms, key=lambda lm: lm.x + lm.y).id
target = max(lms, key=lambda lm: lm.x + lm.y).id
plan = shortest_flight_plan(graph, source, target)
scenario = Scenario("toy-campus", graph, plan)
print(f"\nflight plan {source} -> {target}: {plan.path}, k={plan.k}, "
      f"length {graph.path_length(plan.path):.1f} m")

# Fly it a few times with a mediocre sensor and a 3-vehicle swarm.
errors = ErrorModel(p=0.25, q=0.15)
for m in (1, 3, 5):
    swarm = SwarmConfig(m=m, retry_cap=10)
    outcomes = [
        run_trial(scenario, errors, swarm, RngSpec(7, t)) for t in range(500)
    ]
    rate = sum(o.success for o in outcomes) / len(outcomes)
    mean_detours = sum(o.wasted_detours for o in outcomes) / len(outcomes)
    print(f"m={m}: success {rate:.3f}, mean detours {mean_detours:.2f}")
