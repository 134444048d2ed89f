"""Landmark graphs, grid/map scenario construction, and flight plans.

Graphs are immutable after construction and validated on the way in, so a
graph object in hand is always structurally sound: unique vertex ids,
finite coordinates, no self-loops or duplicate edges, and edge lengths
never shorter than the straight-line distance (beyond a 0.1% rounding
allowance for map-derived data).
"""

from __future__ import annotations

import heapq
import json
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "TerrainError",
    "GraphValidationError",
    "PlanValidationError",
    "ScenarioFormatError",
    "OsmParseError",
    "UnreachableError",
    "Landmark",
    "LandmarkGraph",
    "FlightPlan",
    "Scenario",
    "generate_grid",
    "complete_graph",
    "parse_osm_subset",
    "shortest_flight_plan",
    "save_scenario",
    "load_scenario",
]

#: WGS84 equatorial radius in meters (the usual OSM/Web-Mercator sphere),
#: used for map projection and arc lengths.
_EARTH_RADIUS_M = 6378137.0

#: Edge lengths may undercut the straight-line distance by at most this factor.
_LENGTH_SLACK = 0.999


class TerrainError(Exception):
    """Base error for graph, plan, and scenario handling."""


class GraphValidationError(TerrainError):
    """A landmark graph violates a structural invariant."""


class PlanValidationError(TerrainError):
    """A flight plan is not a simple edge-connected path of its graph."""


class ScenarioFormatError(TerrainError):
    """A scenario document violates the JSON schema; names the field path."""


class OsmParseError(TerrainError):
    """Map XML is malformed or internally inconsistent."""


class UnreachableError(TerrainError):
    """No route exists between the requested endpoints."""


@dataclass(frozen=True)
class Landmark:
    """A recognizable terrain feature: id plus planar position in meters."""

    id: int
    x: float
    y: float
    label: str | None = None


@dataclass(frozen=True)
class FlightPlan:
    """Ordered landmark ids from source to terminal; k = number of segments."""

    path: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.path) == 0:
            raise PlanValidationError("flight plan must contain at least one vertex")
        if len(set(self.path)) != len(self.path):
            raise PlanValidationError("flight plan revisits a vertex (must be simple)")
        object.__setattr__(self, "path", tuple(int(v) for v in self.path))

    @property
    def source(self) -> int:
        return self.path[0]

    @property
    def terminal(self) -> int:
        return self.path[-1]

    @property
    def k(self) -> int:
        return len(self.path) - 1

    def segments(self) -> Iterator[tuple[int, int]]:
        return zip(self.path, self.path[1:])


class LandmarkGraph:
    """Undirected weighted graph of landmarks; immutable once built.

    ``edges`` are ``(a, b)`` or ``(a, b, length)`` tuples; a missing or
    ``None`` length defaults to the Euclidean distance between endpoints.
    """

    def __init__(
        self,
        landmarks: Iterable[Landmark],
        edges: Iterable[tuple] = (),
    ) -> None:
        vertices: dict[int, Landmark] = {}
        for lm in landmarks:
            if lm.id in vertices:
                raise GraphValidationError(f"duplicate landmark id {lm.id}")
            if not (math.isfinite(lm.x) and math.isfinite(lm.y)):
                raise GraphValidationError(
                    f"landmark {lm.id} has non-finite coordinates ({lm.x}, {lm.y})"
                )
            vertices[lm.id] = lm

        lengths: dict[tuple[int, int], float] = {}
        for edge in edges:
            if len(edge) == 2:
                a, b = edge
                length = None
            else:
                a, b, length = edge
            a, b = int(a), int(b)
            if a == b:
                raise GraphValidationError(f"self-loop on vertex {a}")
            for v in (a, b):
                if v not in vertices:
                    raise GraphValidationError(f"edge ({a}, {b}) references missing vertex {v}")
            key = (a, b) if a < b else (b, a)
            if key in lengths:
                raise GraphValidationError(f"duplicate edge ({key[0]}, {key[1]})")
            euclid = math.dist(
                (vertices[a].x, vertices[a].y), (vertices[b].x, vertices[b].y)
            )
            if length is None:
                length = euclid
            length = float(length)
            if not math.isfinite(length) or length <= 0.0:
                raise GraphValidationError(
                    f"edge ({a}, {b}) has non-positive length {length}"
                )
            if length < euclid * _LENGTH_SLACK:
                raise GraphValidationError(
                    f"edge ({a}, {b}) length {length:.6g} undercuts the straight-line "
                    f"distance {euclid:.6g}"
                )
            lengths[key] = length

        self._vertices: dict[int, Landmark] = dict(sorted(vertices.items()))
        self._lengths: dict[tuple[int, int], float] = dict(sorted(lengths.items()))
        adjacency: dict[int, list[int]] = {v: [] for v in self._vertices}
        for a, b in self._lengths:
            adjacency[a].append(b)
            adjacency[b].append(a)
        self._adjacency: dict[int, tuple[int, ...]] = {
            v: tuple(sorted(ns)) for v, ns in adjacency.items()
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LandmarkGraph):
            return NotImplemented
        return self._vertices == other._vertices and self._lengths == other._lengths

    def __repr__(self) -> str:
        return f"LandmarkGraph({self.vertex_count} vertices, {self.edge_count} edges)"

    @property
    def vertex_count(self) -> int:
        return len(self._vertices)

    @property
    def edge_count(self) -> int:
        return len(self._lengths)

    def vertex_ids(self) -> tuple[int, ...]:
        return tuple(self._vertices)

    def landmarks(self) -> tuple[Landmark, ...]:
        return tuple(self._vertices.values())

    def landmark(self, vertex_id: int) -> Landmark:
        try:
            return self._vertices[vertex_id]
        except KeyError:
            raise GraphValidationError(f"unknown vertex id {vertex_id}") from None

    def __contains__(self, vertex_id: int) -> bool:
        return vertex_id in self._vertices

    def neighbors(self, vertex_id: int) -> tuple[int, ...]:
        if vertex_id not in self._adjacency:
            raise GraphValidationError(f"unknown vertex id {vertex_id}")
        return self._adjacency[vertex_id]

    def has_edge(self, a: int, b: int) -> bool:
        return ((a, b) if a < b else (b, a)) in self._lengths

    def edge_length(self, a: int, b: int) -> float:
        key = (a, b) if a < b else (b, a)
        try:
            return self._lengths[key]
        except KeyError:
            raise GraphValidationError(f"no edge between {a} and {b}") from None

    def edges(self) -> Iterator[tuple[int, int, float]]:
        for (a, b), length in self._lengths.items():
            yield a, b, length

    def path_length(self, path: Sequence[int]) -> float:
        return math.fsum(self.edge_length(a, b) for a, b in zip(path, path[1:]))


def validate_plan(graph: LandmarkGraph, plan: FlightPlan) -> None:
    """Check a plan is a simple path along existing edges of the graph."""
    for v in plan.path:
        if v not in graph:
            raise PlanValidationError(f"plan references missing vertex {v}")
    for a, b in plan.segments():
        if not graph.has_edge(a, b):
            raise PlanValidationError(f"plan hops between non-adjacent vertices ({a}, {b})")


@dataclass(frozen=True)
class Scenario:
    """A named landmark graph together with the mission flight plan."""

    name: str
    graph: LandmarkGraph
    plan: FlightPlan

    def __post_init__(self) -> None:
        validate_plan(self.graph, self.plan)


def generate_grid(rows: int, cols: int, spacing: float) -> LandmarkGraph:
    """Rectangular lattice with 4-neighbor connectivity.

    Vertex ids are row-major; positions are ``(col * spacing, row * spacing)``
    with x pointing east and y north.  Produces ``rows * cols`` vertices and
    ``2 * rows * cols - rows - cols`` edges, all of length ``spacing``.
    """
    if rows < 2 or cols < 2:
        raise ValueError(f"grid needs rows, cols >= 2, got {rows}x{cols}")
    if not (spacing > 0.0) or not math.isfinite(spacing):
        raise ValueError(f"spacing must be positive, got {spacing}")
    landmarks = [
        Landmark(id=r * cols + c, x=c * spacing, y=r * spacing)
        for r in range(rows)
        for c in range(cols)
    ]
    edges: list[tuple[int, int, float]] = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1, spacing))
            if r + 1 < rows:
                edges.append((v, v + cols, spacing))
    return LandmarkGraph(landmarks, edges)


def complete_graph(landmarks: Iterable[Landmark]) -> LandmarkGraph:
    """Dense variant: every pair of landmarks joined at Euclidean length."""
    lms = list(landmarks)
    edges = [
        (lms[i].id, lms[j].id)
        for i in range(len(lms))
        for j in range(i + 1, len(lms))
    ]
    return LandmarkGraph(lms, edges)


def _haversine_m(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    phi1, phi2 = math.radians(lat1), math.radians(lat2)
    dphi = phi2 - phi1
    dlam = math.radians(lon2 - lon1)
    s = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * _EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(s)))


def parse_osm_subset(document: bytes | str) -> LandmarkGraph:
    """Build a landmark graph from an OpenStreetMap XML extract.

    Only ``node`` (id, lat, lon) and ``way``/``nd`` elements are read; all
    other elements and tags are ignored.  Nodes referenced by at least one
    way become landmarks; consecutive ``nd`` pairs become edges with
    great-circle lengths, duplicates merged keeping the shorter.  Latitude
    and longitude are projected to local planar meters (equirectangular
    about the bounding-box centroid), adequate below a few kilometers.
    """
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        line, col = exc.position
        raise OsmParseError(f"malformed XML at line {line}, column {col}: {exc.msg}") from exc

    node_coords: dict[int, tuple[float, float]] = {}
    for node in root.iter("node"):
        try:
            node_id = int(node.attrib["id"])
            lat = float(node.attrib["lat"])
            lon = float(node.attrib["lon"])
        except (KeyError, ValueError) as exc:
            raise OsmParseError(f"node element missing or bad id/lat/lon: {exc}") from exc
        node_coords[node_id] = (lat, lon)

    way_edges: dict[tuple[int, int], float] = {}
    referenced: set[int] = set()
    for way in root.iter("way"):
        refs: list[int] = []
        for nd in way.iter("nd"):
            try:
                ref = int(nd.attrib["ref"])
            except (KeyError, ValueError) as exc:
                raise OsmParseError(f"nd element missing or bad ref: {exc}") from exc
            if ref not in node_coords:
                raise OsmParseError(f"way references missing node {ref}")
            refs.append(ref)
        for a, b in zip(refs, refs[1:]):
            if a == b:
                continue
            key = (a, b) if a < b else (b, a)
            length = _haversine_m(*node_coords[a], *node_coords[b])
            if key not in way_edges or length < way_edges[key]:
                way_edges[key] = length
            referenced.add(a)
            referenced.add(b)

    if not referenced:
        return LandmarkGraph([], [])

    lats = [node_coords[n][0] for n in referenced]
    lons = [node_coords[n][1] for n in referenced]
    lat0 = (min(lats) + max(lats)) / 2.0
    lon0 = (min(lons) + max(lons)) / 2.0
    cos_lat0 = math.cos(math.radians(lat0))

    landmarks = []
    for node_id in sorted(referenced):
        lat, lon = node_coords[node_id]
        x = _EARTH_RADIUS_M * math.radians(lon - lon0) * cos_lat0
        y = _EARTH_RADIUS_M * math.radians(lat - lat0)
        landmarks.append(Landmark(id=node_id, x=x, y=y))

    edges = [(a, b, length) for (a, b), length in sorted(way_edges.items())]
    return LandmarkGraph(landmarks, edges)


def shortest_flight_plan(graph: LandmarkGraph, s: int, t: int) -> FlightPlan:
    """Minimum-length simple path from ``s`` to ``t``.

    Ties are broken deterministically: at each step the walk takes the
    smallest-id neighbor that still lies on a shortest route to ``t``.
    """
    for v in (s, t):
        if v not in graph:
            raise GraphValidationError(f"unknown vertex id {v}")
    if s == t:
        return FlightPlan((s,))

    # Dijkstra from the terminal: dist[v] = remaining distance to t.
    dist: dict[int, float] = {t: 0.0}
    heap: list[tuple[float, int]] = [(0.0, t)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist.get(v, math.inf):
            continue
        for w in graph.neighbors(v):
            nd = d + graph.edge_length(v, w)
            if nd < dist.get(w, math.inf) - 1e-12:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))

    if s not in dist:
        raise UnreachableError(f"vertex {t} is not reachable from {s}")

    path = [s]
    current = s
    while current != t:
        remaining = dist[current]
        candidates = [
            w
            for w in graph.neighbors(current)
            if w in dist
            and abs(graph.edge_length(current, w) + dist[w] - remaining) <= 1e-9 * max(1.0, remaining)
        ]
        current = min(candidates)
        path.append(current)
    return FlightPlan(tuple(path))


# --- Scenario JSON (schema: name, vertices[{id,x,y,label?}], edges[{a,b,length?}], plan[]) ---


def _scenario_to_dict(scenario: Scenario) -> dict:
    vertices = []
    for lm in scenario.graph.landmarks():
        entry: dict = {"id": lm.id, "x": lm.x, "y": lm.y}
        if lm.label is not None:
            entry["label"] = lm.label
        vertices.append(entry)
    edges = [
        {"a": a, "b": b, "length": length} for a, b, length in scenario.graph.edges()
    ]
    return {
        "name": scenario.name,
        "vertices": vertices,
        "edges": edges,
        "plan": list(scenario.plan.path),
    }


def _require(mapping: Mapping, key: str, kind: type | tuple, where: str):
    if key not in mapping:
        raise ScenarioFormatError(f"missing field {where}.{key}")
    value = mapping[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioFormatError(f"field {where}.{key} must be a number")
        return float(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is int:
        raise ScenarioFormatError(f"field {where}.{key} has wrong type")
    return value


def _scenario_from_dict(data) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioFormatError("top level must be a JSON object")
    name = _require(data, "name", str, "$")
    raw_vertices = _require(data, "vertices", list, "$")
    raw_edges = _require(data, "edges", list, "$")
    raw_plan = _require(data, "plan", list, "$")

    landmarks = []
    for i, entry in enumerate(raw_vertices):
        if not isinstance(entry, dict):
            raise ScenarioFormatError(f"vertices[{i}] must be an object")
        where = f"vertices[{i}]"
        vid = _require(entry, "id", int, where)
        x = _require(entry, "x", float, where)
        y = _require(entry, "y", float, where)
        label = entry.get("label")
        if label is not None and not isinstance(label, str):
            raise ScenarioFormatError(f"field {where}.label must be a string")
        landmarks.append(Landmark(id=vid, x=x, y=y, label=label))

    edges = []
    for i, entry in enumerate(raw_edges):
        if not isinstance(entry, dict):
            raise ScenarioFormatError(f"edges[{i}] must be an object")
        where = f"edges[{i}]"
        a = _require(entry, "a", int, where)
        b = _require(entry, "b", int, where)
        length = _require(entry, "length", float, where) if "length" in entry else None
        edges.append((a, b, length))

    for i, v in enumerate(raw_plan):
        if isinstance(v, bool) or not isinstance(v, int):
            raise ScenarioFormatError(f"plan[{i}] must be an integer vertex id")

    try:
        graph = LandmarkGraph(landmarks, edges)
        plan = FlightPlan(tuple(raw_plan))
        return Scenario(name=name, graph=graph, plan=plan)
    except (GraphValidationError, PlanValidationError) as exc:
        raise ScenarioFormatError(str(exc)) from exc


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    """Write a scenario as JSON; floats keep full round-trip precision."""
    Path(path).write_text(
        json.dumps(_scenario_to_dict(scenario), indent=2) + "\n", encoding="utf-8"
    )


def scenario_to_json(scenario: Scenario) -> str:
    return json.dumps(_scenario_to_dict(scenario), indent=2) + "\n"


def load_scenario(path: str | Path) -> Scenario:
    """Read and validate a scenario JSON file.

    Raises OSError for unreadable files and ScenarioFormatError for
    documents that are not valid JSON or violate the schema/invariants.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"invalid JSON in {path}: {exc}") from exc
    return _scenario_from_dict(data)
