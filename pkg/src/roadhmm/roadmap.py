"""Position graph and transition-matrix construction.

Positions are integer node ids 1..M. Directed edges carry unnormalized
nonnegative weights; a self loop (src == dst) models stopping/parking at
that position. ``build_transition_matrix`` normalizes each node's outgoing
weights into a column-stochastic matrix A with

    A[i - 1, j - 1] = P(next = i | current = j)

so ``A @ belief`` is one prediction step. The map is directional:
the weight of (j -> i) is independent of the weight of (i -> j).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

#: Node ids forming the one-way main-road loop of the generated default map.
MAIN_ROAD_NODES = frozenset(range(1, 10))

#: Number of positions in the generated default map.
DEFAULT_NUM_NODES = 105

#: Seed of the shipped default map. Fixed so every experiment and CLI run
#: sees the same map; on this map node 1's turn leads to node 70.
DEFAULT_MAP_SEED = 44

# Weight ranges for the procedural generator. Main-road nodes get a dominant
# straight-ahead weight, smaller turn weights and the smallest self loop;
# side nodes drive in each direction with roughly equal weight and park with
# a smaller one. Ranges are disjoint so the ordering holds for every draw.
_STRAIGHT_WEIGHT = (4.0, 6.0)
_TURN_WEIGHT = (1.0, 2.0)
_MAIN_SELF_WEIGHT = (0.3, 0.7)
_SIDE_WEIGHT = (0.9, 1.1)
_SIDE_SELF_WEIGHT = (0.25, 0.5)
_TURNS_PER_MAIN_NODE = 2


class MapError(ValueError):
    """Malformed map file or invalid graph structure."""


class Edge(NamedTuple):
    src: int
    dst: int
    weight: float


@dataclass(frozen=True)
class RoadGraph:
    """Directed weighted graph over positions 1..num_nodes.

    Weights are unnormalized ratios, not probabilities; the transition
    builder normalizes per node. Instances are immutable and validated on
    construction: endpoints in range, nonnegative weights, no duplicate
    (src, dst) pairs, and every node has at least one outgoing edge with
    positive weight (otherwise it would have no transition distribution).
    """

    num_nodes: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if not _is_int(self.num_nodes) or self.num_nodes < 1:
            raise MapError("num_nodes must be a positive integer")
        object.__setattr__(self, "num_nodes", int(self.num_nodes))

        normalized = []
        seen: set[tuple[int, int]] = set()
        has_out = [False] * (self.num_nodes + 1)
        for edge in self.edges:
            src, dst, weight = edge
            for node in (src, dst):
                if not _is_int(node):
                    raise MapError(f"node id {node!r} is not an integer")
                if not 1 <= node <= self.num_nodes:
                    raise MapError(
                        f"node {int(node)} out of range 1..{self.num_nodes} "
                        f"on edge ({src}, {dst})"
                    )
            if not isinstance(weight, (int, float, np.floating)) or isinstance(weight, bool):
                raise MapError(f"weight {weight!r} on edge ({src}, {dst}) is not a number")
            weight = float(weight)
            if not np.isfinite(weight) or weight < 0:
                raise MapError(f"negative weight {weight} on edge ({src}, {dst})")
            key = (int(src), int(dst))
            if key in seen:
                raise MapError(f"duplicate edge ({key[0]}, {key[1]})")
            seen.add(key)
            if weight > 0:
                has_out[key[0]] = True
            normalized.append(Edge(key[0], key[1], weight))
        for node in range(1, self.num_nodes + 1):
            if not has_out[node]:
                raise MapError(f"node {node} has no outgoing edge with positive weight")
        object.__setattr__(self, "edges", tuple(normalized))

    def edge_map(self) -> dict[tuple[int, int], float]:
        return {(e.src, e.dst): e.weight for e in self.edges}

    def adjacency_matrix(self) -> np.ndarray:
        """Boolean adjacency, symmetric over edge direction, self loops excluded."""
        adj = np.zeros((self.num_nodes, self.num_nodes), dtype=bool)
        for src, dst, _ in self.edges:
            if src != dst:
                adj[dst - 1, src - 1] = True
                adj[src - 1, dst - 1] = True
        return adj


def _is_int(value) -> bool:
    return isinstance(value, (int, np.integer)) and not isinstance(value, bool)


def load_map(text: str) -> RoadGraph:
    """Parse a map file: {"num_nodes": M, "edges": [{"from", "to", "weight"}, ...]}."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapError(f"invalid map JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MapError("map file must be a JSON object")
    if "num_nodes" not in data or "edges" not in data:
        raise MapError("map file must define 'num_nodes' and 'edges'")
    raw_edges = data["edges"]
    if not isinstance(raw_edges, list):
        raise MapError("'edges' must be a list")
    edges = []
    for pos, item in enumerate(raw_edges):
        if not isinstance(item, dict) or not {"from", "to", "weight"} <= set(item):
            raise MapError(f"edge #{pos} must be an object with 'from', 'to' and 'weight'")
        edges.append(Edge(item["from"], item["to"], item["weight"]))
    return RoadGraph(num_nodes=data["num_nodes"], edges=tuple(edges))


def save_map(graph: RoadGraph) -> str:
    """Serialize a RoadGraph to the JSON map format; inverse of load_map."""
    doc = {
        "num_nodes": graph.num_nodes,
        "edges": [{"from": e.src, "to": e.dst, "weight": e.weight} for e in graph.edges],
    }
    return json.dumps(doc, indent=2) + "\n"


def build_transition_matrix(graph: RoadGraph) -> np.ndarray:
    """Column-stochastic transition matrix from outgoing edge weights.

    Entry [i-1, j-1] = weight(j -> i) / total outgoing weight of j, so each
    column sums to 1 and is zero exactly where no (j -> i) edge exists.
    """
    m = graph.num_nodes
    weights = np.zeros((m, m))
    for src, dst, weight in graph.edges:
        weights[dst - 1, src - 1] = weight
    return weights / weights.sum(axis=0)


def generate_default_map(
    num_nodes: int = DEFAULT_NUM_NODES,
    main_road_nodes: Iterable[int] = MAIN_ROAD_NODES,
    seed: int = DEFAULT_MAP_SEED,
) -> RoadGraph:
    """Procedurally generate a city-like road graph; deterministic per seed.

    Main-road nodes form a one-way loop (dominant straight-ahead weight,
    lower-weight turns onto side streets, smallest-weight parking self loop).
    Side nodes sit on a shuffled two-way ring with random chords, so driving
    on in any direction is roughly equally likely and parking somewhat less.
    Every node carries a self loop.
    """
    if not _is_int(num_nodes) or num_nodes < 2:
        raise MapError("num_nodes must be an integer >= 2")
    main = sorted(int(n) for n in main_road_nodes)
    if len(set(main)) != len(main):
        raise MapError("main_road_nodes contains duplicates")
    if any(not 1 <= n <= num_nodes for n in main):
        raise MapError(f"main_road_nodes must lie within 1..{num_nodes}")
    main_set = set(main)
    side = [n for n in range(1, num_nodes + 1) if n not in main_set]
    rng = np.random.default_rng(seed)
    edges: dict[tuple[int, int], float] = {}

    def add(src: int, dst: int, weight_range: tuple[float, float]) -> None:
        edges[(src, dst)] = float(rng.uniform(*weight_range))

    # One-way main loop 1 -> 2 -> ... -> 9 -> 1 (in sorted order).
    if len(main) >= 2:
        for a, b in zip(main, main[1:] + main[:1]):
            add(a, b, _STRAIGHT_WEIGHT)

    # Two-way ring over side nodes in shuffled order.
    order = np.array(side, dtype=int)
    rng.shuffle(order)
    if len(order) == 2:
        ring_pairs = [(int(order[0]), int(order[1]))]
    elif len(order) >= 3:
        ring_pairs = [
            (int(order[i]), int(order[(i + 1) % len(order)])) for i in range(len(order))
        ]
    else:
        ring_pairs = []
    for a, b in ring_pairs:
        add(a, b, _SIDE_WEIGHT)
        add(b, a, _SIDE_WEIGHT)

    # Random two-way chords between side streets.
    target_chords = len(side) // 2 if len(side) >= 3 else 0
    added = 0
    attempts = 0
    while added < target_chords and attempts < 20 * target_chords + 20:
        attempts += 1
        i, j = rng.choice(len(side), size=2, replace=False)
        a, b = side[int(i)], side[int(j)]
        if (a, b) in edges or (b, a) in edges:
            continue
        add(a, b, _SIDE_WEIGHT)
        add(b, a, _SIDE_WEIGHT)
        added += 1

    # Each main node joins one or two side streets, both directions.
    if side:
        for m in main:
            k = min(_TURNS_PER_MAIN_NODE, len(side))
            for t in rng.choice(len(side), size=k, replace=False):
                s = side[int(t)]
                add(m, s, _TURN_WEIGHT)
                add(s, m, _SIDE_WEIGHT)

    # Parking self loops, smallest weight class per node.
    for n in range(1, num_nodes + 1):
        add(n, n, _MAIN_SELF_WEIGHT if n in main_set else _SIDE_SELF_WEIGHT)

    return RoadGraph(
        num_nodes=int(num_nodes),
        edges=tuple(Edge(s, d, w) for (s, d), w in edges.items()),
    )
