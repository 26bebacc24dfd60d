"""Random geometric graph samples over a finite point set.

A pair of points is *eligible* when its distance is strictly below 1,
decided exactly; each eligible pair is joined independently with rational
probability p via the keyed per-pair uniform from :mod:`radolab.rng`. The
point table lives outside the sample so that two samples over the same
geometry share it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from radolab.norms import NormSpec, distance_lt
from radolab.rationals import format_rational, parse_rational
from radolab.rng import uniform_less_than
from radolab.vectors import FiniteSupportVector

__all__ = [
    "GraphSample",
    "DichotomyRow",
    "sample_graph",
    "graph_distance",
    "all_graph_distances",
    "dichotomy_report",
    "export_graph",
    "graph_from_json",
]

SCHEMA_TAG = "radolab.graph/1"


@dataclass(frozen=True)
class GraphSample:
    """One instance of the random graph on a fixed point list.

    Edges are stored explicitly; they are reproducible from
    (points, p, seed, norm) alone and every edge's endpoints pass the exact
    eligibility predicate.
    """

    point_ids: tuple[int, ...]
    p: Fraction
    seed: int
    norm: NormSpec
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        ids = set(self.point_ids)
        if len(ids) != len(self.point_ids):
            raise ValueError("point ids must be distinct")
        for a, b in self.edges:
            if a >= b or a not in ids or b not in ids:
                raise ValueError(f"bad edge ({a},{b})")

    def has_edge(self, a: int, b: int) -> bool:
        if a == b:
            return False
        return (min(a, b), max(a, b)) in self.edges

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {i: set() for i in self.point_ids}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def sample_graph(
    points: Sequence[FiniteSupportVector],
    norm: NormSpec,
    p: Fraction,
    seed: int,
    ids: Sequence[int] | None = None,
) -> GraphSample:
    """Sample the graph: eligible pairs (exact ||x-y|| < 1) joined when the
    keyed 53-bit uniform for the id pair falls below p.

    Ineligible pairs never join; p <= p' with the same seed gives a subgraph
    because the per-pair uniform is shared.
    """
    p = Fraction(p)
    if p < 0 or p > 1:
        raise ValueError("p must lie in [0, 1]")
    if not norm.is_exact:
        raise ValueError("graph sampling needs an exact norm")
    if ids is None:
        ids = range(len(points))
    ids = tuple(int(i) for i in ids)
    if len(ids) != len(points):
        raise ValueError("ids must match points one-to-one")
    one = Fraction(1)
    edges = set()
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            a, b = ids[i], ids[j]
            lo, hi = (a, b) if a < b else (b, a)
            if distance_lt(points[i], points[j], one, norm) and uniform_less_than(
                seed, lo, hi, p
            ):
                edges.add((lo, hi))
    return GraphSample(
        point_ids=ids, p=p, seed=seed, norm=norm, edges=frozenset(edges)
    )


def _bfs(adj: Mapping[int, set[int]], source: int) -> dict[int, int]:
    dist = {source: 0}
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in dist:
                    dist[v] = d
                    nxt.append(v)
        frontier = nxt
    return dist


def graph_distance(g: GraphSample, a: int, b: int) -> int | float:
    """Shortest-path edge count; math.inf when disconnected."""
    if a not in g.point_ids or b not in g.point_ids:
        raise KeyError(f"unknown point id in ({a}, {b})")
    if a == b:
        return 0
    dist = _bfs(g.adjacency(), a)
    return dist.get(b, math.inf)


def all_graph_distances(g: GraphSample) -> dict[int, dict[int, int]]:
    adj = g.adjacency()
    return {source: _bfs(adj, source) for source in g.point_ids}


@dataclass(frozen=True)
class DichotomyRow:
    k: int
    pairs_tested: int
    norm_close_graph_far: int  # ||x-y|| < k but d_G > k
    graph_close_norm_far: int  # d_G <= k but ||x-y|| >= k

    @property
    def violations(self) -> int:
        return self.norm_close_graph_far + self.graph_close_norm_far


def dichotomy_report(
    g: GraphSample,
    points: Mapping[int, FiniteSupportVector],
    k_max: int,
) -> list[DichotomyRow]:
    """Per k in {2..k_max}: how often d_G <= k and ||x-y|| < k disagree.

    The norm side is exact, the graph side is BFS. k = 1 is deliberately
    excluded: at threshold 1 the equivalence is not part of the model's
    contract. Both disagreement directions are counted separately (the
    graph-close/norm-far direction cannot occur when edges respect
    eligibility; it is counted anyway as a self-check).
    """
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    dists = all_graph_distances(g)
    rows = []
    ids = sorted(g.point_ids)
    for k in range(2, k_max + 1):
        kf = Fraction(k)
        pairs = 0
        norm_close_graph_far = 0
        graph_close_norm_far = 0
        for i_pos, a in enumerate(ids):
            for b in ids[i_pos + 1 :]:
                pairs += 1
                norm_close = distance_lt(points[a], points[b], kf, g.norm)
                graph_close = dists[a].get(b, math.inf) <= k
                if norm_close and not graph_close:
                    norm_close_graph_far += 1
                elif graph_close and not norm_close:
                    graph_close_norm_far += 1
        rows.append(
            DichotomyRow(
                k=k,
                pairs_tested=pairs,
                norm_close_graph_far=norm_close_graph_far,
                graph_close_norm_far=graph_close_norm_far,
            )
        )
    return rows


# -- serialization ---------------------------------------------------------


def export_graph(g: GraphSample, format: str) -> bytes:
    """Deterministic DOT / GraphML / JSON bytes; nodes by id, edges sorted."""
    fmt = format.lower()
    if fmt == "dot":
        lines = ["graph G {"]
        for i in sorted(g.point_ids):
            lines.append(f'  "{i}";')
        for a, b in g.sorted_edges():
            lines.append(f'  "{a}" -- "{b}";')
        lines.append("}")
        return ("\n".join(lines) + "\n").encode()
    if fmt == "graphml":
        lines = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
            '  <graph id="G" edgedefault="undirected">',
        ]
        for i in sorted(g.point_ids):
            lines.append(f'    <node id="n{i}"/>')
        for a, b in g.sorted_edges():
            lines.append(f'    <edge source="n{a}" target="n{b}"/>')
        lines.append("  </graph>")
        lines.append("</graphml>")
        return ("\n".join(lines) + "\n").encode()
    if fmt == "json":
        obj = {
            "schema": SCHEMA_TAG,
            "point_ids": list(g.point_ids),
            "p": format_rational(g.p),
            "seed": g.seed,
            "norm": g.norm.to_json_obj(),
            "edges": [list(e) for e in g.sorted_edges()],
        }
        return (json.dumps(obj, sort_keys=True, indent=1) + "\n").encode()
    raise ValueError(f"unknown export format {format!r}")


def graph_from_json(data: bytes | str) -> GraphSample:
    obj = json.loads(data)
    if obj.get("schema") != SCHEMA_TAG:
        raise ValueError(f"unexpected schema tag {obj.get('schema')!r}")
    return GraphSample(
        point_ids=tuple(int(i) for i in obj["point_ids"]),
        p=parse_rational(obj["p"]),
        seed=int(obj["seed"]),
        norm=NormSpec.from_json_obj(obj["norm"]),
        edges=frozenset((int(a), int(b)) for a, b in obj["edges"]),
    )
