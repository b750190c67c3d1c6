"""Shortest-path queries on lifted lattice graphs.

``sssp`` runs full-window Dijkstra (deterministic: ties settle by
smallest node index); ``distance`` answers point-to-point queries on an
automatically sized window.  The window is the bounding box of the two
endpoints inflated by the detour margin

    rho = ceil( (a_max / a_min) |x - y| / 2 + 1 )  unit cells,

which no minimizing path can leave: an excursion of e costs at least
2 e / a_max while the straight chain costs at most |x - y| / a_min.
Enlarging the window beyond rho therefore cannot change the returned
value (checked when ``rig.validate_windows`` is set).

Paths are recorded against absolute lattice indices, so records from
different windows over the same field can be compared node-by-node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .config import Rig, DEFAULT_RIG
from .engine import run_query
from .errors import (NodeOutOfWindow, NonPositiveSpeed, Unreachable,
                     ValidationError)
from .fields import ScalarField2
from .lattice import LatticeGraph, LatticeWindow, build_graph

__all__ = ["PathRecord", "DistanceMap", "sssp", "extract_path", "distance"]


# ----------------------------------------------------------------------
# records
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PathRecord:
    """A walk on the lifted lattice with its metric length bookkeeping.

    nodes        (n, 2) absolute lattice indices (coordinates are nodes * h)
    weights      (n-1,) edge weights in path order
    cumulative   (n,) running length, cumulative[0] = 0
    h            lattice spacing 1 / N
    field_fp     fingerprint of the field the weights came from
    rig_key      (N, S, M) of the producing rig
    """

    nodes: np.ndarray
    weights: np.ndarray
    cumulative: np.ndarray
    h: float
    field_fp: str
    rig_key: tuple

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def length(self) -> float:
        return float(self.cumulative[-1])

    @property
    def displacement(self) -> Tuple[int, int]:
        """Last node minus first node, exact in lattice indices."""
        d = self.nodes[-1] - self.nodes[0]
        return (int(d[0]), int(d[1]))

    @property
    def rotation_direction(self) -> Tuple[float, float]:
        d = self.displacement
        r = math.hypot(d[0], d[1])
        if r == 0.0:
            return (0.0, 0.0)
        return (d[0] / r, d[1] / r)

    def reduced_trace(self, N: int) -> List[tuple]:
        """((i mod N, j mod N), (cell_i, cell_j)) per node: torus point + cell tag."""
        out = []
        for i, j in self.nodes:
            out.append(((int(i) % N, int(j) % N), (int(i) // N, int(j) // N)))
        return out

    def to_json_dict(self) -> dict:
        return {
            "nodes": [[int(i), int(j)] for i, j in self.nodes],
            "h": self.h,
            "length": self.length,
            "displacement": list(self.displacement),
        }


def make_path(nodes, weights, h: float, field_fp: str, rig_key: tuple) -> PathRecord:
    nodes = np.ascontiguousarray(np.asarray(nodes, dtype=np.int64).reshape(-1, 2))
    weights = np.asarray(weights, dtype=np.float64)
    cumulative = np.concatenate([[0.0], np.cumsum(weights)])
    for arr in (nodes, weights, cumulative):
        arr.setflags(write=False)
    return PathRecord(nodes, weights, cumulative, h, field_fp, rig_key)


@dataclass(frozen=True)
class DistanceMap:
    """Full single-source distance field over one window graph."""

    graph: LatticeGraph
    source: Tuple[int, int]
    dist: np.ndarray
    pred: np.ndarray

    def node_distance(self, node: Tuple[int, int]) -> float:
        w = self.graph.window
        if not w.contains_node(node[0], node[1]):
            raise NodeOutOfWindow(f"node {node} outside window")
        d = float(self.dist[w.node_id(node[0], node[1])])
        if not math.isfinite(d):
            raise Unreachable(f"node {node} not reached from {self.source}")
        return d


# ----------------------------------------------------------------------
# queries
# ----------------------------------------------------------------------

def _run(graph: LatticeGraph, src_id: int, dst_id: int, bounded: bool):
    w = graph.window
    dist = np.full(w.n_nodes, np.inf, dtype=np.float64)
    pred = np.full(w.n_nodes, -1, dtype=np.int32)
    hcoef = (1.0 / graph.rig.N) / graph.heur_speed if bounded else 0.0
    run_query(w.ni, w.nj, w.i_lo, w.j_lo, graph.rig.N,
              graph.stencil.offsets, graph.W,
              src_id, dst_id, hcoef, dist, pred)
    return dist, pred


def sssp(graph: LatticeGraph, source: Tuple[int, int]) -> DistanceMap:
    """Exact Dijkstra distances from ``source`` over the whole window."""
    w = graph.window
    if not w.contains_node(source[0], source[1]):
        raise NodeOutOfWindow(f"source {source} outside window")
    dist, pred = _run(graph, w.node_id(source[0], source[1]), -1, bounded=False)
    dist.setflags(write=False)
    pred.setflags(write=False)
    return DistanceMap(graph, (int(source[0]), int(source[1])), dist, pred)


def _walk_path(graph: LatticeGraph, pred: np.ndarray, dst_id: int) -> PathRecord:
    w = graph.window
    chain = [dst_id]
    nid = dst_id
    while pred[nid] >= 0:
        nid = int(pred[nid])
        chain.append(nid)
    chain.reverse()
    nodes = np.array([w.node_of_id(c) for c in chain], dtype=np.int64)
    offsets = {(int(k[0]), int(k[1])): o
               for o, k in enumerate(graph.stencil.offsets)}
    weights = np.empty(len(chain) - 1, dtype=np.float64)
    for t in range(len(chain) - 1):
        i, j = nodes[t]
        di = int(nodes[t + 1, 0] - i)
        dj = int(nodes[t + 1, 1] - j)
        weights[t] = graph.weight(int(i), int(j), offsets[(di, dj)])
    return make_path(nodes, weights, w.h, graph.field_fingerprint, graph.rig.key())


def extract_path(dmap: DistanceMap, target: Tuple[int, int]) -> PathRecord:
    """Predecessor-chain path from the map's source to ``target``."""
    w = dmap.graph.window
    if not w.contains_node(target[0], target[1]):
        raise NodeOutOfWindow(f"target {target} outside window")
    tid = w.node_id(target[0], target[1])
    if not math.isfinite(dmap.dist[tid]):
        raise Unreachable(f"target {target} not reached")
    path = _walk_path(dmap.graph, dmap.pred, tid)
    assert path.cumulative[-1] == dmap.dist[tid]
    return path


# ----------------------------------------------------------------------
# auto-windowed point query
# ----------------------------------------------------------------------

def snap_node(x, N: int) -> Tuple[int, int]:
    """Nearest lattice node of a real point (half-up, deterministic)."""
    return (int(math.floor(x[0] * N + 0.5)), int(math.floor(x[1] * N + 0.5)))


def window_for(field: ScalarField2, x, y, rig: Rig, extra_margin: int = 0) -> LatticeWindow:
    """Bounding box of {x, y} inflated by the detour margin."""
    amin, amax = field.extrema()
    if amin <= 0.0:
        raise NonPositiveSpeed(f"field minimum {amin} is not positive")
    sep = math.hypot(x[0] - y[0], x[1] - y[1])
    rho = int(math.ceil(0.5 * (amax / amin) * sep + 1.0)) + extra_margin
    N = rig.N
    si, sj = snap_node(x, N)
    ti, tj = snap_node(y, N)
    lo1 = min(si, ti) // N - rho
    lo2 = min(sj, tj) // N - rho
    hi1 = -((-max(si, ti)) // N) + rho
    hi2 = -((-max(sj, tj)) // N) + rho
    return LatticeWindow((lo1, lo2), (hi1, hi2), N)


def distance(field: ScalarField2, x, y, rig: Rig = DEFAULT_RIG,
             return_path: bool = False, _extra_margin: int = 0):
    """Metric distance between two points (snapped to nearest nodes).

    With ``return_path=True`` also returns the realizing :class:`PathRecord`.
    When ``rig.validate_windows`` is set the query re-runs on a window one
    cell wider and requires the identical value.
    """
    window = window_for(field, x, y, rig, extra_margin=_extra_margin)
    graph = build_graph(field, window, rig)
    src = snap_node(x, rig.N)
    dst = snap_node(y, rig.N)
    src_id = window.node_id(*src)
    dst_id = window.node_id(*dst)
    dist_arr, pred = _run(graph, src_id, dst_id, bounded=True)
    value = float(dist_arr[dst_id])
    if not math.isfinite(value):
        raise Unreachable(f"no path from {x} to {y}")
    if rig.validate_windows and _extra_margin == 0:
        check = distance(field, x, y,
                         Rig(N=rig.N, S=rig.S, M=rig.M, capacity=rig.capacity),
                         _extra_margin=1)
        if check != value:
            raise ValidationError(
                f"window instability: {value} vs {check} at margin + 1")
    if not return_path:
        return value
    return value, _walk_path(graph, pred, dst_id)
