"""Lifted lattice graphs for periodic metrics.

The continuum length element |dx| / a(x) is discretized on the lattice
(1/N) Z^2 restricted to a rectangular window of unit cells.  Nodes are
joined along a stencil of primitive integer offsets k with Chebyshev
norm <= S, and each edge carries the composite-midpoint weight

    w(x, k) = (h |k| / M) * sum_{m < M} 1 / a(x + (m + 1/2) h k / M),

the quadrature of the metric length of the straight segment.

Because a is Z^2-periodic, w only depends on the residue of the node
modulo N.  Weights are therefore tabulated once per residue class with
quadrature positions reduced in exact integer arithmetic, which makes
edge weights bit-identical across integer window translations.  Tables
for negated offsets are index-shifted copies of the positive-half
tables, so w(u, v) = w(v, u) holds exactly by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Tuple

import numpy as np

from .config import Rig, DEFAULT_RIG
from .errors import (CapacityExceeded, NonPositiveSpeed, StableFrontError,
                     WindowTooSmall)
from .fields import ScalarField2

__all__ = ["Stencil", "LatticeWindow", "LatticeGraph", "edge_weight", "build_graph"]


# ----------------------------------------------------------------------
# stencil
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Stencil:
    """Primitive integer move set with Chebyshev norm <= S.

    ``offsets[i + n_half] == -offsets[i]`` for the first half, so code
    can pair every direction with its negation by index.
    """

    S: int
    offsets: np.ndarray = dc_field(repr=False, default=None)

    def __post_init__(self):
        if not 1 <= self.S <= 8:
            raise StableFrontError(f"stencil reach S must be in [1, 8], got {self.S}")
        half = []
        for k1 in range(0, self.S + 1):
            for k2 in range(-self.S, self.S + 1):
                if k1 == 0 and k2 <= 0:   # keep the open half-plane
                    continue
                if math.gcd(k1, abs(k2)) == 1:
                    half.append((k1, k2))
        half.sort(key=lambda k: math.atan2(k[1], k[0]))
        offs = np.array(half + [(-k1, -k2) for (k1, k2) in half], dtype=np.int64)
        offs.setflags(write=False)
        object.__setattr__(self, "offsets", offs)

    @property
    def n_half(self) -> int:
        return self.offsets.shape[0] // 2

    @property
    def n_offsets(self) -> int:
        return self.offsets.shape[0]

    def index_of(self, k: Tuple[int, int]) -> int:
        """Index of offset k (raises if k is not in the stencil)."""
        offs = self.offsets
        hits = np.nonzero((offs[:, 0] == k[0]) & (offs[:, 1] == k[1]))[0]
        if hits.size != 1:
            raise StableFrontError(f"offset {k} not in stencil S={self.S}")
        return int(hits[0])

    def angular_overlength(self) -> float:
        """Worst secant factor of the stencil cone.

        For a direction falling mid-gap between adjacent stencil rays the
        cheapest two-ray decomposition is longer than the segment by
        1 / cos(gap / 2); this bounds the angular discretization bias of
        graph distances on any field.
        """
        ang = np.sort(np.arctan2(self.offsets[:, 1].astype(float),
                                 self.offsets[:, 0].astype(float)))
        gaps = np.diff(np.concatenate([ang, [ang[0] + 2.0 * np.pi]]))
        return float(1.0 / np.cos(np.max(gaps) / 2.0))


# ----------------------------------------------------------------------
# window
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeWindow:
    """Axis-aligned block of unit cells [lo1, hi1] x [lo2, hi2], N nodes per edge.

    Node indices run over [lo * N, hi * N] inclusive along each axis;
    node (i, j) sits at coordinates (i h, j h) with h = 1 / N.
    """

    lo: Tuple[int, int]
    hi: Tuple[int, int]
    N: int

    def __post_init__(self):
        if self.hi[0] <= self.lo[0] or self.hi[1] <= self.lo[1]:
            raise WindowTooSmall(f"window {self.lo}..{self.hi} must span at least one cell")
        if self.N < 1:
            raise StableFrontError(f"N must be >= 1, got {self.N}")

    @property
    def h(self) -> float:
        return 1.0 / self.N

    @property
    def i_lo(self) -> int:
        return self.lo[0] * self.N

    @property
    def j_lo(self) -> int:
        return self.lo[1] * self.N

    @property
    def ni(self) -> int:
        return (self.hi[0] - self.lo[0]) * self.N + 1

    @property
    def nj(self) -> int:
        return (self.hi[1] - self.lo[1]) * self.N + 1

    @property
    def n_nodes(self) -> int:
        return self.ni * self.nj

    def contains_node(self, i: int, j: int) -> bool:
        return (self.i_lo <= i <= self.i_lo + self.ni - 1
                and self.j_lo <= j <= self.j_lo + self.nj - 1)

    def node_id(self, i: int, j: int) -> int:
        """Row-major numbering from the low corner."""
        return (j - self.j_lo) * self.ni + (i - self.i_lo)

    def node_of_id(self, nid: int) -> Tuple[int, int]:
        jj, ii = divmod(nid, self.ni)
        return (self.i_lo + ii, self.j_lo + jj)

    def translate(self, t: Tuple[int, int]) -> "LatticeWindow":
        return LatticeWindow((self.lo[0] + t[0], self.lo[1] + t[1]),
                             (self.hi[0] + t[0], self.hi[1] + t[1]), self.N)


# ----------------------------------------------------------------------
# edge weights
# ----------------------------------------------------------------------

def edge_weight(a: ScalarField2, x, k, h: float, M: int) -> float:
    """Composite-midpoint weight of the segment from x to x + h k."""
    m = np.arange(M, dtype=np.float64)
    t = (m + 0.5) / M
    p1 = x[0] + t * (h * k[0])
    p2 = x[1] + t * (h * k[1])
    vals = a.sample_many(p1, p2)
    if np.min(vals) <= 0.0:
        raise NonPositiveSpeed(f"speed field non-positive near {x}")
    norm_k = math.hypot(float(k[0]), float(k[1]))
    return float(h * norm_k / M * np.sum(1.0 / vals))


def _weight_tables(a: ScalarField2, rig: Rig, stencil: Stencil) -> tuple:
    """(W, heur_speed) with W[o, i % N, j % N] the weight of offset o at that residue.

    Quadrature positions are reduced modulo the period in exact integer
    arithmetic (denominator 2 M N), so residue classes — and with them
    integer-translated windows — see bit-identical weights.  Negative
    offsets reuse the positive tables through an index shift, which makes
    the undirected weight symmetric exactly.
    """
    key = rig.key()
    cache = a._table_cache
    hit = cache.get(key)
    if hit is not None:
        return hit
    N, M = rig.N, rig.M
    den = 2 * M * N
    res = np.arange(N, dtype=np.int64)
    m2 = 2 * np.arange(M, dtype=np.int64) + 1
    n_half = stencil.n_half
    W = np.empty((stencil.n_offsets, N, N), dtype=np.float64)
    for o in range(n_half):
        k1 = int(stencil.offsets[o, 0])
        k2 = int(stencil.offsets[o, 1])
        # numerators of quadrature positions over the common denominator 2MN
        num1 = (2 * M * res[None, :] + m2[:, None] * k1) % den   # (M, N)
        num2 = (2 * M * res[None, :] + m2[:, None] * k2) % den
        p1 = num1.astype(np.float64) / den
        p2 = num2.astype(np.float64) / den
        vals = a.sample_many(p1[:, :, None], p2[:, None, :])     # (M, N_i, N_j)
        if np.min(vals) <= 0.0:
            raise NonPositiveSpeed("speed field non-positive on quadrature points")
        norm_k = math.hypot(k1, k2)
        W[o] = (1.0 / N) * norm_k / M * np.sum(1.0 / vals, axis=0)
        # negated offset: same undirected edge seen from the far endpoint
        W[o + n_half] = np.roll(W[o], shift=(k1, k2), axis=(0, 1))
    W.setflags(write=False)
    lens = np.hypot(stencil.offsets[:, 0].astype(float), stencil.offsets[:, 1].astype(float))
    ratios = (lens[:, None, None] / N) / W
    heur_speed = float(np.max(ratios)) * (1.0 + 1e-12)
    out = (W, heur_speed)
    cache[key] = out
    return out


# ----------------------------------------------------------------------
# graph
# ----------------------------------------------------------------------

class LatticeGraph:
    """Window + stencil + residue weight tables over one speed field.

    Adjacency is implicit: node (i, j) connects to (i, j) + k for every
    stencil offset k whose endpoint stays inside the window, with weight
    ``W[o, i % N, j % N]``.
    """

    __slots__ = ("field", "window", "stencil", "rig", "W", "heur_speed")

    def __init__(self, field: ScalarField2, window: LatticeWindow,
                 stencil: Stencil, rig: Rig):
        if window.N != rig.N:
            raise StableFrontError("window resolution disagrees with rig")
        if window.ni < 2 or window.nj < 2:
            raise WindowTooSmall("window needs at least two nodes per axis")
        if window.n_nodes > rig.capacity:
            raise CapacityExceeded(
                f"window of {window.n_nodes} nodes exceeds capacity {rig.capacity}")
        amin, _ = field.extrema()
        if amin <= 0.0:
            raise NonPositiveSpeed(f"field minimum {amin} is not positive")
        self.field = field
        self.window = window
        self.stencil = stencil
        self.rig = rig
        self.W, self.heur_speed = _weight_tables(field, rig, stencil)

    @property
    def n_nodes(self) -> int:
        return self.window.n_nodes

    @property
    def field_fingerprint(self) -> str:
        return self.field.fingerprint

    def weight(self, i: int, j: int, o: int) -> float:
        """Weight of the edge leaving node (i, j) along stencil offset o."""
        N = self.rig.N
        return float(self.W[o, i % N, j % N])

    def neighbors(self, i: int, j: int):
        """(i2, j2, weight) triples for all in-window neighbors of (i, j)."""
        out = []
        w = self.window
        for o in range(self.stencil.n_offsets):
            i2 = i + int(self.stencil.offsets[o, 0])
            j2 = j + int(self.stencil.offsets[o, 1])
            if w.contains_node(i2, j2):
                out.append((i2, j2, self.weight(i, j, o)))
        return out

    def edges(self) -> Iterator[tuple]:
        """Undirected edges ((i, j), (i2, j2), weight); small windows only."""
        w = self.window
        for j in range(w.j_lo, w.j_lo + w.nj):
            for i in range(w.i_lo, w.i_lo + w.ni):
                for o in range(self.stencil.n_half):
                    i2 = i + int(self.stencil.offsets[o, 0])
                    j2 = j + int(self.stencil.offsets[o, 1])
                    if w.contains_node(i2, j2):
                        yield ((i, j), (i2, j2), self.weight(i, j, o))

    def check_invariants(self) -> None:
        """Exhaustive edge checks; intended for small test windows."""
        amin, amax = self.field.extrema()
        N = self.rig.N
        n_half = self.stencil.n_half
        for (i, j), (i2, j2), w in self.edges():
            o = self.stencil.index_of((i2 - i, j2 - j))
            back = self.weight(i2, j2, (o + n_half) % self.stencil.n_offsets
                               if o < n_half else o - n_half)
            if back != w:
                raise StableFrontError(f"asymmetric weight at {(i, j)}->{(i2, j2)}")
            norm_k = math.hypot(i2 - i, j2 - j)
            lo = norm_k / (N * amax) * (1.0 - 1e-12)
            hi = norm_k / (N * amin) * (1.0 + 1e-12)
            if not lo <= w <= hi:
                raise StableFrontError(
                    f"weight {w} outside [{lo}, {hi}] at {(i, j)}->{(i2, j2)}")


def build_graph(field: ScalarField2, window: LatticeWindow,
                rig: Rig = DEFAULT_RIG) -> LatticeGraph:
    """Validate the window and assemble the (implicit) lattice graph."""
    return LatticeGraph(field, window, Stencil(rig.S), rig)
