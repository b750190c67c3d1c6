"""Compiled shortest-path kernel over implicit lattice graphs.

One kernel serves both modes:

* full sweep (``dst < 0``): plain binary-heap Dijkstra over the whole
  window, ties broken by smallest node index, decrease-key realized by
  re-insertion with stale-entry skipping;
* point query (``dst >= 0``): the same heap discipline with an
  admissible, consistent distance-to-target bound added to the key
  (Euclidean distance divided by a certified maximum effective speed),
  stopping as soon as the target settles.

Both modes return the same distance value for the target: the admissible
bound never changes which paths are optimal, only how many nodes get
expanded.  The kernel is sequential and allocation-deterministic, so a
given (window, table, endpoints) triple always produces bit-identical
results; ``nogil`` lets independent queries run on worker threads.
"""

import math

import numpy as np
from numba import njit

__all__ = ["run_query"]


@njit(cache=True, nogil=True)
def run_query(ni, nj, ilo, jlo, nres, offs, W, src, dst, hcoef, dist, pred):
    """Relax the window graph from ``src``; distances land in ``dist``.

    Parameters
    ----------
    ni, nj : node counts along the two axes
    ilo, jlo : absolute lattice index of the window's low corner
    nres : residue modulus (nodes per unit cell)
    offs : (n_off, 2) stencil offsets
    W : (n_off, nres, nres) weight table indexed by residue
    src, dst : node ids (row-major); dst = -1 sweeps the whole window
    hcoef : lower-bound coefficient per unit of index distance
            (h / certified max speed); 0 disables the target bound
    dist, pred : preallocated output arrays (inf / -1 filled)

    Returns the number of settled pops.
    """
    n_off = offs.shape[0]
    cap = 1 << 14
    fh = np.empty(cap, np.float64)
    gh = np.empty(cap, np.float64)
    nh = np.empty(cap, np.int64)

    ti = 0
    tj = 0
    use_bound = hcoef > 0.0 and dst >= 0
    if dst >= 0:
        ti = dst % ni
        tj = dst // ni

    dist[src] = 0.0
    f0 = 0.0
    if use_bound:
        dx = float(src % ni - ti)
        dy = float(src // ni - tj)
        f0 = hcoef * math.sqrt(dx * dx + dy * dy)
    fh[0] = f0
    gh[0] = 0.0
    nh[0] = src
    size = 1
    popped = 0

    while size > 0:
        # pop the lexicographic (f, node) minimum
        g = gh[0]
        node = nh[0]
        size -= 1
        if size > 0:
            lf = fh[size]
            lg = gh[size]
            ln = nh[size]
            i = 0
            while True:
                c = 2 * i + 1
                if c >= size:
                    break
                r = c + 1
                if r < size and (fh[r] < fh[c] or (fh[r] == fh[c] and nh[r] < nh[c])):
                    c = r
                if fh[c] < lf or (fh[c] == lf and nh[c] < ln):
                    fh[i] = fh[c]
                    gh[i] = gh[c]
                    nh[i] = nh[c]
                    i = c
                else:
                    break
            fh[i] = lf
            gh[i] = lg
            nh[i] = ln

        if g > dist[node]:
            continue  # stale re-insertion
        popped += 1
        if node == dst:
            break

        ii = node % ni
        jj = node // ni
        ir = (ilo + ii) % nres
        jr = (jlo + jj) % nres
        for o in range(n_off):
            i2 = ii + offs[o, 0]
            j2 = jj + offs[o, 1]
            if 0 <= i2 < ni and 0 <= j2 < nj:
                g2 = g + W[o, ir, jr]
                v = j2 * ni + i2
                if g2 < dist[v]:
                    dist[v] = g2
                    pred[v] = np.int32(node)
                    if use_bound:
                        dx = float(i2 - ti)
                        dy = float(j2 - tj)
                        f2 = g2 + hcoef * math.sqrt(dx * dx + dy * dy)
                    else:
                        f2 = g2
                    if size >= cap:
                        ncap = 2 * cap
                        nfh = np.empty(ncap, np.float64)
                        ngh = np.empty(ncap, np.float64)
                        nnh = np.empty(ncap, np.int64)
                        nfh[:cap] = fh
                        ngh[:cap] = gh
                        nnh[:cap] = nh
                        fh = nfh
                        gh = ngh
                        nh = nnh
                        cap = ncap
                    i = size
                    while i > 0:
                        p = (i - 1) >> 1
                        if fh[p] > f2 or (fh[p] == f2 and nh[p] > v):
                            fh[i] = fh[p]
                            gh[i] = gh[p]
                            nh[i] = nh[p]
                            i = p
                        else:
                            break
                    fh[i] = f2
                    gh[i] = g2
                    nh[i] = v
                    size += 1
    return popped
