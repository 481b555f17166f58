"""Mesh graph-search oracle for flat distances.

An independent check of the geodesic engine: nodes are the points of a
1/mesh grid on every square of a region of the patch (nodes on shared
edges and at vertices identified), edges connect nodes up to `stencil`
grid steps apart when the straight segment between them stays inside the
two squares involved, with exact flat-metric weights.  A* with the
admissible developing-plane heuristic returns the shortest path length,
which overestimates the true distance by at most the stencil's angular
resolution error.
"""

import heapq

import numpy as np

from .accel import USING_NUMBA, njit
from .cover import LiftedPoint, Patch
from .geodesic import Frame
from .origami import NE, NW, SE, SW, R, U

_CORNER_IJ = {SW: (0, 0), SE: (1, 0), NE: (1, 1), NW: (0, 1)}


def stencil_offsets(k):
    """Primitive integer directions up to chessboard radius k."""
    out = []
    for di in range(-k, k + 1):
        for dj in range(-k, k + 1):
            if di == 0 and dj == 0:
                continue
            if np.gcd(abs(di), abs(dj)) != 1:
                continue
            out.append((di, dj))
    return np.array(sorted(out), dtype=np.int32)


class MeshRegion:
    """Shared-node mesh over a set of patch copies."""

    def __init__(self, patch: Patch, frame: Frame, copies, mesh):
        self.patch = patch
        self.frame = frame
        self.mesh = int(mesh)
        self.copies = np.array(sorted(set(copies)), dtype=np.int64)
        nc = len(self.copies)
        self.rix = {int(c): r for r, c in enumerate(self.copies)}
        self.region_nbr = np.full((nc, 4), -1, dtype=np.int32)
        for r, c in enumerate(self.copies):
            for d in range(4):
                n = patch.nbr[int(c)][d]
                if n >= 0 and n in self.rix:
                    self.region_nbr[r, d] = self.rix[n]

        m = self.mesh
        mp = m + 1
        # ownership pass: right edge -> right copy, then top edge -> upper copy
        rr, ii, jj = np.meshgrid(np.arange(nc), np.arange(mp), np.arange(mp),
                                 indexing="ij")
        rr = rr.astype(np.int64)
        ii = ii.astype(np.int64)
        jj = jj.astype(np.int64)
        right = self.region_nbr[:, R][rr]
        move = (ii == m) & (right >= 0)
        rr = np.where(move, right, rr)
        ii = np.where(move, 0, ii)
        up = self.region_nbr[:, U][rr]
        move = (jj == m) & (up >= 0)
        rr = np.where(move, up, rr)
        jj = np.where(move, 0, jj)
        flat = (rr * mp + ii) * mp + jj

        # vertex nodes: canonicalize each patch-vertex ring to one node
        corner_fix = {}
        seen = set()
        for r, c in enumerate(self.copies):
            for corner in (SW, SE, NE, NW):
                chain, _ = patch.ring(int(c), corner)
                key = min(chain)
                if key in seen:
                    continue
                seen.add(key)
                reps = []
                for cc, kk in chain:
                    if cc in self.rix:
                        ci, cj = _CORNER_IJ[kk]
                        reps.append((self.rix[cc] * mp + ci * m) * mp + cj * m)
                if len(reps) > 1:
                    tgt = min(reps)
                    for rep in reps:
                        corner_fix[rep] = tgt
        if corner_fix:
            rr2, ii2, jj2 = np.meshgrid(np.arange(nc), (0, m), (0, m),
                                        indexing="ij")
            raw = (rr2.ravel() * mp + ii2.ravel()) * mp + jj2.ravel()
            for k in range(len(raw)):
                tgt = corner_fix.get(int(raw[k]))
                if tgt is not None:
                    r0, rem = divmod(int(raw[k]), mp * mp)
                    i0, j0 = divmod(rem, mp)
                    flat[r0, i0, j0] = tgt

        uniq, inverse = np.unique(flat.ravel(), return_inverse=True)
        inverse = inverse.ravel()
        self.n_nodes = len(uniq)
        self.canon = inverse.reshape(nc, mp, mp).astype(np.int32)
        order = np.argsort(inverse, kind="stable")
        counts = np.bincount(inverse, minlength=self.n_nodes)
        self.rep_ptr = np.zeros(self.n_nodes + 1, dtype=np.int64)
        np.cumsum(counts, out=self.rep_ptr[1:])
        rsz = len(order)
        self.rep_copy = (order // (mp * mp)).astype(np.int32)
        rem = order % (mp * mp)
        self.rep_i = (rem // mp).astype(np.int32)
        self.rep_j = (rem % mp).astype(np.int32)

        phi = frame.phi
        devs = np.array([patch.dev[int(c)] for c in self.copies], dtype=float)
        self.dev_phi = devs @ phi.T
        self.hx = phi @ np.array([1.0 / m, 0.0])
        self.hy = phi @ np.array([0.0, 1.0 / m])

    def node_of(self, x: LiftedPoint):
        m = self.mesh
        r = self.rix[x.copy]
        i = round(x.u * m)
        j = round(x.v * m)
        if abs(x.u * m - i) > 1e-9 or abs(x.v * m - j) > 1e-9:
            raise ValueError("point is not on the mesh")
        return int(self.canon[r, i, j])

    def node_pos(self, node):
        r = self.rep_copy[self.rep_ptr[node]]
        i = self.rep_i[self.rep_ptr[node]]
        j = self.rep_j[self.rep_ptr[node]]
        return self.dev_phi[r] + i * self.hx + j * self.hy

    def shortest(self, na, nb, stencil=12):
        offs = stencil_offsets(stencil)
        w = np.linalg.norm(offs[:, 0:1] * self.hx + offs[:, 1:2] * self.hy,
                           axis=1)
        goal_pos = self.node_pos(nb)
        if USING_NUMBA:
            dist = _astar_kernel(
                self.canon, self.region_nbr, self.rep_ptr, self.rep_copy,
                self.rep_i, self.rep_j, self.dev_phi, self.hx, self.hy,
                offs, w, np.int64(na), np.int64(nb), goal_pos,
                np.int64(self.mesh))
        else:
            dist = _astar_python(self, offs, w, na, nb, goal_pos)
        if not np.isfinite(dist):
            raise RuntimeError("mesh path not found inside the region")
        return float(dist)


def _neighbors_of_rep(canon, region_nbr, mesh, r, i, j, di, dj):
    """Resolve a stencil move; returns node id or -1 (numpy/python path)."""
    m = mesh
    i2, j2 = i + di, j + dj
    r2 = r
    if 0 <= i2 <= m and 0 <= j2 <= m:
        return canon[r2, i2, j2]
    over_x = i2 < 0 or i2 > m
    over_y = j2 < 0 or j2 > m
    if over_x and over_y:
        return -1
    if over_x:
        edge = m if di > 0 else 0
        t = (edge - i) / di
        yc = j + dj * t
        if not 0.0 < yc < m:
            return -1
        r2 = region_nbr[r, 0] if di > 0 else region_nbr[r, 2]
        if r2 < 0:
            return -1
        i2 = i2 - m if di > 0 else i2 + m
    else:
        edge = m if dj > 0 else 0
        t = (edge - j) / dj
        xc = i + di * t
        if not 0.0 < xc < m:
            return -1
        r2 = region_nbr[r, 1] if dj > 0 else region_nbr[r, 3]
        if r2 < 0:
            return -1
        j2 = j2 - m if dj > 0 else j2 + m
    return canon[r2, i2, j2]


def _astar_python(region, offs, w, start, goal, goal_pos):
    n = region.n_nodes
    dist = np.full(n, np.inf)
    dist[start] = 0.0
    settled = np.zeros(n, dtype=bool)
    hp = region.node_pos(start) - goal_pos
    heap = [(float(np.hypot(hp[0], hp[1])), start)]
    while heap:
        f, u = heapq.heappop(heap)
        if settled[u]:
            continue
        settled[u] = True
        if u == goal:
            return dist[goal]
        du = dist[u]
        for t in range(region.rep_ptr[u], region.rep_ptr[u + 1]):
            r = region.rep_copy[t]
            i = region.rep_i[t]
            j = region.rep_j[t]
            for s in range(len(offs)):
                v = _neighbors_of_rep(region.canon, region.region_nbr,
                                      region.mesh, r, i, j,
                                      offs[s, 0], offs[s, 1])
                if v < 0 or settled[v]:
                    continue
                nd = du + w[s]
                if nd < dist[v] - 1e-15:
                    dist[v] = nd
                    pv = region.node_pos(v) - goal_pos
                    heapq.heappush(heap, (nd + float(np.hypot(pv[0], pv[1])), v))
    return dist[goal]


@njit(cache=True)
def _astar_kernel(canon, region_nbr, rep_ptr, rep_copy, rep_i, rep_j,
                  dev_phi, hx, hy, offs, w, start, goal, goal_pos, mesh):
    n = rep_ptr.shape[0] - 1
    dist = np.full(n, np.inf)
    dist[start] = 0.0
    settled = np.zeros(n, dtype=np.uint8)
    cap = 1 << 16
    heap_f = np.empty(cap)
    heap_n = np.empty(cap, dtype=np.int64)
    size = 0

    def pos_of(node):
        t = rep_ptr[node]
        r = rep_copy[t]
        return (dev_phi[r, 0] + rep_i[t] * hx[0] + rep_j[t] * hy[0],
                dev_phi[r, 1] + rep_i[t] * hx[1] + rep_j[t] * hy[1])

    px, py = pos_of(start)
    f0 = np.hypot(px - goal_pos[0], py - goal_pos[1])
    heap_f[0] = f0
    heap_n[0] = start
    size = 1
    m = mesh
    while size > 0:
        fu = heap_f[0]
        u = heap_n[0]
        size -= 1
        heap_f[0] = heap_f[size]
        heap_n[0] = heap_n[size]
        k = 0
        while True:
            l = 2 * k + 1
            rch = l + 1
            sm = k
            if l < size and heap_f[l] < heap_f[sm]:
                sm = l
            if rch < size and heap_f[rch] < heap_f[sm]:
                sm = rch
            if sm == k:
                break
            heap_f[k], heap_f[sm] = heap_f[sm], heap_f[k]
            heap_n[k], heap_n[sm] = heap_n[sm], heap_n[k]
            k = sm
        if settled[u] == 1:
            continue
        settled[u] = 1
        if u == goal:
            return dist[goal]
        du = dist[u]
        for t in range(rep_ptr[u], rep_ptr[u + 1]):
            r = rep_copy[t]
            i = rep_i[t]
            j = rep_j[t]
            for s in range(offs.shape[0]):
                di = offs[s, 0]
                dj = offs[s, 1]
                i2 = i + di
                j2 = j + dj
                r2 = r
                ok = True
                if 0 <= i2 <= m and 0 <= j2 <= m:
                    pass
                else:
                    over_x = i2 < 0 or i2 > m
                    over_y = j2 < 0 or j2 > m
                    if over_x and over_y:
                        ok = False
                    elif over_x:
                        edge = m if di > 0 else 0
                        tt = (edge - i) / di
                        yc = j + dj * tt
                        if yc <= 0.0 or yc >= m:
                            ok = False
                        else:
                            r2 = region_nbr[r, 0] if di > 0 else region_nbr[r, 2]
                            if r2 < 0:
                                ok = False
                            else:
                                i2 = i2 - m if di > 0 else i2 + m
                    else:
                        edge = m if dj > 0 else 0
                        tt = (edge - j) / dj
                        xc = i + di * tt
                        if xc <= 0.0 or xc >= m:
                            ok = False
                        else:
                            r2 = region_nbr[r, 1] if dj > 0 else region_nbr[r, 3]
                            if r2 < 0:
                                ok = False
                            else:
                                j2 = j2 - m if dj > 0 else j2 + m
                if not ok:
                    continue
                v = canon[r2, i2, j2]
                if v < 0 or settled[v] == 1:
                    continue
                nd = du + w[s]
                if nd < dist[v] - 1e-15:
                    dist[v] = nd
                    vx, vy = pos_of(v)
                    fv = nd + np.hypot(vx - goal_pos[0], vy - goal_pos[1])
                    if size >= cap:
                        new_cap = cap * 2
                        nf = np.empty(new_cap)
                        nn = np.empty(new_cap, dtype=np.int64)
                        nf[:size] = heap_f[:size]
                        nn[:size] = heap_n[:size]
                        heap_f = nf
                        heap_n = nn
                        cap = new_cap
                    heap_f[size] = fv
                    heap_n[size] = v
                    size += 1
                    k = size - 1
                    while k > 0:
                        par = (k - 1) // 2
                        if heap_f[par] <= heap_f[k]:
                            break
                        heap_f[par], heap_f[k] = heap_f[k], heap_f[par]
                        heap_n[par], heap_n[k] = heap_n[k], heap_n[par]
                        k = par
    return dist[goal]


def oracle_length(patch: Patch, frame: Frame, x: LiftedPoint, y: LiftedPoint,
                  mesh=256, stencil=12, length_hint=None, margin=1.5):
    """Shortest mesh-path length between two mesh-aligned lifted points.

    The region is the set of copies inside the developing-plane ellipse
    with foci at the endpoints and major axis length_hint + margin; a
    too-small hint makes the oracle overestimate, never underestimate.
    """
    phi = frame.phi
    xd = phi @ x.dev()
    yd = phi @ y.dev()
    if length_hint is None:
        length_hint = 2.0 * float(np.linalg.norm(xd - yd)) + 2.0
    copies = []
    for c in range(patch.n_copies):
        ctr = phi @ (np.asarray(patch.dev[c], dtype=float) + 0.5)
        if (np.linalg.norm(ctr - xd) + np.linalg.norm(ctr - yd)
                <= length_hint + margin):
            copies.append(c)
    region = MeshRegion(patch, frame, copies, mesh)
    return region.shortest(region.node_of(x), region.node_of(y),
                           stencil=stencil)
