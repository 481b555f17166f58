"""Flat geodesics in a patch via corridor unfolding and funnel tightening.

A geodesic between two lifted points is a polyline, straight inside
charts, whose interior vertices are cone lifts where both side angles are
at least pi.  The algorithm: take any square corridor joining the points,
unfold it isometrically (gluings are translations, so copies unfold to
integer offsets), run the funnel algorithm through the portal sequence,
then check every bend: the corridor-side angle comes from the unfolding,
the far-side angle is the cone angle minus it.  A bend with far angle
below pi admits a shortcut, so the corridor is rerouted around that vertex
through the complementary vertex ring and the tightening repeats.  Length
strictly decreases, so the loop terminates at the geodesic (unique here:
all vertex angles are >= 2 pi, so patches are locally CAT(0)).

Lengths are measured in the foliation-adapted flat metric: a segment with
developed vector w contributes |eta_s . w| to the stable transverse
variation d_s, |eta_u . w| to d_u, and sqrt of the square sum to d.  For
the symmetric matrices used by the shipped systems this is the Euclidean
metric of the unit squares.
"""

from dataclasses import dataclass

import numpy as np

from .cover import LiftedPoint, Patch, PatchExhausted
from .origami import NE, NW, SE, SW, D, L, R, U

# portal endpoint corners of the near copy, per crossing direction
_PORTAL_LEFT = {R: NE, U: NW, L: SW, D: SE}
_PORTAL_RIGHT = {R: SE, U: NE, L: NW, D: SW}
_CORNER_XY = {SW: (0.0, 0.0), SE: (1.0, 0.0), NE: (1.0, 1.0), NW: (0.0, 1.0)}

_ANGLE_TOL = 1e-9


class GeodesicError(RuntimeError):
    pass


@dataclass(frozen=True)
class Frame:
    """Covector frame defining the transverse measures and the flat metric."""

    eta_u: np.ndarray
    eta_s: np.ndarray

    @staticmethod
    def from_matrix(hm):
        return Frame(eta_u=np.asarray(hm.eta_u, float),
                     eta_s=np.asarray(hm.eta_s, float))

    @staticmethod
    def axes():
        return Frame(eta_u=np.array([0.0, 1.0]), eta_s=np.array([1.0, 0.0]))

    @property
    def phi(self):
        """Chart transform to coordinates where the flat metric is Euclidean."""
        m = np.vstack([self.eta_s, self.eta_u])
        if np.linalg.det(m) < 0:
            m = np.vstack([-self.eta_s, self.eta_u])
        return m

    def seg_lengths(self, w):
        ds = abs(float(self.eta_s @ w))
        du = abs(float(self.eta_u @ w))
        return np.hypot(ds, du), ds, du


@dataclass
class Geodesic:
    length: float
    d_s: float
    d_u: float
    points: list          # developed coordinates of the polyline vertices
    bends: list           # (copy, corner) per interior vertex
    reroutes: int


def _corridor_bfs(patch: Patch, ca, cb):
    if ca == cb:
        return [ca]
    prev = {ca: (-1, -1)}
    frontier = [ca]
    while frontier:
        nxt = []
        for c in frontier:
            for d in (R, U, L, D):
                n = patch.nbr[c][d]
                if n >= 0 and n not in prev:
                    prev[n] = (c, d)
                    if n == cb:
                        path = [cb]
                        cur = cb
                        while prev[cur][0] >= 0:
                            cur = prev[cur][0]
                            path.append(cur)
                        path.reverse()
                        return path
                    nxt.append(n)
        frontier = nxt
    raise GeodesicError("endpoints not connected inside the patch")


def _corridor_dirs(patch, corridor):
    dirs = []
    for a, b in zip(corridor, corridor[1:]):
        for d in (R, U, L, D):
            if patch.nbr[a][d] == b:
                dirs.append(d)
                break
        else:
            raise GeodesicError("corridor not edge-connected")
    return dirs


def _unfold(dirs):
    offs = [(0, 0)]
    x = y = 0
    for d in dirs:
        if d == R:
            x += 1
        elif d == U:
            y += 1
        elif d == L:
            x -= 1
        else:
            y -= 1
        offs.append((x, y))
    return offs


def _portals(dirs, offs):
    left, right = [], []
    for i, d in enumerate(dirs):
        ox, oy = offs[i]
        lx, ly = _CORNER_XY[_PORTAL_LEFT[d]]
        rx, ry = _CORNER_XY[_PORTAL_RIGHT[d]]
        left.append((ox + lx, oy + ly))
        right.append((ox + rx, oy + ry))
    return left, right


def _tri2(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _veq(a, b):
    return abs(a[0] - b[0]) < 1e-12 and abs(a[1] - b[1]) < 1e-12


def _funnel(start, end, pl, pr):
    """Shortest path through the portal sequence (simple stupid funnel).

    Returns a list of (point, portal_index, side) with side -1 for the
    endpoints, 0 for left-portal bends, 1 for right-portal bends.
    """
    portals = list(zip(pl, pr)) + [(end, end)]
    out = [(start, -1, -1)]
    apex, ai = start, -1
    left, li = start, -1
    right, ri = start, -1
    i = 0
    guard = 0
    while i < len(portals):
        guard += 1
        if guard > 40 * (len(portals) + 2) ** 2 + 100:
            raise GeodesicError("funnel failed to converge")
        plp, prp = portals[i]
        # tighten the right side: new point left-of-or-on the right ray
        if _tri2(apex, right, prp) >= -1e-12:
            if _veq(apex, right) or _tri2(apex, left, prp) < 1e-12:
                right, ri = prp, i
            else:
                # right swept past the left boundary: emit a left bend
                out.append((left, li, 0))
                apex, ai = left, li
                right, ri = apex, ai
                left, li = apex, ai
                i = ai + 1
                continue
        # tighten the left side: new point right-of-or-on the left ray
        if _tri2(apex, left, plp) <= 1e-12:
            if _veq(apex, left) or _tri2(apex, right, plp) > -1e-12:
                left, li = plp, i
            else:
                out.append((right, ri, 1))
                apex, ai = right, ri
                left, li = apex, ai
                right, ri = apex, ai
                i = ai + 1
                continue
        i += 1
    out.append((end, len(pl), -1))
    # drop zero-length duplicates
    dedup = [out[0]]
    for item in out[1:]:
        if not _veq(item[0], dedup[-1][0]):
            dedup.append(item)
    return dedup


def _angle(a, b):
    """Unsigned angle between direction vectors (each pair within a wedge)."""
    cross = a[0] * b[1] - a[1] * b[0]
    dot = a[0] * b[0] + a[1] * b[1]
    return abs(np.arctan2(cross, dot))


def _corner_of(offset, point):
    dx, dy = point[0] - offset[0], point[1] - offset[1]
    for corner, (cx, cy) in _CORNER_XY.items():
        if abs(dx - cx) < 1e-9 and abs(dy - cy) < 1e-9:
            return corner
    raise GeodesicError("bend point is not a corner of its copy")


def geodesic(patch: Patch, frame: Frame, x: LiftedPoint, y: LiftedPoint,
             max_reroutes=400) -> Geodesic:
    """Geodesic polyline from x to y with (d, d_s, d_u) lengths."""
    phi = frame.phi
    corridor = _corridor_bfs(patch, x.copy, y.copy)
    reroutes = 0
    while True:
        dirs = _corridor_dirs(patch, corridor)
        offs = _unfold(dirs)
        pl, pr = _portals(dirs, offs)
        start = (x.u, x.v)
        end = (y.u + offs[-1][0], y.v + offs[-1][1])
        start_t = tuple(phi @ np.array(start))
        end_t = tuple(phi @ np.array(end))
        pl_t = [tuple(phi @ np.array(p)) for p in pl]
        pr_t = [tuple(phi @ np.array(p)) for p in pr]
        path_t = _funnel(start_t, end_t, pl_t, pr_t)

        offending = None
        for j in range(1, len(path_t) - 1):
            pt, idx, side = path_t[j]
            ends = pl if side == 0 else pr
            others = pr if side == 0 else pl
            ends_t = pl_t if side == 0 else pr_t
            others_t = pr_t if side == 0 else pl_t
            # contiguous run of portals sharing this endpoint
            i0 = idx
            while i0 > 0 and _veq(ends_t[i0 - 1], pt):
                i0 -= 1
            i1 = idx
            while i1 + 1 < len(ends_t) and _veq(ends_t[i1 + 1], pt):
                i1 += 1
            prev_t = np.array(path_t[j - 1][0])
            next_t = np.array(path_t[j + 1][0])
            p_arr = np.array(pt)
            rays = [prev_t - p_arr]
            for m in range(i0, i1 + 1):
                rays.append(np.array(others_t[m]) - p_arr)
            rays.append(next_t - p_arr)
            theta_cs = sum(_angle(rays[m], rays[m + 1])
                           for m in range(len(rays) - 1))
            copy0 = corridor[i0]
            corner = _corner_of(offs[i0], ends[i0])
            k_v = patch.vertex_multiplicity(copy0, corner)
            theta_other = 2.0 * np.pi * k_v - theta_cs
            if theta_other < np.pi - _ANGLE_TOL:
                offending = (i0, i1, copy0, corner)
                break
            if theta_cs < np.pi - _ANGLE_TOL:
                raise GeodesicError("funnel produced a non-taut bend")

        if offending is None:
            return _assemble(patch, frame, corridor, offs, path_t, phi,
                             start, end, reroutes, patch.dev[x.copy])

        i0, i1, copy0, corner = offending
        reroutes += 1
        if reroutes > max_reroutes:
            raise GeodesicError("reroute limit exceeded")
        corridor = _reroute(patch, corridor, i0, i1, copy0, corner)


def _reroute(patch, corridor, i0, i1, copy0, corner):
    """Swap the corridor fan around a vertex for the complementary ring arc."""
    if patch.growable:
        chain = patch.materialize_ring(copy0, corner)
        closed = True
    else:
        chain, closed = patch.ring(copy0, corner)
    if not closed:
        raise PatchExhausted(
            "geodesic tightening needs squares outside the patch",
            required_radius=patch.radius + max(2, patch.radius // 2))
    fan = corridor[i0:i1 + 2]
    ring_copies = [c for c, _ in chain]
    # find fan as a cyclic arc (forward or backward) in the ring
    size = len(ring_copies)
    pos = None
    step = 0
    for p in range(size):
        if ring_copies[p] != fan[0]:
            continue
        if all(ring_copies[(p + q) % size] == fan[q] for q in range(len(fan))):
            pos, step = p, 1
            break
        if all(ring_copies[(p - q) % size] == fan[q] for q in range(len(fan))):
            pos, step = p, -1
            break
    if pos is None:
        raise GeodesicError("corridor fan not found in vertex ring")
    # complementary arc from fan end back to fan start, same rotation sense
    end_pos = (pos + step * (len(fan) - 1)) % size
    middle = []
    q = end_pos
    while True:
        q = (q + step) % size
        if q == pos:
            break
        middle.append(ring_copies[q])
    return corridor[:i0 + 1] + middle + corridor[i1 + 1:]


def _assemble(patch, frame, corridor, offs, path_t, phi, start, end,
              reroutes, dev0):
    phi_inv = np.linalg.inv(phi)
    pts = [tuple(phi_inv @ np.array(p)) for p, _, _ in path_t]
    pts[0] = start
    pts[-1] = end
    d = ds = du = 0.0
    for a, b in zip(pts, pts[1:]):
        w = np.array([b[0] - a[0], b[1] - a[1]])
        sd, sds, sdu = frame.seg_lengths(w)
        d += sd
        ds += sds
        du += sdu
    bends = []
    for p, idx, side in path_t[1:-1]:
        loc = phi_inv @ np.array(p)
        bends.append((corridor[idx], _corner_of(offs[idx], loc)))
    # report polyline in absolute developing coordinates
    pts_abs = [(p[0] + dev0[0], p[1] + dev0[1]) for p in pts]
    return Geodesic(length=d, d_s=ds, d_u=du, points=pts_abs, bends=bends,
                    reroutes=reroutes)


def leaf_distance_points(patch, frame, x, y, side):
    """Transverse distance between the leaves through x and y.

    side "s": distance d_u between stable leaves; side "u": d_s between
    unstable leaves.
    """
    g = geodesic(patch, frame, x, y)
    return g.d_u if side == "s" else g.d_s
