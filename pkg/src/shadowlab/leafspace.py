"""Leaf spaces of the invariant foliations, via representatives.

A leaf point is a lifted point remembered as a representative of the
stable (side "s") or unstable (side "u") leaf through it.  The leaf-space
metric is the transverse variation of the geodesic between
representatives: d_u between stable leaves, d_s between unstable ones.
Points of the metric completion are carried as finite Cauchy term
sequences with a certified tail bound; comparisons between them are
interval-valued.
"""

from dataclasses import dataclass, field

import numpy as np

from .cover import LiftedPoint, Patch, VertexHit, trace_segment
from .geodesic import Frame, geodesic
from .intervals import Iv


class FixtureUnavailable(RuntimeError):
    pass


@dataclass(frozen=True)
class LeafPoint:
    rep: LiftedPoint
    side: str  # "s": stable leaf, distances in d_u; "u": unstable, d_s

    def __post_init__(self):
        if self.side not in ("s", "u"):
            raise ValueError("side must be 's' or 'u'")


def project(x: LiftedPoint, side) -> LeafPoint:
    return LeafPoint(rep=x, side=side)


def leaf_distance(patch: Patch, frame: Frame, a: LeafPoint, b: LeafPoint):
    if a.side != b.side:
        raise ValueError("leaf points on different sides")
    g = geodesic(patch, frame, a.rep, b.rep)
    return g.d_u if a.side == "s" else g.d_s


def slide_representative(patch: Patch, frame: Frame, L: LeafPoint, dist):
    """Move the representative along its own leaf by the given arc length."""
    hm_dir = _leaf_direction(frame, L.side)
    c, p = trace_segment(patch, L.rep.copy, (L.rep.u, L.rep.v), dist * hm_dir)
    return LeafPoint(rep=LiftedPoint(patch, c, p[0], p[1], canonicalize=False),
                     side=L.side)


def _leaf_direction(frame: Frame, side):
    # stable leaves run along the kernel of eta_u and vice versa
    eta = frame.eta_u if side == "s" else frame.eta_s
    d = np.array([-eta[1], eta[0]])
    return d / np.linalg.norm(d)


@dataclass
class CompletionPoint:
    """Cauchy sequence in a leaf space with a certified tail bound."""

    terms: list                 # LeafPoint per iteration step
    tail_bound: float
    step_dists: list = field(default_factory=list)

    @property
    def last(self):
        return self.terms[-1]

    @property
    def side(self):
        return self.terms[-1].side


def completion_distance(patch, frame, a: CompletionPoint,
                        b: CompletionPoint) -> Iv:
    """Interval-valued distance between completed leaf-space points."""
    center = leaf_distance(patch, frame, a.last, b.last)
    return Iv.pm(center, a.tail_bound + b.tail_bound).clamp_nonneg()


def completion_to_leaf_distance(patch, frame, a: CompletionPoint,
                                L: LeafPoint) -> Iv:
    center = leaf_distance(patch, frame, a.last, L)
    return Iv.pm(center, a.tail_bound).clamp_nonneg()


# -- non-convergent Cauchy fixture -------------------------------------------


@dataclass
class CauchyFixture:
    leaf_points: list       # LeafPoint per stage (stable side)
    cone_lifts: list        # (copy, corner) anchors of the chosen cones
    deltas: list            # achieved transverse gaps, delta_i < eps_i
    eta_u_values: list      # transverse coordinates of the chosen cones
    crossings: list         # developed coordinates of ray/prong crossings


def _prong_start(patch, c, corner, direction):
    """Ring square whose corner wedge contains the direction; start point."""
    chain = patch.materialize_ring(c, corner) if patch.growable \
        else patch.ring(c, corner)[0]
    from .origami import CORNER_OFFSET
    eps = 1e-9
    for cc, kk in chain:
        ox, oy = CORNER_OFFSET[kk]
        # wedge of the square at this corner, in local coordinates
        sx = 1.0 if ox == 0 else -1.0
        sy = 1.0 if oy == 0 else -1.0
        if direction[0] * sx > eps and direction[1] * sy > eps:
            return cc, (float(ox), float(oy))
    raise FixtureUnavailable("no wedge contains the prong direction")


def _trace_ray(patch, copy, pos, direction, length, widen=True):
    """Trace a leaf ray, growing a width-one tube; returns its segments.

    Leaf rays in an eigendirection never hit a cone (that would be a
    saddle connection, impossible for the invariant foliations); a
    floating-point exact hit just truncates the ray.
    """
    segs = []
    c = copy
    p = pos
    step = 1.0
    travelled = 0.0
    while travelled < length:
        d = min(step, length - travelled)
        try:
            c2, p2, pieces = trace_segment(patch, c, p, d * direction,
                                           collect=True)
        except VertexHit:
            break
        segs.extend(pieces)
        if widen and patch.growable:
            for cc, _, _ in pieces:
                for corner in range(4):
                    patch.materialize_ring(cc, corner)
        c, p = c2, p2
        travelled += d
    return segs, (c, p)


def cauchy_fixture(patch: Patch, frame: Frame, eps_list, ray_length=60.0,
                   sign=1.0):
    """Stable-leaf Cauchy sequence with prescribed transverse gaps.

    Starting from a cone lift, follow a stable ray; pick the first cone
    lift (in increasing transverse distance) whose unstable prong crosses
    the ray within the requested gap; continue from it into the far
    complementary side (transverse coordinate keeps moving in one
    direction, so leaf distances telescope).  Requires a growable patch.
    """
    cones = patch.cone_lifts(closed_only=False)
    if not cones:
        raise FixtureUnavailable("surface has no cone points")
    e_s = _leaf_direction(frame, "s")
    e_u = _leaf_direction(frame, "u")
    eta_u = frame.eta_u

    # start at the cone lift nearest the base copy
    c0, k0, dev0, _, _ = min(cones, key=lambda t: (abs(t[2][0]) + abs(t[2][1])))
    cur = (c0, k0)
    cur_eta = float(eta_u @ np.asarray(dev0, dtype=float))
    direction = float(sign)

    leaf_points = []
    anchors = [cur]
    deltas = []
    etas = [cur_eta]
    crossings = []
    start_copy, start_pos = _prong_start(patch, c0, k0, e_s)
    leaf_points.append(LeafPoint(
        rep=LiftedPoint(patch, start_copy, start_pos[0] + 1e-12 * e_s[0],
                        start_pos[1] + 1e-12 * e_s[1], canonicalize=False),
        side="s"))

    for eps in eps_list:
        found = None
        for ray_sign in (1.0, -1.0):
            try:
                sc, sp = _prong_start(patch, *cur, ray_sign * e_s)
            except FixtureUnavailable:
                continue
            segs, _ = _trace_ray(patch, sc,
                                 (sp[0] + 1e-9 * ray_sign * e_s[0],
                                  sp[1] + 1e-9 * ray_sign * e_s[1]),
                                 ray_sign * e_s, ray_length)
            cand = _find_crossing_candidate(patch, eta_u, e_u, segs, cur_eta,
                                            eps, direction)
            if cand is not None:
                found = cand
                break
        if found is None:
            raise FixtureUnavailable(
                f"no cone lift within transverse gap {eps} along the ray")
        (cc, ck), gap, z_dev = found
        deltas.append(gap)
        anchors.append((cc, ck))
        cur = (cc, ck)
        cur_eta = cur_eta + direction * gap
        etas.append(cur_eta)
        crossings.append(z_dev)
        rep_copy, rep_pos = _prong_start(patch, cc, ck, e_s)
        leaf_points.append(LeafPoint(
            rep=LiftedPoint(patch, rep_copy,
                            rep_pos[0] + 1e-6 * e_s[0],
                            rep_pos[1] + 1e-6 * e_s[1], canonicalize=False),
            side="s"))
    return CauchyFixture(leaf_points=leaf_points, cone_lifts=anchors,
                         deltas=deltas, eta_u_values=etas,
                         crossings=crossings)


def _segment_cross(p1, p2, q1, q2):
    """Intersection point of two 2D segments, or None."""
    d1 = (p2[0] - p1[0], p2[1] - p1[1])
    d2 = (q2[0] - q1[0], q2[1] - q1[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(den) < 1e-15:
        return None
    rx, ry = q1[0] - p1[0], q1[1] - p1[1]
    t = (rx * d2[1] - ry * d2[0]) / den
    s = (rx * d1[1] - ry * d1[0]) / den
    if -1e-12 <= t <= 1 + 1e-12 and -1e-12 <= s <= 1 + 1e-12:
        return (p1[0] + t * d1[0], p1[1] + t * d1[1])
    return None


def _find_crossing_candidate(patch, eta_u, e_u, ray_segs, cur_eta, eps,
                             direction):
    """Smallest-gap cone lift near the ray whose unstable prong crosses it.

    Candidates are vertices of the squares the ray visits; the crossing is
    verified by tracing the short unstable prong toward the ray and
    intersecting it with the ray's pieces square by square.
    """
    ray_by_copy = {}
    for cc, a, b in ray_segs:
        ray_by_copy.setdefault(cc, []).append((a, b))
    candidates = []
    seen = set()
    for cc, _, _ in ray_segs:
        for corner in range(4):
            if patch.vertex_multiplicity(cc, corner) < 2:
                continue
            key = patch.vertex_key(cc, corner)
            if key in seen:
                continue
            seen.add(key)
            vdev = np.asarray(patch.vertex_dev(cc, corner), dtype=float)
            gap = direction * (float(eta_u @ vdev) - cur_eta)
            if 1e-9 < gap < eps:
                candidates.append((gap, key))
    candidates.sort()
    for gap, key in candidates:
        # prong direction moving the transverse coordinate toward the ray:
        # the candidate sits at cur_eta + direction * gap, so the prong
        # must change eta_u with sign -direction
        prong_dir = np.array(e_u, dtype=float)
        if float(eta_u @ prong_dir) * (-direction) < 0:
            prong_dir = -prong_dir
        length = gap / abs(float(eta_u @ prong_dir))
        chain = patch.materialize_ring(*key) if patch.growable \
            else patch.ring(*key)[0]
        from .origami import CORNER_OFFSET
        eps_w = 1e-9
        for pc, pk in chain:
            ox, oy = CORNER_OFFSET[pk]
            sx = 1.0 if ox == 0 else -1.0
            sy = 1.0 if oy == 0 else -1.0
            if not (prong_dir[0] * sx > eps_w and prong_dir[1] * sy > eps_w):
                continue
            start = (float(ox) + 1e-9 * prong_dir[0],
                     float(oy) + 1e-9 * prong_dir[1])
            try:
                _, _, pieces = trace_segment(
                    patch, pc, start, 1.05 * length * prong_dir, collect=True)
            except VertexHit:
                continue
            for qc, qa, qb in pieces:
                for (ra, rb) in ray_by_copy.get(qc, ()):
                    z = _segment_cross(qa, qb, ra, rb)
                    if z is not None:
                        zdev = (patch.dev[qc][0] + z[0],
                                patch.dev[qc][1] + z[1])
                        return key, gap, zdev
    return None
