"""Lifts of surface maps to universal-cover patches.

The distinguished lift of an affine automorphism is pinned by a fixed
base point: the image of a lifted point is computed by mapping a path
from the base point through the recutting table (affine with constant
derivative in developed coordinates) and tracing the image segments
through the patch.  Identity-isotopic perturbations lift by tracing their
surface displacement vector from the point itself; that lift commutes
with every covering translation.
"""

import numpy as np

from .cover import LiftedPoint, Patch, VertexHit, trace_segment
from .origami import DIRVEC, Origami
from .veech import AffineAutomorphism


def surface_trace(origami: Origami, s, pos, vec, max_steps=1000):
    """Straight displacement on the surface itself (no cover bookkeeping)."""
    eps = 1e-12
    px, py = float(pos[0]), float(pos[1])
    vx, vy = float(vec[0]), float(vec[1])
    for _ in range(max_steps):
        tx = np.inf
        if vx > eps:
            tx = (1.0 - px) / vx
        elif vx < -eps:
            tx = -px / vx
        ty = np.inf
        if vy > eps:
            ty = (1.0 - py) / vy
        elif vy < -eps:
            ty = -py / vy
        t = min(tx, ty, 1.0)
        qx, qy = px + t * vx, py + t * vy
        if t >= 1.0 - 1e-15:
            return s, (qx, qy)
        if min(tx, ty) < np.inf and abs(tx - ty) < eps:
            raise VertexHit("surface trace hits a corner")
        if tx < ty:
            d = 0 if vx > 0 else 2
            crossing = qy
        else:
            d = 1 if vy > 0 else 3
            crossing = qx
        if crossing < eps or crossing > 1.0 - eps:
            raise VertexHit("surface trace grazes a corner")
        s = origami.neighbor(s, d)
        dv = DIRVEC[d]
        px, py = qx - dv[0], qy - dv[1]
        vx, vy = (1.0 - t) * vx, (1.0 - t) * vy
    raise RuntimeError("surface trace exceeded step limit")


class LiftedAutomorphism:
    """Distinguished lift of an affine automorphism fixing a base point."""

    def __init__(self, patch: Patch, auto: AffineAutomorphism,
                 base: LiftedPoint):
        s, u, v = base.surface_point()
        s2, u2, v2 = auto.apply_surface(s, u, v)
        if not (s2 == s and abs(u2 - u) < 1e-12 and abs(v2 - v) < 1e-12):
            raise ValueError("base point is not fixed by the automorphism")
        self.patch = patch
        self.auto = auto
        self.base = base
        self.mat = auto.matrix()
        bd = base.dev()
        self.c0 = bd - self.mat @ bd

    def dev_image(self, dev):
        return self.mat @ np.asarray(dev, dtype=float) + self.c0

    def apply(self, x: LiftedPoint, _jitter=0) -> LiftedPoint:
        """A(x): trace the image of the tree path from the base point."""
        patch = self.patch
        waypoints = self._path_waypoints(x, _jitter)
        cur_copy = self.base.copy
        cur_pos = (self.base.u, self.base.v)
        try:
            for copy, p, q in waypoints:
                seg = np.array([q[0] - p[0], q[1] - p[1]])
                img_vec = self.mat @ seg
                cur_copy, cur_pos = trace_segment(patch, cur_copy, cur_pos,
                                                  img_vec)
        except VertexHit:
            if _jitter >= 6:
                raise
            return self.apply(x, _jitter + 1)
        out = LiftedPoint(patch, cur_copy, cur_pos[0], cur_pos[1],
                          canonicalize=False)
        want = self.dev_image(x.dev())
        got = out.dev()
        assert np.linalg.norm(got - want) < 1e-8, \
            "lift disagrees with the developed affine image"
        return out

    def _path_waypoints(self, x: LiftedPoint, jitter):
        """Per-copy straight pieces of a path base -> x along the word tree."""
        patch = self.patch
        word_b = patch.word(self.base.copy)
        word_x = patch.word(x.copy)
        # common prefix cancels: path climbs from base copy to the junction
        # and back down; using dev midpoints of the shared edges
        k = 0
        while k < len(word_b) and k < len(word_x) and word_b[k] == word_x[k]:
            k += 1
        copies = [self.base.copy]
        for _ in range(len(word_b) - k):
            copies.append(patch.parent[copies[-1]])
        down = []
        c = x.copy
        for _ in range(len(word_x) - k):
            down.append(c)
            c = patch.parent[c]
        copies.extend(reversed(down))

        t = 0.5 + 0.07 * (((jitter * 2654435761) % 97) / 97.0 - 0.5) \
            + 0.013 * jitter
        waypoints = []
        prev_pt = (self.base.u, self.base.v)
        for a, b in zip(copies, copies[1:]):
            d = next(dd for dd in range(4) if patch.nbr[a][dd] == b)
            # crossing point on the shared edge, in a's coordinates
            if d == 0:
                cross_a, cross_b = (1.0, t), (0.0, t)
            elif d == 2:
                cross_a, cross_b = (0.0, t), (1.0, t)
            elif d == 1:
                cross_a, cross_b = (t, 1.0), (t, 0.0)
            else:
                cross_a, cross_b = (t, 0.0), (t, 1.0)
            waypoints.append((a, prev_pt, cross_a))
            prev_pt = cross_b
        waypoints.append((copies[-1], prev_pt, (x.u, x.v)))
        return waypoints


class LiftedDisplacement:
    """Identity lift of an identity-isotopic perturbation.

    The perturbation supplies a developed displacement vector per surface
    point; the lift traces that vector from the lifted point.  Same
    displacement in every deck translate, hence commutes with all of them.
    """

    def __init__(self, patch: Patch, displacement_fn, inverse_fn=None):
        self.patch = patch
        self.displacement_fn = displacement_fn
        self.inverse_fn = inverse_fn

    def apply(self, x: LiftedPoint) -> LiftedPoint:
        d = self.displacement_fn(x.surface_point())
        if abs(d[0]) < 1e-15 and abs(d[1]) < 1e-15:
            return x
        c, p = trace_segment(self.patch, x.copy, (x.u, x.v), d)
        return LiftedPoint(self.patch, c, p[0], p[1], canonicalize=False)

    def apply_inverse(self, x: LiftedPoint) -> LiftedPoint:
        if self.inverse_fn is None:
            raise NotImplementedError("no inverse displacement supplied")
        d = self.inverse_fn(x.surface_point())
        if abs(d[0]) < 1e-15 and abs(d[1]) < 1e-15:
            return x
        c, p = trace_segment(self.patch, x.copy, (x.u, x.v), d)
        return LiftedPoint(self.patch, c, p[0], p[1], canonicalize=False)


class DiskChart:
    """Embedded developed chart around a lifted point, away from cones.

    Stores the copies whose closed squares meet the disk of the given
    radius around the center; surface points located in the disk get
    unique chart coordinates (vector from the center).
    """

    def __init__(self, patch: Patch, center: LiftedPoint, radius):
        self.patch = patch
        self.center = center
        self.radius = float(radius)
        c0 = center.dev()
        copies = {}
        stack = [center.copy]
        seen = {center.copy}
        while stack:
            c = stack.pop()
            dev = np.asarray(patch.dev[c], dtype=float)
            # distance from the disk center to the closed unit square
            gap = np.maximum(dev - c0, 0.0) + np.maximum(c0 - (dev + 1.0), 0.0)
            if np.hypot(gap[0], gap[1]) > self.radius:
                continue
            copies[c] = dev - c0
            for d in range(4):
                n = patch.step(c, d) if patch.growable else patch.nbr[c][d]
                if n >= 0 and n not in seen:
                    seen.add(n)
                    stack.append(n)
        self.offsets = copies
        # embeddedness: a surface square may appear in several chart copies
        # only if their acceptance regions are disjoint; radius < 1/2 of the
        # systole guarantees it, and lookups assert uniqueness anyway.

    def coords(self, surface_point):
        """Chart coordinates of a surface point, or None if outside."""
        s, u, v = surface_point
        hits = []
        for c, off in self.offsets.items():
            if self.patch.sq[c] != s:
                continue
            pos = off + np.array([u, v])
            if np.hypot(pos[0], pos[1]) <= self.radius:
                hits.append(pos)
        if not hits:
            return None
        assert len(hits) == 1, "disk chart is not embedded"
        return hits[0]

    def contains_cone(self):
        for c in self.offsets:
            for corner in range(4):
                if self.patch.vertex_multiplicity(c, corner) >= 2:
                    off = self.offsets[c]
                    from .origami import CORNER_OFFSET
                    pos = off + np.array(CORNER_OFFSET[corner], dtype=float)
                    if np.hypot(pos[0], pos[1]) < self.radius:
                        return True
        return False
