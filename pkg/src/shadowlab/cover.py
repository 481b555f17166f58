"""Finite patches of the universal cover of a square-tiled surface.

A patch is a square complex built from copies of the surface's squares,
grown outward from a base copy in breadth-first layers.  The one
nontrivial rule is vertex-ring closure: whenever the corners glued around
a lifted vertex reach the full count 4k (total angle 2 pi k), the two
extreme edges are glued.  Closure runs to quiescence after every gluing,
so square copies are only ever created across genuinely open edges.  All
gluings are translations; every copy carries its developing-map offset
(integer position of its lower-left corner) and its breadth-first word.

Interior vertices therefore have complete rings and the complex is a
combinatorial disk, which `audit` certifies (Euler characteristic 1 and a
single boundary cycle) together with gluing/developing consistency.
"""

import numpy as np

from .origami import (CORNER_OFFSET, DIRVEC, NE, NW, OPP, SE, SW, D, L,
                      Origami, R, U)

# ccw rotation around the vertex at a given corner: edge crossed, next corner
_CCW_EDGE = {NE: R, NW: U, SW: L, SE: D}
_CCW_NEXT = {NE: NW, NW: SW, SW: SE, SE: NE}
# cw rotation: edge crossed, previous corner
_CW_EDGE = {NE: U, NW: L, SW: D, SE: R}
_CW_NEXT = {NE: SE, SE: SW, SW: NW, NW: NE}
# corners at the two endpoints of each edge direction
_EDGE_CORNERS = {R: (SE, NE), U: (NE, NW), L: (NW, SW), D: (SW, SE)}


class PatchExhausted(RuntimeError):
    """A construction left the patch; carries the word radius to retry with."""

    def __init__(self, msg, required_radius=None):
        super().__init__(msg)
        self.required_radius = required_radius


class PatchTooLarge(RuntimeError):
    pass


class VertexHit(RuntimeError):
    """A traced segment ran into a vertex of the square complex."""


class Patch:
    def __init__(self, origami: Origami, radius, cap=300_000, base_square=0,
                 growable=False):
        if radius < 1:
            raise ValueError("radius must be >= 1")
        self.origami = origami
        self.radius = int(radius)
        self.cap = int(cap)
        self.base_square = int(base_square)
        self.growable = bool(growable)
        self.sq = [self.base_square]
        self.nbr = [[-1, -1, -1, -1]]
        self.dev = [(0, 0)]
        self.parent = [-1]
        self.pdir = [-1]
        self.depth = [0]
        self._build()

    @property
    def n_copies(self):
        return len(self.sq)

    # -- construction -------------------------------------------------------

    def _new_copy(self, square, dev, parent, d):
        if len(self.sq) >= self.cap:
            raise PatchTooLarge(
                f"patch exceeded cap {self.cap} at radius {self.radius}")
        self.sq.append(square)
        self.nbr.append([-1, -1, -1, -1])
        self.dev.append(dev)
        self.parent.append(parent)
        self.pdir.append(d)
        self.depth.append(self.depth[parent] + 1)
        return len(self.sq) - 1

    def _glue(self, a, d, b):
        """Glue edge d of a to edge OPP[d] of b, then cascade ring closures."""
        stack = [(a, d, b)]
        while stack:
            a, d, b = stack.pop()
            od = OPP[d]
            if self.nbr[a][d] == b and self.nbr[b][od] == a:
                continue
            assert self.nbr[a][d] == -1 and self.nbr[b][od] == -1, \
                "conflicting gluing"
            assert self.origami.neighbor(self.sq[a], d) == self.sq[b]
            da, db = self.dev[a], self.dev[b]
            vec = DIRVEC[d]
            assert (da[0] + vec[0], da[1] + vec[1]) == db, "developing mismatch"
            self.nbr[a][d] = b
            self.nbr[b][od] = a
            for corner in _EDGE_CORNERS[d]:
                closure = self._ring_closure(a, corner)
                if closure is not None:
                    stack.append(closure)

    def _ring_closure(self, c, corner):
        """Detect a saturated open ring; returns the forced gluing or None."""
        k = self.origami.corner_multiplicity(self.sq[c], corner)
        full = 4 * k
        # walk clockwise to the start of the chain
        sc, sk = c, corner
        count = 1
        while True:
            n = self.nbr[sc][_CW_EDGE[sk]]
            if n < 0:
                break
            sc, sk = n, _CW_NEXT[sk]
            count += 1
            if (sc, sk) == (c, corner):
                return None  # closed ring; consistency checked in audit
            assert count <= full, "over-saturated vertex ring"
        # walk counterclockwise to the end
        ec, ek = c, corner
        while True:
            n = self.nbr[ec][_CCW_EDGE[ek]]
            if n < 0:
                break
            ec, ek = n, _CCW_NEXT[ek]
            count += 1
            assert count <= full, "over-saturated vertex ring"
        if count == full:
            return (ec, _CCW_EDGE[ek], sc)
        return None

    def _build(self):
        i = 0
        while i < len(self.sq):
            c = i
            i += 1
            if self.depth[c] >= self.radius:
                continue
            for d in (R, U, L, D):
                if self.nbr[c][d] >= 0:
                    continue
                sq2 = self.origami.neighbor(self.sq[c], d)
                dev2 = (self.dev[c][0] + DIRVEC[d][0],
                        self.dev[c][1] + DIRVEC[d][1])
                b = self._new_copy(sq2, dev2, c, d)
                self._glue(c, d, b)

    # -- structure queries ----------------------------------------------------

    def step(self, c, d):
        n = self.nbr[c][d]
        if n < 0:
            if self.growable:
                return self._grow(c, d)
            raise PatchExhausted(
                f"copy {c} has no neighbor in direction {d}",
                required_radius=self.radius + max(1, self.radius // 2))
        return n

    def _grow(self, c, d):
        sq2 = self.origami.neighbor(self.sq[c], d)
        dev2 = (self.dev[c][0] + DIRVEC[d][0], self.dev[c][1] + DIRVEC[d][1])
        b = self._new_copy(sq2, dev2, c, d)
        self._glue(c, d, b)
        # closure may have been triggered; the slot is now filled
        return self.nbr[c][d]

    def materialize_ring(self, c, corner):
        """Grow the patch until the vertex at (c, corner) has a closed ring."""
        if not self.growable:
            chain, closed = self.ring(c, corner)
            if not closed:
                raise PatchExhausted(
                    "vertex ring incomplete in a fixed patch",
                    required_radius=self.radius + 2)
            return chain
        guard = 0
        while True:
            chain, closed = self.ring(c, corner)
            if closed:
                return chain
            guard += 1
            assert guard <= 4 * self.vertex_multiplicity(c, corner) + 1
            ec, ek = chain[-1]
            self.step(ec, _CCW_EDGE[ek])

    def navigate(self, c, word):
        for d in word:
            c = self.step(c, d)
        return c

    def word(self, c):
        out = []
        while self.parent[c] >= 0:
            out.append(self.pdir[c])
            c = self.parent[c]
        out.reverse()
        return tuple(out)

    def ring(self, c, corner):
        """Corners around the vertex at (c, corner), ccw order.

        Returns (chain, closed).  For a closed ring the chain starts at
        (c, corner); for an open one it starts at the clockwise end.
        """
        full = 4 * self.vertex_multiplicity(c, corner)
        sc, sk = c, corner
        closed = False
        for _ in range(full):
            n = self.nbr[sc][_CW_EDGE[sk]]
            if n < 0:
                break
            sc, sk = n, _CW_NEXT[sk]
            if (sc, sk) == (c, corner):
                closed = True
                break
        if closed:
            chain = [(c, corner)]
            cc, ck = c, corner
            while True:
                cc, ck = self.nbr[cc][_CCW_EDGE[ck]], _CCW_NEXT[ck]
                if (cc, ck) == (c, corner):
                    return chain, True
                chain.append((cc, ck))
        chain = [(sc, sk)]
        cc, ck = sc, sk
        while True:
            n = self.nbr[cc][_CCW_EDGE[ck]]
            if n < 0:
                break
            cc, ck = n, _CCW_NEXT[ck]
            chain.append((cc, ck))
        return chain, False

    def vertex_multiplicity(self, c, corner):
        return self.origami.corner_multiplicity(self.sq[c], corner)

    def vertex_dev(self, c, corner):
        off = CORNER_OFFSET[corner]
        return (self.dev[c][0] + off[0], self.dev[c][1] + off[1])

    def vertex_key(self, c, corner):
        chain, _ = self.ring(c, corner)
        return min(chain)

    def cone_lifts(self, closed_only=True):
        """Deduplicated lifted cone points: (copy, corner, dev, k, closed)."""
        seen = set()
        out = []
        for c in range(self.n_copies):
            for corner in (SW, SE, NE, NW):
                k = self.vertex_multiplicity(c, corner)
                if k < 2:
                    continue
                chain, closed = self.ring(c, corner)
                key = min(chain)
                if key in seen:
                    continue
                seen.add(key)
                if closed or not closed_only:
                    out.append((key[0], key[1],
                                self.vertex_dev(key[0], key[1]), k, closed))
        out.sort()
        return out

    def interior_radius(self):
        """Word depth up to which every copy has complete neighborhoods."""
        return self.radius - 1

    # -- audits ---------------------------------------------------------------

    def audit(self):
        edges_glued = 0
        edges_open = 0
        for c in range(self.n_copies):
            for d in (R, U, L, D):
                n = self.nbr[c][d]
                if n < 0:
                    edges_open += 1
                    continue
                assert self.nbr[n][OPP[d]] == c, "gluing not involutive"
                assert self.origami.neighbor(self.sq[c], d) == self.sq[n]
                vec = DIRVEC[d]
                assert (self.dev[c][0] + vec[0], self.dev[c][1] + vec[1]) \
                    == self.dev[n], "developing mismatch"
                edges_glued += 1
        assert edges_glued % 2 == 0
        n_edges = edges_glued // 2 + edges_open

        verts = set()
        for c in range(self.n_copies):
            for corner in (SW, SE, NE, NW):
                chain, closed = self.ring(c, corner)
                full = 4 * self.vertex_multiplicity(c, corner)
                assert len(chain) <= full
                assert closed == (len(chain) == full), \
                    "ring saturation does not match closure"
                verts.add(min(chain))
        n_verts = len(verts)

        chi = n_verts - n_edges + self.n_copies
        assert chi == 1, f"patch is not a disk: chi = {chi}"

        # boundary must be one cycle: follow open edges around the rim
        boundary = set()
        for c in range(self.n_copies):
            for d in (R, U, L, D):
                if self.nbr[c][d] < 0:
                    boundary.add((c, d))
        cycles = 0
        remaining = set(boundary)
        while remaining:
            cycles += 1
            start = min(remaining)
            cur = start
            while True:
                remaining.discard(cur)
                c, d = cur
                # continue through the ccw endpoint vertex: the only other
                # open slot there is the clockwise end of its corner chain
                corner = _EDGE_CORNERS[d][1]
                chain, closed = self.ring(c, corner)
                assert not closed, "boundary edge endpoint has a closed ring"
                sc, sk = chain[0]
                cur = (sc, _CW_EDGE[sk])
                assert self.nbr[sc][_CW_EDGE[sk]] < 0
                if cur == start:
                    break
        assert cycles == 1, f"boundary has {cycles} cycles"

        # interior copies have full neighborhoods
        for c in range(self.n_copies):
            if self.depth[c] < self.radius:
                for d in (R, U, L, D):
                    assert self.nbr[c][d] >= 0, "interior copy with open edge"

        return {"copies": self.n_copies, "edges": n_edges,
                "vertices": n_verts, "chi": chi, "boundary_cycles": cycles,
                "boundary_edges": len(boundary)}


class LiftedPoint:
    """A point of the universal cover: a patch copy plus local coordinates.

    The copy determines the reduced edge-crossing word from the base copy;
    two lifted points are equal iff their copies coincide and their local
    coordinates agree (canonicalized across gluings on construction).
    """

    __slots__ = ("patch", "copy", "u", "v")

    def __init__(self, patch, copy, u, v, canonicalize=True):
        eps = 1e-13
        if canonicalize:
            if abs(u - 1.0) < eps:
                copy, u = patch.step(copy, R), 0.0
            if abs(v - 1.0) < eps:
                copy, v = patch.step(copy, U), 0.0
            if abs(u) < eps:
                u = 0.0
            if abs(v) < eps:
                v = 0.0
        self.patch = patch
        self.copy = int(copy)
        self.u = float(u)
        self.v = float(v)

    @property
    def square(self):
        return self.patch.sq[self.copy]

    @property
    def word(self):
        return self.patch.word(self.copy)

    def dev(self):
        d = self.patch.dev[self.copy]
        return np.array([d[0] + self.u, d[1] + self.v])

    def surface_point(self):
        return (self.square, self.u, self.v)

    def same_point(self, other, tol=1e-9):
        if self.copy == other.copy:
            return abs(self.u - other.u) < tol and abs(self.v - other.v) < tol
        # allow representations in adjacent copies across a shared edge
        return bool(np.linalg.norm(self.dev() - other.dev()) < tol
                    and _adjacent(self.patch, self.copy, other.copy))

    def __repr__(self):
        return f"LiftedPoint(copy={self.copy}, sq={self.square}, u={self.u:.6f}, v={self.v:.6f})"


def _adjacent(patch, a, b):
    return a == b or b in patch.nbr[a]


def free_reduce(word):
    """Cancel adjacent inverse crossings (R L, U D, ...)."""
    out = []
    for d in word:
        if out and out[-1] == OPP[d]:
            out.pop()
        else:
            out.append(d)
    return tuple(out)


def parse_word(text):
    """Parse a word like "RRUL" into direction indices."""
    table = {"R": R, "U": U, "L": L, "D": D}
    try:
        return tuple(table[ch] for ch in text.strip().upper())
    except KeyError as e:
        raise ValueError(f"bad word character in {text!r}") from e


def word_to_text(word):
    return "".join("RULD"[d] for d in word)


class DeckTransformation:
    """Covering translation given by an edge-crossing loop at the base square."""

    def __init__(self, patch: Patch, word):
        word = free_reduce(word)
        s = patch.base_square
        for d in word:
            s = patch.origami.neighbor(s, d)
        if s != patch.base_square:
            raise ValueError("word is not a loop at the base square")
        self.patch = patch
        self.word = word
        self.target = patch.navigate(0, word)

    def apply(self, x: LiftedPoint) -> LiftedPoint:
        c = self.patch.navigate(self.target, self.patch.word(x.copy))
        return LiftedPoint(self.patch, c, x.u, x.v, canonicalize=False)

    def compose_word(self, other):
        return free_reduce(self.word + other.word)


def trace_segment(patch: Patch, copy, pos, vec, collect=False, max_steps=20000):
    """Follow a straight developed segment through the patch.

    pos is a local position in the closed unit square of `copy`; vec is the
    developed displacement.  Returns (copy, end_pos) or, with collect=True,
    (copy, end_pos, segments) where segments is a list of
    (copy, p_start, p_end) pieces in local coordinates.  Raises VertexHit
    when the segment meets a corner of the complex (callers perturb or
    handle), PatchExhausted when it leaves the patch.
    """
    eps = 1e-12
    px, py = float(pos[0]), float(pos[1])
    vx, vy = float(vec[0]), float(vec[1])
    c = int(copy)
    segs = [] if collect else None
    remaining = 1.0
    for _ in range(max_steps):
        # exit parameter in units of the remaining vector
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
        if collect:
            segs.append((c, (px, py), (qx, qy)))
        if t >= 1.0 - 1e-15:  # segment ends inside this square
            out = (c, (qx, qy))
            return (*out, segs) if collect else out
        if min(tx, ty) < np.inf and abs(tx - ty) < eps:
            raise VertexHit(f"segment hits a corner near copy {c}")
        if tx < ty:
            d = R if vx > 0 else L
            crossing = qy
        else:
            d = U if vy > 0 else D
            crossing = qx
        if crossing < eps or crossing > 1.0 - eps:
            raise VertexHit(f"segment grazes a corner of copy {c}")
        c = patch.step(c, d)
        dv = DIRVEC[d]
        px, py = qx - dv[0], qy - dv[1]
        vx, vy = (1.0 - t) * vx, (1.0 - t) * vy
    raise RuntimeError("trace exceeded step limit")
