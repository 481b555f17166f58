"""Affine automorphisms of square-tiled surfaces.

A unimodular integer matrix M acts on a surface iff the M-image of each
unit square, cut along the integer grid, can be reassembled by
translations into the squares of the same surface compatibly with all
gluings.  The construction below builds that recutting table exactly
(rational arithmetic), propagating target-square assignments across piece
adjacencies from a seed; if no seed yields a consistent assignment the
matrix is not realized and NotInVeechGroup is raised.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .eigen import hyperbolic_matrix
from .origami import Origami

_ZERO = Fraction(0)


class NotInVeechGroup(ValueError):
    pass


# -- exact convex polygon helpers -------------------------------------------


def poly_area2(poly):
    """Twice the signed area (exact)."""
    s = Fraction(0)
    for (x1, y1), (x2, y2) in zip(poly, list(poly[1:]) + [poly[0]]):
        s += x1 * y2 - x2 * y1
    return s


def clip_halfplane(poly, a, b, c):
    """Keep the part of a convex polygon with a x + b y <= c (exact)."""
    out = []
    m = len(poly)
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        fp = a * p[0] + b * p[1] - c
        fq = a * q[0] + b * q[1] - c
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    dedup = []
    for p in out:
        if not dedup or p != dedup[-1]:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def clip_cell(poly, i, j):
    """Intersect with the unit cell [i, i+1] x [j, j+1]."""
    for a, b, c in ((-1, 0, -i), (1, 0, i + 1), (0, -1, -j), (0, 1, j + 1)):
        poly = clip_halfplane(poly, Fraction(a), Fraction(b), Fraction(c))
        if len(poly) < 3:
            return []
    return poly


def clip_poly(poly, other):
    """Intersect two convex polygons (other CCW)."""
    m = len(other)
    for i in range(m):
        (x1, y1), (x2, y2) = other[i], other[(i + 1) % m]
        a, b = y2 - y1, x1 - x2
        c = a * x1 + b * y1
        poly = clip_halfplane(poly, a, b, c)
        if len(poly) < 3:
            return []
    return poly


def side_interval(poly, side, i, j):
    """Contact interval of the polygon with one side of cell (i, j).

    side 0/1/2/3 = right/top/left/bottom.  None when the contact is a
    point or empty.
    """
    if side == 0:
        pts = [y for (x, y) in poly if x == i + 1]
    elif side == 2:
        pts = [y for (x, y) in poly if x == i]
    elif side == 1:
        pts = [x for (x, y) in poly if y == j + 1]
    else:
        pts = [x for (x, y) in poly if y == j]
    if len(pts) < 2:
        return None
    lo, hi = min(pts), max(pts)
    return (lo, hi) if lo < hi else None


def _overlap(a, b):
    lo = max(a[0], b[0])
    hi = min(a[1], b[1])
    return (lo, hi) if lo < hi else None


def _segment_on_line(poly, base, direction):
    """Parameter interval of polygon contact with the line base + t dir."""
    ts = []
    for (x, y) in poly:
        if direction[0] * (y - base[1]) - direction[1] * (x - base[0]) == 0:
            if direction[0] != 0:
                ts.append((x - base[0]) / direction[0])
            else:
                ts.append((y - base[1]) / direction[1])
    if len(ts) < 2:
        return None
    lo, hi = min(ts), max(ts)
    return (lo, hi) if lo < hi else None


# -- recut table -------------------------------------------------------------


@dataclass(frozen=True)
class RecutPiece:
    source: int
    src_poly: tuple          # convex CCW polygon in source-local coords, exact
    target: int
    mat: tuple               # 2x2 integer rows
    off: tuple               # exact translation; image = mat @ x + off

    def image_point(self, x, y):
        (a, b), (c, d) = self.mat
        return (a * x + b * y + self.off[0], c * x + d * y + self.off[1])

    def contains(self, x, y):
        m = len(self.src_poly)
        for i in range(m):
            (x1, y1) = self.src_poly[i]
            (x2, y2) = self.src_poly[(i + 1) % m]
            if (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1) < 0:
                return False
        return True


class AffineAutomorphism:
    """A verified recutting table realizing derivative M on the surface."""

    def __init__(self, origami: Origami, entries, pieces):
        self.origami = origami
        self.entries = ((int(entries[0][0]), int(entries[0][1])),
                        (int(entries[1][0]), int(entries[1][1])))
        self.pieces = tuple(pieces)
        self._by_source = {}
        for p in self.pieces:
            self._by_source.setdefault(p.source, []).append(p)
        tr = abs(self.entries[0][0] + self.entries[1][1])
        self.hm = hyperbolic_matrix(self.entries) if tr > 2 else None

    @property
    def lambda_(self):
        return self.hm.lambda_ if self.hm else None

    def matrix(self):
        return np.array(self.entries, dtype=float)

    def apply_surface(self, s, u, v):
        """Image of a surface point (square, local coords in [0,1))."""
        x, y = Fraction(u), Fraction(v)
        for p in self._by_source[s]:
            if p.contains(x, y):
                ix, iy = p.image_point(x, y)
                t = p.target
                if ix == 1:  # bottom/left ownership: wrap across the gluing
                    t, ix = self.origami.sigma_h[t], _ZERO
                if iy == 1:
                    t, iy = self.origami.sigma_v[t], _ZERO
                return t, float(ix), float(iy)
        raise AssertionError(f"point ({u}, {v}) not located in square {s}")

    def inverse(self):
        (a, b), (c, d) = self.entries
        ia, ib, ic, id_ = d, -b, -c, a
        inv_pieces = []
        for p in self.pieces:
            img = [p.image_point(x, y) for (x, y) in p.src_poly]
            assert poly_area2(img) > 0
            ox = ia * p.off[0] + ib * p.off[1]
            oy = ic * p.off[0] + id_ * p.off[1]
            inv_pieces.append(RecutPiece(
                source=p.target, src_poly=tuple(img), target=p.source,
                mat=((ia, ib), (ic, id_)), off=(-ox, -oy)))
        return AffineAutomorphism(self.origami, ((ia, ib), (ic, id_)),
                                  inv_pieces)

    def fixed_points(self):
        """Exact fixed points (square, x, y), one entry per location."""
        (a, b), (c, d) = self.entries
        det = (1 - a) * (1 - d) - b * c
        if det == 0:
            return []
        out = []
        for p in self.pieces:
            if p.source != p.target:
                continue
            tx, ty = p.off
            x = ((1 - d) * tx + b * ty) / det
            y = (c * tx + (1 - a) * ty) / det
            if 0 <= x < 1 and 0 <= y < 1 and p.contains(x, y):
                if (p.source, x, y) not in out:
                    out.append((p.source, x, y))
        return out


def _grid_pieces(entries):
    """Cut M [0,1]^2 along the integer grid: list of (cell, image_poly)."""
    (a, b), (c, d) = entries
    corners = [(_ZERO, _ZERO), (Fraction(a), Fraction(c)),
               (Fraction(a + b), Fraction(c + d)), (Fraction(b), Fraction(d))]
    if poly_area2(corners) < 0:
        corners.reverse()
    xs = [p[0] for p in corners]
    ys = [p[1] for p in corners]
    pieces = []
    for i in range(math.floor(min(xs)), math.ceil(max(xs))):
        for j in range(math.floor(min(ys)), math.ceil(max(ys))):
            poly = clip_cell(corners, i, j)
            if poly and poly_area2(poly) > 0:
                pieces.append(((i, j), tuple(poly)))
    assert sum(poly_area2(poly) for _, poly in pieces) == 2
    return pieces


def verify_affine(origami: Origami, entries) -> AffineAutomorphism:
    """Construct the recutting table for M or raise NotInVeechGroup.

    Accepts any integer matrix with det = 1; the identity yields the
    trivial table, and eigen-data is attached when M is hyperbolic.
    """
    (a, b), (c, d) = ((int(entries[0][0]), int(entries[0][1])),
                      (int(entries[1][0]), int(entries[1][1])))
    if a * d - b * c != 1:
        raise NotInVeechGroup("determinant must be 1")
    entries = ((a, b), (c, d))
    n = origami.n
    cells = _grid_pieces(entries)
    ncell = len(cells)
    cell_index = {cell: k for k, (cell, _) in enumerate(cells)}

    def sig(direction):
        if direction == (1, 0):
            return origami.sigma_h
        if direction == (-1, 0):
            return origami.sigma_h_inv
        if direction == (0, 1):
            return origami.sigma_v
        return origami.sigma_v_inv

    # constraint edges ((s,k), (s2,k2), perm or None): target(s2,k2) =
    # perm[target(s,k)], None meaning equality
    edges = []

    # adjacencies inside one source square: the image crosses a grid edge
    for k, (cell, poly) in enumerate(cells):
        i, j = cell
        for side, dvec in ((0, (1, 0)), (1, (0, 1))):
            other = (i + dvec[0], j + dvec[1])
            k2 = cell_index.get(other)
            if k2 is None:
                continue
            iv1 = side_interval(poly, side, i, j)
            iv2 = side_interval(cells[k2][1], 2 if side == 0 else 3, *other)
            if iv1 and iv2 and _overlap(iv1, iv2):
                for s in range(n):
                    edges.append(((s, k), (s, k2), sig(dvec)))

    # adjacencies across the surface gluings: source edge {1} x [0,1] of s
    # equals {0} x [0,1] of sigma_h(s); image frames differ by M e1
    # (symmetrically for the vertical gluing and M e2)
    me1 = (Fraction(a), Fraction(c))
    me2 = (Fraction(b), Fraction(d))
    for base, e_par, sigma in ((me1, me2, origami.sigma_h),
                               (me2, me1, origami.sigma_v)):
        for k, (cell, poly) in enumerate(cells):
            seg = _segment_on_line(poly, base, e_par)
            if seg is None:
                continue
            for k2, (cell2, poly2) in enumerate(cells):
                seg2 = _segment_on_line(poly2, (_ZERO, _ZERO), e_par)
                if seg2 is None or not _overlap(seg, seg2):
                    continue
                g2 = (cell2[0] + int(base[0]), cell2[1] + int(base[1]))
                delta = (g2[0] - cell[0], g2[1] - cell[1])
                for s in range(n):
                    s2 = sigma[s]
                    if delta == (0, 0):
                        edges.append(((s, k), (s2, k2), None))
                    elif abs(delta[0]) + abs(delta[1]) == 1:
                        edges.append(((s, k), (s2, k2), sig(delta)))
                    else:
                        raise AssertionError(f"non-adjacent glued pieces {delta}")

    nodes = [(s, k) for s in range(n) for k in range(ncell)]
    node_id = {nd: i for i, nd in enumerate(nodes)}
    adj = [[] for _ in nodes]
    for na, nb, perm in edges:
        adj[node_id[na]].append((node_id[nb], perm, False))
        adj[node_id[nb]].append((node_id[na], perm, True))

    for seed_target in range(n):
        assign = [-1] * len(nodes)
        assign[0] = seed_target
        queue = [0]
        ok = True
        while queue and ok:
            cur = queue.pop()
            t = assign[cur]
            for nxt, perm, inv in adj[cur]:
                if perm is None:
                    t2 = t
                else:
                    t2 = perm.index(t) if inv else perm[t]
                if assign[nxt] < 0:
                    assign[nxt] = t2
                    queue.append(nxt)
                elif assign[nxt] != t2:
                    ok = False
                    break
        if not ok or any(t < 0 for t in assign):
            continue
        pieces = _assemble(origami, entries, cells, nodes, assign)
        if pieces is not None:
            return AffineAutomorphism(origami, entries, pieces)
    raise NotInVeechGroup(f"no consistent recutting for {entries}")


def _assemble(origami, entries, cells, nodes, assign):
    """Build pieces from an assignment; exact cover/overlap audit."""
    (a, b), (c, d) = entries
    ia, ib, ic, id_ = d, -b, -c, a
    pieces = []
    per_target = {}
    for (s, k), t in zip(nodes, assign):
        cell, img_poly = cells[k]
        src_poly = tuple((ia * x + ib * y, ic * x + id_ * y)
                         for (x, y) in img_poly)
        assert poly_area2(src_poly) > 0
        pieces.append(RecutPiece(
            source=s, src_poly=src_poly, target=t, mat=entries,
            off=(Fraction(-cell[0]), Fraction(-cell[1]))))
        local = tuple((x - cell[0], y - cell[1]) for (x, y) in img_poly)
        per_target.setdefault(t, []).append(local)

    for t in range(origami.n):
        polys = per_target.get(t, [])
        if sum(poly_area2(p) for p in polys) != 2:
            return None
        for i in range(len(polys)):
            for j in range(i + 1, len(polys)):
                inter = clip_poly(list(polys[i]), list(polys[j]))
                if inter and poly_area2(inter) != 0:
                    return None
    return pieces
