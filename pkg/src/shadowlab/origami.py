"""Square-tiled surfaces given by a pair of gluing permutations.

A surface is n unit squares with sigma_h[i] the square to the right of i
and sigma_v[i] the square above i (0-indexed).  Vertices of the square
complex are orbits of the corner rotation; an orbit of size 4k is a point
of total angle 2 pi k, a cone point when k >= 2.
"""

from dataclasses import dataclass, field

# corner indices
SW, SE, NE, NW = 0, 1, 2, 3
# edge directions
R, U, L, D = 0, 1, 2, 3
OPP = (L, D, R, U)
DIRVEC = ((1, 0), (0, 1), (-1, 0), (0, -1))
# corner offsets within a unit square
CORNER_OFFSET = ((0, 0), (1, 0), (1, 1), (0, 1))


class Disconnected(ValueError):
    pass


@dataclass(frozen=True)
class Origami:
    n: int
    sigma_h: tuple
    sigma_v: tuple
    sigma_h_inv: tuple = field(repr=False, default=None)
    sigma_v_inv: tuple = field(repr=False, default=None)
    vertex_orbits: tuple = field(repr=False, default=None)
    corner_orbit: dict = field(repr=False, default=None)
    cone_points: tuple = None
    genus: int = None

    def neighbor(self, s, d):
        if d == R:
            return self.sigma_h[s]
        if d == U:
            return self.sigma_v[s]
        if d == L:
            return self.sigma_h_inv[s]
        return self.sigma_v_inv[s]

    def corner_multiplicity(self, s, corner):
        """k where the vertex at this corner has total angle 2 pi k."""
        oid = self.corner_orbit[(s, corner)]
        return len(self.vertex_orbits[oid]) // 4

    def rotate_ccw(self, s, corner):
        """Next corner counterclockwise around the same vertex."""
        if corner == NE:
            return self.sigma_h[s], NW
        if corner == NW:
            return self.sigma_v[s], SW
        if corner == SW:
            return self.sigma_h_inv[s], SE
        return self.sigma_v_inv[s], NE


def _invert(p):
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def build_origami(sigma_h, sigma_v) -> Origami:
    sigma_h = tuple(int(x) for x in sigma_h)
    sigma_v = tuple(int(x) for x in sigma_v)
    n = len(sigma_h)
    if len(sigma_v) != n:
        raise ValueError("permutation degrees differ")
    for p in (sigma_h, sigma_v):
        if sorted(p) != list(range(n)):
            raise ValueError(f"not a permutation of 0..{n - 1}: {p}")
    sh_inv = _invert(sigma_h)
    sv_inv = _invert(sigma_v)

    # connectivity under the group generated by both permutations
    seen = {0}
    stack = [0]
    while stack:
        s = stack.pop()
        for t in (sigma_h[s], sigma_v[s], sh_inv[s], sv_inv[s]):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    if len(seen) != n:
        raise Disconnected(f"only {len(seen)} of {n} squares reachable")

    o = Origami(n=n, sigma_h=sigma_h, sigma_v=sigma_v,
                sigma_h_inv=sh_inv, sigma_v_inv=sv_inv)

    # vertex orbits of the corner rotation
    remaining = {(s, c) for s in range(n) for c in (SW, SE, NE, NW)}
    orbits = []
    corner_orbit = {}
    while remaining:
        start = min(remaining)
        orbit = []
        cur = start
        while True:
            orbit.append(cur)
            remaining.discard(cur)
            corner_orbit[cur] = len(orbits)
            cur = o.rotate_ccw(*cur)
            if cur == start:
                break
        if len(orbit) % 4 != 0:
            raise AssertionError("corner orbit size not a multiple of 4")
        orbits.append(tuple(orbit))

    cones = tuple((oid, len(orb) // 4) for oid, orb in enumerate(orbits)
                  if len(orb) // 4 >= 2)
    v = len(orbits)
    chi = v - 2 * n + n
    if chi % 2 != 0:
        raise AssertionError("odd Euler characteristic")
    genus = (2 - chi) // 2

    out = Origami(n=n, sigma_h=sigma_h, sigma_v=sigma_v,
                  sigma_h_inv=sh_inv, sigma_v_inv=sv_inv,
                  vertex_orbits=tuple(orbits), corner_orbit=corner_orbit,
                  cone_points=cones, genus=genus)
    # angle sum audit: sum of (k - 1) over cones equals 2g - 2
    assert sum(k - 1 for _, k in cones) == 2 * genus - 2
    return out


def cylinders(o: Origami, horizontal=True):
    """Maximal cylinders in the horizontal (or vertical) direction.

    Core rows are the cycles of sigma_h (resp. sigma_v); two vertically
    adjacent rows belong to one cylinder iff the vertical gluing maps one
    cycle onto the other commuting with the row rotation (no singularity
    between them).  Returns (squares, circumference, height) triples.
    """
    along = o.sigma_h if horizontal else o.sigma_v
    across = o.sigma_v if horizontal else o.sigma_h

    # cycles of the along-permutation
    cyc_id = [-1] * o.n
    cycles = []
    for s in range(o.n):
        if cyc_id[s] >= 0:
            continue
        cur, cyc = s, []
        while cyc_id[cur] < 0:
            cyc_id[cur] = len(cycles)
            cyc.append(cur)
            cur = along[cur]
        cycles.append(cyc)

    # merge rows glued without singularities
    parent = list(range(len(cycles)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for ci, cyc in enumerate(cycles):
        target = {cyc_id[across[s]] for s in cyc}
        if len(target) != 1:
            continue
        cj = target.pop()
        if len(cycles[cj]) != len(cyc):
            continue
        if all(across[along[s]] == along[across[s]] for s in cyc):
            ra, rb = find(ci), find(cj)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    groups = {}
    for ci in range(len(cycles)):
        groups.setdefault(find(ci), []).append(ci)
    out = []
    for rows in groups.values():
        squares = sorted(s for ci in rows for s in cycles[ci])
        out.append((tuple(squares), len(cycles[rows[0]]), len(rows)))
    return sorted(out)


def perm_from_cycles(n, text, one_indexed=True):
    """Parse disjoint-cycle notation like "(1 2)(3)" into a permutation tuple."""
    perm = list(range(n))
    text = text.strip()
    if text in ("", "id", "()"):
        return tuple(perm)
    depth = 0
    cycles, cur = [], []
    token = ""
    for ch in text:
        if ch == "(":
            if depth:
                raise ValueError("nested parenthesis in cycle notation")
            depth, cur, token = 1, [], ""
        elif ch == ")":
            if token.strip():
                cur.append(int(token))
            if cur:
                cycles.append(cur)
            depth, token = 0, ""
        elif ch in " ,":
            if token.strip():
                cur.append(int(token))
            token = ""
        else:
            token += ch
    if depth:
        raise ValueError("unbalanced parenthesis in cycle notation")
    for cyc in cycles:
        base = [x - 1 for x in cyc] if one_indexed else list(cyc)
        if any(not 0 <= x < n for x in base):
            raise ValueError(f"cycle entry out of range in {text!r}")
        for a, b in zip(base, base[1:] + base[:1]):
            perm[a] = b
    if sorted(perm) != list(range(n)):
        raise ValueError(f"cycles in {text!r} do not define a permutation")
    return tuple(perm)
