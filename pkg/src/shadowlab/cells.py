"""Connected components of grid-cell sets under 4-adjacency.

Cells are (i, j) integer pairs on an n x n torus grid (adjacency wraps).
Components are returned ordered by their minimal cell index i * n + j, so
reports are deterministic.
"""


def components(cells, n, wrap=True):
    """Partition a cell set by 4-adjacency; union-find based."""
    cells = set(map(tuple, cells))
    parent = {c: c for c in cells}

    def find(c):
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for (i, j) in cells:
        for di, dj in ((1, 0), (0, 1)):
            ni, nj = i + di, j + dj
            if wrap:
                ni, nj = ni % n, nj % n
            if (ni, nj) in cells:
                union((i, j), (ni, nj))

    groups = {}
    for c in cells:
        groups.setdefault(find(c), set()).add(c)
    return sorted(groups.values(), key=lambda g: min(i * n + j for i, j in g))


def components_floodfill(cells, n, wrap=True):
    """Independent flood-fill implementation (test oracle)."""
    remaining = set(map(tuple, cells))
    out = []
    while remaining:
        seed = min(remaining, key=lambda c: c[0] * n + c[1])
        comp = set()
        stack = [seed]
        remaining.discard(seed)
        while stack:
            i, j = stack.pop()
            comp.add((i, j))
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                ni, nj = i + di, j + dj
                if wrap:
                    ni, nj = ni % n, nj % n
                if (ni, nj) in remaining:
                    remaining.discard((ni, nj))
                    stack.append((ni, nj))
        out.append(comp)
    return sorted(out, key=lambda g: min(i * n + j for i, j in g))
