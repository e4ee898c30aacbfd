class UnionFind:
    """Disjoint sets over ``range(n)`` with path halving and union by size."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if self.size[x] < self.size[y]:
            x, y = y, x
        self.parent[y] = x
        self.size[x] += self.size[y]
        return True

    def blocks(self, items=None):
        """Blocks as sorted lists, ordered by least element."""
        items = range(len(self.parent)) if items is None else items
        groups = {}
        for x in items:
            groups.setdefault(self.find(x), []).append(x)
        return sorted((sorted(b) for b in groups.values()), key=lambda b: b[0])


def orbits(points, generators, act):
    """Orbits of the group generated by ``generators`` on ``points``.

    ``points`` is a list of hashable items; ``act(g, x)`` must land in ``points``.
    Orbits come back as lists in the order of ``points``, sorted by first occurrence.
    """
    index = {x: i for i, x in enumerate(points)}
    uf = UnionFind(len(points))
    for g in generators:
        for i, x in enumerate(points):
            uf.union(i, index[act(g, x)])
    return [[points[i] for i in block] for block in uf.blocks()]
