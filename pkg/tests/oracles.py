"""Reference counts computed without any chromstack machinery beyond the input data."""

import itertools
from collections import defaultdict


def _count_proper(nodes, adjacent, k=4):
    order = sorted(nodes, key=lambda v: (-len(adjacent[v]), v))
    colour = {}

    def rec(i):
        if i == len(order):
            return 1
        v = order[i]
        used = {colour[w] for w in adjacent[v] if w in colour}
        total = 0
        for c in range(k):
            if c not in used:
                colour[v] = c
                total += rec(i + 1)
                del colour[v]
        return total

    return rec(0)


def vertex_colourings(triangles, k=4):
    """Proper k-colourings of the vertices of a triangulation given as vertex triples."""
    adj = defaultdict(set)
    for t in triangles:
        for x, y in itertools.combinations(t, 2):
            adj[x].add(y)
            adj[y].add(x)
    return _count_proper(list(adj), adj, k)


def face_colourings(faces, k=4):
    """Proper k-colourings of the faces of a map; faces are cyclic vertex tuples."""
    owners = defaultdict(list)
    for i, f in enumerate(faces):
        for j in range(len(f)):
            owners[frozenset((f[j], f[(j + 1) % len(f)]))].append(i)
    adj = defaultdict(set)
    for fs in owners.values():
        for a, b in itertools.combinations(fs, 2):
            adj[a].add(b)
            adj[b].add(a)
    return _count_proper(range(len(faces)), adj, k)


def brute_good_labelings(triangles):
    """Count edge labelings by 1, 2, 3 with three distinct labels on every triangle (all 3**t1 tried)."""
    edges = sorted({frozenset(p) for t in triangles for p in itertools.combinations(t, 2)}, key=sorted)
    index = {e: i for i, e in enumerate(edges)}
    tris = [tuple(index[frozenset(p)] for p in itertools.combinations(t, 2)) for t in triangles]
    count = 0
    for lab in itertools.product((1, 2, 3), repeat=len(edges)):
        if all(len({lab[i], lab[j], lab[k]}) == 3 for i, j, k in tris):
            count += 1
    return count
