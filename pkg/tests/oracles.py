"""Naive reference implementations used only to cross-check the package."""

from collections import deque
from fractions import Fraction
import itertools
import math


def closure_components(n, edges, alive=None):
    """Weak components by boolean transitive closure (Floyd-Warshall)."""
    alive = set(range(n)) if alive is None else set(alive)
    reach = [[i == j for j in range(n)] for i in range(n)]
    for u, v in edges:
        if u in alive and v in alive:
            reach[u][v] = reach[v][u] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    comps = []
    seen = set()
    for i in sorted(alive):
        if i in seen:
            continue
        comp = {j for j in alive if reach[i][j]}
        seen |= comp
        comps.append(comp)
    return comps


def brute_matching(n, arcs):
    """Maximum matching of the out/in split by exhaustive search."""
    out = [[v for (u, v) in arcs if u == x] for x in range(n)]
    best = 0

    def go(u, used, size):
        nonlocal best
        if size + (n - u) <= best:
            return
        if u == n:
            best = max(best, size)
            return
        for v in out[u]:
            if v not in used:
                go(u + 1, used | {v}, size + 1)
        go(u + 1, used, size)

    go(0, frozenset(), 0)
    return best


def fraction_rank(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    rank = 0
    cols = len(m[0])
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def fraction_det(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def cofactor_tree_count(n, edges):
    lap = [[0] * n for _ in range(n)]
    for u, v in edges:
        lap[u][u] += 1
        lap[v][v] += 1
        lap[u][v] -= 1
        lap[v][u] -= 1
    return int(fraction_det([row[1:] for row in lap[1:]]))


def _dist(n, adj, s):
    d = [-1] * n
    d[s] = 0
    q = deque([s])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if d[w] < 0:
                d[w] = d[u] + 1
                q.append(w)
    return d


def brute_betweenness(n, edges, directed):
    """Node and edge betweenness by listing every shortest path."""
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        if not directed:
            adj[v].append(u)
    key = (lambda u, v: (u, v)) if directed else (lambda u, v: (min(u, v), max(u, v)))
    nb = [0.0] * n
    eb = {key(u, v): 0.0 for u, v in edges}
    pairs = itertools.permutations(range(n), 2) if directed else itertools.combinations(range(n), 2)
    for s, t in pairs:
        d = _dist(n, adj, s)
        if d[t] <= 0:
            continue
        paths = []

        def walk(path):
            u = path[-1]
            if u == t:
                paths.append(list(path))
                return
            for w in adj[u]:
                if d[w] == d[u] + 1 and d[w] <= d[t]:
                    walk(path + [w])

        walk([s])
        for p in paths:
            for x in p[1:-1]:
                nb[x] += 1 / len(paths)
            for a, b in zip(p, p[1:]):
                eb[key(a, b)] += 1 / len(paths)
    return nb, eb


def naive_r1_over_orders(n, edges):
    """Exact mean of R1 over all n! node orders, as a Fraction."""
    total = Fraction(0)
    count = 0
    for perm in itertools.permutations(range(n)):
        s = Fraction(0)
        for i in range(n):
            comps = closure_components(n, edges, alive=set(range(n)) - set(perm[:i]))
            s += Fraction(max((len(c) for c in comps), default=0), n)
        total += s / n
        count += 1
    return total / count


def exact_spectrum_k4():
    e = math.e
    return (3.0, 4.0, math.log((e**3 + 3 / e) / 4), 4.0, 16.0, 3.0)
