"""Modularity scores, exact maximization, and deterministic upper bounds.

The modularity of a partition A is

    q_A = sum_S e(S)/e(G) - sum_S (vol(S)/vol(G))^2

with e(S) the edges inside part S (loops included) and vol the degree
volume.  Everything here is exact rational arithmetic; floats appear
only in reports.

Exact maximization uses a subset dynamic program over vertex masks: with
the common denominator e(G)*vol(G)^2 every part contributes the integer
f(T) = e(T)*vol(G)^2 - vol(T)^2*e(G), and the best partition of a mask
is solved by splitting off the part that contains its lowest vertex.
This costs O(3^n) integer operations, far below enumerating all set
partitions, and is why the default cap sits at n = 12.

Upper bounds provided, all exact:

* ``worst_part_bound``: 1 minus the smallest negative relative
  modularity over the parts of a given partition.
* ``expansion_modularity_bound``: 1 - min(alpha/2h, 3/16) from the
  global expansion alpha (cap 1/16 kept as a comparison baseline).
* ``profile_modularity_bound``: 1 - min_k [d_k/(2+d_k) + k/2n] with
  d_k = min(alpha_{k/n}/h, 1) from the small-set expansion profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from pamod.cuts import EXACT_SUBSET_LIMIT, edge_boundary, expansion_profile
from pamod.models import MultiGraph, _check_seed

EXACT_PARTITION_LIMIT = 12

CAP_STRONG = Fraction(3, 16)
CAP_BASELINE = Fraction(1, 16)

Partition = tuple[frozenset[int], ...]


@dataclass(frozen=True)
class ModularityScore:
    q: Fraction
    edge_fraction: Fraction  # sum_S e(S)/e(G)
    degree_tax: Fraction  # sum_S (vol(S)/vol(G))^2


def check_partition(graph: MultiGraph, parts) -> Partition:
    """Validate disjoint nonempty parts covering 1..n; returns a tuple."""
    norm = tuple(frozenset(p) for p in parts)
    seen: set[int] = set()
    for p in norm:
        if not p:
            raise ValueError("empty part in partition")
        for v in p:
            if not 1 <= v <= graph.n:
                raise ValueError(f"vertex {v} out of range 1..{graph.n}")
            if v in seen:
                raise ValueError(f"vertex {v} appears in two parts")
            seen.add(v)
    if len(seen) != graph.n:
        raise ValueError("partition does not cover all vertices")
    return norm


def _part_tallies(graph: MultiGraph, parts: Partition):
    """Per-part (inner edges, boundary edges, volume) in one edge scan."""
    idx = [0] * (graph.n + 1)
    for i, p in enumerate(parts):
        for v in p:
            idx[v] = i
    inner = [0] * len(parts)
    boundary = [0] * len(parts)
    for u, v, _t in graph.edges:
        pu, pv = idx[u], idx[v]
        if pu == pv:
            inner[pu] += 1
        else:
            boundary[pu] += 1
            boundary[pv] += 1
    deg = graph.degrees
    vols = [0] * len(parts)
    for i, p in enumerate(parts):
        vols[i] = sum(deg[v] for v in p)
    return inner, boundary, vols


def modularity_score(graph: MultiGraph, parts) -> ModularityScore:
    """Exact modularity of a partition; zero by convention on empty graphs."""
    parts = check_partition(graph, parts)
    m = graph.m
    if m == 0:
        return ModularityScore(Fraction(0), Fraction(0), Fraction(0))
    inner, _boundary, vols = _part_tallies(graph, parts)
    vol_g = graph.volume
    edge_fraction = Fraction(sum(inner), m)
    degree_tax = Fraction(sum(v * v for v in vols), vol_g * vol_g)
    return ModularityScore(
        q=edge_fraction - degree_tax,
        edge_fraction=edge_fraction,
        degree_tax=degree_tax,
    )


def _subset_tables(graph: MultiGraph) -> tuple[list[int], list[int]]:
    """inner[mask] and vol[mask] for every vertex mask (bit i = vertex i+1)."""
    n = graph.n
    deg = graph.degrees
    loops = [0] * n
    nbrs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v, t in graph.edges:
        if u == v:
            loops[u - 1] += 1
        else:
            nbrs[u - 1].append((v - 1, 1))
            nbrs[v - 1].append((u - 1, 1))
    # merge duplicate neighbor entries into multiplicities
    for i in range(n):
        counts: dict[int, int] = {}
        for b, _one in nbrs[i]:
            counts[b] = counts.get(b, 0) + 1
        nbrs[i] = sorted(counts.items())
    size = 1 << n
    inner = [0] * size
    vol = [0] * size
    for mask in range(1, size):
        low = mask & -mask
        v = low.bit_length() - 1
        rest = mask ^ low
        cross = 0
        for nb, mult in nbrs[v]:
            if (rest >> nb) & 1:
                cross += mult
        inner[mask] = inner[rest] + loops[v] + cross
        vol[mask] = vol[rest] + deg[v + 1]
    return inner, vol


def exact_modularity(
    graph: MultiGraph, limit: int = EXACT_PARTITION_LIMIT
) -> tuple[Fraction, Partition]:
    """Maximum modularity q* and a maximizing partition, exactly.

    The returned partition is canonical: parts are listed by smallest
    member, and each part is the lexicographically smallest optimal
    choice for its lowest vertex given the previously fixed parts.
    """
    n = graph.n
    if n > limit:
        raise ValueError(
            f"n={n} exceeds the exact partition limit {limit}; "
            "use greedy_modularity"
        )
    m = graph.m
    if m == 0:
        return Fraction(0), (frozenset(range(1, n + 1)),)
    inner, vol = _subset_tables(graph)
    vol_g = graph.volume
    vg2 = vol_g * vol_g
    size = 1 << n
    f = [inner[mask] * vg2 - vol[mask] * vol[mask] * m for mask in range(size)]
    opt = [0] * size
    for mask in range(1, size):
        low = mask & -mask
        rest = mask ^ low
        best = f[low] + opt[rest]
        sub = rest
        while sub:
            t = sub | low
            cand = f[t] + opt[rest ^ sub]
            if cand > best:
                best = cand
            sub = (sub - 1) & rest
        opt[mask] = best
    q_star = Fraction(opt[size - 1], m * vg2)

    def bits(mask: int) -> tuple[int, ...]:
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length())
            mask ^= low
        return tuple(out)

    parts: list[frozenset[int]] = []
    mask = size - 1
    while mask:
        low = mask & -mask
        rest = mask ^ low
        target = opt[mask]
        best_t = None
        best_key: tuple[int, ...] | None = None
        sub = rest
        while True:
            t = sub | low
            if f[t] + opt[rest ^ sub] == target:
                key = bits(t)
                if best_key is None or key < best_key:
                    best_key = key
                    best_t = t
            if sub == 0:
                break
            sub = (sub - 1) & rest
        assert best_t is not None
        parts.append(frozenset(best_key))
        mask ^= best_t
    return q_star, tuple(parts)


def greedy_modularity(graph: MultiGraph, seed: int) -> tuple[Fraction, Partition]:
    """Agglomerative heuristic: repeatedly merge the best pair of parts.

    Starts from singletons and merges while some merge strictly raises
    q; the seed only breaks ties between equal-gain merges.  Falls back
    to the one-part partition when the search ends below zero, so the
    result is always >= 0 and always equals the score of the returned
    partition.
    """
    seed = _check_seed(seed)
    n = graph.n
    m = graph.m
    if m == 0:
        return Fraction(0), (frozenset(range(1, n + 1)),)
    rng = np.random.default_rng(seed)
    vol_g = graph.volume
    vg2 = vol_g * vol_g
    deg = graph.degrees
    members: dict[int, set[int]] = {v: {v} for v in range(1, n + 1)}
    vols: dict[int, int] = {v: deg[v] for v in range(1, n + 1)}
    between: dict[tuple[int, int], int] = {}
    for u, v, _t in graph.edges:
        if u != v:
            key = (min(u, v), max(u, v))
            between[key] = between.get(key, 0) + 1
    while len(members) > 1:
        best_gain = 0
        tied: list[tuple[int, int]] = []
        for (a, b), cnt in between.items():
            # merging A and B changes q by e(A,B)/m - 2 vol(A) vol(B)/vol(G)^2
            gain = cnt * vg2 - 2 * vols[a] * vols[b] * m
            if gain > best_gain:
                best_gain = gain
                tied = [(a, b)]
            elif gain == best_gain and gain > 0:
                tied.append((a, b))
        if not tied:
            break
        tied.sort()
        a, b = tied[int(rng.integers(0, len(tied)))] if len(tied) > 1 else tied[0]
        members[a] |= members.pop(b)
        vols[a] += vols.pop(b)
        merged: dict[tuple[int, int], int] = {}
        for (x, y), cnt in between.items():
            if x == b:
                x = a
            if y == b:
                y = a
            if x == y:
                continue
            key = (min(x, y), max(x, y))
            merged[key] = merged.get(key, 0) + cnt
        between = merged
    parts = tuple(
        frozenset(members[k]) for k in sorted(members, key=lambda k: min(members[k]))
    )
    q = modularity_score(graph, parts).q
    if q < 0:
        trivial = (frozenset(range(1, n + 1)),)
        return Fraction(0), trivial
    return q, parts


def negative_relative_modularity(graph: MultiGraph, subset) -> Fraction:
    """(vol(G)/vol(S)) * (e(S,S-compl)/(2 e(G)) + vol(S)^2/vol(G)^2)."""
    report = edge_boundary(graph, subset)
    if report.vol == 0:
        raise ValueError("subset has zero volume")
    m = graph.m
    if m == 0:
        raise ValueError("graph has no edges")
    vol_g = graph.volume
    vs = report.vol
    return Fraction(vol_g, vs) * (
        Fraction(report.e_boundary, 2 * m) + Fraction(vs * vs, vol_g * vol_g)
    )


def worst_part_bound(graph: MultiGraph, parts) -> Fraction:
    """Upper bound on q_A: one minus the worst part's relative term.

    For every partition A, q_A <= 1 - min over parts S of the negative
    relative modularity of S.  Tight for the one-part partition.
    """
    parts = check_partition(graph, parts)
    m = graph.m
    if m == 0:
        raise ValueError("graph has no edges")
    _inner, boundary, vols = _part_tallies(graph, parts)
    vol_g = graph.volume
    worst: Fraction | None = None
    for bnd, vs in zip(boundary, vols):
        if vs == 0:
            raise ValueError("part has zero volume")
        term = Fraction(vol_g, vs) * (
            Fraction(bnd, 2 * m) + Fraction(vs * vs, vol_g * vol_g)
        )
        if worst is None or term < worst:
            worst = term
    assert worst is not None
    return 1 - worst


def _require_pa_shape(graph: MultiGraph) -> int:
    if graph.h is None:
        raise ValueError("graph.h is required for expansion-based bounds")
    h = graph.h
    deg = graph.degrees
    if min(deg[1:]) < h:
        raise ValueError(f"minimum degree {min(deg[1:])} below h={h}")
    if graph.volume > 2 * h * graph.n:
        raise ValueError("average degree exceeds 2h")
    return h


def expansion_modularity_bound(
    graph: MultiGraph, alpha, cap: Fraction = CAP_STRONG
) -> Fraction:
    """1 - min(alpha/2h, cap) for graphs with min degree >= h, avg <= 2h.

    ``alpha`` is the global expansion alpha_{1/2}; +infinity is accepted
    and simply leaves the cap active.
    """
    h = _require_pa_shape(graph)
    if alpha == math.inf:
        term = cap
    else:
        term = min(Fraction(alpha) / (2 * h), cap)
    return 1 - term


def baseline_expansion_bound(graph: MultiGraph, alpha) -> Fraction:
    """The same bound with the weaker cap 1/16, kept for comparison."""
    return expansion_modularity_bound(graph, alpha, cap=CAP_BASELINE)


def bound_from_expansion_profile(
    profile: dict[int, Fraction], h: int, n: int
) -> Fraction:
    """1 - min_k [d_k/(2+d_k) + k/(2n)], d_k = min(alpha_{k/n}/h, 1).

    The minimum runs over k = 1..floor(n/2); alpha_{k/n} is constant in
    u on [k/n, (k+1)/n), which is what reduces the continuous bound to
    this discrete scan.
    """
    if n < 2:
        raise ValueError("profile bound needs n >= 2")
    if h < 1:
        raise ValueError("need h >= 1")
    best: Fraction | None = None
    for k in range(1, n // 2 + 1):
        alpha = profile[k]
        if alpha == math.inf:
            delta = Fraction(1)
        else:
            delta = min(Fraction(alpha) / h, Fraction(1))
        term = delta / (2 + delta) + Fraction(k, 2 * n)
        if best is None or term < best:
            best = term
    assert best is not None
    return 1 - best


def profile_modularity_bound(
    graph: MultiGraph, limit: int = EXACT_SUBSET_LIMIT
) -> Fraction:
    """Exact small-set expansion bound on q*, via the full profile.

    Valid when every subset satisfies e(S) <= h|S|; generated graphs
    have this by construction (each inner edge of S arrives with one of
    the h|S| mini-vertices of S).  Handcrafted graphs are checked
    exhaustively, which keeps this honest on fixtures.
    """
    h = _require_pa_shape(graph)
    if graph.n < 2:
        raise ValueError("profile bound needs n >= 2")
    if graph.model is None:
        _check_inner_edge_cap(graph, h)
    profile = expansion_profile(graph, limit=limit)
    return bound_from_expansion_profile(profile, h, graph.n)


def _check_inner_edge_cap(graph: MultiGraph, h: int, limit: int = 16) -> None:
    if graph.n > limit:
        raise ValueError(
            f"cannot verify e(S) <= h|S| exhaustively for n={graph.n} > {limit}"
        )
    inner, _vol = _subset_tables(graph)
    for mask in range(1, 1 << graph.n):
        if inner[mask] > h * mask.bit_count():
            raise ValueError(
                f"subset mask {mask:b} has {inner[mask]} inner edges, "
                f"over the cap h*|S| = {h * mask.bit_count()}"
            )
