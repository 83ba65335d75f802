"""Edge boundaries and u-bounded edge expansion, exactly.

For a subset S the expansion ratio is e(S, S-complement)/|S| and the
u-bounded expansion alpha_u is the minimum ratio over nonempty S with
|S| <= floor(u*n).  When floor(u*n) < 1 no subset qualifies and alpha_u
is +infinity by convention.

The exhaustive search walks all subsets in Gray-code order, so each step
flips one vertex and updates the boundary count in O(deg) integer
operations.  All ratios are exact rationals; ties on the minimum are
broken toward the lexicographically smallest vertex set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from pamod.models import MultiGraph, _check_seed

# 2^24 subsets is roughly the patience limit for the exact search.
EXACT_SUBSET_LIMIT = 24


class SearchMethod(str, Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class CutReport:
    """Exact counts for one subset: inner edges, boundary edges, volume."""

    subset: frozenset[int]
    e_inner: int
    e_boundary: int
    vol: int
    ratio: Fraction | None  # e(S, S-complement)/|S|; None for the empty set


@dataclass(frozen=True)
class ExpansionResult:
    u: Fraction
    alpha: Fraction | float  # rational, or math.inf when no subset qualifies
    witness: frozenset[int] | None
    method: SearchMethod


def as_fraction(u) -> Fraction:
    """Exact conversion; floats convert via their binary value."""
    if isinstance(u, Fraction):
        return u
    if isinstance(u, int):
        return Fraction(u)
    if isinstance(u, float):
        if not math.isfinite(u):
            raise ValueError(f"u must be finite, got {u}")
        return Fraction(u)
    if isinstance(u, str):
        return Fraction(u)
    raise ValueError(f"cannot interpret {u!r} as a rational")


def _check_u(u) -> Fraction:
    uf = as_fraction(u)
    if not 0 < uf <= Fraction(1, 2):
        raise ValueError(f"need 0 < u <= 1/2, got {uf}")
    return uf


def edge_boundary(graph: MultiGraph, subset) -> CutReport:
    """Count inner and crossing edges for ``subset``.

    Loops never cross.  The volume identity
    2*e_inner + e_boundary == vol(S) holds, shifted by one when the
    weight-1 loop of a tilde graph sits inside S (it counts once in the
    volume but is a full inner edge).
    """
    sset = frozenset(subset)
    for v in sset:
        if not 1 <= v <= graph.n:
            raise ValueError(f"vertex {v} out of range 1..{graph.n}")
    inner = 0
    boundary = 0
    for u, v, _t in graph.edges:
        inu = u in sset
        inv = v in sset
        if inu and inv:
            inner += 1
        elif inu or inv:
            boundary += 1
    vol = graph.vol_of(sset)
    ratio = Fraction(boundary, len(sset)) if sset else None
    return CutReport(
        subset=sset, e_inner=inner, e_boundary=boundary, vol=vol, ratio=ratio
    )


def _gray_flip_order(n: int):
    """Yield (vertex_bit, ...) flip sequence of the reflected Gray code."""
    for i in range(1, 1 << n):
        yield (i & -i).bit_length() - 1


def exact_expansion(
    graph: MultiGraph, u, limit: int = EXACT_SUBSET_LIMIT
) -> ExpansionResult:
    """Minimum expansion ratio over subsets of size 1..floor(u*n).

    Exhaustive and exact; refuses graphs with more than ``limit``
    vertices (use :func:`sampled_expansion` there).
    """
    uf = _check_u(u)
    n = graph.n
    if n > limit:
        raise ValueError(
            f"n={n} exceeds the exhaustive limit {limit}; use sampled_expansion"
        )
    k_max = (uf * n).numerator // (uf * n).denominator
    if k_max < 1:
        return ExpansionResult(
            u=uf, alpha=math.inf, witness=None, method=SearchMethod.EXHAUSTIVE
        )
    adj = graph.adjacency
    in_s = [False] * (n + 1)
    cur: set[int] = set()
    size = 0
    boundary = 0
    best_bnd = -1
    best_size = 0
    best_subset: tuple[int, ...] | None = None
    for bit in _gray_flip_order(n):
        w = bit + 1
        if in_s[w]:
            in_s[w] = False
            cur.discard(w)
            size -= 1
            for nb, mult in adj[w]:
                boundary += mult if in_s[nb] else -mult
        else:
            for nb, mult in adj[w]:
                boundary += -mult if in_s[nb] else mult
            in_s[w] = True
            cur.add(w)
            size += 1
        if 1 <= size <= k_max:
            if best_subset is None or boundary * best_size < best_bnd * size:
                best_bnd, best_size = boundary, size
                best_subset = tuple(sorted(cur))
            elif boundary * best_size == best_bnd * size:
                cand = tuple(sorted(cur))
                if cand < best_subset:
                    best_bnd, best_size = boundary, size
                    best_subset = cand
    assert best_subset is not None
    return ExpansionResult(
        u=uf,
        alpha=Fraction(best_bnd, best_size),
        witness=frozenset(best_subset),
        method=SearchMethod.EXHAUSTIVE,
    )


def expansion_profile(
    graph: MultiGraph, limit: int = EXACT_SUBSET_LIMIT
) -> dict[int, Fraction]:
    """Map k -> alpha_{k/n} for k = 1..floor(n/2), in one subset sweep.

    The values are non-increasing in k by construction.
    """
    n = graph.n
    if n > limit:
        raise ValueError(f"n={n} exceeds the exhaustive limit {limit}")
    half = n // 2
    if half < 1:
        return {}
    adj = graph.adjacency
    in_s = [False] * (n + 1)
    size = 0
    boundary = 0
    best = [None] * (half + 1)  # min boundary per subset size
    for bit in _gray_flip_order(n):
        w = bit + 1
        if in_s[w]:
            in_s[w] = False
            size -= 1
            for nb, mult in adj[w]:
                boundary += mult if in_s[nb] else -mult
        else:
            for nb, mult in adj[w]:
                boundary += -mult if in_s[nb] else mult
            in_s[w] = True
            size += 1
        if 1 <= size <= half and (best[size] is None or boundary < best[size]):
            best[size] = boundary
    profile: dict[int, Fraction] = {}
    running: Fraction | None = None
    for k in range(1, half + 1):
        cand = Fraction(best[k], k)
        running = cand if running is None else min(running, cand)
        profile[k] = running
    return profile


def _boundary_of(graph: MultiGraph, in_s: list[bool]) -> int:
    boundary = 0
    for u, v, _t in graph.edges:
        if u != v and in_s[u] != in_s[v]:
            boundary += 1
    return boundary


def _flip_delta(adj, in_s: list[bool], w: int) -> int:
    """Boundary change if vertex w flips (enter when outside, leave when in)."""
    delta = 0
    if in_s[w]:
        for nb, mult in adj[w]:
            delta += mult if in_s[nb] else -mult
    else:
        for nb, mult in adj[w]:
            delta += -mult if in_s[nb] else mult
    return delta


def sampled_expansion(
    graph: MultiGraph, u, trials: int, seed: int
) -> ExpansionResult:
    """Randomized upper estimate of alpha_u.

    Each trial draws a random admissible subset and runs greedy local
    descent (vertex adds, removes, swaps) until the ratio stops
    improving.  Every candidate is an admissible subset, so the returned
    value is always >= the true alpha_u.
    """
    uf = _check_u(u)
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    seed = _check_seed(seed)
    n = graph.n
    k_max = (uf * n).numerator // (uf * n).denominator
    if k_max < 1:
        return ExpansionResult(
            u=uf, alpha=math.inf, witness=None, method=SearchMethod.SAMPLED
        )
    rng = np.random.default_rng(seed)
    adj = graph.adjacency
    best_ratio: Fraction | None = None
    best_subset: tuple[int, ...] | None = None
    for _ in range(trials):
        size = int(rng.integers(1, k_max + 1))
        members = rng.choice(n, size=size, replace=False) + 1
        in_s = [False] * (n + 1)
        for v in members:
            in_s[v] = True
        boundary = _boundary_of(graph, in_s)
        while True:
            cur_ratio = Fraction(boundary, size)
            move = None  # (new_boundary, new_size, kind, w, w2)
            move_ratio = cur_ratio
            for w in range(1, n + 1):
                d = _flip_delta(adj, in_s, w)
                if in_s[w]:
                    if size > 1:
                        cand = Fraction(boundary + d, size - 1)
                        if cand < move_ratio:
                            move_ratio = cand
                            move = (boundary + d, size - 1, "rem", w, 0)
                else:
                    if size < k_max:
                        cand = Fraction(boundary + d, size + 1)
                        if cand < move_ratio:
                            move_ratio = cand
                            move = (boundary + d, size + 1, "add", w, 0)
            # swaps keep the size; evaluate remove w then add w2 exactly
            for w in range(1, n + 1):
                if not in_s[w]:
                    continue
                d1 = _flip_delta(adj, in_s, w)
                in_s[w] = False
                for w2 in range(1, n + 1):
                    if in_s[w2] or w2 == w:
                        continue
                    d2 = _flip_delta(adj, in_s, w2)
                    cand = Fraction(boundary + d1 + d2, size)
                    if cand < move_ratio:
                        move_ratio = cand
                        move = (boundary + d1 + d2, size, "swap", w, w2)
                in_s[w] = True
            if move is None:
                break
            boundary, size, kind, w, w2 = move
            if kind == "rem":
                in_s[w] = False
            elif kind == "add":
                in_s[w] = True
            else:
                in_s[w] = False
                in_s[w2] = True
        subset = tuple(v for v in range(1, n + 1) if in_s[v])
        ratio = Fraction(boundary, size)
        if (
            best_ratio is None
            or ratio < best_ratio
            or (ratio == best_ratio and subset < best_subset)
        ):
            best_ratio = ratio
            best_subset = subset
    assert best_subset is not None and best_ratio is not None
    return ExpansionResult(
        u=uf,
        alpha=best_ratio,
        witness=frozenset(best_subset),
        method=SearchMethod.SAMPLED,
    )
