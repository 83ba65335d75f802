"""Exact and Monte-Carlo checks of the cut-event probability bound.

For a fixed vertex subset S with |S| = k and a fixed set A of arrival
indices with |A| < h k, the probability that the boundary edge set of S
is exactly A satisfies

    P(E(S, S-compl) = A) <= C(hk, |A|) / C(hn - |A|, hk - |A|).

Events are identified by arrival index: edge e_t is "in the boundary"
when its merged endpoints straddle S.  e_1 is always a loop at vertex 1,
so any A containing arrival 1 has probability zero.

The exact checker enumerates every arrival log with its rational
probability (factorial growth caps this at h*n <= 8); the batch scanner
shares one enumeration across all subsets by accumulating integer
probability numerators per (subset, boundary-set) cell, which keeps the
full h*n <= 8 sweep exact and fast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from pamod.models import (
    Model,
    _check_model,
    _check_seed,
    sample_target_matrix,
    vertex_of,
)

EXACT_EVENT_LIMIT = 8


@dataclass(frozen=True)
class CutEventSpec:
    """A (subset, arrival-set) event for the h, n process.

    The constructor enforces |A| < h|S|; in particular |A| = h|S| is
    rejected, since the bound's denominator degenerates there and the
    inequality is not claimed.
    """

    h: int
    n: int
    subset: frozenset[int]
    arrivals: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "subset", frozenset(self.subset))
        object.__setattr__(self, "arrivals", frozenset(self.arrivals))
        if self.h < 1 or self.n < 1:
            raise ValueError(f"need h >= 1 and n >= 1, got h={self.h}, n={self.n}")
        if not self.subset:
            raise ValueError("subset must be nonempty")
        for v in self.subset:
            if not 1 <= v <= self.n:
                raise ValueError(f"vertex {v} out of range 1..{self.n}")
        hn = self.h * self.n
        for t in self.arrivals:
            if not 1 <= t <= hn:
                raise ValueError(f"arrival {t} out of range 1..{hn}")
        if len(self.arrivals) >= self.h * len(self.subset):
            raise ValueError(
                f"|A| = {len(self.arrivals)} must be < h|S| = "
                f"{self.h * len(self.subset)}"
            )


@dataclass(frozen=True)
class MCEstimate:
    trials: int
    hits: int
    p_hat: float
    std_err: float
    bound: Fraction


@dataclass(frozen=True)
class CutEventScan:
    model: Model
    h: int
    n: int
    pairs_checked: int
    violations: tuple[tuple[frozenset[int], frozenset[int]], ...]


def cut_event_bound(h: int, n: int, k: int, a: int) -> Fraction:
    """C(hk, a) / C(hn - a, hk - a), exactly.

    Can exceed 1 for large a (the bound is then vacuous but still
    valid).
    """
    if h < 1 or n < 1:
        raise ValueError(f"need h >= 1 and n >= 1, got h={h}, n={n}")
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}")
    if not 0 <= a < h * k:
        raise ValueError(f"need 0 <= a < h*k = {h * k}, got a={a}")
    return Fraction(math.comb(h * k, a), math.comb(h * n - a, h * k - a))


def spec_bound(spec: CutEventSpec) -> Fraction:
    return cut_event_bound(spec.h, spec.n, len(spec.subset), len(spec.arrivals))


def _crossing(spec: CutEventSpec, t: int, target: int) -> bool:
    a = vertex_of(t, spec.h) in spec.subset
    b = vertex_of(target, spec.h) in spec.subset
    return a != b


def exact_cut_event(
    model: Model, spec: CutEventSpec, limit: int = EXACT_EVENT_LIMIT
) -> Fraction:
    """P(boundary edge set of S equals A), by exhaustive enumeration.

    Walks every arrival log, pruning as soon as a placed edge's
    crossing status contradicts A.  Exact rational output; limited to
    h*n <= ``limit``.
    """
    model = _check_model(model)
    hn = spec.h * spec.n
    if hn > limit:
        raise ValueError(
            f"h*n = {hn} exceeds the enumeration limit {limit}; "
            "use estimate_cut_event"
        )
    # e_1 is a loop at vertex 1 and never crosses
    if _crossing(spec, 1, 1) != (1 in spec.arrivals):
        return Fraction(0)
    if model is Model.STANDARD:
        denom = math.prod(2 * tau - 1 for tau in range(2, hn + 1))
        start_deg = [2]
    else:
        denom = math.prod(2 * tau - 3 for tau in range(2, hn + 1))
        start_deg = [1]
    want = spec.arrivals
    total = 0

    def rec(degs: list[int], num: int, tau: int) -> None:
        nonlocal total
        if tau > hn:
            total += num
            return
        need = tau in want
        for s in range(1, tau):
            if _crossing(spec, tau, s) != need:
                continue
            w = degs[s - 1]
            degs2 = list(degs)
            degs2[s - 1] += 1
            degs2.append(1)
            rec(degs2, num * w, tau + 1)
        if model is Model.STANDARD and not need:
            # self-loop at tau never crosses
            rec(degs + [2], num, tau + 1)

    rec(start_deg, 1, 2)
    return Fraction(total, denom)


def estimate_cut_event(
    model: Model, spec: CutEventSpec, trials: int, seed: int
) -> MCEstimate:
    """Monte-Carlo frequency of the event, with its analytic bound attached."""
    model = _check_model(model)
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    seed = _check_seed(seed)
    hn = spec.h * spec.n
    mat = sample_target_matrix(model, hn, trials, seed)
    h = spec.h
    sub = spec.subset
    want = spec.arrivals
    side = [vertex_of(m, h) in sub for m in range(0, hn + 1)]  # index 0 unused
    hits = 0
    for row in mat:
        ok = True
        for t in range(1, hn + 1):
            if (side[t] != side[row[t - 1]]) != (t in want):
                ok = False
                break
        if ok:
            hits += 1
    p_hat = hits / trials
    std_err = math.sqrt(p_hat * (1.0 - p_hat) / trials)
    return MCEstimate(
        trials=trials, hits=hits, p_hat=p_hat, std_err=std_err, bound=spec_bound(spec)
    )


def _enumerate_logs(model: Model, hn: int):
    """All arrival logs with integer probability numerators.

    Returns (targets array of shape (L, hn), numerators array (L,),
    denominator).  numerators sum to the denominator.
    """
    if model is Model.STANDARD:
        denom = math.prod(2 * tau - 1 for tau in range(2, hn + 1))
        start_deg = [2]
    else:
        denom = math.prod(2 * tau - 3 for tau in range(2, hn + 1))
        start_deg = [1]
    logs: list[list[int]] = []
    nums: list[int] = []

    def rec(targets: list[int], degs: list[int], num: int, tau: int) -> None:
        if tau > hn:
            logs.append(targets)
            nums.append(num)
            return
        for s in range(1, tau):
            degs2 = list(degs)
            degs2[s - 1] += 1
            degs2.append(1)
            rec(targets + [s], degs2, num * degs[s - 1], tau + 1)
        if model is Model.STANDARD:
            rec(targets + [tau], degs + [2], num, tau + 1)

    rec([1], start_deg, 1, 2)
    return (
        np.array(logs, dtype=np.int64),
        np.array(nums, dtype=np.int64),
        denom,
    )


def scan_cut_events(
    model: Model, h: int, n: int, limit: int = EXACT_EVENT_LIMIT
) -> CutEventScan:
    """Verify the bound for every proper nonempty S and every admissible A.

    One log enumeration is shared across subsets: per subset the
    boundary arrival set of each log is packed into a bitmask, and
    integer probability numerators are accumulated per mask.  Every
    accumulated event with |A| < h|S| is compared exactly (integer
    cross-multiplication) against its binomial bound; events that never
    occur hold trivially since the bound is positive.
    """
    model = _check_model(model)
    if h < 1 or n < 1:
        raise ValueError(f"need h >= 1 and n >= 1, got h={h}, n={n}")
    hn = h * n
    if hn > limit:
        raise ValueError(f"h*n = {hn} exceeds the enumeration limit {limit}")
    targets, nums, denom = _enumerate_logs(model, hn)
    assert int(nums.sum()) == denom
    # vertex (0-based bit) of each mini-vertex, and of each log's targets
    mini_bit = np.array([0] + [vertex_of(m, h) - 1 for m in range(1, hn + 1)])
    target_bits = mini_bit[targets]  # (L, hn)
    own_bits = mini_bit[1 : hn + 1]  # (hn,)
    pairs_checked = 0
    violations: list[tuple[frozenset[int], frozenset[int]]] = []
    for mask in range(1, (1 << n) - 1):
        k = mask.bit_count()
        event = np.zeros(len(targets), dtype=np.int64)
        for t in range(1, hn + 1):
            cu = (mask >> int(own_bits[t - 1])) & 1
            cv = (mask >> target_bits[:, t - 1]) & 1
            event |= (cu ^ cv) << (t - 1)
        mass = np.bincount(event, weights=nums.astype(np.float64), minlength=1 << hn)
        # numerators sum to denom < 2^53, so float64 accumulation is exact
        mass_int = mass.astype(np.int64)
        subset = frozenset(v + 1 for v in range(n) if (mask >> v) & 1)
        for b in np.nonzero(mass_int)[0]:
            a = int(b).bit_count()
            if a >= h * k:
                continue
            pairs_checked += 1
            lhs = int(mass_int[b]) * math.comb(hn - a, h * k - a)
            rhs = denom * math.comb(h * k, a)
            if lhs > rhs:
                arrivals = frozenset(
                    t for t in range(1, hn + 1) if (int(b) >> (t - 1)) & 1
                )
                violations.append((subset, arrivals))
    return CutEventScan(
        model=model,
        h=h,
        n=n,
        pairs_checked=pairs_checked,
        violations=tuple(violations),
    )
