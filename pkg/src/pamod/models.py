"""Two preferential attachment multigraph processes.

Both processes grow a tree on h*n "mini-vertices" one edge at a time and
are then merged into a multigraph on n vertices by mapping mini-vertex m
to vertex ceil(m/h).  Edge e_t arrives at step t and joins mini-vertex t
to a random earlier mini-vertex, chosen proportionally to current degree.

The two variants differ in how self-loops are treated at the mini level:

* ``Model.STANDARD``: e_1 is a loop at mini-vertex 1 of weight 2.  When
  e_{t+1} is placed, target s <= t is chosen with probability
  deg(s)/(2t+1) and a fresh self-loop at t+1 with probability 1/(2t+1).
* ``Model.TILDE``: e_1 is a loop at mini-vertex 1 contributing only 1 to
  its degree, and later steps never place self-loops at the mini level:
  e_{t+1} attaches to s <= t with probability deg(s)/(2t-1).

Sampling uses the endpoint-list realization: a list L holds both
endpoints of every placed edge (only one copy of mini-vertex 1 for the
weight-1 loop), so a uniform draw from L is a degree-proportional draw.
This is O(1) per step and exact.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property

import numpy as np

MAX_SEED = 2**64

# Exhaustive enumeration of arrival logs grows factorially; t_max = 6
# already means 720 logs for the standard model.
EXACT_DISTRIBUTION_LIMIT = 6


class Model(str, Enum):
    """Tags for the two attachment processes (wire names are fixed)."""

    STANDARD = "standard"
    TILDE = "tilde"


def _check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise ValueError(f"seed must be an integer, got {seed!r}")
    if not 0 <= seed < MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return int(seed)


def _check_model(model: Model) -> Model:
    if not isinstance(model, Model):
        try:
            return Model(model)
        except ValueError:
            raise ValueError(f"unknown model {model!r}") from None
    return model


def vertex_of(mini: int, h: int) -> int:
    """Vertex that mini-vertex ``mini`` merges into (1-based)."""
    return (mini + h - 1) // h


@dataclass(frozen=True)
class ArrivalLog:
    """Full record of one run of an attachment process.

    ``targets[t-1]`` is the mini-vertex that edge e_t attached to.  For
    the standard model targets[t-1] == t encodes the self-loop option;
    the tilde model only allows targets strictly below t (after e_1).
    """

    model: Model
    h: int
    n: int
    targets: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "model", _check_model(self.model))
        if self.h < 1 or self.n < 1:
            raise ValueError(f"need h >= 1 and n >= 1, got h={self.h}, n={self.n}")
        if len(self.targets) != self.h * self.n:
            raise ValueError(
                f"log length {len(self.targets)} != h*n = {self.h * self.n}"
            )
        if self.targets[0] != 1:
            raise ValueError("edge e_1 is always the initial loop at mini-vertex 1")
        for t, s in enumerate(self.targets, start=1):
            hi = t if self.model is Model.STANDARD else max(t - 1, 1)
            if not 1 <= s <= hi:
                raise ValueError(f"target {s} out of range at arrival {t}")

    def target(self, t: int) -> int:
        return self.targets[t - 1]


@dataclass(frozen=True)
class MultiGraph:
    """Undirected multigraph with loops, vertices 1..n.

    Each edge is (u, v, t) with u <= v and t its arrival index.  Loops
    contribute 2 to the degree, except that when ``first_loop_weight1``
    is set the loop with arrival index 1 contributes only 1 (the tilde
    model's initial loop).  Generation metadata (model, h, seed) rides
    along when known; handcrafted fixtures may leave it unset.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...]
    first_loop_weight1: bool = False
    model: Model | None = None
    h: int | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")
        for u, v, t in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
            if u > v:
                raise ValueError(f"edge ({u},{v},{t}) must be stored with u <= v")

    @classmethod
    def from_pairs(
        cls, n: int, pairs, *, first_loop_weight1: bool = False
    ) -> "MultiGraph":
        """Build a fixture graph from (u, v) pairs; arrivals are 1,2,..."""
        edges = tuple(
            (min(u, v), max(u, v), t) for t, (u, v) in enumerate(pairs, start=1)
        )
        return cls(n=n, edges=edges, first_loop_weight1=first_loop_weight1)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        """Degree per vertex, index 0 unused."""
        deg = [0] * (self.n + 1)
        for u, v, t in self.edges:
            if u == v:
                deg[u] += 1 if (self.first_loop_weight1 and t == 1) else 2
            else:
                deg[u] += 1
                deg[v] += 1
        return tuple(deg)

    @property
    def volume(self) -> int:
        return sum(self.degrees)

    def degree(self, v: int) -> int:
        return self.degrees[v]

    def vol_of(self, subset) -> int:
        deg = self.degrees
        return sum(deg[v] for v in subset)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Non-loop neighbor multiplicities: adjacency[v] = ((nb, mult), ...)."""
        counts: list[dict[int, int]] = [dict() for _ in range(self.n + 1)]
        for u, v, _t in self.edges:
            if u != v:
                counts[u][v] = counts[u].get(v, 0) + 1
                counts[v][u] = counts[v].get(u, 0) + 1
        return tuple(tuple(sorted(c.items())) for c in counts)

    @cached_property
    def loop_counts(self) -> tuple[int, ...]:
        loops = [0] * (self.n + 1)
        for u, v, _t in self.edges:
            if u == v:
                loops[u] += 1
        return tuple(loops)


def merge(log: ArrivalLog) -> MultiGraph:
    """Collapse a mini-vertex log into the multigraph on n vertices.

    Mini-vertex m maps to vertex ceil(m/h); every one of the h*n edges
    is kept, so mini-level edges inside a block become loops.
    """
    h = log.h
    edges = []
    for t, s in enumerate(log.targets, start=1):
        a = vertex_of(t, h)
        b = vertex_of(s, h)
        edges.append((min(a, b), max(a, b), t))
    return MultiGraph(
        n=log.n,
        edges=tuple(edges),
        first_loop_weight1=(log.model is Model.TILDE),
        model=log.model,
        h=h,
        seed=None,
    )


def _sample_targets(model: Model, length: int, rng: np.random.Generator) -> list[int]:
    """One run of the attachment process, as a list of targets."""
    targets = [1]
    if model is Model.STANDARD:
        ends = [1, 1]
        for tau in range(2, length + 1):
            # denominator 2*tau - 1: the 2(tau-1) endpoint slots plus the
            # unit weight of a fresh self-loop at mini-vertex tau
            r = int(rng.integers(1, 2 * tau))
            s = ends[r - 1] if r <= 2 * tau - 2 else tau
            targets.append(s)
            ends.append(tau)
            ends.append(s)
    else:
        ends = [1]
        for tau in range(2, length + 1):
            s = ends[int(rng.integers(0, 2 * tau - 3))]
            targets.append(s)
            ends.append(tau)
            ends.append(s)
    return targets


def generate(model: Model, h: int, n: int, seed: int) -> tuple[ArrivalLog, MultiGraph]:
    """Sample one graph.

    Randomness comes from a PCG64 generator seeded with ``seed`` alone,
    so identical (model, h, n, seed) inputs reproduce the same log
    bit-for-bit.

    Returns:
        The arrival log and its merged multigraph.
    """
    model = _check_model(model)
    if h < 1 or n < 1:
        raise ValueError(f"need h >= 1 and n >= 1, got h={h}, n={n}")
    seed = _check_seed(seed)
    rng = np.random.default_rng(seed)
    targets = _sample_targets(model, h * n, rng)
    log = ArrivalLog(model=model, h=h, n=n, targets=tuple(targets))
    graph = dataclasses.replace(merge(log), seed=seed)
    return log, graph


def sample_target_matrix(
    model: Model, length: int, trials: int, seed: int
) -> np.ndarray:
    """Sample ``trials`` independent target sequences as a (trials, length) array.

    Column draws are batched (the step-t denominator does not depend on
    the history), which keeps large Monte-Carlo runs cheap.  The stream
    differs from per-trial ``generate`` calls; reproducibility is per
    (model, length, trials, seed).
    """
    model = _check_model(model)
    seed = _check_seed(seed)
    if length < 1 or trials < 1:
        raise ValueError("need length >= 1 and trials >= 1")
    rng = np.random.default_rng(seed)
    draws = {}
    for tau in range(2, length + 1):
        if model is Model.STANDARD:
            draws[tau] = rng.integers(1, 2 * tau, size=trials)
        else:
            draws[tau] = rng.integers(0, 2 * tau - 3, size=trials)
    out = np.empty((trials, length), dtype=np.int64)
    out[:, 0] = 1
    for i in range(trials):
        if model is Model.STANDARD:
            ends = [1, 1]
            for tau in range(2, length + 1):
                r = draws[tau][i]
                s = ends[r - 1] if r <= 2 * tau - 2 else tau
                out[i, tau - 1] = s
                ends.append(tau)
                ends.append(s)
        else:
            ends = [1]
            for tau in range(2, length + 1):
                s = ends[draws[tau][i]]
                out[i, tau - 1] = s
                ends.append(tau)
                ends.append(s)
    return out


def derive_seed(root_seed: int, index: int) -> int:
    """Derived 64-bit seed for stream ``index`` under ``root_seed``.

    The scheme is SeedSequence entropy (root_seed, index); the derived
    seed is the first 64-bit word.  Trials in a sweep use consecutive
    indices, so reports can record a plain integer seed per row.
    """
    root_seed = _check_seed(root_seed)
    if index < 0:
        raise ValueError(f"stream index must be >= 0, got {index}")
    ss = np.random.SeedSequence([root_seed, index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def exact_small_t_distribution(
    model: Model, t_max: int, limit: int = EXACT_DISTRIBUTION_LIMIT
) -> dict[tuple[int, ...], Fraction]:
    """Exact law of the first ``t_max`` targets, by enumeration.

    Returns a map from target tuples to rational probabilities; the
    values sum to 1.  The law of the log prefix does not depend on h or
    n, only on its length.
    """
    model = _check_model(model)
    if t_max < 1:
        raise ValueError(f"need t_max >= 1, got {t_max}")
    if t_max > limit:
        raise ValueError(
            f"t_max={t_max} exceeds the enumeration limit {limit}; "
            "the table has t_max! entries"
        )
    if model is Model.STANDARD:
        denom = math.prod(2 * tau - 1 for tau in range(2, t_max + 1))
        start_deg = [2]
    else:
        denom = math.prod(2 * tau - 3 for tau in range(2, t_max + 1))
        start_deg = [1]
    table: dict[tuple[int, ...], Fraction] = {}

    def rec(targets: list[int], degs: list[int], num: int, tau: int) -> None:
        if tau > t_max:
            table[tuple(targets)] = Fraction(num, denom)
            return
        for s in range(1, tau):
            degs2 = list(degs)
            degs2[s - 1] += 1
            degs2.append(1)
            rec(targets + [s], degs2, num * degs[s - 1], tau + 1)
        if model is Model.STANDARD:
            rec(targets + [tau], degs + [2], num, tau + 1)

    rec([1], start_deg, 1, 2)
    return table


# ---------------------------------------------------------------------------
# graph file format


def graph_to_json(graph: MultiGraph) -> dict:
    """Wire form of a generated graph; field order is part of the format."""
    if graph.model is None or graph.h is None or graph.seed is None:
        raise ValueError("only generated graphs (model, h, seed known) serialize")
    return {
        "model": graph.model.value,
        "h": graph.h,
        "n": graph.n,
        "seed": graph.seed,
        "edges": [[u, v, t] for u, v, t in graph.edges],
    }


def save_graph(graph: MultiGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph_to_json(graph), fh)
        fh.write("\n")


def graph_from_json(payload: dict) -> MultiGraph:
    try:
        model = Model(payload["model"])
        h = int(payload["h"])
        n = int(payload["n"])
        seed = int(payload["seed"])
        edges = tuple(
            (min(int(u), int(v)), max(int(u), int(v)), int(t))
            for u, v, t in payload["edges"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed graph payload: {exc}") from None
    if len(edges) != h * n:
        raise ValueError(f"expected {h * n} edges, found {len(edges)}")
    arrivals = sorted(t for _u, _v, t in edges)
    if arrivals != list(range(1, h * n + 1)):
        raise ValueError("edge arrival indices must be exactly 1..h*n")
    return MultiGraph(
        n=n,
        edges=edges,
        first_loop_weight1=(model is Model.TILDE),
        model=model,
        h=h,
        seed=seed,
    )


def load_graph(path) -> MultiGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return graph_from_json(json.load(fh))
