"""Randomized splitting of cube layers and local-search repair.

A split refines a layer partition: the red layer into p parts and the blue
layer into q parts, giving a candidate coloring for the algebra with p reds
and q blues.  Random splits are drawn with a counter-based SplitMix64 hash
so results are bit-identical across platforms (see `random_split`).  The
violation counter uses the transform route from the cube module; the naive
route doubles as an independent oracle, and any split the hill climber
claims to have solved is re-verified against it before being reported.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .algebra import (
    AlgebraSpec,
    ColorId,
    NeedPair,
    UnionBoundFailure,
    union_bound_failure,
)
from .cube import (
    CubeSubset,
    GroupColoring,
    LayerPartition,
    layer_partition,
    pair_counts,
    pair_counts_naive,
    walsh_hadamard,
    EMBEDDED_B_ELEMENTS,
)

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15  # SplitMix64 stream increment


def _mix64(x: int) -> int:
    """The SplitMix64 output permutation (Steele-Lea-Flood finalizer)."""
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def part_index(seed: int, element: int, parts: int) -> int:
    """Deterministic part draw for one element.

    Two rounds of the SplitMix64 finalizer on (seed, element), reduced mod
    `parts`.  The hash is uniform on 64 bits, so the modulo bias is below
    parts/2^64; every platform and Python version produces the same value.
    """
    return _mix64(_mix64(seed) ^ element) % parts


def trial_seed(seed: int, trial: int) -> int:
    """Per-trial seed: one SplitMix64 step along the stream from `seed`."""
    return _mix64((seed + trial * _GAMMA) & _MASK64)


@dataclass(frozen=True)
class SplitState:
    """A layer partition refined into p red and q blue parts.

    Assignments map every red-layer element to a part index < p, every
    blue-layer element to a part index < q.  `seed` records how the state
    was drawn (0 for states built by hand)."""

    base: LayerPartition
    p: int
    q: int
    seed: int
    red_assign: dict[int, int]
    blue_assign: dict[int, int]

    def __post_init__(self) -> None:
        if self.p < 1 or self.q < 1:
            raise ValueError("p, q >= 1 required")
        if set(self.red_assign) != set(self.base.R.elements()):
            raise ValueError("red assignment must cover exactly the red layer")
        if set(self.blue_assign) != set(self.base.B.elements()):
            raise ValueError("blue assignment must cover exactly the blue layer")
        if any(not 0 <= i < self.p for i in self.red_assign.values()):
            raise ValueError("red part index out of range")
        if any(not 0 <= i < self.q for i in self.blue_assign.values()):
            raise ValueError("blue part index out of range")

    @property
    def spec(self) -> AlgebraSpec:
        return AlgebraSpec(self.p, self.q)

    def part_elements(self, c: ColorId) -> list[int]:
        assign, bound = (
            (self.red_assign, self.p) if c.is_red else (self.blue_assign, self.q)
        )
        if c.index >= bound:
            raise ValueError(f"{c!r} out of range")
        return sorted(x for x, i in assign.items() if i == c.index)

    def parts(self) -> dict[ColorId, CubeSubset]:
        """Parts as cube subsets (possibly empty ones included)."""
        from .algebra import blue, red

        m = self.base.m
        out = {}
        for i in range(self.p):
            out[red(i)] = CubeSubset.from_elements(m, self.part_elements(red(i)))
        for i in range(self.q):
            out[blue(i)] = CubeSubset.from_elements(m, self.part_elements(blue(i)))
        return out

    def to_coloring(self) -> GroupColoring:
        """As a GroupColoring; fails if any part is empty."""
        return GroupColoring(self.base.m, self.parts())


def random_split(part: LayerPartition, p: int, q: int, seed: int) -> SplitState:
    """Independently uniform part assignment for every layer element."""
    if p < 1 or q < 1:
        raise ValueError("p, q >= 1 required")
    red_assign = {x: part_index(seed, x, p) for x in part.R.elements()}
    blue_assign = {x: part_index(seed, x, q) for x in part.B.elements()}
    return SplitState(part, p, q, seed, red_assign, blue_assign)


def split_from_coloring(
    base: LayerPartition, coloring: GroupColoring, p: int, q: int
) -> SplitState:
    """View an existing coloring as a split of `base` (parts must refine it)."""
    from .algebra import blue, red

    red_assign: dict[int, int] = {}
    blue_assign: dict[int, int] = {}
    for i in range(p):
        for x in coloring.parts[red(i)].elements():
            red_assign[x] = i
    for i in range(q):
        for x in coloring.parts[blue(i)].elements():
            blue_assign[x] = i
    return SplitState(base, p, q, 0, red_assign, blue_assign)


def embedded_split_state() -> SplitState:
    """The shipped 1024-point coloring viewed as a (p=1, q=2) split at k=3."""
    from .cube import embedded_split_1024

    return split_from_coloring(layer_partition(3), embedded_split_1024(), 1, 2)


# ---------------------------------------------------------------------------
# violation counting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ViolationReport:
    """Everything keeping a split from being a representation.

    `unsatisfied` lists (element, need) pairs with no witness; `forbidden`
    lists blue elements covered by an all-blue sumset; `empty_parts` lists
    colors realized by no element.  Entry order is deterministic: element
    ascending, then need pairs in color-rank order.
    """

    unsatisfied: tuple[tuple[int, NeedPair], ...]
    forbidden: tuple[tuple[int, NeedPair], ...]
    empty_parts: tuple[ColorId, ...]

    @property
    def count(self) -> int:
        return len(self.unsatisfied) + len(self.forbidden) + len(self.empty_parts)

    @property
    def solved(self) -> bool:
        return self.count == 0


def _report_from_counts(
    spec: AlgebraSpec,
    parts: dict[ColorId, CubeSubset],
    counts: dict[tuple[ColorId, ColorId], np.ndarray],
) -> ViolationReport:
    colors = spec.diversity_colors()
    rank = {c: i for i, c in enumerate(colors)}
    unsat: list[tuple[int, int, int, NeedPair]] = []
    forbid: list[tuple[int, int, int, NeedPair]] = []
    empty = tuple(c for c in colors if not parts[c])
    from .algebra import needs_of

    for c3 in colors:
        targets = parts[c3].to_array()
        if targets.size == 0:
            continue
        for pair in needs_of(spec, c3):
            cvec = counts[(pair.first, pair.second)]
            for z in targets[cvec[targets] == 0]:
                unsat.append((int(z), rank[pair.first], rank[pair.second], pair))
        if c3.is_blue:
            for b1 in colors:
                if not b1.is_blue:
                    continue
                for b2 in colors:
                    if not b2.is_blue:
                        continue
                    pair = NeedPair(b1, b2)
                    cvec = counts[(b1, b2)]
                    for z in targets[cvec[targets] > 0]:
                        forbid.append((int(z), rank[b1], rank[b2], pair))
    unsat.sort(key=lambda t: t[:3])
    forbid.sort(key=lambda t: t[:3])
    return ViolationReport(
        tuple((z, pair) for z, _, _, pair in unsat),
        tuple((z, pair) for z, _, _, pair in forbid),
        empty,
    )


def _all_pair_counts(
    spec: AlgebraSpec, parts: dict[ColorId, CubeSubset], m: int, naive: bool
) -> dict[tuple[ColorId, ColorId], np.ndarray]:
    colors = spec.diversity_colors()
    if naive:
        return {
            (c1, c2): pair_counts_naive(parts[c1], parts[c2])
            for c1 in colors
            for c2 in colors
        }
    # one forward transform per part, one inverse per ordered pair
    fwd = {c: walsh_hadamard(parts[c].indicator()) for c in colors}
    out = {}
    for c1 in colors:
        for c2 in colors:
            prod = walsh_hadamard(fwd[c1] * fwd[c2])
            out[(c1, c2)] = prod >> m
    return out


def violations(s: SplitState, spec: AlgebraSpec) -> ViolationReport:
    """Exact violation report via the transform route."""
    if (spec.p, spec.q) != (s.p, s.q):
        raise ValueError("spec shape must match the split's (p, q)")
    parts = s.parts()
    counts = _all_pair_counts(spec, parts, s.base.m, naive=False)
    return _report_from_counts(spec, parts, counts)


def violations_naive(s: SplitState, spec: AlgebraSpec) -> ViolationReport:
    """Same report via direct pair enumeration; the independent oracle."""
    if (spec.p, spec.q) != (s.p, s.q):
        raise ValueError("spec shape must match the split's (p, q)")
    parts = s.parts()
    counts = _all_pair_counts(spec, parts, s.base.m, naive=True)
    return _report_from_counts(spec, parts, counts)


# ---------------------------------------------------------------------------
# hill climbing
# ---------------------------------------------------------------------------


class _ClimbEngine:
    """Incremental violation bookkeeping for single-element moves.

    Maintains per-color indicators and all ordered pair-count vectors;
    moving one element updates each affected count vector with one gather
    instead of a fresh transform.  `check()` recomputes everything from
    scratch, so tests can pin the incremental arithmetic to the pure route.
    """

    def __init__(self, state: SplitState, spec: AlgebraSpec):
        self.spec = spec
        self.base = state.base
        self.p, self.q = state.p, state.q
        self.m = state.base.m
        self.n = 1 << self.m
        self.colors = spec.diversity_colors()
        self.rank = {c: i for i, c in enumerate(self.colors)}
        parts = state.parts()
        self.ind = {c: parts[c].indicator() for c in self.colors}
        self.counts = _all_pair_counts(spec, parts, self.m, naive=False)
        from .algebra import needs_of

        self.needs = {c: needs_of(spec, c) for c in self.colors}
        self.blue_pairs = [
            NeedPair(c1, c2)
            for c1 in self.colors
            if c1.is_blue
            for c2 in self.colors
            if c2.is_blue
        ]
        # which colors an element may take, by layer
        self.red_colors = [c for c in self.colors if c.is_red]
        self.blue_colors = [c for c in self.colors if c.is_blue]
        self.layer_ind = {
            "R": state.base.R.indicator().astype(bool),
            "B": state.base.B.indicator().astype(bool),
        }

    def _gather(self, c: ColorId, e: int) -> np.ndarray:
        idx = np.bitwise_xor(np.arange(self.n), e)
        return self.ind[c][idx]

    def remove(self, c: ColorId, e: int) -> None:
        for d in self.colors:
            if d == c:
                continue
            g = self._gather(d, e)
            self.counts[(c, d)] -= g
            self.counts[(d, c)] -= g
        self.counts[(c, c)] -= self._gather(c, e)  # pairs (e, x), x incl. e
        self.ind[c][e] = 0
        self.counts[(c, c)] -= self._gather(c, e)  # pairs (x, e), x != e

    def add(self, c: ColorId, e: int) -> None:
        self.counts[(c, c)] += self._gather(c, e)  # pairs (x, e), x != e
        self.ind[c][e] = 1
        self.counts[(c, c)] += self._gather(c, e)  # pairs (e, x), x incl. e
        for d in self.colors:
            if d == c:
                continue
            g = self._gather(d, e)
            self.counts[(c, d)] += g
            self.counts[(d, c)] += g

    def violation_count(self) -> int:
        total = 0
        for c3 in self.colors:
            ind3 = self.ind[c3].astype(bool)
            if not ind3.any():
                total += 1
                continue
            for pair in self.needs[c3]:
                total += int(np.count_nonzero(ind3 & (self.counts[pair] == 0)))
            if c3.is_blue:
                for pair in self.blue_pairs:
                    total += int(np.count_nonzero(ind3 & (self.counts[pair] > 0)))
        return total

    def unsatisfied_items(self) -> list[tuple[int, NeedPair]]:
        items = []
        for c3 in self.colors:
            ind3 = self.ind[c3].astype(bool)
            for pair in self.needs[c3]:
                for z in np.nonzero(ind3 & (self.counts[pair] == 0))[0]:
                    items.append((int(z), pair))
            if c3.is_blue:
                for pair in self.blue_pairs:
                    for z in np.nonzero(ind3 & (self.counts[pair] > 0))[0]:
                        items.append((int(z), pair))
        return items

    def move_pool(self) -> np.ndarray:
        """Elements implicated in some violation and free to change part."""
        pool = np.zeros(self.n, dtype=bool)
        movable = np.zeros(self.n, dtype=bool)
        if self.p > 1:
            movable |= self.layer_ind["R"]
        if self.q > 1:
            movable |= self.layer_ind["B"]
        for z, pair in self.unsatisfied_items():
            pool[z] = True
            la = self.layer_ind["R"] if pair.first.is_red else self.layer_ind["B"]
            lb = self.layer_ind["R"] if pair.second.is_red else self.layer_ind["B"]
            idx = np.bitwise_xor(np.arange(self.n), z)
            pool |= la & lb[idx]
            pool |= lb & la[idx]
        pool &= movable
        pool[0] = False
        return pool

    def color_of(self, e: int) -> ColorId:
        for c in self.colors:
            if self.ind[c][e]:
                return c
        raise KeyError(e)

    def options_for(self, e: int) -> list[ColorId]:
        return self.red_colors if self.layer_ind["R"][e] else self.blue_colors

    def to_state(self, seed: int) -> SplitState:
        red_assign = {}
        for c in self.red_colors:
            for e in np.nonzero(self.ind[c])[0]:
                red_assign[int(e)] = c.index
        blue_assign = {}
        for c in self.blue_colors:
            for e in np.nonzero(self.ind[c])[0]:
                blue_assign[int(e)] = c.index
        return SplitState(self.base, self.p, self.q, seed, red_assign, blue_assign)


def hill_climb(
    s: SplitState,
    spec: AlgebraSpec,
    budget: int,
    seed: int,
    anneal: bool = False,
    start_temp: float = 2.0,
    cooling: float = 0.9995,
) -> tuple[SplitState, list[tuple[int, int]]]:
    """Single-element local search toward zero violations.

    Each proposal reassigns one element drawn uniformly from the pool of
    elements implicated in a current violation (as unsatisfied target or
    potential witness) to a uniformly drawn other part of its layer.
    Moves are accepted when the violation count does not increase, so the
    trace of (move index, count) at each accepted move is nonincreasing.
    With `anneal`, uphill moves are also accepted with probability
    exp(-delta/T) under a geometric cooling schedule, and the trace may
    increase.  Stops at zero violations (in which case the result is
    re-verified by the naive counting route and a bookkeeping divergence
    raises) or when the budget runs out; if no violating element is free
    to move (for instance p = 1 with only red-target violations), the
    climb stops early.
    """
    if budget < 0:
        raise ValueError("budget >= 0 required")
    if (spec.p, spec.q) != (s.p, s.q):
        raise ValueError("spec shape must match the split's (p, q)")
    engine = _ClimbEngine(s, spec)
    count = engine.violation_count()
    trace: list[tuple[int, int]] = []
    if count == 0:
        return s, trace
    rng = random.Random(seed)
    temp = start_temp
    pool = np.nonzero(engine.move_pool())[0]
    for move in range(budget):
        if count == 0 or pool.size == 0:
            break
        e = int(pool[rng.randrange(pool.size)])
        old = engine.color_of(e)
        options = [c for c in engine.options_for(e) if c != old]
        new = options[rng.randrange(len(options))]
        engine.remove(old, e)
        engine.add(new, e)
        candidate = engine.violation_count()
        accept = candidate <= count
        if not accept and anneal and temp > 1e-12:
            accept = rng.random() < np.exp(-(candidate - count) / temp)
        if accept:
            count = candidate
            trace.append((move, count))
            pool = np.nonzero(engine.move_pool())[0]
        else:
            engine.remove(new, e)
            engine.add(old, e)
        if anneal:
            temp *= cooling
    final = engine.to_state(s.seed)
    if count == 0:
        report = violations_naive(final, spec)
        if not report.solved:
            raise RuntimeError(
                "incremental bookkeeping diverged from the naive recount"
            )
    return final, trace


# ---------------------------------------------------------------------------
# Monte Carlo estimation
# ---------------------------------------------------------------------------


class TrialResult(NamedTuple):
    trial: int
    seed: int
    violations: int
    solved: bool


@dataclass(frozen=True)
class MonteCarloResult:
    successes: int
    trials: int
    prediction: UnionBoundFailure | None  # None for the unsplit p = q = 1 case
    rows: tuple[TrialResult, ...]

    @property
    def rate(self) -> float:
        return self.successes / self.trials


SEARCH_CSV_HEADER = "trial,seed,violations,solved"


def monte_carlo(
    part: LayerPartition, p: int, q: int, trials: int, seed: int
) -> MonteCarloResult:
    """Estimate how often a uniform random split works outright.

    Per-trial seeds come from `trial_seed`, so the result is independent
    of execution order and identical across platforms.  The prediction
    column is the strict union bound at n = max(p, q), the failure
    probability the split count is compared against.
    """
    if trials < 1:
        raise ValueError("trials >= 1 required")
    spec = AlgebraSpec(p, q)
    rows = []
    successes = 0
    for t in range(trials):
        ts = trial_seed(seed, t)
        report = violations(random_split(part, p, q, ts), spec)
        solved = report.solved
        successes += solved
        rows.append(TrialResult(t, ts, report.count, solved))
    n = max(p, q)
    prediction = union_bound_failure(n, part.k) if n >= 2 else None
    return MonteCarloResult(successes, trials, prediction, tuple(rows))


def iter_trial_csv(result: MonteCarloResult) -> Iterator[str]:
    yield SEARCH_CSV_HEADER
    for row in result.rows:
        yield f"{row.trial},{row.seed},{row.violations},{int(row.solved)}"
