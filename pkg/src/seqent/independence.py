"""Exhaustive independence search over built trajectories.

An independence set for a tuple of neighborhoods (A_1 .. A_k) is a set of
times J such that every assignment sigma: J -> {1..k} is realized by one
model point whose iterates visit A_sigma(t) at every t in J. The engine
answers three questions exactly at a finite horizon:

* satisfiable: is one assignment realizable (and by which point),
* is_independence_set: are all assignments realizable,
* max_independence: what is the largest independence-set size up to a cap,
  with a replayable exhaustion certificate when the answer is below the cap.

Searches run over normalized difference shapes (min J = 0). That is sound
and complete for existence questions: shifting an independence set down by
any amount up to its minimum keeps it an independence set (orbit witnesses
shift forward along the orbit, head witnesses shift their index), so a size
without a normalized shape is a size without any set at all.
"""

from __future__ import annotations

import bisect
import heapq
import itertools
import time as _time
from dataclasses import dataclass, field

from .errors import CapExceeded, ResourceBudgetExceeded
from .model import (
    FAMILY_LOG_M,
    KIND_DENSE,
    KIND_HEAD,
    KIND_HEAD_INF,
    ModelPoint,
    NeighborhoodSpec,
    Symbol,
    Trajectory,
    head_member,
    infinity_window,
    orbit_member,
    resolve,
)

DENSE_BITMASK_LIMIT = 1 << 21  # trajectories at most this long use int masks
DEFAULT_ASSIGNMENT_CAP = 200_000


# ---------------------------------------------------------------------------
# public result types


@dataclass(frozen=True)
class TupleSpec:
    """An ordered tuple of neighborhood specs searched together."""

    specs: tuple[NeighborhoodSpec, ...]

    def __post_init__(self):
        if not self.specs:
            raise ValueError("a tuple spec needs at least one neighborhood")

    def __len__(self):
        return len(self.specs)

    def __iter__(self):
        return iter(self.specs)

    def __getitem__(self, i):
        return self.specs[i]

    @property
    def is_intrinsic(self) -> bool:
        """Pairwise distinct centers (the interesting tuples)."""
        centers = [s.center for s in self.specs]
        return len(set(centers)) == len(centers)

    def render(self) -> str:
        return ",".join(s.render() for s in self.specs)


def as_tuple_spec(specs) -> TupleSpec:
    if isinstance(specs, TupleSpec):
        return specs
    return TupleSpec(tuple(specs))


@dataclass
class IndependenceWitness:
    """Realizers, one model point per assignment."""

    times: tuple[int, ...]
    realizers: dict[tuple[int, ...], ModelPoint]

    def point_for(self, assignment: tuple[int, ...]) -> ModelPoint:
        return self.realizers[assignment]


@dataclass
class IndependenceResult:
    ok: bool
    witness: IndependenceWitness | None = None
    failing: tuple[int, ...] | None = None


@dataclass(frozen=True)
class ExhaustionCertificate:
    """Replayable record of a completed negative search.

    frontier_sizes[i] is the number of surviving normalized shapes of size
    i + 1; the last entry is 0 and its level is died_level. Replaying the
    same search on the same build reproduces the sizes exactly.
    """

    tuple_rendered: str
    target_length: int
    horizon: int
    search: str
    frontier_sizes: tuple[int, ...]
    died_level: int
    nodes_used: int


@dataclass
class MaxIndependenceResult:
    length: int
    witness: IndependenceWitness | None
    certificate: ExhaustionCertificate | None


class SearchBudget:
    """Node and wall-clock budget shared across one search."""

    def __init__(self, max_nodes: int | None = None,
                 max_seconds: float | None = None):
        self.max_nodes = max_nodes
        self.max_seconds = max_seconds
        self.nodes = 0
        self.started = _time.monotonic()

    def spend(self, n: int = 1):
        self.nodes += n
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise ResourceBudgetExceeded(
                f"node budget {self.max_nodes} exhausted; result inconclusive")
        if self.max_seconds is not None and self.nodes % 4096 == 0:
            if _time.monotonic() - self.started > self.max_seconds:
                raise ResourceBudgetExceeded(
                    f"time budget {self.max_seconds}s exhausted; "
                    f"result inconclusive")


# ---------------------------------------------------------------------------
# occupancy


class OccupancyVector:
    """Bit-vector over orbit indices for one neighborhood.

    Stored sparsely: either the hit times themselves or, for the dense
    orbit part of an infinity neighborhood, the miss times. Small builds can
    materialize a genuine int bitmask.
    """

    def __init__(self, n_points: int, times: tuple[int, ...] | None = None,
                 miss_times: tuple[int, ...] | None = None):
        if (times is None) == (miss_times is None):
            raise ValueError("exactly one of times/miss_times is required")
        self.n_points = n_points
        self.times = times
        self.miss_times = miss_times
        self._times_set = set(times) if times is not None else None
        self._miss_set = set(miss_times) if miss_times is not None else None

    @property
    def complement(self) -> bool:
        return self.miss_times is not None

    def test(self, t: int) -> bool:
        if not 0 <= t < self.n_points:
            return False
        if self.complement:
            return t not in self._miss_set
        return t in self._times_set

    def popcount(self, lo: int = 0, hi: int | None = None) -> int:
        import bisect
        if hi is None:
            hi = self.n_points - 1
        hi = min(hi, self.n_points - 1)
        if hi < lo:
            return 0
        base = self.times if not self.complement else self.miss_times
        inside = (bisect.bisect_right(base, hi) - bisect.bisect_left(base, lo))
        if self.complement:
            return (hi - lo + 1) - inside
        return inside

    def as_int(self, hi: int | None = None) -> int:
        """Literal bitmask; only for short builds."""
        if hi is None:
            hi = self.n_points - 1
        if hi + 1 > DENSE_BITMASK_LIMIT:
            raise ValueError("trajectory too long for a literal bitmask")
        nbytes = hi // 8 + 1
        if self.complement:
            buf = bytearray(b"\xff" * nbytes)
            for t in self.miss_times:
                if t <= hi:
                    buf[t >> 3] &= ~(1 << (t & 7)) & 0xFF
            mask = int.from_bytes(buf, "little")
            return mask & ((1 << (hi + 1)) - 1)
        buf = bytearray(nbytes)
        for t in self.times:
            if t <= hi:
                buf[t >> 3] |= 1 << (t & 7)
        return int.from_bytes(buf, "little")


def occupancy(spec: NeighborhoodSpec, traj: Trajectory) -> OccupancyVector:
    """Occupancy bit-vector of a neighborhood over orbit indices."""
    cache = getattr(traj, "_occ_cache", None)
    if cache is None:
        cache = {}
        traj._occ_cache = cache
    got = cache.get(spec)
    if got is not None:
        return got
    view = resolve(spec, traj)
    if view.is_enumerable:
        vec = OccupancyVector(traj.n_points, times=view.orbit_times())
    else:
        vec = OccupancyVector(traj.n_points, miss_times=view.orbit_miss_times())
    cache[spec] = vec
    return vec


def _mask_for(spec: NeighborhoodSpec, traj: Trajectory) -> int:
    cache = getattr(traj, "_mask_cache", None)
    if cache is None:
        cache = {}
        traj._mask_cache = cache
    got = cache.get(spec)
    if got is None:
        got = occupancy(spec, traj).as_int()
        cache[spec] = got
    return got


# ---------------------------------------------------------------------------
# satisfiability of one assignment


def _head_realizer(J, sigma, specs, traj) -> ModelPoint | None:
    """Closed-form head witness for one assignment, or None.

    Heads never need enumeration: finite centers pin the head index through
    consistency (index = center - time), the limit head covers assignments
    made purely of infinity neighborhoods, and dense heads are fixed points
    so they realize exactly the constant assignments centered on them.
    """
    chosen = [specs[c] for c in sigma]
    if traj.family == FAMILY_LOG_M:
        if all(s.center.kind == KIND_HEAD_INF for s in chosen):
            return ModelPoint.head(Symbol.head_inf())
        idx = None
        for t, s in zip(J, chosen):
            if s.center.kind == KIND_HEAD:
                want = s.center.index - t
                if idx is None:
                    idx = want
                elif idx != want:
                    return None
        # idx is set: at least one finite center exists here
        for t, s in zip(J, chosen):
            if s.center.kind == KIND_HEAD_INF:
                if abs(idx + t) < infinity_window(s.level):
                    return None
        return ModelPoint.head(Symbol.head(idx))
    # dense family: heads are fixed, only constant assignments work
    first = chosen[0].center
    if all(s.center == first for s in chosen):
        return ModelPoint.head(first)
    return None


def _sparse_candidates(J, sigma, specs, traj, horizon, start_range):
    """Ascending orbit start candidates from the sparsest finite anchor."""
    best = None
    for t, c in zip(J, sigma):
        spec = specs[c]
        if spec.center.kind == KIND_HEAD_INF:
            continue
        occ = occupancy(spec, traj)
        if best is None or len(occ.times) < len(best[1].times):
            best = (t, occ)
    if best is None:
        return None  # no finite anchor; caller falls back to heads
    t0, occ = best
    lo = 0 if start_range is None else start_range[0]
    hi = horizon - J[-1]
    if start_range is not None:
        hi = min(hi, start_range[1])
    out = []
    for h in occ.times:
        u = h - t0
        if u < lo:
            continue
        if u > hi:
            break
        out.append(u)
    return out


def _infinity_orbit_scan(J, sigma, specs, traj, horizon, start_range, budget):
    """Orbit witness when every chosen neighborhood is infinity-centered.

    The orbit complements of infinity neighborhoods are sparse (a handful of
    near-zero indices per run), so the first start clearing all of them is
    found by skipping the finitely many collisions.
    """
    if traj.family != FAMILY_LOG_M:
        return None
    lo = 0 if start_range is None else max(start_range[0], 0)
    hi = horizon - J[-1]
    if start_range is not None:
        hi = min(hi, start_range[1])
    blocked = set()
    for t, c in zip(J, sigma):
        spec = specs[c]
        for h in traj.near_head_times(infinity_window(spec.level) - 1):
            u = h - t
            if lo <= u <= hi:
                blocked.add(u)
    if budget is not None:
        budget.spend(len(blocked) + 1)
    u = lo
    while u in blocked:
        u += 1
    if u > hi:
        return None
    return ModelPoint.orbit(u)


def satisfiable(J, sigma, specs, traj: Trajectory, horizon: int | None = None,
                start_range: tuple[int, int] | None = None,
                allow_heads: bool = True,
                budget: SearchBudget | None = None) -> ModelPoint | None:
    """First model point realizing the assignment, or None.

    Search order follows the engine design: orbit candidates ascending
    (literal bitmask intersection on short builds, sparsest-anchor scan
    otherwise), then head candidates in closed form. ``start_range`` limits
    orbit start times (used by block-restricted verification) and disables
    head witnesses, since a restricted system consists of orbit points only.
    """
    specs = as_tuple_spec(specs).specs
    J = tuple(J)
    sigma = tuple(sigma)
    if len(J) != len(sigma):
        raise ValueError("assignment must align with the time set")
    if horizon is None:
        horizon = traj.horizon
    horizon = min(horizon, traj.horizon)
    if J and J[-1] > horizon:
        raise ValueError("times exceed the queried horizon")

    if J:
        if traj.n_points <= DENSE_BITMASK_LIMIT:
            mask = (1 << (horizon - J[-1] + 1)) - 1
            for t, c in zip(J, sigma):
                mask &= _mask_for(specs[c], traj) >> t
                if not mask:
                    break
            if start_range is not None and mask:
                lo, hi = start_range
                lo = max(lo, 0)
                span = ((1 << (hi - lo + 1)) - 1) << lo if hi >= lo else 0
                mask &= span
            if budget is not None:
                budget.spend(len(J))
            if mask:
                u = (mask & -mask).bit_length() - 1
                return ModelPoint.orbit(u)
        else:
            cands = _sparse_candidates(J, sigma, specs, traj, horizon,
                                       start_range)
            if cands is not None:
                for u in cands:
                    if budget is not None:
                        budget.spend(len(J))
                    ok = True
                    for t, c in zip(J, sigma):
                        if not orbit_member(specs[c], u + t, traj):
                            ok = False
                            break
                    if ok:
                        return ModelPoint.orbit(u)
            elif start_range is not None or not allow_heads:
                point = _infinity_orbit_scan(J, sigma, specs, traj, horizon,
                                             start_range, budget)
                if point is not None:
                    return point

    if not J:
        # the empty assignment is realized by any point at all
        return ModelPoint.orbit(0 if start_range is None else start_range[0])
    if start_range is not None or not allow_heads:
        return None
    return _head_realizer(J, sigma, specs, traj)


def is_independence_set(J, specs, traj: Trajectory,
                        horizon: int | None = None,
                        start_range: tuple[int, int] | None = None,
                        allow_heads: bool = True,
                        max_assignments: int = DEFAULT_ASSIGNMENT_CAP,
                        budget: SearchBudget | None = None) -> IndependenceResult:
    """Check every assignment over J; empty J is vacuously independent.

    Returns the full witness table on success, or the lexicographically
    first failing assignment.
    """
    tspec = as_tuple_spec(specs)
    J = tuple(sorted(J))
    if len(set(J)) != len(J):
        raise ValueError("independence sets hold distinct times")
    if any(t < 0 for t in J):
        raise ValueError("times are nonnegative")
    k = len(tspec)
    if J and k ** len(J) > max_assignments:
        raise CapExceeded(
            f"{k}^{len(J)} assignments exceed the cap {max_assignments}")
    realizers: dict[tuple[int, ...], ModelPoint] = {}
    for sigma in itertools.product(range(k), repeat=len(J)):
        point = satisfiable(J, sigma, tspec, traj, horizon=horizon,
                            start_range=start_range, allow_heads=allow_heads,
                            budget=budget)
        if point is None:
            return IndependenceResult(False, failing=sigma)
        realizers[sigma] = point
    return IndependenceResult(True, witness=IndependenceWitness(J, realizers))


# ---------------------------------------------------------------------------
# maximum independence search over normalized shapes


def _fixed_head_everywhere(specs, traj) -> ModelPoint | None:
    """A fixed point lying in every neighborhood realizes everything."""
    candidates = []
    if traj.family == FAMILY_LOG_M:
        candidates.append(Symbol.head_inf())
    else:
        candidates.extend(s.center for s in specs if s.center.kind == KIND_DENSE)
    for sym in candidates:
        if all(head_member(s, sym, traj) for s in specs):
            return ModelPoint.head(sym)
    return None


def _diff_universe(specs, traj, horizon) -> tuple[int, ...] | None:
    """All positive differences within the sparsest finite hit list."""
    best = None
    for s in specs:
        if s.center.kind == KIND_HEAD_INF:
            continue
        occ = occupancy(s, traj)
        hits = [t for t in occ.times if t <= horizon]
        if best is None or len(hits) < len(best):
            best = hits
    if best is None:
        return None
    diffs = set()
    for i, u in enumerate(best):
        for v in best[i + 1:]:
            diffs.add(v - u)
    return tuple(sorted(diffs))


def _diff_stream(hits: list[int]):
    """Lazily yield the distinct positive differences of a sorted list."""
    heap = [(hits[i + 1] - hits[i], i, i + 1) for i in range(len(hits) - 1)]
    heapq.heapify(heap)
    last = None
    while heap:
        d, i, j = heapq.heappop(heap)
        if j + 1 < len(hits):
            heapq.heappush(heap, (hits[j + 1] - hits[i], i, j + 1))
        if d != last:
            last = d
            yield d


def _sparsest_hits(specs, traj, horizon) -> list[int] | None:
    best = None
    for s in specs:
        if s.center.kind == KIND_HEAD_INF:
            continue
        occ = occupancy(s, traj)
        hits = [t for t in occ.times if t <= horizon]
        if best is None or len(hits) < len(best):
            best = hits
    return best


def _viable_pair_diffs(tspec, traj, horizon, budget) -> tuple[int, ...] | None:
    """Exact ascending list of d > 0 making (0, d) an independence set.

    Dense-family bitmask shortcut: an off-diagonal assignment (i, j) is
    realizable exactly when some orbit time sits in A_i with its d-step
    image in A_j, so OR-ing the shifted occupancy of A_j over the hits of
    A_i marks every workable d at once; AND across assignments intersects
    them. Diagonal assignments are always realizable through the center's
    own head (a fixed point), so they impose nothing. Returns None when the
    shortcut does not apply (non-dense centers or an oversized build).
    """
    specs = tspec.specs
    if traj.n_points > DENSE_BITMASK_LIMIT:
        return None
    if any(s.center.kind != KIND_DENSE for s in specs):
        return None
    span = (1 << (horizon + 1)) - 1
    masks = [_mask_for(s, traj) & span for s in specs]
    combined = span
    for i, spec_i in enumerate(specs):
        occ = occupancy(spec_i, traj)
        hits_i = occ.times[:bisect.bisect_right(occ.times, horizon)]
        if budget is not None:
            budget.spend(len(hits_i) * (len(specs) - 1))
        for j, _spec_j in enumerate(specs):
            if i == j:
                continue
            acc = 0
            mj = masks[j]
            for t in hits_i:
                acc |= mj >> t
            combined &= acc
            if not combined:
                return ()
    combined >>= 1  # bit b now means d = b + 1
    out = []
    buf = combined.to_bytes((combined.bit_length() + 7) // 8, "little")
    for byte_i, byte in enumerate(buf):
        while byte:
            low = byte & -byte
            out.append(byte_i * 8 + low.bit_length())
            byte ^= low
    return tuple(out)


def _cap_result(tspec, traj, horizon, shape, budget) -> MaxIndependenceResult:
    res = is_independence_set(shape, tspec, traj, horizon=horizon,
                              budget=budget)
    return MaxIndependenceResult(len(shape), res.witness, None)


def max_independence(specs, cap: int, traj: Trajectory,
                     horizon: int | None = None,
                     mode: str = "level",
                     budget: SearchBudget | None = None) -> MaxIndependenceResult:
    """Largest independence-set size for the tuple, capped at cap.

    mode "level" runs the level-wise shape search and produces an
    exhaustion certificate when the frontier dies below the cap; mode
    "dfs" explores shapes depth-first with the same pruning and is meant
    for positive searches on builds whose difference universes are large.
    """
    tspec = as_tuple_spec(specs)
    if cap < 1:
        raise ValueError("cap must be positive")
    if horizon is None:
        horizon = traj.horizon
    horizon = min(horizon, traj.horizon)
    if budget is None:
        budget = SearchBudget()

    fixed = _fixed_head_everywhere(tspec.specs, traj)
    if fixed is not None:
        shape = tuple(range(cap))
        realizers = {sigma: fixed for sigma in
                     itertools.product(range(len(tspec)), repeat=cap)}
        return MaxIndependenceResult(
            cap, IndependenceWitness(shape, realizers), None)

    # singletons always embed through the center's own head
    if cap == 1:
        return _cap_result(tspec, traj, horizon, (0,), budget)

    if mode == "level":
        return _max_level(tspec, traj, horizon, cap, budget)
    if mode == "dfs":
        return _max_dfs(tspec, traj, horizon, cap, budget)
    raise ValueError(f"unknown search mode {mode!r}")


def _max_level(tspec, traj, horizon, cap, budget) -> MaxIndependenceResult:
    frontier_sizes = [1]  # the singleton shape (0,)
    viable = _viable_pair_diffs(tspec, traj, horizon, budget)
    if viable is not None:
        current = [(0, d) for d in viable]
    else:
        universe = _diff_universe(tspec.specs, traj, horizon)
        if universe is None:
            # no finite anchor and no all-covering fixed head: impossible
            # for built families, guarded for safety
            raise ValueError(
                "tuple has no finite-center neighborhood to anchor on")
        pair_ok: dict[int, bool] = {}

        def pair_check(d: int) -> bool:
            got = pair_ok.get(d)
            if got is None:
                got = is_independence_set((0, d), tspec, traj,
                                          horizon=horizon, budget=budget).ok
                pair_ok[d] = got
            return got

        current = [(0, d) for d in universe if d <= horizon and pair_check(d)]
    frontier_sizes.append(len(current))
    size = 2
    while current and size < cap:
        survivors = set(current)
        nxt = []
        by_prefix: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
        for shape in current:
            by_prefix.setdefault(shape[:-1], []).append(shape)
        for prefix, group in sorted(by_prefix.items()):
            group.sort()
            for a_i in range(len(group)):
                for b_i in range(a_i + 1, len(group)):
                    x, y = group[a_i][-1], group[b_i][-1]
                    cand = prefix + (x, y)
                    if not _subshapes_survive(cand, survivors):
                        continue
                    if is_independence_set(cand, tspec, traj,
                                           horizon=horizon,
                                           budget=budget).ok:
                        nxt.append(cand)
        nxt.sort()
        frontier_sizes.append(len(nxt))
        if not nxt:
            cert = ExhaustionCertificate(
                tuple_rendered=tspec.render(), target_length=cap,
                horizon=horizon, search="level-shapes",
                frontier_sizes=tuple(frontier_sizes),
                died_level=size + 1, nodes_used=budget.nodes)
            best = sorted(current)[0]
            res = is_independence_set(best, tspec, traj, horizon=horizon,
                                      budget=budget)
            return MaxIndependenceResult(size, res.witness, cert)
        current = nxt
        size += 1
    if size >= cap and current:
        return _cap_result(tspec, traj, horizon, sorted(current)[0], budget)
    # cap 2 with an empty pair level
    cert = ExhaustionCertificate(
        tuple_rendered=tspec.render(), target_length=cap, horizon=horizon,
        search="level-shapes", frontier_sizes=tuple(frontier_sizes),
        died_level=2, nodes_used=budget.nodes)
    return _cap_result_level1(tspec, traj, horizon, cert, budget)


def _cap_result_level1(tspec, traj, horizon, cert, budget):
    res = is_independence_set((0,), tspec, traj, horizon=horizon,
                              budget=budget)
    return MaxIndependenceResult(1, res.witness, cert)


def _subshapes_survive(cand: tuple[int, ...], survivors: set) -> bool:
    """Downward closure: every one-smaller normalized subshape survived."""
    n = len(cand)
    for drop in range(n):
        sub = cand[:drop] + cand[drop + 1:]
        if drop == 0:
            base = sub[0]
            sub = tuple(v - base for v in sub)
        if sub not in survivors:
            return False
    return True


def _max_dfs(tspec, traj, horizon, cap, budget) -> MaxIndependenceResult:
    hits = _sparsest_hits(tspec.specs, traj, horizon)
    if hits is None:
        raise ValueError("tuple has no finite-center neighborhood to anchor on")
    if len(hits) < 2:
        return _cap_result_level1(
            tspec, traj, horizon,
            ExhaustionCertificate(tspec.render(), cap, horizon, "depth-first",
                                  (1, 0), 2, budget.nodes), budget)
    visited = [0] * (cap + 1)
    visited[1] = 1

    viable = _viable_pair_diffs(tspec, traj, horizon, budget)
    if viable is not None:
        viable_set = set(viable)

        def pair_check(d: int) -> bool:
            return d in viable_set

        def candidates_after(lo: int):
            return viable[bisect.bisect_right(viable, lo):]
    else:
        pair_ok: dict[int, bool] = {}

        def pair_check(d: int) -> bool:
            got = pair_ok.get(d)
            if got is None:
                got = is_independence_set((0, d), tspec, traj,
                                          horizon=horizon, budget=budget).ok
                pair_ok[d] = got
            return got

        def candidates_after(lo: int):
            for d in _diff_stream(hits):
                if d > lo:
                    yield d

    best_shape = (0,)

    def extend(shape: tuple[int, ...]):
        nonlocal best_shape
        if len(shape) == cap:
            return shape
        for d in candidates_after(shape[-1]):
            if d > horizon:
                break
            if not pair_check(d):
                continue
            if any(not pair_check(d - s) for s in shape[1:]):
                continue
            cand = shape + (d,)
            if not is_independence_set(cand, tspec, traj, horizon=horizon,
                                       budget=budget).ok:
                continue
            visited[len(cand)] += 1
            if len(cand) > len(best_shape):
                best_shape = cand
            got = extend(cand)
            if got is not None:
                return got
        return None

    found = extend((0,))
    if found is not None:
        return _cap_result(tspec, traj, horizon, found, budget)
    died = len(best_shape) + 1
    cert = ExhaustionCertificate(
        tuple_rendered=tspec.render(), target_length=cap, horizon=horizon,
        search="depth-first", frontier_sizes=tuple(visited[1:died] + [0]),
        died_level=died, nodes_used=budget.nodes)
    res = is_independence_set(best_shape, tspec, traj, horizon=horizon,
                              budget=budget)
    return MaxIndependenceResult(len(best_shape), res.witness, cert)


# ---------------------------------------------------------------------------
# one-step preimage property


def shift_property_check(J, specs, traj: Trajectory,
                         horizon: int | None = None) -> bool:
    """Drop the minimum time, pull everything back one step, re-verify.

    The shifted tuple recenters every neighborhood one index down and
    relaxes its membership threshold by one step, which is the one-step
    preimage reading of the original tuple. Applies to head-indexed
    trajectories with finite centers.
    """
    tspec = as_tuple_spec(specs)
    if traj.family != FAMILY_LOG_M:
        raise ValueError("the shift property applies to the head-indexed family")
    if any(s.center.kind != KIND_HEAD for s in tspec.specs):
        raise ValueError("the shift property needs finite centers")
    J = tuple(sorted(J))
    if len(J) < 2:
        raise ValueError("need at least two times to drop the minimum")
    shifted_times = tuple(t - 1 for t in J[1:])
    shifted = TupleSpec(tuple(
        NeighborhoodSpec(Symbol.head(s.center.index - 1), s.level,
                         s.threshold_offset - 1)
        for s in tspec.specs))
    return is_independence_set(shifted_times, shifted, traj,
                               horizon=horizon).ok
