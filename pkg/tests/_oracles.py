"""Brute-force reference implementations used to validate the engine.

Everything here works by direct enumeration over materialized symbol
sequences. No occupancy vectors, no closed-form head reasoning, no pruning:
each assignment is checked by scanning every candidate point and comparing
symbols. Slow on purpose, and only usable on short builds.
"""

import itertools
import random
from fractions import Fraction

from seqent.construct import GrowthSchedule, build_log_infty, build_log_m
from seqent.errors import Infeasible, ScheduleInvalid
from seqent.model import (
    FAMILY_LOG_M,
    KIND_DENSE,
    KIND_HEAD,
    KIND_HEAD_INF,
    Symbol,
)

# candidate points are plain tuples so the oracle cannot lean on ModelPoint
ORBIT = "orbit"
HEAD = "head"
HEAD_INF = "head-inf"
DENSE_HEAD = "dense-head"


def materialize(traj, horizon):
    """Symbol list for times 0..horizon, read straight off the generator."""
    return [sym for _t, sym in traj.symbols(0, horizon)]


def _threshold(traj, level, offset):
    return traj.manifest.block(level).start + offset


def _orbit_ok(syms, traj, spec, tau):
    """Definitional membership of orbit point x_tau in the neighborhood."""
    if tau >= len(syms):
        return False
    sym = syms[tau]
    center = spec.center
    if center.kind == KIND_HEAD_INF:
        if sym.kind != KIND_HEAD:
            return False
        return abs(sym.index) >= 3 + spec.level
    if tau < _threshold(traj, spec.level, spec.threshold_offset):
        return False
    return sym == center


def _head_ok(spec, kind, index, t):
    """Membership of the t-step image of a head point."""
    center = spec.center
    if kind == HEAD_INF:
        return center.kind == KIND_HEAD_INF
    if kind == HEAD:
        if center.kind == KIND_HEAD_INF:
            return abs(index + t) >= 3 + spec.level
        return center.kind == KIND_HEAD and index + t == center.index
    if kind == DENSE_HEAD:
        return center.kind == KIND_DENSE and index == center.index
    raise ValueError(kind)


def candidate_points(specs, J, traj, horizon, start_range, allow_heads):
    """Every point that could realize some assignment, by enumeration."""
    max_j = max(J) if J else 0
    if start_range is not None:
        lo, hi = start_range
        lo = max(lo, 0)
        hi = min(hi, horizon - max_j)
        return [(ORBIT, u) for u in range(lo, hi + 1)]
    points = [(ORBIT, u) for u in range(0, horizon - max_j + 1)]
    if not allow_heads:
        return points
    if traj.family == FAMILY_LOG_M:
        reach = max((abs(s.center.index) for s in specs
                     if s.center.kind == KIND_HEAD), default=0)
        window = 3 + max(s.level for s in specs)
        bound = reach + max_j + window + 4
        points.extend((HEAD, j) for j in range(-bound, bound + 1))
        points.append((HEAD_INF, 0))
    else:
        top = max(s.center.index for s in specs)
        points.extend((DENSE_HEAD, j) for j in range(1, top + 2))
    return points


def _realizes(point, J, sigma, specs, syms, traj):
    kind, base = point
    for t, c in zip(J, sigma):
        spec = specs[c]
        if kind == ORBIT:
            if not _orbit_ok(syms, traj, spec, base + t):
                return False
        elif not _head_ok(spec, kind, base, t):
            return False
    return True


def naive_satisfiable(J, sigma, specs, traj, horizon=None, start_range=None,
                      allow_heads=True, syms=None):
    specs = tuple(specs)
    J = tuple(J)
    if horizon is None:
        horizon = traj.horizon
    horizon = min(horizon, traj.horizon)
    if syms is None:
        syms = materialize(traj, horizon)
    for point in candidate_points(specs, J, traj, horizon, start_range,
                                  allow_heads):
        if _realizes(point, J, tuple(sigma), specs, syms, traj):
            return point
    return None


def naive_is_independence_set(J, specs, traj, horizon=None, start_range=None,
                              allow_heads=True):
    """Scan all assignments over J against all candidate points."""
    specs = tuple(specs)
    J = tuple(sorted(J))
    if horizon is None:
        horizon = traj.horizon
    horizon = min(horizon, traj.horizon)
    syms = materialize(traj, horizon)
    candidates = candidate_points(specs, J, traj, horizon, start_range,
                                  allow_heads)
    for sigma in itertools.product(range(len(specs)), repeat=len(J)):
        if not any(_realizes(p, J, sigma, specs, syms, traj)
                   for p in candidates):
            return False
    return True


def naive_words(seq, partition, traj, horizon, syms=None):
    """Set of itinerary words over the time sequence, by enumeration.

    A word maps each time to the partition class of the visited symbol,
    with -1 for the catch-all class. Points range over orbit starts that
    keep the whole sequence inside the horizon, every head whose class can
    differ from the tail behavior, and the limit head where present.
    """
    seq = tuple(seq)
    if syms is None:
        syms = materialize(traj, horizon)

    def class_of(sym):
        for idx, (_name, members) in enumerate(partition.classes):
            if sym in members:
                return idx
        return -1

    words = set()
    last = seq[-1]
    for u in range(0, horizon - last + 1):
        words.add(tuple(class_of(syms[u + t]) for t in seq))
    if traj.family == FAMILY_LOG_M:
        named = [s.index for _n, members in partition.classes
                 for s in members if s.kind == KIND_HEAD]
        reach = max((abs(i) for i in named), default=0) + last + 4
        for j in range(-reach, reach + 1):
            words.add(tuple(class_of(Symbol.head(j + t)) for t in seq))
        words.add(tuple(class_of(Symbol.head_inf()) for _ in seq))
    else:
        js = {s.index for _n, members in partition.classes
              for s in members if s.kind == KIND_DENSE}
        for j in sorted(js | {max(js | {0}) + 1}):
            if j >= 1:
                words.add(tuple(class_of(Symbol.dense(j)) for _ in seq))
    return words


# ---------------------------------------------------------------------------
# randomized small instances


def random_schedule(rng: random.Random, m: int) -> GrowthSchedule:
    """A single-block schedule with small, feasible segment lengths."""
    pieces = m ** 2
    winds = [[rng.randrange(3 * m + 2, 3 * m + 14)]]
    inner = [[rng.randrange(m + 6, m + 24) for _ in range(pieces - 1)]]
    outer = [rng.randrange(m + 6, m + 30)]
    return GrowthSchedule(FAMILY_LOG_M, m, winds, inner, outer)


def random_small_build(rng: random.Random):
    """A short trajectory: random one-block log-m build or tiny dense build."""
    while True:
        roll = rng.random()
        try:
            if roll < 0.45:
                return build_log_m(2, 1, random_schedule(rng, 2))
            if roll < 0.85:
                return build_log_m(3, 1, random_schedule(rng, 3))
            return build_log_infty(1)
        except (ScheduleInvalid, Infeasible):
            continue


def random_tuple(rng: random.Random, traj, max_k: int = 3):
    """Random neighborhood tuple with level 1 centers, inf included."""
    from seqent.model import NeighborhoodSpec

    k = rng.randrange(1, max_k + 1)
    specs = []
    for _ in range(k):
        if traj.family == FAMILY_LOG_M:
            if rng.random() < 0.2:
                specs.append(NeighborhoodSpec(Symbol.head_inf(), 1))
            else:
                c = rng.randrange(-2, traj.m + 2)
                specs.append(NeighborhoodSpec(Symbol.head(c), 1))
        else:
            specs.append(NeighborhoodSpec(Symbol.dense(rng.randrange(1, 4)), 1))
    return tuple(specs)


def random_times(rng: random.Random, horizon: int, max_size: int = 3):
    size = rng.randrange(1, max_size + 1)
    times = sorted(rng.sample(range(0, horizon + 1), size))
    return tuple(times)
