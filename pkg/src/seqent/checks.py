"""Structural verification of built trajectories.

Every check runs an exhaustive finite enumeration and returns a report with
a pass flag, a counterexample line when something fails, and enough detail
lines to audit what was actually examined. Nothing here samples: growth
rules are checked on every constrained segment, part structure on every
designated-time hit, shiftability on every shifted pair of hits within the
horizon.
"""

from __future__ import annotations

import bisect
import time as _time
from dataclasses import dataclass, field

from .errors import InvalidConfig
from .independence import (
    ExhaustionCertificate,
    SearchBudget,
    is_independence_set,
    max_independence,
    occupancy,
)
from .model import (
    FAMILY_LOG_INFTY,
    FAMILY_LOG_M,
    BlockRecord,
    NeighborhoodSpec,
    Symbol,
    Trajectory,
    dense_value,
)


@dataclass
class CheckReport:
    """Outcome of one verification procedure."""

    name: str
    params: dict[str, str] = field(default_factory=dict)
    passed: bool = False
    counterexample: str | None = None
    details: list[str] = field(default_factory=list)
    certificates: list[ExhaustionCertificate] = field(default_factory=list)
    elapsed: float = 0.0

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        ps = " ".join(f"{k}={v}" for k, v in self.params.items())
        line = f"{status} {self.name}"
        if ps:
            line += f" [{ps}]"
        line += f" ({self.elapsed:.2f}s)"
        if not self.passed and self.counterexample:
            line += f" counterexample: {self.counterexample}"
        return line


class _Timer:
    def __enter__(self):
        self.t0 = _time.monotonic()
        return self

    def __exit__(self, *exc):
        self.elapsed = _time.monotonic() - self.t0
        return False


def _require_family(traj: Trajectory, family: str, op: str):
    if traj.family != family:
        raise InvalidConfig(f"{op} applies to {family} trajectories")


# ---------------------------------------------------------------------------
# growth rules


def validate_growth(traj: Trajectory) -> CheckReport:
    """Check every constrained segment length against the growth rules.

    Head-indexed family: the very first wind has length exactly 3m + 2 and
    every other first-piece wind, inner gap, and outer gap is strictly longer
    than 100 times the number of points before it. Dense family: block n uses
    tolerance 2^-n, realizes all (n+1)^(n+1) patterns, and glue chains are
    minimal for their endpoints.
    """
    report = CheckReport("growth", {"family": traj.family, "m": str(traj.m)})
    with _Timer() as tm:
        if traj.family == FAMILY_LOG_M:
            _validate_growth_log_m(traj, report)
        else:
            _validate_growth_dense(traj, report)
    report.elapsed = tm.elapsed
    return report


def _validate_growth_log_m(traj: Trajectory, report: CheckReport):
    m = traj.m
    checked = 0
    for seg in traj.manifest.segments:
        if seg.kind == "wind" and not seg.path.split("/")[1] == "P1":
            continue  # only first-piece winds carry their own length rule
        checked += 1
        if seg.path == "B1/P1/W1":
            if seg.w != 3 * m + 2:
                report.counterexample = (
                    f"first wind has length {seg.w}, expected {3 * m + 2}")
                return
            continue
        # a shared wind owns one point less than its planned length, so the
        # prefix is everything before its true first point
        if seg.w <= 100 * seg.wind_start:
            report.counterexample = (
                f"{seg.path} has length {seg.w} <= 100 * {seg.wind_start}")
            return
    # designated times must mirror the wind lengths
    for block in traj.manifest.blocks:
        acc = [0]
        for w in block.winds:
            acc.append(acc[-1] + w - 1)
        if tuple(acc) != block.times:
            report.counterexample = (
                f"block {block.level} times {block.times} do not match "
                f"its wind lengths")
            return
    report.details.append(f"{checked} constrained segments checked")
    report.passed = True


def _validate_growth_dense(traj: Trajectory, report: CheckReport):
    from fractions import Fraction

    from .construct import chain_min_interior

    segs_by_block: dict[int, list] = {}
    for seg in traj.manifest.segments:
        n = int(seg.path.split("/")[0][1:])
        segs_by_block.setdefault(n, []).append(seg)
    for block in traj.manifest.blocks:
        n = block.level
        if block.eps != Fraction(1, 2 ** n):
            report.counterexample = (
                f"block {n} tolerance {block.eps}, expected 1/{2 ** n}")
            return
        patterns_seen = [s for s in segs_by_block[n] if s.kind == "pattern"]
        want = (n + 1) ** (n + 1)
        if len(patterns_seen) != want:
            report.counterexample = (
                f"block {n} realizes {len(patterns_seen)} patterns, "
                f"expected {want}")
            return
        # every consecutive value along the block is an eps-step
        value_cache: dict[int, Fraction] = {}

        def value_at(t: int) -> Fraction:
            idx = traj.symbol_index_at(t)
            got = value_cache.get(idx)
            if got is None:
                got = dense_value(idx)
                value_cache[idx] = got
            return got

        lo, hi = block.start, block.end - 1
        prev = value_at(lo)
        for t in range(lo + 1, hi + 1):
            cur = value_at(t)
            if abs(cur - prev) >= block.eps:
                report.counterexample = (
                    f"step at time {t} jumps {abs(cur - prev)} >= {block.eps}")
                return
            prev = cur
        # glue chains are minimal for their endpoint values
        for seg in segs_by_block[n]:
            if seg.kind != "glue":
                continue
            before = value_at(seg.start - 1)
            if _glue_has_home(seg, block):
                interior = seg.length - 1
                after = value_at(seg.start + seg.length - 1)
            else:
                interior = seg.length
                after = value_at(seg.start + seg.length)
            need = chain_min_interior(before, after, block.eps)
            if interior != need:
                report.counterexample = (
                    f"{seg.path} has {interior} interior points, "
                    f"minimal is {need}")
                return
        # blocks start and end at the first enumeration value
        if traj.symbol_at(block.start).index != 1:
            report.counterexample = f"block {n} does not start at e1"
            return
        if traj.symbol_at(block.end - 1).index != 1:
            report.counterexample = f"block {n} does not end at e1"
            return
    report.details.append(f"{len(traj.manifest.blocks)} blocks checked")
    report.passed = True


def _glue_has_home(seg, block: BlockRecord) -> bool:
    """The tail glue of a block owns the final return point."""
    return seg.start + seg.length == block.end


# ---------------------------------------------------------------------------
# part structure


def part_expected_times(block: BlockRecord, l: int) -> list[int]:
    """Times of the designated-time hits of piece l (1-based) of a block.

    Piece l realizing pattern s places the center's hits at
    piece_start + n_c - s(c) for each designated index c; the c = 0 hit sits
    inside the preceding gap when s(0) > 0.
    """
    j = block.piece_starts[l - 1]
    s = block.functions[l - 1]
    return [j + block.times[c] - s[c] for c in range(len(block.times))]


def check_part_structure(k: int, l: int, traj: Trajectory) -> CheckReport:
    """Exact hit set of the level-1 neighborhood of a_0 around one piece.

    Verifies that the hits of U1(a0) inside the piece's window are exactly
    the designated-time positions shifted by the piece's pattern.
    """
    _require_family(traj, FAMILY_LOG_M, "check_part_structure")
    report = CheckReport("part-structure",
                         {"m": str(traj.m), "k": str(k), "l": str(l)})
    with _Timer() as tm:
        block = traj.manifest.block(k)
        if not 1 <= l <= len(block.functions):
            raise InvalidConfig(f"block {k} has {len(block.functions)} pieces")
        expected = part_expected_times(block, l)
        j = block.piece_starts[l - 1]
        lo = j - (traj.m - 1)
        hi = j + block.times[-1]
        occ = occupancy(NeighborhoodSpec(Symbol.head(0), 1), traj)
        a = bisect.bisect_left(occ.times, lo)
        b = bisect.bisect_right(occ.times, hi)
        actual = list(occ.times[a:b])
        if actual != expected:
            report.counterexample = (
                f"hits {actual} != expected {expected} in window "
                f"[{lo}, {hi}]")
        else:
            report.passed = True
            report.details.append(
                f"{len(expected)} hits at designated offsets "
                f"{[t - j for t in expected]}")
    report.elapsed = tm.elapsed
    return report


def check_distance_uniqueness(k: int, l: int, traj: Trajectory) -> CheckReport:
    """Pairwise distances within one piece's hit set are pairwise distinct
    and each falls in the window of exactly one designated-time pair.

    The window for the pair (d, c) is n_c - n_d plus or minus (m - 1); the
    growth rules keep these windows disjoint, so every realized distance
    identifies its pair of designated indices.
    """
    _require_family(traj, FAMILY_LOG_M, "check_distance_uniqueness")
    report = CheckReport("distance-uniqueness",
                         {"m": str(traj.m), "k": str(k), "l": str(l)})
    with _Timer() as tm:
        block = traj.manifest.block(k)
        if not 1 <= l <= len(block.functions):
            raise InvalidConfig(f"block {k} has {len(block.functions)} pieces")
        pts = part_expected_times(block, l)
        times = block.times
        tol = traj.m - 1
        seen: dict[int, tuple[int, int]] = {}
        for i1 in range(len(pts)):
            for i2 in range(i1 + 1, len(pts)):
                dist = pts[i2] - pts[i1]
                hits = [(d, c)
                        for d in range(len(times))
                        for c in range(d + 1, len(times))
                        if abs(dist - (times[c] - times[d])) <= tol]
                if hits != [(i1, i2)]:
                    report.counterexample = (
                        f"distance {dist} of hits ({pts[i1]}, {pts[i2]}) "
                        f"matches windows {hits}, expected [({i1}, {i2})]")
                    report.elapsed = tm.elapsed
                    return report
                if dist in seen:
                    report.counterexample = (
                        f"distance {dist} realized by both {seen[dist]} "
                        f"and ({i1}, {i2})")
                    report.elapsed = tm.elapsed
                    return report
                seen[dist] = (i1, i2)
        report.passed = True
        report.details.append(f"{len(seen)} pairwise distances, all unique")
    report.elapsed = tm.elapsed
    return report


def check_block_parts(k: int, traj: Trajectory) -> CheckReport:
    """Part structure and distance uniqueness across every piece of block k."""
    _require_family(traj, FAMILY_LOG_M, "check_block_parts")
    report = CheckReport("block-parts", {"m": str(traj.m), "k": str(k)})
    with _Timer() as tm:
        block = traj.manifest.block(k)
        pieces = len(block.functions)
        for l in range(1, pieces + 1):
            for sub in (check_part_structure(k, l, traj),
                        check_distance_uniqueness(k, l, traj)):
                if not sub.passed:
                    report.counterexample = (
                        f"piece {l}: {sub.name}: {sub.counterexample}")
                    report.elapsed = tm.elapsed
                    return report
        report.passed = True
        report.details.append(
            f"{pieces} pieces: hit sets and distance windows all exact")
    report.elapsed = tm.elapsed
    return report


# ---------------------------------------------------------------------------
# shiftability


def check_shiftability(traj: Trajectory, horizon: int) -> CheckReport:
    """Exhaustive audit of shifted pairs of U1(a0) hits up to a horizon.

    Enumerates every pair of hits (u < v) and every shift that keeps both
    images inside the hit set, then verifies the location constraints: all
    four points share one block; a same-part pair lands in exactly one other
    part with both positions preserved; a split pair keeps each point in its
    own part and its two points sit at the same designated position.
    Cross-block pairs must admit no shift at all.
    """
    _require_family(traj, FAMILY_LOG_M, "check_shiftability")
    report = CheckReport("shiftability",
                         {"m": str(traj.m), "horizon": str(horizon)})
    with _Timer() as tm:
        location: dict[int, tuple[int, int, int]] = {}
        for block in traj.manifest.blocks:
            for l in range(1, len(block.functions) + 1):
                for c, t in enumerate(part_expected_times(block, l)):
                    if t <= horizon:
                        location[t] = (block.level, l, c)
        occ = occupancy(NeighborhoodSpec(Symbol.head(0), 1), traj)
        hits = list(occ.times[:bisect.bisect_right(occ.times, horizon)])
        hit_set = set(hits)
        unlocated = [t for t in hits if t not in location]
        if unlocated:
            report.counterexample = (
                f"{len(unlocated)} hits outside all parts, first at "
                f"{unlocated[0]}")
            report.elapsed = tm.elapsed
            return report

        violations: list[str] = []
        same_part_shifts = 0
        split_shifts = 0

        def violate(msg: str):
            if len(violations) < 20:
                violations.append(msg)

        for i, u in enumerate(hits):
            ku, lu, cu = location[u]
            for v in hits[i + 1:]:
                kv, lv, cv = location[v]
                for h in hits:
                    delta = h - u
                    if delta == 0:
                        continue
                    if (v + delta) not in hit_set:
                        continue
                    kiu, liu, ciu = location[h]
                    kiv, liv, civ = location[v + delta]
                    pair = (f"({u}, {v}) shifted by {delta:+d} to "
                            f"({h}, {v + delta})")
                    if not (ku == kv == kiu == kiv):
                        violate(f"{pair}: blocks {ku},{kv} -> {kiu},{kiv} "
                                f"are not all equal")
                        continue
                    if lu == lv:
                        same_part_shifts += 1
                        if liu != liv:
                            violate(f"{pair}: image splits into parts "
                                    f"{liu} and {liv}")
                        elif liu == lu:
                            violate(f"{pair}: image stays in part {lu}")
                        if ciu != cu or civ != cv:
                            violate(f"{pair}: positions ({cu},{cv}) -> "
                                    f"({ciu},{civ}) not preserved")
                    else:
                        split_shifts += 1
                        if liu != lu or liv != lv:
                            violate(f"{pair}: split pair leaves its parts "
                                    f"({lu},{lv}) -> ({liu},{liv})")
                        if cu != cv:
                            violate(f"{pair}: split pair at unequal "
                                    f"positions {cu} != {cv}")

        report.details.append(f"{len(hits)} hits, "
                              f"{same_part_shifts} same-part shifts, "
                              f"{split_shifts} split shifts")
        if violations:
            report.counterexample = violations[0]
            report.details.extend(violations[1:])
        else:
            report.passed = True
    report.elapsed = tm.elapsed
    return report


# ---------------------------------------------------------------------------
# independence suites


def verify_block_independence(k: int, traj: Trajectory,
                              budget: SearchBudget | None = None) -> CheckReport:
    """The designated times of block k form an independence set for the
    tuple of level-k neighborhoods of a_0 .. a_{m-1}."""
    _require_family(traj, FAMILY_LOG_M, "verify_block_independence")
    report = CheckReport("block-independence",
                         {"m": str(traj.m), "k": str(k)})
    with _Timer() as tm:
        block = traj.manifest.block(k)
        specs = tuple(NeighborhoodSpec(Symbol.head(i), k)
                      for i in range(traj.m))
        res = is_independence_set(block.times, specs, traj, budget=budget)
        count = traj.m ** len(block.times)
        report.params["assignments"] = str(count)
        if res.ok:
            report.passed = True
            sample = sorted(res.witness.realizers.items())[:4]
            for sigma, point in sample:
                report.details.append(
                    f"assignment {sigma} realized by {point.render()}")
            report.details.append(f"all {count} assignments realized")
        else:
            report.counterexample = f"assignment {res.failing} unrealizable"
    report.elapsed = tm.elapsed
    return report


def far_offsets(m: int, reach: int = 6) -> tuple:
    """Head offsets past the alphabet in both directions, plus infinity."""
    out: list = []
    for j in range(m, reach + 1):
        out.append(j)
    for j in range(m, reach + 1):
        out.append(-j)
    out.append("inf")
    return tuple(out)


def verify_far_pair_exclusion(traj: Trajectory, offsets=None, cap: int = 5,
                              horizon: int | None = None,
                              mode: str = "level",
                              budget: SearchBudget | None = None) -> CheckReport:
    """No long independence sets for pairs of a_0 with a far head.

    For each offset j (with |j| >= m, or infinity) the pair
    (U1(a_0), U1(a_j)) is searched for independence sets up to the cap;
    the check passes when every search dies below the cap and returns the
    exhaustion certificates.
    """
    _require_family(traj, FAMILY_LOG_M, "verify_far_pair_exclusion")
    if offsets is None:
        offsets = far_offsets(traj.m)
    if horizon is None:
        horizon = traj.block_range(traj.kmax)[1]
    report = CheckReport("far-pair-exclusion",
                         {"m": str(traj.m), "cap": str(cap),
                          "horizon": str(horizon),
                          "offsets": ",".join(str(o) for o in offsets)})
    with _Timer() as tm:
        failures = []
        for off in offsets:
            if off == "inf":
                partner = Symbol.head_inf()
            else:
                if abs(int(off)) < traj.m:
                    raise InvalidConfig(
                        f"offset {off} is within the alphabet; far pairs "
                        f"need |j| >= {traj.m}")
                partner = Symbol.head(int(off))
            specs = (NeighborhoodSpec(Symbol.head(0), 1),
                     NeighborhoodSpec(partner, 1))
            res = max_independence(specs, cap=cap, traj=traj,
                                   horizon=horizon, mode=mode, budget=budget)
            label = f"j={off}"
            if res.length >= cap:
                failures.append(
                    f"{label}: reached length {res.length} with times "
                    f"{res.witness.times}")
                continue
            cert = res.certificate
            report.certificates.append(cert)
            report.details.append(
                f"{label}: max length {res.length}, frontier "
                f"{list(cert.frontier_sizes)}, died at level "
                f"{cert.died_level}")
        if failures:
            report.counterexample = failures[0]
            report.details.extend(failures[1:])
        else:
            report.passed = True
    report.elapsed = tm.elapsed
    return report


def verify_dense_block_independence(n: int, traj: Trajectory,
                                    budget: SearchBudget | None = None) -> CheckReport:
    """Block n of the dense family admits an in-block independence set of
    length n + 1 for the level-n neighborhoods of the first n + 1 heads.

    Realizers are restricted to orbit starts inside block n, so the witness
    is carried entirely by the block's own pattern segments.
    """
    _require_family(traj, FAMILY_LOG_INFTY, "verify_dense_block_independence")
    report = CheckReport("dense-block-independence", {"n": str(n)})
    with _Timer() as tm:
        block = traj.manifest.block(n)
        specs = tuple(NeighborhoodSpec(Symbol.dense(j), n)
                      for j in range(1, n + 2))
        times = block.times
        start_range = (block.start, block.end - 1 - times[-1])
        res = is_independence_set(times, specs, traj,
                                  start_range=start_range, budget=budget)
        count = (n + 1) ** len(times)
        report.params["assignments"] = str(count)
        report.params["times"] = ",".join(str(t) for t in times)
        if res.ok:
            report.passed = True
            starts = sorted({p.time for p in res.witness.realizers.values()})
            report.details.append(
                f"all {count} assignments realized by {len(starts)} "
                f"in-block starts")
        else:
            report.counterexample = f"assignment {res.failing} unrealizable"
    report.elapsed = tm.elapsed
    return report
