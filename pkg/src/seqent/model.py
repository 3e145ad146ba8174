"""Core state space: symbols, model points, trajectories, neighborhoods.

A trajectory is a countable forward orbit x_0, x_1, ... through a space that
also carries a family of distinguished fixed reference points ("heads").
Two families are supported:

* the head-indexed family ("log-m"): symbols are heads a_i for i in Z plus a
  single limit head a_inf; the orbit winds through ascending index runs with
  occasional recorded jumps to negative indices,
* the dense family ("log-infty"): symbols are heads e_j enumerating the dyadic
  rationals of [0, 1]; the orbit walks epsilon-chains through that set.

Orbits can be astronomically long (the growth rules force roughly a factor
of 101 per constrained segment), so the head-indexed family stores symbols as
maximal ascending runs with exact integer arithmetic and never materializes
individual points. The dense family is short enough to store explicitly.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import HorizonExceeded, UnknownBlock

KIND_HEAD = "head"
KIND_HEAD_INF = "head-inf"
KIND_DENSE = "dense"

FAMILY_LOG_M = "log-m"
FAMILY_LOG_INFTY = "log-infty"


# ---------------------------------------------------------------------------
# symbols


@dataclass(frozen=True)
class Symbol:
    """A symbol names a head of the space.

    kind "head" carries an integer index (a_i), kind "head-inf" is the limit
    head a_inf, kind "dense" carries a 1-based position in the dyadic
    enumeration (e_j).
    """

    kind: str
    index: int = 0

    @staticmethod
    def head(i: int) -> "Symbol":
        return Symbol(KIND_HEAD, i)

    @staticmethod
    def head_inf() -> "Symbol":
        return Symbol(KIND_HEAD_INF, 0)

    @staticmethod
    def dense(j: int) -> "Symbol":
        if j < 1:
            raise ValueError("dense symbols are 1-based")
        return Symbol(KIND_DENSE, j)

    @property
    def value(self) -> Fraction:
        """Dyadic value of a dense symbol."""
        if self.kind != KIND_DENSE:
            raise ValueError("only dense symbols carry a value")
        return dense_value(self.index)

    def render(self) -> str:
        if self.kind == KIND_HEAD:
            return f"a{self.index}"
        if self.kind == KIND_HEAD_INF:
            return "a_inf"
        return f"e{self.index}"

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Symbol({self.render()})"


def parse_symbol(token: str) -> Symbol:
    """Inverse of Symbol.render, used by file formats and the CLI."""
    token = token.strip()
    if token == "a_inf":
        return Symbol.head_inf()
    if token.startswith("a"):
        return Symbol.head(int(token[1:]))
    if token.startswith("e"):
        return Symbol.dense(int(token[1:]))
    raise ValueError(f"unrecognized symbol token: {token!r}")


# ---------------------------------------------------------------------------
# dyadic enumeration for the dense family
#
# Order: 0, 1, then for each level L >= 1 the odd numerators u/2^L ascending.
# Positions are 1-based.


def dense_value(j: int) -> Fraction:
    if j == 1:
        return Fraction(0)
    if j == 2:
        return Fraction(1)
    if j == 3:
        return Fraction(1, 2)
    # positions after level L-1 end at 2^(L-1) + 1; find the level of j
    level = 2
    while (1 << (level - 1)) + 1 + (1 << (level - 1)) < j:
        level += 1
    offset = j - ((1 << (level - 1)) + 1)  # 1-based among level's values
    return Fraction(2 * offset - 1, 1 << level)


def dense_index(value: Fraction) -> int:
    """Position of a dyadic rational from [0, 1] in the enumeration."""
    value = Fraction(value)
    if value < 0 or value > 1:
        raise ValueError("dense symbols live in [0, 1]")
    if value == 0:
        return 1
    if value == 1:
        return 2
    den = value.denominator
    if den & (den - 1):
        raise ValueError(f"{value} is not dyadic")
    level = den.bit_length() - 1
    return (1 << (level - 1)) + 1 + (value.numerator + 1) // 2


# ---------------------------------------------------------------------------
# model points


@dataclass(frozen=True)
class ModelPoint:
    """Either an orbit point x_t or a head (fixed reference point)."""

    kind: str  # "orbit" | "head"
    time: int = 0
    symbol: Symbol | None = None

    @staticmethod
    def orbit(t: int) -> "ModelPoint":
        if t < 0:
            raise ValueError("orbit times are nonnegative")
        return ModelPoint("orbit", t, None)

    @staticmethod
    def head(sym: Symbol) -> "ModelPoint":
        return ModelPoint("head", 0, sym)

    @property
    def is_orbit(self) -> bool:
        return self.kind == "orbit"

    def render(self) -> str:
        if self.is_orbit:
            return f"x{self.time}"
        return self.symbol.render()

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"ModelPoint({self.render()})"


# ---------------------------------------------------------------------------
# segmentation manifest


@dataclass(frozen=True)
class SegmentRecord:
    """One emitted segment of the orbit.

    For the head-indexed family a segment is a single wind (of a piece, an
    inner gap, or an outer gap): it ascends from index p up to jump_from, then
    jumps down to -jump_depth and ascends to q. ``start``/``length`` cover the
    points the segment owns; winds inside a piece share their first point with
    the previous wind, in which case ``shared`` is true and ``wind_start`` is
    one before ``start``.

    For the dense family a segment is a framed pattern segment or a glue
    chain; wind fields are zero and ``function`` holds the realized pattern.
    """

    path: str
    kind: str  # "wind" | "inner-gap" | "outer-gap" | "pattern" | "glue"
    start: int
    length: int
    p: int = 0
    q: int = 0
    w: int = 0
    jump_from: int = 0
    jump_depth: int = 0
    shared: bool = False
    function: tuple[int, ...] | None = None

    @property
    def end(self) -> int:
        """First time after the segment's owned points."""
        return self.start + self.length

    @property
    def wind_start(self) -> int:
        return self.start - 1 if self.shared else self.start

    @property
    def jump_time(self) -> int:
        """Absolute time of the jump source symbol within a wind."""
        return self.wind_start + (self.jump_from - self.p)


@dataclass(frozen=True)
class BlockRecord:
    level: int
    start: int
    end: int  # exclusive, block proper (last piece / tail glue end)
    times: tuple[int, ...]  # designated times relative to a piece start
    functions: tuple[tuple[int, ...], ...]
    piece_starts: tuple[int, ...]
    winds: tuple[int, ...] = ()
    inner_gaps: tuple[int, ...] = ()
    outer_gap: int = 0
    outer_gap_start: int = 0
    eps: Fraction | None = None


@dataclass
class SegmentationManifest:
    family: str
    m: int  # alphabet size (log-m) or deepest block (log-infty)
    kmax: int
    blocks: list[BlockRecord]
    segments: list[SegmentRecord]

    def block(self, k: int) -> BlockRecord:
        if not 1 <= k <= len(self.blocks):
            raise UnknownBlock(f"block {k} not built (have 1..{len(self.blocks)})")
        return self.blocks[k - 1]


# ---------------------------------------------------------------------------
# neighborhoods


@dataclass(frozen=True)
class NeighborhoodSpec:
    """U^level(center), the level-th basic neighborhood of a head.

    threshold_offset shifts the orbit membership threshold and exists for
    one-step preimage reasoning; regular callers leave it at 0.
    """

    center: Symbol
    level: int
    threshold_offset: int = 0

    def render(self) -> str:
        return f"U{self.level}({self.center.render()})"


def infinity_window(level: int) -> int:
    """Head indices with |i| >= infinity_window(level) sit inside
    U^level(a_inf)."""
    return 3 + level


# ---------------------------------------------------------------------------
# trajectory


class Trajectory:
    """A built orbit plus its segmentation manifest.

    Use the builders in ``construct`` to create one. Symbol queries accept
    any time below ``n_points`` regardless of how long the orbit is; the
    head-indexed family resolves them through binary search over ascending
    runs.
    """

    def __init__(
        self,
        family: str,
        m: int,
        manifest: SegmentationManifest,
        runs: list[tuple[int, int, int]] | None = None,
        dense_symbols: list[int] | None = None,
        schedule=None,
    ):
        self.family = family
        self.m = m
        self.manifest = manifest
        self.schedule = schedule
        self._runs = runs or []
        self._run_starts = [r[0] for r in self._runs]
        self._dense = dense_symbols
        self._dense_hits: dict[int, list[int]] | None = None
        if family == FAMILY_LOG_M:
            last = self._runs[-1]
            self.n_points = last[0] + last[2]
        else:
            self.n_points = len(dense_symbols)
        self._segment_starts = [s.start for s in manifest.segments]
        self._hit_cache: dict[int, tuple[int, ...]] = {}
        self._window_cache: dict[int, tuple[int, ...]] = {}

    # -- basic queries ------------------------------------------------------

    @property
    def horizon(self) -> int:
        """Largest valid orbit time."""
        return self.n_points - 1

    @property
    def kmax(self) -> int:
        return len(self.manifest.blocks)

    def check_time(self, t: int) -> None:
        if not 0 <= t < self.n_points:
            raise HorizonExceeded(f"time {t} outside [0, {self.n_points})")

    def symbol_index_at(self, t: int) -> int:
        """Head index (log-m) or dense position (log-infty) of x_t."""
        self.check_time(t)
        if self._dense is not None:
            return self._dense[t]
        i = bisect.bisect_right(self._run_starts, t) - 1
        start, first, _length = self._runs[i]
        return first + (t - start)

    def symbol_at(self, t: int) -> Symbol:
        idx = self.symbol_index_at(t)
        if self.family == FAMILY_LOG_M:
            return Symbol.head(idx)
        return Symbol.dense(idx)

    def segment_at(self, t: int) -> SegmentRecord:
        self.check_time(t)
        i = bisect.bisect_right(self._segment_starts, t) - 1
        return self.manifest.segments[i]

    def segment_path_at(self, t: int) -> str:
        return self.segment_at(t).path

    def block_of_time(self, t: int) -> int:
        """Block number whose span (block proper plus trailing gap) holds t."""
        self.check_time(t)
        blocks = self.manifest.blocks
        starts = [b.start for b in blocks]
        i = bisect.bisect_right(starts, t) - 1
        if i < 0:
            raise UnknownBlock(f"time {t} precedes the first block")
        return blocks[i].level

    def block_range(self, k: int) -> tuple[int, int]:
        """Inclusive time range of block k proper (no trailing outer gap)."""
        b = self.manifest.block(k)
        return b.start, b.end - 1

    def level_threshold(self, level: int) -> int:
        """Orbit membership threshold for level: start of block ``level``."""
        return self.manifest.block(level).start

    # -- runs and hit lists -------------------------------------------------

    @property
    def runs(self) -> list[tuple[int, int, int]]:
        return list(self._runs)

    def head_hits(self, idx: int) -> tuple[int, ...]:
        """All orbit times whose symbol is a_idx, ascending."""
        if self.family != FAMILY_LOG_M:
            raise ValueError("head_hits applies to the head-indexed family")
        cached = self._hit_cache.get(idx)
        if cached is None:
            out = []
            for start, first, length in self._runs:
                if first <= idx < first + length:
                    out.append(start + (idx - first))
            cached = tuple(out)
            self._hit_cache[idx] = cached
        return cached

    def dense_hits(self, j: int) -> tuple[int, ...]:
        """All orbit times whose symbol is e_j, ascending."""
        if self._dense is None:
            raise ValueError("dense_hits applies to the dense family")
        if self._dense_hits is None:
            table: dict[int, list[int]] = {}
            for t, idx in enumerate(self._dense):
                table.setdefault(idx, []).append(t)
            self._dense_hits = table
        return tuple(self._dense_hits.get(j, ()))

    def near_head_times(self, width: int) -> tuple[int, ...]:
        """Orbit times with |symbol index| <= width (log-m), ascending.

        This is the sparse complement of the orbit part of an infinity
        neighborhood: only a handful of points per run fall in the window.
        """
        cached = self._window_cache.get(width)
        if cached is None:
            out = []
            for start, first, length in self._runs:
                lo = max(first, -width)
                hi = min(first + length - 1, width)
                for idx in range(lo, hi + 1):
                    out.append(start + (idx - first))
            out.sort()
            cached = tuple(out)
            self._window_cache[width] = cached
        return cached

    def symbols(self, lo: int = 0, hi: int | None = None):
        """Yield (t, Symbol) over [lo, hi]; refuses astronomically long spans."""
        if hi is None:
            hi = self.horizon
        if hi - lo > 50_000_000:
            raise HorizonExceeded("requested span too long to enumerate")
        for t in range(lo, hi + 1):
            yield t, self.symbol_at(t)


# ---------------------------------------------------------------------------
# dynamics


def step(point: ModelPoint, traj: Trajectory) -> ModelPoint:
    """One forward step of the map.

    Orbit points advance along the orbit; the head a_i maps to a_{i+1}; the
    limit head and all dense heads are fixed.
    """
    if point.is_orbit:
        t = point.time + 1
        if t >= traj.n_points:
            raise HorizonExceeded(f"step past the built horizon {traj.horizon}")
        return ModelPoint.orbit(t)
    sym = point.symbol
    if sym.kind == KIND_HEAD:
        return ModelPoint.head(Symbol.head(sym.index + 1))
    return point


def iterate(point: ModelPoint, t: int, traj: Trajectory) -> ModelPoint:
    """t-th forward image of point, computed in closed form."""
    if t < 0:
        raise ValueError("iterate count must be nonnegative")
    if point.is_orbit:
        tt = point.time + t
        if tt >= traj.n_points:
            raise HorizonExceeded(f"time {tt} past the built horizon")
        return ModelPoint.orbit(tt)
    sym = point.symbol
    if sym.kind == KIND_HEAD:
        return ModelPoint.head(Symbol.head(sym.index + t))
    return point


# ---------------------------------------------------------------------------
# membership and resolution


def orbit_member(spec: NeighborhoodSpec, t: int, traj: Trajectory) -> bool:
    """Does the orbit point x_t lie in the resolved neighborhood."""
    if not 0 <= t < traj.n_points:
        return False
    center = spec.center
    if center.kind == KIND_HEAD_INF:
        return abs(traj.symbol_index_at(t)) >= infinity_window(spec.level)
    threshold = traj.level_threshold(spec.level) + spec.threshold_offset
    if t < threshold:
        return False
    return traj.symbol_index_at(t) == center.index


def head_member(spec: NeighborhoodSpec, sym: Symbol, traj: Trajectory) -> bool:
    """Does the head named by sym lie in the resolved neighborhood."""
    center = spec.center
    if center.kind == KIND_HEAD_INF:
        if sym.kind == KIND_HEAD_INF:
            return True
        if sym.kind == KIND_HEAD:
            return abs(sym.index) >= infinity_window(spec.level)
        return False
    return sym == center


def point_member(spec: NeighborhoodSpec, point: ModelPoint, traj: Trajectory) -> bool:
    if point.is_orbit:
        return orbit_member(spec, point.time, traj)
    return head_member(spec, point.symbol, traj)


class ResolvedNeighborhood:
    """Set-like view of all model points inside a neighborhood.

    Finite-center neighborhoods materialize on demand; infinity-centered
    ones are genuinely infinite (every head a_j with |j| large enough is a
    member), so they only support membership tests and sparse complements.
    """

    def __init__(self, spec: NeighborhoodSpec, traj: Trajectory):
        self.spec = spec
        self.traj = traj

    def __contains__(self, point: ModelPoint) -> bool:
        return point_member(self.spec, point, self.traj)

    @property
    def is_enumerable(self) -> bool:
        return self.spec.center.kind != KIND_HEAD_INF

    def orbit_times(self) -> tuple[int, ...]:
        """Ascending orbit times inside the neighborhood (finite centers)."""
        spec, traj = self.spec, self.traj
        center = spec.center
        if center.kind == KIND_HEAD_INF:
            raise ValueError("infinity neighborhoods have a dense orbit part; "
                             "use orbit_miss_times for the complement")
        threshold = traj.level_threshold(spec.level) + spec.threshold_offset
        if center.kind == KIND_HEAD:
            hits = traj.head_hits(center.index)
        else:
            hits = traj.dense_hits(center.index)
        i = bisect.bisect_left(hits, threshold)
        return hits[i:]

    def orbit_miss_times(self) -> tuple[int, ...]:
        """Ascending orbit times outside an infinity neighborhood."""
        if self.spec.center.kind != KIND_HEAD_INF:
            raise ValueError("only infinity neighborhoods expose a complement")
        return self.traj.near_head_times(infinity_window(self.spec.level) - 1)

    def to_points(self) -> set[ModelPoint]:
        """Materialize a finite-center neighborhood as an explicit set."""
        pts = {ModelPoint.head(self.spec.center)}
        pts.update(ModelPoint.orbit(t) for t in self.orbit_times())
        return pts


def resolve(spec: NeighborhoodSpec, traj: Trajectory) -> ResolvedNeighborhood:
    """Resolve a neighborhood spec against a trajectory.

    The result behaves like a set of model points (``in`` tests work for both
    orbit points and heads). Finite-center neighborhoods can be materialized
    with ``to_points``; infinity-centered ones are infinite by design.
    """
    if spec.level < 1:
        raise ValueError("neighborhood levels are 1-based")
    if spec.center.kind != KIND_HEAD_INF:
        # levels are tied to built blocks through their thresholds
        traj.manifest.block(spec.level)
    return ResolvedNeighborhood(spec, traj)


def itinerary_hits(
    point: ModelPoint,
    times: tuple[int, ...],
    specs: tuple[NeighborhoodSpec, ...],
    traj: Trajectory,
) -> bool:
    """Does step^t(point) land in the matching neighborhood for every t."""
    if len(times) != len(specs):
        raise ValueError("times and neighborhood specs must align")
    for t, spec in zip(times, specs):
        if not point_member(spec, iterate(point, t, traj), traj):
            return False
    return True
