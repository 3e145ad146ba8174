"""Deterministic file formats: manifests, symbol listings, certificates,
reports.

Every file is line-oriented UTF-8 with a leading ``format: 1`` header and a
``kind`` line. Manifests carry the full build schedule plus the segmentation
for audit, and a sha256 content hash; rebuilding from the schedule must
reproduce the manifest byte for byte. Infinity renders as the token ``inf``.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction
from pathlib import Path

from .errors import InvalidConfig
from .independence import ExhaustionCertificate, max_independence
from .model import (
    FAMILY_LOG_INFTY,
    FAMILY_LOG_M,
    NeighborhoodSpec,
    Trajectory,
    parse_symbol,
)

FORMAT_VERSION = 1
SYMBOL_LINE_CAP = 1_000_000


def config_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def parse_spec(token: str) -> NeighborhoodSpec:
    """Inverse of NeighborhoodSpec.render for standard specs."""
    token = token.strip()
    if not token.startswith("U") or "(" not in token or not token.endswith(")"):
        raise ValueError(f"unrecognized neighborhood token: {token!r}")
    level_part, sym_part = token[1:-1].split("(", 1)
    return NeighborhoodSpec(parse_symbol(sym_part), int(level_part))


def parse_tuple(token: str) -> tuple[NeighborhoodSpec, ...]:
    return tuple(parse_spec(t) for t in token.split(","))


# ---------------------------------------------------------------------------
# manifests


def _segment_line(seg) -> str:
    fields = [f"path={seg.path}", f"kind={seg.kind}", f"start={seg.start}",
              f"length={seg.length}"]
    if seg.kind in ("wind", "inner-gap", "outer-gap"):
        fields += [f"p={seg.p}", f"q={seg.q}", f"w={seg.w}",
                   f"jump_from={seg.jump_from}",
                   f"jump_depth={seg.jump_depth}",
                   f"shared={1 if seg.shared else 0}"]
    if seg.function is not None:
        fields.append("function=" + ";".join(str(v) for v in seg.function))
    return "segment: " + " ".join(fields)


def manifest_string(traj: Trajectory) -> str:
    """Canonical manifest text for a built trajectory, hash line included."""
    from .construct import patterns
    sched = traj.schedule
    lines = [f"format: {FORMAT_VERSION}", "kind: manifest",
             f"family: {traj.family}", f"m: {traj.m}",
             f"kmax: {traj.kmax}", f"points: {traj.n_points}"]
    if traj.family == FAMILY_LOG_M:
        for k in range(1, traj.kmax + 1):
            lines.append(f"winds[{k}]: " +
                         ",".join(str(w) for w in sched.winds[k - 1]))
            lines.append(f"inner-gaps[{k}]: " +
                         ",".join(str(g) for g in sched.inner_gaps[k - 1]))
        lines.append("outer-gaps: " +
                     ",".join(str(g) for g in sched.outer_gaps[:traj.kmax]))
        for k in range(1, traj.kmax + 1):
            lines.append(f"functions[{k}]: " + ";".join(
                ",".join(str(v) for v in f) for f in patterns(traj.m, k)))
    else:
        for n in range(1, traj.kmax + 1):
            lines.append(f"eps[{n}]: {sched.eps[n - 1]}")
            lines.append(f"times[{n}]: " +
                         ",".join(str(t) for t in sched.times[n - 1]))
    for b in traj.manifest.blocks:
        extra = ""
        if traj.family == FAMILY_LOG_M:
            extra = f" outer-gap-start={b.outer_gap_start}"
        lines.append(
            f"block[{b.level}]: start={b.start} end={b.end} "
            f"times={','.join(str(t) for t in b.times)} "
            f"pieces={','.join(str(p) for p in b.piece_starts)}" + extra)
    for seg in traj.manifest.segments:
        lines.append(_segment_line(seg))
    body = "\n".join(lines) + "\n"
    return body + f"hash: {config_hash(body)}\n"


def write_manifest(traj: Trajectory, path) -> str:
    text = manifest_string(traj)
    Path(path).write_text(text, encoding="utf-8")
    return text


def _header_value(lines: list[str], key: str) -> str:
    prefix = key + ": "
    for line in lines:
        if line.startswith(prefix):
            return line[len(prefix):]
    raise InvalidConfig(f"manifest is missing its {key} line")


def read_manifest(path) -> dict:
    """Parse a manifest file: header, schedule, and verified content hash."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or lines[0] != f"format: {FORMAT_VERSION}":
        raise InvalidConfig("unsupported or missing format header")
    if _header_value(lines, "kind") != "manifest":
        raise InvalidConfig("not a manifest file")
    hash_line = lines[-1]
    if not hash_line.startswith("hash: "):
        raise InvalidConfig("manifest is missing its hash line")
    body = "\n".join(lines[:-1]) + "\n"
    recorded = hash_line[len("hash: "):]
    if config_hash(body) != recorded:
        raise InvalidConfig("manifest content does not match its hash")
    family = _header_value(lines, "family")
    m = int(_header_value(lines, "m"))
    kmax = int(_header_value(lines, "kmax"))
    from .construct import GrowthSchedule
    if family == FAMILY_LOG_M:
        winds = [
            [int(w) for w in _header_value(lines, f"winds[{k}]").split(",")]
            for k in range(1, kmax + 1)]
        inner = [
            [int(g) for g in
             _header_value(lines, f"inner-gaps[{k}]").split(",")]
            for k in range(1, kmax + 1)]
        outer = [int(g) for g in
                 _header_value(lines, "outer-gaps").split(",")]
        schedule = GrowthSchedule(FAMILY_LOG_M, m, winds=winds,
                                  inner_gaps=inner, outer_gaps=outer)
    elif family == FAMILY_LOG_INFTY:
        eps = [Fraction(_header_value(lines, f"eps[{n}]"))
               for n in range(1, kmax + 1)]
        times = [
            [int(t) for t in _header_value(lines, f"times[{n}]").split(",")]
            for n in range(1, kmax + 1)]
        schedule = GrowthSchedule(FAMILY_LOG_INFTY, m, eps=eps, times=times)
    else:
        raise InvalidConfig(f"unknown family {family!r}")
    return {"family": family, "m": m, "kmax": kmax, "schedule": schedule,
            "text": text}


def rebuild_from_manifest(data: dict) -> Trajectory:
    from .construct import build_log_infty, build_log_m
    if data["family"] == FAMILY_LOG_M:
        return build_log_m(data["m"], data["kmax"], data["schedule"])
    return build_log_infty(data["kmax"], data["schedule"])


def replay_manifest(path) -> tuple[bool, str]:
    """Rebuild from a manifest's schedule and compare byte for byte."""
    data = read_manifest(path)
    rebuilt = manifest_string(rebuild_from_manifest(data))
    if rebuilt == data["text"]:
        return True, "manifest reproduced byte for byte"
    old_lines = data["text"].splitlines()
    new_lines = rebuilt.splitlines()
    for i, (a, b) in enumerate(zip(old_lines, new_lines), 1):
        if a != b:
            return False, f"line {i} differs: file has {a!r}, rebuild {b!r}"
    return False, (f"length differs: file has {len(old_lines)} lines, "
                   f"rebuild {len(new_lines)}")


# ---------------------------------------------------------------------------
# symbol listings


def write_symbols(traj: Trajectory, path, lo: int = 0, hi: int | None = None,
                  max_lines: int = SYMBOL_LINE_CAP) -> int:
    """One line per time: ``t<TAB>symbol<TAB>segment-path``."""
    if hi is None:
        hi = min(traj.horizon, lo + max_lines - 1)
    if hi - lo + 1 > max_lines:
        raise InvalidConfig(
            f"span [{lo}, {hi}] exceeds {max_lines} lines; pass a range")
    lines = [f"format: {FORMAT_VERSION}", "kind: symbols",
             f"family: {traj.family}", f"range: {lo},{hi}"]
    seg = None
    for t, sym in traj.symbols(lo, hi):
        if seg is None or t >= seg.end:
            seg = traj.segment_at(t)
        lines.append(f"{t}\t{sym.render()}\t{seg.path}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return hi - lo + 1


def replay_symbols(path, traj: Trajectory) -> tuple[bool, str]:
    """Compare a symbol file line by line against a rebuilt trajectory.

    Returns (ok, message); on mismatch the message names the first
    offending line, which is the counterexample.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if len(lines) < 4 or lines[1] != "kind: symbols":
        raise InvalidConfig(f"{path} is not a symbol file")
    if lines[0] != f"format: {FORMAT_VERSION}":
        raise InvalidConfig(f"{path}: unsupported {lines[0]!r}")
    family = lines[2].removeprefix("family: ")
    if family != traj.family:
        return False, f"family mismatch: file {family}, build {traj.family}"
    try:
        lo, hi = (int(x) for x in lines[3].removeprefix("range: ").split(","))
    except ValueError as exc:
        raise InvalidConfig(f"{path}: unreadable range line") from exc
    data = lines[4:]
    if len(data) != hi - lo + 1:
        return False, f"{len(data)} data lines do not cover range {lo},{hi}"
    seg = None
    for offset, (t, sym) in enumerate(traj.symbols(lo, hi)):
        if seg is None or t >= seg.end:
            seg = traj.segment_at(t)
        expected = f"{t}\t{sym.render()}\t{seg.path}"
        if data[offset] != expected:
            return False, (f"line {offset + 5}: file has {data[offset]!r}, "
                           f"rebuild gives {expected!r}")
    return True, f"{hi - lo + 1} symbol lines reproduced"


# ---------------------------------------------------------------------------
# certificates


def certificate_string(cert: ExhaustionCertificate) -> str:
    lines = [f"format: {FORMAT_VERSION}", "kind: certificate",
             f"tuple: {cert.tuple_rendered}",
             f"target-length: {cert.target_length}",
             f"horizon: {cert.horizon}",
             f"search: {cert.search}",
             "frontier: " + ",".join(str(n) for n in cert.frontier_sizes),
             f"died-level: {cert.died_level}",
             f"nodes: {cert.nodes_used}"]
    return "\n".join(lines) + "\n"


def write_certificate(cert: ExhaustionCertificate, path) -> str:
    text = certificate_string(cert)
    Path(path).write_text(text, encoding="utf-8")
    return text


def read_certificate(path) -> ExhaustionCertificate:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != f"format: {FORMAT_VERSION}":
        raise InvalidConfig("unsupported or missing format header")
    if _header_value(lines, "kind") != "certificate":
        raise InvalidConfig("not a certificate file")
    return ExhaustionCertificate(
        tuple_rendered=_header_value(lines, "tuple"),
        target_length=int(_header_value(lines, "target-length")),
        horizon=int(_header_value(lines, "horizon")),
        search=_header_value(lines, "search"),
        frontier_sizes=tuple(
            int(n) for n in _header_value(lines, "frontier").split(",")),
        died_level=int(_header_value(lines, "died-level")),
        nodes_used=int(_header_value(lines, "nodes")))


def replay_certificate(cert: ExhaustionCertificate,
                       traj: Trajectory) -> tuple[bool, str]:
    """Re-run the recorded search and compare the frontier trace exactly."""
    if ":" in cert.tuple_rendered:
        raise InvalidConfig(
            "composite certificates replay through the flower check")
    specs = parse_tuple(cert.tuple_rendered)
    mode = "level" if cert.search == "level-shapes" else "dfs"
    res = max_independence(specs, cap=cert.target_length, traj=traj,
                           horizon=cert.horizon, mode=mode)
    if res.certificate is None:
        return False, (f"replay reached length {res.length}, but the "
                       f"certificate records an exhaustion")
    got = res.certificate
    if got.frontier_sizes != cert.frontier_sizes:
        return False, (f"frontier mismatch: recorded "
                       f"{list(cert.frontier_sizes)}, replay "
                       f"{list(got.frontier_sizes)}")
    if got.died_level != cert.died_level:
        return False, (f"died-level mismatch: recorded {cert.died_level}, "
                       f"replay {got.died_level}")
    return True, "certificate reproduced"


# ---------------------------------------------------------------------------
# reports


def report_string(report, config_fingerprint: str | None = None) -> str:
    lines = [f"format: {FORMAT_VERSION}", "kind: report",
             f"name: {report.name}"]
    if config_fingerprint is not None:
        lines.append(f"config-hash: {config_fingerprint}")
    for key in sorted(report.params):
        lines.append(f"param {key}: {report.params[key]}")
    lines.append(f"result: {'PASS' if report.passed else 'FAIL'}")
    if report.counterexample:
        lines.append(f"counterexample: {report.counterexample}")
    for d in report.details:
        lines.append(f"detail: {d}")
    lines.append(f"elapsed: {report.elapsed:.3f}")
    return "\n".join(lines) + "\n"


def write_report(report, path, config_fingerprint: str | None = None) -> str:
    text = report_string(report, config_fingerprint)
    Path(path).write_text(text, encoding="utf-8")
    return text
