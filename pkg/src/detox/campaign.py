"""Discovery campaign over the all-assertions-enabled program, and its result file."""

from __future__ import annotations

import hashlib
import json
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .configuration import Configuration
from .faultspace import ClassKind, build_classes
from .interp import (
    DEFAULT_TIMEOUT_FACTOR, AssertionWindow, ExperimentResult, Interpreter, Outcome,
)
from .lang import Program, render_source

FORMAT_VERSION = 1


class MalformedResultError(ValueError):
    pass


class DigestMismatchWarning(UserWarning):
    pass


def program_digest(p: Program) -> str:
    text = p.source or render_source(p)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("DETOX_JOBS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class FaultRecord:
    bit: int
    lo: int
    hi: int
    rep_t: Optional[int]
    detectors: tuple[tuple[int, int], ...]
    outcome: Outcome
    origin: ClassKind

    @property
    def weight(self) -> int:
        return self.hi - self.lo


@dataclass(frozen=True)
class CampaignResult:
    program_digest: str
    T: int
    workload_steps: int
    total_bits: int
    assertion_ids: tuple[str, ...]
    windows: tuple[AssertionWindow, ...]
    records: tuple[FaultRecord, ...]
    # (name, first bit, bit count); only used for drawing
    variables: tuple[tuple[str, int, int], ...] = ()

    @property
    def n_assertions(self) -> int:
        return len(self.assertion_ids)

    def totals(self) -> dict[Outcome, int]:
        """Weighted per-outcome cell counts as recorded (no detection applied)."""
        out = {o: 0 for o in (Outcome.BENIGN, Outcome.SDC, Outcome.TRAP, Outcome.TIMEOUT)}
        for r in self.records:
            out[r.outcome] += r.weight
        return out


# --- experiment execution ----------------------------------------------------

_worker: Optional[Interpreter] = None


def _init_worker(program, config):
    global _worker
    _worker = Interpreter(program, config)
    _worker.golden_run()


def _run_chunk(args):
    coords, deployment, timeout_factor = args
    return [_worker.run_experiment(t, b, deployment, timeout_factor) for t, b in coords]


def run_experiments(
    program: Program,
    coords: Sequence[tuple[int, int]],
    *,
    config: Optional[Configuration] = None,
    deployment: bool = False,
    timeout_factor: float = DEFAULT_TIMEOUT_FACTOR,
    jobs: int = 1,
) -> list[ExperimentResult]:
    """Run one experiment per (t, bit) coordinate; results in input order."""
    coords = list(coords)
    if jobs <= 1 or len(coords) < 2:
        interp = Interpreter(program, config)
        return [interp.run_experiment(t, b, deployment, timeout_factor) for t, b in coords]
    n_chunks = jobs * 4
    size = -(-len(coords) // n_chunks)
    chunks = [(coords[i:i + size], deployment, timeout_factor)
              for i in range(0, len(coords), size)]
    with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(program, config)) as ex:
        parts = ex.map(_run_chunk, chunks)
        return [r for part in parts for r in part]


def run_discovery(
    p: Program,
    timeout_factor: float = DEFAULT_TIMEOUT_FACTOR,
    jobs: int = 1,
) -> CampaignResult:
    """Inject once per def/use class of the all-enabled program, continuing past detections."""
    interp = Interpreter(p)
    trace = interp.golden_run()
    classes = build_classes(trace)
    todo = [(c.rep_t, c.bit) for c in classes if c.kind is ClassKind.EXPERIMENT]
    results = iter(run_experiments(p, todo, timeout_factor=timeout_factor, jobs=jobs))
    records = []
    for c in classes:
        if c.kind is ClassKind.EXPERIMENT:
            r = next(results)
            records.append(FaultRecord(c.bit, c.lo, c.hi, c.rep_t, r.detectors, r.outcome, c.kind))
        else:
            records.append(FaultRecord(c.bit, c.lo, c.hi, None, (), Outcome.BENIGN, c.kind))
    records.sort(key=lambda r: (r.bit, r.lo))
    return CampaignResult(
        program_digest=program_digest(p),
        T=trace.T,
        workload_steps=trace.workload_steps,
        total_bits=trace.memory_map.total_bits,
        assertion_ids=tuple(a.id for a in p.assertions),
        windows=trace.windows,
        records=tuple(records),
        variables=tuple(trace.memory_map.variables()),
    )


# --- JSON Lines persistence ------------------------------------------------------

def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def dump_lines(result: CampaignResult) -> Iterable[str]:
    header = {
        "format_version": FORMAT_VERSION,
        "program_digest": result.program_digest,
        "T": result.T,
        "workload_steps": result.workload_steps,
        "total_bits": result.total_bits,
        "assertions": [
            {
                "index": i,
                "id": aid,
                "windows": [[w.t_start, w.t_end] for w in result.windows if w.assertion_index == i],
            }
            for i, aid in enumerate(result.assertion_ids)
        ],
        "variables": [{"name": n, "offset": o, "bits": k} for n, o, k in result.variables],
    }
    yield _dumps(header)
    for r in result.records:
        yield _dumps({
            "bit": r.bit,
            "lo": r.lo,
            "hi": r.hi,
            "rep_t": r.rep_t,
            "detectors": [list(d) for d in r.detectors],
            "outcome": r.outcome.value,
            "origin": r.origin.value,
        })


def save(result: CampaignResult, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in dump_lines(result):
            fh.write(line + "\n")


def _windows_from_header(assertions) -> tuple[AssertionWindow, ...]:
    windows = []
    for a in assertions:
        for inst, (t0, t1) in enumerate(a["windows"]):
            windows.append(AssertionWindow(int(a["index"]), inst, int(t0), int(t1)))
    windows.sort(key=lambda w: w.t_start)
    return tuple(windows)


def load(path, program: Optional[Program] = None) -> CampaignResult:
    """Read a result file written by :func:`save`.

    A digest mismatch against ``program`` only warns; structural damage
    (bad JSON, missing keys, area not conserved) raises MalformedResultError.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MalformedResultError(f"{path}: empty result file")
    try:
        header = json.loads(lines[0])
        if header["format_version"] != FORMAT_VERSION:
            raise MalformedResultError(
                f"{path}: unsupported format_version {header['format_version']}"
            )
        records = []
        for n, line in enumerate(lines[1:], start=2):
            d = json.loads(line)
            records.append(FaultRecord(
                bit=int(d["bit"]),
                lo=int(d["lo"]),
                hi=int(d["hi"]),
                rep_t=None if d["rep_t"] is None else int(d["rep_t"]),
                detectors=tuple((int(i), int(s)) for i, s in d["detectors"]),
                outcome=Outcome(d["outcome"]),
                origin=ClassKind(d["origin"]),
            ))
        assertions = sorted(header["assertions"], key=lambda a: a["index"])
        result = CampaignResult(
            program_digest=header["program_digest"],
            T=int(header["T"]),
            workload_steps=int(header["workload_steps"]),
            total_bits=int(header["total_bits"]),
            assertion_ids=tuple(a["id"] for a in assertions),
            windows=_windows_from_header(assertions),
            records=tuple(records),
            variables=tuple(
                (v["name"], int(v["offset"]), int(v["bits"])) for v in header.get("variables", ())
            ),
        )
    except MalformedResultError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedResultError(f"{path}: {exc}") from None

    area = sum(r.weight for r in result.records)
    if area != result.T * result.total_bits:
        raise MalformedResultError(
            f"{path}: records cover {area} cells, expected {result.T * result.total_bits}"
        )
    if program is not None and program_digest(program) != result.program_digest:
        warnings.warn(f"{path}: program digest does not match", DigestMismatchWarning)
    return result
