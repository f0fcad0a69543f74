"""Step-counted execution of DETOx-IL programs with single-bit fault injection.

Every statement occupies ``cost`` time steps; its effect (reads and writes)
happens in the last one. Variable declarations, ``if`` conditions and each
``while`` condition evaluation take one step. A fault at coordinate
``(t, bit)`` inverts ``bit`` immediately before step ``t`` executes.

Memory is the densely packed sequence of declared variables (array elements
consecutive, least significant bit first). Predicate temporaries are not part
of it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .configuration import Configuration, as_configuration
from .lang import (
    Assert, Assign, BinOp, Const, If, Index, Name, Not, Output, Program, While,
)

MASK32 = 0xFFFFFFFF
DEFAULT_TIMEOUT_FACTOR = 10.0
DEFAULT_STEP_LIMIT = 1_000_000


class Outcome(str, enum.Enum):
    BENIGN = "BENIGN"
    SDC = "SDC"
    TRAP = "TRAP"
    TIMEOUT = "TIMEOUT"
    # only produced by deployment-mode runs and configuration-level counts
    DETECTED = "DETECTED"


class GoldenRunError(RuntimeError):
    """The fault-free run trapped, timed out or failed an assertion."""


class CoordinateError(ValueError):
    pass


class Trap(Exception):
    pass


class _Timeout(Exception):
    pass


class _Detected(Exception):
    def __init__(self, index: int, step: int):
        self.index = index
        self.step = step


@dataclass(frozen=True)
class MemEntry:
    name: str
    element: int
    offset: int
    width: int


@dataclass(frozen=True)
class MemoryMap:
    entries: tuple[MemEntry, ...]
    total_bits: int

    @classmethod
    def of(cls, p: Program) -> "MemoryMap":
        entries, off = [], 0
        for v in p.vars:
            for k in range(v.n_elements):
                entries.append(MemEntry(v.name, k, off, v.width))
                off += v.width
        return cls(tuple(entries), off)

    def locate(self, bit: int) -> tuple[int, int]:
        """Return (slot, bit within slot) for a global bit index."""
        if not 0 <= bit < self.total_bits:
            raise CoordinateError(f"bit {bit} outside [0, {self.total_bits})")
        lo, hi = 0, len(self.entries)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.entries[mid].offset <= bit:
                lo = mid
            else:
                hi = mid
        e = self.entries[lo]
        return lo, bit - e.offset

    def bits_of(self, name: str) -> range:
        """Global bit range covered by variable ``name``."""
        es = [e for e in self.entries if e.name == name]
        if not es:
            raise KeyError(name)
        return range(es[0].offset, es[-1].offset + es[-1].width)

    def variables(self) -> list[tuple[str, int, int]]:
        """(name, first bit, bit count) per variable, in layout order."""
        out: list[tuple[str, int, int]] = []
        for e in self.entries:
            if out and out[-1][0] == e.name:
                name, start, n = out[-1]
                out[-1] = (name, start, n + e.width)
            else:
                out.append((e.name, e.offset, e.width))
        return out


@dataclass(frozen=True)
class AssertionWindow:
    assertion_index: int
    instance: int
    t_start: int
    t_end: int

    @property
    def duration(self) -> int:
        return self.t_end - self.t_start


@dataclass(frozen=True)
class GoldenTrace:
    T: int
    workload_steps: int
    accesses: tuple[tuple[int, int, str], ...]  # (t, bit, "R" | "W" | "RW")
    windows: tuple[AssertionWindow, ...]
    outputs: tuple[int, ...]
    memory_map: MemoryMap


@dataclass(frozen=True)
class ExperimentResult:
    detectors: tuple[tuple[int, int], ...]
    outcome: Outcome


class _Machine:
    __slots__ = (
        "mem", "t", "work", "budget", "inject_t", "inject_slot", "inject_mask",
        "reads", "writes", "accesses", "windows", "instances", "detectors", "seen",
        "outputs", "deploy", "observer",
    )

    def __init__(self, init_mem, budget):
        self.mem = list(init_mem)
        self.t = 0
        self.work = 0
        self.budget = budget
        self.inject_t = -1
        self.inject_slot = 0
        self.inject_mask = 0
        self.reads = None
        self.writes = None
        self.accesses = None
        self.windows = None
        self.instances = None
        self.detectors = []
        self.seen = set()
        self.outputs = []
        self.deploy = False
        self.observer = None


def _begin(m: _Machine) -> None:
    if m.t == m.inject_t:
        m.mem[m.inject_slot] ^= m.inject_mask


def _end(m: _Machine, workload: bool) -> None:
    if m.accesses is not None:
        reads, writes = m.reads, m.writes
        t = m.t
        for s in sorted(reads | writes):
            if s in reads:
                mode = "RW" if s in writes else "R"
            else:
                mode = "W"
            m.accesses.append((t, s, mode))
        reads.clear()
        writes.clear()
    m.t += 1
    if workload:
        m.work += 1
        if m.observer is not None:
            m.observer(tuple(m.mem))
        if m.work > m.budget:
            raise _Timeout


def _idle(m: _Machine, workload: bool) -> None:
    """A time-only step of a multi-step statement."""
    _begin(m)
    _end(m, workload)


# --- compilation to closures ------------------------------------------------

def _compile_expr(e, layout) -> Callable[[_Machine], int]:
    if isinstance(e, Const):
        v = e.value & MASK32
        return lambda m: v
    if isinstance(e, Name):
        s = layout[e.name][0]

        def read(m):
            if m.reads is not None:
                m.reads.add(s)
            return m.mem[s]
        return read
    if isinstance(e, Index):
        base, n = layout[e.name]
        idx = _compile_expr(e.index, layout)

        def read_elem(m):
            i = idx(m)
            if i >= n:
                raise Trap(f"index {i} out of range for {e.name}[{n}]")
            if m.reads is not None:
                m.reads.add(base + i)
            return m.mem[base + i]
        return read_elem
    if isinstance(e, Not):
        o = _compile_expr(e.operand, layout)
        return lambda m: 0 if o(m) else 1
    l = _compile_expr(e.left, layout)
    r = _compile_expr(e.right, layout)
    op = e.op
    if op == "and":
        return lambda m: 1 if (l(m) and r(m)) else 0
    if op == "or":
        return lambda m: 1 if (l(m) or r(m)) else 0
    if op == "+":
        return lambda m: (l(m) + r(m)) & MASK32
    if op == "-":
        return lambda m: (l(m) - r(m)) & MASK32
    if op == "*":
        return lambda m: (l(m) * r(m)) & MASK32
    if op in ("/", "%"):
        div = op == "/"

        def divide(m):
            a, b = l(m), r(m)
            if b == 0:
                raise Trap("division by zero")
            return a // b if div else a % b
        return divide
    if op == "==":
        return lambda m: 1 if l(m) == r(m) else 0
    if op == "!=":
        return lambda m: 1 if l(m) != r(m) else 0
    if op == "<":
        return lambda m: 1 if l(m) < r(m) else 0
    if op == "<=":
        return lambda m: 1 if l(m) <= r(m) else 0
    if op == ">":
        return lambda m: 1 if l(m) > r(m) else 0
    if op == ">=":
        return lambda m: 1 if l(m) >= r(m) else 0
    raise ValueError(f"unknown operator {op!r}")


def _compile_block(stmts, layout, widths, aindex, enabled):
    fns = tuple(_compile_stmt(s, layout, widths, aindex, enabled) for s in stmts)

    def run(m):
        for f in fns:
            f(m)
    return run


def _compile_stmt(s, layout, widths, aindex, enabled):
    if isinstance(s, Assign):
        e = _compile_expr(s.expr, layout)
        k = s.cost
        if isinstance(s.target, Name):
            slot = layout[s.target.name][0]
            mask = (1 << widths[s.target.name]) - 1

            def assign(m):
                for _ in range(k - 1):
                    _idle(m, True)
                _begin(m)
                v = e(m)
                m.mem[slot] = v & mask
                if m.writes is not None:
                    m.writes.add(slot)
                _end(m, True)
            return assign
        base, n = layout[s.target.name]
        mask = (1 << widths[s.target.name]) - 1
        idx = _compile_expr(s.target.index, layout)

        def assign_elem(m):
            for _ in range(k - 1):
                _idle(m, True)
            _begin(m)
            i = idx(m)
            if i >= n:
                raise Trap(f"index {i} out of range for {s.target.name}[{n}]")
            v = e(m)
            m.mem[base + i] = v & mask
            if m.writes is not None:
                m.writes.add(base + i)
            _end(m, True)
        return assign_elem
    if isinstance(s, Output):
        e = _compile_expr(s.expr, layout)
        k = s.cost

        def output(m):
            for _ in range(k - 1):
                _idle(m, True)
            _begin(m)
            m.outputs.append(e(m))
            _end(m, True)
        return output
    if isinstance(s, If):
        c = _compile_expr(s.cond, layout)
        then = _compile_block(s.then, layout, widths, aindex, enabled)
        orelse = _compile_block(s.orelse, layout, widths, aindex, enabled)

        def if_(m):
            _begin(m)
            v = c(m)
            _end(m, True)
            if v:
                then(m)
            else:
                orelse(m)
        return if_
    if isinstance(s, While):
        c = _compile_expr(s.cond, layout)
        body = _compile_block(s.body, layout, widths, aindex, enabled)

        def while_(m):
            while True:
                _begin(m)
                v = c(m)
                _end(m, True)
                if not v:
                    break
                body(m)
        return while_
    if isinstance(s, Assert):
        idx = aindex[s.decl.id]
        if not enabled[idx]:
            return lambda m: None
        pred = _compile_expr(s.decl.predicate, layout)
        k = s.decl.cost

        def check(m):
            t_start = m.t
            for _ in range(k - 1):
                _idle(m, False)
            _begin(m)
            step = m.t
            try:
                ok = pred(m)
            except Trap:
                # a predicate that cannot be evaluated counts as failing
                ok = 0
            _end(m, False)
            if m.windows is not None:
                inst = m.instances.get(idx, 0)
                m.instances[idx] = inst + 1
                m.windows.append(AssertionWindow(idx, inst, t_start, m.t))
            if not ok:
                if m.deploy:
                    raise _Detected(idx, step)
                if idx not in m.seen:
                    m.seen.add(idx)
                    m.detectors.append((idx, step))
        return check
    raise TypeError(f"unknown statement {s!r}")


class Interpreter:
    """Compiled form of one program under one assertion configuration.

    Disabled assertions are skipped outright and consume no time, so the
    timeline is that of the assertion-stripped variant.
    """

    def __init__(self, program: Program, config: Optional[Configuration] = None):
        self.program = program
        n = program.n_assertions
        self.config = Configuration.all_enabled(n) if config is None else as_configuration(config, n)
        self.memory_map = MemoryMap.of(program)
        layout, slot = {}, 0
        for v in program.vars:
            layout[v.name] = (slot, v.n_elements)
            slot += v.n_elements
        widths = {v.name: v.width for v in program.vars}
        aindex = {a.id: i for i, a in enumerate(program.assertions)}
        self._init_mem = [x for v in program.vars for x in v.init]
        self._decl_slots = [range(layout[v.name][0], layout[v.name][0] + v.n_elements)
                            for v in program.vars]
        self._body = _compile_block(program.body, layout, widths, aindex, self.config.bits)
        self._golden: Optional[GoldenTrace] = None

    def _run(self, m: _Machine) -> None:
        # declarations: one workload step each, writing every element
        for slots in self._decl_slots:
            _begin(m)
            if m.writes is not None:
                m.writes.update(slots)
            for s in slots:
                m.mem[s] = self._init_mem[s]
            _end(m, True)
        self._body(m)

    def golden_run(self, step_limit: int = DEFAULT_STEP_LIMIT) -> GoldenTrace:
        if self._golden is not None:
            return self._golden
        m = _Machine([0] * len(self._init_mem), step_limit)
        m.reads, m.writes, m.accesses = set(), set(), []
        m.windows, m.instances = [], {}
        try:
            self._run(m)
        except Trap as exc:
            raise GoldenRunError(f"golden run trapped at step {m.t}: {exc}") from None
        except _Timeout:
            raise GoldenRunError(f"golden run exceeded {step_limit} workload steps") from None
        if m.detectors:
            ids = [self.program.assertions[i].id for i, _ in m.detectors]
            raise GoldenRunError(f"assertions fail in the fault-free run: {ids}")
        entries = self.memory_map.entries
        accesses = tuple(
            (t, b, mode)
            for t, s, mode in m.accesses
            for b in range(entries[s].offset, entries[s].offset + entries[s].width)
        )
        self._golden = GoldenTrace(
            T=m.t,
            workload_steps=m.work,
            accesses=accesses,
            windows=tuple(m.windows),
            outputs=tuple(m.outputs),
            memory_map=self.memory_map,
        )
        return self._golden

    def run_experiment(
        self,
        t: int,
        bit: int,
        deployment: bool = False,
        timeout_factor: float = DEFAULT_TIMEOUT_FACTOR,
        observer: Optional[Callable[[tuple], None]] = None,
    ) -> ExperimentResult:
        g = self.golden_run()
        if not 0 <= t < g.T:
            raise CoordinateError(f"time {t} outside [0, {g.T})")
        slot, b = self.memory_map.locate(bit)
        m = _Machine([0] * len(self._init_mem), timeout_factor * g.workload_steps)
        m.inject_t, m.inject_slot, m.inject_mask = t, slot, 1 << b
        m.deploy = deployment
        m.observer = observer
        try:
            self._run(m)
        except Trap:
            return ExperimentResult(tuple(m.detectors), Outcome.TRAP)
        except _Timeout:
            return ExperimentResult(tuple(m.detectors), Outcome.TIMEOUT)
        except _Detected as d:
            return ExperimentResult(((d.index, d.step),), Outcome.DETECTED)
        outcome = Outcome.BENIGN if tuple(m.outputs) == g.outputs else Outcome.SDC
        return ExperimentResult(tuple(m.detectors), outcome)


@lru_cache(maxsize=16)
def _interpreter(program: Program, config: Optional[Configuration]) -> Interpreter:
    return Interpreter(program, config)


def golden_run(p: Program, config: Optional[Configuration] = None) -> GoldenTrace:
    """Fault-free reference run; raises GoldenRunError if the workload misbehaves."""
    if config is not None:
        config = as_configuration(config, p.n_assertions)
    return _interpreter(p, config).golden_run()


def run_experiment(
    p: Program,
    t: int,
    bit: int,
    mode: str = "discovery",
    config=None,
    timeout_factor: float = DEFAULT_TIMEOUT_FACTOR,
) -> ExperimentResult:
    """Run ``p`` with ``bit`` flipped right before step ``t``.

    ``mode="discovery"`` records every failing assertion and runs to the
    end; ``mode="deployment"`` stops at the first failing enabled assertion
    of ``config`` (all enabled by default) with outcome DETECTED. In
    deployment mode ``t`` refers to the timeline of the configured variant.
    """
    if mode == "discovery":
        if config is not None:
            raise ValueError("discovery mode always runs with every assertion enabled")
        interp = _interpreter(p, None)
        return interp.run_experiment(t, bit, False, timeout_factor)
    if mode == "deployment":
        if config is not None:
            config = as_configuration(config, p.n_assertions)
        interp = _interpreter(p, config)
        return interp.run_experiment(t, bit, True, timeout_factor)
    raise ValueError(f"unknown mode {mode!r}")
