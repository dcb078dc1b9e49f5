"""Architecture-exploration engine for loop-dominated designs.

Models an ordered list of single-cycle-body loops separated by optional
barriers, under per-loop merge/unroll/pipeline directives and an array
mapping (registers or P-port memories with word packing).  Produces
latency in cycles/ns, symbol and data rate, and a relative area figure.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import ceil

FULL_UNROLL = "full"


class DirectiveError(ValueError):
    """Unsupported directive combination (e.g. pipelining a merged group)."""


@dataclass(frozen=True)
class ArrayMap:
    kind: str = "registers"      # "registers" | "memory"
    ports: int = 1
    pack: int = 1
    bits: int = 0                # total mapped state bits (for area)

    def __post_init__(self):
        if self.kind not in ("registers", "memory"):
            raise ValueError(f"unknown mapping kind {self.kind!r}")
        if self.ports < 1 or self.pack < 1 or self.bits < 0:
            raise ValueError("ports/pack must be >= 1 and bits >= 0")


@dataclass(frozen=True)
class LoopSpec:
    label: str
    trips: int
    mults: int = 0
    adds: int = 0
    accesses: dict = field(default_factory=dict)  # array name -> accesses/iter
    mergeable: bool = True

    def __post_init__(self):
        if self.trips < 1:
            raise ValueError(f"loop {self.label}: trip count must be >= 1")
        if self.mults < 0 or self.adds < 0 or any(v < 0 for v in self.accesses.values()):
            raise ValueError(f"loop {self.label}: resource counts must be >= 0")


class Barrier:
    """Separates merge regions; no loop may merge across it."""

    def __repr__(self):
        return "Barrier()"

    def __eq__(self, other):
        return isinstance(other, Barrier)

    def __hash__(self):
        return hash(Barrier)


@dataclass(frozen=True)
class DesignModel:
    name: str
    items: tuple                 # LoopSpec and Barrier, in program order
    overhead_cycles: int = 0
    bits_per_output: int = 1
    clock_ns: Fraction = Fraction(10)
    arrays: dict = field(default_factory=dict)  # name -> ArrayMap

    def __post_init__(self):
        if self.overhead_cycles < 0:
            raise ValueError("overhead_cycles must be nonnegative")
        if self.bits_per_output < 1:
            raise ValueError("bits_per_output must be >= 1")
        if self.clock_ns <= 0:
            raise ValueError("clock_ns must be positive")
        labels = [it.label for it in self.loops()]
        if len(labels) != len(set(labels)):
            raise ValueError("duplicate loop labels")
        for loop in self.loops():
            for name in loop.accesses:
                if name not in self.arrays:
                    raise ValueError(f"loop {loop.label} accesses unknown array {name!r}")

    def loops(self) -> list[LoopSpec]:
        return [it for it in self.items if isinstance(it, LoopSpec)]

    def loop(self, label: str) -> LoopSpec:
        for it in self.loops():
            if it.label == label:
                return it
        raise KeyError(label)


@dataclass(frozen=True)
class ArchConfig:
    merge: frozenset = frozenset()        # labels with merging enabled
    unroll: dict = field(default_factory=dict)    # label -> U >= 1 or "full"
    pipeline: dict = field(default_factory=dict)  # label -> (ii, depth)
    clock_ns: Fraction | None = None      # overrides the design clock

    def __post_init__(self):
        for label, u in self.unroll.items():
            if u != FULL_UNROLL and (not isinstance(u, int) or u < 1):
                raise ValueError(f"unroll {label}: factor must be >= 1 or 'full'")
        for label, (ii, depth) in self.pipeline.items():
            if ii < 1 or depth < 1:
                raise ValueError(f"pipeline {label}: ii and depth must be >= 1")

    def unroll_of(self, loop: LoopSpec) -> int:
        u = self.unroll.get(loop.label, 1)
        return loop.trips if u == FULL_UNROLL else u


@dataclass(frozen=True)
class AreaWeights:
    multiplier: float = 1.0
    adder: float = 0.15
    register_bit: float = 0.02


@dataclass(frozen=True)
class GroupReport:
    labels: tuple
    cycles: int
    effective_trips: tuple


@dataclass(frozen=True)
class DesignReport:
    config_id: str
    latency_cycles: int
    latency_ns: Fraction
    mbaud: Fraction
    mbps: Fraction
    rel_area: float
    groups: tuple

    @property
    def meets_30mbps(self) -> bool:
        return self.mbps >= 30


def effective_trip(loop: LoopSpec, u) -> int:
    """Remaining trip count after unrolling by u ('full' collapses to 1)."""
    if u == FULL_UNROLL:
        return 1
    if u < 1:
        raise ValueError("unroll factor must be >= 1")
    return ceil(loop.trips / u)


def iteration_cycles(loop: LoopSpec, u, design: DesignModel) -> int:
    """Cycles per (unrolled) iteration: memory-port bandwidth bound, else 1."""
    uu = loop.trips if u == FULL_UNROLL else u
    worst = 1
    for name, per_iter in loop.accesses.items():
        m = design.arrays[name]
        if m.kind != "memory" or per_iter == 0:
            continue
        worst = max(worst, ceil(per_iter * uu / (m.ports * m.pack)))
    return worst


def merge_groups(design: DesignModel, config: ArchConfig) -> list[list[LoopSpec]]:
    """Maximal runs of consecutive merge-enabled loops, never crossing barriers."""
    groups: list[list[LoopSpec]] = []
    run: list[LoopSpec] = []
    for item in design.items:
        if isinstance(item, Barrier):
            if run:
                groups.append(run)
                run = []
            continue
        if item.mergeable and item.label in config.merge:
            run.append(item)
        else:
            if run:
                groups.append(run)
                run = []
            groups.append([item])
    if run:
        groups.append(run)
    return groups


def pipeline_latency(loop: LoopSpec, u, ii: int, depth: int, design: DesignModel) -> int:
    """(effective trips - 1) * II + pipeline depth."""
    ii_eff = max(ii, iteration_cycles(loop, u, design))
    return (effective_trip(loop, u) - 1) * ii_eff + depth


def group_latency(group: list[LoopSpec], config: ArchConfig, design: DesignModel) -> int:
    if len(group) > 1 and any(l.label in config.pipeline for l in group):
        raise DirectiveError(
            "pipelining inside a merged multi-loop group is not supported: "
            + ",".join(l.label for l in group)
        )
    if len(group) == 1 and group[0].label in config.pipeline:
        loop = group[0]
        ii, depth = config.pipeline[loop.label]
        return pipeline_latency(loop, config.unroll_of(loop), ii, depth, design)
    return max(
        effective_trip(l, config.unroll_of(l))
        * iteration_cycles(l, config.unroll_of(l), design)
        for l in group
    )


def total_latency(design: DesignModel, config: ArchConfig) -> int:
    return design.overhead_cycles + sum(
        group_latency(g, config, design) for g in merge_groups(design, config)
    )


def data_rate(latency_cycles: int, clock_ns: Fraction, bits_per_output: int):
    """Returns (mbaud, mbps, latency_ns) for one output per design pass."""
    if latency_cycles < 1 or clock_ns <= 0 or bits_per_output < 1:
        raise ValueError("data_rate needs positive inputs")
    latency_ns = latency_cycles * Fraction(clock_ns)
    mbaud = 1000 / latency_ns
    return mbaud, bits_per_output * mbaud, latency_ns


def area_estimate(design: DesignModel, config: ArchConfig,
                  weights: AreaWeights = AreaWeights()) -> float:
    """Relative area: functional units sized for the widest group, plus the
    register bits of all register-mapped state.  Concurrent units in a group
    are the sum over member loops of per-iteration counts times unroll."""
    mults = adds = 0
    for group in merge_groups(design, config):
        g_mults = sum(l.mults * config.unroll_of(l) for l in group)
        g_adds = sum(l.adds * config.unroll_of(l) for l in group)
        mults = max(mults, g_mults)
        adds = max(adds, g_adds)
    reg_bits = sum(m.bits for m in design.arrays.values() if m.kind == "registers")
    return (weights.multiplier * mults + weights.adder * adds
            + weights.register_bit * reg_bits)


def evaluate(design: DesignModel, config: ArchConfig, config_id: str = "",
             weights: AreaWeights = AreaWeights()) -> DesignReport:
    clock = config.clock_ns if config.clock_ns is not None else design.clock_ns
    cycles = total_latency(design, config)
    mbaud, mbps, latency_ns = data_rate(cycles, clock, design.bits_per_output)
    groups = tuple(
        GroupReport(
            labels=tuple(l.label for l in g),
            cycles=group_latency(g, config, design),
            effective_trips=tuple(effective_trip(l, config.unroll_of(l)) for l in g),
        )
        for g in merge_groups(design, config)
    )
    return DesignReport(
        config_id=config_id,
        latency_cycles=cycles,
        latency_ns=latency_ns,
        mbaud=mbaud,
        mbps=mbps,
        rel_area=area_estimate(design, config, weights),
        groups=groups,
    )


def with_clock(design: DesignModel, clock_ns: Fraction) -> DesignModel:
    return replace(design, clock_ns=Fraction(clock_ns))
