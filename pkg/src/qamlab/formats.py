"""Line-oriented text formats for designs, architecture configs and trials.

One directive per line, '#' starts a comment, unknown keys are rejected.
All numeric fields are exact (integers or rationals), so any two parsers
of these files agree bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import hls_explorer as hx
from .channel_sim import ChannelConfig


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"{what} must be an integer, got {tok!r}") from None


def _rational(tok: str, lineno: int, what: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(lineno, f"{what} must be a rational, got {tok!r}") from None


def _bool(tok: str, lineno: int, what: str) -> bool:
    if tok in ("true", "yes", "1"):
        return True
    if tok in ("false", "no", "0"):
        return False
    raise ParseError(lineno, f"{what} must be a boolean, got {tok!r}")


def _kv(tok: str, lineno: int) -> tuple:
    if "=" not in tok:
        raise ParseError(lineno, f"expected key=value, got {tok!r}")
    k, v = tok.split("=", 1)
    return k, v


# ---------------------------------------------------------------------------
# design files


def parse_design(text: str) -> hx.DesignModel:
    name = None
    clock = Fraction(10)
    bits = 1
    overhead = 0
    arrays: dict = {}
    items: list = []
    labels: set = set()

    for lineno, line in _lines(text):
        toks = line.split()
        key = toks[0]
        if key == "design":
            if len(toks) != 2:
                raise ParseError(lineno, "usage: design <name>")
            name = toks[1]
        elif key == "clock_ns":
            clock = _rational(toks[1], lineno, "clock_ns")
            if clock <= 0:
                raise ParseError(lineno, "clock_ns must be positive")
        elif key == "bits_per_output":
            bits = _int(toks[1], lineno, "bits_per_output")
        elif key == "overhead_cycles":
            overhead = _int(toks[1], lineno, "overhead_cycles")
        elif key == "array":
            items_err = "usage: array <name> registers|memory [ports=N pack=N] [bits=N]"
            if len(toks) < 3:
                raise ParseError(lineno, items_err)
            aname, kind = toks[1], toks[2]
            if aname in arrays:
                raise ParseError(lineno, f"duplicate array {aname!r}")
            if kind not in ("registers", "memory"):
                raise ParseError(lineno, items_err)
            ports, pack, abits = 1, 1, 0
            for tok in toks[3:]:
                k, v = _kv(tok, lineno)
                if k == "ports":
                    ports = _int(v, lineno, "ports")
                elif k == "pack":
                    pack = _int(v, lineno, "pack")
                elif k == "bits":
                    abits = _int(v, lineno, "bits")
                else:
                    raise ParseError(lineno, f"unknown array attribute {k!r}")
            try:
                arrays[aname] = hx.ArrayMap(kind=kind, ports=ports, pack=pack, bits=abits)
            except ValueError as exc:
                raise ParseError(lineno, str(exc)) from None
        elif key == "loop":
            if len(toks) < 2:
                raise ParseError(lineno, "usage: loop <label> trips=N ...")
            label = toks[1]
            if label in labels:
                raise ParseError(lineno, f"duplicate loop label {label!r}")
            labels.add(label)
            trips = mults = adds = None
            accesses: dict = {}
            rest = toks[2:]
            in_access = False
            for tok in rest:
                if tok == "access":
                    in_access = True
                    continue
                k, v = _kv(tok, lineno)
                if in_access:
                    accesses[k] = _int(v, lineno, f"access count for {k!r}")
                elif k == "trips":
                    trips = _int(v, lineno, "trips")
                elif k == "mults":
                    mults = _int(v, lineno, "mults")
                elif k == "adds":
                    adds = _int(v, lineno, "adds")
                else:
                    raise ParseError(lineno, f"unknown loop attribute {k!r}")
            if trips is None:
                raise ParseError(lineno, f"loop {label!r} needs trips=")
            try:
                items.append(hx.LoopSpec(
                    label=label, trips=trips,
                    mults=mults or 0, adds=adds or 0, accesses=accesses,
                ))
            except ValueError as exc:
                raise ParseError(lineno, str(exc)) from None
        elif key == "barrier":
            items.append(hx.Barrier())
        else:
            raise ParseError(lineno, f"unknown directive {key!r}")

    if not any(isinstance(it, hx.LoopSpec) for it in items):
        raise ParseError(0, "no loops in design file")
    try:
        return hx.DesignModel(
            name=name or "design",
            items=tuple(items),
            overhead_cycles=overhead,
            bits_per_output=bits,
            clock_ns=clock,
            arrays=arrays,
        )
    except ValueError as exc:
        raise ParseError(0, str(exc)) from None


def render_design(design: hx.DesignModel) -> str:
    lines = [
        f"design {design.name}",
        f"clock_ns {design.clock_ns}",
        f"bits_per_output {design.bits_per_output}",
        f"overhead_cycles {design.overhead_cycles}",
    ]
    for name, m in design.arrays.items():
        if m.kind == "memory":
            lines.append(f"array {name} memory ports={m.ports} pack={m.pack} bits={m.bits}")
        else:
            lines.append(f"array {name} registers bits={m.bits}")
    for item in design.items:
        if isinstance(item, hx.Barrier):
            lines.append("barrier")
            continue
        line = f"loop {item.label} trips={item.trips} mults={item.mults} adds={item.adds}"
        if item.accesses:
            line += " access " + " ".join(f"{k}={v}" for k, v in item.accesses.items())
        lines.append(line)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# arch files


def parse_arch(text: str, design: hx.DesignModel | None = None) -> hx.ArchConfig:
    merge: set = set()
    unroll: dict = {}
    pipeline: dict = {}
    known = {l.label for l in design.loops()} if design is not None else None

    def check_label(label: str, lineno: int):
        if known is not None and label not in known:
            raise ParseError(lineno, f"unknown loop label {label!r}")

    for lineno, line in _lines(text):
        toks = line.split()
        key = toks[0]
        if key == "merge":
            if len(toks) < 2:
                raise ParseError(lineno, "usage: merge <label>...")
            for label in toks[1:]:
                check_label(label, lineno)
                merge.add(label)
        elif key == "unroll":
            if len(toks) != 3:
                raise ParseError(lineno, "usage: unroll <label> <U|full>")
            check_label(toks[1], lineno)
            if toks[2] == "full":
                unroll[toks[1]] = hx.FULL_UNROLL
            else:
                u = _int(toks[2], lineno, "unroll factor")
                if u < 1:
                    raise ParseError(lineno, "unroll factor must be >= 1")
                unroll[toks[1]] = u
        elif key == "pipeline":
            if len(toks) != 4:
                raise ParseError(lineno, "usage: pipeline <label> ii=N depth=N")
            check_label(toks[1], lineno)
            ii = depth = None
            for tok in toks[2:]:
                k, v = _kv(tok, lineno)
                if k == "ii":
                    ii = _int(v, lineno, "ii")
                elif k == "depth":
                    depth = _int(v, lineno, "depth")
                else:
                    raise ParseError(lineno, f"unknown pipeline attribute {k!r}")
            if ii is None or depth is None:
                raise ParseError(lineno, "pipeline needs ii= and depth=")
            if ii < 1 or depth < 1:
                raise ParseError(lineno, "ii and depth must be >= 1")
            pipeline[toks[1]] = (ii, depth)
        else:
            raise ParseError(lineno, f"unknown directive {key!r}")

    return hx.ArchConfig(merge=frozenset(merge), unroll=unroll, pipeline=pipeline)


def render_arch(config: hx.ArchConfig) -> str:
    lines = []
    if config.merge:
        lines.append("merge " + " ".join(sorted(config.merge)))
    for label in sorted(config.unroll):
        u = config.unroll[label]
        lines.append(f"unroll {label} {'full' if u == hx.FULL_UNROLL else u}")
    for label in sorted(config.pipeline):
        ii, depth = config.pipeline[label]
        lines.append(f"pipeline {label} ii={ii} depth={depth}")
    return "\n".join(lines) + "\n" if lines else "# no directives\n"


# ---------------------------------------------------------------------------
# trial files


@dataclass(frozen=True)
class TrialSpec:
    config: ChannelConfig
    require_converged: bool = False
    round_updates: bool = False
    mu_shift: int = 8


def parse_trial(text: str) -> TrialSpec:
    taps = None
    kwargs: dict = {}
    require = False
    round_updates = False
    mu_shift = 8

    for lineno, line in _lines(text):
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "taps":
            taps = []
            for part in rest.split(";"):
                part = part.strip()
                if not part:
                    continue
                comps = part.split(",")
                if len(comps) != 2:
                    raise ParseError(lineno, f"tap must be <re,im>, got {part!r}")
                taps.append((
                    _rational(comps[0].strip(), lineno, "tap real part"),
                    _rational(comps[1].strip(), lineno, "tap imaginary part"),
                ))
            if not taps:
                raise ParseError(lineno, "taps list is empty")
        elif key == "noise_sigma":
            kwargs["noise_sigma"] = _rational(rest, lineno, "noise_sigma")
        elif key == "seed":
            kwargs["seed"] = _int(rest, lineno, "seed")
        elif key == "train":
            kwargs["n_train"] = _int(rest, lineno, "train")
        elif key == "measure":
            kwargs["n_measure"] = _int(rest, lineno, "measure")
        elif key == "ser_threshold":
            kwargs["ser_threshold"] = _rational(rest, lineno, "ser_threshold")
        elif key == "block":
            kwargs["block_symbols"] = _int(rest, lineno, "block")
        elif key == "require_converged":
            require = _bool(rest, lineno, "require_converged")
        elif key == "round_updates":
            round_updates = _bool(rest, lineno, "round_updates")
        elif key == "mu_shift":
            mu_shift = _int(rest, lineno, "mu_shift")
            if mu_shift < 1:
                raise ParseError(lineno, "mu_shift must be positive")
        else:
            raise ParseError(lineno, f"unknown directive {key!r}")

    if taps is None:
        raise ParseError(0, "trial file needs a taps line")
    try:
        cfg = ChannelConfig(taps=tuple(taps), **kwargs)
    except ValueError as exc:
        raise ParseError(0, str(exc)) from None
    return TrialSpec(
        config=cfg,
        require_converged=require,
        round_updates=round_updates,
        mu_shift=mu_shift,
    )


def render_trial(spec: TrialSpec) -> str:
    cfg = spec.config
    taps = "; ".join(f"{re},{im}" for re, im in cfg.taps)
    lines = [
        f"taps {taps}",
        f"noise_sigma {cfg.noise_sigma}",
        f"seed {cfg.seed}",
        f"train {cfg.n_train}",
        f"measure {cfg.n_measure}",
        f"ser_threshold {cfg.ser_threshold}",
        f"block {cfg.block_symbols}",
        f"require_converged {'true' if spec.require_converged else 'false'}",
        f"round_updates {'true' if spec.round_updates else 'false'}",
        f"mu_shift {spec.mu_shift}",
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# expression files (prefix / s-expression)


def parse_expr(text: str):
    from . import widths as wd

    stripped = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    toks = stripped.replace("(", " ( ").replace(")", " ) ").split()
    if not toks:
        raise ParseError(0, "empty expression file")
    pos = 0

    def fail(msg: str):
        raise ParseError(0, msg)

    def parse_node():
        nonlocal pos
        if toks[pos] != "(":
            fail(f"expected '(', got {toks[pos]!r}")
        pos += 1
        head = toks[pos]
        pos += 1
        node = None
        if head == "leaf":
            args = []
            while toks[pos] != ")":
                args.append(toks[pos])
                pos += 1
            if len(args) == 1 and args[0][0] in "su":
                node = wd.leaf_decl(int(args[0][1:]), signed=args[0][0] == "s")
            elif len(args) == 2:
                node = wd.leaf_range(int(args[0]), int(args[1]))
            else:
                fail(f"bad leaf arguments {args!r}")
        elif head in ("add", "sub", "mul"):
            a = parse_node()
            b = parse_node()
            node = getattr(wd, head)(a, b)
        elif head == "shift":
            k = int(toks[pos])
            pos += 1
            node = wd.shift(k, parse_node())
        elif head == "cast":
            spec = toks[pos]
            pos += 1
            if spec[0] in "su":
                width, signed = int(spec[1:]), spec[0] == "s"
            else:
                width, signed = int(spec), True
            node = wd.cast(width, parse_node(), signed=signed)
        else:
            fail(f"unknown operator {head!r}")
        if toks[pos] != ")":
            fail(f"expected ')', got {toks[pos]!r}")
        pos += 1
        return node

    try:
        root = parse_node()
    except (IndexError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(0, f"malformed expression: {exc}") from None
    if pos != len(toks):
        raise ParseError(0, "trailing tokens after expression")
    return root
