"""Interval-based bit-width inference over small expression trees.

Each node gets a value interval [lo, hi]; the node width is the smallest
two's-complement (or unsigned, when lo >= 0) width containing it.  Casts
force a width and clamp the interval to that width's range.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fixedpoint import MAX_WIDTH, WidthOverflowError


@dataclass
class ExprNode:
    kind: str                      # leaf | add | sub | mul | shift | cast
    children: tuple = ()
    lo: int | None = None          # leaf range, or cast/shift annotation input
    hi: int | None = None
    decl_width: int | None = None  # leaf/cast declared width
    decl_signed: bool = True
    shift_k: int = 0
    # filled in by infer_widths
    interval: tuple | None = None
    width: int | None = None
    signed: bool | None = None


def leaf_range(lo: int, hi: int) -> ExprNode:
    if lo > hi:
        raise ValueError("leaf range is empty")
    return ExprNode("leaf", lo=lo, hi=hi)


def leaf_decl(width: int, signed: bool = True) -> ExprNode:
    if not 1 <= width <= MAX_WIDTH:
        raise ValueError(f"leaf width must be 1..{MAX_WIDTH}")
    return ExprNode("leaf", decl_width=width, decl_signed=signed)


def add(a: ExprNode, b: ExprNode) -> ExprNode:
    return ExprNode("add", children=(a, b))


def sub(a: ExprNode, b: ExprNode) -> ExprNode:
    return ExprNode("sub", children=(a, b))


def mul(a: ExprNode, b: ExprNode) -> ExprNode:
    return ExprNode("mul", children=(a, b))


def shift(k: int, a: ExprNode) -> ExprNode:
    return ExprNode("shift", children=(a,), shift_k=k)


def cast(width: int, a: ExprNode, signed: bool = True) -> ExprNode:
    if not 1 <= width <= MAX_WIDTH:
        raise ValueError(f"cast width must be 1..{MAX_WIDTH}")
    return ExprNode("cast", children=(a,), decl_width=width, decl_signed=signed)


def _decl_range(width: int, signed: bool) -> tuple:
    if signed:
        return -(1 << (width - 1)), (1 << (width - 1)) - 1
    return 0, (1 << width) - 1


def width_for(lo: int, hi: int) -> tuple:
    """Minimal (width, signed) covering [lo, hi]."""
    signed = lo < 0
    for w in range(1, MAX_WIDTH + 1):
        wlo, whi = _decl_range(w, signed)
        if wlo <= lo and hi <= whi:
            return w, signed
    raise WidthOverflowError(f"interval [{lo}, {hi}] needs more than {MAX_WIDTH} bits")


def infer_widths(root: ExprNode) -> ExprNode:
    """Annotate every node with (interval, width, signed); returns root."""
    for child in root.children:
        infer_widths(child)

    if root.kind == "leaf":
        if root.decl_width is not None:
            lo, hi = _decl_range(root.decl_width, root.decl_signed)
        else:
            lo, hi = root.lo, root.hi
    elif root.kind == "add":
        (alo, ahi), (blo, bhi) = (c.interval for c in root.children)
        lo, hi = alo + blo, ahi + bhi
    elif root.kind == "sub":
        (alo, ahi), (blo, bhi) = (c.interval for c in root.children)
        lo, hi = alo - bhi, ahi - blo
    elif root.kind == "mul":
        (alo, ahi), (blo, bhi) = (c.interval for c in root.children)
        prods = (alo * blo, alo * bhi, ahi * blo, ahi * bhi)
        lo, hi = min(prods), max(prods)
    elif root.kind == "shift":
        (alo, ahi) = root.children[0].interval
        k = root.shift_k
        if k >= 0:
            lo, hi = alo << k, ahi << k
        else:
            lo, hi = alo >> -k, ahi >> -k
    elif root.kind == "cast":
        (alo, ahi) = root.children[0].interval
        clo, chi = _decl_range(root.decl_width, root.decl_signed)
        lo, hi = max(alo, clo), min(ahi, chi)
        if lo > hi:
            # child interval entirely outside the cast range: pin to bounds
            lo, hi = clo, chi
        root.interval = (lo, hi)
        root.width = root.decl_width
        root.signed = root.decl_signed
        return root
    else:
        raise ValueError(f"unknown node kind {root.kind!r}")

    root.interval = (lo, hi)
    if root.kind == "leaf" and root.decl_width is not None:
        root.width, root.signed = root.decl_width, root.decl_signed
    else:
        root.width, root.signed = width_for(lo, hi)
    return root


def render_widths(root: ExprNode, indent: int = 0) -> str:
    """Per-node width report, one line per node, preorder."""
    if root.width is None:
        infer_widths(root)
    tag = root.kind
    if root.kind == "leaf" and root.decl_width is not None:
        tag += f"[{'s' if root.decl_signed else 'u'}{root.decl_width}]"
    elif root.kind == "cast":
        tag += f"[{'s' if root.decl_signed else 'u'}{root.decl_width}]"
    elif root.kind == "shift":
        tag += f"[{root.shift_k}]"
    lo, hi = root.interval
    line = (
        f"{'  ' * indent}{tag} range=[{lo},{hi}] "
        f"width={root.width} {'signed' if root.signed else 'unsigned'}"
    )
    return "\n".join([line] + [render_widths(c, indent + 1) for c in root.children])
