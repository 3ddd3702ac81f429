"""Formula syntax tree.

Nodes are frozen dataclasses, so structural equality and hashing come for
free and a formula can be shared between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from ..exceptions import ParameterError

COMPARISONS = (">", ">=", "<", "<=")

_HOLDS = {
    ">": lambda x, c: x > c,
    ">=": lambda x, c: x >= c,
    "<": lambda x, c: x < c,
    "<=": lambda x, c: x <= c,
}


def _fmt_number(x: float) -> str:
    if float(x).is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


@dataclass(frozen=True)
class Interval:
    """Closed time window ``[lo, hi]`` in seconds; ``hi=None`` means end of trace."""

    lo: float = 0.0
    hi: Optional[float] = None

    def __post_init__(self):
        lo = float(self.lo)
        hi = None if self.hi is None else float(self.hi)
        if not math.isfinite(lo) or lo < 0:
            raise ParameterError(f"interval lower bound must be finite and >= 0, got {self.lo!r}")
        if hi is not None:
            if math.isinf(hi):
                hi = None
            elif hi < lo:
                raise ParameterError(f"interval [{lo}, {hi}] has upper bound below lower bound")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def unbounded(self) -> bool:
        return self.hi is None

    def depth(self) -> float:
        """Time this window reaches past its evaluation point."""
        return self.lo if self.hi is None else self.hi

    def __str__(self):
        hi = "end" if self.hi is None else _fmt_number(self.hi)
        return f"[{_fmt_number(self.lo)},{hi}]"


FULL = Interval(0.0, None)


@dataclass(frozen=True)
class Mask:
    """Guard under which a predicate is vacuously true (robustness ``+inf``)."""

    channel: str
    op: str
    threshold: float

    def __post_init__(self):
        if self.op not in COMPARISONS:
            raise ParameterError(f"unknown comparison {self.op!r}")
        object.__setattr__(self, "threshold", float(self.threshold))

    def active(self, x):
        return _HOLDS[self.op](x, self.threshold)

    def __str__(self):
        return f"{self.channel} {self.op} {_fmt_number(self.threshold)}"


@dataclass(frozen=True)
class Predicate:
    channel: str
    op: str
    threshold: float
    mask: Optional[Mask] = None

    def __post_init__(self):
        if self.op not in COMPARISONS:
            raise ParameterError(f"unknown comparison {self.op!r}")
        object.__setattr__(self, "threshold", float(self.threshold))

    def margin(self, x):
        """Signed distance to the threshold; positive when the comparison holds."""
        if self.op in (">", ">="):
            return x - self.threshold
        return self.threshold - x

    def __str__(self):
        text = f"{self.channel} {self.op} {_fmt_number(self.threshold)}"
        if self.mask is not None:
            text += f" unless {self.mask}"
        return text


class Formula:
    """Common base for all nodes."""

    __slots__ = ()

    def children(self) -> tuple:
        return ()

    def __str__(self):
        return to_text(self)

    # convenience combinators
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    predicate: Predicate

    def __repr__(self):
        return f"Atom({self.predicate})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def normalized(self) -> Or:
        return Or(Not(self.left), self.right)

    def __repr__(self):
        return f"Implies({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Always(Formula):
    arg: Formula
    interval: Interval = FULL

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"Always{self.interval}({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Eventually(Formula):
    arg: Formula
    interval: Interval = FULL

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"Eventually{self.interval}({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Until(Formula):
    left: Formula
    right: Formula
    interval: Interval = FULL

    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Until{self.interval}({self.left!r}, {self.right!r})"


Temporal = Union[Always, Eventually, Until]


def atom(channel: str, op: str, threshold: float, mask: Optional[Mask] = None) -> Atom:
    return Atom(Predicate(channel, op, threshold, mask))


def temporal_depth(f: Formula) -> float:
    """How far past ``t`` the value of ``f`` at ``t`` may depend on the signal.

    Unbounded windows stop at the end of the trace, so only their lower bound
    counts.
    """
    if isinstance(f, Atom):
        return 0.0
    if isinstance(f, (Always, Eventually)):
        return f.interval.depth() + temporal_depth(f.arg)
    if isinstance(f, Until):
        return f.interval.depth() + max(temporal_depth(f.left), temporal_depth(f.right))
    return max((temporal_depth(c) for c in f.children()), default=0.0)


def formula_depth(f: Formula) -> int:
    """Nesting depth of the tree (an atom has depth 0)."""
    kids = f.children()
    return 0 if not kids else 1 + max(formula_depth(c) for c in kids)


def channels(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        p = f.predicate
        return {p.channel} | ({p.mask.channel} if p.mask else set())
    out = set()
    for c in f.children():
        out |= channels(c)
    return out


def _wrap(f: Formula) -> str:
    text = to_text(f)
    if isinstance(f, (And, Or, Implies)):
        return f"({text})"
    return text


def to_text(f: Formula) -> str:
    """Render ``f`` in the formula DSL accepted by :func:`~traffic_stl.stl.parse`."""
    if isinstance(f, Atom):
        return str(f.predicate)
    if isinstance(f, Not):
        return f"not {_wrap(f.arg)}"
    if isinstance(f, Always):
        return f"always{f.interval} {_wrap(f.arg)}"
    if isinstance(f, Eventually):
        return f"eventually{f.interval} {_wrap(f.arg)}"
    if isinstance(f, Until):
        return f"({to_text(f.left)} until{f.interval} {to_text(f.right)})"
    if isinstance(f, And):
        return f"{_wrap(f.left)} and {_wrap(f.right)}"
    if isinstance(f, Or):
        return f"{_wrap(f.left)} or {_wrap(f.right)}"
    if isinstance(f, Implies):
        return f"{_wrap(f.left)} => {_wrap(f.right)}"
    raise TypeError(f"not a formula node: {f!r}")
