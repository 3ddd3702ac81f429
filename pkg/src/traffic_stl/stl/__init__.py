"""Signal temporal logic: syntax tree, DSL parser and offline monitors."""

from .ast import (
    FULL,
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    Implies,
    Interval,
    Mask,
    Not,
    Or,
    Predicate,
    Until,
    atom,
    channels,
    formula_depth,
    temporal_depth,
    to_text,
)
from .monitor import Verdict, monitor, robustness_signal
from .oracle import naive_robustness_signal, robustness
from .parser import parse

__all__ = [
    "FULL",
    "Always",
    "And",
    "Atom",
    "Eventually",
    "Formula",
    "Implies",
    "Interval",
    "Mask",
    "Not",
    "Or",
    "Predicate",
    "Until",
    "Verdict",
    "atom",
    "channels",
    "formula_depth",
    "monitor",
    "naive_robustness_signal",
    "parse",
    "robustness",
    "robustness_signal",
    "temporal_depth",
    "to_text",
]
