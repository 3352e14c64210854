"""Computational experiments on automaton groups defined by Mealy machines."""

from .machine import Mealy, ClassFlags, parse_machine, serialize, classify
from .algebra import (
    dual,
    inverse,
    enrich,
    enriched_dual,
    product,
    power,
    disjoint_union,
    reduction,
)
from .kernels import BACKEND

__all__ = [
    "Mealy",
    "ClassFlags",
    "parse_machine",
    "serialize",
    "classify",
    "dual",
    "inverse",
    "enrich",
    "enriched_dual",
    "product",
    "power",
    "disjoint_union",
    "reduction",
    "BACKEND",
]

__version__ = "0.1.0"
