"""Symbolic calculus for generalised Basilica groups on the m-adic rooted tree."""

from .calculus import (
    GroupParams,
    LevelPermutation,
    Portrait,
    Vertex,
    WreathDecomposition,
    abelianize,
    act,
    decompose,
    equal_elements,
    is_identity,
    level_permutation,
    portrait,
    root_exponent,
    section,
)
from .words import Word, commutator, compose, invert, power

__all__ = [
    "GroupParams",
    "LevelPermutation",
    "Portrait",
    "Vertex",
    "Word",
    "WreathDecomposition",
    "abelianize",
    "act",
    "commutator",
    "compose",
    "decompose",
    "equal_elements",
    "invert",
    "is_identity",
    "level_permutation",
    "portrait",
    "power",
    "root_exponent",
    "section",
]
