"""The generating family a_0, ..., a_{s-1} and its finite-level sanity witnesses."""
from __future__ import annotations

from dataclasses import dataclass

from .calculus import (
    DEFAULT_LEVEL_CAP,
    GroupParams,
    Vertex,
    decompose,
    equal_elements,
    level_permutation,
    root_exponent,
    section,
)
from .words import IDENTITY, Word, invert, power


@dataclass(frozen=True)
class GeneratorFamily:
    params: GroupParams
    generators: tuple[Word, ...]


def generator_family(params: GroupParams) -> GeneratorFamily:
    return GeneratorFamily(params, tuple(Word.gen(i) for i in range(params.s)))


def verify_generator_recursions(params: GroupParams) -> bool:
    """Check the defining recursions of the generators at one level.

    a_0 must decompose as (1, ..., 1, a_{s-1}) with root exponent 1 and
    a_i (i >= 1) as (1, ..., 1, a_{i-1}) with root exponent 0.  For
    (m, s) = (2, 2) this is exactly the classical Basilica presentation
    a = (1, b), b = (1, a) sigma with a = a_1 and b = a_0.
    """
    m, s = params.m, params.s
    for i in range(s):
        d = decompose(params, Word.gen(i))
        expected_root = 1 if i == 0 else 0
        if d.root_exponent != expected_root:
            return False
        expected_last = Word.gen(s - 1 if i == 0 else i - 1)
        if d.sections[m - 1] != expected_last:
            return False
        if any(d.sections[k] != IDENTITY for k in range(m - 1)):
            return False
    return True


def fractality_witness(params: GroupParams, i: int) -> Word:
    """A first-level stabiliser whose section at vertex m-1 equals a_i.

    For i <= s-2 the generator a_{i+1} works by the defining recursion; for
    i = s-1 the power a_0^m has every section equal to a_{s-1}.
    """
    if not 0 <= i <= params.s - 1:
        raise IndexError(f"generator index {i} out of range for s={params.s}")
    h = Word.gen(i + 1) if i <= params.s - 2 else power(Word.gen(0), params.m)
    if root_exponent(params, h) != 0:
        raise AssertionError("fractality witness must stabilise the first level")
    last = section(params, h, Vertex((params.m - 1,)))
    if not equal_elements(params, last, Word.gen(i)):
        raise AssertionError("fractality witness failed its section check")
    return h


def check_spherical_transitivity(
    params: GroupParams, n: int, cap: int = DEFAULT_LEVEL_CAP
) -> bool:
    """Is the orbit of 0...0 under the generators the whole layer n?"""
    tables = []
    for i in range(params.s):
        for w in (Word.gen(i), invert(Word.gen(i))):
            tables.append(level_permutation(params, w, n, cap=cap).images)
    start = (0,) * n
    orbit = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for table in tables:
            img = table[v]
            if img not in orbit:
                orbit.add(img)
                frontier.append(img)
    return len(orbit) == params.m**n
