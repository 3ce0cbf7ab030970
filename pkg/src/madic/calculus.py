"""Wreath-recursion calculus for the generalised Basilica group on the m-adic tree.

The group is generated by a_0, ..., a_{s-1} acting on the rooted tree whose
vertices are strings over {0, ..., m-1}:

    a_0 = (1, ..., 1, a_{s-1}) sigma      sigma = (0 1 ... m-1)
    a_i = (1, ..., 1, a_{i-1})            for 1 <= i <= s-1

An element g is written g = (g_0, ..., g_{m-1}) sigma_g; products obey
(x g')_k = x_k g'_{sigma_x(k)} and sigma_{x g'} = sigma_x sigma_{g'}.  The
action is on the right: a word acts letter by letter, left to right.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable

from .errors import ParameterMismatchError, ResourceCapError
from .words import IDENTITY, Word, compose, invert

DEFAULT_LEVEL_CAP = 10**6


@dataclass(frozen=True, slots=True)
class GroupParams:
    """Tree arity m and generator count s, both at least 2."""

    m: int
    s: int

    def __post_init__(self) -> None:
        if self.m < 2 or self.s < 2:
            raise ValueError(f"require m >= 2 and s >= 2, got (m={self.m}, s={self.s})")


@dataclass(frozen=True, slots=True)
class Vertex:
    """A vertex of the m-adic tree: a path over {0, ..., m-1}; () is the root."""

    path: tuple[int, ...] = ()

    @staticmethod
    def of(path: Iterable[int]) -> "Vertex":
        return Vertex(tuple(int(x) for x in path))

    @staticmethod
    def from_string(text: str) -> "Vertex":
        """Parse a digit string such as "021"; the empty string is the root."""
        return Vertex(tuple(int(ch) for ch in text))

    @property
    def level(self) -> int:
        return len(self.path)

    def child(self, x: int) -> "Vertex":
        return Vertex(self.path + (x,))

    def __str__(self) -> str:
        return "".join(str(x) for x in self.path)


@dataclass(frozen=True, slots=True)
class WreathDecomposition:
    """One-level decomposition g = (g_0, ..., g_{m-1}) sigma^root_exponent."""

    sections: tuple[Word, ...]
    root_exponent: int


@dataclass(frozen=True, slots=True)
class LevelPermutation:
    """The permutation induced on the m^n vertices of level n."""

    n: int
    images: dict[tuple[int, ...], tuple[int, ...]]

    def key(self) -> tuple[tuple[int, ...], ...]:
        """Canonical hashable form: images in lexicographic input order."""
        return tuple(self.images[v] for v in sorted(self.images))

    def is_trivial(self) -> bool:
        return all(v == w for v, w in self.images.items())


@dataclass(frozen=True, slots=True)
class Portrait:
    """Root-permutation exponents of the sections at all vertices of level < depth."""

    depth: int
    labels: dict[tuple[int, ...], int]


def _check_word(params: GroupParams, w: Word) -> None:
    for idx, _ in w.letters:
        if idx >= params.s:
            raise ParameterMismatchError(f"letter index {idx} out of range for s={params.s}")


def _check_vertex(params: GroupParams, u: Vertex) -> None:
    for x in u.path:
        if not 0 <= x < params.m:
            raise ParameterMismatchError(f"vertex entry {x} out of range for m={params.m}")


def _letter_decomposition(params: GroupParams, idx: int, exp: int) -> tuple[int, int, tuple[int, int]]:
    """One-level data of a generator letter.

    Returns (root_exponent, position, section_letter) where the section at
    `position` is the given single letter and every other section is trivial.
    The inverse case is forced by solving x x^-1 = 1 at one level:
    (x^-1)_j = (x_{j - e})^-1 with root exponent -e.
    """
    m, s = params.m, params.s
    base_root = 1 if idx == 0 else 0
    base_section = (s - 1 if idx == 0 else idx - 1, 1)
    if exp == 1:
        return base_root, m - 1, base_section
    root = (-base_root) % m
    pos = (m - 1 + base_root) % m
    return root, pos, (base_section[0], -1)


@functools.lru_cache(maxsize=1 << 20)
def _decompose_cached(params: GroupParams, letters: tuple) -> WreathDecomposition:
    m = params.m
    sections: list[list] = [[] for _ in range(m)]
    root = 0
    for idx, exp in letters:
        if idx >= params.s:
            raise ParameterMismatchError(f"letter index {idx} out of range for s={params.s}")
        lroot, lpos, lsec = _letter_decomposition(params, idx, exp)
        # the letter contributes its single nontrivial section at position lpos,
        # received by the parent coordinate k with (k + root) % m == lpos
        k = (lpos - root) % m
        bucket = sections[k]
        if bucket and bucket[-1][0] == lsec[0] and bucket[-1][1] == -lsec[1]:
            bucket.pop()
        else:
            bucket.append(lsec)
        root = (root + lroot) % m
    return WreathDecomposition(tuple(Word(tuple(b)) for b in sections), root)


def decompose(params: GroupParams, w: Word) -> WreathDecomposition:
    """First-level wreath decomposition of the element represented by w."""
    return _decompose_cached(params, w.letters)


def root_exponent(params: GroupParams, w: Word) -> int:
    """Exponent e with sigma_g = sigma^e: the a_0 exponent sum of w, mod m."""
    _check_word(params, w)
    return sum(exp for idx, exp in w.letters if idx == 0) % params.m


def section(params: GroupParams, w: Word, u: Vertex) -> Word:
    """The section of w at vertex u, by iterating decompose along the path."""
    _check_word(params, w)
    _check_vertex(params, u)
    cur = w
    for x in u.path:
        cur = decompose(params, cur).sections[x]
    return cur


def act(params: GroupParams, w: Word, u: Vertex) -> Vertex:
    """Image of the vertex u under the automorphism represented by w."""
    _check_word(params, w)
    _check_vertex(params, u)
    cur = w
    out: list[int] = []
    for x in u.path:
        d = decompose(params, cur)
        out.append((x + d.root_exponent) % params.m)
        cur = d.sections[x]
    return Vertex(tuple(out))


def abelianize(params: GroupParams, w: Word) -> tuple[int, ...]:
    """Exponent-sum vector in Z^s; zero iff the element lies in G'."""
    _check_word(params, w)
    exps = [0] * params.s
    for idx, exp in w.letters:
        exps[idx] += exp
    return tuple(exps)


@functools.lru_cache(maxsize=1 << 18)
def _is_identity_cached(params: GroupParams, letters: tuple) -> bool:
    # w = 1 iff every word in the symbolic section closure of w has trivial
    # root permutation.  Sections of a letterwise decomposition never exceed
    # the parent's written length, so the closure is finite.
    start = Word(letters)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        d = decompose(params, v)
        if d.root_exponent != 0:
            return False
        for sec in d.sections:
            if sec.letters and sec not in seen:
                seen.add(sec)
                stack.append(sec)
    return True


def is_identity(params: GroupParams, w: Word) -> bool:
    """Decide the word problem: does w represent the identity automorphism?"""
    _check_word(params, w)
    w = Word.of(w.letters)
    if any(abelianize(params, w)):
        return False
    return _is_identity_cached(params, w.letters)


def equal_elements(params: GroupParams, w1: Word, w2: Word) -> bool:
    """Semantic equality of the represented elements."""
    return is_identity(params, compose(w1, invert(w2)))


def level_permutation(
    params: GroupParams, w: Word, n: int, cap: int = DEFAULT_LEVEL_CAP
) -> LevelPermutation:
    """Tabulate the action of w on all m^n vertices of level n."""
    if n < 1:
        raise ValueError("level must be at least 1")
    if params.m**n > cap:
        raise ResourceCapError(f"m^n = {params.m ** n} exceeds vertex cap {cap}")
    _check_word(params, w)
    images: dict[tuple[int, ...], tuple[int, ...]] = {}

    def rec(word: Word, pin: tuple[int, ...], pout: tuple[int, ...], depth: int) -> None:
        if depth == n:
            images[pin] = pout
            return
        d = decompose(params, word)
        for x in range(params.m):
            rec(d.sections[x], pin + (x,), pout + ((x + d.root_exponent) % params.m,), depth + 1)

    rec(w, (), (), 0)
    return LevelPermutation(n, images)


@functools.lru_cache(maxsize=1 << 20)
def _perm_key_cached(params: GroupParams, letters: tuple, depth: int):
    if depth == 0:
        return ()
    d = _decompose_cached(params, letters)
    return (
        d.root_exponent,
        tuple(_perm_key_cached(params, sec.letters, depth - 1) for sec in d.sections),
    )


def permutation_key(params: GroupParams, w: Word, depth: int):
    """Hashable fingerprint of the action of w up to the given depth.

    Equal elements always share a key; distinct elements may collide when they
    agree on the first `depth` levels, so keys are a prefilter only.
    """
    _check_word(params, w)
    return _perm_key_cached(params, w.letters, depth)


def portrait(
    params: GroupParams, w: Word, depth: int, cap: int = DEFAULT_LEVEL_CAP
) -> Portrait:
    """Label each vertex of level < depth with the root exponent of the section there."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    n_nodes = (params.m**depth - 1) // (params.m - 1)
    if n_nodes > cap:
        raise ResourceCapError(f"portrait needs {n_nodes} nodes, cap is {cap}")
    _check_word(params, w)
    labels: dict[tuple[int, ...], int] = {}

    def rec(word: Word, prefix: tuple[int, ...]) -> None:
        d = decompose(params, word)
        labels[prefix] = d.root_exponent
        if len(prefix) + 1 < depth:
            for x in range(params.m):
                rec(d.sections[x], prefix + (x,))

    rec(w, ())
    return Portrait(depth, labels)
