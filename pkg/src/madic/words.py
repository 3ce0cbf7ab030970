"""Freely reduced words over the generator alphabet a_0, ..., a_{s-1}.

A letter is a pair ``(index, exponent)`` with ``exponent`` in ``{+1, -1}``.
Words are kept freely reduced at all times: no ``a_i a_i^-1`` or
``a_i^-1 a_i`` ever survives construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

Letter = tuple[int, int]


def free_reduce(pairs: Iterable[Letter]) -> tuple[Letter, ...]:
    """Freely reduce a sequence of letters."""
    out: list[Letter] = []
    for idx, exp in pairs:
        if exp not in (1, -1):
            raise ValueError(f"letter exponent must be +1 or -1, got {exp}")
        if idx < 0:
            raise ValueError(f"letter index must be non-negative, got {idx}")
        if out and out[-1][0] == idx and out[-1][1] == -exp:
            out.pop()
        else:
            out.append((idx, exp))
    return tuple(out)


@dataclass(frozen=True, slots=True)
class Word:
    """A freely reduced word; the empty word is the identity."""

    letters: tuple[Letter, ...] = ()

    @staticmethod
    def of(pairs: Iterable[Letter]) -> "Word":
        """Build a word from letters, reducing freely."""
        return Word(free_reduce(pairs))

    @staticmethod
    def gen(index: int, exponent: int = 1) -> "Word":
        return Word.of([(index, exponent)])

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __str__(self) -> str:
        return format_word(self)


IDENTITY = Word()


def compose(w1: Word, w2: Word) -> Word:
    """Group product: free reduction of the concatenation w1 . w2."""
    if not w1.letters:
        return w2
    if not w2.letters:
        return w1
    out = list(w1.letters)
    for idx, exp in w2.letters:
        if out and out[-1][0] == idx and out[-1][1] == -exp:
            out.pop()
        else:
            out.append((idx, exp))
    return Word(tuple(out))


def compose_all(words: Iterable[Word]) -> Word:
    acc = IDENTITY
    for w in words:
        acc = compose(acc, w)
    return acc


def invert(w: Word) -> Word:
    """Formal inverse: reversed word with negated exponents."""
    return Word(tuple((idx, -exp) for idx, exp in reversed(w.letters)))


def power(w: Word, n: int) -> Word:
    """n-th power of w (n may be negative)."""
    if n < 0:
        return power(invert(w), -n)
    acc = IDENTITY
    for _ in range(n):
        acc = compose(acc, w)
    return acc


def commutator(u: Word, v: Word) -> Word:
    """[u, v] = u^-1 v^-1 u v."""
    return compose_all([invert(u), invert(v), u, v])


def shift_indices(w: Word, d: int, s: int) -> Word:
    """Shift every letter index by d modulo s (subscripts taken mod s)."""
    return Word(tuple(((idx + d) % s, exp) for idx, exp in w.letters))


def format_word(w: Word) -> str:
    """Human-readable form, e.g. ``a_1 a_0^-1``; the identity is ``1``."""
    if not w.letters:
        return "1"
    parts = []
    for idx, exp in w.letters:
        parts.append(f"a_{idx}" if exp == 1 else f"a_{idx}^-1")
    return " ".join(parts)


def to_pairs(w: Word) -> list[list[int]]:
    """JSON-friendly letter list: [[index, exponent], ...]."""
    return [[idx, exp] for idx, exp in w.letters]


def from_pairs(pairs: Iterable[Iterable[int]]) -> Word:
    """Parse the JSON letter-list form, reducing freely."""
    letters: list[Letter] = []
    for pair in pairs:
        seq = list(pair)
        if len(seq) != 2:
            raise ValueError(f"letter must be a pair [index, exponent]: {seq}")
        letters.append((int(seq[0]), int(seq[1])))
    return Word.of(letters)
