"""Exact geodesic word length via Cayley-ball enumeration, and the
length-reduction checks for first-level sections and m-th power sections."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

from .calculus import GroupParams, decompose, is_identity, permutation_key
from .errors import ResourceCapError
from .words import IDENTITY, Word, compose, invert

DEFAULT_BALL_CAP = 200_000
DEFAULT_PREFILTER_DEPTH = 4


def ball_cap_default() -> int:
    return int(os.environ.get("MADIC_BALL_CAP", DEFAULT_BALL_CAP))


@dataclass
class BallElement:
    word: Word  # canonical geodesic: first discovered in BFS order
    length: int
    geodesics: list[Word] = field(default_factory=list)  # filled only on request


@dataclass
class CayleyBall:
    params: GroupParams
    radius: int
    elements: list[BallElement]
    prefilter_depth: int
    _buckets: dict[object, list[int]]

    def find(self, w: Word) -> int | None:
        """Index of the ball element equal to w, or None if absent."""
        key = permutation_key(self.params, w, self.prefilter_depth)
        for idx in self._buckets.get(key, ()):
            if is_identity(self.params, compose(w, invert(self.elements[idx].word))):
                return idx
        return None

    def __len__(self) -> int:
        return len(self.elements)


def _letters_in_order(s: int) -> list[Word]:
    # index ascending, +1 before -1: fixes the canonical-geodesic BFS order
    out = []
    for i in range(s):
        out.append(Word.gen(i, 1))
        out.append(Word.gen(i, -1))
    return out


def enumerate_ball(
    params: GroupParams,
    radius: int,
    *,
    cap: int | None = None,
    prefilter_depth: int = DEFAULT_PREFILTER_DEPTH,
    collect_all_geodesics: bool = False,
) -> CayleyBall:
    """Breadth-first closure of {1} under right multiplication by the letters.

    New candidates are bucketed by their depth-D permutation fingerprint and
    confirmed new or old by the exact word-problem decision on the quotient.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    cap = ball_cap_default() if cap is None else cap
    letters = _letters_in_order(params.s)
    ball = CayleyBall(params, radius, [], prefilter_depth, {})

    def insert(w: Word, length: int) -> int:
        key = permutation_key(params, w, prefilter_depth)
        idx = len(ball.elements)
        ball.elements.append(BallElement(w, length, [w] if collect_all_geodesics else []))
        ball._buckets.setdefault(key, []).append(idx)
        return idx

    insert(IDENTITY, 0)
    frontier = [0]
    for r in range(1, radius + 1):
        new_frontier: list[int] = []
        for idx in frontier:
            base = ball.elements[idx].word
            for letter in letters:
                w = compose(base, letter)
                found = ball.find(w)
                if found is not None:
                    if collect_all_geodesics and ball.elements[found].length == r and len(w) == r:
                        if w not in ball.elements[found].geodesics:
                            ball.elements[found].geodesics.append(w)
                    continue
                if len(ball.elements) >= cap:
                    raise ResourceCapError(
                        f"ball cap {cap} exceeded at radius {r} of {radius}"
                    )
                new_frontier.append(insert(w, r))
        frontier = new_frontier
    return ball


def geodesic_length(
    params: GroupParams, w: Word, radius_cap: int, *, ball: CayleyBall | None = None
) -> int | None:
    """The exact geodesic length of the element of w, or None if > radius_cap."""
    if ball is None:
        ball = enumerate_ball(params, radius_cap)
    idx = ball.find(w)
    return None if idx is None else ball.elements[idx].length


@dataclass
class LemmaReport:
    lemma: str
    instances_checked: int
    violations: list[str]
    unverified: int

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "instances_checked": self.instances_checked,
            "violations": list(self.violations),
            "unverified": self.unverified,
        }


def _section_length_sum(
    params: GroupParams, w: Word, ball: CayleyBall
) -> tuple[int | None, list[Word]]:
    d = decompose(params, w)
    total = 0
    for sec in d.sections:
        idx = ball.find(sec)
        if idx is None:
            return None, list(d.sections)
        total += ball.elements[idx].length
    return total, list(d.sections)


def verify_length_lemmas(
    params: GroupParams,
    radius: int,
    *,
    ball: CayleyBall | None = None,
    all_geodesics: bool = False,
    cap: int | None = None,
) -> list[LemmaReport]:
    """Check the three section-length reductions over a full ball.

    - section-sum: the geodesic lengths of the m first-level sections sum to
      at most the element's length;
    - power-sections: when the root exponent i is coprime to m, each section
      of the m-th power is no longer than that sum;
    - strict-drop: a geodesic containing a_0 before a_0^-1 forces the section
      sum down to at most length - 2.
    """
    from .projections import power_sections  # local import to avoid a cycle

    if ball is None:
        ball = enumerate_ball(
            params, radius, cap=cap, collect_all_geodesics=all_geodesics
        )
    rep31 = LemmaReport("section-sum", 0, [], 0)
    rep32 = LemmaReport("power-sections", 0, [], 0)
    rep33 = LemmaReport("strict-drop", 0, [], 0)

    for elem in ball.elements:
        g, length = elem.word, elem.length
        total, _sections = _section_length_sum(params, g, ball)
        rep31.instances_checked += 1
        if total is None:
            rep31.unverified += 1
        elif total > length:
            rep31.violations.append(f"{g}: section sum {total} > |g| = {length}")

        e = sum(exp for idx, exp in g.letters if idx == 0) % params.m
        if e != 0 and math.gcd(e, params.m) == 1:
            rep32.instances_checked += 1
            if total is None:
                rep32.unverified += 1
            else:
                for alpha in power_sections(params, g):
                    aidx = ball.find(alpha)
                    if aidx is None:
                        rep32.unverified += 1
                        break
                    alen = ball.elements[aidx].length
                    if alen > total:
                        rep32.violations.append(
                            f"{g}: |alpha| = {alen} > section sum {total}"
                        )

        geodesics = elem.geodesics if all_geodesics and elem.geodesics else [g]
        for geo in geodesics:
            pattern = False
            seen_a0 = False
            for idx, exp in geo.letters:
                if idx == 0 and exp == 1:
                    seen_a0 = True
                elif idx == 0 and exp == -1 and seen_a0:
                    pattern = True
                    break
            if not pattern:
                continue
            rep33.instances_checked += 1
            if total is None:
                rep33.unverified += 1
            elif total > length - 2:
                rep33.violations.append(
                    f"{geo}: section sum {total} > |g| - 2 = {length - 2}"
                )
    return [rep31, rep32, rep33]
