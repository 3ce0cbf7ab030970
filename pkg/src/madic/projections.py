"""Projection calculus along the rightmost path of the tree.

For elements congruent mod G' to a signed product of all s generators, the
sections of m^j-th powers at the rightmost vertex of level j shift every
generator index down by j modulo s.  This module computes those projections,
checks the shifted congruences, aligns cyclic rotations so a chosen generator
lands at the right end, and searches for the vertex at which an element with
sign-vector abelianization projects onto an exact permuted product.
"""
from __future__ import annotations

import heapq
import itertools
import math
import os
from dataclasses import dataclass

from .calculus import (
    GroupParams,
    Vertex,
    abelianize,
    act,
    decompose,
    equal_elements,
    is_identity,
    root_exponent,
    section,
)
from .errors import BudgetExhaustedError, CertificationError, PreconditionError
from .words import Word, compose, compose_all, invert, power, shift_indices


@dataclass(frozen=True)
class PermutedProduct:
    """The word a_{pi(s-1)}^{eps} ... a_{pi(0)}^{eps}: all s generators once,
    in the order given by pi, each with its own sign."""

    pi: tuple[int, ...]  # pi[t] = generator index at position t (read right to left)
    signs: tuple[int, ...]  # signs[i] = exponent of the letter a_i

    def word(self) -> Word:
        s = len(self.pi)
        return Word.of(
            [(self.pi[t], self.signs[self.pi[t]]) for t in range(s - 1, -1, -1)]
        )

    @staticmethod
    def from_word(w: Word, s: int) -> "PermutedProduct":
        if len(w.letters) != s or {i for i, _ in w.letters} != set(range(s)):
            raise ValueError(f"not a permuted product over {s} generators: {w}")
        pi = [0] * s
        signs = [0] * s
        for pos, (idx, exp) in enumerate(w.letters):
            pi[s - 1 - pos] = idx
            signs[idx] = exp
        return PermutedProduct(tuple(pi), tuple(signs))


def all_permuted_products(s: int):
    """All s! 2^s permuted products."""
    for pi in itertools.permutations(range(s)):
        for signs in itertools.product((1, -1), repeat=s):
            yield PermutedProduct(pi, signs)


def power_sections(params: GroupParams, w: Word) -> tuple[Word, ...]:
    """Sections of w^m when the root exponent is coprime to m (or zero).

    With root exponent i, gcd(i, m) = 1, the section at k of w^m is the
    product g_k g_{k+i} g_{k+2i} ... over all m first-level sections of w.
    For i = 0 the sections of w itself are returned.
    """
    m = params.m
    e = root_exponent(params, w)
    d = decompose(params, w)
    if e == 0:
        return d.sections
    if math.gcd(e, m) != 1:
        raise PreconditionError(
            f"power-section formula requires gcd(i,m)=1, got i={e}, m={m}"
        )
    alphas = tuple(
        compose_all(d.sections[(k + t * e) % m] for t in range(m)) for k in range(m)
    )
    check = decompose(params, power(w, m))
    if check.root_exponent != 0:
        raise CertificationError("m-th power does not stabilise the first level")
    for alpha, sec in zip(alphas, check.sections):
        if alpha != sec and not equal_elements(params, alpha, sec):
            raise CertificationError("power-section formula disagrees with decompose(w^m)")
    return alphas


def rightmost_projection(params: GroupParams, w: Word, j: int) -> Word:
    """phi_{(m-1)^j}(g^{m^j}): iterate (power to the m, section at m-1).

    When the current word already stabilises the first level, the plain
    section at m-1 is taken instead of powering.
    """
    if j < 0:
        raise ValueError("j must be non-negative")
    cur = w
    for _ in range(j):
        cur = _rightmost_step(params, cur)
    return cur


def _rightmost_step(params: GroupParams, w: Word) -> Word:
    e = root_exponent(params, w)
    if e == 0:
        return decompose(params, w).sections[params.m - 1]
    return power_sections(params, w)[params.m - 1]


def _require_sign_vector(params: GroupParams, w: Word) -> tuple[int, ...]:
    vec = abelianize(params, w)
    if any(v not in (1, -1) for v in vec):
        raise PreconditionError(f"abelianization must be a sign vector, got {vec}")
    return vec


def shifted_congruence_check(params: GroupParams, w: Word, j: int) -> bool:
    """Do all m^j sections of g^{m^j} carry the index-shifted sign vector?

    Requires abelianize(w) in {+1,-1}^s.  Each section of g^{m^j} must be
    congruent mod G' to the product whose letter indices are shifted down by
    r = j mod s, i.e. its abelianization vector at coordinate i must equal
    the input's coordinate (i + r) mod s.
    """
    if j < 1:
        raise ValueError("j must be at least 1")
    vec = _require_sign_vector(params, w)
    s = params.s
    r = j % s
    target = tuple(vec[(i + r) % s] for i in range(s))

    def walk(word: Word, depth: int) -> bool:
        if depth == 0:
            return abelianize(params, word) == target
        return all(walk(alpha, depth - 1) for alpha in power_sections(params, word))

    return walk(w, j)


@dataclass(frozen=True)
class AlignmentWitness:
    """A cyclic rotation of a permuted product, certified as a section.

    The word equals section(g^{m^power_exponent}, vertex) as a group element,
    the vertex level is a multiple of s, and the word ends with the target
    generator.
    """

    vertex: Vertex
    word: Word
    power_exponent: int


def cyclic_alignment(
    params: GroupParams, prod: PermutedProduct, target: int
) -> AlignmentWitness:
    """Find a level-s vertex whose projection rotates prod to end with a_target.

    Follows the candidate vertex (m-1)^target (m-2) (m-1)^{s-target-1}; the
    returned witness is re-verified against an explicit power of the input.
    """
    s = params.s
    m = params.m
    if not 0 <= target < s:
        raise PreconditionError(f"target index {target} out of range for s={s}")
    if prod.signs[target] != 1:
        raise PreconditionError(f"target generator a_{target} must carry exponent +1")
    g = prod.word()
    path = (m - 1,) * target + (m - 2,) + (m - 1,) * (s - target - 1)
    h = g
    t = 0
    for x in path:
        e = root_exponent(params, h)
        if e == 0:
            h = decompose(params, h).sections[x]
        else:
            h = section(params, power(h, m), Vertex((x,)))
            t += 1
    vertex = Vertex(path)
    if not h.letters or h.letters[-1] != (target, 1):
        raise BudgetExhaustedError(
            f"alignment candidate at {vertex} does not end with a_{target}: {h}"
        )
    cert = power(g, m**t)
    if act(params, cert, vertex) != vertex:
        raise CertificationError("alignment certificate does not stabilise the vertex")
    if not equal_elements(params, section(params, cert, vertex), h):
        raise CertificationError("alignment certificate section mismatch")
    return AlignmentWitness(vertex, h, t)


@dataclass(frozen=True)
class Budget:
    """Caps for the normalization search; policy, not part of any lemma."""

    max_depth: int
    max_equality_tests: int = 100_000

    @staticmethod
    def default(params: GroupParams) -> "Budget":
        steps = os.environ.get("MADIC_BUDGET_STEPS")
        tests = int(steps) if steps else 100_000
        return Budget(max_depth=3 * params.s * params.s, max_equality_tests=tests)


@dataclass(frozen=True)
class NormalizationWitness:
    """A power of the input whose section at `vertex` is an exact permuted product."""

    vertex: Vertex
    exponent_j: int  # the power taken is m^exponent_j
    result: PermutedProduct
    certificate: Word

    def to_dict(self) -> dict:
        from .words import to_pairs

        return {
            "vertex": str(self.vertex),
            "power_exponent": self.exponent_j,
            "pi": list(self.result.pi),
            "signs": list(self.result.signs),
            "certificate_word": to_pairs(self.certificate),
        }


def _match_permuted_product(
    params: GroupParams, w: Word, tests_left: list[int]
) -> PermutedProduct | None:
    """Is w equal, as a group element, to some permuted product?"""
    s = params.s
    vec = abelianize(params, w)
    if any(v not in (1, -1) for v in vec):
        return None
    # fast path: the reduced word is already in product shape
    if len(w.letters) == s and {i for i, _ in w.letters} == set(range(s)):
        return PermutedProduct.from_word(w, s)
    for pi in itertools.permutations(range(s)):
        cand = PermutedProduct(pi, vec)
        if tests_left[0] <= 0:
            raise BudgetExhaustedError("equality-test budget exhausted")
        tests_left[0] -= 1
        if equal_elements(params, w, cand.word()):
            return cand
    return None


def normalize_to_permuted_product(
    params: GroupParams, w: Word, budget: Budget | None = None
) -> NormalizationWitness:
    """Search for a vertex (level a multiple of s) where a power of w projects
    onto an exact permuted product.

    Proof-guided best-first search: repeatedly take m-th powers and descend to
    children (shorter reduced words first), testing each visited word against
    the s! candidate products whose signs the abelianization dictates.  Hits at
    levels not divisible by s are extended along the rightmost path.  Every
    returned witness is independently re-verified.
    """
    _require_sign_vector(params, w)
    budget = Budget.default(params) if budget is None else budget
    s, m = params.s, params.m
    tests_left = [budget.max_equality_tests]

    heap: list[tuple[tuple[int, int, tuple[int, ...]], Word, tuple[int, ...], int]] = []
    counter = 0

    def push(word: Word, path: tuple[int, ...], t: int) -> None:
        heapq.heappush(heap, ((len(word), len(path), path), word, path, t))

    push(w, (), 0)
    seen = {(w, 0)}
    while heap:
        _, cur, path, t = heapq.heappop(heap)
        match = _match_permuted_product(params, cur, tests_left)
        if match is not None:
            # extend to a level divisible by s along the rightmost path
            word, ext_path, ext_t = cur, path, t
            while len(ext_path) % s != 0:
                e = root_exponent(params, word)
                if e == 0:
                    word = decompose(params, word).sections[m - 1]
                else:
                    word = _rightmost_step(params, word)
                    ext_t += 1
                ext_path = ext_path + (m - 1,)
            final = _match_permuted_product(params, word, tests_left)
            if final is None:
                raise CertificationError("rightmost extension lost the product form")
            witness = NormalizationWitness(
                Vertex(ext_path), ext_t, final, power(w, m**ext_t)
            )
            verify_normalization_witness(params, w, witness)
            return witness
        if len(path) >= budget.max_depth:
            continue
        for k, alpha in enumerate(power_sections(params, cur)):
            key = (alpha, (len(path) + 1) % s)
            if key in seen:
                continue
            seen.add(key)
            push(alpha, path + (k,), t + 1)
        counter += 1
    raise BudgetExhaustedError(
        f"no permuted-product witness found within depth {budget.max_depth}"
    )


def verify_normalization_witness(
    params: GroupParams, w: Word, witness: NormalizationWitness
) -> None:
    """Re-verify a witness from scratch: the certificate is the claimed power
    of the input, stabilises the vertex, and its section equals the product."""
    if witness.vertex.level % params.s != 0:
        raise CertificationError("witness vertex level is not a multiple of s")
    expected = power(w, params.m**witness.exponent_j)
    if witness.certificate != expected:
        raise CertificationError("certificate is not the claimed power of the input")
    if act(params, witness.certificate, witness.vertex) != witness.vertex:
        raise CertificationError("certificate does not stabilise the witness vertex")
    sec = section(params, witness.certificate, witness.vertex)
    if not equal_elements(params, sec, witness.result.word()):
        raise CertificationError("certificate section is not the claimed product")
