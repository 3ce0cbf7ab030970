"""Generator-splitting engine for the prodense-subgroup argument.

Starting from the seeds g = a_{s-1}...a_0 z and h_j (same product with a_j
inverted, times noise in G'), the engine normalizes every seed to an exact
permuted product along a single descending chain of vertices, rotates g to end
with a_0, and then repeatedly applies the two splitting situations

    (i)  alpha = ~alpha a_0,  beta = ~beta a_0^-1 ^beta:
         beta alpha projects ~beta one level down the rightmost path, so
         ~beta and a_0^-1 ^beta are members s levels deeper;
    (ii) alpha = a_0 ~alpha,  beta = ^beta a_0^-1 ~beta:
         alpha beta does the same for the suffix ~beta,

with pivots other than a_0 handled by index-shifting (projecting both parts
down the rightmost path until the pivot letter has index 0), until every
generator is isolated as a singleton part.  Every move is certified by exact
element equalities in the core calculus and logged to a replayable transcript.

"Membership" here is a certified ledger only: a part admitted at level n is a
word w such that, whenever the seeds lie in a subgroup H, w is the section at
the current vertex of an explicit product of powers of earlier members.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .calculus import (
    GroupParams,
    Vertex,
    abelianize,
    act,
    decompose,
    equal_elements,
    root_exponent,
    section,
)
from .errors import BudgetExhaustedError, CertificationError, PreconditionError
from .projections import (
    Budget,
    PermutedProduct,
    cyclic_alignment,
    normalize_to_permuted_product,
    power_sections,
    rightmost_projection,
)
from .words import Word, compose, from_pairs, invert, power, shift_indices, to_pairs


def is_part(params: GroupParams, w: Word) -> bool:
    """A part: non-empty word of pairwise-distinct indices with exponents +-1."""
    idxs = [i for i, _ in w.letters]
    return (
        1 <= len(w.letters) <= params.s
        and len(set(idxs)) == len(idxs)
        and all(0 <= i < params.s for i in idxs)
    )


@dataclass
class Move:
    kind: str
    data: dict
    verified: bool = False

    def to_dict(self) -> dict:
        return {"kind": self.kind, "verified": self.verified, **self.data}


@dataclass
class Transcript:
    params: GroupParams
    moves: list[Move] = field(default_factory=list)
    succeeded: bool = False
    final_parts: tuple[Word, ...] = ()

    def to_json(self) -> str:
        return json.dumps(
            {
                "m": self.params.m,
                "s": self.params.s,
                "succeeded": self.succeeded,
                "final_parts": [to_pairs(w) for w in self.final_parts],
                "moves": [mv.to_dict() for mv in self.moves],
            },
            indent=2,
        )

    @staticmethod
    def from_json(text: str) -> "Transcript":
        obj = json.loads(text)
        params = GroupParams(obj["m"], obj["s"])
        moves = []
        for raw in obj["moves"]:
            raw = dict(raw)
            kind = raw.pop("kind")
            verified = raw.pop("verified", False)
            moves.append(Move(kind, raw, verified))
        return Transcript(
            params,
            moves,
            obj.get("succeeded", False),
            tuple(from_pairs(p) for p in obj.get("final_parts", [])),
        )


@dataclass
class SplitState:
    """The certified-membership ledger at the current rightmost level."""

    params: GroupParams
    level: int
    parts: tuple[Word, ...]
    provenance: dict[Word, tuple[int, ...]] = field(default_factory=dict)


def make_prodense_seeds(params: GroupParams, noise: list[Word]) -> list[Word]:
    """g = a_{s-1}...a_0 z and, for each j, h_j with a_j inverted, times z_j.

    `noise` supplies the s+1 words z, z_0, ..., z_{s-1}; each must have zero
    abelianization vector (i.e. lie in the derived subgroup).
    """
    s = params.s
    if len(noise) != s + 1:
        raise PreconditionError(f"expected {s + 1} noise words, got {len(noise)}")
    for z in noise:
        if any(abelianize(params, z)):
            raise PreconditionError(f"noise word not in the derived subgroup: {z}")
    descending = [(i, 1) for i in range(s - 1, -1, -1)]
    seeds = [compose(Word.of(descending), noise[0])]
    for j in range(s):
        letters = [(i, -1 if i == j else 1) for i in range(s - 1, -1, -1)]
        seeds.append(compose(Word.of(letters), noise[j + 1]))
    return seeds


def _expected_sign_pattern(params: GroupParams, seed_index: int) -> tuple[int, ...]:
    # seed 0 is g (all +1); seed j+1 is h_j (-1 at j)
    s = params.s
    if seed_index == 0:
        return (1,) * s
    return tuple(-1 if i == seed_index - 1 else 1 for i in range(s))


def _descend_step(params: GroupParams, w: Word, x: int) -> Word:
    """Section at child x of w (if level-1-stabilised) or of w^m (otherwise)."""
    if root_exponent(params, w) == 0:
        return decompose(params, w).sections[x]
    return power_sections(params, w)[x]


def _descend(params: GroupParams, w: Word, path: tuple[int, ...]) -> Word:
    for x in path:
        w = _descend_step(params, w, x)
    return w


# ---------------------------------------------------------------------------
# split verification


def _split_pieces(
    situation: str, pivot: int, beta: Word
) -> tuple[Word, Word, Word] | None:
    """Locate the pivot inverse in beta; return (tilde, other, full-check).

    For (i) the tilde piece is the prefix before a_pivot^-1 (must be
    non-empty); for (ii) it is the suffix after it.  `other` is the
    complementary piece carrying the pivot letter.
    """
    pos = next(
        (k for k, l in enumerate(beta.letters) if l == (pivot, -1)),
        None,
    )
    if pos is None:
        return None
    if situation == "i":
        if pos == 0:
            return None
        tilde = Word(beta.letters[:pos])
        other = Word(beta.letters[pos:])
    elif situation == "ii":
        if pos == len(beta.letters) - 1:
            return None
        tilde = Word(beta.letters[pos + 1 :])
        other = Word(beta.letters[: pos + 1])
    else:
        raise ValueError(f"unknown situation {situation!r}")
    return tilde, other, beta


def verify_split(
    params: GroupParams,
    situation: str,
    pivot: int,
    alpha: Word,
    beta: Word,
    tilde: Word,
    other: Word,
) -> None:
    """Certify one splitting move by exact element equalities.

    Checks the shapes, that projecting both parts `pivot` levels shifts their
    indices, that the product's rightmost section equals the shifted tilde
    piece, and that both output pieces are stable under a full s-level
    rightmost projection (so they re-certify at the next level block).
    """
    s, m = params.s, params.m
    for w in (alpha, beta, tilde, other):
        if not is_part(params, w):
            raise CertificationError(f"not a part: {w}")
    pieces = _split_pieces(situation, pivot, beta)
    if pieces is None or pieces[0] != tilde or pieces[1] != other:
        raise CertificationError("claimed pieces do not match the beta decomposition")
    if situation == "i":
        if not alpha.letters or alpha.letters[-1] != (pivot, 1):
            raise CertificationError("situation (i) needs alpha ending with the pivot")
    else:
        if not alpha.letters or alpha.letters[0] != (pivot, 1):
            raise CertificationError("situation (ii) needs alpha starting with the pivot")

    sa = shift_indices(alpha, -pivot, s)
    sb = shift_indices(beta, -pivot, s)
    if pivot:
        if not equal_elements(params, rightmost_projection(params, alpha, pivot), sa):
            raise CertificationError("alpha does not project to its index shift")
        if not equal_elements(params, rightmost_projection(params, beta, pivot), sb):
            raise CertificationError("beta does not project to its index shift")
    prod = compose(sb, sa) if situation == "i" else compose(sa, sb)
    if not prod.letters:
        raise CertificationError("split product is trivial")
    if root_exponent(params, prod) != 0:
        raise CertificationError("split product does not stabilise the first level")
    sect = decompose(params, prod).sections[m - 1]
    if not equal_elements(params, sect, shift_indices(tilde, -(pivot + 1), s)):
        raise CertificationError("projected product does not equal the tilde piece")
    for piece in (tilde, other):
        if not equal_elements(
            params, rightmost_projection(params, piece, s), piece
        ):
            raise CertificationError(f"piece not stable under s-level projection: {piece}")


def split_step(state: SplitState, situation: str, alpha: Word, beta: Word) -> SplitState:
    """Apply one certified splitting move to a state; beta is replaced by its
    two pieces and the ledger advances 2s levels down the rightmost path."""
    params = state.params
    if alpha not in state.parts or beta not in state.parts:
        raise PreconditionError("alpha and beta must be current parts")
    pivot_letters = [l for l in alpha.letters if l[1] == 1]
    # the pivot is determined by alpha's end letter for the chosen situation
    end = alpha.letters[-1] if situation == "i" else alpha.letters[0]
    if end[1] != 1:
        raise PreconditionError("alpha must expose the pivot with exponent +1")
    pivot = end[0]
    pieces = _split_pieces(situation, pivot, beta)
    if pieces is None:
        raise PreconditionError("beta does not match the chosen situation at this pivot")
    tilde, other, _ = pieces
    verify_split(params, situation, pivot, alpha, beta, tilde, other)
    new_parts = tuple(p for p in state.parts if p != beta) + (tilde, other)
    return SplitState(params, state.level + params.s, new_parts, dict(state.provenance))


# ---------------------------------------------------------------------------
# the full pipeline


def _find_split(
    params: GroupParams, parts: list[Word]
) -> tuple[str, int, Word, bool, Word, bool] | None:
    """Deterministically pick the next applicable move.

    Returns (situation, pivot, alpha, alpha_inverted, beta, beta_inverted),
    scanning pivots in ascending order and parts shortest-first.
    """
    order = sorted(parts, key=lambda w: (len(w.letters), w.letters))
    for pivot in range(params.s):
        for a in order:
            options: list[tuple[str, Word, bool]] = []
            if a.letters[-1] == (pivot, 1):
                options.append(("i", a, False))
            if a.letters[0] == (pivot, 1):
                options.append(("ii", a, False))
            if a.letters[0] == (pivot, -1):
                options.append(("i", invert(a), True))
            if a.letters[-1] == (pivot, -1):
                options.append(("ii", invert(a), True))
            for situation, alpha, a_inv in options:
                for b in order:
                    if b == a or len(b.letters) < 2:
                        continue
                    if (pivot, -1) in b.letters:
                        beta, b_inv = b, False
                    elif (pivot, 1) in b.letters:
                        beta, b_inv = invert(b), True
                    else:
                        continue
                    if _split_pieces(situation, pivot, beta) is None:
                        continue
                    sa = shift_indices(alpha, -pivot, params.s)
                    sb = shift_indices(beta, -pivot, params.s)
                    prod = compose(sb, sa) if situation == "i" else compose(sa, sb)
                    if not prod.letters:
                        continue
                    return situation, pivot, alpha, a_inv, beta, b_inv
    return None


def _dedupe(parts: list[Word]) -> list[Word]:
    seen: list[Word] = []
    singles: set[int] = {w.letters[0][0] for w in parts if len(w.letters) == 1}
    for w in parts:
        if len(w.letters) == 1:
            if all(u.letters[0][0] != w.letters[0][0] for u in seen if len(u.letters) == 1):
                seen.append(w)
        elif w not in seen and invert(w) not in seen:
            # a longer part all of whose indices are isolated already adds nothing
            if not {i for i, _ in w.letters} <= singles:
                seen.append(w)
    return seen


def isolate_generators(
    params: GroupParams, seeds: list[Word], budget: Budget | None = None
) -> Transcript:
    """Run the full pipeline: normalize every seed to a permuted product along
    one descending vertex chain, rotate g to end with a_0, then split greedily
    until all s generators appear as singleton parts."""
    s, m = params.s, params.m
    if len(seeds) != s + 1:
        raise PreconditionError(f"expected {s + 1} seeds, got {len(seeds)}")
    for j, seed in enumerate(seeds):
        if abelianize(params, seed) != _expected_sign_pattern(params, j):
            raise PreconditionError(f"seed {j} has the wrong abelianization pattern")
    budget = Budget.default(params) if budget is None else budget
    tr = Transcript(params)
    tr.moves.append(
        Move("seeds", {"seeds": [to_pairs(w) for w in seeds]}, verified=True)
    )

    # Stage A/B: normalize each seed in turn; carry all other members down to
    # the witness vertex of each normalization.
    normalized: list[Word] = []
    pending: list[Word] = list(seeds)
    level = 0
    for j in range(s + 1):
        rep = pending.pop(0)
        wit = normalize_to_permuted_product(params, rep, budget)
        tr.moves.append(
            Move(
                "normalize",
                {
                    "seed_index": j,
                    "input": to_pairs(rep),
                    "vertex": str(wit.vertex),
                    "power_exponent": wit.exponent_j,
                    "product": to_pairs(wit.result.word()),
                },
                verified=True,
            )
        )
        level += wit.vertex.level
        path = wit.vertex.path

        def carry(w: Word) -> Word:
            result = _descend(params, w, path)
            tr.moves.append(
                Move(
                    "carry",
                    {
                        "input": to_pairs(w),
                        "path": str(Vertex(path)),
                        "result": to_pairs(result),
                    },
                    verified=True,
                )
            )
            return result

        normalized = [carry(w) for w in normalized]
        pending = [carry(w) for w in pending]
        normalized.append(wit.result.word())
        for w in normalized:
            if not (is_part(params, w) and len(w.letters) == s):
                raise CertificationError(f"carried product lost its shape: {w}")

    # Stage C: rotate the all-positive product to end with a_0.
    g_prod = PermutedProduct.from_word(normalized[0], s)
    align = cyclic_alignment(params, g_prod, 0)
    tr.moves.append(
        Move(
            "align",
            {
                "input": to_pairs(normalized[0]),
                "target": 0,
                "vertex": str(align.vertex),
                "power_exponent": align.power_exponent,
                "result": to_pairs(align.word),
            },
            verified=True,
        )
    )
    level += align.vertex.level
    parts = [align.word]
    for w in normalized[1:]:
        result = _descend(params, w, align.vertex.path)
        tr.moves.append(
            Move(
                "carry",
                {
                    "input": to_pairs(w),
                    "path": str(align.vertex),
                    "result": to_pairs(result),
                },
                verified=True,
            )
        )
        parts.append(result)

    # Stage D: greedy certified splitting.
    max_rounds = 4 * s * (s + 1)
    for _ in range(max_rounds):
        singles = {w.letters[0][0] for w in parts if len(w.letters) == 1}
        if singles == set(range(s)):
            break
        choice = _find_split(params, parts)
        if choice is None:
            tr.succeeded = False
            tr.moves.append(Move("stalled", {"parts": [to_pairs(w) for w in parts]}))
            return tr
        situation, pivot, alpha, a_inv, beta, b_inv = choice
        for oriented, inverted in ((alpha, a_inv), (beta, b_inv)):
            if inverted:
                original = invert(oriented)
                tr.moves.append(
                    Move(
                        "invert",
                        {"input": to_pairs(original), "result": to_pairs(oriented)},
                        verified=True,
                    )
                )
                parts = [w for w in parts if w != original] + [oriented]
        pieces = _split_pieces(situation, pivot, beta)
        tilde, other, _ = pieces
        verify_split(params, situation, pivot, alpha, beta, tilde, other)
        tr.moves.append(
            Move(
                "split",
                {
                    "situation": situation,
                    "pivot": pivot,
                    "alpha": to_pairs(alpha),
                    "beta": to_pairs(beta),
                    "tilde": to_pairs(tilde),
                    "other": to_pairs(other),
                },
                verified=True,
            )
        )
        level += s
        parts = _dedupe([w for w in parts if w != beta] + [tilde, other])
    else:
        raise BudgetExhaustedError("split round cap exceeded")

    # normalize singleton signs to +1
    final: list[Word] = []
    for i in range(s):
        found = next(w for w in parts if len(w.letters) == 1 and w.letters[0][0] == i)
        if found.letters[0][1] == -1:
            tr.moves.append(
                Move(
                    "invert",
                    {"input": to_pairs(found), "result": to_pairs(invert(found))},
                    verified=True,
                )
            )
            found = invert(found)
        final.append(found)
    tr.succeeded = True
    tr.final_parts = tuple(final)
    tr.moves.append(
        Move("final", {"parts": [to_pairs(w) for w in final], "level": level}, verified=True)
    )
    return tr


# ---------------------------------------------------------------------------
# replay


def replay_transcript(tr: Transcript) -> bool:
    """Re-verify every move of a transcript against the core calculus.

    Maintains the membership ledger exactly as the run did; returns True iff
    every claimed equality re-verifies and the final parts are the s
    singletons.  Raises CertificationError with a diagnostic on failure.
    """
    params = tr.params
    s, m = params.s, params.m
    members: list[Word] = []
    relocating: list[Word] | None = None  # pending members of an open relocation block
    arrived: list[Word] = []

    def close_relocation() -> None:
        nonlocal relocating, members
        if relocating is not None:
            members = list(arrived)
            relocating = None

    for n, mv in enumerate(tr.moves):
        kind, data = mv.kind, mv.data
        if kind == "seeds":
            members = [from_pairs(p) for p in data["seeds"]]
            for j, seed in enumerate(members):
                if abelianize(params, seed) != _expected_sign_pattern(params, j):
                    raise CertificationError(f"move {n}: bad seed pattern")
        elif kind in ("normalize", "align"):
            close_relocation()
            inp = from_pairs(data["input"])
            if inp not in members:
                raise CertificationError(f"move {n}: input not in the ledger")
            vertex = Vertex.from_string(data["vertex"])
            t = data["power_exponent"]
            result = from_pairs(data["product"] if kind == "normalize" else data["result"])
            cert = power(inp, m**t)
            if act(params, cert, vertex) != vertex:
                raise CertificationError(f"move {n}: power does not stabilise vertex")
            if not equal_elements(params, section(params, cert, vertex), result):
                raise CertificationError(f"move {n}: section mismatch")
            if kind == "normalize":
                if not (is_part(params, result) and len(result.letters) == s):
                    raise CertificationError(f"move {n}: result is not a permuted product")
                if vertex.level % s != 0:
                    raise CertificationError(f"move {n}: vertex level not a multiple of s")
            else:
                if result.letters[-1] != (data["target"], 1):
                    raise CertificationError(f"move {n}: alignment does not end with target")
            relocating = [w for w in members if w != inp]
            arrived = [result]
        elif kind == "carry":
            if relocating is None:
                raise CertificationError(f"move {n}: carry outside a relocation block")
            inp = from_pairs(data["input"])
            if inp not in relocating:
                raise CertificationError(f"move {n}: carried word was not pending")
            path = Vertex.from_string(data["path"]).path
            result = from_pairs(data["result"])
            if _descend(params, inp, path) != result:
                raise CertificationError(f"move {n}: carry recomputation mismatch")
            relocating.remove(inp)
            arrived.append(result)
        elif kind == "invert":
            close_relocation()
            inp = from_pairs(data["input"])
            result = from_pairs(data["result"])
            if inp not in members:
                raise CertificationError(f"move {n}: inverted word not in the ledger")
            if invert(inp) != result:
                raise CertificationError(f"move {n}: inverse mismatch")
            members = [w for w in members if w != inp] + [result]
        elif kind == "split":
            close_relocation()
            alpha = from_pairs(data["alpha"])
            beta = from_pairs(data["beta"])
            tilde = from_pairs(data["tilde"])
            other = from_pairs(data["other"])
            if alpha not in members or beta not in members:
                raise CertificationError(f"move {n}: split inputs not in the ledger")
            verify_split(params, data["situation"], data["pivot"], alpha, beta, tilde, other)
            members = _dedupe([w for w in members if w != beta] + [tilde, other])
        elif kind == "final":
            close_relocation()
            parts = [from_pairs(p) for p in data["parts"]]
            want = {Word.gen(i) for i in range(s)}
            if set(parts) != want:
                raise CertificationError(f"move {n}: final parts are not the s singletons")
            for w in parts:
                if w not in members:
                    raise CertificationError(f"move {n}: final part {w} not in the ledger")
        elif kind == "stalled":
            return False
        else:
            raise CertificationError(f"move {n}: unknown move kind {kind!r}")
    return tr.succeeded
