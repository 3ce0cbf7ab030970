"""Generator-splitting engine: seeds, certified splits, transcripts, replay."""
import json
import random

import pytest

from madic.calculus import GroupParams
from madic.errors import CertificationError, PreconditionError
from madic.prodense import (
    SplitState,
    Transcript,
    is_part,
    isolate_generators,
    make_prodense_seeds,
    replay_transcript,
    split_step,
    verify_split,
)
from madic.words import IDENTITY, Word, commutator, format_word, invert, power

P22 = GroupParams(2, 2)
P23 = GroupParams(2, 3)
P32 = GroupParams(3, 2)
P33 = GroupParams(3, 3)


def empty_noise(s):
    return [IDENTITY] * (s + 1)


def test_seed_shapes_22():
    g, h0, h1 = make_prodense_seeds(P22, empty_noise(2))
    assert format_word(g) == "a_1 a_0"
    assert format_word(h0) == "a_1 a_0^-1"
    assert format_word(h1) == "a_1^-1 a_0"


def test_seed_shapes_23():
    seeds = make_prodense_seeds(P23, empty_noise(3))
    assert format_word(seeds[0]) == "a_2 a_1 a_0"
    assert format_word(seeds[2]) == "a_2 a_1^-1 a_0"


def test_seed_noise_must_be_derived():
    with pytest.raises(PreconditionError):
        make_prodense_seeds(P22, [power(Word.gen(0), 2), IDENTITY, IDENTITY])


def test_seed_count_checked():
    with pytest.raises(PreconditionError):
        make_prodense_seeds(P22, [IDENTITY] * 2)


def test_is_part():
    assert is_part(P23, Word.of([(2, 1), (0, -1)]))
    assert not is_part(P23, IDENTITY)
    assert not is_part(P23, Word.of([(0, 1), (1, 1), (0, 1)]))  # repeated index


def test_split_step_example_23():
    # situation (i) with pivot 0: alpha = a_2 a_1 a_0, beta = a_1 a_0^-1 a_2
    alpha = Word.of([(2, 1), (1, 1), (0, 1)])
    beta = Word.of([(1, 1), (0, -1), (2, 1)])
    state = SplitState(P23, 0, (alpha, beta))
    out = split_step(state, "i", alpha, beta)
    assert out.level == 3
    assert Word.of([(1, 1)]) in out.parts
    assert Word.of([(0, -1), (2, 1)]) in out.parts
    assert beta not in out.parts


def test_split_step_rejects_non_members():
    alpha = Word.of([(1, 1), (0, 1)])
    beta = Word.of([(1, 1), (0, -1)])
    state = SplitState(P22, 0, (alpha,))
    with pytest.raises(PreconditionError):
        split_step(state, "i", alpha, beta)


def test_verify_split_rejects_wrong_pieces():
    alpha = Word.of([(2, 1), (1, 1), (0, 1)])
    beta = Word.of([(1, 1), (0, -1), (2, 1)])
    with pytest.raises(CertificationError):
        verify_split(
            P23, "i", 0, alpha, beta, Word.of([(2, 1)]), Word.of([(0, -1), (2, 1)])
        )


PIPELINE_PARAMS = [P22, P32, P23, P33]


@pytest.mark.parametrize("params", PIPELINE_PARAMS)
def test_pipeline_with_empty_noise(params):
    seeds = make_prodense_seeds(params, empty_noise(params.s))
    tr = isolate_generators(params, seeds)
    assert tr.succeeded
    assert set(tr.final_parts) == {Word.gen(i) for i in range(params.s)}


@pytest.mark.parametrize("params", PIPELINE_PARAMS)
def test_pipeline_with_commutator_noise(params):
    rng = random.Random(params.m * 10 + params.s)
    noise = []
    for _ in range(params.s + 1):
        i, j = rng.sample(range(params.s), 2)
        noise.append(commutator(Word.gen(i), Word.gen(j)))
    tr = isolate_generators(params, make_prodense_seeds(params, noise))
    assert tr.succeeded
    assert set(tr.final_parts) == {Word.gen(i) for i in range(params.s)}


def test_transcript_round_trip_and_replay():
    seeds = make_prodense_seeds(P23, empty_noise(3))
    tr = isolate_generators(P23, seeds)
    again = Transcript.from_json(tr.to_json())
    assert again.succeeded
    assert again.final_parts == tr.final_parts
    assert replay_transcript(again)
    # replay is idempotent
    assert replay_transcript(again)


def test_replay_detects_tampered_split():
    tr = isolate_generators(P22, make_prodense_seeds(P22, empty_noise(2)))
    obj = json.loads(tr.to_json())
    for mv in obj["moves"]:
        if mv["kind"] == "split":
            mv["tilde"] = [[1, -1]]
            break
    with pytest.raises(CertificationError):
        replay_transcript(Transcript.from_json(json.dumps(obj)))


def test_replay_detects_foreign_member():
    tr = isolate_generators(P22, make_prodense_seeds(P22, empty_noise(2)))
    obj = json.loads(tr.to_json())
    for mv in obj["moves"]:
        if mv["kind"] == "split":
            mv["alpha"] = [[0, 1]]  # never admitted to the ledger
            break
    with pytest.raises(CertificationError):
        replay_transcript(Transcript.from_json(json.dumps(obj)))


def test_transcripts_are_deterministic():
    a = isolate_generators(P32, make_prodense_seeds(P32, empty_noise(2)))
    b = isolate_generators(P32, make_prodense_seeds(P32, empty_noise(2)))
    assert a.to_json() == b.to_json()


def test_progress_each_split_shrinks_or_splits():
    tr = isolate_generators(P33, make_prodense_seeds(P33, empty_noise(3)))
    lengths = []
    for mv in tr.moves:
        if mv.kind == "split":
            beta = mv.data["beta"]
            tilde, other = mv.data["tilde"], mv.data["other"]
            assert len(tilde) + len(other) == len(beta)
            assert len(tilde) >= 1 and len(other) >= 1
            lengths.append(len(beta))
    assert lengths  # at least one split happened


def test_seeds_with_wrong_pattern_rejected():
    bad = [Word.gen(0)] * 3
    with pytest.raises(PreconditionError):
        isolate_generators(P22, bad)
