"""Rightmost-path projection calculus: power sections, index shifts, shifted
congruences, cyclic alignment, and the permuted-product normalization."""
import random

import pytest

from madic.calculus import GroupParams, Vertex, act, equal_elements, section
from madic.errors import PreconditionError
from madic.projections import (
    Budget,
    PermutedProduct,
    all_permuted_products,
    cyclic_alignment,
    normalize_to_permuted_product,
    power_sections,
    rightmost_projection,
    shifted_congruence_check,
    verify_normalization_witness,
)
from madic.words import Word, commutator, compose, invert, power, shift_indices

P22 = GroupParams(2, 2)
P32 = GroupParams(3, 2)
P23 = GroupParams(2, 3)
PAIRS = [P22, P32, P23]


def test_permuted_product_round_trip():
    for prod in all_permuted_products(3):
        assert PermutedProduct.from_word(prod.word(), 3) == prod


def test_all_permuted_products_count():
    assert sum(1 for _ in all_permuted_products(3)) == 6 * 8


def test_power_sections_matches_direct_power():
    w = Word.of([(1, 1), (0, 1)])
    for params in PAIRS:
        alphas = power_sections(params, w)
        d_sections = [
            section(params, power(w, params.m), Vertex((k,))) for k in range(params.m)
        ]
        for alpha, sec in zip(alphas, d_sections):
            assert equal_elements(params, alpha, sec)


def test_power_sections_requires_coprime_root_exponent():
    p42 = GroupParams(4, 2)
    with pytest.raises(PreconditionError):
        power_sections(p42, power(Word.gen(0), 2))  # root exponent 2, gcd 2


def test_projection_of_permuted_product_shifts_indices():
    for params in PAIRS:
        s = params.s
        for prod in all_permuted_products(s):
            w = prod.word()
            for j in range(2 * s + 2):
                got = rightmost_projection(params, w, j)
                want = shift_indices(w, -j, s)
                assert equal_elements(params, got, want)


def test_projection_period_s_is_the_identity_shift():
    for params in PAIRS:
        w = Word.of([(i, 1) for i in range(params.s - 1, -1, -1)])
        back = rightmost_projection(params, w, params.s)
        assert equal_elements(params, back, w)


def test_shifted_congruence_holds_for_products():
    for params in PAIRS:
        for prod in all_permuted_products(params.s):
            for j in range(1, params.s + 2):
                assert shifted_congruence_check(params, prod.word(), j)


def test_shifted_congruence_survives_derived_noise():
    rng = random.Random(99)
    for params in PAIRS:
        for _ in range(10):
            base = rng.choice(list(all_permuted_products(params.s))).word()
            i, j = rng.sample(range(params.s), 2)
            noisy = compose(base, commutator(Word.gen(i), Word.gen(j)))
            assert shifted_congruence_check(params, noisy, 1)


def test_shifted_congruence_rejects_non_sign_vectors():
    with pytest.raises(PreconditionError):
        shifted_congruence_check(P22, power(Word.gen(0), 2), 1)


def test_cyclic_alignment_concrete_witnesses():
    # (2,2), g = a_1 a_0: vertex 01 rotates to end with a_0, vertex 10 with a_1
    g = PermutedProduct.from_word(Word.of([(1, 1), (0, 1)]), 2)
    w0 = cyclic_alignment(P22, g, 0)
    assert str(w0.vertex) == "01"
    assert w0.word.letters[-1] == (0, 1)
    w1 = cyclic_alignment(P22, g, 1)
    assert str(w1.vertex) == "10"
    assert w1.word.letters[-1] == (1, 1)


def test_cyclic_alignment_certificates():
    for params in PAIRS:
        s = params.s
        prod = PermutedProduct(tuple(range(s)), (1,) * s)
        for target in range(s):
            wit = cyclic_alignment(params, prod, target)
            assert wit.vertex.level == s
            cert = power(prod.word(), params.m**wit.power_exponent)
            assert act(params, cert, wit.vertex) == wit.vertex
            assert equal_elements(params, section(params, cert, wit.vertex), wit.word)
            # the output is a cyclic rotation of the input
            doubled = prod.word().letters * 2
            n = len(wit.word.letters)
            assert any(
                doubled[k : k + n] == wit.word.letters for k in range(n)
            )


def test_cyclic_alignment_rejects_negative_target_sign():
    prod = PermutedProduct((0, 1), (-1, 1))
    with pytest.raises(PreconditionError):
        cyclic_alignment(P22, prod, 0)


def test_normalize_exact_product_is_found_at_the_root():
    w = Word.of([(1, 1), (0, 1)])
    wit = normalize_to_permuted_product(P22, w)
    assert wit.vertex.level == 0
    assert wit.result.word() == w


@pytest.mark.parametrize("params", PAIRS)
def test_normalize_with_derived_noise(params):
    rng = random.Random(5)
    s = params.s
    base = Word.of([(i, 1) for i in range(s - 1, -1, -1)])
    for _ in range(5):
        i, j = rng.sample(range(s), 2)
        noisy = compose(base, commutator(Word.gen(i), Word.gen(j)))
        wit = normalize_to_permuted_product(params, noisy)
        verify_normalization_witness(params, noisy, wit)
        assert wit.vertex.level % s == 0
        assert set(wit.result.pi) == set(range(s))


def test_normalization_witness_verification_catches_tampering():
    w = Word.of([(1, 1), (0, 1)])
    wit = normalize_to_permuted_product(P22, w)
    from madic.errors import CertificationError
    from madic.projections import NormalizationWitness

    bad = NormalizationWitness(
        wit.vertex, wit.exponent_j + 1, wit.result, wit.certificate
    )
    with pytest.raises(CertificationError):
        verify_normalization_witness(P22, w, bad)


def test_budget_default_reads_environment(monkeypatch):
    monkeypatch.setenv("MADIC_BUDGET_STEPS", "123")
    assert Budget.default(P22).max_equality_tests == 123
