import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import raw_letters, word_pairs, words
from wordchir.words import (
    ParseError,
    Word,
    commutator,
    concat,
    count_reduced_words,
    cyclic_reduce,
    effective_form,
    embed,
    exponent_vector,
    format_word,
    generator,
    identity,
    infer_rank,
    invert,
    is_palindrome,
    iter_reduced_words,
    parse,
    power,
    random_word,
    reduce,
)


def W(text, rank=2):
    return parse(text, rank)


def random_order_reduce(raw, rng):
    """Cancel a randomly chosen adjacent inverse pair until none remain."""
    letters = list(raw)
    while True:
        spots = [i for i in range(len(letters) - 1) if letters[i] == -letters[i + 1]]
        if not spots:
            return tuple(letters)
        i = rng.choice(spots)
        del letters[i : i + 2]


class TestReduce:
    def test_full_cancellation(self):
        assert reduce([1, -1], 2) == identity(2)

    def test_inner_cancellation(self):
        assert reduce([1, 2, -2, 1], 2).letters == (1, 1)

    def test_commutator_length(self):
        w = reduce([1, 2, -1, -2], 2)
        assert len(w) == 4

    @pytest.mark.parametrize("rank", [0, -1])
    def test_bad_rank(self, rank):
        with pytest.raises(ValueError):
            reduce([], rank)

    def test_letter_out_of_range(self):
        with pytest.raises(ValueError):
            reduce([3], 2)
        with pytest.raises(ValueError):
            reduce([0], 2)

    def test_word_rejects_unreduced(self):
        with pytest.raises(ValueError):
            Word(2, (1, -1))

    @given(raw_letters(3, 30), st.integers(0, 2**32))
    def test_confluent(self, raw, seed):
        assert reduce(raw, 3).letters == random_order_reduce(raw, random.Random(seed))

    @given(raw_letters(3, 30))
    def test_idempotent_and_parity(self, raw):
        w = reduce(raw, 3)
        assert reduce(w.letters, 3) == w
        assert (len(raw) - len(w)) % 2 == 0


class TestConcatInvert:
    def test_examples(self):
        assert concat(W("x1"), W("x1^-1")) == identity(2)
        assert concat(W("x1 x2"), W("x2^-1 x1")) == W("x1^2")
        assert concat(W("x1^2 x2^3"), identity(2)) == W("x1^2 x2^3")

    def test_rank_mismatch(self):
        with pytest.raises(ValueError):
            concat(W("x1", 1), W("x1", 2))

    def test_invert_examples(self):
        assert invert(W("x1 x2")) == W("x2^-1 x1^-1")
        assert invert(identity(2)) == identity(2)
        assert invert(W("x1 x2 x1^-1 x2^-1")) == W("x2 x1 x2^-1 x1^-1")

    @given(word_pairs())
    def test_length_bounds(self, pair):
        u, v = pair
        uv = concat(u, v)
        assert len(uv) <= len(u) + len(v)
        assert (len(u) + len(v) - len(uv)) % 2 == 0

    @given(word_pairs())
    def test_inverse_is_antihomomorphism(self, pair):
        u, v = pair
        assert invert(concat(u, v)) == concat(invert(v), invert(u))

    @given(words(3))
    def test_inverse_involution(self, w):
        assert invert(invert(w)) == w
        assert concat(w, invert(w)) == identity(3)
        assert len(invert(w)) == len(w)

    @given(words(2, 8), st.integers(-4, 4))
    def test_power_matches_repeated_product(self, w, k):
        expected = identity(2)
        base = w if k >= 0 else invert(w)
        for _ in range(abs(k)):
            expected = concat(expected, base)
        assert power(w, k) == expected


class TestExponentVector:
    def test_examples(self):
        assert exponent_vector(W("x1^2 x2^3")) == (2, 3)
        assert exponent_vector(W("x1 x2 x1^-1 x2^-1")) == (0, 0)
        # hand count: x1 +2 +1, x2 +2 -1
        assert exponent_vector(W("x1^2 x2^2 x1 x2^-1")) == (3, 1)

    @given(word_pairs())
    def test_additive(self, pair):
        u, v = pair
        got = exponent_vector(concat(u, v))
        assert got == tuple(a + b for a, b in zip(exponent_vector(u), exponent_vector(v)))

    @given(words(3))
    def test_negated_by_inverse(self, w):
        assert exponent_vector(invert(w)) == tuple(-a for a in exponent_vector(w))

    @given(words(2), words(2))
    def test_conjugation_invariant(self, w, u):
        assert exponent_vector(concat(concat(u, w), invert(u))) == exponent_vector(w)


def test_palindromes():
    assert is_palindrome(W("x1 x2 x1"))
    assert not is_palindrome(W("x1 x2"))
    assert not is_palindrome(W("x1^2 x2^2 x1 x2^-1"))


class TestCyclicReduce:
    def test_examples(self):
        core, c = cyclic_reduce(W("x1 x2 x1^-1"))
        assert (core, c) == (W("x2"), W("x1"))
        core, c = cyclic_reduce(W("x1 x2"))
        assert (core, c) == (W("x1 x2"), identity(2))

    def test_nested_conjugator(self):
        # frozen from the recomposition check: w = c * core * c^-1, core cyclically reduced
        w = W("x2^-1 x1 x2 x1^-1 x2")
        core, c = cyclic_reduce(w)
        assert core == W("x2")
        assert c == W("x2^-1 x1")

    @given(words(3, 16))
    def test_recomposition(self, w):
        core, c = cyclic_reduce(w)
        assert concat(c, concat(core, invert(c))) == w
        if len(core) > 1:
            assert core.letters[0] != -core.letters[-1]
        assert core.is_identity == w.is_identity


class TestEmbed:
    def test_examples(self):
        assert embed(W("x1 x2"), 3) == Word(3, (1, 2))
        assert embed(identity(1), 5) == identity(5)
        assert exponent_vector(embed(W("x1^2 x2^3"), 4)) == (2, 3, 0, 0)

    def test_shrinking_rejected(self):
        with pytest.raises(ValueError):
            embed(W("x1", 2), 1)

    def test_effective_form(self):
        eff, used = effective_form(W("x3^2 x1^-1", 4))
        assert used == [1, 3]
        assert eff == Word(2, (2, 2, -1))


class TestParse:
    def test_indexed(self):
        assert parse("x1 x2 x1^-1 x2^-1", 2).letters == (1, 2, -1, -2)
        assert parse("x1^2 x2^3", 2).letters == (1, 1, 2, 2, 2)

    def test_compact(self):
        assert parse("a B a b", 2).letters == (1, -2, 1, 2)
        assert parse("aBab", 2).letters == (1, -2, 1, 2)

    def test_identity_forms(self):
        for text in ("", "e", "1", "  "):
            assert parse(text, 2) == identity(2)

    def test_reduces(self):
        assert parse("x1 x2 x2^-1", 2) == W("x1")

    @pytest.mark.parametrize("text,pos", [("x1 y2", 3), ("x1^0", 2), ("x1 x2^", 5), ("x0", 0)])
    def test_syntax_errors(self, text, pos):
        with pytest.raises(ParseError) as exc:
            parse(text, 2)
        assert exc.value.position == pos

    def test_rank_errors(self):
        with pytest.raises(ParseError):
            parse("x3", 2)
        with pytest.raises(ParseError):
            parse("abc", 2)

    def test_infer_rank(self):
        assert infer_rank("x1 x12^-1") == 12
        assert infer_rank("aBc") == 3

    @given(words(4))
    def test_round_trip(self, w):
        assert parse(format_word(w), w.rank) == w
        assert parse(format_word(w, "compact"), w.rank) == w


@pytest.mark.parametrize("n", range(1, 8))
def test_census_count(n):
    ws = list(iter_reduced_words(2, n))
    assert len(ws) == len(set(ws)) == 4 * 3 ** (n - 1) == count_reduced_words(2, n)
    assert all(len(w) == n for w in ws)


def test_random_word_is_reduced_and_exact():
    rng = random.Random(3)
    for n in range(12):
        assert len(random_word(3, n, rng)) == n


def test_commutator_conventions():
    x, y = generator(1, 2), generator(2, 2)
    assert commutator(x, y) == W("x1 x2 x1^-1 x2^-1")
    assert commutator(x, y, "alt") == W("x1^-1 x2^-1 x1 x2")
