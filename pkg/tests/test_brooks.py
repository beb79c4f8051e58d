import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers_oracle import oracle_max_disjoint, oracle_occurrences
from qmforge.brooks import (
    CyclicWord,
    count_big,
    count_small,
    eval_brooks,
    eval_homogenized_brooks,
    occurrence_positions,
)
from qmforge.words import (
    IDENTITY,
    ReducedExpression,
    Word,
    enumerate_ball,
    invert,
    is_reduced_pair,
    is_self_overlapping,
    juncture_family,
    multiply,
    parse_word,
)


def w(text: str) -> Word:
    return parse_word(text, 2)


def d1(phi, g: Word, h: Word) -> int:
    return phi(g) + phi(h) - phi(multiply(g, h))


def nonidentity(words):
    return [x for x in words if not x.is_identity]


def nso_patterns(max_len: int) -> list[Word]:
    return [
        x
        for x in nonidentity(enumerate_ball(2, max_len))
        if not is_self_overlapping(x)
    ]


word_texts = st.text(alphabet="abAB", max_size=10)
pattern_texts = st.text(alphabet="abAB", min_size=1, max_size=4)


class TestCounting:
    def test_count_big_examples(self):
        assert count_big(w("abab"), w("ababab")) == 2
        assert count_big(w("ab"), IDENTITY) == 0
        assert count_big(w("a"), w("aaa")) == 3
        assert count_big(w("ab"), w("ababab")) == 3

    def test_count_small_examples(self):
        assert count_small(w("abab"), w("ababab")) == 1
        for text in ("ab", "aab", "abAB"):
            assert count_small(w(text), w(text)) == 1
        assert count_small(w("a"), w("aaa")) == 3

    def test_empty_pattern_rejected(self):
        for fn in (count_big, count_small, occurrence_positions):
            with pytest.raises(ValueError):
                fn(IDENTITY, w("ab"))

    def test_positions_are_exact_matches(self):
        host = w("ababab")
        assert occurrence_positions(w("ab"), host) == (0, 2, 4)
        assert occurrence_positions(w("ba"), host) == (1, 3)
        assert occurrence_positions(w("BA"), host) == ()

    @given(pattern_texts, word_texts)
    @settings(max_examples=150)
    def test_occurrences_match_oracle(self, p, h):
        pattern, host = w(p), w(h)
        if pattern.is_identity:
            return
        assert occurrence_positions(pattern, host) == tuple(
            oracle_occurrences(pattern, host)
        )

    @given(pattern_texts, word_texts)
    @settings(max_examples=150)
    def test_greedy_disjoint_matches_bruteforce(self, p, h):
        pattern, host = w(p), w(h)
        if pattern.is_identity:
            return
        assert count_small(pattern, host) == oracle_max_disjoint(pattern, host)

    def test_greedy_exhaustive_small(self):
        patterns = nonidentity(enumerate_ball(2, 3))
        for pattern in patterns:
            for host in enumerate_ball(2, 5):
                assert count_small(pattern, host) == oracle_max_disjoint(pattern, host)


class TestSignedCounts:
    def test_worked_values(self):
        g = w("ababab")
        assert eval_brooks("big", w("ab"), g) == 3
        assert eval_brooks("small", w("ab"), g) == 3
        assert eval_brooks("big", w("abab"), g) == 2
        assert eval_brooks("small", w("abab"), g) == 1

        g2 = w("aababbABABABAB")
        assert eval_brooks("big", w("ab"), g2) == -1
        assert eval_brooks("big", w("abab"), g2) == -1
        assert eval_brooks("small", w("abab"), g2) == 0

    def test_kind_validated(self):
        with pytest.raises(ValueError):
            eval_brooks("medium", w("ab"), w("ab"))

    def test_alternating_exhaustive(self):
        patterns = nonidentity(enumerate_ball(2, 3))
        hosts = enumerate_ball(2, 6)
        for pattern in patterns:
            for g in hosts:
                value = eval_brooks("big", pattern, g)
                assert eval_brooks("big", pattern, invert(g)) == -value

    def test_pattern_inversion_negates(self):
        for kind in ("big", "small"):
            for p in ("ab", "aab", "abAB"):
                for h in ("ababab", "aababbABABABAB", "BAbaBA"):
                    assert eval_brooks(kind, invert(w(p)), w(h)) == -eval_brooks(
                        kind, w(p), w(h)
                    )

    def test_nso_patterns_big_equals_small(self):
        patterns = nso_patterns(4)
        for pattern in patterns:
            inverse = invert(pattern)
            for host in enumerate_ball(2, 6):
                assert count_big(pattern, host) == count_small(pattern, host)
                assert count_big(inverse, host) == count_small(inverse, host)


class TestCoboundary:
    def test_small_brooks_coboundary_range_on_reduced_pairs(self):
        ball = enumerate_ball(2, 3)
        for pattern in nso_patterns(3):
            phi = lambda g: eval_brooks("small", pattern, g)
            for g in ball:
                for h in ball:
                    if is_reduced_pair(g, h):
                        assert d1(phi, g, h) in (-1, 0, 1)

    def test_small_brooks_defect_three_on_all_pairs(self):
        ball = enumerate_ball(2, 3)
        for pattern in nso_patterns(3):
            phi = lambda g: eval_brooks("small", pattern, g)
            for g in ball:
                for h in ball:
                    assert abs(d1(phi, g, h)) <= 3

    def test_juncture_formula_small_scale(self):
        ball = nonidentity(enumerate_ball(2, 3))
        for pattern in nso_patterns(3):
            inverse = invert(pattern)
            phi = lambda g: eval_brooks("small", pattern, g)
            for g in ball:
                for h in ball:
                    if not is_reduced_pair(g, h):
                        continue
                    family = juncture_family(
                        ReducedExpression(g, h), len(pattern)
                    )
                    expected = -(pattern in family) + (inverse in family)
                    assert d1(phi, g, h) == expected

    def test_power_witnesses(self):
        for n in range(2, 7):
            pattern = w("a" * n)
            g = w("a" * n)
            phi = lambda x: eval_brooks("big", pattern, x)
            assert d1(phi, g, g) == 1 - n

    def test_small_brooks_locality_failure(self):
        pattern = w("abab")
        phi = lambda x: eval_brooks("small", pattern, x)
        for n in range(1, 4):
            even = w("ab" * (2 * n))
            odd = w("ab" * (2 * n + 1))
            assert d1(phi, even, even) == 0
            assert d1(phi, odd, odd) == -1

    def test_big_coboundary_bound_small_scale(self):
        ball = enumerate_ball(2, 3)
        for pattern in nonidentity(enumerate_ball(2, 3)):
            phi = lambda g: eval_brooks("big", pattern, g)
            bound = len(pattern) - 1
            for g in ball:
                for h in ball:
                    if is_reduced_pair(g, h):
                        assert abs(d1(phi, g, h)) <= bound


class TestCyclicWord:
    def test_equality_up_to_rotation(self):
        assert CyclicWord(w("ab")) == CyclicWord(w("ba"))
        assert hash(CyclicWord(w("ab"))) == hash(CyclicWord(w("ba")))
        assert CyclicWord(w("ab")) != CyclicWord(w("aB"))
        assert CyclicWord(w("aab")) == CyclicWord(w("aba"))

    def test_requires_cyclically_reduced(self):
        with pytest.raises(ValueError):
            CyclicWord(w("abA"))

    def test_count(self):
        assert CyclicWord(w("ba")).count(w("ab")) == 1
        assert CyclicWord(w("ab")).count(w("ab")) == 1
        assert CyclicWord(w("abab")).count(w("ab")) == 2
        assert CyclicWord(w("ab")).count(w("abab")) == 0
        assert CyclicWord(IDENTITY).count(w("a")) == 0
        assert CyclicWord(w("aaa")).count(w("a")) == 3


class TestHomogenized:
    def test_basic_values(self):
        assert eval_homogenized_brooks(w("ab"), w("ba")) == 1
        assert eval_homogenized_brooks(w("ab"), w("ab")) == 1
        assert eval_homogenized_brooks(w("ab"), w("ababab")) == 3
        assert eval_homogenized_brooks(w("ab"), w("BA")) == -1
        assert eval_homogenized_brooks(w("aab"), w("ab")) == 0

    def test_rejects_self_overlapping_pattern(self):
        with pytest.raises(ValueError):
            eval_homogenized_brooks(w("abab"), w("abab"))
        with pytest.raises(ValueError):
            eval_homogenized_brooks(IDENTITY, w("ab"))

    def test_alternating(self):
        for pattern in nso_patterns(3):
            for g in enumerate_ball(2, 4):
                assert eval_homogenized_brooks(pattern, invert(g)) == -(
                    eval_homogenized_brooks(pattern, g)
                )

    def test_conjugacy_invariance(self):
        patterns = nso_patterns(3)
        hosts = enumerate_ball(2, 4)
        conjugators = enumerate_ball(2, 2)
        for pattern in patterns:
            base = {g: eval_homogenized_brooks(pattern, g) for g in hosts}
            for g in hosts:
                for x in conjugators:
                    conjugate = multiply(multiply(x, g), invert(x))
                    assert eval_homogenized_brooks(pattern, conjugate) == base[g]

    def test_homogeneity_on_powers(self):
        for text in ("ab", "aab", "abAB", "ba", "aabb"):
            g = w(text)
            for pattern in nso_patterns(2):
                base = eval_homogenized_brooks(pattern, g)
                power = g
                for n in range(2, 5):
                    power = multiply(power, g)
                    assert eval_homogenized_brooks(pattern, power) == n * base

    def test_distance_to_small_brooks(self):
        ball3 = enumerate_ball(2, 3)
        hosts = enumerate_ball(2, 6)
        for pattern in nso_patterns(3):
            phi = lambda g: eval_brooks("small", pattern, g)
            certified = max(abs(d1(phi, g, h)) for g in ball3 for h in ball3)
            bound = 1 + 2 * certified
            for g in hosts:
                assert abs(eval_homogenized_brooks(pattern, g) - phi(g)) <= bound
