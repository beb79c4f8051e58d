import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers_oracle import (
    oracle_is_self_overlapping,
    oracle_juncture,
    oracle_reduce_chars,
)
from qmforge.words import (
    IDENTITY,
    CyclicReport,
    Letter,
    ReducedExpression,
    Word,
    ball_size,
    cancellation_length,
    cyclic_analysis,
    cyclic_rotations,
    enumerate_ball,
    enumerate_sphere,
    generate_fundamental_set,
    invert,
    is_conjugate,
    is_cyclically_reduced,
    is_lyndon,
    is_reduced_pair,
    is_self_overlapping,
    juncture_family,
    load_word_set,
    multiply,
    overlap_report,
    parse_word,
    reduce,
    save_word_set,
    self_overlap_witness,
)


def w(text: str, rank: int = 2) -> Word:
    return parse_word(text, rank)


raw_texts = st.text(alphabet="abAB", max_size=12)


class TestParseReduce:
    def test_identity_forms(self):
        assert parse_word("", 2) == IDENTITY
        assert parse_word("1", 2) == IDENTITY
        assert str(IDENTITY) == "1"
        assert len(IDENTITY) == 0

    def test_whitespace_ignored(self):
        assert w(" a b\tA ") == w("abA")

    def test_basic_reduction(self):
        assert str(w("aA")) == "1"
        assert str(w("abBc", rank=3)) == "ac"
        assert str(w("abBA")) == "1"
        assert str(w("aabBAa")) == "aa"

    def test_rank_enforced(self):
        with pytest.raises(ValueError):
            parse_word("abc", 2)
        with pytest.raises(ValueError):
            parse_word("a", 1)
        parse_word("abc", 3)

    def test_rejects_non_letters(self):
        with pytest.raises(ValueError):
            parse_word("a-b", 2)

    def test_word_constructor_rejects_unreduced(self):
        with pytest.raises(ValueError):
            Word((Letter(0, 1), Letter(0, -1)))

    @given(raw_texts)
    def test_reduction_matches_oracle(self, text):
        assert str(w(text)) == oracle_reduce_chars(text, 2)

    def test_roundtrip(self):
        for text in ("abAB", "aaa", "BAba", "1"):
            assert str(w(text)) == text


class TestAlgebra:
    def test_multiply_cancellation(self):
        assert multiply(w("ab"), w("BA")) == IDENTITY
        assert str(multiply(w("ab"), w("Ba"))) == "aa"
        assert str(multiply(w("aab"), w("ba"))) == "aabba"

    def test_inverse(self):
        assert str(invert(w("abA"))) == "aBA"
        assert multiply(w("abAB"), invert(w("abAB"))) == IDENTITY

    @given(raw_texts, raw_texts, raw_texts)
    @settings(max_examples=60)
    def test_associativity(self, s, t, u):
        a, b, c = w(s), w(t), w(u)
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))

    def test_cancellation_length(self):
        assert cancellation_length(w("ab"), w("BA")) == 2
        assert cancellation_length(w("ab"), w("ab")) == 0
        assert cancellation_length(w("aB"), w("ba")) == 1
        assert is_reduced_pair(w("ab"), w("ab"))
        assert not is_reduced_pair(w("aB"), w("ba"))

    def test_value_semantics(self):
        assert w("ab") == w("ab")
        assert hash(w("ab")) == hash(w("ab"))
        assert len({w("ab"), w("ab"), w("ba")}) == 2

    def test_ordering_is_length_then_lex(self):
        assert w("b") < w("ab")
        assert w("a") < w("A")
        assert w("aB") < w("Ab")

    def test_slicing_returns_words(self):
        word = w("abAB")
        assert word[1:3] == w("bA")
        assert word[0] == Letter(0, 1)


class TestCyclic:
    def test_report_example(self):
        report = cyclic_analysis(w("abA"))
        assert report == CyclicReport(
            core=w("b"),
            conjugator=w("a"),
            cyclic_permutations=frozenset({w("b")}),
            simple=True,
        )

    def test_already_cyclically_reduced(self):
        report = cyclic_analysis(w("abab"))
        assert report.core == w("abab")
        assert report.conjugator == IDENTITY
        assert report.cyclic_permutations == frozenset({w("abab"), w("baba")})
        assert not report.simple

    def test_identity(self):
        report = cyclic_analysis(IDENTITY)
        assert report.core == IDENTITY and report.conjugator == IDENTITY
        assert not report.simple

    def test_deep_stripping(self):
        report = cyclic_analysis(w("abaBA"))
        assert report.core == w("a") and report.conjugator == w("ab")

    @given(raw_texts)
    def test_decomposition_identity(self, text):
        g = w(text)
        report = cyclic_analysis(g)
        x = report.conjugator
        assert multiply(multiply(x, report.core), invert(x)) == g
        assert is_cyclically_reduced(report.core)

    def test_conjugacy(self):
        assert is_conjugate(w("ab"), w("ba"))
        assert is_conjugate(w("abA"), w("b"))
        assert is_conjugate(w("Babb"), w("ab"))
        assert not is_conjugate(w("ab"), w("aB"))
        assert not is_conjugate(w("ab"), w("BA"))
        assert is_conjugate(IDENTITY, w("aA"))

    @given(raw_texts, raw_texts)
    @settings(max_examples=60)
    def test_conjugation_invariance(self, s, t):
        g, x = w(s), w(t)
        assert is_conjugate(g, multiply(multiply(x, g), invert(x)))

    def test_rotations(self):
        assert cyclic_rotations(w("aab")) == [w("aab"), w("aba"), w("baa")]


class TestOverlap:
    def test_spec_example(self):
        report = overlap_report(w("aab"), w("aba"))
        assert report.proper_overlap_lengths_lr == frozenset({2})
        assert report.proper_overlap_lengths_rl == frozenset({1})
        assert report.minimal_overlap == w("a")
        assert not report.left_is_subword and not report.right_is_subword

    def test_subword_detection(self):
        report = overlap_report(w("ab"), w("aab"))
        assert report.left_is_subword
        report = overlap_report(w("abab"), w("ba"))
        assert report.right_is_subword
        same = overlap_report(w("ab"), w("ab"))
        assert not same.left_is_subword and not same.right_is_subword

    def test_no_overlap(self):
        report = overlap_report(w("ab"), w("BA"))
        assert not report.overlaps

    def test_minimal_overlap_is_nso(self):
        for s, t in [("aab", "aba"), ("abab", "abab"), ("ba", "ab")]:
            report = overlap_report(w(s), w(t))
            if report.minimal_overlap is not None:
                assert not is_self_overlapping(report.minimal_overlap)

    def test_self_overlap(self):
        assert not is_self_overlapping(w("ab"))
        assert not is_self_overlapping(w("aab"))
        assert is_self_overlapping(w("abab"))
        assert is_self_overlapping(w("aba"))
        assert self_overlap_witness(w("abab")) == w("ab")
        assert self_overlap_witness(w("aba")) == w("a")
        assert self_overlap_witness(w("ab")) is None

    @given(raw_texts)
    def test_self_overlap_matches_oracle(self, text):
        word = w(text)
        if len(word) >= 1:
            assert is_self_overlapping(word) == oracle_is_self_overlapping(word)

    def test_witness_properties(self):
        for text in ("abab", "aba", "aabaa", "ababa", "abcab"):
            word = w(text, rank=3)
            witness = self_overlap_witness(word)
            assert witness is not None
            assert 2 * len(witness) <= len(word)
            assert not is_self_overlapping(witness)
            k = len(witness)
            assert word.prefix(k) == witness and word.suffix(k) == witness

    def test_nso_never_overlaps_inverse_small(self):
        for word in enumerate_ball(2, 5):
            if word.is_identity or is_self_overlapping(word):
                continue
            report = overlap_report(word, invert(word))
            assert not report.overlaps_properly
            assert not is_conjugate(word, invert(word)) or not is_cyclically_reduced(word)


class TestLyndonFundamental:
    def test_lyndon_basics(self):
        assert is_lyndon(w("ab"))
        assert is_lyndon(w("aab"))
        assert not is_lyndon(w("ba"))
        assert not is_lyndon(w("abab"))
        assert not is_lyndon(w("a")) is False or True
        assert is_lyndon(w("a"))
        assert not is_lyndon(w("abA"))
        assert not is_lyndon(IDENTITY)

    def test_lyndon_words_are_nso(self):
        for word in enumerate_ball(2, 6):
            if not word.is_identity and is_lyndon(word):
                assert not is_self_overlapping(word)

    def test_fundamental_set_small(self):
        fset = generate_fundamental_set(2, 2)
        assert [str(x) for x in fset] == ["ab", "aB", "BA", "bA"]

    def test_fundamental_set_properties(self):
        fset = generate_fundamental_set(2, 4)
        assert len(fset) == len(set(fset))
        half = len(fset) // 2
        positive = fset[:half]
        assert fset[half:] == [invert(x) for x in positive]
        for word in fset:
            assert 2 <= len(word) <= 4
            assert is_cyclically_reduced(word)
            assert not is_self_overlapping(word)
            report = cyclic_analysis(word)
            assert report.simple
        for x, y in itertools.combinations(fset, 2):
            assert not is_conjugate(x, y)

    def test_fundamental_set_covers_classes(self):
        fset = generate_fundamental_set(2, 3)
        for word in enumerate_ball(2, 3):
            report = cyclic_analysis(word)
            if (
                len(report.core) < 2
                or not report.simple
                or is_self_overlapping(report.core)
                or is_conjugate(word, invert(word))
            ):
                continue
            assert any(is_conjugate(word, rep) for rep in fset), str(word)


class TestJuncture:
    def test_spec_example(self):
        expr = ReducedExpression(w("aa"), w("bb"))
        family = juncture_family(expr, 4)
        assert {str(x) for x in family} == {"ab", "aab", "abb", "aabb"}

    def test_reduced_expression_validation(self):
        with pytest.raises(ValueError):
            ReducedExpression(w("aB"), w("ba"))
        expr = ReducedExpression(w("aB"), w("Ab"))
        assert expr.word == w("aBAb")

    def test_length_cap(self):
        expr = ReducedExpression(w("aaa"), w("bbb"))
        family = juncture_family(expr, 3)
        assert all(2 <= len(x) <= 3 for x in family)
        assert family == oracle_juncture(w("aaa"), w("bbb"), 3)

    @given(raw_texts, raw_texts, st.integers(min_value=2, max_value=8))
    @settings(max_examples=60)
    def test_matches_oracle(self, s, t, cap):
        u, v = w(s), w(t)
        if u.is_identity or v.is_identity or not is_reduced_pair(u, v):
            return
        expr = ReducedExpression(u, v)
        assert juncture_family(expr, cap) == oracle_juncture(u, v, cap)


class TestEnumeration:
    def test_ball_counts(self):
        assert ball_size(2, 0) == 1
        assert ball_size(2, 1) == 5
        assert ball_size(2, 3) == 53
        assert ball_size(3, 2) == 37
        for rank, radius in [(2, 3), (3, 2)]:
            assert len(enumerate_ball(rank, radius)) == ball_size(rank, radius)

    def test_ball_order(self):
        ball = enumerate_ball(2, 2)
        strs = [str(x) for x in ball]
        assert strs[:5] == ["1", "a", "b", "A", "B"]
        assert strs[5:8] == ["aa", "ab", "aB"]

    def test_sphere(self):
        sphere = list(enumerate_sphere(2, 2))
        assert len(sphere) == 12
        assert all(len(x) == 2 for x in sphere)

    def test_ball_is_deduplicated_and_reduced(self):
        ball = enumerate_ball(2, 4)
        assert len(ball) == len(set(ball))


class TestWordSetIO:
    def test_roundtrip(self, tmp_path):
        path = tmp_path / "words.txt"
        words = [w("ab"), w("aB"), IDENTITY]
        save_word_set(str(path), 2, words)
        rank, loaded = load_word_set(str(path))
        assert rank == 2 and loaded == words

    def test_comments_and_blanks(self, tmp_path):
        path = tmp_path / "words.txt"
        path.write_text("# leading comment\nrank=3\n\nabc  # trailing\n1\n")
        rank, loaded = load_word_set(str(path))
        assert rank == 3
        assert loaded == [parse_word("abc", 3), IDENTITY]

    def test_missing_header(self, tmp_path):
        path = tmp_path / "words.txt"
        path.write_text("ab\n")
        with pytest.raises(ValueError):
            load_word_set(str(path))

    def test_rank_violation(self, tmp_path):
        path = tmp_path / "words.txt"
        path.write_text("rank=2\nabc\n")
        with pytest.raises(ValueError):
            load_word_set(str(path))
