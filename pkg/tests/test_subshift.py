import pytest

from groupoid_growth.subshift import LanguageError, build_language, recurrence_check
from groupoid_growth.words import (
    Alphabet,
    ExplicitSource,
    SubstitutionSource,
    golden_sturmian,
    thue_morse,
)


def constant_source():
    return SubstitutionSource({0: (0,)}, 0, Alphabet(1))


class TestBuildLanguage:
    def test_constant(self):
        lang = build_language(constant_source(), n_max=6, prefix_budget=64)
        assert [lang.complexity(n) for n in range(7)] == [1] * 7

    def test_golden_p5(self):
        lang = build_language(golden_sturmian(), n_max=5, prefix_budget=4096)
        assert lang.complexity(5) == 6

    def test_thue_morse_p3(self):
        lang = build_language(thue_morse(), n_max=3, prefix_budget=4096)
        assert lang.complexity(3) == 6
        # Independent oracle: brute-force window scan of a long prefix.
        prefix = thue_morse().prefix(64)
        factors = {prefix[i : i + 3] for i in range(len(prefix) - 2)}
        assert set(lang.factors[3]) == factors == {
            bytes(t) for t in [(0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 0)]
        }

    def test_full_shift_window_count(self):
        word = []
        for v in range(16):  # de-Bruijn-ish cover: concatenate all 4-bit blocks
            word.extend((v >> 3 & 1, v >> 2 & 1, v >> 1 & 1, v & 1))
        lang = build_language(ExplicitSource(tuple(word), Alphabet(2)), n_max=4, prefix_budget=64)
        # Not every 4-word occurs in this particular explicit word, but
        # complexity is bounded by 2^4 and all 1-letter factors appear.
        assert lang.complexity(1) == 2
        assert lang.complexity(4) <= 16

    def test_budget_validation(self):
        with pytest.raises(LanguageError):
            build_language(golden_sturmian(), n_max=10, prefix_budget=5)

    def test_monotone_complexity(self):
        lang = build_language(golden_sturmian(), n_max=20, prefix_budget=4096)
        ps = [lang.complexity(n) for n in range(1, 21)]
        assert all(a <= b for a, b in zip(ps, ps[1:]))

    def test_factor_sets_sorted(self):
        lang = build_language(thue_morse(), n_max=6, prefix_budget=2048)
        for bucket in lang.factors:
            assert bucket == sorted(bucket)

    def test_extendability_reported(self):
        lang = build_language(golden_sturmian(), n_max=10, prefix_budget=4096)
        assert lang.extendable_up_to == 10


class TestComplexityQueries:
    def test_out_of_range(self):
        lang = build_language(golden_sturmian(), n_max=5, prefix_budget=1024)
        with pytest.raises(LanguageError):
            lang.complexity(6)

    def test_sturmian_range(self):
        lang = build_language(golden_sturmian(), n_max=50, prefix_budget=30_000)
        assert all(lang.complexity(n) == n + 1 for n in range(1, 51))

    def test_fibonacci_substitution_equals_golden(self):
        sub = SubstitutionSource({0: (0, 1), 1: (0,)}, 0, Alphabet(2))
        a = build_language(sub, n_max=50, prefix_budget=30_000)
        b = build_language(golden_sturmian(), n_max=50, prefix_budget=30_000)
        assert [a.complexity(n) for n in range(51)] == [b.complexity(n) for n in range(51)]


class TestDeltaFormula:
    def test_sturmian_values(self):
        lang = build_language(golden_sturmian(), n_max=10, prefix_budget=4096)
        assert lang.delta_formula(1) == 3
        assert lang.delta_formula(5) == 11

    def test_constant(self):
        lang = build_language(constant_source(), n_max=10, prefix_budget=64)
        assert all(lang.delta_formula(r) == 1 for r in range(6))

    def test_range_check(self):
        lang = build_language(golden_sturmian(), n_max=10, prefix_budget=4096)
        with pytest.raises(LanguageError):
            lang.delta_formula(6)


class TestRecurrence:
    def test_constant_true(self):
        lang = build_language(constant_source(), n_max=4, prefix_budget=128)
        assert recurrence_check(lang, constant_source(), 2, 1)

    def test_golden_gap(self):
        lang = build_language(golden_sturmian(), n_max=5, prefix_budget=4096)
        assert recurrence_check(lang, golden_sturmian(), 3, 13)

    def test_non_recurrent_explicit(self):
        src = ExplicitSource(tuple([0] * 30 + [1]), Alphabet(2))
        lang = build_language(src, n_max=1, prefix_budget=64)
        assert not recurrence_check(lang, src, 1, 3)
