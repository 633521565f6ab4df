from itertools import groupby, product

import pytest
from hypothesis import given, settings, strategies as st

from graystruct.graylist import (
    bfs_list,
    build_list,
    format_word,
    hamming,
    is_valid_word,
    iter_advance,
    iter_bfs,
    iter_gray,
    iter_init,
    parse_word,
)
from graystruct.rules import Label, NotStableError, builtin, resolve_builtin

STABLE = ["catalan", "odd_fibonacci", "t_ary(3)", "omega_r(3)", "schroder_s", "grand_dyck", "factorial_p"]

CATALAN_L4 = ("2222 2223 2233 2234 2232 2332 2334 2333 2343 2344 2345 2342 2322 2323").split()
T_ARY3_L3 = "333 335 334 354 355 356 357 353 343 346 345 344".split()
GRAND_DYCK_L3 = ["2,3#1,3#1", "2,3#1,4", "2,3#1,3#2", "2,3#2,3#2", "2,3#2,4", "2,3#2,3#1"]
# colors normalized: a value that occurs once in its production is written bare
SCHRODER_L3 = [
    "3,3,3", "3,3,4#2", "3,3,4#1", "3,4#2,4", "3,4#2,5#1", "3,4#2,5#2",
    "3,4#2,3", "3,4#1,3", "3,4#1,5#2", "3,4#1,5#1", "3,4#1,4",
]


def compact(words):
    return [format_word(w, compact=True) for w in words]


def tokens(words):
    return [format_word(w) for w in words]


def brute_force(rule, n):
    """Level-order words by filtering every candidate tuple through the productions."""
    words = [(rule.axiom,)]
    for _ in range(n - 1):
        alphabet = sorted({c for w in words for c in rule.children(w[-1].value)})
        words = [w + (c,) for w, c in product(words, alphabet) if c in rule.children(w[-1].value)]
    return words


class TestSerialization:
    def test_round_trip(self):
        w = (Label(2), Label(3, 1), Label(14))
        assert format_word(w) == "2,3#1,14"
        assert parse_word("2,3#1,14") == w
        assert parse_word("2334") == tuple(Label(v) for v in (2, 3, 3, 4))
        assert parse_word("7") == (Label(7),)

    def test_compact_needs_plain_digits(self):
        with pytest.raises(ValueError):
            format_word((Label(3, 1),), compact=True)
        with pytest.raises(ValueError):
            format_word((Label(12),), compact=True)

    def test_hamming(self):
        assert hamming(parse_word("2234"), parse_word("2232")) == 1
        assert hamming(parse_word("3,4#1,4"), parse_word("3,4,4")) == 0
        assert hamming(parse_word("3,4#1"), parse_word("3,4#2")) == 1
        with pytest.raises(ValueError):
            hamming(parse_word("22"), parse_word("222"))


class TestGolden:
    def test_catalan_l3(self):
        assert compact(build_list(builtin("catalan"), 3)) == ["222", "223", "233", "234", "232"]

    def test_catalan_l4(self):
        assert compact(build_list(builtin("catalan"), 4)) == CATALAN_L4

    def test_t_ary_l3(self):
        assert compact(build_list(builtin("t_ary", t=3), 3)) == T_ARY3_L3

    def test_grand_dyck_l3(self):
        assert tokens(build_list(builtin("grand_dyck"), 3)) == GRAND_DYCK_L3

    def test_schroder_l3(self):
        assert tokens(build_list(builtin("schroder_s"), 3)) == SCHRODER_L3

    @pytest.mark.parametrize(
        "name,n,golden",
        [("catalan", 4, CATALAN_L4), ("t_ary(3)", 3, T_ARY3_L3)],
    )
    def test_iterator_reproduces_compact_goldens(self, name, n, golden):
        assert compact(iter_gray(resolve_builtin(name), n)) == golden

    @pytest.mark.parametrize("name,golden", [("grand_dyck", GRAND_DYCK_L3), ("schroder_s", SCHRODER_L3)])
    def test_iterator_reproduces_colored_goldens(self, name, golden):
        assert tokens(iter_gray(builtin(name), 3)) == golden


class TestIterator:
    def test_first_word(self):
        assert compact([iter_init(builtin("catalan"), 4).word]) == ["2222"]
        assert format_word(iter_init(builtin("grand_dyck"), 3).word) == "2,3#1,3#1"

    def test_single_word_list(self):
        for name in STABLE:
            rule = resolve_builtin(name)
            state = iter_init(rule, 1)
            assert state.word == (rule.axiom,)
            assert iter_advance(state) is None
            assert state.finished

    def test_advance_after_finish_raises(self):
        state = iter_init(builtin("catalan"), 2)
        while iter_advance(state) is not None:
            pass
        with pytest.raises(RuntimeError):
            iter_advance(state)

    def _advance_from(self, text):
        state = iter_init(builtin("catalan"), len(text))
        while format_word(state.word, compact=True) != text:
            assert iter_advance(state) is not None
        return iter_advance(state), format_word(state.word, compact=True)

    def test_change_reports(self):
        change, word = self._advance_from("2223")
        assert (change.position, change.old, change.new, word) == (3, Label(2), Label(3), "2233")
        change, word = self._advance_from("2234")
        assert (change.position, change.old, change.new, word) == (4, Label(4), Label(2), "2232")

    def test_catalan_six_passes_through_234565(self):
        words = compact(iter_gray(builtin("catalan"), 6))
        assert len(words) == len(set(words)) == 132
        assert "234565" in words
        ws = [parse_word(w) for w in words]
        assert all(hamming(a, b) == 1 for a, b in zip(ws, ws[1:]))

    def test_unstable_rule_refused(self):
        with pytest.raises(NotStableError) as info:
            iter_init(builtin("motzkin"), 3)
        assert info.value.refusal.witness == (Label(1),)
        with pytest.raises(NotStableError):
            build_list(builtin("fibonacci"), 3)

    def test_bad_length(self):
        with pytest.raises(ValueError):
            build_list(builtin("catalan"), 0)

    @pytest.mark.parametrize("name", STABLE)
    def test_constant_work_per_step(self, name):
        state = iter_init(resolve_builtin(name), 6)
        for _ in state:
            assert state.steps == 0 or state.last_digits_changed == 1
            assert state.last_slot_touches <= 7
        c = state.counters
        assert c["digits_changed_min"] == c["digits_changed_max"] == 1
        assert c["slot_touches_max"] <= 7


class TestLevelOrder:
    def test_catalan_l4(self):
        assert compact(bfs_list(builtin("catalan"), 4)) == (
            "2222 2223 2232 2233 2234 2322 2323 2332 2333 2334 2342 2343 2344 2345".split()
        )

    def test_single(self):
        assert compact(bfs_list(builtin("catalan"), 1)) == ["2"]

    def test_motzkin_counts(self):
        motzkin = [1, 1, 2, 4, 9, 21, 51]
        # words of length n are counted by m_{n-1}
        assert [len(bfs_list(builtin("motzkin"), n)) for n in range(1, 8)] == motzkin

    @pytest.mark.parametrize("name", STABLE + ["fibonacci", "motzkin", "factorial_naive"])
    def test_matches_brute_force(self, name):
        rule = resolve_builtin(name)
        for n in range(1, 5):
            assert sorted(bfs_list(rule, n)) == sorted(brute_force(rule, n))
            assert all(is_valid_word(rule, w) for w in iter_bfs(rule, n))


class TestStructure:
    @pytest.mark.parametrize("name", STABLE)
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_prefix_recursion(self, name, n):
        """Dropping the last digit and merging repeats gives the previous list."""
        rule = resolve_builtin(name)
        prefixes = [k for k, _ in groupby(w[:-1] for w in build_list(rule, n))]
        assert prefixes == build_list(rule, n - 1)

    @pytest.mark.parametrize("name", STABLE)
    def test_sublists_join_at_distance_one(self, name):
        rule = resolve_builtin(name)
        words = build_list(rule, 5)
        blocks = [list(g) for _, g in groupby(words, key=lambda w: w[:-1])]
        for a, b in zip(blocks, blocks[1:]):
            assert a[-1][-1].value == b[0][-1].value
            assert hamming(a[-1], b[0]) == 1

    @pytest.mark.parametrize("name", STABLE)
    def test_valid_distinct_complete(self, name):
        rule = resolve_builtin(name)
        for n in range(1, 6):
            words = build_list(rule, n)
            assert all(is_valid_word(rule, w) for w in words)
            assert set(words) == set(bfs_list(rule, n))
            assert len(words) == len(set(words))

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from(STABLE), st.integers(1, 6), st.data())
    def test_iterator_matches_build_at_random_index(self, name, n, data):
        rule = resolve_builtin(name)
        words = build_list(rule, n)
        idx = data.draw(st.integers(0, len(words) - 1))
        state = iter_init(rule, n)
        for _ in range(idx):
            iter_advance(state)
        assert state.word == words[idx]
