import itertools

import pytest

from lucbat import (
    IndexOutOfRange,
    InvalidPairCount,
    LineKind,
    RuleTableError,
    ToneClass,
    build_rhyme_chains,
    expected_tone,
    parse_rule_table,
    parse_syllable,
    rhymes_with,
)


class TestRhymeChains:
    def test_single_pair(self):
        chains = build_rhyme_chains(1)
        assert [c.positions for c in chains] == [((1, 6), (2, 6))]
        assert sum(len(c) for c in chains) == 3 * 1 - 1

    def test_quatrain(self):
        chains = build_rhyme_chains(2)
        assert [c.positions for c in chains] == [
            ((1, 6), (2, 6)),
            ((2, 8), (3, 6), (4, 6)),
        ]
        assert sum(len(c) for c in chains) == 3 * 2 - 1

    def test_three_pairs(self):
        # hand enumeration: word 6 of lines 1-2; then word 8 of each
        # eight-line chains into word 6 of the next two lines
        chains = build_rhyme_chains(3)
        assert [c.positions for c in chains] == [
            ((1, 6), (2, 6)),
            ((2, 8), (3, 6), (4, 6)),
            ((4, 8), (5, 6), (6, 6)),
        ]
        assert sum(len(c) for c in chains) == 8

    @pytest.mark.parametrize("n", range(1, 51))
    def test_count_law(self, n):
        chains = build_rhyme_chains(n)
        positions = [p for c in chains for p in c.positions]
        assert len(positions) == 3 * n - 1
        assert len(set(positions)) == len(positions)  # pairwise disjoint
        # the final eight-line's 8th word is free
        assert (2 * n, 8) not in positions

    @pytest.mark.parametrize("bad", [0, -1, -100])
    def test_invalid_pair_count(self, bad):
        with pytest.raises(InvalidPairCount):
            build_rhyme_chains(bad)

    def test_anchors(self):
        chains = build_rhyme_chains(3)
        assert [c.anchor for c in chains] == [(1, 6), (2, 8), (4, 8)]
        assert chains[1].members == ((3, 6), (4, 6))


class TestToneTemplate:
    def test_template_positions(self):
        assert expected_tone(LineKind.SIX, 2) is ToneClass.LEVEL
        assert expected_tone(LineKind.SIX, 4) is ToneClass.OBLIQUE
        assert expected_tone(LineKind.SIX, 6) is ToneClass.LEVEL
        assert expected_tone(LineKind.EIGHT, 8) is ToneClass.LEVEL

    @pytest.mark.parametrize("word", [1, 3, 5])
    def test_odd_positions_unconstrained(self, word):
        assert expected_tone(LineKind.SIX, word) is None
        assert expected_tone(LineKind.EIGHT, word) is None

    def test_eight_only_position(self):
        assert expected_tone(LineKind.EIGHT, 7) is None
        with pytest.raises(IndexOutOfRange):
            expected_tone(LineKind.SIX, 7)
        with pytest.raises(IndexOutOfRange):
            expected_tone(LineKind.EIGHT, 9)
        with pytest.raises(IndexOutOfRange):
            expected_tone(LineKind.SIX, 0)

    def test_checked_positions_per_pair(self):
        six = [w for w in range(1, 7) if expected_tone(LineKind.SIX, w)]
        eight = [w for w in range(1, 9) if expected_tone(LineKind.EIGHT, w)]
        assert len(six) + len(eight) == 7


class TestRhymesWith:
    @pytest.mark.parametrize(
        "a,b,expect",
        [
            ("ta", "là", True),      # identical rime "a"
            ("nhau", "dâu", True),   # near group {au, âu}
            ("ta", "lòng", False),   # "a" vs "ong"
            ("quý", "thúy", True),   # glide folding: y vs uy
            ("đèn", "truyền", True),
            ("trường", "lòng", True),
        ],
    )
    def test_pairs(self, table, a, b, expect):
        assert rhymes_with(parse_syllable(a), parse_syllable(b), table) is expect

    def test_tone_ignored(self, table):
        assert rhymes_with(parse_syllable("ta"), parse_syllable("tạ"), table)

    def test_equivalence_relation(self, table):
        words = ["ta", "là", "nhau", "dâu", "đau", "lòng", "trông", "xa", "người", "đời"]
        syllables = [parse_syllable(w) for w in words]
        for s in syllables:
            assert rhymes_with(s, s, table)  # reflexive
        for a, b in itertools.permutations(syllables, 2):
            assert rhymes_with(a, b, table) == rhymes_with(b, a, table)  # symmetric
        for a, b, c in itertools.permutations(syllables, 3):
            if rhymes_with(a, b, table) and rhymes_with(b, c, table):
                assert rhymes_with(a, c, table)  # transitive


class TestRuleTableLoading:
    def test_groups_are_partition(self, table):
        seen = set()
        for group in table.groups:
            assert not (group & seen)
            seen |= group

    def test_parse_simple(self):
        t = parse_rule_table("# version: 9\nau âu\nai ay ây\n")
        assert t.version == "9"
        assert t.compatible("au", "âu")
        assert not t.compatible("au", "ai")

    def test_unknown_rimes_need_exact_match(self):
        t = parse_rule_table("au âu\n")
        assert t.compatible("iêng", "iêng")
        assert not t.compatible("iêng", "ương")

    def test_partition_violation_rejected(self):
        with pytest.raises(RuleTableError):
            parse_rule_table("au âu\nâu ua\n")

    def test_duplicate_within_group_rejected(self):
        with pytest.raises(RuleTableError):
            parse_rule_table("au au\n")

    def test_invalid_rime_rejected(self):
        with pytest.raises(RuleTableError):
            parse_rule_table("au xâu\n")  # onset letter in a rime
        with pytest.raises(RuleTableError):
            parse_rule_table("àu âu\n")  # tone mark in a rime

    def test_inline_comments(self):
        t = parse_rule_table("au âu  # folk staple\n")
        assert t.compatible("au", "âu")

    def test_load_file(self, tmp_path):
        path = tmp_path / "rules.txt"
        path.write_text("# version: test\nom ôm ơm\n", encoding="utf-8")
        from lucbat import load_rule_table

        t = load_rule_table(str(path))
        assert t.version == "test"
        assert t.compatible("om", "ơm")
