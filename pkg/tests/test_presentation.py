import random

import pytest

from hnnembed.presentation import (
    Presentation,
    best_piece_decomposition,
    check_cp,
    check_cprime,
    min_piece_decomposition,
    piece_stats,
    symmetrize,
)
from hnnembed.suffixes import match_table
from hnnembed.words import Word, exponent, random_cyclically_reduced_word


# Quadratic oracle: every occurrence pair compared letter by letter on
# doubled words, with the same appearance-class and cap rules.

def brute_table(words, include_inverses=True):
    periods = [len(w) // exponent(Word(w)) for w in words]
    occs = []
    orients = (1, -1) if include_inverses else (1,)
    for j, w in enumerate(words):
        for o in orients:
            lw = w if o == 1 else tuple(-x for x in reversed(w))
            for off in range(len(lw)):
                occs.append(((j, o, off % periods[j]), lw + lw, off, len(lw), j, o, off))
    per_off = [[0] * len(w) for w in words]
    per_max = [0] * len(words)
    for ka, da, offa, la, ja, oa, rawa in occs:
        for kb, db, offb, lb, jb, _ob, _rawb in occs:
            if ka == kb:
                continue
            cap = min(la, lb)
            matched = 0
            while matched < cap and da[offa + matched] == db[offb + matched]:
                matched += 1
            if oa == 1 and matched > per_off[ja][rawa]:
                per_off[ja][rawa] = matched
            if matched > per_max[ja]:
                per_max[ja] = matched
    return [tuple(r) for r in per_off], per_max


def dp_min_decomposition(row):
    n = len(row)
    if any(v == 0 for v in row):
        return None
    best = None
    for start in range(n):
        inf = 10**9
        dp = [inf] * (n + 1)
        dp[n] = 0
        for i in range(n - 1, -1, -1):
            limit = min(row[(start + i) % n], n - i)
            for j in range(1, limit + 1):
                if 1 + dp[i + j] < dp[i]:
                    dp[i] = 1 + dp[i + j]
        if best is None or dp[0] < best:
            best = dp[0]
    return best


def wordlists(*strs):
    # "1 2 -1" style shorthand for raw letter tuples
    return [tuple(int(t) for t in s.split()) for s in strs]


def test_presentation_validation():
    p = Presentation.from_strings("a b c", ["b c a b c b c"])
    assert p.rank == 3 and str(p) == "< a b c | b c a b c b c >"
    assert p.relator_names == ("r1",)
    with pytest.raises(ValueError):
        Presentation.from_strings("a b", ["a b a'"])  # not cyclically reduced
    with pytest.raises(ValueError):
        Presentation.from_strings("a b", [""])
    with pytest.raises(ValueError):
        Presentation.from_strings("a b", ["a b", "b a"], names=["r", "r"])


def test_symmetrize_bookkeeping():
    p = Presentation.from_strings("a b", ["a b"])
    entries = symmetrize(p)
    assert len(entries) == 4  # 2 * total length
    as_words = {e.word.letters for e in entries}
    assert as_words == {(1, 2), (2, 1), (-2, -1), (-1, -2)}
    p2 = Presentation.from_strings("a b c", ["a b c", "a b c c"])
    assert len(symmetrize(p2)) == 2 * (3 + 4)
    # Multiplicity retained even when rotations coincide as words.
    p3 = Presentation.from_strings("a", ["a a"])
    assert len(symmetrize(p3)) == 4


def test_no_piece_cases():
    # A single proper power: rotation-shifted occurrences are one appearance.
    rep = piece_stats([Word.of(1, 2, 1, 2)])
    assert rep.per_offset == ((0, 0, 0, 0),)
    assert rep.max_piece == (0,)
    # One letter against its inverse only.
    rep = piece_stats([Word.of(1)])
    assert rep.max_piece == (0,)
    assert min_piece_decomposition(rep.per_offset[0]) is None


def test_commutator_pieces():
    rep = piece_stats([Word.of(1, 2, -1, -2)])
    assert rep.per_offset == ((1, 1, 1, 1),)
    assert rep.max_piece == (1,)
    assert min_piece_decomposition(rep.per_offset[0]) == 4
    cp = check_cp([Word.of(1, 2, -1, -2)], 4)
    assert cp.holds and cp.min_pieces == (4,) and not cp.witnesses
    cp5 = check_cp([Word.of(1, 2, -1, -2)], 5)
    assert not cp5.holds
    assert cp5.witnesses[0].segments == (1, 1, 1, 1)
    assert check_cprime([Word.of(1, 2, -1, -2)], 1, 3).holds
    assert not check_cprime([Word.of(1, 2, -1, -2)], 1, 4).holds


def test_duplicate_relators_are_pieces():
    rep = piece_stats([Word.of(1, 2), Word.of(1, 2)])
    assert rep.max_piece == (2, 2)
    assert min_piece_decomposition(rep.per_offset[0]) == 1
    assert not check_cp([Word.of(1, 2), Word.of(1, 2)], 2).holds


def test_shared_subword_across_relators():
    # abc inside abcc: the whole first relator is a piece.
    p = Presentation.from_strings("a b c", ["a b c", "a b c c"])
    rep = piece_stats(p)
    assert rep.max_piece == (3, 3)
    assert min_piece_decomposition(rep.per_offset[0]) == 1
    assert not check_cp(p, 7).holds


def test_self_overlap_pieces():
    # b c a b c b c: bcbc occurs at offsets 3 and 5.
    p = Presentation.from_strings("a b c", ["b c a b c b c"])
    rep = piece_stats(p)
    assert rep.max_piece == (4,)
    assert rep.per_offset[0][3] == 4 and rep.per_offset[0][5] >= 2


def test_maximal_occurrences():
    rep = piece_stats([Word.of(1, 2, -1, -2)])
    occ = rep.maximal_occurrences()[0]
    assert occ == ((0, 1), (1, 1), (2, 1), (3, 1))


def test_precondition_errors():
    w = [Word.of(1, 2)]
    with pytest.raises(ValueError):
        check_cp(w, 1)
    with pytest.raises(ValueError):
        check_cprime(w, 1, 1)
    with pytest.raises(ValueError):
        check_cprime(w, 2, 1)
    with pytest.raises(ValueError):
        piece_stats([])


def test_match_table_vs_oracle_random():
    rng = random.Random(201)
    for trial in range(250):
        nwords = rng.randrange(1, 4)
        words = [
            random_cyclically_reduced_word(rng, rng.randrange(1, 4), rng.randrange(1, 9)).letters
            for _ in range(nwords)
        ]
        inv = rng.random() < 0.7
        got = match_table(words, include_inverses=inv)
        want_off, want_max = brute_table(words, include_inverses=inv)
        assert list(got.per_offset) == want_off, (words, inv)
        assert list(got.per_word_max) == want_max, (words, inv)


def test_match_table_handles_unreduced_words():
    # Quotient boundaries keep backtracks; the scan is literal.
    words = wordlists("-1 1 2 2 1", "2 2 1 1")
    got = match_table(words)
    want_off, want_max = brute_table(words)
    assert list(got.per_offset) == want_off
    assert list(got.per_word_max) == want_max


def test_greedy_matches_dp_random():
    rng = random.Random(202)
    for trial in range(250):
        nwords = rng.randrange(1, 4)
        words = [
            random_cyclically_reduced_word(rng, rng.randrange(1, 4), rng.randrange(1, 11)).letters
            for _ in range(nwords)
        ]
        rep = piece_stats([Word(w) for w in words])
        for row in rep.per_offset:
            greedy = min_piece_decomposition(row)
            assert greedy == dp_min_decomposition(row), (words, row)


def test_decomposition_witness_is_consistent():
    rng = random.Random(203)
    for trial in range(100):
        words = [random_cyclically_reduced_word(rng, 2, rng.randrange(2, 9)) for _ in range(2)]
        rep = piece_stats(words)
        for j, row in enumerate(rep.per_offset):
            best = best_piece_decomposition(row)
            if best is None:
                continue
            count, start, segs = best
            assert len(segs) == count
            assert sum(segs) == len(row)
            pos = start
            for s in segs:
                assert 1 <= s <= row[pos % len(row)]
                pos += s


def test_cprime_implies_cp():
    rng = random.Random(204)
    checked = 0
    for trial in range(400):
        words = [
            random_cyclically_reduced_word(rng, 3, rng.randrange(1, 11))
            for _ in range(rng.randrange(1, 4))
        ]
        if check_cprime(words, 1, 7).holds:
            checked += 1
            assert check_cp(words, 7).holds, words
    assert checked > 10  # the implication was actually exercised


def test_piece_subword_closure():
    # If a piece of length L starts at offset o, pieces of every shorter
    # length start there too, and a piece of length >= L-1 starts at o+1.
    rng = random.Random(205)
    for trial in range(150):
        words = [
            random_cyclically_reduced_word(rng, 2, rng.randrange(1, 9))
            for _ in range(rng.randrange(1, 3))
        ]
        rep = piece_stats(words)
        for row in rep.per_offset:
            n = len(row)
            for o in range(n):
                assert row[(o + 1) % n] >= row[o] - 1, (words, row)


def test_worst_ratio():
    rep = check_cprime([Word.of(1, 2, -1, -2), Word.of(1, 2), Word.of(1, 2)], 1, 2)
    j, piece, length = rep.worst()
    assert (piece, length) == (2, 2) and j in (1, 2)
    assert not rep.holds
