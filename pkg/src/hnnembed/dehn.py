"""Word problem and area accounting for metric small-cancellation presentations.

The solver repeatedly finds a stretch of the current cyclic word that covers
more than half of some symmetrized relator and swaps it for the shorter
complement.  Every swap strictly shrinks the word, so the loop terminates,
and for C'(1/6) presentations a word that reaches no swap at all is known to
be nontrivial.  Each run leaves a structured step log that an independent
replayer can verify exactly in the free group.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .presentation import Presentation, check_cprime
from .words import EMPTY, Word, cyclic_reduce, free_reduce, random_reduced_word

_MOD = (1 << 61) - 1
_BASE = 1_000_003

_POW: list[int] = [1]


def _pow(n: int) -> int:
    while len(_POW) <= n:
        _POW.append(_POW[-1] * _BASE % _MOD)
    return _POW[n]


def _prefix_hashes(letters: tuple[int, ...]) -> list[int]:
    h = [0] * (len(letters) + 1)
    for i, x in enumerate(letters):
        # letters are nonzero ints; offset keeps the digit positive
        h[i + 1] = (h[i] * _BASE + x + (1 << 20)) % _MOD
    return h


def _hash_range(h: list[int], lo: int, hi: int) -> int:
    return (h[hi] - h[lo] * _pow(hi - lo)) % _MOD


@dataclass(frozen=True)
class DehnStep:
    """One replacement: ``length`` letters at ``position`` of the cyclic word
    matched the oriented relator ``relator`` starting at rotation ``offset``."""

    position: int
    relator: int
    orientation: int
    offset: int
    length: int


@dataclass(frozen=True)
class DehnResult:
    trivial: bool
    steps: tuple[DehnStep, ...]
    residue: Word

    @property
    def area(self) -> int:
        return len(self.steps)


class DehnSolver:
    """Reusable solver; builds the rotation index once per presentation."""

    def __init__(self, presentation: Presentation):
        if presentation.relators and not check_cprime(presentation.relators, 1, 6).holds:
            raise ValueError("presentation not metric small cancellation")
        self.presentation = presentation
        # doubled[j][s] spells relator j (s=0) or its inverse (s=1) twice,
        # so any rotation is a contiguous slice
        self._doubled: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
        self._lengths: list[int] = []
        for r in presentation.relators:
            fwd = r.letters
            bwd = r.inverse().letters
            self._doubled.append((fwd + fwd, bwd + bwd))
            self._lengths.append(len(r))
        # one index per relator length: half-prefix hash -> [(j, srank, offset)]
        # in tie order (ascending j, forward orientation first, ascending offset)
        self._classes: dict[int, dict[int, list[tuple[int, int, int]]]] = {}
        for j, ell in enumerate(self._lengths):
            index = self._classes.setdefault(ell, {})
            half = ell // 2 + 1
            for srank in (0, 1):
                hashes = _prefix_hashes(self._doubled[j][srank])
                for off in range(ell):
                    index.setdefault(_hash_range(hashes, off, off + half), []).append(
                        (j, srank, off)
                    )
        self._subword_cache: dict[int, dict[int, tuple[int, int, int]]] = {}

    def solve(self, w: Word) -> DehnResult:
        cur = cyclic_reduce(free_reduce(w))[0]
        steps: list[DehnStep] = []
        while cur:
            best = self._best_match(cur)
            if best is None:
                return DehnResult(False, tuple(steps), cur)
            length, j, pos, srank, off = best
            ell = self._lengths[j]
            d = self._doubled[j][srank]
            w2 = cur.letters + cur.letters
            complement = tuple(-x for x in reversed(d[off + length : off + ell]))
            replaced = Word(complement + w2[pos + length : pos + len(cur)])
            cur = cyclic_reduce(free_reduce(replaced))[0]
            steps.append(DehnStep(pos, j, 1 if srank == 0 else -1, off, length))
        return DehnResult(True, tuple(steps), EMPTY)

    def is_trivial(self, w: Word) -> bool:
        return self.solve(w).trivial

    def _best_match(self, cur: Word) -> tuple[int, int, int, int, int] | None:
        """Pick (length, relator, position, srank, offset) minimizing
        (-length, relator, position, srank, offset)."""
        n = len(cur)
        w2 = cur.letters + cur.letters
        hashes = _prefix_hashes(w2)
        best: tuple[int, int, int, int, int] | None = None
        for ell, index in self._classes.items():
            half = ell // 2 + 1
            if half > n:
                continue
            for pos in range(n):
                cands = index.get(_hash_range(hashes, pos, pos + half))
                if not cands:
                    continue
                for j, srank, off in cands:
                    d = self._doubled[j][srank]
                    if w2[pos : pos + half] != d[off : off + half]:
                        continue
                    length = half
                    top = min(ell, n)
                    while length < top and w2[pos + length] == d[off + length]:
                        length += 1
                    cand = (length, j, pos, srank, off)
                    if best is None or (-cand[0], *cand[1:]) < (-best[0], *best[1:]):
                        best = cand
        return best

    def _subword_index(self, length: int) -> dict[int, tuple[int, int, int]]:
        """Hashes of every length-``length`` cyclic subword of every oriented
        relator, each with one witness slice for literal verification."""
        cached = self._subword_cache.get(length)
        if cached is not None:
            return cached
        index: dict[int, tuple[int, int, int]] = {}
        for j, ell in enumerate(self._lengths):
            if length > ell:
                continue
            for srank in (0, 1):
                hashes = _prefix_hashes(self._doubled[j][srank])
                for off in range(ell):
                    index.setdefault(
                        _hash_range(hashes, off, off + length), (j, srank, off)
                    )
        self._subword_cache[length] = index
        return index

    def _longest_relator_subword(
        self, letters: tuple[int, ...], hashes: list[int], pos: int
    ) -> int:
        """Longest prefix of letters[pos:] that appears inside some oriented
        relator (0 when even the single letter does not)."""
        top = min(max(self._lengths, default=0), len(letters) - pos)
        lo, hi = 0, top
        while lo < hi:
            mid = (lo + hi + 1) // 2
            witness = self._subword_index(mid).get(_hash_range(hashes, pos, pos + mid))
            ok = False
            if witness is not None:
                j, srank, off = witness
                ok = letters[pos : pos + mid] == self._doubled[j][srank][off : off + mid]
            if ok:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def piece_count(self, w: Word) -> int | None:
        """Greedy count of relator-subword segments spelling free_reduce(w);
        None when some letter occurs in no relator."""
        letters = free_reduce(w).letters
        if not letters:
            return 0
        hashes = _prefix_hashes(letters)
        pos = 0
        segments = 0
        while pos < len(letters):
            jump = self._longest_relator_subword(letters, hashes, pos)
            if jump == 0:
                return None
            pos += jump
            segments += 1
        return segments


def dehn_solve(presentation: Presentation, w: Word) -> DehnResult:
    return DehnSolver(presentation).solve(w)


def verify_steps(
    presentation: Presentation, w: Word, steps: tuple[DehnStep, ...] | list[DehnStep]
) -> tuple[bool, Word]:
    """Replay a step log with no searching: check every claimed match against
    the relators letter for letter and redo the replacements.  Returns
    (valid, final_word); a trivial verdict is certified by (True, empty)."""
    doubled = []
    for r in presentation.relators:
        fwd = r.letters
        bwd = r.inverse().letters
        doubled.append((fwd + fwd, bwd + bwd))
    cur = cyclic_reduce(free_reduce(w))[0]
    for st in steps:
        n = len(cur)
        if not 0 <= st.relator < len(presentation.relators):
            return False, cur
        ell = len(presentation.relators[st.relator])
        if st.orientation not in (1, -1) or not 0 <= st.offset < ell:
            return False, cur
        if not 0 <= st.position < n or not st.length <= min(ell, n):
            return False, cur
        if 2 * st.length <= ell:
            return False, cur
        d = doubled[st.relator][0 if st.orientation == 1 else 1]
        w2 = cur.letters + cur.letters
        if w2[st.position : st.position + st.length] != d[st.offset : st.offset + st.length]:
            return False, cur
        complement = tuple(-x for x in reversed(d[st.offset + st.length : st.offset + ell]))
        replaced = Word(complement + w2[st.position + st.length : st.position + n])
        nxt = cyclic_reduce(free_reduce(replaced))[0]
        if len(nxt) >= n:
            return False, cur
        cur = nxt
    return True, cur


@dataclass(frozen=True)
class AreaRow:
    word: Word
    length: int
    area: int
    pieces: int | None

    @property
    def ratio(self) -> Fraction | None:
        if self.length == 0:
            return None
        return Fraction(self.area, self.length)


@dataclass(frozen=True)
class AreaReport:
    rows: tuple[AreaRow, ...]
    max_ratio: Fraction | None


def area_bound_check(
    presentation: Presentation, samples: list[Word] | tuple[Word, ...]
) -> AreaReport:
    """Solve every sample, recording step count as a proxy for diagram area.

    Raises on a sample the solver cannot certify trivial, and asserts that
    each area stays within the number of relator-subword segments needed to
    spell the sample's free reduction (the linear isoperimetric budget).
    """
    solver = DehnSolver(presentation)
    rows = []
    failures = []
    for i, sample in enumerate(samples):
        result = solver.solve(sample)
        if not result.trivial:
            failures.append(i)
            continue
        reduced = free_reduce(sample)
        rows.append(AreaRow(sample, len(reduced), result.area, solver.piece_count(sample)))
    if failures:
        raise ValueError(f"samples not trivial: {failures}")
    for i, row in enumerate(rows):
        if row.pieces is None or row.area > row.pieces:
            raise AssertionError(
                f"sample {i}: area {row.area} exceeds piece budget {row.pieces}"
            )
    ratios = [row.ratio for row in rows if row.ratio is not None]
    return AreaReport(tuple(rows), max(ratios, default=None))


def random_trivial_words(
    presentation: Presentation,
    count: int,
    max_conj: int,
    seed: int,
    max_conjugator_len: int = 4,
) -> list[Word]:
    """Products of up to max_conj conjugated relators, freely reduced."""
    if not presentation.relators:
        raise ValueError("need at least one relator")
    if max_conj < 1:
        raise ValueError("max_conj must be at least 1")
    rng = random.Random(seed)
    rank = presentation.alphabet.size
    out = []
    for _ in range(count):
        w = EMPTY
        for _ in range(rng.randint(1, max_conj)):
            r = presentation.relators[rng.randrange(len(presentation.relators))]
            if rng.random() < 0.5:
                r = r.inverse()
            g = random_reduced_word(rng, rank, rng.randint(0, max_conjugator_len))
            w = w * g * r * g.inverse()
        out.append(free_reduce(w))
    return out
