"""Finite presentations and overlap (small-cancellation) checks.

A :class:`Presentation` is a named alphabet plus cyclically reduced
nonempty relator words.  The checks in this module classify how relators
overlap: a *piece* is a subword occurring with two different appearances
across the relator family (see :mod:`hnnembed.suffixes` for what counts
as different).  Verdicts come back as small report objects carrying the
numbers that justify them, so callers can serialize or re-check.

The metric check compares, per relator, the longest piece against the
fraction ``num/den`` of the relator length, with strict integer
arithmetic throughout.  The non-metric check asks for the minimum number
of pieces in a decomposition of any rotation of a relator; greedy
longest-jump decomposition is exact here because every subword of a
piece is again a piece.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .suffixes import match_table
from .words import Alphabet, Word, is_cyclically_reduced

RelatorInput = Union["Presentation", Sequence[Word]]


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relators: tuple[Word, ...]
    relator_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.relator_names:
            object.__setattr__(
                self, "relator_names", tuple(f"r{i + 1}" for i in range(len(self.relators)))
            )
        if len(self.relator_names) != len(self.relators):
            raise ValueError("relator name count mismatch")
        if len(set(self.relator_names)) != len(self.relator_names):
            raise ValueError("duplicate relator names")
        for name, r in zip(self.relator_names, self.relators):
            if len(r) == 0:
                raise ValueError(f"relator {name} is empty")
            if r.max_letter() > self.alphabet.size:
                raise ValueError(f"relator {name} uses letters outside the alphabet")
            if not is_cyclically_reduced(r):
                raise ValueError(f"relator {name} is not cyclically reduced")

    @classmethod
    def from_strings(cls, gens: str, rels: Sequence[str], names: Sequence[str] = ()) -> "Presentation":
        """Build from space-separated generator names and symbol strings."""
        ab = Alphabet(tuple(gens.split()))
        return cls(ab, tuple(ab.word(r) for r in rels), tuple(names))

    @property
    def rank(self) -> int:
        return self.alphabet.size

    def __str__(self) -> str:
        gens = " ".join(self.alphabet.names)
        rels = ", ".join(self.alphabet.word_str(r) for r in self.relators)
        return f"< {gens} | {rels} >"

    def symmetrized_closure(self) -> list[Word]:
        """All rotations of all relators and their inverses, without duplicates."""
        seen: set[tuple[int, ...]] = set()
        out: list[Word] = []
        for r in self.relators:
            for w in (r, r.inverse()):
                ls = w.letters
                for i in range(len(ls)):
                    rot = ls[i:] + ls[:i]
                    if rot not in seen:
                        seen.add(rot)
                        out.append(Word(rot))
        return out


def _as_words(arg: RelatorInput) -> list[Word]:
    if isinstance(arg, Presentation):
        return list(arg.relators)
    return list(arg)


@dataclass(frozen=True)
class SymmetrizedEntry:
    word: Word
    relator: int
    offset: int
    orientation: int  # +1 or -1


def symmetrize(p: Presentation) -> list[SymmetrizedEntry]:
    """Every rotation of every relator and its inverse, with bookkeeping.

    Counting multiplicity the result has exactly 2 * (total relator
    length) entries; equal words from different sources stay separate.
    """
    out = []
    for j, r in enumerate(p.relators):
        for orient in (1, -1):
            w = r if orient == 1 else r.inverse()
            ls = w.letters
            for off in range(len(ls)):
                out.append(SymmetrizedEntry(Word(ls[off:] + ls[:off]), j, off, orient))
    return out


@dataclass(frozen=True)
class PieceReport:
    """Raw overlap statistics for a relator family.

    ``per_offset[j][o]`` is the longest piece of relator j starting at
    rotation offset o (0 when none starts there); ``max_piece[j]`` is the
    longest piece occurring anywhere in relator j, in either direction.
    """

    include_inverses: bool
    lengths: tuple[int, ...]
    max_piece: tuple[int, ...]
    per_offset: tuple[tuple[int, ...], ...]

    def maximal_occurrences(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per relator: (offset, length) of each piece no longer piece contains.

        The piece starting at offset o is maximal exactly when the one
        starting at o-1 does not reach past it; reaches are monotone, so
        the local comparison is the whole containment check.
        """
        out = []
        for row in self.per_offset:
            n = len(row)
            occ = tuple(
                (o, row[o])
                for o in range(n)
                if row[o] > 0 and row[(o - 1) % n] <= row[o]
            )
            out.append(occ)
        return tuple(out)


def piece_stats(relators: RelatorInput, include_inverses: bool = True) -> PieceReport:
    words = _as_words(relators)
    if not words:
        raise ValueError("no relators to scan")
    table = match_table([w.letters for w in words], include_inverses)
    return PieceReport(
        include_inverses=include_inverses,
        lengths=tuple(len(w) for w in words),
        max_piece=table.per_word_max,
        per_offset=table.per_offset,
    )


def best_piece_decomposition(
    per_offset: Sequence[int],
) -> tuple[int, int, tuple[int, ...]] | None:
    """Fewest-piece covering of some rotation: (count, start, lengths).

    ``per_offset`` is one relator's row of :class:`PieceReport`.  Greedy
    longest-jump from every start is exact because pieces are closed
    under subwords, so the farthest reachable point per step dominates.
    Returns None when no decomposition exists, which happens exactly
    when some offset starts no piece at all.
    """
    n = len(per_offset)
    if any(v == 0 for v in per_offset):
        return None
    best: tuple[int, int, tuple[int, ...]] | None = None
    for start in range(n):
        covered = 0
        pos = start
        segs: list[int] = []
        while covered < n:
            step = per_offset[pos % n]
            if covered + step > n:
                step = n - covered
            covered += step
            pos += step
            segs.append(step)
            if best is not None and len(segs) >= best[0]:
                break
        if covered == n and (best is None or len(segs) < best[0]):
            best = (len(segs), start, tuple(segs))
    return best


def min_piece_decomposition(per_offset: Sequence[int]) -> int | None:
    """Fewest pieces whose concatenation is some rotation of the word."""
    best = best_piece_decomposition(per_offset)
    return None if best is None else best[0]


@dataclass(frozen=True)
class CpWitness:
    """A too-short decomposition: relator covered by the listed pieces."""

    relator: int
    start: int
    segments: tuple[int, ...]


@dataclass(frozen=True)
class CpReport:
    """Verdict for the non-metric overlap condition with parameter p."""

    p: int
    holds: bool
    include_inverses: bool
    min_pieces: tuple[int | None, ...]  # None: relator is no product of pieces
    max_piece: tuple[int, ...]
    lengths: tuple[int, ...]
    witnesses: tuple[CpWitness, ...]


def check_cp(relators: RelatorInput, p: int, include_inverses: bool = True) -> CpReport:
    """Does every relator need at least p pieces, if decomposable at all?

    A relator that is not a product of pieces at all passes vacuously.
    Witnesses carry a decomposition for every relator that fails.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    return cp_from_stats(piece_stats(relators, include_inverses), p)


def cp_from_stats(rep: PieceReport, p: int) -> CpReport:
    """Same verdict as :func:`check_cp`, reusing a computed piece scan."""
    decomps = [best_piece_decomposition(row) for row in rep.per_offset]
    mins = tuple(None if d is None else d[0] for d in decomps)
    witnesses = tuple(
        CpWitness(j, d[1], d[2])
        for j, d in enumerate(decomps)
        if d is not None and d[0] < p
    )
    holds = not witnesses
    return CpReport(
        p, holds, rep.include_inverses, mins, rep.max_piece, rep.lengths, witnesses
    )


@dataclass(frozen=True)
class CprimeReport:
    """Verdict for the metric overlap condition with bound num/den."""

    num: int
    den: int
    holds: bool
    include_inverses: bool
    max_piece: tuple[int, ...]
    lengths: tuple[int, ...]

    def worst(self) -> tuple[int, int, int]:
        """(relator index, max piece, length) with the largest ratio."""
        triples = [(j, m, l) for j, (m, l) in enumerate(zip(self.max_piece, self.lengths))]
        return max(triples, key=lambda t: (Fraction(t[1], t[2]), t[1]))


def check_cprime(
    relators: RelatorInput, num: int, den: int, include_inverses: bool = True
) -> CprimeReport:
    """Is every piece strictly shorter than num/den of its relator?

    Strict integer comparison: piece * den < num * length, for every
    relator the piece occurs in.
    """
    if not 0 < num < den:
        raise ValueError("bound must be a fraction strictly between 0 and 1")
    return cprime_from_stats(piece_stats(relators, include_inverses), num, den)


def cprime_from_stats(rep: PieceReport, num: int, den: int) -> CprimeReport:
    """Same verdict as :func:`check_cprime`, reusing a computed piece scan."""
    holds = all(m * den < num * l for m, l in zip(rep.max_piece, rep.lengths))
    return CprimeReport(num, den, holds, rep.include_inverses, rep.max_piece, rep.lengths)
