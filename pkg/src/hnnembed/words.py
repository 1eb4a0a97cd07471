"""Word calculus over a finite symmetric alphabet.

A letter is a nonzero int: generator number i (counting from 1) is ``i``,
its formal inverse is ``-i``.  A word is a tuple of letters wrapped in
:class:`Word`.  Nothing here reduces implicitly; every function states
whether it works with the literal letter sequence or reduces first.

The canonical order on signed letters is ``1 < -1 < 2 < -2 < ...``
(:func:`letter_key`).  Deterministic constructions below always walk
letters in that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


def letter_key(x: int) -> tuple[int, int]:
    """Sort key realising the canonical signed-letter order."""
    return (abs(x), 0 if x > 0 else 1)


def signed_letters(rank: int) -> tuple[int, ...]:
    """All signed letters for the first ``rank`` generators, canonical order."""
    out: list[int] = []
    for i in range(1, rank + 1):
        out.append(i)
        out.append(-i)
    return tuple(out)


@dataclass(frozen=True, slots=True)
class Word:
    """Immutable letter sequence.  Multiplication is literal concatenation."""

    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for x in self.letters:
            if not isinstance(x, int) or x == 0:
                raise ValueError(f"bad letter {x!r}")

    @classmethod
    def of(cls, *letters: int) -> "Word":
        return cls(tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.letters[i])
        return self.letters[i]

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)))

    def power(self, k: int) -> "Word":
        if k < 0:
            return self.inverse().power(-k)
        return Word(self.letters * k)

    def max_letter(self) -> int:
        """Largest generator number used, 0 for the empty word."""
        return max((abs(x) for x in self.letters), default=0)

    def key(self) -> tuple[tuple[int, int], ...]:
        """Deterministic sort key: letterwise canonical order."""
        return tuple(letter_key(x) for x in self.letters)


EMPTY = Word()


@dataclass(frozen=True)
class Alphabet:
    """Named generators.  Name ``names[i]`` carries letter ``i + 1``.

    Inverse letters render with a trailing apostrophe, so generator "a"
    gives the two symbols ``a`` and ``a'``.
    """

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        # May be empty: quotients can kill every generator.
        seen = set()
        for n in self.names:
            if not n or not n.replace("_", "a").isalnum() or n[0].isdigit():
                raise ValueError(f"bad generator name {n!r}")
            if n in seen:
                raise ValueError(f"duplicate generator name {n!r}")
            seen.add(n)

    @classmethod
    def of(cls, *names: str) -> "Alphabet":
        return cls(tuple(names))

    @property
    def size(self) -> int:
        return len(self.names)

    def signed(self) -> tuple[int, ...]:
        return signed_letters(self.size)

    def letter(self, symbol: str) -> int:
        """Letter for a rendered symbol, e.g. ``"b'"`` -> -2."""
        inv = symbol.endswith("'")
        name = symbol[:-1] if inv else symbol
        try:
            i = self.names.index(name) + 1
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None
        return -i if inv else i

    def symbol(self, letter: int) -> str:
        name = self.names[abs(letter) - 1]
        return name + "'" if letter < 0 else name

    def word_str(self, w: Word) -> str:
        if not w:
            return "1"
        return " ".join(self.symbol(x) for x in w)

    def word(self, text: str) -> Word:
        """Parse a space-separated symbol string (no exponent syntax)."""
        text = text.strip()
        if text in ("", "1"):
            return EMPTY
        return Word(tuple(self.letter(tok) for tok in text.split()))

    def extended(self, *extra: str) -> "Alphabet":
        return Alphabet(self.names + tuple(extra))


def free_reduce(w: Word) -> Word:
    """Delete inverse pairs until none remain."""
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return Word(tuple(out))


def is_reduced(w: Word) -> bool:
    return all(w.letters[i] != -w.letters[i + 1] for i in range(len(w) - 1))


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(core, conj)`` with ``w = conj * core * conj.inverse()`` freely.

    ``core`` is cyclically reduced.  The input is freely reduced first.
    """
    ls = list(free_reduce(w))
    pre: list[int] = []
    while len(ls) >= 2 and ls[0] == -ls[-1]:
        pre.append(ls[0])
        ls = ls[1:-1]
    return Word(tuple(ls)), Word(tuple(pre))


def is_cyclically_reduced(w: Word) -> bool:
    return is_reduced(w) and (len(w) <= 1 or w.letters[0] != -w.letters[-1])


def exponent(w: Word) -> int:
    """Largest e with ``w`` a literal e-th power of some subword.

    Works on the literal letter sequence; no reduction is applied.
    """
    n = len(w)
    if n == 0:
        raise ValueError("exponent of the empty word is undefined")
    ls = w.letters
    for d in range(1, n + 1):
        if n % d:
            continue
        if all(ls[i] == ls[i - d] for i in range(d, n)):
            return n // d
    raise AssertionError("unreachable")


def is_proper_power(w: Word) -> bool:
    """Whether a cyclically reduced nonempty word is a proper power."""
    if not w or not is_cyclically_reduced(w):
        raise ValueError("is_proper_power needs a cyclically reduced nonempty word")
    return exponent(w) > 1


def cyclic_rotations(w: Word) -> list[Word]:
    """All n literal rotations (duplicates included when w is periodic)."""
    ls = w.letters
    return [Word(ls[i:] + ls[:i]) for i in range(len(ls))] or [w]


def cyclically_equal(u: Word, v: Word) -> bool:
    """Literal equality up to rotation."""
    if len(u) != len(v):
        return False
    if not u:
        return True
    return _contains(u.letters + u.letters, v.letters)


def _contains(haystack: tuple[int, ...], needle: tuple[int, ...]) -> bool:
    # Tuple scan is fast enough for the word sizes seen here; the piece
    # machinery has its own indexed search.
    n, m = len(haystack), len(needle)
    first = needle[0]
    for i in range(n - m + 1):
        if haystack[i] == first and haystack[i : i + m] == needle:
            return True
    return False


def digrams(w: Word) -> set[tuple[int, int]]:
    """Set of consecutive letter pairs of the literal (linear) word."""
    ls = w.letters
    return {(ls[i], ls[i + 1]) for i in range(len(ls) - 1)}


def contains_all_reduced_digrams(w: Word, letters: Iterable[int]) -> bool:
    """Whether every reduced two-letter word over ``letters`` occurs in ``w``.

    Linear occurrences only; pass a word whose first and last letters agree
    to cover the wraparound digram of a cyclic word.
    """
    lets = list(letters)
    have = digrams(w)
    for p in lets:
        for q in lets:
            if q == -p:
                continue
            if (p, q) not in have:
                return False
    return True


def eulerian_digram_word(rank: int) -> Word:
    """Closed walk through every reduced digram over ``rank`` generators once.

    Vertices are the 2n signed letters, edges the reduced digrams.  In and
    out degrees all equal 2n - 1 and the graph is strongly connected once
    n >= 2, so an Eulerian circuit exists.  Hierholzer's algorithm with the
    canonical letter order and start letter 1 makes the output a pure
    function of ``rank``.  The walk is returned closed: its length is
    2n(2n - 1) + 1 and the first and last letters are both 1, so its linear
    digram set is exactly the full reduced digram set.
    """
    if rank < 2:
        raise ValueError("digram graph not Eulerian for rank < 2")
    lets = signed_letters(rank)
    nxt = {p: [q for q in lets if q != -p] for p in lets}
    ptr = {p: 0 for p in lets}
    stack = [1]
    circuit: list[int] = []
    while stack:
        v = stack[-1]
        if ptr[v] < len(nxt[v]):
            u = nxt[v][ptr[v]]
            ptr[v] += 1
            stack.append(u)
        else:
            circuit.append(stack.pop())
    circuit.reverse()
    return Word(tuple(circuit))


def random_reduced_word(rng, rank: int, length: int) -> Word:
    """Uniform-ish freely reduced word of exactly ``length`` letters."""
    if length == 0:
        return EMPTY
    lets = signed_letters(rank)
    out = [rng.choice(lets)]
    while len(out) < length:
        x = rng.choice(lets)
        if x != -out[-1]:
            out.append(x)
    return Word(tuple(out))


def random_cyclically_reduced_word(rng, rank: int, length: int) -> Word:
    """Like :func:`random_reduced_word` but also reduced around the wrap."""
    if length <= 1:
        return random_reduced_word(rng, rank, length)
    while True:
        w = random_reduced_word(rng, rank, length)
        if w.letters[0] != -w.letters[-1]:
            return w
