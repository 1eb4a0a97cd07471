"""Text format for presentations and partial ascending extensions.

Two file kinds share one grammar.  A plain presentation::

    # genus-two surface group
    gens: a b c d
    rel r1: a b a' b' c d c' d'

and a partial ascending extension, marked by its header line::

    hnn: t; ascending: a b; free: c
    map a: ( a b c )^8
    map b: ( a c )^9 b

Words are whitespace-separated symbols, a trailing ``'`` inverts, and a
parenthesized group raised to an integer power expands literally.  ``1``
denotes the empty word.  ``#`` starts a comment.  Every error carries the
1-based source line it was found on.
"""

from __future__ import annotations

import re

from .hnn import PartialAscendingHNN
from .presentation import Presentation
from .words import EMPTY, Alphabet, Word, is_cyclically_reduced


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


_TOKEN = re.compile(r"\(|\)(?:\^(-?\d+))?|[^\s()^]+")


def _tokenize(text: str, line: int | None) -> list[tuple[str, object]]:
    tokens: list[tuple[str, object]] = []
    for chunk in text.split():
        pos = 0
        for m in _TOKEN.finditer(chunk):
            if m.start() != pos:
                raise ParseError(f"bad word syntax near {chunk!r}", line)
            pos = m.end()
            tok = m.group(0)
            if tok == "(":
                tokens.append(("open", None))
            elif tok.startswith(")"):
                tokens.append(("close", int(m.group(1)) if m.group(1) else 1))
            else:
                tokens.append(("symbol", tok))
        if pos != len(chunk):
            raise ParseError(f"bad word syntax near {chunk!r}", line)
    return tokens


def parse_word(alphabet: Alphabet, text: str, line: int | None = None) -> Word:
    """Parse a word over ``alphabet``; concatenation is literal (no implicit
    free reduction), so malformed inputs stay visible to later validators."""
    tokens = _tokenize(text, line)
    word, i = _parse_sequence(alphabet, tokens, 0, line)
    if i != len(tokens):
        raise ParseError("unmatched ')'", line)
    return word


def _parse_sequence(
    alphabet: Alphabet, tokens: list[tuple[str, object]], i: int, line: int | None
) -> tuple[Word, int]:
    acc = EMPTY
    while i < len(tokens):
        kind, value = tokens[i]
        if kind == "open":
            inner, i = _parse_sequence(alphabet, tokens, i + 1, line)
            if i == len(tokens) or tokens[i][0] != "close":
                raise ParseError("missing ')'", line)
            acc = acc * inner.power(tokens[i][1])
            i += 1
        elif kind == "close":
            return acc, i
        else:
            if value != "1":
                try:
                    acc = acc * Word.of(alphabet.letter(value))
                except KeyError:
                    raise ParseError(f"unknown generator {str(value).rstrip(chr(39))!r}", line) from None
            i += 1
    return acc, i


def _significant_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            out.append((no, stripped))
    return out


def parse_source(text: str) -> Presentation | PartialAscendingHNN:
    """Dispatch on the header line; see the module docstring for the grammar."""
    lines = _significant_lines(text)
    if not lines:
        raise ParseError("empty input")
    no, first = lines[0]
    if first.startswith("hnn:"):
        return _parse_hnn(lines)
    if first.startswith("gens:"):
        return _parse_presentation(lines)
    raise ParseError("expected a 'gens:' or 'hnn:' header", no)


def parse_presentation(text: str) -> Presentation:
    obj = parse_source(text)
    if not isinstance(obj, Presentation):
        raise ParseError("expected a plain presentation, found an hnn header")
    return obj


def parse_hnn(text: str) -> PartialAscendingHNN:
    obj = parse_source(text)
    if not isinstance(obj, PartialAscendingHNN):
        raise ParseError("expected an hnn header, found a plain presentation")
    return obj


def _parse_presentation(lines: list[tuple[int, str]]) -> Presentation:
    no0, first = lines[0]
    try:
        alphabet = Alphabet(tuple(first[len("gens:") :].split()))
    except ValueError as e:
        raise ParseError(str(e), no0) from None
    relators: list[Word] = []
    names: list[str] = []
    for no, line in lines[1:]:
        head, sep, body = line.partition(":")
        parts = head.split()
        if not sep or not parts or parts[0] != "rel" or len(parts) > 2:
            raise ParseError("expected 'rel [name]: <word>'", no)
        name = parts[1] if len(parts) == 2 else f"r{len(relators) + 1}"
        if name in names:
            raise ParseError(f"duplicate relator name {name!r}", no)
        w = parse_word(alphabet, body, no)
        if not w:
            raise ParseError(f"relator {name} is empty", no)
        if not is_cyclically_reduced(w):
            raise ParseError(f"relator {name} is not cyclically reduced", no)
        relators.append(w)
        names.append(name)
    return Presentation(alphabet, tuple(relators), tuple(names))


def _parse_hnn(lines: list[tuple[int, str]]) -> PartialAscendingHNN:
    no0, first = lines[0]
    fields = [part.strip() for part in first.split(";")]
    keys = [f.partition(":")[0].strip() for f in fields]
    if keys != ["hnn", "ascending", "free"]:
        raise ParseError(
            "header must be 'hnn: <stable>; ascending: <names>; free: <names>'", no0
        )
    stable_names = fields[0].partition(":")[2].split()
    if len(stable_names) != 1:
        raise ParseError("need exactly one stable letter", no0)
    stable = stable_names[0]
    ascending = tuple(fields[1].partition(":")[2].split())
    free = tuple(fields[2].partition(":")[2].split())
    try:
        full = Alphabet(tuple(ascending) + tuple(free) + (stable,))
    except ValueError as e:
        raise ParseError(str(e), no0) from None
    maps: dict[str, Word] = {}
    for no, line in lines[1:]:
        head, sep, body = line.partition(":")
        parts = head.split()
        if parts and parts[0] == "rel":
            raise ParseError("rel lines are not allowed in an hnn file; use 'map'", no)
        if not sep or parts[:1] != ["map"] or len(parts) != 2:
            raise ParseError("expected 'map <generator>: <word>'", no)
        g = parts[1]
        if g in free:
            raise ParseError(f"generator {g!r} is free, not ascending", no)
        if g not in ascending:
            raise ParseError(f"map for unknown ascending generator {g!r}", no)
        if g in maps:
            raise ParseError(f"duplicate map for {g!r}", no)
        maps[g] = parse_word(full, body, no)
    missing = [g for g in ascending if g not in maps]
    if missing:
        raise ParseError(f"missing map for {missing[0]!r}", no0)
    try:
        return PartialAscendingHNN(
            ascending, free, tuple(maps[g] for g in ascending), stable
        )
    except ValueError as e:
        raise ParseError(str(e), no0) from None


def parse_generating_set(text: str) -> tuple[Alphabet, list[Word], list[str]]:
    """Same grammar as a plain presentation, but rel lines name subgroup
    generators, so they are only required to be nonempty (a conjugate like
    ``a b a'`` is a fine generator and no relator)."""
    lines = _significant_lines(text)
    if not lines:
        raise ParseError("empty input")
    no0, first = lines[0]
    if not first.startswith("gens:"):
        raise ParseError("expected a 'gens:' header", no0)
    try:
        alphabet = Alphabet(tuple(first[len("gens:") :].split()))
    except ValueError as e:
        raise ParseError(str(e), no0) from None
    words: list[Word] = []
    names: list[str] = []
    for no, line in lines[1:]:
        head, sep, body = line.partition(":")
        parts = head.split()
        if not sep or not parts or parts[0] != "rel" or len(parts) > 2:
            raise ParseError("expected 'rel [name]: <word>'", no)
        name = parts[1] if len(parts) == 2 else f"r{len(words) + 1}"
        if name in names:
            raise ParseError(f"duplicate relator name {name!r}", no)
        w = parse_word(alphabet, body, no)
        if not w:
            raise ParseError(f"generator word {name} is empty", no)
        words.append(w)
        names.append(name)
    return alphabet, words, names


def presentation_source(p: Presentation) -> str:
    lines = ["gens: " + " ".join(p.alphabet.names)]
    for name, r in zip(p.relator_names, p.relators):
        lines.append(f"rel {name}: {p.alphabet.word_str(r)}")
    return "\n".join(lines) + "\n"


def hnn_source(h: PartialAscendingHNN) -> str:
    lines = [
        f"hnn: {h.stable}; ascending: {' '.join(h.ascending)}; free: {' '.join(h.free)}"
    ]
    ab = h.full_alphabet
    for name, image in zip(h.ascending, h.images):
        lines.append(f"map {name}: {ab.word_str(image)}")
    return "\n".join(lines) + "\n"
