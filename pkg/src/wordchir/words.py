"""Reduced words in free groups of finite rank.

Letters are nonzero ints: ``+i`` is the generator x_i and ``-i`` its
inverse. A :class:`Word` is always freely reduced.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class ParseError(ValueError):
    """Malformed word text. ``position`` is the offending character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _check_rank(rank: int) -> None:
    if not isinstance(rank, int) or rank <= 0:
        raise ValueError(f"rank must be a positive integer, got {rank!r}")


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    """Single-pass stack reduction of a raw letter sequence.

    >>> free_reduce([1, 2, -2, 1])
    (1, 1)
    """
    stack: list[int] = []
    for v in letters:
        if stack and stack[-1] == -v:
            stack.pop()
        else:
            stack.append(v)
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    rank: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        _check_rank(self.rank)
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        prev = 0
        for v in letters:
            if v == 0 or abs(v) > self.rank:
                raise ValueError(f"letter {v} out of range for rank {self.rank}")
            if v == -prev:
                raise ValueError("letters are not freely reduced")
            prev = v

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: Word) -> Word:
        return concat(self, other)

    def __pow__(self, k: int) -> Word:
        return power(self, k)

    def __invert__(self) -> Word:
        return invert(self)

    def __str__(self) -> str:
        return format_word(self)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def syllables(self) -> list[tuple[int, int]]:
        """Maximal runs as ``(generator, exponent)`` pairs."""
        out: list[tuple[int, int]] = []
        for v in self.letters:
            g, s = abs(v), (1 if v > 0 else -1)
            if out and out[-1][0] == g:
                out[-1] = (g, out[-1][1] + s)
            else:
                out.append((g, s))
        return out

    def generators_used(self) -> list[int]:
        return sorted({abs(v) for v in self.letters})


def identity(rank: int) -> Word:
    return Word(rank, ())


def generator(i: int, rank: int) -> Word:
    return Word(rank, (i,))


def reduce(raw: Sequence[int], rank: int) -> Word:
    _check_rank(rank)
    for v in raw:
        if v == 0 or abs(v) > rank:
            raise ValueError(f"letter {v} out of range for rank {rank}")
    return Word(rank, free_reduce(raw))


def _same_rank(u: Word, v: Word) -> None:
    if u.rank != v.rank:
        raise ValueError(f"rank mismatch: {u.rank} vs {v.rank}")


def concat(u: Word, v: Word) -> Word:
    _same_rank(u, v)
    a, b = u.letters, v.letters
    i = 0
    n = min(len(a), len(b))
    while i < n and a[len(a) - 1 - i] == -b[i]:
        i += 1
    return Word(u.rank, a[: len(a) - i] + b[i:])


def invert(w: Word) -> Word:
    return Word(w.rank, tuple(-v for v in reversed(w.letters)))


def power(w: Word, k: int) -> Word:
    if k == 0:
        return identity(w.rank)
    if k < 0:
        w, k = invert(w), -k
    core, conj = cyclic_reduce(w)
    # conj * core^k * conj^-1 is already reduced since core is cyclically reduced
    body = core.letters * k
    return Word(w.rank, conj.letters + body + invert(conj).letters)


def exponent_vector(w: Word) -> tuple[int, ...]:
    sums = [0] * w.rank
    for v in w.letters:
        sums[abs(v) - 1] += 1 if v > 0 else -1
    return tuple(sums)


def is_palindrome(w: Word) -> bool:
    return w.letters == w.letters[::-1]


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w`` as ``conjugator * core * conjugator^-1``.

    >>> core, c = cyclic_reduce(parse("x1 x2 x1^-1", 2))
    >>> str(core), str(c)
    ('x2', 'x1')
    """
    a = w.letters
    n = len(a)
    i = 0
    while 2 * i + 1 < n and a[i] == -a[n - 1 - i]:
        i += 1
    return Word(w.rank, a[i : n - i]), Word(w.rank, a[:i])


def cyclic_core(letters: tuple[int, ...]) -> tuple[int, ...]:
    n = len(letters)
    i = 0
    while 2 * i + 1 < n and letters[i] == -letters[n - 1 - i]:
        i += 1
    return letters[i : n - i]


def embed(w: Word, new_rank: int) -> Word:
    if new_rank < w.rank:
        raise ValueError(f"cannot embed rank {w.rank} word into rank {new_rank}")
    return Word(new_rank, w.letters)


def relabel(w: Word, mapping: dict[int, int], new_rank: int) -> Word:
    """Rename generators: ``mapping[i] = j`` sends x_i to x_j."""
    return Word(new_rank, tuple(mapping[abs(v)] * (1 if v > 0 else -1) for v in w.letters))


def effective_form(w: Word) -> tuple[Word, list[int]]:
    """Relabel the generators occurring in ``w`` to 1..k.

    Returns the rank-k word (rank 1 for the identity) and the sorted list of
    original generator indices, so ``used[j-1]`` is the original of x_j.
    """
    used = w.generators_used()
    mapping = {g: j + 1 for j, g in enumerate(used)}
    return relabel(w, mapping, max(1, len(used))), used


def conjugate(g: Word, h: Word, convention: str = "left") -> Word:
    """Conjugate ``g`` by ``h``: ``h^-1 g h`` for "left", ``h g h^-1`` for "right"."""
    if convention == "left":
        return concat(concat(invert(h), g), h)
    if convention == "right":
        return concat(concat(h, g), invert(h))
    raise ValueError(f"unknown conjugation convention {convention!r}")


def commutator(a: Word, b: Word, convention: str = "standard") -> Word:
    """``a b a^-1 b^-1``; the "alt" convention gives ``a^-1 b^-1 a b``."""
    if convention == "standard":
        return concat(concat(a, b), concat(invert(a), invert(b)))
    if convention == "alt":
        return concat(concat(invert(a), invert(b)), concat(a, b))
    raise ValueError(f"unknown commutator convention {convention!r}")


# --- enumeration -----------------------------------------------------------

def iter_reduced_words(rank: int, length: int) -> Iterator[Word]:
    """All reduced words of exactly ``length`` letters, in a fixed order."""
    _check_rank(rank)
    alphabet = [s * i for i in range(1, rank + 1) for s in (1, -1)]

    def extend(prefix: list[int]) -> Iterator[tuple[int, ...]]:
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for v in alphabet:
            if prefix and prefix[-1] == -v:
                continue
            prefix.append(v)
            yield from extend(prefix)
            prefix.pop()

    for letters in extend([]):
        yield Word(rank, letters)


def count_reduced_words(rank: int, length: int) -> int:
    if length == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (length - 1)


def random_word(rank: int, length: int, rng: random.Random | None = None) -> Word:
    """Uniformly random reduced word of exactly ``length`` letters."""
    rng = rng or random.Random()
    alphabet = [s * i for i in range(1, rank + 1) for s in (1, -1)]
    letters: list[int] = []
    while len(letters) < length:
        v = rng.choice(alphabet)
        if letters and letters[-1] == -v:
            continue
        letters.append(v)
    return Word(rank, tuple(letters))


# --- text form -------------------------------------------------------------

_INDEXED_TERM = re.compile(r"x([1-9][0-9]*)(?:\^(-?[1-9][0-9]*))?")
_COMPACT = re.compile(r"[A-Za-z\s]*")
_IDENTITY_TOKENS = {"", "e", "1"}


def parse(text: str, rank: int) -> Word:
    """Parse indexed (``x1^2 x2^-1``) or compact (``aaB``) notation.

    >>> str(parse("a B a b", 2))
    'x1 x2^-1 x1 x2'
    """
    _check_rank(rank)
    stripped = text.strip()
    if stripped in _IDENTITY_TOKENS:
        return identity(rank)
    if _COMPACT.fullmatch(text) and not re.search(r"x\d", text):
        raw: list[int] = []
        for pos, ch in enumerate(text):
            if ch.isspace():
                continue
            g = ord(ch.lower()) - ord("a") + 1
            if g > rank:
                raise ParseError(f"generator {ch!r} exceeds rank {rank}", pos)
            raw.append(g if ch.islower() else -g)
        return reduce(raw, rank)
    raw = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _INDEXED_TERM.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        end = m.end()
        if end < n and not text[end].isspace() and text[end] != "x":
            raise ParseError(f"unexpected character {text[end]!r}", end)
        g = int(m.group(1))
        if g > rank:
            raise ParseError(f"generator x{g} exceeds rank {rank}", pos)
        e = int(m.group(2)) if m.group(2) else 1
        raw.extend([g if e > 0 else -g] * abs(e))
        pos = end
    return reduce(raw, rank)


def infer_rank(text: str) -> int:
    """Smallest rank that can hold every generator mentioned in ``text``."""
    indices = [int(g) for g in re.findall(r"x([1-9][0-9]*)", text)]
    if indices:
        return max(indices)
    letters = [ord(ch.lower()) - ord("a") + 1 for ch in text if ch.isalpha()]
    letters = [g for g in letters if 1 <= g <= 26]
    return max(letters, default=1)


def format_word(w: Word, style: str = "indexed") -> str:
    if not w.letters:
        return "e"
    if style == "compact":
        if w.rank > 26:
            raise ValueError("compact notation needs rank <= 26")
        return "".join(
            chr(ord("a") + abs(v) - 1) if v > 0 else chr(ord("A") + abs(v) - 1)
            for v in w.letters
        )
    terms = []
    for g, e in w.syllables():
        terms.append(f"x{g}" if e == 1 else f"x{g}^{e}")
    return " ".join(terms)


def alphabet(rank: int) -> list[int]:
    return [s * i for i in range(1, rank + 1) for s in (1, -1)]


def all_words_up_to(rank: int, max_length: int) -> Iterator[Word]:
    for n in range(max_length + 1):
        yield from iter_reduced_words(rank, n)


__all__ = [
    "ParseError", "Word", "alphabet", "all_words_up_to", "commutator", "concat",
    "conjugate", "count_reduced_words", "cyclic_core", "cyclic_reduce",
    "effective_form", "embed", "exponent_vector", "format_word", "free_reduce",
    "generator", "identity", "infer_rank", "invert", "is_palindrome",
    "iter_reduced_words", "parse", "power", "random_word", "reduce", "relabel",
]
