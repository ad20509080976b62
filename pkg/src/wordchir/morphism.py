"""Endomorphisms of F_n given by generator images, and inversion certificates."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from .words import ParseError, Word, format_word, free_reduce, identity, invert, parse, power


@dataclass(frozen=True)
class Endomorphism:
    """Homomorphism F_n -> F_n sending x_i to ``images[i-1]``."""

    rank: int
    images: tuple[Word, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.rank:
            raise ValueError(f"need {self.rank} images, got {len(images)}")
        for w in images:
            if w.rank != self.rank:
                raise ValueError("image rank does not match endomorphism rank")

    @classmethod
    def from_letters(cls, rank: int, images: Sequence[Sequence[int]]) -> Endomorphism:
        return cls(rank, tuple(Word(rank, free_reduce(img)) for img in images))

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def letter_table(self) -> dict[int, tuple[int, ...]]:
        """Image of every signed letter, for fast substitution."""
        table = {}
        for i, img in enumerate(self.images, start=1):
            table[i] = img.letters
            table[-i] = tuple(-v for v in reversed(img.letters))
        return table

    def is_identity(self) -> bool:
        return all(img.letters == (i,) for i, img in enumerate(self.images, start=1))

    def __str__(self) -> str:
        return format_endomorphism(self)


def identity_endo(rank: int) -> Endomorphism:
    return Endomorphism(rank, tuple(Word(rank, (i,)) for i in range(1, rank + 1)))


def apply_letters(table: dict[int, tuple[int, ...]], letters: Sequence[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for v in letters:
        for u in table[v]:
            if stack and stack[-1] == -u:
                stack.pop()
            else:
                stack.append(u)
    return tuple(stack)


def apply(f: Endomorphism, w: Word) -> Word:
    if f.rank != w.rank:
        raise ValueError(f"rank mismatch: endomorphism {f.rank}, word {w.rank}")
    return Word(f.rank, apply_letters(f.letter_table(), w.letters))


def compose(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    """``f o g``: apply ``g`` first."""
    if f.rank != g.rank:
        raise ValueError(f"rank mismatch: {f.rank} vs {g.rank}")
    table = f.letter_table()
    return Endomorphism(f.rank, tuple(Word(f.rank, apply_letters(table, img.letters)) for img in g.images))


def compose_all(maps: Sequence[Endomorphism], rank: int) -> Endomorphism:
    """Compose so that ``maps[0]`` is applied first."""
    out = identity_endo(rank)
    for m in maps:
        out = compose(m, out)
    return out


def inner(u: Word) -> Endomorphism:
    """Inner automorphism ``x -> u x u^-1``."""
    ui = invert(u)
    return Endomorphism(
        u.rank,
        tuple(Word(u.rank, free_reduce(u.letters + (i,) + ui.letters)) for i in range(1, u.rank + 1)),
    )


def extend_endo(f: Endomorphism, new_rank: int, fix_new: bool = False) -> Endomorphism:
    """Extend to F_new_rank, sending the new generators to e (or to themselves)."""
    if new_rank < f.rank:
        raise ValueError(f"cannot extend rank {f.rank} endomorphism to rank {new_rank}")
    images = [Word(new_rank, img.letters) for img in f.images]
    for i in range(f.rank + 1, new_rank + 1):
        images.append(Word(new_rank, (i,)) if fix_new else identity(new_rank))
    return Endomorphism(new_rank, tuple(images))


def relabel_endo(f: Endomorphism, used: Sequence[int], new_rank: int) -> Endomorphism:
    """Transport ``f`` on F_k to F_new_rank along x_j -> x_{used[j-1]}.

    Generators outside ``used`` are fixed, so automorphisms stay automorphisms.
    """
    mapping = {j: g for j, g in enumerate(used, start=1)}
    images = [Word(new_rank, (i,)) for i in range(1, new_rank + 1)]
    for j, img in enumerate(f.images, start=1):
        letters = tuple(mapping[abs(v)] * (1 if v > 0 else -1) for v in img.letters)
        images[mapping[j] - 1] = Word(new_rank, letters)
    return Endomorphism(new_rank, tuple(images))


# --- named automorphisms ---------------------------------------------------

class Family(str, enum.Enum):
    INVERT_ALL = "InvertAll"
    SWAP_INVERT = "SwapInvert"
    SWAP = "Swap"
    COR5 = "Cor5"
    COR6_SAME = "Cor6Same"
    COR6_OPP = "Cor6Opp"


_PARAM_COUNT = {
    Family.INVERT_ALL: 0,
    Family.SWAP_INVERT: 0,
    Family.SWAP: 0,
    Family.COR5: 2,
    Family.COR6_SAME: 1,
    Family.COR6_OPP: 1,
}


def _from_images(rank: int, images: dict[int, list[int]]) -> Endomorphism:
    raw = [images.get(i, [i]) for i in range(1, rank + 1)]
    return Endomorphism.from_letters(rank, raw)


def named_family(name: str | Family, params: Sequence[int] = (), rank: int = 2) -> Endomorphism:
    """One of the fixed inverting automorphisms, acting on x1, x2 (others fixed
    except for InvertAll, which inverts every generator).

    Every family member is an involution, so it is its own ``aut_proof``.
    """
    try:
        fam = Family(name)
    except ValueError:
        raise ValueError(f"unknown family {name!r}") from None
    params = list(params)
    if len(params) != _PARAM_COUNT[fam]:
        raise ValueError(f"{fam.value} takes {_PARAM_COUNT[fam]} parameters, got {len(params)}")
    if fam is Family.INVERT_ALL:
        return _from_images(rank, {i: [-i] for i in range(1, rank + 1)})
    if rank < 2:
        raise ValueError(f"{fam.value} needs rank >= 2")
    if fam is Family.SWAP_INVERT:
        return _from_images(rank, {1: [-2], 2: [-1]})
    if fam is Family.SWAP:
        return _from_images(rank, {1: [2], 2: [1]})
    if fam is Family.COR5:
        m2 = params[1]
        p = [2] * m2 if m2 > 0 else [-2] * -m2
        pinv = [-v for v in reversed(p)]
        # x1 -> x2^-m2 x1^-1 x2^m2, x2 -> x2^-1
        return _from_images(rank, {1: pinv + [-1] + p, 2: [-2]})
    m = params[0]
    p = [1] * m if m > 0 else [-1] * -m
    pinv = [-v for v in reversed(p)]
    if fam is Family.COR6_SAME:
        return _from_images(rank, {1: [-1], 2: p + [-2] + pinv})
    return _from_images(rank, {1: [-1], 2: p + [2] + pinv})


# --- certificates ----------------------------------------------------------

class CertKind(str, enum.Enum):
    ENDOMORPHISM = "EndomorphismWitness"
    AUTOMORPHISM = "AutomorphismWitness"


@dataclass(frozen=True)
class InversionCertificate:
    word: Word
    endo: Endomorphism
    kind: CertKind = CertKind.ENDOMORPHISM
    aut_proof: Optional[Endomorphism] = None
    source: str = ""

    def check(self) -> tuple[bool, str]:
        return check_certificate(self)


def automorphism_certificate(word: Word, endo: Endomorphism, inverse: Endomorphism, source: str = "") -> InversionCertificate:
    return InversionCertificate(word, endo, CertKind.AUTOMORPHISM, inverse, source)


def check_certificate(c: InversionCertificate) -> tuple[bool, str]:
    """Return ``(ok, reason)``; reason is "ok" or a short failure code."""
    if c.endo.rank != c.word.rank:
        return False, "rank-mismatch"
    if apply(c.endo, c.word) != invert(c.word):
        return False, "image-not-inverse"
    if c.kind is CertKind.AUTOMORPHISM:
        if c.aut_proof is None:
            return False, "missing-aut-proof"
        if c.aut_proof.rank != c.endo.rank:
            return False, "aut-proof-rank-mismatch"
        if not compose(c.endo, c.aut_proof).is_identity():
            return False, "aut-proof-not-right-inverse"
        if not compose(c.aut_proof, c.endo).is_identity():
            return False, "aut-proof-not-left-inverse"
    return True, "ok"


def verify_certificate(c: InversionCertificate) -> bool:
    return check_certificate(c)[0]


def power_certificate(c: InversionCertificate, k: int) -> InversionCertificate:
    """Same endomorphism certifies ``w^k``, since it maps w^k to w^-k."""
    if k == 0:
        raise ValueError("k must be nonzero")
    if k == 1:
        return c
    return InversionCertificate(power(c.word, k), c.endo, c.kind, c.aut_proof, c.source)


def conjugate_certificate(c: InversionCertificate, sigma: Endomorphism, sigma_inv: Endomorphism) -> InversionCertificate:
    """Certificate for ``sigma(w)`` using ``sigma o phi o sigma^-1``."""
    endo = compose(sigma, compose(c.endo, sigma_inv))
    proof = None
    if c.aut_proof is not None:
        proof = compose(sigma, compose(c.aut_proof, sigma_inv))
    return InversionCertificate(apply(sigma, c.word), endo, c.kind, proof, c.source)


def extend_certificate(c: InversionCertificate, used: Sequence[int], new_rank: int) -> InversionCertificate:
    """Move a certificate for an effective-rank word back to the ambient rank."""
    mapping = {j: g for j, g in enumerate(used, start=1)}
    letters = tuple(mapping[abs(v)] * (1 if v > 0 else -1) for v in c.word.letters)
    word = Word(new_rank, letters)
    endo = relabel_endo(c.endo, used, new_rank)
    proof = relabel_endo(c.aut_proof, used, new_rank) if c.aut_proof is not None else None
    return InversionCertificate(word, endo, c.kind, proof, c.source)


# --- text format -----------------------------------------------------------

def format_endomorphism(f: Endomorphism) -> str:
    return "\n".join(f"x{i} -> {format_word(img)}" for i, img in enumerate(f.images, start=1))


def parse_endomorphism(text: str, rank: int) -> Endomorphism:
    """Parse ``xi -> <word>`` lines; unmentioned generators map to themselves."""
    images: dict[int, Word] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise ParseError(f"line {lineno}: expected 'xi -> word'", 0)
        lhs, rhs = (part.strip() for part in line.split("->", 1))
        if not lhs.startswith("x") or not lhs[1:].isdigit() or int(lhs[1:]) == 0:
            raise ParseError(f"line {lineno}: bad generator {lhs!r}", 0)
        i = int(lhs[1:])
        if i > rank:
            raise ParseError(f"line {lineno}: generator x{i} exceeds rank {rank}", 0)
        if i in images:
            raise ParseError(f"line {lineno}: x{i} given twice", 0)
        try:
            images[i] = parse(rhs, rank)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}", exc.position) from None
    return Endomorphism(rank, tuple(images.get(i, Word(rank, (i,))) for i in range(1, rank + 1)))


__all__ = [
    "CertKind", "Endomorphism", "Family", "InversionCertificate", "apply", "apply_letters",
    "automorphism_certificate", "check_certificate", "compose", "compose_all",
    "conjugate_certificate", "extend_certificate", "extend_endo", "format_endomorphism",
    "identity_endo", "inner", "named_family", "parse_endomorphism", "power_certificate",
    "relabel_endo", "verify_certificate",
]
