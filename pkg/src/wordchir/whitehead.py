"""Whitehead's algorithm: Aut(F_n)-orbit equivalence of words, with the
automorphism made explicit.

Search runs on cyclic words (conjugacy classes). Any conjugacy-level match
is repaired into an exact one by composing with an inner automorphism.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations, product
from typing import Optional, Sequence

from .morphism import (
    Endomorphism,
    InversionCertificate,
    apply,
    apply_letters,
    automorphism_certificate,
    compose,
    compose_all,
    identity_endo,
    inner,
)
from .words import Word, alphabet, cyclic_core, cyclic_reduce, invert

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 1_000_000


class Indeterminate(RuntimeError):
    """The node budget ran out before the level graph was fully explored."""

    def __init__(self, message: str, stats: SearchStats):
        super().__init__(message)
        self.stats = stats


@dataclass(frozen=True)
class WhiteheadMove:
    """Type I: ``perm[i-1]`` is the signed image letter of x_i.
    Type II: ``multiplier`` a and ``cut_set`` A with a in A, a^-1 not in A.
    """

    kind: str
    rank: int
    perm: tuple[int, ...] = ()
    multiplier: int = 0
    cut_set: frozenset[int] = frozenset()

    def __post_init__(self):
        if self.kind == "I":
            if sorted(abs(v) for v in self.perm) != list(range(1, self.rank + 1)):
                raise ValueError(f"not a signed permutation: {self.perm}")
        elif self.kind == "II":
            a, A = self.multiplier, self.cut_set
            if a == 0 or abs(a) > self.rank or a not in A or -a in A:
                raise ValueError(f"invalid type II descriptor ({a}, {sorted(A)})")
            if any(v == 0 or abs(v) > self.rank for v in A):
                raise ValueError("cut set letter out of range")
        else:
            raise ValueError(f"unknown move kind {self.kind!r}")

    @cached_property
    def table(self) -> dict[int, tuple[int, ...]]:
        images: dict[int, tuple[int, ...]] = {}
        if self.kind == "I":
            for i, v in enumerate(self.perm, start=1):
                images[i] = (v,)
        else:
            a, A = self.multiplier, self.cut_set
            for i in range(1, self.rank + 1):
                if i == abs(a):
                    images[i] = (i,)
                    continue
                pre = (-a,) if -i in A else ()
                post = (a,) if i in A else ()
                images[i] = pre + (i,) + post
        for i in range(1, self.rank + 1):
            images[-i] = tuple(-v for v in reversed(images[i]))
        return images

    def endomorphism(self) -> Endomorphism:
        return Endomorphism(self.rank, tuple(Word(self.rank, self.table[i]) for i in range(1, self.rank + 1)))

    def inverse(self) -> WhiteheadMove:
        if self.kind == "I":
            inv = [0] * self.rank
            for i, v in enumerate(self.perm, start=1):
                inv[abs(v) - 1] = i if v > 0 else -i
            return WhiteheadMove("I", self.rank, perm=tuple(inv))
        a = self.multiplier
        return WhiteheadMove("II", self.rank, multiplier=-a, cut_set=(self.cut_set - {a}) | {-a})

    @property
    def is_identity(self) -> bool:
        if self.kind == "I":
            return self.perm == tuple(range(1, self.rank + 1))
        return self.cut_set == frozenset({self.multiplier})

    @property
    def is_inner(self) -> bool:
        """Acts trivially on conjugacy classes."""
        if self.is_identity:
            return True
        return self.kind == "II" and self.cut_set == frozenset(alphabet(self.rank)) - {-self.multiplier}

    def describe(self) -> str:
        if self.kind == "I":
            return "I(" + ",".join(str(v) for v in self.perm) + ")"
        return f"II({self.multiplier};{','.join(str(v) for v in sorted(self.cut_set, key=_code))})"

    def __str__(self) -> str:
        return self.describe()


def enumerate_moves(rank: int) -> list[WhiteheadMove]:
    """All type I moves followed by all type II descriptors."""
    if rank <= 0:
        raise ValueError("rank must be positive")
    moves = []
    for perm in permutations(range(1, rank + 1)):
        for signs in product((1, -1), repeat=rank):
            moves.append(WhiteheadMove("I", rank, perm=tuple(p * s for p, s in zip(perm, signs))))
    letters = alphabet(rank)
    for a in letters:
        others = [v for v in letters if v not in (a, -a)]
        for k in range(len(others) + 1):
            for extra in combinations(others, k):
                moves.append(WhiteheadMove("II", rank, multiplier=a, cut_set=frozenset((a,) + extra)))
    return moves


_MOVE_CACHE: dict[int, tuple[list[WhiteheadMove], list[WhiteheadMove], list[WhiteheadMove]]] = {}


def _search_moves(rank: int) -> tuple[list[WhiteheadMove], list[WhiteheadMove], list[WhiteheadMove]]:
    """(all nontrivial moves, nontrivial type II, nontrivial type I)."""
    if rank not in _MOVE_CACHE:
        useful = [m for m in enumerate_moves(rank) if not m.is_inner]
        _MOVE_CACHE[rank] = (
            useful,
            [m for m in useful if m.kind == "II"],
            [m for m in useful if m.kind == "I"],
        )
    return _MOVE_CACHE[rank]


# --- cyclic words ----------------------------------------------------------

def _code(v: int) -> int:
    # letter order x1 < x1^-1 < x2 < x2^-1 < ...
    return 2 * (abs(v) - 1) + (v < 0)


def canonical(letters: Sequence[int]) -> tuple[int, ...]:
    """Least rotation of a cyclically reduced word under the letter order."""
    n = len(letters)
    if n <= 1:
        return tuple(letters)
    codes = [_code(v) for v in letters]
    if n <= 256:
        doubled = codes + codes
        best = min(range(n), key=lambda i: doubled[i : i + n])
    else:
        best = _least_rotation(codes)
    return tuple(letters[best:]) + tuple(letters[:best])


def _least_rotation(s: list[int]) -> int:
    # Booth's algorithm
    doubled = s + s
    f = [-1] * len(doubled)
    k = 0
    for j in range(1, len(doubled)):
        sj = doubled[j]
        i = f[j - k - 1]
        while i != -1 and sj != doubled[k + i + 1]:
            if sj < doubled[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != doubled[k + i + 1]:
            if sj < doubled[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def _key(letters: Sequence[int]) -> tuple[int, ...]:
    return tuple(_code(v) for v in canonical(letters))


def apply_move(m: WhiteheadMove, w: Word) -> Word:
    """Cyclically reduced image of the cyclic word ``w`` under ``m``."""
    if m.rank != w.rank:
        raise ValueError("rank mismatch")
    if cyclic_core(w.letters) != w.letters:
        raise ValueError("word is not cyclically reduced")
    return Word(w.rank, cyclic_core(apply_letters(m.table, w.letters)))


def _minimize_letters(core: tuple[int, ...], rank: int) -> tuple[tuple[int, ...], list[WhiteheadMove]]:
    _, type2, _ = _search_moves(rank)
    trace: list[WhiteheadMove] = []
    cur = core
    while True:
        best = None
        best_key = None
        for m in type2:
            img = cyclic_core(apply_letters(m.table, cur))
            if len(img) < len(cur):
                key = (len(img), _key(img))
                if best_key is None or key < best_key:
                    best, best_key = (img, m), key
        if best is None:
            return cur, trace
        cur = best[0]
        trace.append(best[1])


def minimize(w: Word) -> tuple[Word, list[WhiteheadMove]]:
    """Greedy Whitehead descent on the cyclic word of ``w``.

    Returns a shortest cyclic word in the Aut-orbit and the moves taking the
    cyclically reduced core of ``w`` to it.
    """
    core, _ = cyclic_reduce(w)
    letters, trace = _minimize_letters(core.letters, w.rank)
    return Word(w.rank, letters), trace


@dataclass
class SearchStats:
    nodes_explored: int = 0
    peak_frontier: int = 0
    minimal_length: int = 0
    level_size: int = 0
    complete: bool = False


@dataclass
class OrbitSearchResult:
    found: bool
    source: Word
    target: Word
    automorphism: Optional[Endomorphism] = None
    inverse: Optional[Endomorphism] = None
    move_trace: list[WhiteheadMove] = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)

    def certificate(self, source: str = "AutOrbit") -> InversionCertificate:
        """Inversion certificate, valid when ``target`` is ``source`` inverted."""
        if not self.found:
            raise ValueError("no automorphism was found")
        return automorphism_certificate(self.source, self.automorphism, self.inverse, source)


def conjugator(a: Word, b: Word) -> Optional[Word]:
    """Some ``t`` with ``a = t b t^-1``, or None if a and b are not conjugate."""
    ka, ca = cyclic_reduce(a)
    kb, cb = cyclic_reduce(b)
    if len(ka) != len(kb):
        return None
    n = len(kb)
    if n == 0:
        j = 0
    else:
        for j in range(n):
            if kb.letters[j:] + kb.letters[:j] == ka.letters:
                break
        else:
            return None
    # ka = p^-1 kb p with p = kb[:j]
    p = Word(a.rank, kb.letters[:j])
    return ca * invert(p) * invert(cb)


def _level_search(
    start: tuple[int, ...], goal: tuple[int, ...], rank: int, budget: int, stats: SearchStats
) -> Optional[list[WhiteheadMove]]:
    moves, _, _ = _search_moves(rank)
    length = len(start)
    if start == goal:
        stats.level_size = 1
        return []
    parent: dict[tuple[int, ...], tuple[Optional[tuple[int, ...]], Optional[WhiteheadMove]]] = {start: (None, None)}
    frontier = deque([start])
    while frontier:
        if stats.nodes_explored >= budget:
            raise Indeterminate(
                f"node budget {budget} exhausted with {len(frontier)} nodes pending", stats
            )
        node = frontier.popleft()
        stats.nodes_explored += 1
        for m in moves:
            img = cyclic_core(apply_letters(m.table, node))
            if len(img) != length:
                continue
            c = canonical(img)
            if c in parent:
                continue
            parent[c] = (node, m)
            if c == goal:
                path = []
                cur = c
                while parent[cur][0] is not None:
                    prev, mv = parent[cur]
                    path.append(mv)
                    cur = prev
                stats.level_size = len(parent)
                return path[::-1]
            frontier.append(c)
        stats.peak_frontier = max(stats.peak_frontier, len(frontier))
    stats.level_size = len(parent)
    stats.complete = True
    return None


def orbit_equivalent(u: Word, v: Word, budget: int = DEFAULT_BUDGET) -> OrbitSearchResult:
    """Decide whether some automorphism sends ``u`` to ``v`` exactly.

    Raises :class:`Indeterminate` if the level graph is larger than ``budget``.
    """
    if u.rank != v.rank:
        raise ValueError(f"rank mismatch: {u.rank} vs {v.rank}")
    rank = u.rank
    stats = SearchStats()
    if u == v:
        stats.complete = True
        stats.minimal_length = len(minimize(u)[0])
        return OrbitSearchResult(True, u, v, identity_endo(rank), identity_endo(rank), [], stats)
    if u.is_identity or v.is_identity:
        found = u.is_identity and v.is_identity
        res = OrbitSearchResult(found, u, v, stats=stats)
        if found:
            res.automorphism = res.inverse = identity_endo(rank)
        stats.complete = True
        return res

    core_u, _ = cyclic_reduce(u)
    core_v, _ = cyclic_reduce(v)
    min_u, trace_u = _minimize_letters(core_u.letters, rank)
    min_v, trace_v = _minimize_letters(core_v.letters, rank)
    stats.minimal_length = len(min_u)
    if len(min_u) != len(min_v):
        stats.complete = True
        return OrbitSearchResult(False, u, v, stats=stats)

    path = _level_search(canonical(min_u), canonical(min_v), rank, budget, stats)
    if path is None:
        log.debug("level graph of size %d exhausted without match", stats.level_size)
        return OrbitSearchResult(False, u, v, stats=stats)

    full = trace_u + path + [m.inverse() for m in reversed(trace_v)]
    sigma = compose_all([m.endomorphism() for m in full], rank)
    sigma_inv = compose_all([m.inverse().endomorphism() for m in reversed(full)], rank)
    t = conjugator(apply(sigma, u), v)
    if t is None:
        raise AssertionError("composed moves did not reach the target conjugacy class")
    result = compose(inner(invert(t)), sigma)
    result_inv = compose(sigma_inv, inner(t))
    if apply(result, u) != v:
        raise AssertionError("exactness repair failed")
    return OrbitSearchResult(True, u, v, result, result_inv, full, stats)


def aut_inverts(w: Word, budget: int = DEFAULT_BUDGET) -> OrbitSearchResult:
    """Is there an automorphism sending ``w`` to ``w^-1``?"""
    return orbit_equivalent(w, invert(w), budget)


__all__ = [
    "DEFAULT_BUDGET", "Indeterminate", "OrbitSearchResult", "SearchStats", "WhiteheadMove",
    "apply_move", "aut_inverts", "canonical", "conjugator", "enumerate_moves", "minimize",
    "orbit_equivalent",
]
