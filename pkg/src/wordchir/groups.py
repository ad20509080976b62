"""Finite groups as Cayley tables, and images of word maps on them."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .words import Word, effective_form

DEFAULT_ORDER_CAP = 120
DEFAULT_EVAL_CAP = 10_000_000
FULL_ASSOCIATIVITY_ORDER = 64


class GroupError(ValueError):
    pass


class CapExceeded(GroupError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    name: str
    table: np.ndarray
    identity: int
    inverses: np.ndarray
    labels: tuple[str, ...] = ()

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*(self.element_order(g) for g in range(self.order)))

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = int(self.table[x, g])
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def power(self, g: int, k: int) -> int:
        return int(power_vector(self, np.array([g]), k)[0])

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


def from_table(
    table: Sequence[Sequence[int]] | np.ndarray,
    name: str = "G",
    labels: Sequence[str] = (),
    identity: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> FiniteGroup:
    """Validate a multiplication table and build the group.

    Associativity is checked exhaustively up to order 64, on a random sample
    of triples above that.
    """
    t = np.asarray(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise GroupError("table must be a nonempty square array")
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise GroupError("table entries out of range")
    full = np.arange(n)
    for axis in (0, 1):
        if not np.all(np.sort(t, axis=axis) == (full[:, None] if axis == 0 else full[None, :])):
            raise GroupError("table is not a Latin square")
    if identity is None:
        rows = [e for e in range(n) if np.array_equal(t[e], full)]
        if not rows:
            raise GroupError("no identity element")
        identity = rows[0]
    if not (np.array_equal(t[identity], full) and np.array_equal(t[:, identity], full)):
        raise GroupError(f"element {identity} is not a two-sided identity")
    if n <= FULL_ASSOCIATIVITY_ORDER:
        left = t[t[:, :, None], full[None, None, :]]   # (ab)c
        right = t[full[:, None, None], t[None, :, :]]  # a(bc)
        if not np.array_equal(left, right):
            raise GroupError("table is not associative")
    else:
        rng = rng or np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, 20_000))
        if not np.array_equal(t[t[a, b], c], t[a, t[b, c]]):
            raise GroupError("table is not associative")
    inverses = np.argmax(t == identity, axis=1)
    if not np.all(t[full, inverses] == identity):
        raise GroupError("missing inverses")
    if labels and len(labels) != n:
        raise GroupError("label count does not match order")
    t.setflags(write=False)
    inverses.setflags(write=False)
    return FiniteGroup(name, t, int(identity), inverses, tuple(labels))


def from_elements(elements: Sequence, op: Callable, name: str, label: Callable = str) -> FiniteGroup:
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[op(a, b)]
    return from_table(table, name, [label(e) for e in elements])


# --- catalog ---------------------------------------------------------------

def cyclic(k: int) -> FiniteGroup:
    return from_elements(list(range(k)), lambda a, b: (a + b) % k, f"C{k}")


def dihedral(k: int) -> FiniteGroup:
    """Symmetries of a k-gon, order 2k. Elements (s, r) stand for s^flip r^rot."""
    elems = [(f, r) for f in (0, 1) for r in range(k)]

    def op(a, b):
        f1, r1 = a
        f2, r2 = b
        return ((f1 + f2) % 2, ((r1 if f2 == 0 else -r1) + r2) % k)

    return from_elements(elems, op, f"D{k}", lambda e: ("s" if e[0] else "") + f"r{e[1]}")


def _perm_group(perms: list[tuple[int, ...]], name: str) -> FiniteGroup:
    def op(p, q):
        # p then q, acting on the right
        return tuple(q[p[i]] for i in range(len(p)))

    return from_elements(perms, op, name, _cycle_notation)


def _cycle_notation(p: tuple[int, ...]) -> str:
    seen, cycles = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(str(j + 1))
            j = p[j]
        cycles.append("(" + " ".join(cyc) + ")")
    return "".join(cycles) or "()"


def _parity(p: tuple[int, ...]) -> int:
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return inv % 2


def symmetric(k: int) -> FiniteGroup:
    if not 1 <= k <= 5:
        raise GroupError("symmetric groups are built for k <= 5")
    return _perm_group(sorted(permutations(range(k))), f"S{k}")


def alternating(k: int) -> FiniteGroup:
    if not 1 <= k <= 5:
        raise GroupError("alternating groups are built for k <= 5")
    return _perm_group([p for p in sorted(permutations(range(k))) if _parity(p) == 0], f"A{k}")


_QUAT = {
    # unit * unit -> (sign, unit)
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


def quaternion() -> FiniteGroup:
    elems = [(s, u) for u in "1ijk" for s in (1, -1)]

    def op(a, b):
        sign, unit = _QUAT[(a[1], b[1])]
        return (a[0] * b[0] * sign, unit)

    return from_elements(elems, op, "Q8", lambda e: ("-" if e[0] < 0 else "") + e[1])


def direct_product(g: FiniteGroup, h: FiniteGroup, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    n, m = g.order, h.order
    if n * m > order_cap:
        raise CapExceeded(f"{g.name}x{h.name} has order {n * m} > cap {order_cap}")
    table = (g.table[:, None, :, None] * m + h.table[None, :, None, :]).reshape(n * m, n * m)
    labels = [f"({g.label(a)},{h.label(b)})" for a in range(n) for b in range(m)]
    return from_table(table, f"{g.name}x{h.name}", labels, identity=g.identity * m + h.identity)


_FACTOR = re.compile(r"^(C|D|S|A|Q)(\d+)$")


def _factor(name: str, order_cap: int) -> FiniteGroup:
    m = _FACTOR.match(name)
    if not m:
        raise GroupError(f"unknown group family {name!r}")
    fam, k = m.group(1), int(m.group(2))
    if k <= 0:
        raise GroupError(f"bad parameter in {name!r}")
    orders = {"C": k, "D": 2 * k, "Q": 8, "S": math.factorial(k), "A": max(1, math.factorial(k) // 2)}
    if orders[fam] > order_cap:
        raise CapExceeded(f"{name} has order {orders[fam]} > cap {order_cap}")
    if fam == "C":
        return cyclic(k)
    if fam == "D":
        return dihedral(k)
    if fam == "S":
        return symmetric(k)
    if fam == "A":
        return alternating(k)
    if k != 8:
        raise GroupError("only Q8 is available among quaternion groups")
    return quaternion()


def catalog(spec: str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Build a group from a name like ``C6``, ``D4``, ``S3``, ``A5``, ``Q8``
    or a direct product ``C2xS3``."""
    parts = [p.strip() for p in spec.strip().split("x")]
    if not parts or any(not p for p in parts):
        raise GroupError(f"bad group descriptor {spec!r}")
    group = _factor(parts[0], order_cap)
    for p in parts[1:]:
        group = direct_product(group, _factor(p, order_cap), order_cap)
    return group


DEFAULT_CATALOG = "C2,C3,C4,C5,C6,C2xC2,S3,D4,Q8,D5,A4,D6,C2xS3,S4,C2xQ8,A5"


def catalog_list(spec: str = "default", order_cap: int = DEFAULT_ORDER_CAP) -> list[FiniteGroup]:
    """Comma-separated names; ``default`` expands to a built-in small catalog.
    Entries naming existing files are read as Cayley table files."""
    names: list[str] = []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        names.extend(DEFAULT_CATALOG.split(",") if item == "default" else [item])
    groups = []
    for name in names:
        if Path(name).is_file():
            groups.append(read_cayley_file(name))
        else:
            groups.append(catalog(name, order_cap))
    return groups


def load_group(name_or_path: str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if Path(name_or_path).is_file():
        return read_cayley_file(name_or_path)
    return catalog(name_or_path, order_cap)


# --- Cayley table files ----------------------------------------------------

def parse_cayley(text: str, name: str = "G") -> FiniteGroup:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    try:
        key, val = lines[0].split()
        if key != "order":
            raise ValueError
        n = int(val)
        key, val = lines[1].split()
        if key != "identity":
            raise ValueError
        ident = int(val)
    except (ValueError, IndexError):
        raise GroupError("expected 'order n' and 'identity i' header lines") from None
    rows = []
    for lineno, ln in enumerate(lines[2 : 2 + n], start=3):
        try:
            row = [int(x) for x in ln.split()]
        except ValueError:
            raise GroupError(f"row {lineno}: non-integer entry") from None
        if len(row) != n:
            raise GroupError(f"row {lineno}: expected {n} entries")
        rows.append(row)
    if len(rows) != n:
        raise GroupError(f"expected {n} table rows, got {len(rows)}")
    labels = [str(i) for i in range(n)]
    have_labels = False
    for ln in lines[2 + n :]:
        parts = ln.split(maxsplit=2)
        if len(parts) != 3 or parts[0] != "label":
            raise GroupError(f"unexpected line {ln!r}")
        i = int(parts[1])
        if not 0 <= i < n:
            raise GroupError(f"label index {i} out of range")
        labels[i] = parts[2]
        have_labels = True
    return from_table(rows, name, labels if have_labels else (), identity=ident)


def format_cayley(g: FiniteGroup) -> str:
    out = [f"order {g.order}", f"identity {g.identity}"]
    out += [" ".join(str(int(x)) for x in row) for row in g.table]
    if g.labels:
        out += [f"label {i} {lab}" for i, lab in enumerate(g.labels)]
    return "\n".join(out) + "\n"


def read_cayley_file(path: str | Path) -> FiniteGroup:
    p = Path(path)
    return parse_cayley(p.read_text(), name=p.stem)


# --- word maps -------------------------------------------------------------

def power_vector(g: FiniteGroup, elems: np.ndarray, k: int) -> np.ndarray:
    """Elementwise ``elems ** k`` by square-and-multiply, exponent reduced
    modulo the group exponent."""
    k %= g.exponent
    result = np.full_like(elems, g.identity)
    base = elems
    while k:
        if k & 1:
            result = g.table[result, base]
        base = g.table[base, base]
        k >>= 1
    return result


@dataclass(frozen=True)
class ImageSet:
    group_name: str
    word: Word
    members: frozenset[int] = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.members)


def evaluate(g: FiniteGroup, w: Word, assignment: Sequence[int]) -> int:
    """``w(g_1, ..., g_n)`` for one tuple, by naive letter-by-letter product."""
    x = g.identity
    for v in w.letters:
        a = assignment[abs(v) - 1]
        x = g.mul(x, a if v > 0 else int(g.inverses[a]))
    return x


def image(g: FiniteGroup, w: Word, eval_cap: int = DEFAULT_EVAL_CAP) -> ImageSet:
    """Exact image of the word map ``w`` on ``g`` by full enumeration."""
    eff, _ = effective_form(w)
    k = len(w.generators_used())
    n = g.order
    tuples = n**k
    if tuples > eval_cap:
        raise CapExceeded(
            f"{g.name}: {n}^{k} = {tuples} tuples exceeds eval cap {eval_cap}; "
            "raise --cap or use smaller groups"
        )
    if k == 0:
        return ImageSet(g.name, w, frozenset({g.identity}))
    grids = np.indices((n,) * k, dtype=np.int64).reshape(k, -1)
    acc = np.full(tuples, g.identity, dtype=np.int64)
    for gen, e in eff.syllables():
        acc = g.table[acc, power_vector(g, grids[gen - 1], e)]
    return ImageSet(g.name, w, frozenset(int(x) for x in np.unique(acc)))


def is_inverse_closed(s: ImageSet, g: FiniteGroup) -> bool:
    return s.members == frozenset(int(g.inverses[m]) for m in s.members)


def surjectivity_check(w: Word, g: FiniteGroup, eval_cap: int = DEFAULT_EVAL_CAP) -> bool:
    return len(image(g, w, eval_cap)) == g.order


@dataclass
class WitnessSweep:
    witness: Optional[tuple[str, int, str]] = None
    checked: list[str] = field(default_factory=list)
    errors: dict[str, str] = field(default_factory=dict)
    group: Optional[FiniteGroup] = None


def chirality_sweep(w: Word, groups: Sequence[FiniteGroup], eval_cap: int = DEFAULT_EVAL_CAP) -> WitnessSweep:
    """Look for a group whose image of ``w`` is not closed under inverses."""
    sweep = WitnessSweep()
    for g in groups:
        try:
            s = image(g, w, eval_cap)
        except CapExceeded as exc:
            sweep.errors[g.name] = str(exc)
            continue
        sweep.checked.append(g.name)
        for m in sorted(s.members):
            if int(g.inverses[m]) not in s.members:
                sweep.witness = (g.name, m, g.label(m))
                sweep.group = g
                return sweep
    return sweep


def chirality_witness(w: Word, groups: Sequence[FiniteGroup], eval_cap: int = DEFAULT_EVAL_CAP) -> Optional[tuple[str, int]]:
    """First ``(group name, element)`` with the element in G_w but its inverse
    not; None means no catalog group separates w from w^-1."""
    found = chirality_sweep(w, groups, eval_cap).witness
    return None if found is None else found[:2]


def check_witness(w: Word, g: FiniteGroup, element: int, eval_cap: int = DEFAULT_EVAL_CAP) -> bool:
    s = image(g, w, eval_cap)
    return element in s.members and int(g.inverses[element]) not in s.members


__all__ = [
    "CapExceeded", "DEFAULT_CATALOG", "DEFAULT_EVAL_CAP", "FiniteGroup", "GroupError", "ImageSet",
    "alternating", "catalog", "catalog_list", "check_witness", "chirality_sweep",
    "chirality_witness", "cyclic", "dihedral", "direct_product", "evaluate", "format_cayley",
    "from_elements", "from_table", "image", "is_inverse_closed", "load_group", "parse_cayley",
    "power_vector", "quaternion", "read_cayley_file", "surjectivity_check", "symmetric",
]
