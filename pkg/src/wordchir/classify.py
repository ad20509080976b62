"""Chirality verdicts: cheap algebraic rules, then Whitehead search, then a
finite-group sweep. Every Achiral verdict carries a checked certificate."""
from __future__ import annotations

import enum
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from .groups import DEFAULT_EVAL_CAP, FiniteGroup, catalog_list, chirality_sweep
from .morphism import (
    CertKind,
    Endomorphism,
    Family,
    InversionCertificate,
    automorphism_certificate,
    check_certificate,
    conjugate_certificate,
    extend_certificate,
    identity_endo,
    named_family,
    power_certificate,
)
from .whitehead import DEFAULT_BUDGET, Indeterminate, aut_inverts
from .words import (
    Word,
    commutator,
    conjugate,
    count_reduced_words,
    cyclic_reduce,
    effective_form,
    exponent_vector,
    generator,
    is_palindrome,
    iter_reduced_words,
    power,
    relabel,
)

log = logging.getLogger(__name__)

DEFAULT_CENSUS_MAX = 7


class Status(str, enum.Enum):
    ACHIRAL = "Achiral"
    CHIRAL = "Chiral"
    UNDECIDED = "Undecided"


class Rule(str, enum.Enum):
    IDENTITY = "Identity"
    GCD_SURJECTIVE = "GcdSurjective"
    PALINDROME = "Palindrome"
    TWO_BLOCK = "TwoBlock"
    FOUR_BLOCK = "FourBlock"
    POWER_REDUCE = "PowerReduce"
    AUT_ORBIT = "AutOrbit"
    TEST_WORD = "TestWordChiral"
    FINITE_WITNESS = "FiniteWitness"
    RANK_EMBED = "RankEmbed"


@dataclass
class RuleFiring:
    rule: Rule
    outcome: str
    params: dict[str, Any] = field(default_factory=dict)
    certificate: Optional[InversionCertificate] = None


@dataclass
class Verdict:
    word: Word
    status: Status
    reasons: list[RuleFiring] = field(default_factory=list)
    certificates: list[InversionCertificate] = field(default_factory=list)
    witness: Optional[dict[str, Any]] = None
    aut_invertible: Optional[bool] = None
    in_d2: Optional[bool] = None
    stats: dict[str, Any] = field(default_factory=dict)

    def fired(self, rule: Rule) -> bool:
        return any(r.rule is rule and r.outcome != "abstain" for r in self.reasons)

    def firing(self, rule: Rule) -> Optional[RuleFiring]:
        for r in self.reasons:
            if r.rule is rule:
                return r
        return None


@dataclass
class ClassifyOptions:
    budget: int = DEFAULT_BUDGET
    eval_cap: int = DEFAULT_EVAL_CAP
    groups: Optional[Sequence[FiniteGroup]] = None
    sweep: bool = True
    run_whitehead: bool = True

    def catalog(self) -> Sequence[FiniteGroup]:
        if self.groups is None:
            self.groups = catalog_list("default")
        return self.groups


class SoundnessError(AssertionError):
    """A rule produced a certificate that does not verify, or the pipeline
    reached contradictory conclusions."""


def _checked(c: InversionCertificate) -> InversionCertificate:
    ok, why = check_certificate(c)
    if not ok:
        raise SoundnessError(f"{c.source} certificate for {c.word} failed: {why}")
    return c


# --- individual rules ------------------------------------------------------

def _bezout(values: Sequence[int]) -> tuple[int, list[int]]:
    """gcd and coefficients c with sum(c_i * v_i) == gcd (gcd >= 0)."""
    g, coeffs = 0, [0] * len(values)
    for i, v in enumerate(values):
        if v == 0:
            continue
        # extended Euclid on (g, v)
        old_r, r = g, v
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coeffs = [c * old_s for c in coeffs]
        coeffs[i] = old_t
        g = old_r
    return g, coeffs


def rule_gcd(w: Word) -> Optional[RuleFiring]:
    """Fires when the exponent sums have gcd 1, so w maps onto every group.

    The certificate sends x_i to w^(-c_i) where sum(c_i e_i) = 1; the images
    are powers of w, hence commute, and w goes to w^-1.
    """
    e = exponent_vector(w)
    g, coeffs = _bezout(e)
    if g != 1:
        return None
    endo = Endomorphism(w.rank, tuple(power(w, -c) for c in coeffs))
    cert = _checked(InversionCertificate(w, endo, CertKind.ENDOMORPHISM, None, Rule.GCD_SURJECTIVE.value))
    return RuleFiring(Rule.GCD_SURJECTIVE, "achiral", {"exponents": list(e), "gcd": g, "bezout": coeffs}, cert)


def _relabeling(a: int, b: int, rank: int) -> tuple[Endomorphism, Endomorphism]:
    """Permutation automorphism sending x1 -> x_a, x2 -> x_b, and its inverse."""
    rest = [i for i in range(1, rank + 1) if i not in (a, b)]
    target = [a, b] + rest
    fwd = Endomorphism.from_letters(rank, [[t] for t in target])
    back = [[0]] * rank
    for i, t in enumerate(target, start=1):
        back[t - 1] = [i]
    return fwd, Endomorphism.from_letters(rank, back)


def _family_cert(w: Word, a: int, b: int, fam: Family, params: list[int], rule: Rule) -> InversionCertificate:
    base = named_family(fam, params, rank=w.rank)
    sigma, sigma_inv = _relabeling(a, b, w.rank)
    pattern = Word(w.rank, tuple(sigma_inv.letter_table()[v][0] for v in w.letters))
    c = automorphism_certificate(pattern, base, base, rule.value)
    return conjugate_certificate(c, sigma, sigma_inv)


def rule_patterns(w: Word) -> Optional[RuleFiring]:
    """Palindromes, two-block words and four-block words a^m b^s a^n b^(+-s)."""
    if w.is_identity:
        return None
    if is_palindrome(w):
        f = named_family(Family.INVERT_ALL, rank=w.rank)
        cert = _checked(automorphism_certificate(w, f, f, Rule.PALINDROME.value))
        return RuleFiring(Rule.PALINDROME, "achiral", {"family": Family.INVERT_ALL.value}, cert)
    syl = w.syllables()
    if len(syl) == 2 and w.rank >= 2:
        (a, m1), (b, m2) = syl
        cert = _checked(_family_cert(w, a, b, Family.COR5, [m1, m2], Rule.TWO_BLOCK))
        return RuleFiring(Rule.TWO_BLOCK, "achiral", {"generators": [a, b], "exponents": [m1, m2], "family": "Cor5"}, cert)
    if len(syl) == 4 and w.rank >= 2:
        (a, m), (b, e1), (a2, n), (b2, e2) = syl
        if a == a2 and b == b2 and abs(e1) == abs(e2):
            fam = Family.COR6_SAME if e1 == e2 else Family.COR6_OPP
            cert = _checked(_family_cert(w, a, b, fam, [m], Rule.FOUR_BLOCK))
            params = {"generators": [a, b], "m": m, "n": n, "eps": [e1, e2], "family": fam.value}
            return RuleFiring(Rule.FOUR_BLOCK, "achiral", params, cert)
    return None


def rule_power(w: Word) -> Optional[tuple[Word, int]]:
    """``(root, k)`` with ``w = root^k`` and k >= 2 maximal, else None."""
    core, conj = cyclic_reduce(w)
    n = len(core)
    for p in range(1, n // 2 + 1):
        if n % p == 0 and core.letters == core.letters[:p] * (n // p):
            root = conj * Word(w.rank, core.letters[:p]) * ~conj
            return root, n // p
    return None


def is_test_word_f2(w: Word) -> bool:
    eff, used = effective_form(w)
    return len(used) == 2 and all(x == 0 for x in exponent_vector(eff))


def rule_testword_f2(w: Word) -> Optional[RuleFiring]:
    """Fires on nontrivial words of effective rank 2 with zero exponent sums,
    i.e. nontrivial elements of the commutator subgroup of F_2."""
    if not is_test_word_f2(w):
        return None
    return RuleFiring(Rule.TEST_WORD, "test-word", {"generators": w.generators_used()})


# --- pipeline --------------------------------------------------------------

def _trivial(w: Word) -> Verdict:
    ident = identity_endo(w.rank)
    cert = _checked(automorphism_certificate(w, ident, ident, Rule.IDENTITY.value))
    return Verdict(w, Status.ACHIRAL, [RuleFiring(Rule.IDENTITY, "achiral", {}, cert)], [cert], aut_invertible=True)


def _transport_firing(r: RuleFiring, used: list[int], rank: int) -> RuleFiring:
    """Restate a firing on the effective word in the original generators."""
    mapping = {j: g for j, g in enumerate(used, start=1)}
    params = dict(r.params)
    for key, val in params.items():
        if isinstance(val, Word):
            params[key] = relabel(val, mapping, rank)
    if "generators" in params and r.rule is not Rule.RANK_EMBED:
        params["generators"] = [mapping[g] for g in params["generators"]]
    cert = extend_certificate(r.certificate, used, rank) if r.certificate is not None else None
    return RuleFiring(r.rule, r.outcome, params, cert)


def classify(w: Word, options: Optional[ClassifyOptions] = None) -> Verdict:
    options = options or ClassifyOptions()
    if w.is_identity:
        return _trivial(w)

    eff, used = effective_form(w)
    if eff.rank < w.rank:
        inner_v = classify(eff, options)
        reasons = [RuleFiring(Rule.RANK_EMBED, "transported", {"generators": used, "effective_rank": eff.rank})]
        reasons += [_transport_firing(r, used, w.rank) for r in inner_v.reasons]
        certs = [_checked(extend_certificate(c, used, w.rank)) for c in inner_v.certificates]
        v = Verdict(
            w, inner_v.status, reasons, certs, inner_v.witness,
            inner_v.aut_invertible, inner_v.in_d2, inner_v.stats,
        )
        return v

    found_power = rule_power(w)
    if found_power is not None:
        root, k = found_power
        rv = classify(root, options)
        certs = [_checked(power_certificate(c, k)) for c in rv.certificates]
        firing = RuleFiring(Rule.POWER_REDUCE, "lifted", {"root": root, "k": k, "root_status": rv.status.value})
        return Verdict(
            w, rv.status, [firing] + rv.reasons, certs, rv.witness, rv.aut_invertible,
            rv.in_d2 if rv.in_d2 is not None else None, rv.stats,
        )

    reasons: list[RuleFiring] = []
    certs: list[InversionCertificate] = []
    stats: dict[str, Any] = {}

    for rule in (rule_gcd, rule_patterns):
        r = rule(w)
        if r is not None:
            reasons.append(r)
            certs.append(r.certificate)

    aut_found: Optional[bool] = None
    if options.run_whitehead:
        try:
            res = aut_inverts(w, options.budget)
        except Indeterminate as exc:
            stats["whitehead"] = vars(exc.stats).copy()
            reasons.append(RuleFiring(Rule.AUT_ORBIT, "indeterminate", {"budget": options.budget}))
        else:
            stats["whitehead"] = vars(res.stats).copy()
            aut_found = res.found
            if res.found:
                cert = _checked(res.certificate(Rule.AUT_ORBIT.value))
                certs.append(cert)
                reasons.append(RuleFiring(Rule.AUT_ORBIT, "inverted", {"moves": len(res.move_trace)}, cert))
            else:
                reasons.append(RuleFiring(Rule.AUT_ORBIT, "not-inverted", {"complete": res.stats.complete}))
    if aut_found is None and any(c.kind is CertKind.AUTOMORPHISM for c in certs):
        aut_found = True

    status = Status.ACHIRAL if certs else Status.UNDECIDED
    in_d2 = None
    tw = rule_testword_f2(w)
    if tw is not None:
        reasons.append(tw)
        if aut_found is True:
            in_d2 = True
        elif aut_found is False:
            if certs:
                raise SoundnessError(f"{w}: test word with an inverting certificate but no inverting automorphism")
            tw.outcome = "chiral"
            status = Status.CHIRAL
            in_d2 = False

    witness = None
    if status is Status.UNDECIDED and options.sweep:
        sweep = chirality_sweep(w, options.catalog(), options.eval_cap)
        stats["sweep"] = {"checked": sweep.checked, "errors": sweep.errors}
        if sweep.witness is not None:
            name, elem, label = sweep.witness
            witness = {"group": name, "element": elem, "label": label}
            reasons.append(RuleFiring(Rule.FINITE_WITNESS, "chiral", dict(witness)))
            status = Status.CHIRAL
        else:
            reasons.append(RuleFiring(Rule.FINITE_WITNESS, "abstain", {"checked": len(sweep.checked)}))

    return Verdict(w, status, reasons, certs, witness, aut_found, in_d2, stats)


# --- census and named words -------------------------------------------------

@dataclass
class CensusReport:
    length: int
    rank: int
    total: int
    expected_total: int
    aut_invertible: int
    non_aut_invertible: list[Word]
    indeterminate: list[Word]
    histogram: dict[str, int]
    verdicts: list[Verdict] = field(default_factory=list, repr=False)


def census(length: int, rank: int = 2, options: Optional[ClassifyOptions] = None, max_length: int = DEFAULT_CENSUS_MAX) -> CensusReport:
    """Classify every reduced word of exactly ``length`` letters."""
    if length < 1 or length > max_length:
        raise ValueError(f"census length must be in 1..{max_length}")
    options = options or ClassifyOptions()
    verdicts = [classify(w, options) for w in iter_reduced_words(rank, length)]
    hist = Counter(v.status.value for v in verdicts)
    return CensusReport(
        length=length,
        rank=rank,
        total=len(verdicts),
        expected_total=count_reduced_words(rank, length),
        aut_invertible=sum(1 for v in verdicts if v.aut_invertible is True),
        non_aut_invertible=[v.word for v in verdicts if v.aut_invertible is False],
        indeterminate=[v.word for v in verdicts if v.aut_invertible is None],
        histogram=dict(hist),
        verdicts=verdicts,
    )


def engel(n: int, convention: str = "standard", rank: int = 2) -> Word:
    """``e_1 = [x1, x2]`` and ``e_(k+1) = [e_k, x2]``."""
    if n < 1:
        raise ValueError("engel index must be >= 1")
    x, y = generator(1, rank), generator(2, rank)
    e = commutator(x, y, convention)
    for _ in range(n - 1):
        e = commutator(e, y, convention)
    return e


def long_commutator(exponent: int = 440, convention: str = "left") -> Word:
    """The commutator ``[X (X)^(Y) X, (Y)^(X Y) Y]`` with ``X = x1^exponent``
    and ``Y = x2^exponent``; conjugation follows ``convention``."""
    X = power(generator(1, 2), exponent)
    Y = power(generator(2, 2), exponent)
    left = X * conjugate(X, Y, convention) * X
    right = conjugate(Y, X * Y, convention) * Y
    return commutator(left, right)


def gcd_of(values: Sequence[int]) -> int:
    return math.gcd(*values) if values else 0


__all__ = [
    "CensusReport", "ClassifyOptions", "Rule", "RuleFiring", "SoundnessError", "Status", "Verdict",
    "census", "classify", "long_commutator", "engel", "gcd_of", "is_test_word_f2", "rule_gcd",
    "rule_patterns", "rule_power", "rule_testword_f2",
]
