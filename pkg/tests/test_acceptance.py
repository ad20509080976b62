"""Acceptance criteria, one test each. The terminal summary prints a
PASS/FAIL line per criterion (see conftest.py)."""
import math
import random
import time

import pytest

from wordchir.classify import (
    ClassifyOptions,
    Rule,
    Status,
    classify,
    engel,
    is_test_word_f2,
    rule_gcd,
    rule_patterns,
)
from wordchir.groups import catalog_list, image, surjectivity_check
from wordchir.morphism import CertKind, apply, compose, named_family, verify_certificate
from wordchir.report import make_report, verdict_to_dict, verify_report
from wordchir.whitehead import Indeterminate, aut_inverts, enumerate_moves
from wordchir.words import (
    concat,
    exponent_vector,
    invert,
    iter_reduced_words,
    parse,
    random_word,
    reduce,
)

SHORTEST_NON_AUT = "x1^2 x2^2 x1 x2^-1"


def W(text, rank=2):
    return parse(text, rank)


def words_up_to(n, rank=2):
    return [w for k in range(1, n + 1) for w in iter_reduced_words(rank, k)]


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


@pytest.mark.acceptance(1, "census totals 4*3^(n-1) for n = 1..7")
def test_census_totals():
    with Timer() as t:
        counts = [sum(1 for _ in iter_reduced_words(2, n)) for n in range(1, 8)]
    assert counts == [4, 12, 36, 108, 324, 972, 2916]
    assert t.elapsed < 1.0


@pytest.mark.acceptance(2, "length-2 words split into the f, g, h inverted sets")
def test_length_two_partition():
    with Timer() as t:
        f = named_family("InvertAll")
        g = named_family("SwapInvert")
        h = named_family("Swap")
        all2 = set(iter_reduced_words(2, 2))
        got = {name: {w for w in all2 if apply(m, w) == invert(w)} for name, m in (("f", f), ("g", g), ("h", h))}
    expected = {
        "f": {W("x1^2"), W("x2^2"), W("x1^-2"), W("x2^-2")},
        "g": {W("x1 x2"), W("x1^-1 x2^-1"), W("x2 x1"), W("x2^-1 x1^-1")},
        "h": {W("x1^-1 x2"), W("x1 x2^-1"), W("x2^-1 x1"), W("x2 x1^-1")},
    }
    assert got == expected
    assert set().union(*got.values()) == all2 and sum(len(s) for s in got.values()) == 12
    assert t.elapsed < 1.0


@pytest.mark.acceptance(3, "aut_inverts finds a verified automorphism for all 484 words of length <= 5")
def test_short_words_aut_invertible():
    with Timer() as t:
        ws = words_up_to(5)
        failures = []
        for w in ws:
            r = aut_inverts(w)
            if not r.found:
                failures.append(("not found", w))
                continue
            c = r.certificate()
            if c.kind is not CertKind.AUTOMORPHISM or not verify_certificate(c):
                failures.append(("bad certificate", w))
    assert len(ws) == 484
    assert failures == []
    assert t.elapsed < 120


@pytest.mark.acceptance(4, "all length-6 words Achiral; the shortest non-aut-invertible word is definitively not inverted")
def test_length_six_frontier():
    with Timer() as t:
        statuses = {classify(w).status for w in iter_reduced_words(2, 6)}
        r = aut_inverts(W(SHORTEST_NON_AUT))
    assert statuses == {Status.ACHIRAL}
    assert r.found is False and r.stats.complete
    assert t.elapsed < 600


@pytest.mark.acceptance(5, "1000 random words of length <= 10: every emitted certificate verifies")
def test_certificate_soundness():
    rng = random.Random(20240501)
    failures, emitted = [], 0
    opts = ClassifyOptions()
    for _ in range(1000):
        rank = rng.choice([2, 3])
        w = random_word(rank, rng.randint(0, 10), rng)
        v = classify(w, opts)
        certs = list(v.certificates)
        certs += [r.certificate for r in v.reasons if r.certificate is not None]
        for rule in (rule_gcd, rule_patterns):
            fired = rule(w)
            if fired is not None:
                certs.append(fired.certificate)
        for c in certs:
            emitted += 1
            if not verify_certificate(c):
                failures.append((w, c.source))
        if v.status is Status.ACHIRAL and not any(c.word == w for c in v.certificates):
            failures.append((w, "achiral without certificate"))
    assert emitted > 1000
    assert failures == []


@pytest.mark.acceptance(6, "20 random gcd-1 words map onto C2..C6, S3, D4, Q8, A4")
def test_gcd_one_surjective():
    rng = random.Random(6)
    groups = catalog_list("C2,C3,C4,C5,C6,S3,D4,Q8,A4")
    with Timer() as t:
        sample = []
        while len(sample) < 20:
            w = random_word(2, rng.randint(2, 12), rng)
            if math.gcd(*exponent_vector(w)) == 1:
                sample.append(w)
        failures = [(w, g.name) for w in sample for g in groups if not surjectivity_check(w, g)]
    assert failures == []
    assert t.elapsed < 60


@pytest.mark.acceptance(7, "image of the inverse word is the set of inverses, 100 random pairs")
def test_inverse_image_identity():
    rng = random.Random(7)
    groups = catalog_list("default")
    for _ in range(100):
        g = rng.choice(groups)
        w = random_word(2, rng.randint(0, 10), rng)
        fwd = image(g, w).members
        assert image(g, invert(w)).members == {int(g.inverses[m]) for m in fwd}, (g.name, w)


@pytest.mark.acceptance(8, "commutator image is trivial on abelian catalog groups")
def test_commutator_abelian():
    comm = W("x1 x2 x1^-1 x2^-1")
    abelian = [g for g in catalog_list("default") if g.is_abelian()]
    assert {g.name for g in abelian} >= {"C2", "C3", "C4", "C5", "C6", "C2xC2"}
    for g in abelian:
        assert image(g, comm).members == {g.identity}
        assert image(g, invert(comm)).members == {g.identity}


@pytest.mark.acceptance(9, "no word of length <= 6 fires both GcdSurjective and TestWord")
def test_gcd_testword_disjoint():
    violations = [w for w in words_up_to(6) if rule_gcd(w) is not None and is_test_word_f2(w)]
    assert violations == []


@pytest.mark.acceptance(10, "Engel pipeline for n = 1..4")
def test_engel_pipeline():
    with Timer() as t:
        es = [engel(n) for n in range(1, 5)]
        for e in es:
            assert reduce(e.letters, 2) == e
            assert exponent_vector(e) == (0, 0)

        v1 = classify(es[0])
        assert v1.status is Status.ACHIRAL
        assert any(c.kind is CertKind.AUTOMORPHISM and verify_certificate(c) for c in v1.certificates)

        for e in es[1:3]:
            try:
                r = aut_inverts(e)
            except Indeterminate as exc:
                assert not exc.stats.complete
            else:
                assert r.found or r.stats.complete
                if r.found:
                    assert verify_certificate(r.certificate())

        opts = ClassifyOptions()
        items = [verdict_to_dict(classify(e, opts), i, f"@engel{i + 1}") for i, e in enumerate(es)]
        report = make_report("engel", {}, items)
    assert verify_report(report) == []
    for item in items:
        if item["status"] == Status.CHIRAL.value:
            rules = {(r["rule"], r["outcome"]) for r in item["reasons"]}
            assert item["witness"] or (Rule.AUT_ORBIT.value, "not-inverted") in rules
    assert t.elapsed < 1800


@pytest.mark.acceptance(11, "every Whitehead move composes with its inverse to the identity, ranks 2 and 3")
def test_move_inverses():
    with Timer() as t:
        for rank in (2, 3):
            moves = enumerate_moves(rank)
            assert len(moves) == (2 ** rank) * math.factorial(rank) + rank * 2 * 4 ** (rank - 1)
            for m in moves:
                f, g = m.endomorphism(), m.inverse().endomorphism()
                assert compose(f, g).is_identity() and compose(g, f).is_identity(), m.describe()
    assert t.elapsed < 60


@pytest.mark.acceptance(12, "10^4 random cases: confluence, inverse anti-homomorphism, exponent additivity")
def test_word_properties():
    rng = random.Random(12)
    cases = 0
    for _ in range(10_000):
        rank = rng.randint(1, 4)
        letters = [rng.choice([1, -1]) * rng.randint(1, rank) for _ in range(rng.randint(0, 24))]
        # confluence: cancel pairs in a random order, compare with the stack reduction
        raw = list(letters)
        while True:
            spots = [i for i in range(len(raw) - 1) if raw[i] == -raw[i + 1]]
            if not spots:
                break
            i = rng.choice(spots)
            del raw[i : i + 2]
        u = reduce(letters, rank)
        assert u.letters == tuple(raw)
        v = random_word(rank, rng.randint(0, 12), rng)
        assert invert(concat(u, v)) == concat(invert(v), invert(u))
        ev = exponent_vector(concat(u, v))
        assert ev == tuple(a + b for a, b in zip(exponent_vector(u), exponent_vector(v)))
        cases += 1
    assert cases >= 10_000

