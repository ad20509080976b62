"""JSON report layout and an offline verifier for it.

The verifier re-checks certificates with nothing but word arithmetic and
endomorphism application, so a report can be audited without re-running any
search.
"""
from __future__ import annotations

import math
from typing import Any, Optional, Sequence

from .classify import Rule, Status, Verdict
from .morphism import CertKind, InversionCertificate, check_certificate, format_endomorphism, parse_endomorphism
from .words import ParseError, Word, exponent_vector, format_word, parse

SCHEMA_VERSION = 1


def _plain(value: Any) -> Any:
    if isinstance(value, Word):
        return format_word(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


def certificate_to_dict(c: InversionCertificate) -> dict[str, Any]:
    return {
        "kind": c.kind.value,
        "source": c.source,
        "word": format_word(c.word),
        "endo": format_endomorphism(c.endo),
        "aut_proof": format_endomorphism(c.aut_proof) if c.aut_proof is not None else None,
    }


def certificate_from_dict(d: dict[str, Any], rank: int) -> InversionCertificate:
    word = parse(d["word"], rank)
    endo = parse_endomorphism(d["endo"], rank)
    proof = parse_endomorphism(d["aut_proof"], rank) if d.get("aut_proof") else None
    return InversionCertificate(word, endo, CertKind(d["kind"]), proof, d.get("source", ""))


def verdict_to_dict(v: Verdict, index: int = 0, source: Optional[str] = None) -> dict[str, Any]:
    return {
        "index": index,
        "input": source if source is not None else format_word(v.word),
        "word": format_word(v.word),
        "rank": v.word.rank,
        "length": len(v.word),
        "status": v.status.value,
        "aut_invertible": v.aut_invertible,
        "in_d2": v.in_d2,
        "reasons": [{"rule": r.rule.value, "outcome": r.outcome, "params": _plain(r.params)} for r in v.reasons],
        "certificates": [certificate_to_dict(c) for c in v.certificates],
        "witness": v.witness,
        "stats": _plain(v.stats),
    }


def make_report(command: str, config: dict[str, Any], items: Sequence[dict[str, Any]], **extra: Any) -> dict[str, Any]:
    out = {"schema": SCHEMA_VERSION, "tool": "wordchir", "command": command, "config": _plain(config)}
    out.update(_plain(extra))
    out["items"] = list(items)
    return out


def verify_item(item: dict[str, Any]) -> list[str]:
    """Problems found in one report item (empty list means it checks out)."""
    problems: list[str] = []
    tag = f"item {item.get('index', '?')}"
    if "error" in item:
        return problems
    rank = item["rank"]
    try:
        word = parse(item["word"], rank)
    except (ParseError, ValueError) as exc:
        return [f"{tag}: word does not re-parse: {exc}"]
    if format_word(word) != item["word"]:
        problems.append(f"{tag}: word does not round-trip")
    valid = 0
    for j, cd in enumerate(item.get("certificates", [])):
        try:
            c = certificate_from_dict(cd, rank)
        except (ParseError, ValueError, KeyError) as exc:
            problems.append(f"{tag}: certificate {j} unreadable: {exc}")
            continue
        if c.word != word:
            problems.append(f"{tag}: certificate {j} is for a different word")
            continue
        ok, why = check_certificate(c)
        if ok:
            valid += 1
        else:
            problems.append(f"{tag}: certificate {j} fails: {why}")
    # firings after a PowerReduce step describe the root, not the word itself
    subject = word
    for r in item.get("reasons", []):
        if r["rule"] == Rule.POWER_REDUCE.value:
            try:
                root = parse(r["params"]["root"], rank)
            except (KeyError, ParseError, ValueError):
                problems.append(f"{tag}: PowerReduce firing without a readable root")
                continue
            k = r["params"].get("k", 0)
            if not isinstance(k, int) or k < 2 or root ** k != subject:
                problems.append(f"{tag}: PowerReduce root does not recheck")
            subject = root
        if r["rule"] == Rule.GCD_SURJECTIVE.value and r["outcome"] == "achiral":
            if math.gcd(*exponent_vector(subject)) != 1:
                problems.append(f"{tag}: GcdSurjective firing does not recheck")
    status = item["status"]
    if status == Status.ACHIRAL.value and valid == 0:
        problems.append(f"{tag}: Achiral without a valid certificate")
    if status == Status.CHIRAL.value:
        if valid:
            problems.append(f"{tag}: Chiral but carries an inverting certificate")
        rules = {(r["rule"], r["outcome"]) for r in item.get("reasons", [])}
        deduced = (Rule.TEST_WORD.value, "chiral") in rules and (Rule.AUT_ORBIT.value, "not-inverted") in rules
        if not deduced and not item.get("witness"):
            problems.append(f"{tag}: Chiral without witness or test-word deduction")
    return problems


def verify_report(report: dict[str, Any]) -> list[str]:
    problems: list[str] = []
    for item in report.get("items", []):
        problems.extend(verify_item(item))
    return problems


__all__ = [
    "SCHEMA_VERSION", "certificate_from_dict", "certificate_to_dict", "make_report",
    "verdict_to_dict", "verify_item", "verify_report",
]
