"""``wordchir`` command line."""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Optional, Sequence

from . import groups as G
from .classify import ClassifyOptions, census, classify, long_commutator, engel
from .morphism import InversionCertificate, automorphism_certificate, check_certificate, parse_endomorphism
from .report import make_report, verdict_to_dict, verify_report
from .whitehead import DEFAULT_BUDGET, Indeterminate, orbit_equivalent
from .words import ParseError, Word, format_word, infer_rank, invert, parse

log = logging.getLogger("wordchir")


class InputError(Exception):
    pass


_NAMED = re.compile(r"^@(engel(\d+)|long-commutator)$")


def resolve_word(text: str, rank: Optional[int], conj: str = "left") -> Word:
    """Parse a word; ``@engelN`` and ``@long-commutator`` name built-in words."""
    m = _NAMED.match(text.strip())
    if m:
        w = engel(int(m.group(2))) if m.group(2) else long_commutator(convention=conj)
        if rank is not None:
            if rank < w.rank:
                raise InputError(f"{text}: needs rank >= {w.rank}")
            w = Word(rank, w.letters)
        return w
    return parse(text, rank if rank is not None else infer_rank(text))


def _gather_words(args) -> list[tuple[str, str]]:
    """(source tag, text) pairs in input order."""
    items = [("arg", w) for w in (args.word or [])]
    if getattr(args, "words_file", None):
        for lineno, line in enumerate(Path(args.words_file).read_text().splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if line:
                items.append((f"line {lineno}", line))
    return items


def _parse_all(args) -> list[tuple[str, Word]]:
    items = _gather_words(args)
    if not items:
        raise InputError("no words given (use --word or --words-file)")
    rank = args.rank
    if rank is None:
        rank = max((infer_rank(t) for _, t in items if not t.startswith("@")), default=2)
        rank = max(rank, 2 if any(t.startswith("@") for _, t in items) else 1)
    words, errors = [], []
    for tag, text in items:
        try:
            words.append((text, resolve_word(text, rank, args.conj)))
        except (ParseError, ValueError, InputError) as exc:
            errors.append(f"{tag}: {exc}")
    if errors:
        raise InputError("\n".join(errors))
    return words


def _options(args) -> ClassifyOptions:
    groups = G.catalog_list(args.catalog) if args.catalog else None
    return ClassifyOptions(budget=args.budget, eval_cap=args.cap, groups=groups)


def _classify_one(payload: tuple[int, str, Word, int, int, str]) -> dict[str, Any]:
    index, text, w, budget, cap, catalog = payload
    options = ClassifyOptions(budget=budget, eval_cap=cap, groups=G.catalog_list(catalog))
    return verdict_to_dict(classify(w, options), index, text)


def _classify_many(words: Sequence[tuple[str, Word]], args) -> list[dict[str, Any]]:
    if args.workers > 1:
        payloads = [(i, t, w, args.budget, args.cap, args.catalog) for i, (t, w) in enumerate(words)]
        with ProcessPoolExecutor(args.workers) as pool:
            return list(pool.map(_classify_one, payloads))
    options = _options(args)
    return [verdict_to_dict(classify(w, options), i, t) for i, (t, w) in enumerate(words)]


def _config(args) -> dict[str, Any]:
    keys = ("rank", "budget", "cap", "catalog", "conj", "length", "n", "group", "target")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


# --- subcommands -----------------------------------------------------------

def cmd_classify(args) -> dict[str, Any]:
    words = _parse_all(args)
    return make_report("classify", _config(args), _classify_many(words, args))


def cmd_engel(args) -> dict[str, Any]:
    rank = args.rank or 2
    words = [(f"@engel{k}", Word(rank, engel(k).letters)) for k in range(1, args.n + 1)]
    return make_report("engel", _config(args), _classify_many(words, args))


def cmd_enumerate(args) -> dict[str, Any]:
    rep = census(args.length, rank=args.rank or 2, options=_options(args), max_length=args.max_length)
    items = [verdict_to_dict(v, i) for i, v in enumerate(rep.verdicts)]
    summary = {
        "length": rep.length,
        "rank": rep.rank,
        "total": rep.total,
        "expected_total": rep.expected_total,
        "aut_invertible": rep.aut_invertible,
        "non_aut_invertible": [format_word(w) for w in rep.non_aut_invertible],
        "indeterminate": [format_word(w) for w in rep.indeterminate],
        "histogram": rep.histogram,
    }
    return make_report("enumerate", _config(args), items, census=summary)


def cmd_whitehead(args) -> dict[str, Any]:
    words = _parse_all(args)
    items = []
    for i, (text, w) in enumerate(words):
        target = resolve_word(args.target, w.rank, args.conj) if args.target else invert(w)
        item: dict[str, Any] = {"index": i, "input": text, "word": format_word(w), "rank": w.rank,
                                "target": format_word(target)}
        try:
            res = orbit_equivalent(w, target, args.budget)
        except Indeterminate as exc:
            item.update(found=None, indeterminate=True, stats=vars(exc.stats))
        else:
            item.update(found=res.found, indeterminate=False, minimal_length=res.stats.minimal_length,
                        stats=vars(res.stats), move_trace=[str(m) for m in res.move_trace])
            if res.found:
                item["automorphism"] = str(res.automorphism)
                item["inverse"] = str(res.inverse)
        items.append(item)
    return make_report("whitehead", _config(args), items)


def cmd_image(args) -> dict[str, Any]:
    words = _parse_all(args)
    g = G.load_group(args.group)
    items = []
    for i, (text, w) in enumerate(words):
        s = G.image(g, w, args.cap)
        members = sorted(s.members)
        items.append({
            "index": i, "input": text, "word": format_word(w), "rank": w.rank, "group": g.name,
            "order": g.order, "size": len(members), "members": members,
            "labels": [g.label(m) for m in members],
            "inverse_closed": G.is_inverse_closed(s, g), "surjective": len(members) == g.order,
        })
    return make_report("image", _config(args), items)


def cmd_witness(args) -> dict[str, Any]:
    words = _parse_all(args)
    catalog = G.catalog_list(args.catalog)
    items = []
    for i, (text, w) in enumerate(words):
        sweep = G.chirality_sweep(w, catalog, args.cap)
        wit = None
        if sweep.witness:
            wit = dict(zip(("group", "element", "label"), sweep.witness))
        items.append({"index": i, "input": text, "word": format_word(w), "rank": w.rank, "witness": wit,
                      "checked": sweep.checked, "errors": sweep.errors})
    return make_report("witness", _config(args), items)


def cmd_verify(args) -> dict[str, Any]:
    if args.report:
        data = json.loads(Path(args.report).read_text())
        problems = verify_report(data)
        return make_report("verify", _config(args), [], problems=problems, ok=not problems,
                           checked=len(data.get("items", [])))
    if not args.endo_file:
        raise InputError("verify needs --report or --endo-file with --word")
    words = _parse_all(args)
    items = []
    for i, (text, w) in enumerate(words):
        endo = parse_endomorphism(Path(args.endo_file).read_text(), w.rank)
        cert = InversionCertificate(w, endo)
        if args.inverse_file:
            inv = parse_endomorphism(Path(args.inverse_file).read_text(), w.rank)
            cert = automorphism_certificate(w, endo, inv)
        ok, why = check_certificate(cert)
        items.append({"index": i, "input": text, "word": format_word(w), "rank": w.rank, "ok": ok, "reason": why})
    return make_report("verify", _config(args), items, ok=all(it["ok"] for it in items))


COMMANDS = {
    "classify": cmd_classify,
    "whitehead": cmd_whitehead,
    "image": cmd_image,
    "witness": cmd_witness,
    "enumerate": cmd_enumerate,
    "engel": cmd_engel,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--word", action="append", help="word in x1^2 x2^-1 or aB notation (repeatable)")
    common.add_argument("--words-file", help="file with one word per line")
    common.add_argument("--rank", type=int, help="ambient rank (default: inferred)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="Whitehead node budget")
    common.add_argument("--cap", type=int, default=G.DEFAULT_EVAL_CAP, help="word-map evaluation cap")
    common.add_argument("--catalog", default="default", help="comma-separated groups or Cayley files")
    common.add_argument("--conj", choices=("left", "right"), default="left",
                        help="g^h = h^-1 g h (left) or h g h^-1 (right)")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="wordchir", description="Chirality of words in free groups.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="full classification pipeline")
    w = sub.add_parser("whitehead", parents=[common], help="Aut(F_n) orbit query")
    w.add_argument("--target", help="target word (default: the inverse of --word)")
    im = sub.add_parser("image", parents=[common], help="image of a word map on a finite group")
    im.add_argument("--group", required=True, help="catalog name (C6, S3, C2xQ8, ...) or Cayley table file")
    sub.add_parser("witness", parents=[common], help="search the catalog for a chirality witness")
    en = sub.add_parser("enumerate", parents=[common], help="census of all rank-2 words of one length")
    en.add_argument("--length", type=int, required=True)
    en.add_argument("--max-length", type=int, default=7)
    eg = sub.add_parser("engel", parents=[common], help="generate and classify e_1..e_N")
    eg.add_argument("--n", type=int, required=True)
    vf = sub.add_parser("verify", parents=[common], help="re-check a report or a user endomorphism")
    vf.add_argument("--report", help="report JSON to audit")
    vf.add_argument("--endo-file", help="endomorphism in 'xi -> word' lines")
    vf.add_argument("--inverse-file", help="claimed two-sided inverse of --endo-file")
    return p


def _summary(report: dict[str, Any]) -> str:
    cmd = report["command"]
    if cmd == "enumerate":
        c = report["census"]
        return (f"length {c['length']}: {c['total']} words (expected {c['expected_total']}), "
                f"{c['aut_invertible']} aut-invertible, statuses {c['histogram']}")
    if cmd == "verify" and "problems" in report:
        return f"checked {report['checked']} items, {len(report['problems'])} problems"
    lines = []
    for it in report["items"]:
        if "status" in it:
            lines.append(f"{it['word']}: {it['status']}")
        elif "found" in it:
            lines.append(f"{it['word']}: found={it['found']}")
        elif "size" in it:
            lines.append(f"{it['word']} on {it['group']}: {it['size']}/{it['order']} elements")
        elif "witness" in it:
            lines.append(f"{it['word']}: witness={it['witness']}")
        elif "ok" in it:
            lines.append(f"{it['word']}: ok={it['ok']} ({it['reason']})")
    return "\n".join(lines)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if args.budget <= 0 or args.cap <= 0 or args.workers <= 0:
        parser.error("--budget, --cap and --workers must be positive")
    if args.rank is not None and args.rank <= 0:
        parser.error("--rank must be positive")
    try:
        report = COMMANDS[args.command](args)
    except (InputError, ParseError, G.GroupError, OSError, ValueError) as exc:
        print(f"wordchir: error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(_summary(report))
    else:
        print(text)
    if args.command == "verify" and not report.get("ok", True):
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
