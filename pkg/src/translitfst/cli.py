"""Command-line entry point.

Exit codes: 0 success, 2 usage or parse error, 3 model/build failure.
Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import pathlib
import sys

from .align import AlignmentError, UnalignableError
from .corpus import NormalizationReport, balance_plan, normalize_corpus
from .lexicon import LexiconError, read_lexicon
from .lexprep import PrepError, preprocess
from .pairlm import NGramError
from .scoring import ScoringError, score_corpus
from .translit import (
    BundleError,
    TranslitError,
    UnionTransliterator,
    build_transliterator,
    load_bundle,
    reverse,
    save_bundle,
    transliterate,
)
from .wfst import FstError, UnknownSymbolError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MODEL = 3

log = logging.getLogger("translitfst")


class UsageError(Exception):
    pass


def _ranged_int(lo, hi):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if not lo <= value <= hi:
            raise argparse.ArgumentTypeError(f"must be between {lo} and {hi}")
        return value

    return parse


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _nonneg_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _existing_file(path):
    p = pathlib.Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {p}")
    return p


def _write_json(obj, path=None):
    text = json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=False) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        pathlib.Path(path).write_text(text, encoding="utf-8", newline="\n")


def _load_union(bundle_dirs):
    return UnionTransliterator([load_bundle(d) for d in bundle_dirs])


# commands


def cmd_build(args) -> int:
    lex = read_lexicon(_existing_file(args.lexicon), args.language)
    t = build_transliterator(lex, order=args.order, em_iters=args.em_iters, em_tol=args.em_tol)
    save_bundle(t, args.out_dir, timestamp=not args.no_timestamp)
    log.info("wrote %s bundle to %s (%d states)", t.language, args.out_dir, t.fwd_fst.num_states)
    return EXIT_OK


def cmd_translit(args) -> int:
    if args.reverse and len(args.bundles) != 1:
        raise UsageError("--reverse takes exactly one bundle")
    if len(args.bundles) == 1:
        t = load_bundle(args.bundles[0])
        if args.reverse:
            t = reverse(t)

        def run(word):
            return transliterate(t, word, args.k)

    else:
        union = _load_union(args.bundles)

        def run(word):
            res = union.transliterate(word, args.k)
            if res.unknown:
                raise UnknownSymbolError(res.unknown)
            return res

    out = sys.stdout
    for line in sys.stdin:
        word = line.strip()
        if not word:
            continue
        try:
            res = run(word)
        except UnknownSymbolError as e:
            cps = " ".join(f"U+{ord(c):04X}" for c in e.symbols)
            print(f"{word}: unknown codepoints {cps}", file=sys.stderr)
            out.write(word + "\n")
            continue
        if not res.ok:
            print(f"{word}: no transliteration", file=sys.stderr)
        out.write("\t".join([word] + res.strings()) + "\n")
    return EXIT_OK


def cmd_prep(args) -> int:
    if args.mode in ("ab", "ab+fb") and len(args.lexicons) < 2:
        raise UsageError(f"--mode {args.mode} needs at least two lexicons")
    paths = [_existing_file(p) for p in args.lexicons]
    lexicons = [read_lexicon(p) for p in paths]
    out, summary = preprocess(lexicons, args.mode)
    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for path, lex in zip(paths, out):
        lex.write(out_dir / path.name)
    _write_json(summary.as_dict(), args.summary)
    return EXIT_OK


def cmd_normalize(args) -> int:
    corpus = _existing_file(args.corpus)
    union = _load_union(args.bundles)
    report = NormalizationReport()
    with open(corpus, encoding="utf-8") as f:
        lines = (line.rstrip("\n") for line in f)
        for out in normalize_corpus(lines, union, args.passthrough_latin, report):
            sys.stdout.write(out + "\n")
    if args.report:
        _write_json(report.as_dict(), args.report)
    log.info("normalized %d lines, %d untransliterable tokens", report.lines, report.untransliterable)
    return EXIT_OK


def read_amounts(path) -> dict:
    path = _existing_file(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise UsageError(f"{path}: {e}") from None
        if not isinstance(data, dict):
            raise UsageError(f"{path}: expected a JSON object of language -> amount")
        return {str(k): float(v) for k, v in data.items()}
    amounts = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise UsageError(f"{path}:{lineno}: expected language<TAB>amount")
        try:
            amounts[fields[0].strip()] = float(fields[1])
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad amount {fields[1]!r}") from None
    return amounts


def cmd_balance(args) -> int:
    try:
        plan = balance_plan(read_amounts(args.amounts), cap=args.cap)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _write_json(plan.as_dict())
    return EXIT_OK


def cmd_score(args) -> int:
    refs = _existing_file(args.ref).read_text(encoding="utf-8").splitlines()
    hyps = _existing_file(args.hyp).read_text(encoding="utf-8").splitlines()
    union = _load_union(args.bundles) if args.bundles else None
    total, per_utt = score_corpus(refs, hyps, union, args.k)
    if args.report:
        report = {
            "metric": "translit_optimized_wer" if union else "wer",
            "k": args.k if union else None,
            "total": total.as_dict(),
            "utterances": per_utt,
        }
        _write_json(report, args.report)
    sys.stdout.write(total.summary() + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="translitfst",
        description="Pair-LM transliteration transducers and transliteration-aware scoring.",
    )
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="train a transliterator bundle from a lexicon TSV")
    b.add_argument("lexicon", help="native<TAB>romanization<TAB>count file")
    b.add_argument("out_dir", help="bundle directory to write")
    b.add_argument("--language", help="language tag (default: lexicon file stem)")
    b.add_argument("--order", type=_ranged_int(1, 9), default=6, help="pair n-gram order, 1-9 (default 6)")
    b.add_argument("--em-iters", type=_ranged_int(1, 1000), default=10, help="maximum EM iterations (default 10)")
    b.add_argument("--em-tol", type=_nonneg_float, default=1e-6, help="EM log-likelihood tolerance (default 1e-6)")
    b.add_argument("--no-timestamp", action="store_true", help="omit the creation time from the manifest")
    b.set_defaults(func=cmd_build)

    t = sub.add_parser("translit", help="transliterate words read from stdin, one per line")
    t.add_argument("bundles", nargs="+", help="bundle directories; several imply the union machine")
    t.add_argument("--reverse", action="store_true", help="Latin to native (single bundle only)")
    t.add_argument("--k", type=_ranged_int(1, 100), default=1, help="candidates per word, 1-100 (default 1)")
    t.set_defaults(func=cmd_translit)

    r = sub.add_parser("prep", help="agreement- or frequency-based lexicon pre-processing")
    r.add_argument("lexicons", nargs="+", help="lexicon TSV files")
    r.add_argument("--mode", choices=["ab", "fb", "ab+fb"], required=True,
                   help="ab: agreement-based, fb: frequency-based, ab+fb: both (experimental)")
    r.add_argument("--out-dir", required=True, help="directory for the rewritten lexicons")
    r.add_argument("--summary", help="write the JSON summary here instead of stdout")
    r.set_defaults(func=cmd_prep)

    n = sub.add_parser("normalize", help="rewrite a corpus into Latin script")
    n.add_argument("corpus", help="UTF-8 text, one transcript per line")
    n.add_argument("bundles", nargs="+", help="bundle directories forming the union machine")
    n.add_argument("--passthrough-latin", action=argparse.BooleanOptionalAction, default=True,
                   help="copy Latin tokens unchanged (default) or lowercase them")
    n.add_argument("--report", help="write the JSON normalization report here")
    n.set_defaults(func=cmd_normalize)

    a = sub.add_parser("balance", help="compute per-language copy multipliers")
    a.add_argument("amounts", help="language<TAB>amount file, or a .json object")
    a.add_argument("--cap", type=_positive_float, default=75.0, help="copies for the smallest language (default 75)")
    a.set_defaults(func=cmd_balance)

    s = sub.add_parser("score", help="WER, or transliteration-optimized WER when bundles are given")
    s.add_argument("ref", help="reference file, one utterance per line (optionally uttid<TAB>text)")
    s.add_argument("hyp", help="hypothesis file, parallel to ref")
    s.add_argument("bundles", nargs="*", help="bundle directories for transliteration-optimized scoring")
    s.add_argument("--k", type=_ranged_int(1, 100), default=5, help="romanizations per native token (default 5)")
    s.add_argument("--report", help="write the JSON report here")
    s.set_defaults(func=cmd_score)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for stream in (sys.stdin, sys.stdout):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, LexiconError, PrepError, ScoringError, BundleError, FstError, NGramError) as e:
        print(f"translitfst {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (UnalignableError, AlignmentError, TranslitError) as e:
        print(f"translitfst {args.command}: build failed: {e}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
