"""Command-line pipeline around the library: encode treebanks into label
files, train taggers, predict, decode label files back into treebanks, and
score the result.

Exit codes: 0 on success, 1 on any processing error (bad input, scheme
violations, unreadable files), 2 on usage errors (argparse's own).
"""

from __future__ import annotations

import argparse
import sys

from .errors import TreeSeqError
from .trees import (
    collapse_unaries,
    iter_treebank,
    read_treebank,
    serialize_bracketed,
    uncollapse_unaries,
)
from .encoding import (
    PSI_NONE,
    Label,
    Scheme,
    encode,
    enrich_tokens,
    leaf_unary_sequence,
    read_labeled,
    read_string_rows,
    read_tagged,
    strip_token_unaries,
    write_labeled,
    write_string_rows,
)
from .decoding import decode, decode_extended
from .evaluation import (
    DEFAULT_DELETED,
    bracketing_score,
    label_accuracy,
    machine_line,
    render_report,
)
from .tagger import (
    load_model,
    train_instances,
    train_phi,
    train_phi_prime,
)

_SCALES = ("abs", "rel", "rel-root", "kary")


def _write_trees(path, trees) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for tree in trees:
            handle.write(serialize_bracketed(tree))
            handle.write("\n")


def cmd_encode(args) -> int:
    scheme = Scheme(args.scale, args.k, extended=(args.unaries == "extended"))
    sentences = []
    for lineno, tree in iter_treebank(args.input):
        try:
            collapsed = collapse_unaries(tree) if args.collapse else tree
            sentences.append(encode(collapsed, scheme))
        except TreeSeqError as exc:
            raise TreeSeqError(f"line {lineno}: {exc}") from exc
    write_labeled(args.output, sentences, extended=scheme.extended)
    if not scheme.extended:
        companion = []
        for sent in sentences:
            chains = leaf_unary_sequence(sent.tokens)
            raw = strip_token_unaries(sent.tokens)
            companion.append(
                (raw, [c if c is not None else PSI_NONE for c in chains])
            )
        write_string_rows(args.output + ".psi", companion)
    return 0


def cmd_decode(args) -> int:
    scheme = Scheme(args.scale, args.k)
    trees = []
    for idx, sent in enumerate(read_labeled(args.input), start=1):
        try:
            trees.append(decode_extended(sent.tokens, sent.labels, scheme))
        except TreeSeqError as exc:
            raise TreeSeqError(f"sentence {idx}: {exc}") from exc
    _write_trees(args.output, trees)
    return 0


def cmd_train(args) -> int:
    override = Scheme(args.scale, args.k) if args.scale else None
    if args.task == "psi":
        rows = read_string_rows(args.input)
        model = train_instances(
            rows, "psi", override or Scheme("rel", args.k), args.epochs, args.seed
        )
    elif args.task == "phi":
        model = train_phi(read_labeled(args.input), args.epochs, args.seed, override)
    else:
        if override is not None:
            override = Scheme(override.scale, override.k, extended=True)
        model = train_phi_prime(
            read_labeled(args.input), args.epochs, args.seed, override
        )
    model.save(args.output)
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    rows = [(tokens, model.predict(tokens)) for tokens in read_tagged(args.input)]
    write_string_rows(args.output, rows)
    return 0


def cmd_parse(args) -> int:
    model = load_model(args.model)
    sentences = read_tagged(args.input)
    trees = []
    if model.task == "phi-prime":
        for tokens in sentences:
            labels = [Label.from_string(s) for s in model.predict(tokens)]
            trees.append(decode_extended(tokens, labels, model.scheme))
    elif model.task == "phi":
        if not args.psi_model:
            raise TreeSeqError("a phi model needs --psi-model for the first pass")
        psi = load_model(args.psi_model)
        for tokens in sentences:
            chains = [None if c == PSI_NONE else c for c in psi.predict(tokens)]
            merged = enrich_tokens(tokens, chains)
            labels = [Label.from_string(s) for s in model.predict(merged)]
            trees.append(decode_extended(merged, labels, model.scheme))
    else:
        raise TreeSeqError(f"cannot parse with a {model.task} model")
    _write_trees(args.output, trees)
    return 0


def cmd_eval(args) -> int:
    gold = read_treebank(args.gold)
    pred = read_treebank(args.pred)
    deleted = (
        frozenset(args.delete_labels)
        if args.delete_labels is not None
        else DEFAULT_DELETED
    )
    report = bracketing_score(gold, pred, deleted)
    if args.gold_labels and args.pred_labels:
        gold_seqs = [strings for _, strings in read_string_rows(args.gold_labels)]
        pred_seqs = [strings for _, strings in read_string_rows(args.pred_labels)]
    else:
        scheme = Scheme(args.scale, args.k)

        def seqs(trees):
            return [
                [lab.to_string() for lab in encode(collapse_unaries(t), scheme).labels]
                for t in trees
            ]

        gold_seqs, pred_seqs = seqs(gold), seqs(pred)
    report = report.with_accuracy(label_accuracy(gold_seqs, pred_seqs))
    print(machine_line(report) if args.machine else render_report(report))
    return 0


def cmd_roundtrip(args) -> int:
    scheme = Scheme(args.scale, args.k, extended=(args.unaries == "extended"))
    count = 0
    for lineno, tree in iter_treebank(args.input):
        count += 1
        try:
            collapsed = collapse_unaries(tree)
            if scheme.extended:
                sent = encode(collapsed, scheme)
                rebuilt = decode_extended(sent.tokens, sent.labels, scheme)
            else:
                sent = encode(collapsed, scheme)
                rebuilt = uncollapse_unaries(
                    decode(sent.tokens, sent.labels, scheme)
                )
        except TreeSeqError as exc:
            raise TreeSeqError(f"line {lineno}: {exc}") from exc
        if rebuilt != tree:
            print(f"treeseq: line {lineno}: round trip differs", file=sys.stderr)
            return 1
    print(f"{count} trees round-tripped")
    return 0


def _add_scale(sub) -> None:
    sub.add_argument("--scale", choices=_SCALES, default="rel")
    sub.add_argument("--k", type=int, default=2, help="arity for the kary scale")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treeseq",
        description="constituent parsing as sequence labeling",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    enc = subs.add_parser("encode", help="treebank to per-word label file")
    enc.add_argument("-i", "--input", required=True)
    enc.add_argument("-o", "--output", required=True)
    _add_scale(enc)
    enc.add_argument(
        "--unaries",
        choices=("two-pass", "extended"),
        default="two-pass",
        help="separate chain file plus enriched tags, or 3-part labels",
    )
    enc.add_argument(
        "--collapse",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="collapse unary chains first (--no-collapse for pre-collapsed input)",
    )
    enc.set_defaults(func=cmd_encode)

    dec = subs.add_parser("decode", help="label file to treebank")
    dec.add_argument("-i", "--input", required=True)
    dec.add_argument("-o", "--output", required=True)
    _add_scale(dec)
    dec.set_defaults(func=cmd_decode)

    tr = subs.add_parser("train", help="fit a tagger on a label file")
    tr.add_argument("-i", "--input", required=True)
    tr.add_argument("-o", "--output", required=True)
    tr.add_argument(
        "--pass",
        dest="task",
        choices=("psi", "phi", "phi-prime"),
        required=True,
    )
    tr.add_argument("--scale", choices=_SCALES, default=None,
                    help="default: inferred from the labels")
    tr.add_argument("--k", type=int, default=2)
    tr.add_argument("--epochs", type=int, default=20)
    tr.add_argument("--seed", type=int, default=42)
    tr.set_defaults(func=cmd_train)

    pr = subs.add_parser("predict", help="tag a word/pos file with a model")
    pr.add_argument("-m", "--model", required=True)
    pr.add_argument("-i", "--input", required=True)
    pr.add_argument("-o", "--output", required=True)
    pr.set_defaults(func=cmd_predict)

    pa = subs.add_parser("parse", help="word/pos file to treebank via models")
    pa.add_argument("-m", "--model", required=True, help="phi or phi-prime model")
    pa.add_argument("--psi-model", default=None, help="chain model for two-pass")
    pa.add_argument("-i", "--input", required=True)
    pa.add_argument("-o", "--output", required=True)
    pa.set_defaults(func=cmd_parse)

    ev = subs.add_parser("eval", help="bracketing scores for two treebanks")
    ev.add_argument("--gold", required=True)
    ev.add_argument("--pred", required=True)
    ev.add_argument(
        "--delete-labels",
        nargs="*",
        default=None,
        help="labels and tags to ignore (default: TOP S1 -NONE- , : `` '' .)",
    )
    ev.add_argument("--gold-labels", default=None)
    ev.add_argument("--pred-labels", default=None)
    _add_scale(ev)
    ev.add_argument("--machine", action="store_true", help="one-line output only")
    ev.set_defaults(func=cmd_eval)

    rt = subs.add_parser("roundtrip", help="check encode/decode identity")
    rt.add_argument("-i", "--input", required=True)
    _add_scale(rt)
    rt.add_argument(
        "--unaries", choices=("two-pass", "extended"), default="two-pass"
    )
    rt.set_defaults(func=cmd_roundtrip)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TreeSeqError, OSError) as exc:
        print(f"treeseq: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
