"""Lossless encoding of collapsed constituent trees as per-word labels.

Each word w_i of a sentence of length n gets a label (n_i, c_i) where n_i
counts the common ancestors of w_i and w_{i+1} and c_i is the nonterminal
at their lowest common ancestor; position n holds a dummy end-of-sentence
label.  Four scales express n_i:

  abs       the count itself
  rel       difference against the previous count (first against 0)
  rel-root  like rel, but count==1 positions become (ROOT, root label)
  kary      like rel, but every negative difference becomes a single NEG
            marker; only valid for strictly k-ary trees

Leaf unary chains folded into the pos field can ride along either as a
separate per-word enrichment sequence (two-pass) or as a third label
component (extended labels).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import (
    IndexOutOfRange,
    LengthMismatch,
    MalformedLabel,
    NonPositivePrefixSum,
    NotStrictlyKary,
    UnaryBranchPresent,
)
from .trees import CHAIN_SEP, Internal, Leaf, Token, Tree, leaf_tokens, validate_no_unaries

ROOT = "ROOT"
NEG = "NEG"
EOS = "EOS"
PSI_NONE = "NONE"

_SCALES = ("abs", "rel", "rel-root", "kary")


@dataclass(frozen=True, slots=True)
class Label:
    """One per-word label.  ``n`` is kept in serialized form: a bare int
    for abs ("2"), a signed int for the relative scales ("+2", "-1"), or
    one of the sentinels ROOT / NEG / EOS.  ``unary`` is the leaf chain
    above the PoS tag, or None when the label does not carry one."""

    n: str
    nt: str
    unary: Optional[str] = None

    def to_string(self) -> str:
        if self.unary is None:
            return f"{self.n}|{self.nt}"
        return f"{self.n}|{self.nt}|{self.unary}"

    @staticmethod
    def from_string(text: str) -> "Label":
        parts = text.split("|")
        if len(parts) == 2:
            n, nt = parts
            unary = None
        elif len(parts) == 3:
            n, nt, unary = parts
            if unary == PSI_NONE:
                unary = None
        else:
            raise MalformedLabel(f"expected 2 or 3 |-separated fields: {text!r}")
        if not n or not nt:
            raise MalformedLabel(f"empty field in label {text!r}")
        if n not in (ROOT, NEG, EOS):
            try:
                int(n)
            except ValueError:
                raise MalformedLabel(f"bad count field {n!r} in label {text!r}") from None
        return Label(n, nt, unary)


@dataclass(frozen=True, slots=True)
class Scheme:
    """How a sentence is labeled: the count scale, the arity bound for the
    kary scale, and whether labels carry the unary component inline."""

    scale: str = "rel"
    k: int = 2
    extended: bool = False

    def __post_init__(self):
        if self.scale not in _SCALES:
            raise ValueError(f"unknown scale {self.scale!r}")
        if self.scale == "kary" and self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")


@dataclass(slots=True)
class LabeledSentence:
    tokens: list[Token]
    labels: list[Label] = field(default_factory=list)

    def __post_init__(self):
        if self.labels and len(self.labels) != len(self.tokens):
            raise LengthMismatch(
                f"{len(self.tokens)} tokens but {len(self.labels)} labels"
            )


# ---------------------------------------------------------------------------
# Common-ancestor counting

# Subtree objects may be shared (value semantics), so paths are tracked as
# child-index sequences from the root rather than by node identity.


def _index_paths(tree: Tree) -> tuple[list[tuple[int, ...]], list[list[str]]]:
    idx_paths: list[tuple[int, ...]] = []
    lbl_paths: list[list[str]] = []

    def walk(node: Tree, route: tuple[int, ...], labels: list[str]) -> None:
        if isinstance(node, Leaf):
            idx_paths.append(route)
            lbl_paths.append(labels)
            return
        below = labels + [node.label]
        for j, child in enumerate(node.children):
            walk(child, route + (j,), below)

    walk(tree, (), [])
    return idx_paths, lbl_paths


def _common_by_position(tree: Tree, i: int) -> tuple[int, str]:
    idx_paths, lbl_paths = _index_paths(tree)
    if not 1 <= i < len(idx_paths):
        raise IndexOutOfRange(f"i={i} for a {len(idx_paths)}-word sentence")
    left, right = idx_paths[i - 1], idx_paths[i]
    shared = 0
    for a, b in zip(left, right):
        if a != b:
            break
        shared += 1
    count = shared + 1  # the node above the first divergence, plus the root
    return count, lbl_paths[i][count - 1]


def common_ancestors(tree: Tree, i: int) -> tuple[int, str]:
    """Number of ancestors shared by words i and i+1 (1-based) and the
    label of the lowest one.  Ancestor identity is positional: subtrees
    are immutable values and may be shared, so nodes are told apart by
    their child-index route from the root."""
    return _common_by_position(tree, i)


# ---------------------------------------------------------------------------
# Encoders (all take a collapsed tree; unary branches are an error)


def _require_collapsed(tree: Tree) -> None:
    if not validate_no_unaries(tree):
        raise UnaryBranchPresent("tree has a unary branch; collapse it first")


def _dummy(tokens: list[Token]) -> Label:
    return Label(EOS, EOS)


def _absolute_counts(tree: Tree) -> list[tuple[int, str]]:
    """(count, lca label) for every adjacent leaf pair, one tree walk."""
    idx_paths, lbl_paths = _index_paths(tree)
    out = []
    for i in range(1, len(idx_paths)):
        left, right = idx_paths[i - 1], idx_paths[i]
        shared = 0
        for a, b in zip(left, right):
            if a != b:
                break
            shared += 1
        count = shared + 1
        out.append((count, lbl_paths[i][count - 1]))
    return out


def encode_absolute(tree: Tree) -> LabeledSentence:
    _require_collapsed(tree)
    tokens = leaf_tokens(tree)
    if len(tokens) == 1:
        return LabeledSentence(tokens, [_dummy(tokens)])
    labels = [Label(str(count), nt) for count, nt in _absolute_counts(tree)]
    labels.append(_dummy(tokens))
    return LabeledSentence(tokens, labels)


def encode_relative(tree: Tree) -> LabeledSentence:
    sent = encode_absolute(tree)
    prev = 0
    labels = []
    for lab in sent.labels[:-1]:
        count = int(lab.n)
        labels.append(Label(f"{count - prev:+d}", lab.nt))
        prev = count
    labels.append(sent.labels[-1])
    return LabeledSentence(sent.tokens, labels)


def apply_root_links(seq: LabeledSentence, tree: Tree) -> LabeledSentence:
    """Replace every label whose absolute ancestor count is exactly 1 (the
    word pair meets at the tree root) with (ROOT, root label).  Accepts a
    sequence in either the absolute or the relative scale; other positions
    pass through unchanged."""
    if isinstance(tree, Leaf):
        return seq
    labels = []
    prev = 0
    for pos, lab in enumerate(seq.labels):
        if lab.n == EOS and pos == len(seq.labels) - 1:
            labels.append(lab)
            continue
        if lab.n in (ROOT, NEG):
            raise MalformedLabel(f"cannot root-link a {lab.n} label")
        value = int(lab.n)
        count = prev + value if lab.n.startswith(("+", "-")) else value
        if count == 1:
            labels.append(Label(ROOT, tree.label, lab.unary))
        else:
            labels.append(lab)
        prev = count
    return LabeledSentence(seq.tokens, labels)


def encode_relative_root(tree: Tree) -> LabeledSentence:
    """Relative scale, except positions whose absolute count is 1 (the word
    hangs directly off the root) become (ROOT, root label)."""
    return apply_root_links(encode_relative(tree), tree)


def _check_strictly_kary(tree: Tree, k: int) -> None:
    if isinstance(tree, Leaf):
        return
    if len(tree.children) != k:
        raise NotStrictlyKary(
            f"node {tree.label!r} has {len(tree.children)} children, expected {k}"
        )
    for child in tree.children:
        _check_strictly_kary(child, k)


def encode_kary(tree: Tree, k: int = 2) -> LabeledSentence:
    """Relative scale with every negative difference replaced by NEG.  In a
    strictly k-ary tree the drop target is recoverable, so the magnitude is
    redundant."""
    _require_collapsed(tree)
    _check_strictly_kary(tree, k)
    sent = encode_relative(tree)
    labels = [
        Label(NEG, lab.nt) if lab.n not in (EOS,) and int(lab.n) < 0 else lab
        for lab in sent.labels[:-1]
    ]
    labels.append(sent.labels[-1])
    return LabeledSentence(sent.tokens, labels)


def encode(tree: Tree, scheme: Scheme) -> LabeledSentence:
    """Encode a collapsed tree under the given scheme.  With
    scheme.extended the unary enrichment is inlined as a third label
    component and tokens carry their raw PoS."""
    if scheme.extended:
        return encode_extended(tree, scheme)
    if scheme.scale == "abs":
        return encode_absolute(tree)
    if scheme.scale == "rel":
        return encode_relative(tree)
    if scheme.scale == "rel-root":
        return encode_relative_root(tree)
    return encode_kary(tree, scheme.k)


# ---------------------------------------------------------------------------
# Unary enrichment


def split_enriched_pos(pos: str) -> tuple[Optional[str], str]:
    """Split an enriched pos field into (chain above the tag, raw tag).  A
    plain tag yields (None, tag)."""
    if CHAIN_SEP not in pos:
        return None, pos
    head, _, tag = pos.rpartition(CHAIN_SEP)
    return head, tag


def join_enriched_pos(unary: Optional[str], pos: str) -> str:
    if unary is None:
        return pos
    return f"{unary}{CHAIN_SEP}{pos}"


def leaf_unary_sequence(tokens: list[Token]) -> list[Optional[str]]:
    """Per-word chains folded into enriched pos fields ("X+Y+T" -> "X+Y")."""
    return [split_enriched_pos(t.pos)[0] for t in tokens]


def encode_leaf_unaries_psi(tree: Tree) -> list[str]:
    """The separate-task targets: one string per token, the leaf chain
    above the PoS tag ("Z+T5" -> "Z"), NONE when there is none."""
    return [
        c if c is not None else PSI_NONE
        for c in leaf_unary_sequence(leaf_tokens(tree))
    ]


def strip_token_unaries(tokens: list[Token]) -> list[Token]:
    return [Token(t.word, split_enriched_pos(t.pos)[1]) for t in tokens]


def enrich_tokens(tokens: list[Token], unaries: list[Optional[str]]) -> list[Token]:
    if len(tokens) != len(unaries):
        raise LengthMismatch(f"{len(tokens)} tokens but {len(unaries)} chains")
    return [
        Token(t.word, join_enriched_pos(u, t.pos)) for t, u in zip(tokens, unaries)
    ]


def encode_extended(tree: Tree, scheme: Scheme) -> LabeledSentence:
    """Encode with the unary chain of word i inlined as the label's third
    component; tokens are stripped back to their raw PoS."""
    base = encode(tree, Scheme(scheme.scale, scheme.k, extended=False))
    unaries = leaf_unary_sequence(base.tokens)
    labels = [
        Label(lab.n, lab.nt, unary) for lab, unary in zip(base.labels, unaries)
    ]
    return LabeledSentence(strip_token_unaries(base.tokens), labels)


# ---------------------------------------------------------------------------
# Scale conversion


def abs_to_rel(labels: list[Label]) -> list[Label]:
    out = []
    prev = 0
    for pos, lab in enumerate(labels):
        if lab.n == EOS:
            if pos != len(labels) - 1:
                raise MalformedLabel(f"EOS at position {pos + 1} of {len(labels)}")
            out.append(lab)
            continue
        if lab.n in (ROOT, NEG):
            raise MalformedLabel(f"cannot convert {lab.n} label to relative")
        count = int(lab.n)
        out.append(Label(f"{count - prev:+d}", lab.nt, lab.unary))
        prev = count
    return out


def rel_to_abs(labels: list[Label]) -> list[Label]:
    out = []
    prev = 0
    for pos, lab in enumerate(labels):
        if lab.n == EOS:
            if pos != len(labels) - 1:
                raise MalformedLabel(f"EOS at position {pos + 1} of {len(labels)}")
            out.append(lab)
            continue
        if lab.n in (ROOT, NEG):
            raise MalformedLabel(f"cannot convert {lab.n} label to absolute")
        prev += int(lab.n)
        if prev < 1:
            raise NonPositivePrefixSum(
                f"running count {prev} at position {pos + 1}"
            )
        out.append(Label(str(prev), lab.nt, lab.unary))
    return out


# ---------------------------------------------------------------------------
# Label file IO (word<TAB>pos<TAB>label, one row per word, blank line
# between sentences)


def extended_label_string(lab: Label) -> str:
    """3-part form with an explicit NONE placeholder for a missing chain."""
    unary = lab.unary if lab.unary is not None else PSI_NONE
    return f"{lab.n}|{lab.nt}|{unary}"


def write_labeled(path, sentences: list[LabeledSentence], extended: bool = False) -> None:
    render = extended_label_string if extended else Label.to_string
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for sent in sentences:
            for tok, lab in zip(sent.tokens, sent.labels):
                handle.write(f"{tok.word}\t{tok.pos}\t{render(lab)}\n")
            handle.write("\n")


def iter_labeled(path) -> Iterator[LabeledSentence]:
    tokens: list[Token] = []
    labels: list[Label] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                if tokens:
                    yield LabeledSentence(tokens, labels)
                    tokens, labels = [], []
                continue
            cols = line.split("\t")
            if len(cols) != 3:
                raise MalformedLabel(
                    f"line {lineno}: expected 3 tab-separated columns, got {len(cols)}"
                )
            word, pos, lab = cols
            tokens.append(Token(word, pos))
            labels.append(Label.from_string(lab))
    if tokens:
        yield LabeledSentence(tokens, labels)


def read_labeled(path) -> list[LabeledSentence]:
    return list(iter_labeled(path))


def write_string_rows(path, rows: list[tuple[list[Token], list[str]]]) -> None:
    """word<TAB>pos<TAB>string sentences where the third column is not a
    structured label, e.g. unary-chain targets for the two-pass task."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for tokens, strings in rows:
            if len(tokens) != len(strings):
                raise LengthMismatch(
                    f"{len(tokens)} tokens but {len(strings)} strings"
                )
            for tok, s in zip(tokens, strings):
                handle.write(f"{tok.word}\t{tok.pos}\t{s}\n")
            handle.write("\n")


def read_string_rows(path) -> list[tuple[list[Token], list[str]]]:
    rows: list[tuple[list[Token], list[str]]] = []
    tokens: list[Token] = []
    strings: list[str] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                if tokens:
                    rows.append((tokens, strings))
                    tokens, strings = [], []
                continue
            cols = line.split("\t")
            if len(cols) != 3:
                raise MalformedLabel(
                    f"line {lineno}: expected 3 tab-separated columns, got {len(cols)}"
                )
            tokens.append(Token(cols[0], cols[1]))
            strings.append(cols[2])
    if tokens:
        rows.append((tokens, strings))
    return rows


def write_tagged(path, sentences: list[list[Token]]) -> None:
    """Two-column word<TAB>pos file, the prediction-time input format."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for tokens in sentences:
            for tok in tokens:
                handle.write(f"{tok.word}\t{tok.pos}\n")
            handle.write("\n")


def read_tagged(path) -> list[list[Token]]:
    sentences: list[list[Token]] = []
    tokens: list[Token] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                if tokens:
                    sentences.append(tokens)
                    tokens = []
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise MalformedLabel(
                    f"line {lineno}: expected 2 tab-separated columns, got {len(cols)}"
                )
            tokens.append(Token(cols[0], cols[1]))
    if tokens:
        sentences.append(tokens)
    return sentences
