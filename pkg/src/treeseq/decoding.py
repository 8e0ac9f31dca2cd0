"""Decoding label sequences back into trees.

The decoder is total: any label sequence of the right length produces a
valid tree.  Well-formed sequences round-trip exactly; ill-formed ones are
repaired in place:

  * absolute counts below 1 are clamped to 1, and relative steps that
    would push the running count below 1 are clamped the same way
  * when two positions assign different nonterminals to one node, the
    first assignment wins
  * nodes that end up with exactly one child were never requested by the
    encoder, so they are spliced out, keeping the lower node's label
  * a NEG with no open node missing its k-th child falls back to depth 1

The output is a collapsed tree (``+``-joined chain symbols intact);
callers wanting the full tree expand it afterwards.
"""

from __future__ import annotations

from typing import Optional

from .errors import LengthMismatch, MalformedLabel
from .encoding import (
    EOS,
    NEG,
    PSI_NONE,
    ROOT,
    Label,
    LabeledSentence,
    Scheme,
    enrich_tokens,
)
from .trees import Internal, Leaf, Token, Tree, uncollapse_unaries


class _Node:
    __slots__ = ("label", "children")

    def __init__(self):
        self.label: Optional[str] = None
        self.children: list = []


def _freeze(node: _Node) -> Tree:
    """Convert the mutable build tree to the immutable form, splicing out
    single-child nodes.  Such nodes only arise from repaired sequences
    (the encoder never emits them), and the kept label is the lower one:
    an unlabeled generated parent disappears entirely, and a labeled one
    still defers to its child, matching first-assignment-wins reading
    order (the child's label was fixed at an earlier position)."""
    while isinstance(node, _Node) and len(node.children) == 1:
        node = node.children[0]
    if isinstance(node, Leaf):
        return node
    kids = tuple(_freeze(child) for child in node.children)
    label = node.label if node.label is not None else EOS
    return Internal(label, kids)


def _target_depth(
    n: str, prev: int, stack: list, scale: str, k: int
) -> int:
    if n == ROOT:
        return 1
    if n == EOS:
        # a stray dummy mid-sentence; hold the current depth
        return max(prev, 1)
    if n == NEG:
        if scale != "kary":
            raise MalformedLabel("NEG label outside the kary scale")
        # deepest open node still lacking its k-th child; the new leaf is
        # already attached when this runs, so the scan sees current arity
        for depth in range(len(stack), 0, -1):
            if len(stack[depth - 1].children) < k:
                return depth
        return 1
    value = int(n)
    if scale == "abs":
        return max(1, value)
    return max(1, prev + value)


def decode(tokens: list[Token], labels: list[Label], scheme: Scheme) -> Tree:
    """Rebuild a collapsed tree from per-word labels.  Never fails on
    sequence content, only on length mismatch or labels that cannot occur
    under the scheme at all (NEG outside kary, bad count syntax)."""
    if len(tokens) != len(labels):
        raise LengthMismatch(f"{len(tokens)} tokens but {len(labels)} labels")
    if len(tokens) == 1:
        return Leaf(tokens[0])

    stack: list[_Node] = []
    prev = 0
    for tok, lab in zip(tokens[:-1], labels[:-1]):
        leaf = Leaf(tok)
        if lab.n == NEG and stack:
            # attach first so the arity scan counts this word
            stack[-1].children.append(leaf)
            target = _target_depth(lab.n, prev, stack, scheme.scale, scheme.k)
            del stack[target:]
        else:
            target = _target_depth(lab.n, prev, stack, scheme.scale, scheme.k)
            if target > len(stack):
                while len(stack) < target:
                    node = _Node()
                    if stack:
                        stack[-1].children.append(node)
                    stack.append(node)
                stack[-1].children.append(leaf)
            else:
                # the word lives at the current deepest open node; the
                # count then closes everything below the target
                stack[-1].children.append(leaf)
                del stack[target:]
        node = stack[target - 1]
        if node.label is None:
            node.label = lab.nt
        prev = target

    stack[-1].children.append(Leaf(tokens[-1]))
    return _freeze(stack[0])


def decode_extended(
    tokens: list[Token], labels: list[Label], scheme: Scheme
) -> Tree:
    """Decode 3-component labels: the unary chain carried by each label is
    folded back into the token's pos before decoding, and the result is
    expanded to the full tree."""
    if len(tokens) != len(labels):
        raise LengthMismatch(f"{len(tokens)} tokens but {len(labels)} labels")
    unaries = [lab.unary for lab in labels]
    enriched = enrich_tokens(tokens, unaries)
    core = [Label(lab.n, lab.nt) for lab in labels]
    return uncollapse_unaries(decode(enriched, core, scheme))


def merge_psi(tokens: list[Token], psi_labels: list) -> list[Token]:
    """Fold a predicted per-word unary sequence into raw-PoS tokens, the
    glue between the two passes.  Accepts None or the literal NONE marker
    for chain-free words."""
    chains = [
        None if u is None or u == PSI_NONE else u for u in psi_labels
    ]
    return enrich_tokens(tokens, chains)


def repair_absolute_counts(counts: list[int]) -> list[int]:
    """Clamp absolute ancestor counts below 1 up to 1, the same repair the
    decoder applies on the fly."""
    return [max(1, c) for c in counts]


def decode_sentence(sent: LabeledSentence, scheme: Scheme) -> Tree:
    return decode(sent.tokens, sent.labels, scheme)
