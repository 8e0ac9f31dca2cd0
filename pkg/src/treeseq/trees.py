"""Constituent trees: bracketed-string reading/writing and the structural
transforms the label encoders rely on.

A tree is either a ``Leaf`` holding a (word, PoS) token or an ``Internal``
node with a nonterminal label and an ordered, nonempty tuple of children.
Unary chains are collapsed into single ``+``-joined symbols ("X+Y"), with
chains above a PoS tag folded into the token's pos field ("Z+T5", PoS
last).  Because "+" carries that meaning, the reader rejects it inside
input symbols, along with "|" (reserved by the label file format).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .errors import (
    EmptyTree,
    InvalidSymbol,
    LeafWithoutWord,
    TreeSeqError,
    UnbalancedBrackets,
)

CHAIN_SEP = "+"
BIN_SUFFIX = "*"


@dataclass(frozen=True, slots=True)
class Token:
    word: str
    pos: str


@dataclass(frozen=True, slots=True)
class Leaf:
    token: Token


@dataclass(frozen=True, slots=True)
class Internal:
    label: str
    children: "tuple[Tree, ...]"


Tree = Union[Leaf, Internal]


def leaf_tokens(tree: Tree) -> list[Token]:
    """Tokens of the tree in sentence order."""
    out: list[Token] = []
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            out.append(node.token)
        else:
            stack.extend(reversed(node.children))
    return out


# ---------------------------------------------------------------------------
# Bracketed notation


class _Parser:
    """Recursive-descent reader for one single-line bracketed tree."""

    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def _offset(self) -> int:
        # error positions are reported in bytes, not code points
        return len(self.text[: self.i].encode("utf-8"))

    def _skip_ws(self) -> None:
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def _read_atom(self) -> str:
        start = self.i
        while self.i < len(self.text) and not (
            self.text[self.i].isspace() or self.text[self.i] in "()"
        ):
            self.i += 1
        return self.text[start : self.i]

    def _read_symbol(self) -> str:
        start_off = self._offset()
        atom = self._read_atom()
        if not atom:
            raise InvalidSymbol("empty symbol", start_off)
        for bad in (CHAIN_SEP, "|"):
            if bad in atom:
                raise InvalidSymbol(f"symbol {atom!r} contains reserved {bad!r}", start_off)
        return atom

    def _node(self) -> Tree:
        # caller positioned us at '('
        self.i += 1
        self._skip_ws()
        symbol = self._read_symbol()
        self._skip_ws()
        if self.i >= len(self.text):
            raise UnbalancedBrackets("unexpected end of line", self._offset())
        if self.text[self.i] == "(":
            children = []
            while self.i < len(self.text) and self.text[self.i] == "(":
                children.append(self._node())
                self._skip_ws()
            if self.i >= len(self.text):
                raise UnbalancedBrackets("missing ')'", self._offset())
            if self.text[self.i] != ")":
                raise UnbalancedBrackets(
                    f"expected '(' or ')', found {self.text[self.i]!r}", self._offset()
                )
            self.i += 1
            return Internal(symbol, tuple(children))
        if self.text[self.i] == ")":
            raise LeafWithoutWord(f"node {symbol!r} has no word", self._offset())
        word = self._read_atom()
        self._skip_ws()
        if self.i >= len(self.text) or self.text[self.i] != ")":
            raise UnbalancedBrackets(f"missing ')' after word {word!r}", self._offset())
        self.i += 1
        return Leaf(Token(word, symbol))

    def parse(self) -> Tree:
        self._skip_ws()
        if self.i >= len(self.text):
            raise EmptyTree(offset=self._offset())
        if self.text[self.i] != "(":
            raise UnbalancedBrackets(
                f"expected '(', found {self.text[self.i]!r}", self._offset()
            )
        tree = self._node()
        self._skip_ws()
        if self.i < len(self.text):
            raise UnbalancedBrackets("trailing text after tree", self._offset())
        return tree


def parse_bracketed(line: str) -> Tree:
    """Read one tree in single-line bracketed form, ``(LABEL child ...)``
    with leaves written ``(POS word)``."""
    return _Parser(line).parse()


def serialize_bracketed(tree: Tree) -> str:
    """Single-line bracketed form; inverse of parse_bracketed."""
    if isinstance(tree, Leaf):
        return f"({tree.token.pos} {tree.token.word})"
    inner = " ".join(serialize_bracketed(c) for c in tree.children)
    return f"({tree.label} {inner})"


def iter_treebank(path) -> Iterator[tuple[int, Tree]]:
    """Yield (1-based line number, tree) per nonblank line of a treebank file."""
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                yield lineno, parse_bracketed(line)
            except TreeSeqError as exc:
                exc.args = (f"line {lineno}: {exc}",)
                raise


def read_treebank(path) -> list[Tree]:
    return [tree for _, tree in iter_treebank(path)]


def write_treebank(path, trees) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for tree in trees:
            handle.write(serialize_bracketed(tree))
            handle.write("\n")


# ---------------------------------------------------------------------------
# Unary chains


def collapse_unaries(tree: Tree) -> Tree:
    """Merge unary chains so no internal node has exactly one child.

    Nonterminal-over-nonterminal chains become one node labeled with the
    chain joined top-down ("X+Y").  Chains ending in a PoS tag are folded
    into the token's pos field ("Z+T5").  A single-word sentence whose
    whole spine is unary collapses to a bare leaf.
    """
    if isinstance(tree, Leaf):
        return tree
    chain = [tree.label]
    node = tree
    while len(node.children) == 1:
        child = node.children[0]
        if isinstance(child, Leaf):
            tok = child.token
            return Leaf(Token(tok.word, CHAIN_SEP.join(chain + [tok.pos])))
        chain.append(child.label)
        node = child
    return Internal(
        CHAIN_SEP.join(chain), tuple(collapse_unaries(c) for c in node.children)
    )


def uncollapse_unaries(tree: Tree) -> Tree:
    """Expand ``+``-joined symbols back into unary chains; exact inverse of
    collapse_unaries."""
    if isinstance(tree, Leaf):
        parts = tree.token.pos.split(CHAIN_SEP)
        node: Tree = Leaf(Token(tree.token.word, parts[-1]))
    else:
        parts = tree.label.split(CHAIN_SEP)
        node = Internal(parts[-1], tuple(uncollapse_unaries(c) for c in tree.children))
    for label in reversed(parts[:-1]):
        node = Internal(label, (node,))
    return node


def validate_no_unaries(tree: Tree) -> bool:
    """True iff no internal node has exactly one child."""
    if isinstance(tree, Leaf):
        return True
    if len(tree.children) == 1:
        return False
    return all(validate_no_unaries(c) for c in tree.children)


# ---------------------------------------------------------------------------
# Binarization


def _right_group(aux_label: str, kids: tuple) -> tuple:
    if len(kids) <= 2:
        return kids
    return (kids[0], Internal(aux_label, _right_group(aux_label, kids[1:])))


def binarize(tree: Tree) -> Tree:
    """Right-branching binarization of a collapsed tree.  Auxiliary nodes
    carry the original parent label suffixed with ``*``."""
    if isinstance(tree, Leaf):
        return tree
    kids = tuple(binarize(c) for c in tree.children)
    if len(kids) > 2:
        kids = _right_group(tree.label + BIN_SUFFIX, kids)
    return Internal(tree.label, kids)


def debinarize(tree: Tree) -> Tree:
    """Splice out every node whose label ends in ``*``, promoting its
    children; inverse of binarize."""
    if isinstance(tree, Leaf):
        return tree
    kids: list[Tree] = []
    for child in tree.children:
        child = debinarize(child)
        if isinstance(child, Internal) and child.label.endswith(BIN_SUFFIX):
            kids.extend(child.children)
        else:
            kids.append(child)
    return Internal(tree.label, tuple(kids))
