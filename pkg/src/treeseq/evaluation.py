"""Bracketing evaluation in the evalb tradition, plus label accuracy.

A tree is scored as a multiset of (label, start, end) spans over 1-based
inclusive word indices.  Leaves whose PoS tag is in the deleted set do not
consume an index at all, and nonterminals in the deleted set contribute no
span (their descendants still do).  Precision, recall, and F1 are micro
averages over the whole corpus; exact match is the fraction of sentences
whose span multisets agree completely.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace

from .errors import LengthMismatch, TokenMismatch
from .trees import Leaf, Tree, leaf_tokens

DEFAULT_DELETED = frozenset({"TOP", "S1", "-NONE-", ",", ":", "``", "''", "."})


@dataclass(frozen=True, slots=True)
class EvalReport:
    matched_brackets: int
    gold_brackets: int
    pred_brackets: int
    precision: float
    recall: float
    f1: float
    label_accuracy: float
    exact_match: float
    n_sentences: int

    def with_accuracy(self, accuracy: float) -> "EvalReport":
        return replace(self, label_accuracy=accuracy)


def tree_spans(tree: Tree, deleted=DEFAULT_DELETED) -> Counter:
    """Multiset of labeled spans.  Unary chains contribute one span per
    node; nodes covering only deleted-PoS leaves contribute none."""
    spans: Counter = Counter()
    next_index = 1

    def walk(node: Tree) -> tuple[int, int] | None:
        nonlocal next_index
        if isinstance(node, Leaf):
            if node.token.pos in deleted:
                return None
            start = next_index
            next_index += 1
            return start, start
        lo = hi = None
        for child in node.children:
            got = walk(child)
            if got is not None:
                lo = got[0] if lo is None else lo
                hi = got[1]
        if lo is None:
            return None
        if node.label not in deleted:
            spans[(node.label, lo, hi)] += 1
        return lo, hi

    walk(tree)
    return spans


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def bracketing_score(
    gold_trees: list[Tree], pred_trees: list[Tree], deleted=DEFAULT_DELETED
) -> EvalReport:
    """Corpus-level micro P/R/F1 over labeled spans, plus exact match.
    Tree pairs must agree on their words (tags may differ).  The report's
    label_accuracy field is left at 0.0; fill it with with_accuracy()."""
    if len(gold_trees) != len(pred_trees):
        raise LengthMismatch(
            f"{len(gold_trees)} gold trees but {len(pred_trees)} predicted"
        )
    matched = gold_total = pred_total = exact = 0
    for i, (gold, pred) in enumerate(zip(gold_trees, pred_trees), start=1):
        gold_words = [t.word for t in leaf_tokens(gold)]
        pred_words = [t.word for t in leaf_tokens(pred)]
        if gold_words != pred_words:
            raise TokenMismatch(f"sentence {i}: word sequences differ")
        gspans = tree_spans(gold, deleted)
        pspans = tree_spans(pred, deleted)
        matched += sum(min(n, pspans[s]) for s, n in gspans.items())
        gold_total += sum(gspans.values())
        pred_total += sum(pspans.values())
        if gspans == pspans:
            exact += 1
    precision = _safe_div(matched, pred_total)
    recall = _safe_div(matched, gold_total)
    return EvalReport(
        matched_brackets=matched,
        gold_brackets=gold_total,
        pred_brackets=pred_total,
        precision=precision,
        recall=recall,
        f1=_safe_div(2 * precision * recall, precision + recall),
        label_accuracy=0.0,
        exact_match=_safe_div(exact, len(gold_trees)),
        n_sentences=len(gold_trees),
    )


def label_accuracy(gold: list[list[str]], pred: list[list[str]]) -> float:
    """Position-wise string equality over per-word label sequences, the
    dummy included, no symbol excluded."""
    if len(gold) != len(pred):
        raise LengthMismatch(f"{len(gold)} gold sentences but {len(pred)} predicted")
    correct = total = 0
    for i, (gseq, pseq) in enumerate(zip(gold, pred), start=1):
        if len(gseq) != len(pseq):
            raise LengthMismatch(
                f"sentence {i}: {len(gseq)} gold labels but {len(pseq)} predicted"
            )
        total += len(gseq)
        correct += sum(g == p for g, p in zip(gseq, pseq))
    return _safe_div(correct, total)


def machine_line(report: EvalReport) -> str:
    return (
        f"P={report.precision:.4f} R={report.recall:.4f} F1={report.f1:.4f} "
        f"ACC={report.label_accuracy:.4f} EXACT={report.exact_match:.4f}"
    )


def render_report(report: EvalReport) -> str:
    lines = [
        f"sentences        {report.n_sentences}",
        f"gold brackets    {report.gold_brackets}",
        f"pred brackets    {report.pred_brackets}",
        f"matched          {report.matched_brackets}",
        f"precision        {report.precision:.4f}",
        f"recall           {report.recall:.4f}",
        f"f1               {report.f1:.4f}",
        f"label accuracy   {report.label_accuracy:.4f}",
        f"exact match      {report.exact_match:.4f}",
        machine_line(report),
    ]
    return "\n".join(lines)
