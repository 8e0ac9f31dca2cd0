from collections import Counter

import pytest

from treeseq import (
    DEFAULT_DELETED,
    EOS,
    Label,
    LengthMismatch,
    Scheme,
    Token,
    TokenMismatch,
    bracketing_score,
    decode,
    label_accuracy,
    parse_bracketed,
)
from treeseq.evaluation import machine_line, render_report, tree_spans
from treegen import fixed_pos_trees


def spans(text, deleted=frozenset()):
    return tree_spans(parse_bracketed(text), deleted)


def test_tree_spans_basic():
    assert spans("(S (X (A a) (B b)) (C c))") == Counter(
        {("S", 1, 3): 1, ("X", 1, 2): 1}
    )
    assert spans("(S (A a) (X (B b) (C c)))") == Counter(
        {("S", 1, 3): 1, ("X", 2, 3): 1}
    )


def test_tree_spans_unary_chain_counts_twice():
    assert spans("(S (NP (NP (DT the) (NN dog))))") == Counter(
        {("S", 1, 2): 1, ("NP", 1, 2): 2}
    )


def test_tree_spans_deleted_pos_consumes_no_index():
    with_dot = spans(
        "(S (NP (DT the) (NN dog)) (VP (VBD ran)) (. .))", deleted={"."}
    )
    assert with_dot == Counter({("S", 1, 3): 1, ("NP", 1, 2): 1, ("VP", 3, 3): 1})
    # undeleted, the dot still adds no span of its own (tags live on
    # leaves) but it does consume index 4, widening the root
    plain = spans("(S (NP (DT the) (NN dog)) (VP (VBD ran)) (. .))")
    assert plain == Counter({("S", 1, 4): 1, ("NP", 1, 2): 1, ("VP", 3, 3): 1})


def test_tree_spans_deleted_nonterminal_keeps_children():
    got = spans("(TOP (S (A a) (B b)))", deleted={"TOP"})
    assert got == Counter({("S", 1, 2): 1})


def test_tree_spans_node_of_only_deleted_leaves_vanishes():
    got = spans("(S (A a) (PUNCT (. .) (, ,)))", deleted={".", ","})
    assert got == Counter({("S", 1, 1): 1})


def test_score_identity():
    trees = list(fixed_pos_trees(2, 4))
    report = bracketing_score(trees, trees, deleted=frozenset())
    assert report.precision == report.recall == report.f1 == 1.0
    assert report.exact_match == 1.0
    assert report.n_sentences == len(trees)
    assert report.matched_brackets == report.gold_brackets == report.pred_brackets


def test_score_half_overlap_example():
    gold = [parse_bracketed("(S (X (A a) (B b)) (C c))")]
    pred = [parse_bracketed("(S (A a) (X (B b) (C c)))")]
    report = bracketing_score(gold, pred, deleted=frozenset())
    assert report.matched_brackets == 1
    assert report.gold_brackets == report.pred_brackets == 2
    assert report.precision == report.recall == report.f1 == 0.5
    assert report.exact_match == 0.0


def test_score_duplicate_spans_use_multiset_min():
    gold = [parse_bracketed("(S (NP (NP (DT the) (NN dog))))")]
    pred = [parse_bracketed("(S (NP (DT the) (NN dog)))")]
    report = bracketing_score(gold, pred, deleted=frozenset())
    assert report.matched_brackets == 2
    assert report.precision == 1.0
    assert report.recall == pytest.approx(2 / 3)
    assert report.f1 == pytest.approx(0.8)


def test_score_punctuation_attachment_forgiven_when_deleted():
    gold = [parse_bracketed("(S (NP (DT the) (NN dog)) (VP (VBD ran)) (. .))")]
    pred = [parse_bracketed("(S (NP (DT the) (NN dog)) (VP (VBD ran) (. .)))")]
    strict = bracketing_score(gold, pred, deleted=frozenset())
    assert strict.f1 == pytest.approx(2 / 3)
    forgiving = bracketing_score(gold, pred, deleted={"."})
    assert forgiving.f1 == 1.0 and forgiving.exact_match == 1.0


def test_score_deleting_absent_label_changes_nothing():
    trees = list(fixed_pos_trees(2, 4))
    base = bracketing_score(trees, trees, deleted=frozenset())
    extra = bracketing_score(trees, trees, deleted=frozenset({"ZZZ", "QQQ"}))
    assert base == extra


def test_default_deleted_contents():
    assert {"TOP", "S1", "-NONE-", ",", ":", "``", "''", "."} == set(DEFAULT_DELETED)


def test_score_rejects_misaligned_corpora():
    t = parse_bracketed("(S (A a) (B b))")
    with pytest.raises(LengthMismatch):
        bracketing_score([t], [t, t])
    other = parse_bracketed("(S (A a) (B c))")
    with pytest.raises(TokenMismatch):
        bracketing_score([t], [other])


def test_exact_match_fraction():
    a = parse_bracketed("(S (X (A a) (B b)) (C c))")
    b = parse_bracketed("(S (A a) (X (B b) (C c)))")
    report = bracketing_score([a, a], [a, b], deleted=frozenset())
    assert report.exact_match == 0.5


def test_label_accuracy_values():
    assert label_accuracy([["a", "b"]], [["a", "b"]]) == 1.0
    assert label_accuracy([["a", "b"]], [["x", "y"]]) == 0.0
    assert label_accuracy([["a", "b"], ["c", "d"]], [["a", "x"], ["c", "y"]]) == 0.5
    with pytest.raises(LengthMismatch):
        label_accuracy([["a"]], [["a"], ["b"]])
    with pytest.raises(LengthMismatch):
        label_accuracy([["a", "b"]], [["a"]])


def test_machine_line_format():
    gold = [parse_bracketed("(S (X (A a) (B b)) (C c))")]
    pred = [parse_bracketed("(S (A a) (X (B b) (C c)))")]
    report = bracketing_score(gold, pred, deleted=frozenset()).with_accuracy(0.75)
    assert machine_line(report) == "P=0.5000 R=0.5000 F1=0.5000 ACC=0.7500 EXACT=0.0000"
    assert render_report(report).splitlines()[-1] == machine_line(report)


def test_divergent_predictions_rank_correctly():
    # same number of labeling mistakes, very different trees: one error
    # survives decoding, the other is repaired away entirely
    toks = [Token(f"w{i}", "T") for i in range(1, 5)]
    gold_labels = ["2|NP", "1|S", "2|VP", "EOS|EOS"]
    pred_a = ["2|NP", "1|S", "1|S", "EOS|EOS"]
    pred_b = ["3|NP", "1|S", "2|VP", "EOS|EOS"]
    assert label_accuracy([gold_labels], [pred_a]) == 0.75
    assert label_accuracy([gold_labels], [pred_b]) == 0.75

    def tree_of(strings):
        return decode(toks, [Label.from_string(s) for s in strings], Scheme("abs"))

    gold = tree_of(gold_labels)
    report_a = bracketing_score([gold], [tree_of(pred_a)], deleted=frozenset())
    report_b = bracketing_score([gold], [tree_of(pred_b)], deleted=frozenset())
    assert report_a.f1 == pytest.approx(0.8)
    assert report_b.f1 == 1.0 and report_b.exact_match == 1.0


def test_empty_corpus_scores_zero():
    report = bracketing_score([], [])
    assert report.f1 == 0.0 and report.n_sentences == 0
