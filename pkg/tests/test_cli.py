import pytest

from treeseq.cli import main
from treegen import ToyGrammar

TREEBANK = """\
(S (NP (DT the) (NN dog)) (VP (VBD ran)))
(S (X (A a) (B b)) (C c))
(S (NP (NN rain)))
"""

PLAIN_LABELS = """\
the\tDT\t+2|NP
dog\tNN\t-1|S
ran\tVP+VBD\tEOS|EOS

a\tA\t+2|X
b\tB\t-1|S
c\tC\tEOS|EOS

rain\tS+NP+NN\tEOS|EOS

"""

PSI_LABELS = """\
the\tDT\tNONE
dog\tNN\tNONE
ran\tVBD\tVP

a\tA\tNONE
b\tB\tNONE
c\tC\tNONE

rain\tNN\tS+NP

"""

EXTENDED_LABELS = """\
the\tDT\t+2|NP|NONE
dog\tNN\t-1|S|NONE
ran\tVBD\tEOS|EOS|VP

a\tA\t+2|X|NONE
b\tB\t-1|S|NONE
c\tC\tEOS|EOS|NONE

rain\tNN\tEOS|EOS|S+NP

"""


@pytest.fixture
def tb(tmp_path):
    path = tmp_path / "tb.txt"
    path.write_text(TREEBANK, encoding="utf-8")
    return path


def read(path):
    return path.read_text(encoding="utf-8")


def test_encode_plain_golden(tb, tmp_path):
    out = tmp_path / "lab.tsv"
    assert main(["encode", "-i", str(tb), "-o", str(out), "--scale", "rel"]) == 0
    assert read(out) == PLAIN_LABELS


def test_encode_two_pass_writes_companion(tb, tmp_path):
    out = tmp_path / "lab.tsv"
    rc = main(
        ["encode", "-i", str(tb), "-o", str(out), "--scale", "rel",
         "--unaries", "two-pass"]
    )
    assert rc == 0
    assert read(out) == PLAIN_LABELS
    assert read(tmp_path / "lab.tsv.psi") == PSI_LABELS


def test_encode_extended_golden(tb, tmp_path):
    out = tmp_path / "lab.tsv"
    rc = main(
        ["encode", "-i", str(tb), "-o", str(out), "--scale", "rel",
         "--unaries", "extended"]
    )
    assert rc == 0
    assert read(out) == EXTENDED_LABELS


def test_decode_inverts_encode(tb, tmp_path, capsys):
    for extra in ([], ["--unaries", "extended"]):
        lab = tmp_path / "lab.tsv"
        back = tmp_path / "back.txt"
        main(["encode", "-i", str(tb), "-o", str(lab), "--scale", "rel", *extra])
        assert main(["decode", "-i", str(lab), "-o", str(back), "--scale", "rel"]) == 0
        assert read(back) == TREEBANK
    capsys.readouterr()


def test_encode_all_scales_roundtrip_via_cli(tb, tmp_path):
    for scale in ("abs", "rel", "rel-root"):
        lab = tmp_path / f"{scale}.tsv"
        back = tmp_path / f"{scale}.txt"
        main(["encode", "-i", str(tb), "-o", str(lab), "--scale", scale])
        main(["decode", "-i", str(lab), "-o", str(back), "--scale", scale])
        assert read(back) == TREEBANK


def test_empty_input(tmp_path):
    src = tmp_path / "empty.txt"
    src.write_text("", encoding="utf-8")
    out = tmp_path / "out.tsv"
    assert main(["encode", "-i", str(src), "-o", str(out), "--scale", "rel"]) == 0
    assert read(out) == ""


def test_encode_kary_rejects_flat_tree(tmp_path, capsys):
    src = tmp_path / "flat.txt"
    src.write_text(
        "(S (A a) (B b))\n(S (A a) (B b) (C c))\n", encoding="utf-8"
    )
    out = tmp_path / "out.tsv"
    rc = main(["encode", "-i", str(src), "-o", str(out), "--scale", "kary"])
    assert rc == 1
    err = capsys.readouterr().err
    assert "line 2" in err and err.startswith("treeseq: error:")


def test_parse_error_carries_line_number(tmp_path, capsys):
    src = tmp_path / "bad.txt"
    src.write_text("(S (A a) (B b))\n(S (A a)\n", encoding="utf-8")
    rc = main(["encode", "-i", str(src), "-o", str(tmp_path / "o.tsv"), "--scale", "rel"])
    assert rc == 1
    assert "line 2" in capsys.readouterr().err


def test_missing_input_fails_cleanly(tmp_path, capsys):
    rc = main(
        ["encode", "-i", str(tmp_path / "nope.txt"), "-o", str(tmp_path / "o.tsv"),
         "--scale", "rel"]
    )
    assert rc == 1
    assert capsys.readouterr().err.startswith("treeseq: error:")


def test_usage_error_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["encode", "--scale", "rel"])  # missing -i/-o
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["encode", "-i", "x", "-o", "y", "--scale", "diagonal"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_roundtrip_command(tb, capsys):
    assert main(["roundtrip", "-i", str(tb), "--scale", "rel"]) == 0
    out = capsys.readouterr().out
    assert "3 trees round-tripped" in out
    assert main(["roundtrip", "-i", str(tb), "--scale", "rel-root",
                 "--unaries", "extended"]) == 0
    capsys.readouterr()


def test_roundtrip_reports_kary_failure(tmp_path, capsys):
    src = tmp_path / "flat.txt"
    src.write_text("(S (A a) (B b) (C c))\n", encoding="utf-8")
    assert main(["roundtrip", "-i", str(src), "--scale", "kary"]) == 1
    assert "line 1" in capsys.readouterr().err


def test_eval_identity_and_machine_line(tb, tmp_path, capsys):
    assert main(["eval", "--gold", str(tb), "--pred", str(tb)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[-1] == "P=1.0000 R=1.0000 F1=1.0000 ACC=1.0000 EXACT=1.0000"
    assert main(["eval", "--gold", str(tb), "--pred", str(tb), "--machine"]) == 0
    assert capsys.readouterr().out == "P=1.0000 R=1.0000 F1=1.0000 ACC=1.0000 EXACT=1.0000\n"


def test_eval_delete_labels(tmp_path, capsys):
    gold = tmp_path / "gold.txt"
    pred = tmp_path / "pred.txt"
    gold.write_text(
        "(S (NP (DT the) (NN dog)) (VP (VBD ran)) (. .))\n", encoding="utf-8"
    )
    pred.write_text(
        "(S (NP (DT the) (NN dog)) (VP (VBD ran) (. .)))\n", encoding="utf-8"
    )
    # "." is deleted by default, so the attachment difference is forgiven
    assert main(["eval", "--gold", str(gold), "--pred", str(pred), "--machine"]) == 0
    assert capsys.readouterr().out.startswith("P=1.0000 R=1.0000 F1=1.0000")
    # an empty deleted set exposes it
    assert main(["eval", "--gold", str(gold), "--pred", str(pred),
                 "--delete-labels", "--machine"]) == 0
    assert capsys.readouterr().out.startswith("P=0.6667 R=0.6667 F1=0.6667")


def test_eval_label_files_override_accuracy(tb, tmp_path, capsys):
    lab = tmp_path / "lab.tsv"
    wrong = tmp_path / "wrong.tsv"
    main(["encode", "-i", str(tb), "-o", str(lab), "--scale", "rel"])
    wrong.write_text(read(lab).replace("+2|NP", "+1|NP", 1), encoding="utf-8")
    rc = main(
        ["eval", "--gold", str(tb), "--pred", str(tb),
         "--gold-labels", str(lab), "--pred-labels", str(wrong), "--machine"]
    )
    assert rc == 0
    out = capsys.readouterr().out
    # 7 content+dummy positions total, one flipped
    assert "ACC=0.8571" in out and "F1=1.0000" in out


# ---------------------------------------------------------------------------
# train / predict / parse


def write_corpus(path, n, seed):
    from treeseq import serialize_bracketed, write_treebank

    gram = ToyGrammar(seed=seed)
    write_treebank(path, [gram.sentence() for _ in range(n)])


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """One small two-pass + extended training run shared by the tests."""
    root = tmp_path_factory.mktemp("pipeline")
    tb = root / "train.txt"
    write_corpus(tb, 60, seed=17)
    lab = root / "train.tsv"
    ext = root / "ext.tsv"
    main(["encode", "-i", str(tb), "-o", str(lab), "--scale", "rel",
          "--unaries", "two-pass"])
    main(["encode", "-i", str(tb), "-o", str(ext), "--scale", "rel",
          "--unaries", "extended"])
    psi = root / "psi.model"
    phi = root / "phi.model"
    phip = root / "phip.model"
    args = ["--epochs", "5", "--seed", "42"]
    assert main(["train", "-i", str(lab) + ".psi", "-o", str(psi),
                 "--pass", "psi", *args]) == 0
    assert main(["train", "-i", str(lab), "-o", str(phi),
                 "--pass", "phi", *args]) == 0
    assert main(["train", "-i", str(ext), "-o", str(phip),
                 "--pass", "phi-prime", *args]) == 0
    return root, tb, lab, psi, phi, phip


def test_train_writes_model_files(pipeline):
    root, _, _, psi, phi, phip = pipeline
    for path in (psi, phi, phip):
        head = read(path).splitlines()[0]
        assert head == "treeseq-model v1"


def test_train_rerun_is_byte_identical(pipeline, tmp_path):
    root, _, lab, psi, _, _ = pipeline
    again = tmp_path / "psi2.model"
    assert main(["train", "-i", str(lab) + ".psi", "-o", str(again),
                 "--pass", "psi", "--epochs", "5", "--seed", "42"]) == 0
    assert again.read_bytes() == psi.read_bytes()


def test_predict_tags_word_pos_file(pipeline, tmp_path):
    root, _, _, psi, _, _ = pipeline
    src = tmp_path / "in.tsv"
    src.write_text("the\tDT\ndog\tNN\nran\tVBD\n", encoding="utf-8")
    out = tmp_path / "out.tsv"
    assert main(["predict", "-m", str(psi), "-i", str(src), "-o", str(out)]) == 0
    rows = [line.split("\t") for line in read(out).strip().splitlines()]
    assert [r[:2] for r in rows] == [["the", "DT"], ["dog", "NN"], ["ran", "VBD"]]
    assert all(len(r) == 3 for r in rows)


def test_parse_two_pass_reconstructs_training_data(pipeline, tmp_path):
    root, tb, _, psi, phi, _ = pipeline
    words = tmp_path / "words.tsv"
    _dump_words(tb, words)
    out = tmp_path / "parsed.txt"
    rc = main(["parse", "-m", str(phi), "--psi-model", str(psi),
               "-i", str(words), "-o", str(out)])
    assert rc == 0
    assert _f1_against(tb, out) > 0.95


def test_parse_extended_reconstructs_training_data(pipeline, tmp_path):
    root, tb, _, _, _, phip = pipeline
    words = tmp_path / "words.tsv"
    _dump_words(tb, words)
    out = tmp_path / "parsed.txt"
    assert main(["parse", "-m", str(phip), "-i", str(words), "-o", str(out)]) == 0
    assert _f1_against(tb, out) > 0.95


def test_parse_two_pass_requires_psi_model(pipeline, tmp_path, capsys):
    root, tb, _, _, phi, _ = pipeline
    words = tmp_path / "words.tsv"
    _dump_words(tb, words)
    rc = main(["parse", "-m", str(phi), "-i", str(words),
               "-o", str(tmp_path / "o.txt")])
    assert rc == 1
    assert "psi" in capsys.readouterr().err


def test_parse_missing_model(tmp_path, capsys):
    src = tmp_path / "in.tsv"
    src.write_text("a\tA\n", encoding="utf-8")
    rc = main(["parse", "-m", str(tmp_path / "ghost.model"),
               "-i", str(src), "-o", str(tmp_path / "o.txt")])
    assert rc == 1
    assert capsys.readouterr().err.startswith("treeseq: error:")


def _dump_words(treebank_path, out_path):
    from treeseq import leaf_tokens, read_treebank
    from treeseq.encoding import write_tagged

    write_tagged(out_path, [leaf_tokens(t) for t in read_treebank(treebank_path)])


def _f1_against(gold_path, pred_path):
    from treeseq import bracketing_score, read_treebank

    return bracketing_score(read_treebank(gold_path), read_treebank(pred_path)).f1
