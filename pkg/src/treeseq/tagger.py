"""Averaged-perceptron sequence tagger over hand-built window features.

The tagger treats labels as opaque strings, so the same machinery serves
all three tasks:

  psi        predict each word's leaf unary chain ("NONE" when absent)
  phi        predict 2-part structure labels from unary-enriched PoS
  phi-prime  predict 3-part labels carrying the chain inline

Training for the phi task is two-pass: an internal psi model is fit on
the same data, its own predictions re-enrich the raw PoS, and the phi
model trains on that enrichment rather than the gold one, so it sees the
same noise at training time as at parse time.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyCorpus,
    LengthMismatch,
    MixedSchemes,
    UnreadableFile,
    VersionMismatch,
)
from .encoding import (
    EOS,
    NEG,
    PSI_NONE,
    ROOT,
    LabeledSentence,
    Scheme,
    enrich_tokens,
    extended_label_string,
    leaf_unary_sequence,
    strip_token_unaries,
)
from .trees import Token

MAGIC = "treeseq-model v1"
TASKS = ("psi", "phi", "phi-prime")

# one (sentence, per-word target strings) training pair
Instance = tuple[list[Token], list[str]]

_BOS = Token("-BOS-", "-BOS-")
_EOS = Token("-EOS-", "-EOS-")


def _position_features(padded: list[Token], j: int) -> list[str]:
    feats = []
    last_real = len(padded) - 2
    for off in (-1, 0, 1):
        p = j + off
        tok = padded[p]
        word = tok.word
        feats.append(f"w{off}={word.lower()}")
        feats.append(f"p{off}={tok.pos}")
        feats.append(f"p{off}pre2={tok.pos[:2]}")
        if p == 1:
            feats.append(f"first{off}=true")
        if p == last_real:
            feats.append(f"last{off}=true")
        if word and all(ch.isdigit() or ch in ",." for ch in word):
            feats.append(f"num{off}=true")
        if word[:1].isupper():
            feats.append(f"cap{off}=true")
        if word.isupper():
            feats.append(f"upper{off}=true")
    center = padded[j].word.lower()
    feats.append(f"suf3={center[-3:]}")
    feats.append(f"suf2={center[-2:]}")
    return feats


def sentence_features(tokens: list[Token]) -> list[list[str]]:
    """Feature strings for every position, with sentence-boundary padding."""
    padded = [_BOS, *tokens, _EOS]
    return [_position_features(padded, j) for j in range(1, len(padded) - 1)]


def infer_scheme(sentences: list[LabeledSentence], k: int = 2) -> Scheme:
    """Guess the count scale from the label strings themselves."""
    has_bare = has_signed = has_root = has_neg = False
    for sent in sentences:
        for lab in sent.labels:
            n = lab.n
            if n == EOS:
                continue
            if n == ROOT:
                has_root = True
            elif n == NEG:
                has_neg = True
            elif n.startswith(("+", "-")):
                has_signed = True
            else:
                has_bare = True
    if has_bare and (has_signed or has_root or has_neg):
        raise MixedSchemes("absolute and relative counts in one corpus")
    if has_bare:
        return Scheme("abs", k)
    if has_neg:
        return Scheme("kary", k)
    if has_root:
        return Scheme("rel-root", k)
    return Scheme("rel", k)


@dataclass
class Model:
    task: str
    scheme: Scheme
    labels: list[str]
    weights: dict = field(default_factory=dict)
    epochs: int = 20
    seed: int = 42

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}")
        self._eos_ids = [
            i for i, s in enumerate(self.labels) if s.split("|", 1)[0] == EOS
        ]

    def _scores(self, feats: list[str]) -> np.ndarray:
        scores = np.zeros(len(self.labels))
        for f in feats:
            row = self.weights.get(f)
            if row is not None:
                scores += row
        return scores

    def predict(self, tokens: list[Token]) -> list[str]:
        """Per-word label strings.  For the structure tasks the final
        position is forced to the best-scoring end-of-sentence label, since
        every well-formed sequence ends with the dummy."""
        out = []
        feats_sent = sentence_features(tokens)
        for j, feats in enumerate(feats_sent):
            scores = self._scores(feats)
            if (
                self.task != "psi"
                and j == len(feats_sent) - 1
                and self._eos_ids
            ):
                # ties break toward the inventory order, like argmax does
                best = self._eos_ids[0]
                for i in self._eos_ids[1:]:
                    if scores[i] > scores[best]:
                        best = i
                out.append(self.labels[best])
            else:
                out.append(self.labels[int(np.argmax(scores))])
        return out

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(MAGIC + "\n")
            handle.write(f"task={self.task}\n")
            handle.write(f"scale={self.scheme.scale}\n")
            handle.write(f"k={self.scheme.k}\n")
            handle.write(f"extended={'true' if self.scheme.extended else 'false'}\n")
            handle.write(f"epochs={self.epochs}\n")
            handle.write(f"seed={self.seed}\n")
            for lab in self.labels:
                handle.write(f"label={lab}\n")
            handle.write("\n")
            for feat in sorted(self.weights):
                row = self.weights[feat]
                for i in np.nonzero(row)[0]:
                    handle.write(f"{feat}\t{self.labels[int(i)]}\t{float(row[i])!r}\n")


def load_model(path) -> Model:
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.read().split("\n")
    except OSError as exc:
        raise UnreadableFile(str(exc)) from exc
    if not lines or lines[0] != MAGIC:
        raise VersionMismatch(f"expected {MAGIC!r} header in {path}")
    meta = {}
    labels: list[str] = []
    i = 1
    while i < len(lines) and lines[i].strip():
        if "=" not in lines[i]:
            raise UnreadableFile(f"bad header line {i + 1}: {lines[i]!r}")
        key, value = lines[i].split("=", 1)
        if key == "label":
            labels.append(value)
        else:
            meta[key] = value
        i += 1
    try:
        scheme = Scheme(
            meta["scale"], int(meta["k"]), meta.get("extended") == "true"
        )
        model = Model(
            meta["task"],
            scheme,
            labels,
            epochs=int(meta["epochs"]),
            seed=int(meta["seed"]),
        )
    except (KeyError, ValueError) as exc:
        raise UnreadableFile(f"bad model header: {exc}") from exc
    index = {lab: j for j, lab in enumerate(labels)}
    for lineno in range(i + 1, len(lines)):
        line = lines[lineno]
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 3 or cols[1] not in index:
            raise UnreadableFile(f"bad weight row at line {lineno + 1}: {line!r}")
        row = model.weights.get(cols[0])
        if row is None:
            row = np.zeros(len(labels))
            model.weights[cols[0]] = row
        try:
            row[index[cols[1]]] = float(cols[2])
        except ValueError as exc:
            raise UnreadableFile(f"bad weight at line {lineno + 1}") from exc
    return model


def fit_averaged(
    feats_cache: list[list[list[str]]],
    gold_cache: list[list[int]],
    n_labels: int,
    epochs: int,
    seed: int,
) -> dict:
    """The perceptron loop over pre-extracted features.  Returns weights
    averaged over every per-position step: with w_t the weight vector
    right after step t, the result is (1/T) sum of w_1..w_T, computed
    lazily with per-feature timestamps."""
    weights: dict[str, np.ndarray] = {}
    totals: dict[str, np.ndarray] = {}
    stamps: dict[str, int] = {}
    rng = random.Random(seed)
    order = list(range(len(feats_cache)))
    step = 0
    for _ in range(epochs):
        rng.shuffle(order)
        for si in order:
            for feats, gold in zip(feats_cache[si], gold_cache[si]):
                step += 1
                scores = np.zeros(n_labels)
                for f in feats:
                    row = weights.get(f)
                    if row is not None:
                        scores += row
                pred = int(np.argmax(scores))
                if pred == gold:
                    continue
                for f in feats:
                    row = weights.get(f)
                    if row is None:
                        row = np.zeros(n_labels)
                        weights[f] = row
                        totals[f] = np.zeros(n_labels)
                        stamps[f] = 0
                    # flush the stretch this row sat unchanged, then update
                    elapsed = step - 1 - stamps[f]
                    if elapsed:
                        totals[f] += row * elapsed
                    stamps[f] = step - 1
                    row[gold] += 1.0
                    row[pred] -= 1.0

    steps = max(step, 1)
    averaged = {}
    for f, row in weights.items():
        totals[f] += row * (steps - stamps[f])
        averaged[f] = totals[f] / steps
    return averaged


def train_instances(
    instances: list[Instance],
    task: str,
    scheme: Scheme,
    epochs: int = 20,
    seed: int = 42,
) -> Model:
    """Fit one averaged perceptron.  The label inventory keeps first-seen
    order over the original corpus order; sentence order is reshuffled per
    epoch from the given seed."""
    if not instances:
        raise EmptyCorpus("no training sentences")
    index: dict[str, int] = {}
    inventory: list[str] = []
    for tokens, targets in instances:
        if len(tokens) != len(targets):
            raise LengthMismatch(
                f"{len(tokens)} tokens but {len(targets)} targets"
            )
        for target in targets:
            if target not in index:
                index[target] = len(inventory)
                inventory.append(target)

    feats_cache = [sentence_features(tokens) for tokens, _ in instances]
    gold_cache = [[index[t] for t in targets] for _, targets in instances]
    averaged = fit_averaged(feats_cache, gold_cache, len(inventory), epochs, seed)
    return Model(task, scheme, inventory, averaged, epochs, seed)


def psi_view(sentences: list[LabeledSentence]) -> list[Instance]:
    """Derive the unary-chain task from enriched-PoS sentences: tokens
    stripped to raw tags, the folded chain (or NONE) as the target."""
    out = []
    for sent in sentences:
        chains = leaf_unary_sequence(sent.tokens)
        tokens = strip_token_unaries(sent.tokens)
        out.append((tokens, [c if c is not None else PSI_NONE for c in chains]))
    return out


def train_psi(instances: list[Instance], epochs: int = 20, seed: int = 42,
              scheme: Scheme | None = None) -> Model:
    return train_instances(instances, "psi", scheme or Scheme(), epochs, seed)


def train_phi(
    sentences: list[LabeledSentence],
    epochs: int = 20,
    seed: int = 42,
    scheme: Scheme | None = None,
) -> Model:
    """Two-pass training on enriched-PoS sentences: jackknife an internal
    psi model over the same data and train phi on its predicted chains."""
    if not sentences:
        raise EmptyCorpus("no training sentences")
    inferred = infer_scheme(sentences)  # also rejects mixed-scale corpora
    if scheme is None:
        scheme = inferred
    psi_instances = psi_view(sentences)
    inner = train_instances(psi_instances, "psi", scheme, epochs, seed)
    phi_instances: list[Instance] = []
    for (raw_tokens, _), sent in zip(psi_instances, sentences):
        predicted = inner.predict(raw_tokens)
        chains = [None if c == PSI_NONE else c for c in predicted]
        merged = enrich_tokens(raw_tokens, chains)
        phi_instances.append((merged, [lab.to_string() for lab in sent.labels]))
    return train_instances(phi_instances, "phi", scheme, epochs, seed)


def train_phi_prime(
    sentences: list[LabeledSentence],
    epochs: int = 20,
    seed: int = 42,
    scheme: Scheme | None = None,
) -> Model:
    """Single-pass training on raw-PoS sentences with 3-part targets."""
    if not sentences:
        raise EmptyCorpus("no training sentences")
    base = infer_scheme(sentences)  # also rejects mixed-scale corpora
    if scheme is None:
        scheme = Scheme(base.scale, base.k, extended=True)
    instances = [
        (sent.tokens, [extended_label_string(lab) for lab in sent.labels])
        for sent in sentences
    ]
    return train_instances(instances, "phi-prime", scheme, epochs, seed)
