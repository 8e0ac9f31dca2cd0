"""Constituent parsing as sequence labeling: lossless tree/label-sequence
conversion, a perceptron tagger over the labels, and bracketing metrics."""

from .errors import (
    EmptyCorpus,
    EmptyTree,
    IndexOutOfRange,
    InvalidSymbol,
    LeafWithoutWord,
    LengthMismatch,
    MalformedLabel,
    MixedSchemes,
    NonPositivePrefixSum,
    NotStrictlyKary,
    TokenMismatch,
    TreeSeqError,
    UnaryBranchPresent,
    UnbalancedBrackets,
    UnreadableFile,
    VersionMismatch,
)
from .trees import (
    Internal,
    Leaf,
    Token,
    Tree,
    binarize,
    collapse_unaries,
    debinarize,
    leaf_tokens,
    parse_bracketed,
    read_treebank,
    serialize_bracketed,
    uncollapse_unaries,
    validate_no_unaries,
    write_treebank,
)
from .encoding import (
    EOS,
    NEG,
    PSI_NONE,
    ROOT,
    Label,
    LabeledSentence,
    Scheme,
    abs_to_rel,
    apply_root_links,
    common_ancestors,
    encode,
    encode_absolute,
    encode_extended,
    encode_kary,
    encode_leaf_unaries_psi,
    encode_relative,
    encode_relative_root,
    enrich_tokens,
    rel_to_abs,
    strip_token_unaries,
)
from .decoding import decode, decode_extended, merge_psi, repair_absolute_counts
from .tagger import Model, infer_scheme, load_model, train_phi, train_phi_prime
from .evaluation import (
    DEFAULT_DELETED,
    EvalReport,
    bracketing_score,
    label_accuracy,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_DELETED",
    "EOS",
    "EmptyCorpus",
    "EmptyTree",
    "EvalReport",
    "IndexOutOfRange",
    "Internal",
    "InvalidSymbol",
    "Label",
    "LabeledSentence",
    "Leaf",
    "LeafWithoutWord",
    "LengthMismatch",
    "MalformedLabel",
    "MixedSchemes",
    "Model",
    "NEG",
    "NonPositivePrefixSum",
    "NotStrictlyKary",
    "PSI_NONE",
    "ROOT",
    "Scheme",
    "Token",
    "TokenMismatch",
    "Tree",
    "TreeSeqError",
    "UnaryBranchPresent",
    "UnbalancedBrackets",
    "UnreadableFile",
    "VersionMismatch",
    "abs_to_rel",
    "apply_root_links",
    "binarize",
    "bracketing_score",
    "collapse_unaries",
    "common_ancestors",
    "debinarize",
    "decode",
    "decode_extended",
    "encode",
    "encode_absolute",
    "encode_extended",
    "encode_kary",
    "encode_leaf_unaries_psi",
    "encode_relative",
    "encode_relative_root",
    "enrich_tokens",
    "infer_scheme",
    "label_accuracy",
    "leaf_tokens",
    "load_model",
    "merge_psi",
    "parse_bracketed",
    "read_treebank",
    "rel_to_abs",
    "repair_absolute_counts",
    "serialize_bracketed",
    "strip_token_unaries",
    "train_phi",
    "train_phi_prime",
    "uncollapse_unaries",
    "validate_no_unaries",
    "write_treebank",
]
