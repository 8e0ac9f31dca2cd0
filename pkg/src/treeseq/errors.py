"""Exception types raised by the library.

Everything derives from TreeSeqError so the CLI can map domain failures
to a single exit code.
"""


class TreeSeqError(Exception):
    pass


class UnbalancedBrackets(TreeSeqError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class EmptyTree(TreeSeqError):
    def __init__(self, message="no tree found", offset=0):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class LeafWithoutWord(TreeSeqError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class InvalidSymbol(TreeSeqError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class UnaryBranchPresent(TreeSeqError):
    pass


class NotStrictlyKary(TreeSeqError):
    pass


class IndexOutOfRange(TreeSeqError):
    pass


class MalformedLabel(TreeSeqError):
    pass


class NonPositivePrefixSum(TreeSeqError):
    pass


class LengthMismatch(TreeSeqError):
    pass


class TokenMismatch(TreeSeqError):
    pass


class EmptyCorpus(TreeSeqError):
    pass


class MixedSchemes(TreeSeqError):
    pass


class UnreadableFile(TreeSeqError):
    pass


class VersionMismatch(TreeSeqError):
    pass
