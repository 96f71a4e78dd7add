"""Exception types shared across the engine."""


class InhomogeneousEntry(ValueError):
    def __init__(self, row, col, expected, found):
        self.row, self.col, self.expected, self.found = row, col, expected, found
        super().__init__(
            f"entry ({row},{col}) must be bihomogeneous of bidegree {expected}, "
            f"found terms of bidegree(s) {found}"
        )


class UnknownSymbol(ValueError):
    pass


class BoundTooSmall(RuntimeError):
    """A nonzero Tor class was found at the boundary degree; not certified."""


class TruncationInsufficient(RuntimeError):
    """A rank certificate failed at the parameter-degree boundary."""

    def __init__(self, bidegree, msg=""):
        self.bidegree = bidegree
        super().__init__(f"truncation insufficient at bidegree {bidegree} {msg}".rstrip())


class WindowNotComputed(RuntimeError):
    pass


class VerificationFailed(RuntimeError):
    def __init__(self, degree, position, expected, found):
        self.degree, self.position = degree, position
        self.expected, self.found = expected, found
        super().__init__(
            f"monad homology at degree {degree}, position {position}: "
            f"expected {expected}, found {found}"
        )


class RegularityUncertified(RuntimeError):
    pass


class NotAComplex(ValueError):
    pass


class CorrectionUnsolvable(RuntimeError):
    pass


class RoundtripMismatch(AssertionError):
    def __init__(self, index, expected, found):
        self.index, self.expected, self.found = index, expected, found
        super().__init__(f"roundtrip mismatch at index {index}: expected {expected}, found {found}")


class WindowTooNarrow(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, line, col, message):
        self.line, self.col = line, col
        super().__init__(f"line {line}, col {col}: {message}")
