"""Exception hierarchy.

Every error carries a short machine-readable ``code`` which the command
line reports as ``error[<code>]``.
"""


class HoaSynthError(Exception):
    code = "error"

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(self._render())

    def _render(self):
        if self.line is None:
            return self.message
        if self.column is None:
            return f"line {self.line}: {self.message}"
        return f"line {self.line}, column {self.column}: {self.message}"


# --- HOA text


class LexError(HoaSynthError):
    code = "lex-error"


class HoaSyntaxError(HoaSynthError):
    code = "syntax-error"


class OutOfRangeSet(HoaSynthError):
    code = "out-of-range-set"


class UnsupportedNegatedSet(HoaSynthError):
    code = "negated-set"


class UnsupportedFeature(HoaSynthError):
    """Valid HOA that lies outside the supported subset."""

    code = "unsupported-feature"


# --- automaton validation


class BadHeader(HoaSynthError):
    code = "bad-header"


class BadReference(HoaSynthError):
    """A state, AP, alias or color index that does not exist."""

    code = "bad-reference"


class UnsupportedAcceptance(HoaSynthError):
    code = "unsupported-acceptance"


class NotDeterministic(HoaSynthError):
    code = "not-deterministic"

    def __init__(self, state, witness, line=None):
        self.state = state
        self.witness = witness
        super().__init__(
            f"state {state}: several edges enabled by valuation {witness}", line
        )


class NotComplete(HoaSynthError):
    code = "not-complete"

    def __init__(self, state, witness, line=None):
        self.state = state
        self.witness = witness
        super().__init__(
            f"state {state}: no edge enabled by valuation {witness}", line
        )


class NotColored(HoaSynthError):
    code = "not-colored"

    def __init__(self, state, edge, count, line=None):
        self.state = state
        self.edge = edge
        super().__init__(
            f"state {state}, edge {edge}: expected exactly one color, found {count}",
            line,
        )


class EmptyInf(HoaSynthError):
    code = "empty-inf"


class WidthMismatch(HoaSynthError):
    code = "width-mismatch"


class TooManyValuations(HoaSynthError):
    code = "too-many-valuations"


# --- games, circuits


class RecursionDepthExceeded(HoaSynthError):
    code = "recursion-depth"


class Unrealizable(HoaSynthError):
    code = "unrealizable"


class AigerSyntaxError(HoaSynthError):
    code = "aiger-syntax-error"


class InterfaceMismatch(HoaSynthError):
    code = "interface-mismatch"


class ProductTooLarge(HoaSynthError):
    code = "product-too-large"


class PGSolverSyntaxError(HoaSynthError):
    code = "pgsolver-syntax-error"
