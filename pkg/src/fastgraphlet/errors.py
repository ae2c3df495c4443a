"""Exception classes. Each maps to one CLI exit code."""


class FastGraphletError(Exception):
    exit_code = 1


class GraphParseError(FastGraphletError, ValueError):
    """Malformed edge-list or Matrix Market input."""

    exit_code = 1

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StructuralError(FastGraphletError, ValueError):
    """Input violates the sanitization policy (asymmetry, self-loops)."""

    exit_code = 2


class FrequencyOverflowError(FastGraphletError, OverflowError):
    exit_code = 3

    def __init__(self, graphlet, vertex, estimate=None):
        self.graphlet = graphlet
        self.vertex = vertex
        self.estimate = estimate
        msg = f"count for graphlet {graphlet} at vertex {vertex} exceeds 64-bit range"
        if estimate is not None:
            msg += f" (estimate {estimate:.3e})"
        super().__init__(msg)


class ConversionInconsistencyError(FastGraphletError, ArithmeticError):
    """Back substitution produced a negative net count."""

    exit_code = 4

    def __init__(self, vertex, graphlet, value):
        self.vertex = vertex
        self.graphlet = graphlet
        self.value = value
        super().__init__(
            f"negative net frequency {value} for graphlet {graphlet} at vertex {vertex}; "
            "the dictionary omits supergraphs of this graphlet or the raw field is inconsistent"
        )


class OracleCapError(FastGraphletError, ValueError):
    exit_code = 1
