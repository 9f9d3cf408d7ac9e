"""Exception types shared across the package."""


class GraphError(Exception):
    """Invalid graph input, or an operation applied to an unsupported graph."""


class ParseError(GraphError):
    """Malformed edge-list text; carries the offending line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmbeddingError(GraphError):
    """The requested outer order admits no outerplane embedding."""


class NotTwoConnectedError(GraphError):
    """Operation requires a 2-connected graph; decompose with blocks() first."""


class CertificationError(Exception):
    """A property the theory guarantees failed to hold; indicates a bug."""
