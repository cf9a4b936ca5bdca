"""Exception types shared across the package."""


class GraphError(ValueError):
    """A task graph failed validation."""


class GraphSyntaxError(GraphError):
    """A graph file line could not be parsed."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class CycleError(GraphError):
    """The precedence relation contains a cycle."""

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("precedence cycle: " + " -> ".join(self.cycle))


class ConfigError(ValueError):
    """A run parameter is out of its allowed range."""


class OracleCapError(ValueError):
    """Instance is too large for the exhaustive-search oracle."""
