"""Exception hierarchy shared by every module."""


class MatchboundError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class ParseError(MatchboundError, ValueError):
    """Malformed instance text. Carries the offending line number when known."""

    def __init__(self, reason: str, line: int | None = None):
        self.reason = reason
        self.line = line
        super().__init__(reason if line is None else f"line {line}: {reason}")


class InvalidInstance(MatchboundError, ValueError):
    pass


class Infeasible(MatchboundError):
    pass


class InstanceTooLarge(MatchboundError):
    pass


class BudgetExhausted(MatchboundError):
    """Search exceeded its node budget; partial statistics are attached."""

    def __init__(self, nodes_visited: int, partial_count: int, max_nodes: int):
        self.nodes_visited = nodes_visited
        self.partial_count = partial_count
        self.max_nodes = max_nodes
        super().__init__(
            f"budget exhausted: {nodes_visited} nodes visited (limit {max_nodes}), "
            f"{partial_count} matchings counted so far"
        )
