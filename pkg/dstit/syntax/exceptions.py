class FormulaSyntaxError(Exception):
    """Formula syntax error.

    Exception raised when a formula text does not conform to the grammar.

    Attributes:
        position (int): Zero-based character offset where parsing failed.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class AgentOutOfRange(Exception):
    """Agent out of range.

    Exception raised when a formula mentions an agent index that is not smaller
    than the configured agent count.

    Attributes:
        index (int): The offending agent index.
        agent_count (int): The configured agent count.
    """

    def __init__(self, index: int, agent_count: int):
        super().__init__(
            f"agent index {index} is out of range for {agent_count} agent(s)"
        )
        self.index = index
        self.agent_count = agent_count
