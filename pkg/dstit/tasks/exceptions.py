class KnowledgeBaseError(Exception):
    """Knowledge base error.

    Exception raised when a knowledge base file cannot be read or parsed.

    Attributes:
        line (int | None): The 1-based line the problem was found on.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
