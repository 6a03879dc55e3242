class ItemSyntaxError(Exception):
    """Item syntax error.

    Exception raised when a rendered label, relational atom or labeled formula
    cannot be read back.
    """
