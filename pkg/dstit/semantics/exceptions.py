class MalformedModel(Exception):
    """Malformed model.

    Exception raised when a relation, ideal set or valuation of a model
    mentions an unknown world or agent, or the world set is empty.
    """


class UnknownWorld(Exception):
    """Unknown world.

    Exception raised when a formula is evaluated at a world outside the model.
    """


class IncompleteInterpretation(Exception):
    """Incomplete interpretation.

    Exception raised when an interpretation does not map every label of the
    sequent under evaluation.
    """


class ModelFileError(Exception):
    """Model file error.

    Exception raised when a model file is missing, is not valid TOML, or lacks
    a required field.
    """
