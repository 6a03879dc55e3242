class CertificateError(Exception):
    """Certificate error.

    Exception raised when a proof certificate file is missing, is not valid
    JSON, or does not describe a derivation tree.
    """


class UnknownRule(CertificateError):
    """Unknown rule.

    Exception raised when a certificate names a rule outside the calculus.
    """
