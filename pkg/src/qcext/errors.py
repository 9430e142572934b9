"""Errors shared across the verification modules."""


class PreconditionError(Exception):
    """A documented precondition of a construction or check was violated
    (wrong normalization, pole in an unexcluded region, bad parameter)."""
