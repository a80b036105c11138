"""Exception hierarchy shared by all gcmlab modules."""


class GcmlabError(Exception):
    """Base class for all errors raised by gcmlab."""


class InputError(GcmlabError, ValueError):
    """Malformed numerical input (non-finite values, bad shapes, bad weights)."""


class DomainError(GcmlabError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class DegenerateInputError(GcmlabError, ValueError):
    """Input is well formed but degenerate (e.g. zero mass, no spread)."""


class ValidationError(GcmlabError, ValueError):
    """A configuration violates a schema or a theorem hypothesis.

    Parameters
    ----------
    message : str
        Human readable description.
    path : str, optional
        JSON pointer of the offending field, if any.
    hypothesis : str, optional
        The violated hypothesis, e.g. ``"m'(t0) > 0"``.
    """

    def __init__(self, message, path=None, hypothesis=None):
        self.message = message
        self.path = path
        self.hypothesis = hypothesis
        parts = [message]
        if path:
            parts.append(f"at {path}")
        if hypothesis:
            parts.append(f"(hypothesis violated: {hypothesis})")
        super().__init__(" ".join(parts))


class NumericalError(GcmlabError, ArithmeticError):
    """A numerical procedure failed (e.g. negative circulant eigenvalues)."""
