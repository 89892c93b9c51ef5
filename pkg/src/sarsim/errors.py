"""Exception types shared across the engine."""


class ParameterError(ValueError):
    """An argument violates an operation's precondition."""


class GenerationError(RuntimeError):
    """A batch could not be produced within the retry budget."""

    def __init__(self, message, recipe=None):
        super().__init__(message)
        self.recipe = recipe


class DivergenceError(GenerationError):
    """The recursion or an integrator pass produced non-finite or exploding values."""


class FormatError(ValueError):
    """A serialized file does not match its declared layout."""
