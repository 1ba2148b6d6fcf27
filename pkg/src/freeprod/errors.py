class InputError(ValueError):
    """Malformed automaton, word, map or document."""


class ResourceError(RuntimeError):
    """An exploration grew past the configured state cap."""

    def __init__(self, cap: int, what: str = "product states"):
        self.cap = cap
        super().__init__(f"explored {what} exceeded cap of {cap}")


class CollapseError(RuntimeError):
    """Two words that differ in the free product act identically."""
