"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class ConstructionError(RuntimeError):
    """A greedy construction could not meet its goal (search ceiling hit,
    no qualifying primes below the configured bound, and so on)."""


class SetFileError(ValueError):
    """A set file is structurally malformed or internally inconsistent."""


class CoverageError(ValueError):
    """A residue-class coverage invariant failed for a specific class."""

    def __init__(self, prime: int, class_index: int, count: int, mode: str):
        self.prime = prime
        self.class_index = class_index
        self.count = count
        self.mode = mode
        super().__init__(
            f"coverage mode {mode!r} violated at prime {prime}, "
            f"class {class_index}: count {count}"
        )
