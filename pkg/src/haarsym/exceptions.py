"""Exception types shared across the library."""


class HaarsymError(Exception):
    """Base class for all errors raised by this library."""


class DimensionMismatchError(HaarsymError, ValueError):
    """Operands live in different Hilbert-space dimensions."""


class SizeGuardError(HaarsymError, ValueError):
    """A requested computation exceeds the dense-feasibility guards.

    Raised instead of silently truncating; the CLI maps this to exit code 3.
    """


class GroupVerificationError(HaarsymError, ValueError):
    """A candidate element list fails one of the finite-group axioms."""


class MissingIdentityError(GroupVerificationError):
    def __init__(self, dim: int):
        super().__init__(f"no element equals the {dim}x{dim} identity matrix")
        self.dim = dim


class NotClosedError(GroupVerificationError):
    def __init__(self, i: int, j: int):
        super().__init__(
            f"product of elements {i} and {j} is not in the candidate set"
        )
        self.i = i
        self.j = j


class MissingInverseError(GroupVerificationError):
    def __init__(self, i: int):
        super().__init__(f"inverse of element {i} is not in the candidate set")
        self.i = i


class DuplicateElementsError(GroupVerificationError):
    def __init__(self, i: int, j: int):
        super().__init__(f"elements {i} and {j} coincide within tolerance")
        self.i = i
        self.j = j


class UnknownCircuitError(HaarsymError, ValueError):
    def __init__(self, name: str, known: tuple[str, ...]):
        super().__init__(f"unknown builtin circuit {name!r}; known: {', '.join(known)}")
        self.name = name
