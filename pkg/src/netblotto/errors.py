"""Exception hierarchy shared by every netblotto module."""


class BlottoError(ValueError):
    """Base class for all netblotto errors."""


class InvalidDimensions(BlottoError):
    pass


class InvalidAction(BlottoError):
    pass


class InvalidProfile(BlottoError):
    pass


class OutOfRange(BlottoError):
    pass


class ParameterError(BlottoError):
    pass


class DomainError(BlottoError):
    pass


class TooLarge(BlottoError):
    pass


class SingularSystem(BlottoError):
    """The ring indifference system has no unique solution.

    ``n_mod_4`` is kept as a diagnostic: with equal weights the system is
    singular exactly when it is 0.
    """

    def __init__(self, n: int, message: str | None = None):
        self.n = n
        self.n_mod_4 = n % 4
        if message is None:
            message = f"indifference system is singular for n={n} (n mod 4 = {self.n_mod_4})"
            if self.n_mod_4 == 0:
                message += "; 4 | n"
        super().__init__(message)
