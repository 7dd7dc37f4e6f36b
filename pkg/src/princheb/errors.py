"""Error taxonomy shared across the package.

Input errors are raised for malformed or out-of-contract arguments, data
errors for inconsistent numeric tables handed to reconstruction routines,
and Undecided for honest refusals (budget exhausted, uncertified data).
InternalCheckError marks a broken internal invariant and should never be
caught by library code.
"""


class InputError(ValueError):
    pass


class PreconditionError(ValueError):
    """A stated precondition failed; message carries the witness."""


class DataError(ValueError):
    """Inconsistent input table (non-monotone ratios, non-integral counts...)."""


class FormulaInapplicable(ValueError):
    """A closed-form density was requested where its hypothesis fails."""


class Undecided(RuntimeError):
    """Computation refused to guess: search budget exhausted or inputs uncertified."""


class ExcludedPrime(RuntimeError):
    """Prime divides the polynomial index and no override resolves it."""

    def __init__(self, p, message=None):
        self.p = p
        super().__init__(message or f"prime {p} divides the index and is excluded")


class InternalCheckError(RuntimeError):
    """A cross-check that must hold mathematically failed; indicates a bug."""
