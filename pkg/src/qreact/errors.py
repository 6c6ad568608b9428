"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures onto its
exit-status contract without string matching.
"""


class QReactError(Exception):
    exit_code = 1
    code = "error"


class UsageError(QReactError, ValueError):
    exit_code = 2
    code = "usage"


class DomainError(UsageError):
    """A parameter lies outside its mathematical domain (e.g. lambda > 1)."""

    code = "domain"


class UnknownStateError(UsageError):
    code = "unknown-state"


class ArityError(UsageError):
    code = "bad-arity"


class StateFileError(UsageError):
    """A state file could not be read or does not match the JSON schema."""

    code = "malformed-file"


class InvalidStateError(UsageError):
    """A matrix violates the density-matrix invariants."""

    code = "invalid-state"


class ChannelError(UsageError):
    code = "channel"


class DegenerateError(QReactError, ArithmeticError):
    exit_code = 4
    code = "degenerate"


class SupportError(DegenerateError):
    """Relative entropy diverges: supp(rho1) is not contained in supp(rho2)."""

    code = "support"
