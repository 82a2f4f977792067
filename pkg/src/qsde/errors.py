"""Exception types shared across the package."""


class QsdeError(Exception):
    """Base class for all errors raised by this package."""


class NotHermitian(QsdeError):
    """Input matrix violates the Hermitian precondition."""


class NotPSD(QsdeError):
    """Input matrix violates the positive-semidefinite precondition."""


class DegenerateCoupling(QsdeError):
    """Both coupling vectors vanish; no dynamics is defined."""


class NotDissipative(QsdeError):
    """Dissipative-regime formulas applied to a flip-type coupling."""


class IncompleteKraus(QsdeError):
    """Kraus operators fail the completeness relation sum K^dag K = 1."""


class NotEntangled(QsdeError):
    """Operation requires an entangled initial state."""


class WrongClass(QsdeError):
    """Coupling class does not match the requested criterion."""


class InvalidWeight(QsdeError):
    """State weight |alpha|^2 outside [0, 1]."""


class GridTooCoarse(QsdeError):
    """Time grid cannot bracket the sign change reliably."""


class ConfigError(QsdeError):
    """Invalid run configuration; carries the offending field name."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message
