"""Exception hierarchy shared by all holosurf modules."""


class HolosurfError(Exception):
    """Base class for every error raised by this package."""


class DomainError(HolosurfError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigurationError(HolosurfError, ValueError):
    """A geometry or sweep configuration is inconsistent."""


class NumericalError(HolosurfError, ArithmeticError):
    """A numerical routine (eigensolver, root search) failed."""


class InvariantError(HolosurfError, ValueError):
    """An input violates a structural invariant (e.g. Hermitian symmetry)."""


class DegenerateDirectionError(HolosurfError, ValueError):
    """A beamformer cannot be normalized because its direction is degenerate."""


class SearchError(NumericalError):
    """A bracketing search found no sign change in its interval."""


class MeasurementError(HolosurfError, ValueError):
    """A pattern measurement could not be completed.

    ``partial`` carries whatever was measured before the failure, e.g. the
    null found on one side of a main lobe.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial if partial is not None else {}
