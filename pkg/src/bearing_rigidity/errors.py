"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: input parsing problems exit 2,
ValidationError exits 3, NumericalError exits 4.
"""


class BearingRigidityError(Exception):
    """Base class for everything raised deliberately by this package."""


class ParseError(BearingRigidityError):
    """Input file or document does not match the expected schema."""


class ValidationError(BearingRigidityError):
    """Structurally invalid input: bad graph, bad state, bad combination."""


class CoincidentAgentsError(ValidationError):
    """Two agents share a position; bearings are undefined."""


class DegenerateConfigurationError(ValidationError):
    """Operation requires a non-degenerate (non-collinear) configuration."""


class NumericalError(BearingRigidityError):
    """Non-finite values or an internally inconsistent numerical result."""
