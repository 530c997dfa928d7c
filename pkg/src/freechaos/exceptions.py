"""Exception types raised by freechaos."""


class FreeChaosError(Exception):
    """Base class for all library errors."""


class ShapeError(FreeChaosError, ValueError):
    """Operands live on different grids or have incompatible degrees."""


class DomainError(FreeChaosError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class SchemaError(FreeChaosError, ValueError):
    """A serialized document does not follow the chaos JSON schema."""


class ParseError(FreeChaosError, ValueError):
    """Input text is not valid JSON."""
