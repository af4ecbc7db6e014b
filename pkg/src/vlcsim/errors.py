"""Exception types raised by vlcsim."""


class VlcSimError(Exception):
    """Base class for all vlcsim errors."""


class InvalidArgumentError(VlcSimError, ValueError):
    pass


class OutOfDomainError(VlcSimError, ValueError):
    pass


class DegenerateGeometryError(VlcSimError, ValueError):
    """Two points that must be distinct coincide (zero link distance)."""


class ScenarioParseError(VlcSimError, ValueError):
    """Malformed scenario document; carries the line/column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class ScenarioValidationError(VlcSimError, ValueError):
    """Scenario document parsed but violates an invariant.

    ``field`` is a dotted path such as ``leds[0].semi_angle_deg``.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
