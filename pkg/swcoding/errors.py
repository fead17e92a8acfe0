class SWCodingError(Exception):
    """Base class for errors raised by swcoding."""


class DimensionError(SWCodingError, ValueError):
    pass


class AlistFormatError(SWCodingError, ValueError):
    def __init__(self, line, message):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class BitsFormatError(SWCodingError, ValueError):
    def __init__(self, line, message, path=None):
        self.line = line
        self.message = message
        self.path = path
        location = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"{location}: {message}")


class ConstructionError(SWCodingError, RuntimeError):
    pass


class DecoderNumericError(SWCodingError, FloatingPointError):
    pass


class OracleError(SWCodingError, ValueError):
    pass
