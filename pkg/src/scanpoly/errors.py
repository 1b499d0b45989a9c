"""Exception hierarchy shared by the package and mapped to CLI exit codes."""


class ScanPolyError(Exception):
    """Base class for all package errors."""


class CurveFormatError(ScanPolyError, ValueError):
    """Malformed curve input (bad chain-code digit, broken connectivity, bad file)."""


class DegenerateCurveError(ScanPolyError, ValueError):
    """Geometry collapsed below what an operation needs (e.g. < 3 points)."""


class NoComponentError(ScanPolyError, ValueError):
    """Raster contains no foreground pixels."""


class AmbiguousComponentError(ScanPolyError, ValueError):
    """Raster contains more than one 8-connected foreground component."""


class ClosenessError(ScanPolyError, ValueError):
    """A polygon vertex does not coincide with any point of the curve."""


class CostGuardError(ScanPolyError, ValueError):
    """Requested computation exceeds the configured size guard."""
