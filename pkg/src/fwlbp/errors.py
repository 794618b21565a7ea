"""Exception types raised across the toolkit."""


class FwlbpError(Exception):
    """Base class for all toolkit errors."""


class ParseError(FwlbpError):
    """Malformed file header or token stream."""


class TruncatedError(FwlbpError):
    """File payload shorter than the header promises."""


class UnsupportedFormat(FwlbpError):
    """Magic number or variant we do not handle."""


class ConstantImageError(FwlbpError):
    """Operation undefined on a constant (zero-variance) image."""


class DegenerateSizeError(FwlbpError):
    """Requested output dimensions collapse below the minimum."""


class InvalidParameter(FwlbpError):
    """Parameter outside its documented domain."""


class ImageTooSmall(FwlbpError):
    """Image dimensions cannot accommodate the requested window/radius."""


class InsufficientLayers(FwlbpError):
    """Regression needs at least two scale layers."""


class BorderViolation(FwlbpError):
    """Pixel too close to the border for circular sampling."""


class ShapeMismatch(FwlbpError):
    """Operands have incompatible shapes or lengths."""


class DomainError(FwlbpError):
    """Value outside the mathematical domain of the transform."""


class InsufficientSamples(FwlbpError):
    """Not enough samples per class for the requested split or fit."""


class UnknownClass(FwlbpError):
    """Class label not present in the model."""


class EmptyModel(FwlbpError):
    """Model has no classes."""
