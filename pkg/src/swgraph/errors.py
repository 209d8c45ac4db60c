"""Exception types shared across the package."""


class SWGraphError(Exception):
    """Base class for all package errors."""


class InvalidParams(SWGraphError, ValueError):
    """Model parameters outside the valid region (e.g. p(2) > 1)."""


class NotAdmissible(SWGraphError, ValueError):
    """Graph has zero probability under the model (base cycle incomplete)."""


class TooLarge(SWGraphError, ValueError):
    """Brute-force enumeration requested above its vertex cap."""


class ResourceLimit(SWGraphError, RuntimeError):
    """Canonical search exceeded its node budget."""


class CorruptPayload(SWGraphError, ValueError):
    """Range decoder desynchronised, ran out of input or found trailing bytes."""


class HeaderMismatch(SWGraphError, ValueError):
    """Container header is malformed or inconsistent with the requested decode."""
