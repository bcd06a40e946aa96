"""Exception hierarchy shared by every svcproto module."""

from __future__ import annotations


class ServiceProtocolError(Exception):
    """Base class for all errors raised by svcproto."""


# -- core model -------------------------------------------------------------


class ModelError(ServiceProtocolError, ValueError):
    """A network or schema violates one of its structural invariants.

    ``key`` carries the offending id or property name.
    """

    def __init__(self, key: str, message: str | None = None):
        self.key = key
        super().__init__(message or f"{type(self).__name__}: {key!r}")


class DuplicateEntityId(ModelError):
    pass


class DanglingLinkEndpoint(ModelError):
    pass


class DuplicatePropertyName(ModelError):
    pass


class DuplicateSetMember(ModelError):
    pass


class DuplicateClassId(ModelError):
    pass


class DanglingLinkClassEndpoint(ModelError):
    pass


class DuplicateConstraintName(ModelError):
    pass


class InvalidValue(ModelError):
    pass


# -- predicates -------------------------------------------------------------


class PredicateSyntaxError(ServiceProtocolError, ValueError):
    """Raised by the predicate parser; ``offset`` is a UTF-8 byte offset."""

    def __init__(self, text: str, offset: int, expected: str):
        self.text = text
        self.offset = offset
        self.expected = expected
        super().__init__(f"at byte {offset} of {text!r}: expected {expected}")


# -- lookups ----------------------------------------------------------------


class UnknownId(ServiceProtocolError, LookupError):
    def __init__(self, key: str, what: str = "id"):
        self.key = key
        super().__init__(f"unknown {what} {key!r}")


class UnknownEntity(UnknownId):
    def __init__(self, key: str):
        super().__init__(key, "entity")


class UnknownClass(UnknownId):
    def __init__(self, key: str):
        super().__init__(key, "class")


class UnknownLink(UnknownId):
    def __init__(self, key: str):
        super().__init__(key, "link")


class UnknownLinkClass(UnknownId):
    def __init__(self, key: str):
        super().__init__(key, "link class")


# -- compliance -------------------------------------------------------------


class InstanceTooLarge(ServiceProtocolError):
    pass


# -- protocol ---------------------------------------------------------------


class InvalidAbstractProtocol(ServiceProtocolError, ValueError):
    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class NotExecutable(ServiceProtocolError):
    def __init__(self, level, reasons=()):
        self.level = level
        self.reasons = tuple(reasons)
        super().__init__(f"protocol is {level.value.lower()}, not executable")


class UnknownState(UnknownId):
    def __init__(self, key: str):
        super().__init__(key, "state")


class EnactmentError(ServiceProtocolError):
    pass


class ActivityNotEnabled(EnactmentError):
    pass


class NoTransitionDefined(EnactmentError):
    pass


class PerformerNotAuthorized(EnactmentError):
    pass


# -- documents --------------------------------------------------------------


class FormatError(ServiceProtocolError, ValueError):
    """Load failure; ``path`` is a JSON-path locator such as ``$.body.entities[2].id``."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class ParseError(FormatError):
    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        super().__init__("$", f"invalid JSON at line {line}, column {column}: {message}")


class SchemaViolation(FormatError):
    pass


class UnsupportedVersion(FormatError):
    pass
