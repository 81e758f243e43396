"""Exception hierarchy shared across the package.

Every error carries an optional machine-readable ``location`` (a file
position, element path, or task id) so CLI and HTTP layers can report
where the problem sits without string-parsing the message.
"""

from __future__ import annotations


class CbtError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"

    def __init__(self, message: str, location: str | None = None):
        super().__init__(message)
        self.message = message
        self.location = location

    def __str__(self) -> str:
        if self.location:
            return f"{self.message} (at {self.location})"
        return self.message
