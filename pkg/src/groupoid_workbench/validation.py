"""Pass/fail reports returned by the structural validators.

Validators report the first violated axiom with a witness instead of
raising, so harness code can surface failures as data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a structural validation: pass, or first failure with witness."""

    ok: bool
    cause: str | None = None
    witness: Mapping[str, Any] = field(default_factory=dict)

    @classmethod
    def passed(cls) -> "CheckReport":
        return cls(ok=True)

    @classmethod
    def failed(cls, cause: str, **witness: Any) -> "CheckReport":
        return cls(ok=False, cause=cause, witness=witness)

    def __bool__(self) -> bool:
        return self.ok
