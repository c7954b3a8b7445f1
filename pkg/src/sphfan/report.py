from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    """Outcome of a validation: verdict, diagnostics and an optional witness."""

    ok: bool = True
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    witness: Any = None

    def fail(self, message: str, witness: Any = None) -> "Report":
        self.ok = False
        self.errors.append(message)
        if witness is not None and self.witness is None:
            self.witness = witness
        return self

    def warn(self, message: str) -> "Report":
        self.warnings.append(message)
        return self

    def __bool__(self):
        return self.ok
