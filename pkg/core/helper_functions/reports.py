"""
Report models shared by every verification suite.

A report is a list of named checks plus a free-form stats mapping. Axiom failures
are recorded here as data; exceptions are reserved for malformed input.
"""

from typing import Any, Iterable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


def to_plain(value: Any) -> Any:
    """Convert numpy scalars/arrays and tuples into JSON-friendly Python values."""
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [to_plain(v) for v in value]
        return sorted(items) if isinstance(value, (set, frozenset)) else items
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


class CheckResult(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    name: str
    passed: bool = Field(alias="pass")
    witness: Optional[list[int]] = None
    detail: str = ""


class AxiomReport(BaseModel):
    checks: list[CheckResult] = Field(default_factory=list)
    stats: dict[str, Any] = Field(default_factory=dict)

    def add(
        self,
        name: str,
        passed: bool,
        witness: Optional[Iterable[int]] = None,
        detail: str = "",
    ) -> bool:
        """Record one check and return its outcome."""
        self.checks.append(
            CheckResult(
                name=name,
                passed=bool(passed),
                witness=[int(w) for w in witness] if witness is not None else None,
                detail=detail,
            )
        )
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def merge(self, other: "AxiomReport", prefix: str = "") -> "AxiomReport":
        """Append another report's checks and stats, names prefixed."""
        for check in other.checks:
            self.checks.append(check.model_copy(update={"name": prefix + check.name}))
        for key, value in other.stats.items():
            self.stats.setdefault(prefix + key, value)
        return self

    def canonical(self) -> dict:
        """Deterministic dict form: checks sorted by name, witnesses omitted when absent."""
        ordered = sorted(self.checks, key=lambda check: check.name)
        return {
            "checks": [check.model_dump(by_alias=True, exclude_none=True) for check in ordered],
            "stats": to_plain(self.stats),
        }
