"""Shared result containers for identity-verification checks."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    """Deviations of a family of exact identities from their closed forms.

    ``deviations`` maps a descriptive identity tag to its worst observed
    deviation (already normalized where the identity is scale dependent).
    """

    name: str
    deviations: dict = field(default_factory=dict)
    tolerance: float = 0.0

    def record(self, tag: str, value: float):
        value = float(value)
        if tag in self.deviations:
            self.deviations[tag] = max(self.deviations[tag], value)
        else:
            self.deviations[tag] = value

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def worst(self) -> tuple:
        if not self.deviations:
            return ("", 0.0)
        tag = max(self.deviations, key=self.deviations.get)
        return (tag, self.deviations[tag])
