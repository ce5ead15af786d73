"""Sieve report records with JSON and CSV serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

CSV_HEADER = [
    "target",
    "lo",
    "hi",
    "filter",
    "exceptions",
    "elapsed_ms",
    "chunk_count",
    "grh_conditional",
]


@dataclass
class SieveReport:
    target: str
    lo: int
    hi: int
    filter: dict | None
    exceptions: list[int]
    elapsed_ms: float
    chunk_count: int
    grh_conditional: bool = False
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {
            "target": self.target,
            "lo": self.lo,
            "hi": self.hi,
            "filter": self.filter,
            "exceptions": list(self.exceptions),
            "elapsed_ms": self.elapsed_ms,
            "chunk_count": self.chunk_count,
            "grh_conditional": self.grh_conditional,
        }
        if self.extra:
            d.update(self.extra)
        return d

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)

    def to_csv_row(self) -> list[str]:
        return [
            self.target,
            str(self.lo),
            str(self.hi),
            json.dumps(self.filter, sort_keys=True) if self.filter else "-",
            ";".join(str(x) for x in self.exceptions),
            f"{self.elapsed_ms:.1f}",
            str(self.chunk_count),
            str(self.grh_conditional).lower(),
        ]
