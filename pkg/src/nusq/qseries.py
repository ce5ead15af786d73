"""Truncated integer q-expansions (theta series, cusp form coefficients)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class QSeries:
    """Coefficient array c(0..N) of a q-series truncated at N."""

    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.int64)

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        if not 0 <= n <= self.truncation:
            raise IndexError(f"coefficient {n} beyond truncation {self.truncation}")
        return int(self.coeffs[n])

    def __len__(self) -> int:
        return len(self.coeffs)

    def tolist(self) -> list[int]:
        return self.coeffs.tolist()
