"""Per-vertex frequency tables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dictionary import Dictionary


@dataclass(eq=False)
class FrequencyField:
    """An n x |s| table of counts, one row per vertex, one column per graphlet."""

    values: np.ndarray
    dictionary: Dictionary

    kind = "net"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.int64)
        if self.values.ndim != 2 or self.values.shape[1] != len(self.dictionary):
            raise ValueError(
                f"table shape {self.values.shape} does not match dictionary of size {len(self.dictionary)}"
            )

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def column(self, k: int) -> np.ndarray:
        return self.values[:, self.dictionary.index(k)]

    def __getitem__(self, k: int) -> np.ndarray:
        return self.column(k)

    def column_names(self) -> list[str]:
        prefix = "dhat" if self.kind == "raw" else "d"
        return [f"{prefix}{k}" for k in self.dictionary]

    def __eq__(self, other):
        if not isinstance(other, FrequencyField):
            return NotImplemented
        return self.dictionary == other.dictionary and np.array_equal(self.values, other.values)

    __hash__ = None


class RawFrequencyField(FrequencyField):
    kind = "raw"


class NetFrequencyField(FrequencyField):
    kind = "net"
