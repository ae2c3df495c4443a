"""Net <-> raw frequency conversion through the unit upper-triangular U16."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dictionary import Dictionary, N_GRAPHLETS
from .errors import ConversionInconsistencyError
from .fields import NetFrequencyField, RawFrequencyField

# Row k, column l: copies of graphlet k (at its incidence orbit) inside
# graphlet l seen from l's incidence node, so that U16 @ net = raw.
_U16_ROWS = {
    0: {0: 1},
    1: {1: 1},
    2: {2: 1, 4: 2},
    3: {3: 1, 4: 1},
    4: {4: 1},
    5: {5: 1, 9: 2, 10: 1, 12: 2, 13: 4, 14: 2, 15: 6},
    6: {6: 1, 10: 1, 11: 2, 12: 2, 13: 2, 14: 4, 15: 6},
    7: {7: 1, 9: 1, 10: 1, 13: 2, 14: 1, 15: 3},
    8: {8: 1, 11: 1, 14: 1, 15: 1},
    9: {9: 1, 13: 2, 15: 3},
    10: {10: 1, 13: 2, 14: 2, 15: 6},
    11: {11: 1, 14: 2, 15: 3},
    12: {12: 1, 13: 1, 14: 1, 15: 3},
    13: {13: 1, 15: 3},
    14: {14: 1, 15: 3},
    15: {15: 1},
}


def _build_u16() -> np.ndarray:
    u = np.zeros((N_GRAPHLETS, N_GRAPHLETS), dtype=np.int64)
    for k, row in _U16_ROWS.items():
        for l, v in row.items():
            u[k, l] = v
    if not (np.all(np.diag(u) == 1) and not np.tril(u, -1).any() and (u >= 0).all()):
        raise AssertionError("U16 table is not unit upper triangular")
    u.flags.writeable = False
    return u


U16 = _build_u16()


@dataclass(frozen=True, eq=False)
class ConversionMatrix:
    """Conversion coefficients for one dictionary: ``entries @ net = raw``."""

    ids: tuple[int, ...]
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.int64)
        if e.shape != (len(self.ids), len(self.ids)):
            raise ValueError("entries must be |s| x |s|")
        if np.tril(e, -1).any() or not np.all(np.diag(e) == 1):
            raise ValueError("conversion matrix must be unit upper triangular")
        e = e.copy()
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    @property
    def dim(self) -> int:
        return len(self.ids)

    @property
    def nnz(self) -> int:
        return int(np.count_nonzero(self.entries))

    def __getitem__(self, key):
        k, l = key
        return int(self.entries[self.ids.index(k), self.ids.index(l)])

    def with_entry(self, k: int, l: int, value: int) -> "ConversionMatrix":
        e = self.entries.copy()
        e[self.ids.index(k), self.ids.index(l)] = value
        return ConversionMatrix(self.ids, e)

    def apply(self, net: np.ndarray) -> np.ndarray:
        """Map an n x |s| net table to the raw table."""
        return np.asarray(net, dtype=np.int64) @ self.entries.T


def full_u16() -> ConversionMatrix:
    return ConversionMatrix(tuple(range(N_GRAPHLETS)), U16)


def sub_matrix(d: Dictionary) -> ConversionMatrix:
    ix = np.array(d.selected)
    return ConversionMatrix(d.selected, U16[np.ix_(ix, ix)])


def net_from_raw(raw, U: ConversionMatrix | None = None, lenient: bool = False):
    """Solve ``U f = raw`` for every vertex by back substitution.

    ``raw`` is a RawFrequencyField or a plain n x |s| integer array. Negative
    intermediates raise ConversionInconsistencyError, or are clamped to zero
    when ``lenient`` is set.
    """
    if isinstance(raw, RawFrequencyField):
        table, dictionary = raw.values, raw.dictionary
    else:
        table, dictionary = np.asarray(raw, dtype=np.int64), None
    if U is None:
        if dictionary is None:
            raise ValueError("a conversion matrix is required for bare arrays")
        U = sub_matrix(dictionary)
    if dictionary is not None and tuple(dictionary.selected) != U.ids:
        raise ValueError(f"conversion matrix ids {U.ids} do not match dictionary {dictionary.selected}")
    if table.shape[1] != U.dim:
        raise ValueError("raw table width does not match conversion matrix")

    net = np.empty_like(table)
    E = U.entries
    for a in range(U.dim - 1, -1, -1):
        col = table[:, a].copy()
        for b in np.flatnonzero(E[a, a + 1:]) + a + 1:
            col -= E[a, b] * net[:, b]
        neg = np.flatnonzero(col < 0)
        if len(neg):
            if not lenient:
                v = int(neg[0])
                raise ConversionInconsistencyError(v, U.ids[a], int(col[v]))
            col[neg] = 0
        net[:, a] = col
    if dictionary is None:
        return net
    return NetFrequencyField(net, dictionary)


def exact_inverse(U: ConversionMatrix) -> list[list[Fraction]]:
    """U^-1 over the rationals, by column-wise back substitution."""
    k = U.dim
    E = [[Fraction(int(x)) for x in row] for row in U.entries]
    inv = [[Fraction(0)] * k for _ in range(k)]
    for c in range(k):
        for r in range(k - 1, -1, -1):
            s = Fraction(1 if r == c else 0) - sum(E[r][j] * inv[j][c] for j in range(r + 1, k))
            inv[r][c] = s / E[r][r]
    return inv


def inverse_pattern_check(U: ConversionMatrix) -> bool:
    """True when U^-1 has exactly the nonzero pattern of U."""
    inv = exact_inverse(U)
    return all(
        (inv[r][c] != 0) == bool(U.entries[r, c]) for r in range(U.dim) for c in range(U.dim)
    )
