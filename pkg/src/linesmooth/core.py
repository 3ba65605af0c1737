"""Series representation and grid resampling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from linesmooth.errors import EmptyOrTooShort, GridMismatch, NonFinite


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Series:
    """A uniformly sampled real-valued sequence indexed ``0..n-1``.

    Build through :func:`validate`; the constructor does not check invariants.
    """

    values: np.ndarray

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        return f"Series(n={self.n})"


@dataclass(frozen=True, eq=False)
class PointSet:
    """Retained samples of a subsampling smoother: strictly increasing indices."""

    indices: np.ndarray
    values: np.ndarray

    @classmethod
    def from_series(cls, x: Series, indices: Iterable[int]) -> "PointSet":
        idx = np.array(sorted(set(int(i) for i in indices)), dtype=np.int64)
        idx.flags.writeable = False
        return cls(idx, _frozen(x.values[idx]))

    def __len__(self) -> int:
        return int(self.indices.shape[0])


SeriesLike = Union[Series, Sequence[float], np.ndarray]


def validate(values: Iterable[float]) -> Series:
    """Check ``values`` and wrap them as an immutable :class:`Series`.

    Raises
    ------
    EmptyOrTooShort
        Fewer than two samples.
    NonFinite
        A NaN or infinite sample; ``.index`` holds its position.
    """
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                     dtype=float).ravel()
    if arr.shape[0] < 2:
        raise EmptyOrTooShort(f"need at least 2 samples, got {arr.shape[0]}")
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        raise NonFinite(int(bad[0]))
    return Series(_frozen(arr))


def as_series(x: SeriesLike) -> Series:
    return x if isinstance(x, Series) else validate(x)


def resample_to_grid(ps: PointSet, n: int) -> Series:
    """Linearly interpolate retained points back onto the full grid ``0..n-1``.

    Retained samples are reproduced exactly.
    """
    idx = np.asarray(ps.indices)
    if idx.size == 0 or idx[0] != 0 or idx[-1] != n - 1:
        raise GridMismatch(f"retained indices must span 0..{n - 1}")
    if np.any(np.diff(idx) <= 0):
        raise GridMismatch("retained indices must be strictly increasing")
    out = np.interp(np.arange(n, dtype=float), idx.astype(float), ps.values)
    out[idx] = ps.values
    return Series(_frozen(out))
