"""Deterministic synthetic datasets.

Randomness comes from SplitMix64 so the same ``(kind, n, seed)`` gives the
same series in any language that reimplements the generator:

    state += 0x9E3779B97F4A7C15                       (mod 2**64)
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9          (mod 2**64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB          (mod 2**64)
    return z ^ (z >> 31)

Uniforms are ``(u64 >> 11) * 2**-53`` in [0, 1). Normals use Box-Muller on
two uniforms, ``sqrt(-2 ln(1 - u1)) * cos(2 pi u2)``, one normal per pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from linesmooth.core import Series, validate
from linesmooth.errors import DatasetTooShort

MASK64 = (1 << 64) - 1
SYNTH_KINDS = ("trend", "cyclic", "spiky", "walk")


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53

    def normal(self) -> float:
        u1, u2 = self.uniform(), self.uniform()
        return math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(2.0 * math.pi * u2)

    def normals(self, n: int) -> np.ndarray:
        return np.array([self.normal() for _ in range(n)])

    def below(self, k: int) -> int:
        """Integer in ``[0, k)``."""
        return int(self.uniform() * k)


@dataclass(frozen=True)
class DatasetRecord:
    name: str
    category: str
    series: Series
    source_path: str = ""


def _spike_positions(rng: SplitMix64, n: int, count: int) -> list:
    """Distinct interior positions with at least one baseline sample between spikes."""
    chosen: set = set()
    attempts = 0
    while len(chosen) < count and attempts < 100 * (count + 1):
        attempts += 1
        p = 1 + rng.below(n - 2)
        if chosen.isdisjoint({p - 1, p, p + 1}):
            chosen.add(p)
    return sorted(chosen)


def generate_synthetic(
    kind: str,
    n: int,
    seed: int,
    noise: float = 0.1,
    spikes: int | None = None,
) -> DatasetRecord:
    """One synthetic series.

    trend  -- ramp from 0 to 1 plus ``noise`` * N(0, 1)
    cyclic -- two sinusoids (4 and 15 cycles) plus noise
    spiky  -- baseline 0 plus noise, with ``spikes`` positive spikes of height 1..5
    walk   -- cumulative sum of N(0, 1) steps (``noise`` ignored)
    """
    if n < 8:
        raise DatasetTooShort(f"need at least 8 samples, got {n}")
    if kind not in SYNTH_KINDS:
        raise ValueError(f"unknown synthetic kind {kind!r}")
    rng = SplitMix64(seed)
    t = np.arange(n, dtype=float)
    if kind == "walk":
        values = np.cumsum(rng.normals(n))
    else:
        if kind == "trend":
            base = t / (n - 1)
        elif kind == "cyclic":
            base = np.sin(2 * np.pi * 4 * t / n) + 0.5 * np.sin(2 * np.pi * 15 * t / n + 1.0)
        else:
            base = np.zeros(n)
            count = max(1, n // 50) if spikes is None else spikes
            for p in _spike_positions(rng, n, count):
                base[p] = 1.0 + 4.0 * rng.uniform()
        values = base + noise * rng.normals(n) if noise else base
    name = f"{kind}_{n}_{seed}"
    return DatasetRecord(name, kind, validate(values), f"synthetic:{name}")
