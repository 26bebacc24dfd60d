"""Counter-based deterministic randomness.

Every random decision in the package is a pure function of ``(seed, keys...)``
through a splitmix64-style mixer, so results are independent of evaluation
order, platform, and parallel schedule. Graph edge draws compare an exact
53-bit dyadic uniform against a rational probability, which keeps the
p-monotonicity guarantee (same per-pair uniform for every p) and makes the
comparison bias-free. Integer draws for samplers reduce a 64-bit word modulo
the range; the bias is at most range/2^64 and is documented as acceptable
for probe sampling (never used for edge decisions).

A numpy-vectorized path produces bit-for-bit the same stream as the scalar
path; ``tests/test_rng.py`` pins both to frozen vectors.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

__all__ = [
    "mix64",
    "keyed_bits64",
    "pair_bits53",
    "pair_uniform",
    "uniform_less_than",
    "CounterStream",
    "bits64_array",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """splitmix64 finalizer; a bijection of 64-bit words."""
    x &= _MASK64
    x = ((x ^ (x >> 30)) * _MIX1) & _MASK64
    x = ((x ^ (x >> 27)) * _MIX2) & _MASK64
    return (x ^ (x >> 31)) & _MASK64


def keyed_bits64(seed: int, *keys: int) -> int:
    """64 bits determined by the seed and an ordered key tuple."""
    h = mix64((seed & _MASK64) ^ _GOLDEN)
    for k in keys:
        h = mix64(h ^ mix64(k & _MASK64))
    return h


def pair_bits53(seed: int, a: int, b: int) -> int:
    """53-bit word for an unordered id pair; callers pass a = min, b = max."""
    return keyed_bits64(seed, a, b) >> 11


def pair_uniform(seed: int, a: int, b: int) -> Fraction:
    """Dyadic uniform in [0, 1) with 53-bit resolution, as an exact Fraction."""
    return Fraction(pair_bits53(seed, a, b), 1 << 53)


def uniform_less_than(seed: int, a: int, b: int, p: Fraction) -> bool:
    """Exactly decide pair_uniform(seed, a, b) < p for rational p."""
    bits = pair_bits53(seed, a, b)
    p = Fraction(p)
    return bits * p.denominator < p.numerator * (1 << 53)


class CounterStream:
    """Sequential facade over the keyed generator.

    Value k of stream s under seed q is ``keyed_bits64(q, s, k)``; the object
    just tracks k. Distinct streams are independent keyed families, which is
    the deterministic seed-split scheme used for parallel sampling.
    """

    def __init__(self, seed: int, stream: int = 0) -> None:
        self.seed = seed
        self.stream = stream
        self.counter = 0

    def next_bits64(self) -> int:
        v = keyed_bits64(self.seed, self.stream, self.counter)
        self.counter += 1
        return v

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi]; modulo reduction of 64 bits."""
        if hi < lo:
            raise ValueError("empty range")
        span = hi - lo + 1
        return lo + self.next_bits64() % span

    def fraction(self, denom_bound: int, scale: int = 1) -> Fraction:
        """Random rational a/b in [0, scale] with b in [1, denom_bound]."""
        b = self.randint(1, denom_bound)
        a = self.randint(0, b * scale)
        return Fraction(a, b)


def _mix64_vec(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        x = x.astype(np.uint64, copy=True)
        x ^= x >> np.uint64(30)
        x *= np.uint64(_MIX1)
        x ^= x >> np.uint64(27)
        x *= np.uint64(_MIX2)
        x ^= x >> np.uint64(31)
    return x


def bits64_array(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Vectorized ``keyed_bits64(seed, stream, k)`` for k = start..start+count-1.

    Matches the scalar path bit for bit (uint64 wrap-around is the mod-2^64
    arithmetic of the scalar mixer).
    """
    base = keyed_bits64(seed, stream)
    counters = np.arange(start, start + count, dtype=np.uint64)
    return _mix64_vec(np.uint64(base) ^ _mix64_vec(counters))
