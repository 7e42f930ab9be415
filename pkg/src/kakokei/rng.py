"""Portable deterministic PRNG for reproducible data splits.

Python's ``random`` module does not guarantee identical streams across
implementations or languages, so splits are driven by a fixed 64-bit
xorshift-family generator instead. The exact procedure, constants included:

* Seeding: the user seed is premixed once with the splitmix64 finalizer
  (increment ``0x9E3779B97F4A7C15``, multipliers ``0xBF58476D1CE4E5B9`` and
  ``0x94D049BB133111EB``, shifts 30/27/31). If the mix yields zero, the
  state is set to the splitmix increment (xorshift state must be nonzero).
* Stream: xorshift64* — shifts 12/25/27, output multiplier
  ``0x2545F4914F6CDD1D``, all arithmetic modulo 2^64.
* Shuffling: Fisher–Yates from the last index down, ``j = next() % (i+1)``.
  The modulo bias is negligible for dataset-sized lists and keeps the
  procedure trivial to reproduce in any language.

Any implementation following this recipe produces byte-identical splits.
"""

from __future__ import annotations

from typing import MutableSequence, Sequence, TypeVar

_MASK64 = (1 << 64) - 1

_SPLITMIX_INC = 0x9E3779B97F4A7C15
_SPLITMIX_MUL1 = 0xBF58476D1CE4E5B9
_SPLITMIX_MUL2 = 0x94D049BB133111EB
_XORSHIFT_MUL = 0x2545F4914F6CDD1D

T = TypeVar("T")


def splitmix64(value: int) -> int:
    """One splitmix64 step, used only to turn a seed into a starting state."""
    z = (value + _SPLITMIX_INC) & _MASK64
    z = ((z ^ (z >> 30)) * _SPLITMIX_MUL1) & _MASK64
    z = ((z ^ (z >> 27)) * _SPLITMIX_MUL2) & _MASK64
    return z ^ (z >> 31)


class Xorshift64Star:
    """xorshift64* stream with splitmix64 seeding."""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError("seed must be a non-negative integer")
        state = splitmix64(seed & _MASK64)
        self._state = state if state != 0 else _SPLITMIX_INC

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK64
        x ^= x >> 27
        self._state = x
        return (x * _XORSHIFT_MUL) & _MASK64

    def below(self, bound: int) -> int:
        """Uniform-ish integer in [0, bound) via modulo reduction."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def shuffle(self, items: MutableSequence[T]) -> None:
        """In-place Fisher–Yates shuffle driven by this stream."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def shuffled(items: Sequence[T], seed: int) -> list[T]:
    """Deterministically shuffled copy of ``items`` keyed only by ``seed``."""
    out = list(items)
    Xorshift64Star(seed).shuffle(out)
    return out
