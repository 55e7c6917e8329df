"""Deterministic counter-based random streams.

Every stochastic quantity in this package is drawn from a splitmix64-style
counter generator so that results are exactly reproducible from a 64-bit
seed, independent of evaluation order or worker count.  The mixing scheme
is fixed and documented here so other implementations can reproduce the
exact same streams:

    mix64(z):   z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9   (mod 2**64)
                z ^= z >> 27;  z *= 0x94D049BB133111EB   (mod 2**64)
                z ^= z >> 31
    root key:   mix64(seed)
    substream:  sub(key, i) = mix64(key + (i + 1) * 0x9E3779B97F4A7C15)
    draw j:     u64(key, j) = mix64(key + (j + 1) * 0x9E3779B97F4A7C15)
    uniform:    (u64(key, j) >> 11) * 2.0**-53        in [0, 1)

Scan i of an ensemble seeded with `seed` uses key sub(mix64(seed), i), so
scans may be generated in any order (or in parallel) with identical output.
"""

from __future__ import annotations

from dataclasses import dataclass

_MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit integer."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def substream_key(key: int, i: int) -> int:
    """Key of substream `i` (i >= 0) of the stream identified by `key`."""
    return mix64((key + ((i + 1) * GOLDEN & _MASK)) & _MASK)


def u64_at(key: int, j: int) -> int:
    """j-th raw 64-bit draw of stream `key` (counter-based, j >= 0)."""
    return mix64((key + ((j + 1) * GOLDEN & _MASK)) & _MASK)


def uniform_at(key: int, j: int) -> float:
    """j-th uniform [0, 1) draw of stream `key`."""
    return (u64_at(key, j) >> 11) * _INV53


@dataclass(frozen=True)
class Stream:
    """Handle on one deterministic draw stream.

    A Stream is cheap to fork: `substream(i)` derives an independent child
    stream, and `uniform(j)` returns the j-th draw without mutable state.
    """

    key: int

    @classmethod
    def from_seed(cls, seed: int) -> "Stream":
        return cls(mix64(int(seed) & _MASK))

    def substream(self, i: int) -> "Stream":
        return Stream(substream_key(self.key, i))

    def uniform(self, j: int) -> float:
        return uniform_at(self.key, j)


def scan_stream(seed: int, scan_index: int) -> Stream:
    """Stream for scan `scan_index` of an ensemble seeded with `seed`."""
    return Stream.from_seed(seed).substream(scan_index)
