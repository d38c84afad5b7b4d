"""Fixed-length bit strings and the shift/XOR algebra on them.

Positions are 1-indexed in the public API, matching the usual ``x_1 .. x_n``
notation.  Internally a string is one Python integer whose most significant
bit (weight ``2**(n-1)``) is position 1, so XOR, popcount and rotation all run
on packed machine words.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, LengthMismatch

__all__ = [
    "BitString",
    "check_shift",
    "cyclic_shift",
    "xor_weight",
    "noise_sample",
    "restrict",
    "permute",
    "shift_position",
]


def check_shift(i: int, n: int) -> int:
    """Validate a shift index ``0 <= i < n`` and return it as ``int``."""
    i = int(i)
    if not 0 <= i < n:
        raise DomainError(f"shift index {i} outside [0, {n})")
    return i


def shift_position(i: int, j: int, n: int) -> int:
    """1-indexed image of position ``j`` under the ``i``-th cyclic permutation.

    ``shift_position(i, j, n) = i + j`` if that is at most ``n``, else ``i + j - n``.
    Negative ``i`` is accepted and taken modulo ``n``.
    """
    return (j - 1 + i) % n + 1


class BitString:
    """Immutable bit string of length ``n``.

    >>> x = BitString.from_str("1000")
    >>> str(x.shift(1))
    '0100'
    """

    __slots__ = ("_n", "_v")

    def __init__(self, n: int, value: int = 0):
        if n < 0:
            raise DomainError("length must be non-negative")
        if value < 0 or value >> n:
            raise DomainError(f"value does not fit in {n} bits")
        self._n = int(n)
        self._v = int(value)

    # construction -----------------------------------------------------------------
    @classmethod
    def from_str(cls, s: str) -> "BitString":
        s = s.strip()
        if s and set(s) - {"0", "1"}:
            raise DomainError(f"not a binary string: {s!r}")
        return cls(len(s), int(s, 2) if s else 0)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitString":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        if arr.size and arr.max() > 1:
            raise DomainError("bits must be 0 or 1")
        n = int(arr.size)
        if n == 0:
            return cls(0, 0)
        packed = np.packbits(arr).tobytes()
        return cls(n, int.from_bytes(packed, "big") >> (8 * len(packed) - n))

    @classmethod
    def from_hex(cls, n: int, text: str) -> "BitString":
        return cls(n, int(text, 16) if text else 0)

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> "BitString":
        return cls(n, (1 << n) - 1)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "BitString":
        return cls.from_bits(rng.integers(0, 2, size=n, dtype=np.uint8))

    @classmethod
    def with_weight(cls, n: int, w: int, rng: np.random.Generator) -> "BitString":
        """Uniformly random string of Hamming weight exactly ``w``."""
        if not 0 <= w <= n:
            raise DomainError(f"weight {w} outside [0, {n}]")
        bits = np.zeros(n, dtype=np.uint8)
        bits[rng.choice(n, size=w, replace=False)] = 1
        return cls.from_bits(bits)

    # accessors --------------------------------------------------------------------
    @property
    def n(self) -> int:
        return self._n

    @property
    def value(self) -> int:
        """Packed integer; position 1 is the most significant bit."""
        return self._v

    def __len__(self) -> int:
        return self._n

    def __getitem__(self, j: int) -> int:
        """Bit at 1-indexed position ``j``."""
        if not 1 <= j <= self._n:
            raise DomainError(f"position {j} outside [1, {self._n}]")
        return (self._v >> (self._n - j)) & 1

    def weight(self) -> int:
        return self._v.bit_count()

    def to_array(self) -> np.ndarray:
        """0/1 ``uint8`` array; element ``k`` is position ``k + 1``."""
        if self._n == 0:
            return np.zeros(0, dtype=np.uint8)
        nbytes = (self._n + 7) // 8
        raw = (self._v << (8 * nbytes - self._n)).to_bytes(nbytes, "big")
        return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[: self._n]

    def signs(self) -> np.ndarray:
        """``(-1) ** bit`` as a float array."""
        return 1.0 - 2.0 * self.to_array()

    def hex(self) -> str:
        width = max(1, (self._n + 3) // 4)
        return format(self._v, f"0{width}x")

    # algebra ----------------------------------------------------------------------
    def _check(self, other: "BitString") -> None:
        if not isinstance(other, BitString):
            raise TypeError(f"expected BitString, got {type(other).__name__}")
        if other._n != self._n:
            raise LengthMismatch(f"lengths differ: {self._n} vs {other._n}")

    def __xor__(self, other: "BitString") -> "BitString":
        self._check(other)
        return BitString(self._n, self._v ^ other._v)

    def __and__(self, other: "BitString") -> "BitString":
        self._check(other)
        return BitString(self._n, self._v & other._v)

    def __or__(self, other: "BitString") -> "BitString":
        self._check(other)
        return BitString(self._n, self._v | other._v)

    def __invert__(self) -> "BitString":
        return BitString(self._n, self._v ^ ((1 << self._n) - 1))

    def shift(self, i: int) -> "BitString":
        """Cyclic shift: position ``shift_position(i, j)`` of the result holds ``x_j``."""
        n = self._n
        i = check_shift(i, n) if n else 0
        if i == 0:
            return self
        mask = (1 << n) - 1
        return BitString(n, ((self._v >> i) | (self._v << (n - i))) & mask)

    # dunder -----------------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return isinstance(other, BitString) and other._n == self._n and other._v == self._v

    def __hash__(self) -> int:
        return hash((self._n, self._v))

    def __str__(self) -> str:
        return format(self._v, f"0{self._n}b") if self._n else ""

    def __repr__(self) -> str:
        return f"BitString('{self}')"


def cyclic_shift(x: BitString, i: int) -> BitString:
    return x.shift(i)


def xor_weight(x: BitString, y: BitString) -> int:
    """Hamming distance ``|x XOR y|``."""
    return (x ^ y).weight()


def noise_sample(x: BitString, delta: float, rng: np.random.Generator) -> BitString:
    """Flip each bit of ``x`` independently with probability ``delta``."""
    if not 0.0 <= delta <= 0.5:
        raise DomainError(f"noise rate {delta} outside [0, 1/2]")
    flips = rng.random(x.n) < delta
    return x ^ BitString.from_bits(flips.astype(np.uint8))


def restrict(x: BitString, S: Iterable[int]) -> BitString:
    """The ``|S|``-bit string of the bits of ``x`` at positions ``S``, in increasing order."""
    idx = sorted(set(int(j) for j in S))
    if idx and (idx[0] < 1 or idx[-1] > x.n):
        raise DomainError(f"positions must lie in [1, {x.n}]")
    arr = x.to_array()
    return BitString.from_bits(arr[np.asarray(idx, dtype=np.int64) - 1] if idx else [])


def permute(x: BitString, tau: Sequence[int]) -> BitString:
    """Apply a permutation given as a 1-indexed position map.

    Position ``tau[j-1]`` of the result holds ``x_j``.
    """
    n = x.n
    t = np.asarray(tau, dtype=np.int64)
    if t.shape != (n,) or sorted(t.tolist()) != list(range(1, n + 1)):
        raise DomainError("tau must be a permutation of 1..n")
    arr = x.to_array()
    out = np.empty_like(arr)
    out[t - 1] = arr
    return BitString.from_bits(out)
