"""The ShAp partial function, its single-shift variants, and the hard input distributions.

An instance is four strings ``(x1, x2, y1, y2)``; Alice holds the ``x`` pair and
Bob the ``y`` pair.  For shift ``i`` the relevant quantity is

    w_i = |shift(x1, i) ^ x2 ^ shift(y1, i) ^ y2|

and ShAp is 1 if some ``w_i <= 2n/5``, 0 if every ``w_i`` lies in
``[7n/15, 8n/15]``, and undefined otherwise.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _kernels
from .bits import BitString, check_shift, noise_sample
from .errors import DomainError, LengthMismatch

__all__ = [
    "ShapInstance",
    "PromiseClass",
    "DistributionSpec",
    "shift_xor_weight",
    "all_shift_weights",
    "classify_weight",
    "classify_at",
    "classify",
    "sample",
    "sample_class_at",
    "sample_zero_class",
    "mu1_tilde_density",
    "mu1_tilde_density_via_noise",
    "MU1_NOISE",
]

#: Noise rate applied to ``x1`` in the planted distribution.
MU1_NOISE = Fraction(3, 8)


class PromiseClass(enum.Enum):
    ONE = 1
    ZERO = 0
    UNDEFINED = None

    def __str__(self) -> str:
        return {1: "1", 0: "0", None: "U"}[self.value]

    @classmethod
    def parse(cls, text: str) -> "PromiseClass":
        return {"1": cls.ONE, "0": cls.ZERO, "U": cls.UNDEFINED}[text]


@dataclass(frozen=True)
class ShapInstance:
    x1: BitString
    x2: BitString
    y1: BitString
    y2: BitString

    def __post_init__(self):
        n = self.x1.n
        if not (self.x2.n == self.y1.n == self.y2.n == n):
            raise LengthMismatch("all four strings must share one length")

    @property
    def n(self) -> int:
        return self.x1.n

    @classmethod
    def zeros(cls, n: int) -> "ShapInstance":
        z = BitString.zeros(n)
        return cls(z, z, z, z)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "ShapInstance":
        return cls(*(BitString.random(n, rng) for _ in range(4)))

    def shift_difference(self) -> BitString:
        """``x1 ^ y1``; shifts commute with XOR so this is all a shift needs."""
        return self.x1 ^ self.y1

    def aligned_difference(self) -> BitString:
        return self.x2 ^ self.y2

    def alice(self) -> tuple[BitString, BitString]:
        return self.x1, self.x2

    def bob(self) -> tuple[BitString, BitString]:
        return self.y1, self.y2

    # canonical text form ----------------------------------------------------------
    def to_text(self) -> str:
        return (
            f"n={self.n} x1={self.x1.hex()} x2={self.x2.hex()} "
            f"y1={self.y1.hex()} y2={self.y2.hex()}"
        )

    _TEXT = re.compile(
        r"^n=(\d+)\s+x1=([0-9a-fA-F]+)\s+x2=([0-9a-fA-F]+)\s+"
        r"y1=([0-9a-fA-F]+)\s+y2=([0-9a-fA-F]+)$"
    )

    @classmethod
    def from_text(cls, line: str) -> "ShapInstance":
        m = cls._TEXT.match(line.strip())
        if not m:
            raise DomainError(f"malformed instance line: {line!r}")
        n = int(m.group(1))
        return cls(*(BitString.from_hex(n, m.group(g)) for g in range(2, 6)))


def shift_xor_weight(inst: ShapInstance, i: int) -> int:
    check_shift(i, inst.n)
    return (inst.shift_difference().shift(i) ^ inst.aligned_difference()).weight()


def all_shift_weights(inst: ShapInstance) -> np.ndarray:
    """``w_i`` for ``i = 0 .. n-1`` as an ``int64`` array."""
    return _kernels.shift_weights(inst.shift_difference().to_array(), inst.aligned_difference().to_array())


def classify_weight(w: int, n: int) -> PromiseClass:
    """Single-shift promise class of one weight, using exact integer comparisons."""
    if 15 * w <= 6 * n:
        return PromiseClass.ONE
    if 7 * n <= 15 * w <= 8 * n:
        return PromiseClass.ZERO
    return PromiseClass.UNDEFINED


def classify_at(inst: ShapInstance, i: int) -> PromiseClass:
    return classify_weight(shift_xor_weight(inst, i), inst.n)


def classify(inst: ShapInstance) -> PromiseClass:
    n = inst.n
    w15 = 15 * all_shift_weights(inst)
    if np.any(w15 <= 6 * n):
        return PromiseClass.ONE
    if np.all((w15 >= 7 * n) & (w15 <= 8 * n)):
        return PromiseClass.ZERO
    return PromiseClass.UNDEFINED


@dataclass(frozen=True)
class DistributionSpec:
    """One of the input distributions.

    ``kind`` is ``"mu0"``, ``"mu1_at_shift"``, ``"mu1"`` or ``"mu"``.  ``noise``
    is the flip rate applied to ``x1`` in the planted distributions; the default
    is 3/8 and 0 gives exact weight-0 instances for tests.
    """

    kind: str
    n: int
    shift: Optional[int] = None
    noise: float = float(MU1_NOISE)

    def __post_init__(self):
        if self.kind not in ("mu0", "mu1_at_shift", "mu1", "mu"):
            raise DomainError(f"unknown distribution kind {self.kind!r}")
        if self.n < 1:
            raise DomainError("n must be positive")
        if self.kind == "mu1_at_shift":
            if self.shift is None:
                raise DomainError("mu1_at_shift needs a shift")
            check_shift(self.shift, self.n)
        if not 0.0 <= self.noise <= 0.5:
            raise DomainError("noise outside [0, 1/2]")


def _planted(n: int, i: int, noise: float, rng: np.random.Generator) -> ShapInstance:
    x1, x2, y1 = (BitString.random(n, rng) for _ in range(3))
    y2 = x1.shift(i) ^ x2 ^ y1.shift(i)
    return ShapInstance(noise_sample(x1, noise, rng), x2, y1, y2)


def sample(spec: DistributionSpec, rng: np.random.Generator) -> ShapInstance:
    n = spec.n
    kind = spec.kind
    if kind == "mu":
        kind = "mu1" if rng.integers(0, 2) else "mu0"
    if kind == "mu0":
        return ShapInstance.random(n, rng)
    if kind == "mu1":
        return _planted(n, int(rng.integers(0, n)), spec.noise, rng)
    return _planted(n, spec.shift, spec.noise, rng)


def sample_class_at(
    n: int, i: int, cls: PromiseClass, rng: np.random.Generator
) -> ShapInstance:
    """Random instance whose shift-``i`` weight is uniform over the weights of class ``cls``."""
    check_shift(i, n)
    weights = [w for w in range(n + 1) if classify_weight(w, n) is cls]
    if not weights:
        raise DomainError(f"no weight of class {cls} exists at n={n}")
    w = int(rng.choice(weights))
    x1, x2, y1 = (BitString.random(n, rng) for _ in range(3))
    err = BitString.with_weight(n, w, rng)
    return ShapInstance(x1, x2, y1, x1.shift(i) ^ x2 ^ y1.shift(i) ^ err)


def sample_zero_class(n: int, rng: np.random.Generator, max_tries: int = 10_000) -> ShapInstance:
    """A ShAp=0 instance: random ``x1, x2, y1`` and a ``y2`` accepted by rejection.

    For ``n <= 12`` the candidate ``x2 ^ y2`` differences are enumerated, so the
    result is uniform among valid completions of the sampled ``x1 ^ y1``.
    """
    if n <= 12:
        for _ in range(max_tries):
            x1, x2, y1 = (BitString.random(n, rng) for _ in range(3))
            d = (x1 ^ y1).to_array()
            valid = []
            for ev in range(1 << n):
                e = BitString(n, ev).to_array()
                w15 = 15 * _kernels.shift_weights(d, e)
                if np.all((w15 >= 7 * n) & (w15 <= 8 * n)):
                    valid.append(ev)
            if valid:
                ev = int(valid[int(rng.integers(0, len(valid)))])
                return ShapInstance(x1, x2, y1, x2 ^ BitString(n, ev))
        raise DomainError(f"no ShAp=0 instance found at n={n}")
    for _ in range(max_tries):
        inst = ShapInstance.random(n, rng)
        if classify(inst) is PromiseClass.ZERO:
            return inst
    raise DomainError(f"rejection sampling found no ShAp=0 instance at n={n}")


def mu1_tilde_density(inst: ShapInstance, i: int) -> Fraction:
    """Exact probability of ``inst`` under the noisy planted distribution at shift ``i``.

    Equals ``2**(-3n) * (3/8)**w * (5/8)**(n-w)`` with ``w = shift_xor_weight(inst, i)``.
    """
    n = inst.n
    w = shift_xor_weight(inst, i)
    return Fraction(3**w * 5 ** (n - w), 8**n * 2 ** (3 * n))


def mu1_tilde_density_via_noise(inst: ShapInstance, i: int) -> Fraction:
    """Same density computed as ``Pr[s(x1) ^ T(x2) = s(y1) ^ T(y2)] / 2**(3n)``.

    ``T`` flips each bit with probability 1/4, independently on both sides; the
    probability is summed over all noise patterns on one side (``n <= 16``).
    """
    n = inst.n
    if n > 16:
        raise DomainError("explicit noise enumeration is limited to n <= 16")
    target = (inst.shift_difference().shift(i) ^ inst.aligned_difference()).value
    quarter = Fraction(1, 4)
    total = Fraction(0)
    for z1 in range(1 << n):
        z2 = z1 ^ target
        a, b = z1.bit_count(), z2.bit_count()
        total += quarter**a * (1 - quarter) ** (n - a) * quarter**b * (1 - quarter) ** (n - b)
    return total / 2 ** (3 * n)
