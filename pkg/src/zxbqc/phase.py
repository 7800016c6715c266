"""Exact dyadic phases ``num * pi / 2**k`` reduced modulo ``2*pi``."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

_PHASE_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(?:2\s*\^\s*(\d+)|(\d+)))?\s*$")


class PhaseError(ValueError):
    """Raised for phases that are not dyadic multiples of pi."""


@dataclass(frozen=True, order=True)
class Phase:
    """A phase ``num * pi / 2**k`` in canonical form.

    ``num`` lies in ``[0, 2**(k+1))`` and is odd unless ``k == 0``.
    """

    num: int = 0
    k: int = 0

    def __post_init__(self) -> None:
        if self.k < 0:
            raise PhaseError("negative denominator power")
        num, k = self.num % (2 ** (self.k + 1)), self.k
        while k > 0 and num % 2 == 0:
            num //= 2
            k -= 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "k", k)

    @classmethod
    def zero(cls) -> Phase:
        return cls(0, 0)

    @classmethod
    def pi(cls) -> Phase:
        return cls(1, 0)

    @classmethod
    def from_fraction(cls, value: Fraction) -> Phase:
        """Phase ``value * pi``; the denominator must be a power of two."""
        den = value.denominator
        if den & (den - 1):
            raise PhaseError(f"denominator {den} is not a power of two")
        return cls(value.numerator, den.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> Phase:
        """Parse ``"num"``, ``"num/den"`` or ``"num/2^k"`` (units of pi)."""
        m = _PHASE_RE.match(str(text))
        if not m:
            raise PhaseError(f"cannot parse phase {text!r}")
        num = int(m.group(1))
        if m.group(2) is not None:
            return cls(num, int(m.group(2)))
        if m.group(3) is not None:
            if int(m.group(3)) == 0:
                raise PhaseError(f"zero denominator in {text!r}")
            return cls.from_fraction(Fraction(num, int(m.group(3))))
        return cls(num, 0)

    def fraction(self) -> Fraction:
        return Fraction(self.num, 2**self.k)

    def radians(self) -> float:
        return math.pi * self.num / 2**self.k

    def at(self, k: int) -> int:
        """Numerator over ``2**k``; ``k`` must be at least ``self.k``."""
        if k < self.k:
            raise PhaseError(f"phase {self} needs denominator 2^{self.k} > 2^{k}")
        return self.num << (k - self.k)

    def is_pauli(self) -> bool:
        return self.k == 0

    def __add__(self, other: Phase) -> Phase:
        k = max(self.k, other.k)
        return Phase(self.at(k) + other.at(k), k)

    def __neg__(self) -> Phase:
        return Phase(-self.num, self.k)

    def __sub__(self, other: Phase) -> Phase:
        return self + (-other)

    def __str__(self) -> str:
        return f"{self.num}/2^{self.k}"


def parse_phase(text: str | Phase) -> Phase:
    return text if isinstance(text, Phase) else Phase.parse(text)
