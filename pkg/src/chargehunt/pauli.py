"""Single Pauli strings in symplectic form.

A string is stored as an anchor site plus two bit masks relative to that
anchor: bit ``i`` of ``x`` (``z``) is set iff the factor on site
``anchor + i`` has an X (Z) component.  ``(x, z) = (1, 1)`` is Y.  Both
endpoints of a non-identity string are non-identity, so ``length`` is the
span of the support.  The identity is the distinguished ``IDENTITY`` value
with ``length == 0``.

Products follow ``XY = iZ``, ``YZ = iX``, ``ZX = iY`` and commutators are
``[A, B] = AB - BA``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

from .scalars import Gauss

SYMBOLS = "IXYZ"
# symbol -> (x bit, z bit)
_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
# (x bit, z bit) -> ordering code with I < X < Y < Z
_CODE = {(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}


@dataclass(frozen=True, slots=True)
class PauliString:
    anchor: int
    length: int
    x: int
    z: int

    def __post_init__(self) -> None:
        if self.length == 0:
            if self.x or self.z:
                raise ValueError("identity must have empty masks")
            return
        if self.length < 0:
            raise ValueError("negative length")
        support = self.x | self.z
        if support >> self.length:
            raise ValueError("mask bits beyond length")
        if not (support & 1) or not (support >> (self.length - 1)) & 1:
            raise ValueError("endpoints of a Pauli string must be non-identity")

    @classmethod
    def from_word(cls, word: str, anchor: int = 0) -> "PauliString":
        """Build from a symbol word such as ``"ZXYZ"``; endpoints must not be I."""
        x = z = 0
        for i, ch in enumerate(word.upper()):
            try:
                bx, bz = _BITS[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli symbol {ch!r} in {word!r}") from None
            x |= bx << i
            z |= bz << i
        if not word:
            return IDENTITY
        return cls(anchor, len(word), x, z)

    @classmethod
    def from_masks(cls, x: int, z: int, anchor: int = 0) -> "PauliString":
        """Trim identity tails off raw masks placed at ``anchor``."""
        support = x | z
        if not support:
            return IDENTITY
        tz = (support & -support).bit_length() - 1
        x >>= tz
        z >>= tz
        return cls(anchor + tz, (x | z).bit_length(), x, z)

    @property
    def is_identity(self) -> bool:
        return self.length == 0

    @property
    def end(self) -> int:
        """Last occupied site (inclusive)."""
        return self.anchor + self.length - 1

    @property
    def word(self) -> str:
        return "".join(self.symbol(i) for i in range(self.length)) if self.length else "I"

    def symbol(self, i: int) -> str:
        """Symbol at offset ``i`` from the anchor."""
        return SYMBOLS[_CODE[((self.x >> i) & 1, (self.z >> i) & 1)]]

    def sites(self) -> Tuple[int, ...]:
        s = self.x | self.z
        return tuple(self.anchor + i for i in range(self.length) if (s >> i) & 1)

    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def __str__(self) -> str:
        return f"{self.word}@{self.anchor}" if self.length else "I"

    def __repr__(self) -> str:
        return f"PauliString({self})"


IDENTITY = PauliString(0, 0, 0, 0)


class PhasedString(NamedTuple):
    """``i**phase * string`` with ``phase`` reduced mod 4."""

    phase: int
    string: PauliString

    def coefficient(self) -> Gauss:
        return Gauss.i_power(self.phase)

    def __str__(self) -> str:
        return f"{('+1', '+i', '-1', '-i')[self.phase]}*{self.string}"


_TEXT = re.compile(r"^\s*([IXYZixyz]+)\s*(?:@\s*(-?\d+))?\s*$")


def parse_pauli(text: str) -> PauliString:
    """Parse ``"ZXYZ@3"`` (anchor defaults to 0)."""
    m = _TEXT.match(text)
    if not m:
        raise ValueError(f"cannot parse Pauli string {text!r}")
    word = m.group(1).upper()
    anchor = int(m.group(2) or 0)
    if word == "I":
        return IDENTITY
    return PauliString.from_word(word, anchor)


def _aligned(p: PauliString, q: PauliString) -> Tuple[int, int, int, int, int]:
    base = min(p.anchor, q.anchor)
    sp = p.anchor - base
    sq = q.anchor - base
    return base, p.x << sp, p.z << sp, q.x << sq, q.z << sq


def product_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent ``m`` with ``P(x1,z1) P(x2,z2) = i**m P(x1^x2, z1^z2)``."""
    x = x1 ^ x2
    z = z1 ^ z2
    return ((x1 & z1).bit_count() + (x2 & z2).bit_count()
            + 2 * (z1 & x2).bit_count() - (x & z).bit_count()) & 3


def mul(p: PauliString, q: PauliString) -> PhasedString:
    """Operator product ``p @ q`` on the infinite lattice."""
    if p.is_identity:
        return PhasedString(0, q)
    if q.is_identity:
        return PhasedString(0, p)
    base, x1, z1, x2, z2 = _aligned(p, q)
    m = product_phase(x1, z1, x2, z2)
    return PhasedString(m, PauliString.from_masks(x1 ^ x2, z1 ^ z2, base))


def anticommute(p: PauliString, q: PauliString) -> bool:
    if p.is_identity or q.is_identity:
        return False
    _, x1, z1, x2, z2 = _aligned(p, q)
    return bool(((x1 & z2) ^ (z1 & x2)).bit_count() & 1)


def commutator(p: PauliString, q: PauliString) -> Optional[Tuple[Gauss, PauliString]]:
    """``[p, q]`` as ``(coef, R)`` with ``coef = 2 i**m``, or ``None`` if they commute."""
    if not anticommute(p, q):
        return None
    m, r = mul(p, q)
    return Gauss.i_power(m) * 2, r


def translate(p: PauliString, d: int, n: Optional[int] = None) -> PauliString:
    if p.is_identity:
        return p
    anchor = p.anchor + d
    if n is not None:
        anchor %= n
    return PauliString(anchor, p.length, p.x, p.z)


def _reverse_bits(v: int, width: int) -> int:
    return int(format(v, f"0{width}b")[::-1], 2) if width else 0


def spatial_reflect(p: PauliString) -> PauliString:
    """Reverse the factor order; the anchor is kept."""
    if p.is_identity:
        return p
    return PauliString(p.anchor, p.length, _reverse_bits(p.x, p.length), _reverse_bits(p.z, p.length))


def symbol_codes(p: PauliString) -> Tuple[int, ...]:
    return tuple(_CODE[((p.x >> i) & 1, (p.z >> i) & 1)] for i in range(p.length))


def canonical_key(p: PauliString) -> Tuple[int, Tuple[int, ...], int]:
    """Total order: length, then symbols (I<X<Y<Z), then anchor."""
    return (p.length, symbol_codes(p), p.anchor)
