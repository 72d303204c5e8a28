"""Candidate-charge bases: translation classes (periodic) or edge-anchored strings (open)."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterator, List, Tuple

from .pauli import PauliString, canonical_key

PBC_CLASSES = "pbc-classes"
OBC_LEFT = "obc-left"
OBC_RIGHT = "obc-right"

_EDGE = ((1, 0), (1, 1), (0, 1))          # X, Y, Z
_ANY = ((0, 0), (1, 0), (1, 1), (0, 1))   # I, X, Y, Z


def pbc_basis_size(k: int) -> int:
    return 3 + sum(9 * 4 ** (l - 2) for l in range(2, k + 1)) if k >= 1 else 0


def strings_of_length(l: int, anchor: int = 0) -> Iterator[PauliString]:
    """All strings spanning exactly ``l`` sites, in canonical order."""
    if l == 1:
        for bx, bz in _EDGE:
            yield PauliString(anchor, 1, bx, bz)
        return
    for first in _EDGE:
        for middle in product(_ANY, repeat=l - 2):
            for last in _EDGE:
                x = z = 0
                for i, (bx, bz) in enumerate((first, *middle, last)):
                    x |= bx << i
                    z |= bz << i
                yield PauliString(anchor, l, x, z)


@dataclass(frozen=True)
class ChargeBasis:
    mode: str
    k: int
    elements: Tuple[PauliString, ...]
    n: int = 0
    index: Dict[PauliString, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", {e: i for i, e in enumerate(self.elements)})
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate basis elements")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int) -> PauliString:
        return self.elements[i]

    def of_length(self, l: int) -> List[int]:
        return [i for i, e in enumerate(self.elements) if e.length == l]

    def permuted(self, order) -> "ChargeBasis":
        return ChargeBasis(self.mode, self.k, tuple(self.elements[i] for i in order), self.n)


def enumerate_pbc_basis(k: int) -> ChargeBasis:
    if k < 1:
        raise ValueError("k must be at least 1")
    elems = [p for l in range(1, k + 1) for p in strings_of_length(l)]
    elems.sort(key=canonical_key)
    return ChargeBasis(PBC_CLASSES, k, tuple(elems))


def enumerate_obc_basis(k: int, side: str, n: int) -> ChargeBasis:
    """Strings starting at site 1 (``left``) or ending at site ``n`` (``right``)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if n < 2 * k:
        raise ValueError(f"open chain needs N >= 2k (N={n}, k={k})")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    elems = []
    for l in range(1, k + 1):
        anchor = 1 if side == "left" else n - l + 1
        elems.extend(strings_of_length(l, anchor))
    elems.sort(key=canonical_key)
    return ChargeBasis(OBC_LEFT if side == "left" else OBC_RIGHT, k, tuple(elems), n)
