"""Weighted sums of Pauli strings with exact Gaussian-rational coefficients."""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

from .pauli import PauliString, canonical_key, commutator, mul, product_phase, translate
from .scalars import Gauss, Number

Term = Tuple[Gauss, PauliString]


class ChainTooShort(ValueError):
    """Raised when a finite chain cannot hold the requested placements."""


class OperatorSum:
    """Canonical operator: sorted by ``canonical_key``, unique strings, no zeros."""

    __slots__ = ("terms",)

    def __init__(self, terms: Tuple[Term, ...] = ()):
        self.terms = terms

    @classmethod
    def single(cls, string: PauliString, coef: Number = 1) -> "OperatorSum":
        return canonicalize([(coef, string)])

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> Dict[PauliString, Gauss]:
        return {p: c for c, p in self.terms}

    def coefficient(self, string: PauliString) -> Gauss:
        for c, p in self.terms:
            if p == string:
                return c
        return Gauss(0)

    def __add__(self, other: "OperatorSum") -> "OperatorSum":
        return canonicalize(list(self.terms) + list(other.terms))

    def __sub__(self, other: "OperatorSum") -> "OperatorSum":
        return self + other.scale(-1)

    def __neg__(self) -> "OperatorSum":
        return self.scale(-1)

    def scale(self, factor: Number) -> "OperatorSum":
        f = Gauss.coerce(factor)
        if f.is_zero():
            return OperatorSum()
        return OperatorSum(tuple((c * f, p) for c, p in self.terms))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OperatorSum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def is_hermitian(self) -> bool:
        return all(c.is_real() for c, _ in self.terms)

    def max_length(self) -> int:
        return max((p.length for _, p in self.terms), default=0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{p}" for c, p in self.terms)

    def __repr__(self) -> str:
        return f"OperatorSum({self})"


def canonicalize(raw: Iterable[Tuple[Number, PauliString]]) -> OperatorSum:
    """Merge duplicate strings, drop zeros, sort by canonical key."""
    acc: Dict[PauliString, Gauss] = {}
    for coef, p in raw:
        c = Gauss.coerce(coef)
        if p in acc:
            acc[p] = acc[p] + c
        else:
            acc[p] = c
    items = sorted(((c, p) for p, c in acc.items() if not c.is_zero()), key=lambda t: canonical_key(t[1]))
    return OperatorSum(tuple(items))


def op_product(a: OperatorSum, b: OperatorSum) -> OperatorSum:
    raw = []
    for ca, pa in a:
        for cb, pb in b:
            m, r = mul(pa, pb)
            raw.append((ca * cb * Gauss.i_power(m), r))
    return canonicalize(raw)


def op_commutator(a: OperatorSum, b: OperatorSum) -> OperatorSum:
    """``[A, B]`` expanded bilinearly over string commutators."""
    raw = []
    for ca, pa in a:
        for cb, pb in b:
            c = commutator(pa, pb)
            if c is not None:
                coef, r = c
                raw.append((ca * cb * coef, r))
    return canonicalize(raw)


class ClassVector(dict):
    """Map from translation-class representative (anchor 0) to coefficient."""

    def __setitem__(self, key: PauliString, value: Gauss) -> None:
        if key.anchor != 0 or key.is_identity:
            raise ValueError(f"class representative must be anchored at 0: {key}")
        super().__setitem__(key, value)

    @classmethod
    def from_mapping(cls, mapping: Mapping[PauliString, Number]) -> "ClassVector":
        out = cls()
        for key in sorted(mapping, key=canonical_key):
            value = Gauss.coerce(mapping[key])
            if not value.is_zero():
                out[key] = value
        return out

    def sorted_items(self):
        return sorted(self.items(), key=lambda kv: canonical_key(kv[0]))

    def __str__(self) -> str:
        return "{" + ", ".join(f"{p.word}: {c}" for p, c in self.sorted_items()) + "}"


def class_reduce(op: OperatorSum, n: Optional[int] = None) -> ClassVector:
    """Re-anchor every term to 0 and accumulate per translation class.

    With ``n`` given, terms of one class whose anchors coincide mod ``n``
    (or strings longer than ``n``) raise ``ChainTooShort``.
    """
    acc: Dict[PauliString, Gauss] = defaultdict(lambda: Gauss(0))
    seen: Dict[PauliString, set] = defaultdict(set)
    for c, p in op:
        rep = translate(p, -p.anchor)
        if n is not None:
            if p.length > n:
                raise ChainTooShort(f"{p} does not fit on {n} sites")
            a = p.anchor % n
            if a in seen[rep]:
                raise ChainTooShort(f"two placements of {rep.word} collide mod {n}")
            seen[rep].add(a)
        acc[rep] = acc[rep] + c
    return ClassVector.from_mapping(acc)


def lift_class_vector(vec: Mapping[PauliString, Number], n: int, start: int = 0) -> OperatorSum:
    """Sum each class representative over all ``n`` ring positions (anchors mod ``n``)."""
    raw = []
    for rep, coef in vec.items():
        if rep.length > n:
            raise ChainTooShort(f"{rep.word} does not fit on {n} sites")
        for j in range(n):
            raw.append((coef, translate(rep, start + j - rep.anchor)))
    return ring_canonicalize(raw, n)


# -- finite periodic rings ---------------------------------------------------
# A ring string keeps anchor in [0, n) and may run past site n-1; sites are
# read mod n.  The representative is the rotation with the shortest span.


def _ring_masks(p: PauliString, n: int) -> Tuple[int, int]:
    if p.length > n:
        raise ChainTooShort(f"{p} does not fit on {n} sites")
    full = (1 << n) - 1
    a = p.anchor % n
    x = ((p.x << a) | (p.x << a >> n)) & full
    z = ((p.z << a) | (p.z << a >> n)) & full
    return x, z


def _ring_string(x: int, z: int, n: int) -> PauliString:
    s = x | z
    if not s:
        return PauliString.from_masks(0, 0)
    pos = [i for i in range(n) if (s >> i) & 1]
    best_gap, best_start = -1, 0
    for i, p in enumerate(pos):
        nxt = pos[(i + 1) % len(pos)]
        gap = (nxt - p - 1) % n if len(pos) > 1 else n - 1
        if gap > best_gap or (gap == best_gap and nxt < best_start):
            best_gap, best_start = gap, nxt
    full = (1 << n) - 1
    rx = ((x >> best_start) | (x << (n - best_start))) & full
    rz = ((z >> best_start) | (z << (n - best_start))) & full
    return PauliString(best_start, n - best_gap, rx, rz)


def ring_canonical(p: PauliString, n: int) -> PauliString:
    if p.is_identity:
        return p
    return _ring_string(*_ring_masks(p, n), n)


def ring_canonicalize(raw: Iterable[Tuple[Number, PauliString]], n: int) -> OperatorSum:
    return canonicalize((c, ring_canonical(p, n)) for c, p in raw)


def ring_commutator(a: OperatorSum, b: OperatorSum, n: int) -> OperatorSum:
    """``[A, B]`` on a periodic chain of ``n`` sites."""
    bm = [(cb, *_ring_masks(pb, n)) for cb, pb in b]
    raw = []
    for ca, pa in a:
        x1, z1 = _ring_masks(pa, n)
        for cb, x2, z2 in bm:
            if ((x1 & z2) ^ (z1 & x2)).bit_count() & 1:
                m = product_phase(x1, z1, x2, z2)
                raw.append((ca * cb * Gauss.i_power(m) * 2, _ring_string(x1 ^ x2, z1 ^ z2, n)))
    return canonicalize(raw)
