"""Built-in Hamiltonians and the line-oriented model file format.

File format (UTF-8, ``#`` starts a comment)::

    bc periodic|open
    bulk   <rational> <pauli-word>    # density, summed over every site j
    bleft  <rational> <pauli-word>    # open chains: placed at site 1
    bright <rational> <pauli-word>    # open chains: placed so it ends at site N

Rationals are integers or ``p/q``.  Sites of open chains are numbered
``1..N``; periodic rings use ``0..n-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .operators import OperatorSum, canonicalize, ring_canonicalize
from .pauli import PauliString, translate
from .scalars import format_rational, parse_rational

PERIODIC = "periodic"
OPEN = "open"

Density = Tuple[Fraction, PauliString]

# Three-site terms in mask-bit order (leftmost mask character first).
FREDKIN_THREE_SITE: Tuple[Tuple[int, str], ...] = ((1, "XXZ"), (1, "YYZ"), (-1, "ZXX"), (-1, "ZYY"))
HEISENBERG: Tuple[Tuple[int, str], ...] = ((-2, "XX"), (-2, "YY"), (-2, "ZZ"))
DEFAULT_BOUNDARY = (Fraction(-1, 2), Fraction(1, 2))


class ModelFormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class HamiltonianSpec:
    bulk: Tuple[Density, ...]
    bc: str = PERIODIC
    boundary_left: Tuple[Density, ...] = ()
    boundary_right: Tuple[Density, ...] = ()
    truncation_mask: Optional[str] = None
    name: str = "custom"

    def __post_init__(self) -> None:
        if self.bc not in (PERIODIC, OPEN):
            raise ValueError(f"unknown boundary condition {self.bc!r}")
        if self.bc == PERIODIC and (self.boundary_left or self.boundary_right):
            raise ValueError("boundary terms are only allowed with bc=open")
        for c, p in self.bulk:
            if not c:
                raise ValueError("zero coefficient in bulk")
            if p.anchor != 0:
                raise ValueError("bulk density terms must be anchored at 0")

    @property
    def max_range(self) -> int:
        return max((p.length for _, p in self.bulk), default=0)

    def is_hermitian(self) -> bool:
        # coefficients are Fractions, hence real
        return all(isinstance(c, Fraction) for c, _ in self.bulk + self.boundary_left + self.boundary_right)

    def descriptor(self) -> dict:
        return {
            "name": self.name,
            "bc": self.bc,
            "mask": self.truncation_mask,
            "bulk": [[format_rational(c), p.word] for c, p in self.bulk],
            "boundary_left": [[format_rational(c), p.word] for c, p in self.boundary_left],
            "boundary_right": [[format_rational(c), p.word] for c, p in self.boundary_right],
        }

    def with_boundary(self, left: Fraction, right: Fraction) -> "HamiltonianSpec":
        """Open chain with ``left*Z_1 + right*Z_N`` as the boundary field."""
        bl = ((Fraction(left), PauliString.from_word("Z", 1)),) if left else ()
        br = ((Fraction(right), PauliString.from_word("Z")),) if right else ()
        return HamiltonianSpec(self.bulk, OPEN, bl, br, self.truncation_mask, self.name)

    def periodic(self) -> "HamiltonianSpec":
        return HamiltonianSpec(self.bulk, PERIODIC, (), (), self.truncation_mask, self.name)


def normalize_mask(mask: Union[str, int]) -> str:
    if isinstance(mask, int):
        if not 0 <= mask < 16:
            raise ValueError(f"mask out of range: {mask}")
        return format(mask, "04b")
    mask = mask.strip()
    if len(mask) != 4 or set(mask) - {"0", "1"}:
        raise ValueError(f"mask must be four binary digits, got {mask!r}")
    return mask


def _terms(pairs: Sequence[Tuple[int, str]]) -> List[Density]:
    return [(Fraction(c), PauliString.from_word(w)) for c, w in pairs]


def fredkin_bulk(mask: Union[str, int] = "1111") -> Tuple[Density, ...]:
    """Heisenberg part plus the three-site terms selected by ``mask``."""
    mask = normalize_mask(mask)
    chosen = [t for bit, t in zip(mask, FREDKIN_THREE_SITE) if bit == "1"]
    return tuple(_terms(list(HEISENBERG) + chosen))


def fredkin_obc_boundary() -> Tuple[Tuple[Density, ...], Tuple[Density, ...]]:
    """Pauli form of the projectors |dn><dn|_1 + |up><up|_N without identity."""
    left = ((DEFAULT_BOUNDARY[0], PauliString.from_word("Z", 1)),)
    right = ((DEFAULT_BOUNDARY[1], PauliString.from_word("Z")),)
    return left, right


def fredkin(mask: Union[str, int] = "1111", bc: str = PERIODIC,
            boundary: Tuple[Fraction, Fraction] = DEFAULT_BOUNDARY) -> HamiltonianSpec:
    mask = normalize_mask(mask)
    name = "fredkin" if mask == "1111" else ("xxx" if mask == "0000" else f"fredkin-{mask}")
    spec = HamiltonianSpec(fredkin_bulk(mask), PERIODIC, truncation_mask=mask, name=name)
    if bc == OPEN:
        spec = spec.with_boundary(*boundary)
    return spec


def xxx(bc: str = PERIODIC) -> HamiltonianSpec:
    spec = HamiltonianSpec(tuple(_terms(HEISENBERG)), PERIODIC, truncation_mask="0000", name="xxx")
    if bc == OPEN:
        spec = HamiltonianSpec(spec.bulk, OPEN, truncation_mask="0000", name="xxx")
    return spec


BUILTIN = ("fredkin", "xxx")


def builtin_model(name: str, mask: Optional[str] = None, bc: str = PERIODIC,
                  boundary: Tuple[Fraction, Fraction] = DEFAULT_BOUNDARY) -> HamiltonianSpec:
    if name == "fredkin":
        return fredkin(mask or "1111", bc, boundary)
    if name == "xxx":
        if mask not in (None, "0000"):
            raise ValueError("xxx takes no truncation mask")
        return xxx(bc)
    raise ValueError(f"unknown model {name!r}; built-ins are {', '.join(BUILTIN)}")


# -- placement on finite chains ---------------------------------------------


def placed_terms(spec: HamiltonianSpec, n: int) -> List[Density]:
    """Every term of the Hamiltonian on a concrete chain of ``n`` sites.

    Periodic anchors run over ``0..n-1`` and may wrap; open chains use
    sites ``1..n`` and keep only placements that fit.
    """
    out: List[Density] = []
    if spec.bc == PERIODIC:
        for c, p in spec.bulk:
            if p.length > n:
                raise ValueError(f"term {p.word} longer than chain ({n})")
            out.extend((c, translate(p, j)) for j in range(n))
        return out
    for c, p in spec.bulk:
        out.extend((c, translate(p, j)) for j in range(1, n - p.length + 2))
    for c, p in spec.boundary_left:
        if p.end > n:
            raise ValueError("left boundary term does not fit")
        out.append((c, p))
    for c, p in spec.boundary_right:
        out.append((c, translate(p, n - p.length + 1 - p.anchor)))
    return out


def hamiltonian_operator(spec: HamiltonianSpec, n: int) -> OperatorSum:
    terms = placed_terms(spec, n)
    if spec.bc == PERIODIC:
        return ring_canonicalize(terms, n)
    return canonicalize(terms)


# -- text format -------------------------------------------------------------


def render_model(spec: HamiltonianSpec) -> str:
    lines = [f"# {spec.name}"]
    if spec.truncation_mask is not None:
        lines.append(f"# mask {spec.truncation_mask}")
    lines.append(f"bc {spec.bc}")
    for kw, terms in (("bulk", spec.bulk), ("bleft", spec.boundary_left), ("bright", spec.boundary_right)):
        lines.extend(f"{kw} {format_rational(c)} {p.word}" for c, p in terms)
    return "\n".join(lines) + "\n"


def parse_model_file(text: str, name: str = "custom") -> HamiltonianSpec:
    bc = PERIODIC
    bc_seen = False
    mask: Optional[str] = None
    sections = {"bulk": [], "bleft": [], "bright": []}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line, _, comment = raw.partition("#")
        comment = comment.strip()
        if not line.strip() and comment:
            # metadata comments written by render_model
            if comment.startswith("mask ") and len(comment.split()) == 2:
                mask = normalize_mask(comment.split()[1])
            elif lineno == 1:
                name = comment
        parts = line.split()
        if not parts:
            continue
        kw = parts[0].lower()
        if kw == "bc":
            if len(parts) != 2 or parts[1] not in (PERIODIC, OPEN):
                raise ModelFormatError("expected 'bc periodic' or 'bc open'", lineno)
            if bc_seen:
                raise ModelFormatError("duplicate bc line", lineno)
            bc, bc_seen = parts[1], True
            continue
        if kw not in sections:
            raise ModelFormatError(f"unknown keyword {parts[0]!r}", lineno)
        if len(parts) != 3:
            raise ModelFormatError(f"expected '{kw} <rational> <pauli-word>'", lineno)
        try:
            coef = parse_rational(parts[1])
        except (ValueError, ZeroDivisionError):
            raise ModelFormatError(f"bad rational {parts[1]!r}", lineno) from None
        if coef == 0:
            raise ModelFormatError("zero coefficient", lineno)
        word = parts[2].upper()
        try:
            p = PauliString.from_word(word, 1 if kw == "bleft" else 0)
        except ValueError as exc:
            raise ModelFormatError(str(exc), lineno) from None
        sections[kw].append((lineno, coef, p))
    if bc == PERIODIC and (sections["bleft"] or sections["bright"]):
        line = min(t[0] for t in sections["bleft"] + sections["bright"])
        raise ModelFormatError("boundary terms present under bc periodic", line)
    if not sections["bulk"]:
        raise ModelFormatError("model has no bulk terms")
    try:
        return HamiltonianSpec(
            tuple((c, p) for _, c, p in sections["bulk"]),
            bc,
            tuple((c, p) for _, c, p in sections["bleft"]),
            tuple((c, p) for _, c, p in sections["bright"]),
            mask,
            name,
        )
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None
