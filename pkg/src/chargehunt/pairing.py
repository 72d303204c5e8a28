"""Pairing analysis on maximal-length commutator results.

A charge of length ``k`` commuted with a three-site term that sticks out by
two sites yields a ``(k+2)``-site string.  If no other (charge, placement)
pair produces the same string, the charge's coefficient is forced to zero.
The tables built here list every such result; "duplicated" results are the
ones reached by two or more distinct (charge, placement) pairs.
"""

from __future__ import annotations

import csv
import io
import re
from collections import defaultdict
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx

from .basis import PBC_CLASSES, ChargeBasis, enumerate_obc_basis, enumerate_pbc_basis
from .constraints import placements_for, sweep
from .models import HamiltonianSpec
from .pauli import PauliString, spatial_reflect, translate
from .scalars import format_rational

PBC = "pbc"
OBC_LEFT_MODE = "obc-left"

LEFT = "left"        # term sticks out past the charge's first site
RIGHT = "right"      # term sticks out past the charge's last site
INSIDE = "inside"


@dataclass(frozen=True)
class Cell:
    """One commutator ``[charge, coef * term] / 2i = value * result``."""

    charge: PauliString
    coef: Fraction
    term: PauliString     # placed term (absolute in open mode, charge at 0 otherwise)
    side: str
    result: PauliString
    value: Fraction

    @property
    def signed_term(self) -> str:
        return _signed(self.coef, self.term.word)

    @property
    def signed_result(self) -> str:
        return _signed(self.value, self.result.word)

    @property
    def column(self) -> Tuple[str, str]:
        return self.signed_term, self.side


def _signed(value: Fraction, word: str) -> str:
    if value == 1:
        return word
    if value == -1:
        return "-" + word
    return f"{format_rational(value)}*{word}"


@dataclass(frozen=True)
class GenerationTable:
    k: int
    mode: str
    cells: Tuple[Cell, ...]
    duplicates: frozenset

    def charges(self) -> List[PauliString]:
        seen: Dict[PauliString, None] = {}
        for c in self.cells:
            seen.setdefault(c.charge)
        return list(seen)

    def row(self, charge: PauliString) -> List[Cell]:
        return [c for c in self.cells if c.charge == charge]

    def is_duplicate(self, cell: Cell) -> bool:
        return cell.result in self.duplicates

    def generators(self) -> Dict[PauliString, List[Cell]]:
        out: Dict[PauliString, List[Cell]] = defaultdict(list)
        for c in self.cells:
            out[c.result].append(c)
        return out

    def self_paired(self) -> Set[PauliString]:
        """Charges reaching one result through two of their own placements."""
        out = set()
        for cells in self.generators().values():
            owners = [c.charge for c in cells]
            for ch in set(owners):
                if owners.count(ch) > 1:
                    out.add(ch)
        return out


def _structure(charge: PauliString) -> str:
    w = charge.word
    return w[0] + ".." + w[-1] if len(w) > 1 else w


def generation_table(k: int, spec: HamiltonianSpec, mode: str = PBC, n: Optional[int] = None) -> GenerationTable:
    """All ``(k+2)``-site results of ``[charge, term]`` over the charge basis."""
    if mode == PBC:
        basis = enumerate_pbc_basis(k)
    elif mode == OBC_LEFT_MODE:
        basis = enumerate_obc_basis(k, "left", n or max(2 * k, k + 4))
    else:
        raise ValueError(f"unknown table mode {mode!r}")
    placements = placements_for(basis, spec)
    col, term, rx, rz, ra, rl, sign = sweep(basis, placements)
    cells = []
    owners: Dict[PauliString, Set[Tuple[int, int]]] = defaultdict(set)
    for i in range(len(col)):
        if rl[i] != k + 2:
            continue
        ch = basis[int(col[i])]
        coef, p = placements[int(term[i])]
        res = PauliString(int(ra[i]), int(rl[i]), int(rx[i]), int(rz[i]))
        if basis.mode == PBC_CLASSES:
            res = translate(res, -res.anchor)
        if p.anchor < ch.anchor:
            side = LEFT
        elif p.end > ch.end:
            side = RIGHT
        else:
            side = INSIDE
        cells.append(Cell(ch, coef, p, side, res, coef * int(sign[i])))
        owners[res].add((int(col[i]), int(term[i])))
    dups = frozenset(r for r, o in owners.items() if len(o) >= 2)
    return GenerationTable(k, mode, tuple(cells), dups)


class Case(IntEnum):
    CASE1 = 1
    CASE2 = 2
    CASE3 = 3


def classify_cases(k: int, spec: HamiltonianSpec, table: Optional[GenerationTable] = None) -> Dict[PauliString, Case]:
    """Case of every length-``k`` charge (a charge with no maximal result is Case 1)."""
    table = table or generation_table(k, spec, PBC)
    rows: Dict[PauliString, List[bool]] = defaultdict(list)
    for c in table.cells:
        rows[c.charge].append(table.is_duplicate(c))
    out: Dict[PauliString, Case] = {}
    for ch in enumerate_pbc_basis(k):
        if ch.length != k:
            continue
        marks = rows.get(ch, [])
        if marks and all(marks):
            out[ch] = Case.CASE3
        elif any(marks):
            out[ch] = Case.CASE2
        else:
            out[ch] = Case.CASE1
    return out


# Valid boundary sequences.  A = XY | YX is the repeating pair; the left
# heads are XX, YY, Z, and Z A^p (XZY | YZX); right tails are the mirror
# images.  A whole string is valid when it is head + A^n + tail.
_PAIR = "(?:XY|YX)"
_HEAD = f"(?:XX|YY|Z|Z{_PAIR}*(?:XZY|YZX))"
_TAIL = f"(?:XX|YY|Z|(?:YZX|XZY){_PAIR}*Z)"
_VALID = re.compile(f"^{_HEAD}{_PAIR}*{_TAIL}$")


def boundary_sequence_valid(s: PauliString) -> Tuple[bool, bool]:
    """``(left_ok, right_ok)``: the string parsed from its left and from its right end.

    The pattern family is closed under reflection, so both directions give
    the same verdict; they are reported separately for symmetry with the
    left/right ansatz.
    """
    if s.length < 3:
        raise ValueError("boundary sequences are defined for strings of length >= 3")
    left_ok = bool(_VALID.match(s.word))
    right_ok = bool(_VALID.match(spatial_reflect(s).word))
    return left_ok, right_ok


def pair_graph(k: int, spec: HamiltonianSpec, subset: Optional[Iterable[PauliString]] = None,
               table: Optional[GenerationTable] = None) -> nx.Graph:
    """Charges joined when they generate a common maximal-length result.

    Nodes default to the Case-3 charges; node attribute ``self_pair`` marks
    charges that reach one result through two of their own placements.
    """
    table = table or generation_table(k, spec, PBC)
    if subset is None:
        cases = classify_cases(k, spec, table)
        nodes = [c for c, v in cases.items() if v == Case.CASE3]
    else:
        nodes = list(subset)
    keep = set(nodes)
    g = nx.Graph()
    selfp = table.self_paired()
    for ch in nodes:
        g.add_node(ch, self_pair=ch in selfp)
    for res, cells in table.generators().items():
        owners = sorted({c.charge for c in cells if c.charge in keep}, key=lambda p: p.word)
        for i, a in enumerate(owners):
            for b in owners[i + 1:]:
                g.add_edge(a, b)
    return g


def relations(table: GenerationTable, charges: Iterable[PauliString]) -> List[Tuple[PauliString, Dict[str, Fraction]]]:
    """Linear relations ``sum value * q_charge = 0`` from results generated only by ``charges``."""
    keep = set(charges)
    out = []
    for res, cells in sorted(table.generators().items(), key=lambda kv: kv[0].word):
        if not all(c.charge in keep for c in cells):
            continue
        rel: Dict[str, Fraction] = defaultdict(Fraction)
        for c in cells:
            rel[c.charge.word] += c.value
        out.append((res, dict(sorted(rel.items()))))
    return out


def format_relation(rel: Mapping[str, Fraction]) -> str:
    parts = []
    for word, v in rel.items():
        if v == 0:
            continue
        mag = abs(v)
        coef = "" if mag == 1 else format_rational(mag) + "*"
        parts.append(("-" if v < 0 else "+") + coef + "q_" + word)
    text = "".join(parts) or "0"
    return (text[1:] if text.startswith("+") else text) + " = 0"


# -- emission ---------------------------------------------------------------


def _columns(cells: Sequence[Cell]) -> List[Tuple[str, str]]:
    cols: Dict[Tuple[str, str], None] = {}
    for c in sorted(cells, key=lambda c: (c.side, c.term.word, c.coef)):
        cols.setdefault(c.column)
    return list(cols)


def group_by_structure(table: GenerationTable) -> Dict[str, List[Cell]]:
    out: Dict[str, List[Cell]] = defaultdict(list)
    for c in table.cells:
        out[_structure(c.charge)].append(c)
    return dict(sorted(out.items(), key=lambda kv: ["XYZ".index(ch) for ch in kv[0][::3]]))


def table_csv(table: GenerationTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["structure", "charge", "term", "side", "result", "duplicate"])
    for struct, cells in group_by_structure(table).items():
        for c in cells:
            w.writerow([struct, c.charge.word, c.signed_term, c.side, c.signed_result, int(table.is_duplicate(c))])
    return buf.getvalue()


def table_text(table: GenerationTable) -> str:
    """Aligned text, one block per charge structure; duplicated results end in ``*``."""
    blocks = []
    for struct, cells in group_by_structure(table).items():
        cols = _columns(cells)
        head = ["charge"] + [f"{t}({s[0].upper()})" for t, s in cols]
        body = []
        charges: Dict[PauliString, Dict[Tuple[str, str], List[str]]] = {}
        for c in cells:
            slot = charges.setdefault(c.charge, defaultdict(list))
            slot[c.column].append(c.signed_result + ("*" if table.is_duplicate(c) else ""))
        for ch, slot in charges.items():
            body.append([ch.word] + [" ".join(slot.get(col, ["~"])) for col in cols])
        widths = [max(len(r[i]) for r in [head] + body) for i in range(len(head))]
        lines = [f"[{struct}]"]
        for r in [head] + body:
            lines.append("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip())
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
