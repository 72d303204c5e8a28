"""Assemble the exact linear system ``r = M q`` from ``[Q, H] = 0``.

Columns are charge-basis elements; rows are the distinct strings generated
by commuting a basis element with a Hamiltonian term (translation classes on
the infinite chain for periodic models, absolute strings for open ones).
The universal factor ``2i`` is divided out, so every entry is rational.
Rows are discovered from the generated strings only; the full
``(k+2)``-local string space is never enumerated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from . import _accel
from .basis import PBC_CLASSES, ChargeBasis
from .models import OPEN, PERIODIC, HamiltonianSpec, placed_terms
from .pauli import PauliString, translate
from .scalars import format_rational


@dataclass
class ConstraintMatrix:
    """Sparse rational matrix; entry value is ``num / scale``.

    ``row_x``, ``row_z``, ``row_anchor`` and ``row_len`` describe the row
    strings (anchor 0 in class mode).  Entries are sorted by (row, col).
    """

    basis: ChargeBasis
    row_x: np.ndarray
    row_z: np.ndarray
    row_anchor: np.ndarray
    row_len: np.ndarray
    ent_row: np.ndarray
    ent_col: np.ndarray
    ent_num: np.ndarray
    scale: int = 1
    _row_strings: Optional[List[PauliString]] = field(default=None, repr=False)
    _row_index: Optional[Dict[PauliString, int]] = field(default=None, repr=False)

    @property
    def n_rows(self) -> int:
        return len(self.row_x)

    @property
    def n_cols(self) -> int:
        return len(self.basis)

    @property
    def nnz(self) -> int:
        return len(self.ent_num)

    @property
    def rows(self) -> List[PauliString]:
        if self._row_strings is None:
            self._row_strings = [
                PauliString(int(a), int(l), int(x), int(z))
                for x, z, a, l in zip(self.row_x, self.row_z, self.row_anchor, self.row_len)
            ]
        return self._row_strings

    def row_of(self, string: PauliString) -> Optional[int]:
        if self._row_index is None:
            self._row_index = {p: i for i, p in enumerate(self.rows)}
        if self.basis.mode == PBC_CLASSES:
            string = translate(string, -string.anchor)
        return self._row_index.get(string)

    def value(self, num: int) -> Fraction:
        return Fraction(int(num), self.scale)

    def entries(self) -> Iterator[Tuple[int, int, Fraction]]:
        for r, c, v in zip(self.ent_row, self.ent_col, self.ent_num):
            yield int(r), int(c), Fraction(int(v), self.scale)

    def row_entries(self, row: int) -> Dict[int, Fraction]:
        lo, hi = np.searchsorted(self.ent_row, [row, row + 1])
        return {int(c): Fraction(int(v), self.scale) for c, v in zip(self.ent_col[lo:hi], self.ent_num[lo:hi])}

    def integer_rows(self) -> List[Dict[int, int]]:
        """Rows as ``{col: int}`` (the common denominator cleared)."""
        out: List[Dict[int, int]] = [dict() for _ in range(self.n_rows)]
        for r, c, v in zip(self.ent_row.tolist(), self.ent_col.tolist(), self.ent_num.tolist()):
            out[r][c] = v
        return out

    def multiply(self, vec: Dict[int, Fraction]) -> Dict[int, Fraction]:
        """``M v`` for a sparse column vector; zero rows omitted."""
        out: Dict[int, Fraction] = {}
        for r, c, v in zip(self.ent_row.tolist(), self.ent_col.tolist(), self.ent_num.tolist()):
            if c in vec:
                out[r] = out.get(r, 0) + vec[c] * v
        return {r: Fraction(x) / self.scale for r, x in out.items() if x}

    def dump(self) -> Tuple[str, str, str]:
        """Sparse text dump: (matrix, row labels, column labels)."""
        lines = [f"{self.n_rows} {self.n_cols} {self.nnz}"]
        lines.extend(f"{r} {c} {format_rational(v)}" for r, c, v in self.entries())
        rows = "\n".join(str(p) for p in self.rows)
        cols = "\n".join(str(p) for p in self.basis.elements)
        return "\n".join(lines) + "\n", rows + "\n", cols + "\n"


def matrix_stats(m: ConstraintMatrix) -> Tuple[int, int, int]:
    return m.n_rows, m.n_cols, m.nnz


def _class_placements(spec: HamiltonianSpec, k: int) -> List[Tuple[Fraction, PauliString]]:
    out = []
    for c, p in spec.bulk:
        for d in range(-(p.length - 1), k):
            out.append((c, translate(p, d)))
    return out


def _obc_placements(spec: HamiltonianSpec, basis: ChargeBasis) -> List[Tuple[Fraction, PauliString]]:
    lo = min(e.anchor for e in basis.elements)
    hi = max(e.end for e in basis.elements)
    return [(c, p) for c, p in placed_terms(spec, basis.n) if p.anchor <= hi and p.end >= lo]


def placements_for(basis: ChargeBasis, spec: HamiltonianSpec) -> List[Tuple[Fraction, PauliString]]:
    if basis.mode == PBC_CLASSES:
        if spec.bc != PERIODIC:
            raise ValueError("class basis requires a periodic Hamiltonian")
        return _class_placements(spec, basis.k)
    if spec.bc != OPEN:
        raise ValueError("anchored basis requires an open Hamiltonian")
    if basis.n < 2 * basis.k:
        raise ValueError(f"open chain needs N >= 2k (N={basis.n}, k={basis.k})")
    return _obc_placements(spec, basis)


def sweep(basis: ChargeBasis, placements: List[Tuple[Fraction, PauliString]]):
    """Run the commutator sweep; returns the raw arrays from the kernel."""
    e = basis.elements
    cx = np.fromiter((p.x for p in e), dtype=np.uint64, count=len(e))
    cz = np.fromiter((p.z for p in e), dtype=np.uint64, count=len(e))
    cl = np.fromiter((p.length for p in e), dtype=np.int64, count=len(e))
    ca = np.fromiter((p.anchor for p in e), dtype=np.int64, count=len(e))
    hx = np.array([p.x for _, p in placements], dtype=np.uint64)
    hz = np.array([p.z for _, p in placements], dtype=np.uint64)
    hl = np.array([p.length for _, p in placements], dtype=np.int64)
    ha = np.array([p.anchor for _, p in placements], dtype=np.int64)
    return _accel.pair_commutators(cx, cz, cl, ca, hx, hz, hl, ha)


def canonical_order(x: np.ndarray, z: np.ndarray, length: np.ndarray, anchor: np.ndarray) -> np.ndarray:
    """Permutation sorting strings by (length, symbols with I<X<Y<Z, anchor)."""
    x = x.astype(object) if len(x) and int(length.max()) > 30 else x.astype(np.int64)
    z = z.astype(object) if len(z) and int(length.max()) > 30 else z.astype(np.int64)
    code = np.zeros(len(x), dtype=object if x.dtype == object else np.int64)
    lmax = int(length.max()) if len(length) else 0
    for i in range(lmax):
        bx = (x >> i) & 1
        bz = (z >> i) & 1
        c = bx * (1 + bz) + (1 - bx) * 3 * bz
        # site i has weight 4**(len-1-i); accumulate as code*4 + c with masking past len
        inside = (length > i)
        code = np.where(inside, code * 4 + c, code)
    return np.lexsort((anchor, code, length))


def build_matrix(basis: ChargeBasis, spec: HamiltonianSpec) -> ConstraintMatrix:
    placements = placements_for(basis, spec)
    scale = math.lcm(*(c.denominator for c, _ in placements)) if placements else 1
    coef_int = np.array([int(c * scale) for c, _ in placements], dtype=np.int64)
    col, term, rx, rz, ra, rl, sign = sweep(basis, placements)
    if basis.mode == PBC_CLASSES:
        ra = np.zeros_like(ra)
    vals = sign * coef_int[term] if len(term) else np.zeros(0, dtype=np.int64)

    if len(col) == 0:
        empty_i = np.zeros(0, dtype=np.int64)
        empty_u = np.zeros(0, dtype=np.uint64)
        return ConstraintMatrix(basis, empty_u, empty_u, empty_i, empty_i, empty_i, empty_i, empty_i, scale)

    keys = np.stack([ra, rx.astype(np.int64), rz.astype(np.int64)], axis=1)
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    ncols = len(basis)
    flat = inv.astype(np.int64) * ncols + col
    cells, cinv = np.unique(flat, return_inverse=True)
    acc = np.zeros(len(cells), dtype=np.int64)
    np.add.at(acc, cinv.reshape(-1), vals)
    keep = acc != 0
    cells, acc = cells[keep], acc[keep]
    rows_used = np.unique(cells // ncols)

    u_a = uniq[rows_used, 0]
    u_x = uniq[rows_used, 1].astype(np.uint64)
    u_z = uniq[rows_used, 2].astype(np.uint64)
    u_l = np.array([(int(a) | int(b)).bit_length() for a, b in zip(u_x, u_z)], dtype=np.int64)
    order = canonical_order(u_x, u_z, u_l, u_a)
    # old unique-row id -> final row ordinal
    remap = np.full(len(uniq), -1, dtype=np.int64)
    remap[rows_used[order]] = np.arange(len(order))
    e_row = remap[cells // ncols]
    e_col = cells % ncols
    srt = np.lexsort((e_col, e_row))
    return ConstraintMatrix(
        basis,
        u_x[order], u_z[order], u_a[order], u_l[order],
        e_row[srt], e_col[srt], acc[srt], scale,
    )
