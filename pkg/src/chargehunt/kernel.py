"""Exact rational kernel of a constraint matrix.

The solver works on integer rows (denominators cleared once).  Rows with a
single live entry force that coefficient to zero and are propagated first;
the remainder is eliminated fraction-free, picking the shortest active row
and, within it, the column touching the fewest rows (ties by canonical
column order).  Row content is divided out after every update, so entries
stay small.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .basis import PBC_CLASSES, ChargeBasis
from .constraints import ConstraintMatrix
from .operators import ChainTooShort, ClassVector, OperatorSum, canonicalize, lift_class_vector
from .pauli import PauliString

Vector = Dict[int, int]


@dataclass
class KernelReport:
    k: int
    dimension: int
    vectors: List[Vector]
    columns: ChargeBasis
    new_at_k: Optional[int] = None
    forced_zero: int = 0
    forced_zero_cols: frozenset = frozenset()
    rank: int = 0
    elapsed: float = 0.0
    stats: Tuple[int, int, int] = (0, 0, 0)

    @property
    def basis(self) -> List[Dict[PauliString, int]]:
        """Kernel vectors keyed by basis strings (class vectors in periodic mode)."""
        out = []
        for v in self.vectors:
            items = {self.columns[c]: x for c, x in sorted(v.items())}
            out.append(ClassVector.from_mapping(items) if self.columns.mode == PBC_CLASSES else items)
        return out

    def support(self) -> Set[int]:
        s: Set[int] = set()
        for v in self.vectors:
            s.update(v)
        return s


def _primitive(vec: Dict[int, Fraction]) -> Vector:
    den = math.lcm(*(x.denominator for x in vec.values()))
    ints = {c: int(x * den) for c, x in vec.items() if x}
    g = math.gcd(*ints.values())
    lead = ints[min(ints)]
    if lead < 0:
        g = -g
    return {c: x // g for c, x in sorted(ints.items())}


def _reduce_content(row: Vector) -> None:
    g = math.gcd(*row.values())
    if g > 1:
        for c in row:
            row[c] //= g


def rref(vectors: Sequence[Dict[int, Fraction]]) -> List[Dict[int, Fraction]]:
    """Reduced row echelon form over Q of sparse vectors (columns ordered by index)."""
    rows = [dict(v) for v in vectors if v]
    out: List[Dict[int, Fraction]] = []
    while rows:
        lead = min(min(r) for r in rows)
        i = next(j for j, r in enumerate(rows) if lead in r)
        piv = rows.pop(i)
        inv = 1 / Fraction(piv[lead])
        piv = {c: Fraction(x) * inv for c, x in piv.items()}
        for r in rows + out:
            if lead in r:
                f = r[lead]
                for c, x in piv.items():
                    y = r.get(c, 0) - f * x
                    if y:
                        r[c] = y
                    else:
                        r.pop(c, None)
        rows = [r for r in rows if r]
        out.append(piv)
    out.sort(key=min)
    return out


class _Eliminator:
    def __init__(self, rows: List[Vector], ncols: int):
        self.rows = [dict(r) for r in rows]
        self.col_rows: List[Set[int]] = [set() for _ in range(ncols)]
        for i, r in enumerate(self.rows):
            for c in r:
                self.col_rows[c].add(i)
        self.zero_cols: Set[int] = set()
        self.pivots: List[Tuple[int, Vector]] = []

    def propagate_singletons(self) -> None:
        queue = [i for i, r in enumerate(self.rows) if len(r) == 1]
        while queue:
            i = queue.pop()
            r = self.rows[i]
            if len(r) != 1:
                continue
            (c,) = r
            self.zero_cols.add(c)
            for j in list(self.col_rows[c]):
                rj = self.rows[j]
                del rj[c]
                if len(rj) == 1:
                    queue.append(j)
            self.col_rows[c].clear()

    def eliminate(self) -> None:
        heap = [(len(r), i) for i, r in enumerate(self.rows) if r]
        heapq.heapify(heap)
        done = [False] * len(self.rows)
        while heap:
            n, i = heapq.heappop(heap)
            r = self.rows[i]
            if done[i] or n != len(r) or not r:
                continue
            done[i] = True
            pc = min(r, key=lambda c: (len(self.col_rows[c]), c))
            for c in r:
                self.col_rows[c].discard(i)
            a = r[pc]
            for j in sorted(self.col_rows[pc]):
                rj = self.rows[j]
                b = rj[pc]
                g = math.gcd(a, b)
                fa, fb = a // g, b // g
                if fa != 1:
                    for c in rj:
                        rj[c] *= fa
                for c, x in r.items():
                    y = rj.get(c, 0) - fb * x
                    if y:
                        if c not in rj:
                            self.col_rows[c].add(j)
                        rj[c] = y
                    elif c in rj:
                        del rj[c]
                        self.col_rows[c].discard(j)
                if rj:
                    _reduce_content(rj)
                    heapq.heappush(heap, (len(rj), j))
            self.col_rows[pc].clear()
            self.pivots.append((pc, r))

    def kernel_vectors(self, ncols: int) -> List[Dict[int, Fraction]]:
        pivot_cols = {c for c, _ in self.pivots}
        free = [c for c in range(ncols) if c not in pivot_cols and c not in self.zero_cols]
        out = []
        for f in free:
            v: Dict[int, Fraction] = {f: Fraction(1)}
            for pc, r in reversed(self.pivots):
                s = sum((x * v[c] for c, x in r.items() if c != pc and c in v), Fraction(0))
                if s:
                    v[pc] = -s / r[pc]
            out.append(v)
        return out


def kernel(m: ConstraintMatrix, check: bool = True) -> KernelReport:
    t0 = time.perf_counter()
    ncols = m.n_cols
    elim = _Eliminator(m.integer_rows(), ncols)
    elim.propagate_singletons()
    forced_cols = set(elim.zero_cols)
    forced = len(forced_cols)
    elim.eliminate()
    raw = elim.kernel_vectors(ncols)
    vectors = [_primitive(v) for v in rref(raw)]
    if check:
        for v in vectors:
            if m.multiply({c: Fraction(x) for c, x in v.items()}):
                raise AssertionError("kernel self-check failed: M v != 0")
        if len(rref([{c: Fraction(x) for c, x in v.items()} for v in vectors])) != len(vectors):
            raise AssertionError("kernel self-check failed: dependent basis")
    return KernelReport(
        k=m.basis.k,
        dimension=len(vectors),
        vectors=vectors,
        columns=m.basis,
        forced_zero=forced,
        forced_zero_cols=frozenset(forced_cols),
        rank=len(elim.pivots) + forced,
        elapsed=time.perf_counter() - t0,
        stats=(m.n_rows, m.n_cols, m.nnz),
    )


def lift_kernel_vector(v, basis: ChargeBasis, n: int, bc: str = "periodic") -> OperatorSum:
    """Turn a kernel vector into an operator on ``n`` sites.

    ``v`` may map column indices or basis strings to coefficients.
    """
    items = {(basis[c] if isinstance(c, int) else c): x for c, x in v.items()}
    if basis.mode == PBC_CLASSES:
        if bc != "periodic":
            raise ValueError("class vectors lift only onto periodic chains")
        if n < 2 * basis.k:
            raise ChainTooShort(f"need n >= 2k to lift (n={n}, k={basis.k})")
        return lift_class_vector(items, n)
    if bc != "open":
        raise ValueError("anchored vectors lift only onto open chains")
    if n != basis.n:
        raise ValueError(f"anchored basis was built for N={basis.n}, not {n}")
    return canonicalize((x, p) for p, x in items.items())
