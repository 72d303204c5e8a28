"""Run enumerate -> build -> kernel over a range of k and summarize."""

from __future__ import annotations

import hashlib
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .basis import enumerate_obc_basis, enumerate_pbc_basis
from .constraints import build_matrix
from .kernel import KernelReport, kernel
from .models import OPEN, PERIODIC, HamiltonianSpec, normalize_mask, fredkin

WORKERS_ENV = "CHARGEHUNT_WORKERS"


@dataclass
class LevelResult:
    k: int
    side: Optional[str]          # None for periodic, "left"/"right" for open chains
    dimension: int
    new_at_k: int
    forced_zero: int
    rows: int
    cols: int
    nnz: int
    elapsed: float = 0.0
    charges: List[Dict[str, int]] = field(default_factory=list)

    def as_dict(self) -> dict:
        d = {
            "k": self.k,
            "dimension": self.dimension,
            "new_at_k": self.new_at_k,
            "forced_zero": self.forced_zero,
            "rows": self.rows,
            "cols": self.cols,
            "nnz": self.nnz,
        }
        if self.side is not None:
            d["side"] = self.side
        if self.charges:
            d["new_charges"] = self.charges
        return d


@dataclass
class HuntReport:
    model: dict
    levels: List[LevelResult]
    n: Optional[int] = None

    def dims(self, side: Optional[str] = None) -> List[int]:
        return [r.dimension for r in self.levels if r.side == side]

    def new_counts(self, side: Optional[str] = None) -> List[int]:
        return [r.new_at_k for r in self.levels if r.side == side]

    @property
    def verdict(self) -> str:
        return verdict(self.model["bc"], {s: [(r.k, r.new_at_k, r.dimension) for r in self.levels if r.side == s]
                                          for s in dict.fromkeys(r.side for r in self.levels)})

    def as_dict(self) -> dict:
        d = {"model": self.model, "levels": [r.as_dict() for r in self.levels], "verdict": self.verdict}
        if self.n is not None:
            d["model"] = dict(self.model, n=self.n)
        return d

    def timings(self) -> Dict[str, float]:
        return {(f"{r.side}:" if r.side else "") + f"k={r.k}": round(r.elapsed, 6) for r in self.levels}


def verdict(bc: str, per_side: Dict[Optional[str], List[Tuple[int, int, int]]]) -> str:
    """Verdict text from ``(k, new_at_k, dimension)`` triples only."""
    parts = []
    for side, rows in per_side.items():
        if not rows:
            continue
        prefix = f"{side} boundary: " if side else ""
        kmax = rows[-1][0]
        if bc == OPEN:
            if all(d == 0 for _, _, d in rows):
                parts.append(f"{prefix}no k-local boundary charges for k in [1,{kmax}]")
            else:
                found = ",".join(str(k) for k, n, _ in rows if n > 0)
                parts.append(f"{prefix}boundary charges at k={found}")
            continue
        new = [k for k, n, _ in rows if n > 0]
        tail = [k for k, n, _ in rows if not new or k > new[-1]]
        text = []
        if new:
            text.append("new charges at k=" + ",".join(map(str, new)))
        if tail:
            text.append(f"no new k-local charges for k in [{tail[0]},{kmax}]")
        parts.append(prefix + "; ".join(text))
    return " | ".join(parts)


def model_descriptor(spec: HamiltonianSpec, source_text: Optional[str] = None) -> dict:
    d = spec.descriptor()
    if source_text is not None:
        d["sha256"] = hashlib.sha256(source_text.encode("utf-8")).hexdigest()
    return d


def _solve(args) -> Tuple[KernelReport, float]:
    spec, k, side, n, dump = args
    t0 = time.perf_counter()
    basis = enumerate_pbc_basis(k) if side is None else enumerate_obc_basis(k, side, n)
    m = build_matrix(basis, spec)
    if dump:
        tag = f"k{k}" + (f"-{side}" if side else "")
        os.makedirs(dump, exist_ok=True)
        for suffix, text in zip(("matrix", "rows", "cols"), m.dump()):
            with open(os.path.join(dump, f"{tag}.{suffix}.txt"), "w", encoding="utf-8") as fh:
                fh.write(text)
    rep = kernel(m)
    return rep, time.perf_counter() - t0


def _new_charges(rep: KernelReport, prev: Optional[KernelReport]) -> List[Dict[str, int]]:
    """Kernel vectors at level k not already spanned at level k-1 (as word -> coefficient)."""
    if rep.dimension == (prev.dimension if prev else 0):
        return []
    k = rep.k
    out = []
    for vec in rep.vectors:
        if any(rep.columns[c].length == k for c in vec):
            out.append({str(rep.columns[c]) if rep.columns.mode != "pbc-classes" else rep.columns[c].word: x
                        for c, x in sorted(vec.items())})
    return out


def run_hunt(spec: HamiltonianSpec, kmax: int, n: Optional[int] = None, workers: Optional[int] = None,
             dump: Optional[str] = None, kmin: int = 1, source_text: Optional[str] = None) -> HuntReport:
    if kmax < kmin or kmin < 1:
        raise ValueError(f"bad k range [{kmin},{kmax}]")
    if spec.bc == OPEN:
        n = n or max(12, 2 * kmax)
        if n < 2 * kmax:
            raise ValueError(f"open chain needs N >= 2*kmax (N={n}, kmax={kmax})")
        sides: Sequence[Optional[str]] = ("left", "right")
    else:
        sides = (None,)
    jobs = [(spec, k, side, n, dump) for side in sides for k in range(kmin, kmax + 1)]
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_solve, jobs))
    else:
        results = [_solve(j) for j in jobs]
    levels: List[LevelResult] = []
    prev: Dict[Optional[str], Optional[KernelReport]] = {s: None for s in sides}
    for (spec_, k, side, _, _), (rep, elapsed) in zip(jobs, results):
        before = prev[side]
        base = before.dimension if before is not None else 0
        if before is None and kmin > 1:
            base = _solve((spec, kmin - 1, side, n, None))[0].dimension
        rep.new_at_k = rep.dimension - base
        rows, cols, nnz = rep.stats
        levels.append(LevelResult(k, side, rep.dimension, rep.new_at_k, rep.forced_zero, rows, cols, nnz,
                                  elapsed, _new_charges(rep, before)))
        prev[side] = rep
    return HuntReport(model_descriptor(spec, source_text), levels, n if spec.bc == OPEN else None)


def nontrivial_gains(report: HuntReport, hamiltonian_range: int) -> List[int]:
    """Levels k > 1 that gain a charge other than the Hamiltonian itself.

    The Hamiltonian density first appears at k equal to its range, so one
    new direction there is expected and discounted.
    """
    out = []
    for r in report.levels:
        if r.k <= 1:
            continue
        gain = r.new_at_k - (1 if r.k == hamiltonian_range else 0)
        if gain > 0:
            out.append(r.k)
    return out


@dataclass
class ScanRow:
    mask: str
    report: HuntReport
    gains: List[int]

    def as_dict(self) -> dict:
        return {
            "mask": self.mask,
            "dims": self.report.dims(),
            "new_at_k": self.report.new_counts(),
            "nontrivial_gains": self.gains,
            "verdict": self.report.verdict,
        }


def truncation_scan(kmax: int, workers: Optional[int] = None) -> List[ScanRow]:
    rows = []
    for i in range(16):
        mask = normalize_mask(i)
        spec = fredkin(mask, PERIODIC)
        rep = run_hunt(spec, kmax, workers=workers)
        rows.append(ScanRow(mask, rep, nontrivial_gains(rep, spec.max_range)))
    return rows
