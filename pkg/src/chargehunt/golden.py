"""Checked-in reference tables and charge lists.

Every file under ``golden_data`` is plain text: ``#`` lines carry the
provenance and the field list, then one record per line.  Table records are
``charge term side result duplicate``; list records are a single string.
A table label followed by ``-row-<CHARGE>`` selects one row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional, Tuple, Union

from .dense import string_matrix
from .pairing import Cell, GenerationTable
from .pauli import PauliString, translate

_COMPOSITE = {"case3-4local-set": ("case3-4local-first-set", "case3-4local-second-set")}


class GoldenError(LookupError):
    pass


@dataclass(frozen=True)
class GoldenRecord:
    charge: str
    term: str
    side: str
    result: str          # signed, e.g. "-XIIYXX"
    duplicate: bool

    @property
    def result_word(self) -> str:
        return self.result.lstrip("-")

    @property
    def sign(self) -> int:
        return -1 if self.result.startswith("-") else 1

    @property
    def key(self) -> Tuple[str, str, str, str]:
        return self.charge, self.term, self.side, self.result_word


@dataclass(frozen=True)
class GoldenTable:
    label: str
    provenance: str
    records: Tuple[GoldenRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    def charges(self) -> List[str]:
        return list(dict.fromkeys(r.charge for r in self.records))


@dataclass(frozen=True)
class GoldenSet:
    label: str
    provenance: str
    strings: Tuple[str, ...]

    def __len__(self) -> int:
        return len(self.strings)

    def __iter__(self):
        return iter(self.strings)


def available() -> List[str]:
    files = resources.files(__package__).joinpath("golden_data")
    return sorted([p.name[:-4] for p in files.iterdir() if p.name.endswith(".txt")] + list(_COMPOSITE))


def _read(label: str) -> str:
    path = resources.files(__package__).joinpath("golden_data", f"{label}.txt")
    if not path.is_file():
        raise GoldenError(f"no golden data labelled {label!r}")
    return path.read_text(encoding="utf-8")


def _validate(word: str, lineno: int, label: str) -> None:
    try:
        PauliString.from_word(word.lstrip("-"))
    except ValueError as exc:
        raise ValueError(f"{label}:{lineno}: bad Pauli string {word!r}") from exc


def parse_golden(label: str, text: str) -> Union[GoldenTable, GoldenSet]:
    prov: List[str] = []
    fields: Optional[List[str]] = None
    records: list = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("fields:"):
                fields = body[len("fields:"):].split()
            else:
                prov.append(body)
            continue
        if fields is None:
            raise ValueError(f"{label}:{lineno}: record before the fields line")
        parts = line.split()
        if len(parts) != len(fields):
            raise ValueError(f"{label}:{lineno}: expected {len(fields)} fields, got {len(parts)}")
        if fields == ["charge"]:
            _validate(parts[0], lineno, label)
            records.append(parts[0])
            continue
        charge, term, side, result, dup = parts
        for w in (charge, term, result):
            _validate(w, lineno, label)
        if side not in ("left", "right", "inside") or dup not in ("0", "1"):
            raise ValueError(f"{label}:{lineno}: malformed record {line!r}")
        records.append(GoldenRecord(charge, term, side, result, dup == "1"))
    provenance = " ".join(prov)
    if fields == ["charge"]:
        return GoldenSet(label, provenance, tuple(records))
    return GoldenTable(label, provenance, tuple(records))


def load_golden(label: str) -> Union[GoldenTable, GoldenSet]:
    if label in _COMPOSITE:
        parts = [load_golden(p) for p in _COMPOSITE[label]]
        return GoldenSet(label, " | ".join(p.provenance for p in parts),
                         tuple(s for p in parts for s in p.strings))
    if "-row-" in label:
        base, row = label.split("-row-", 1)
        table = load_golden(base)
        if not isinstance(table, GoldenTable):
            raise GoldenError(f"{base!r} is not a table")
        recs = tuple(r for r in table.records if r.charge == row)
        if not recs:
            raise GoldenError(f"row {row!r} not in {base!r}")
        return GoldenTable(label, table.provenance, recs)
    return parse_golden(label, _read(label))


@dataclass
class Comparison:
    matched: int = 0
    missing: List[GoldenRecord] = field(default_factory=list)
    extra: List[Tuple[str, str, str, str]] = field(default_factory=list)
    # (golden record, engine's signed result, sign measured densely)
    sign_mismatches: List[Tuple[GoldenRecord, str, int]] = field(default_factory=list)
    duplicate_mismatches: List[GoldenRecord] = field(default_factory=list)

    @property
    def content_ok(self) -> bool:
        return not self.missing and not self.extra

    @property
    def ok(self) -> bool:
        return self.content_ok and not self.sign_mismatches and not self.duplicate_mismatches

    @property
    def engine_signs_confirmed(self) -> bool:
        """Every flagged sign is the one the dense matrices give."""
        return all((-1 if eng.startswith("-") else 1) == d for _, eng, d in self.sign_mismatches)


def adjudicate_sign(cell: Cell) -> int:
    """Sign of ``[charge, coef*term] / 2i`` along ``cell.result``, from dense matrices.

    The pair is shifted to start at site 0 of a ring two sites longer than
    the result, so nothing wraps.
    """
    lo = min(cell.charge.anchor, cell.term.anchor)
    n = cell.result.length + 2
    a = string_matrix(translate(cell.charge, -lo), n)
    b = string_matrix(translate(cell.term, -lo), n)
    c = (a @ b - b @ a) * (float(cell.coef) / 2j)
    r = string_matrix(translate(cell.result, -cell.result.anchor), n)
    overlap = (r.conj().T @ c).diagonal().sum() / 2 ** n
    if abs(abs(overlap) - 1) > 1e-12 or abs(overlap.imag) > 1e-12:
        raise AssertionError(f"{cell.charge} x {cell.term} does not produce +-{cell.result.word}")
    return 1 if overlap.real > 0 else -1


def compare_table(table: GenerationTable, golden: GoldenTable) -> Comparison:
    """Cell-by-cell comparison restricted to the golden rows.

    Sign disagreements are reported, never normalized away.
    """
    rows = set(golden.charges())
    engine: Dict[Tuple[str, str, str, str], List] = {}
    for c in table.cells:
        if c.charge.word in rows:
            engine.setdefault((c.charge.word, c.signed_term, c.side, c.result.word), []).append(c)
    out = Comparison()
    seen = set()
    for rec in golden.records:
        cells = engine.get(rec.key)
        if not cells:
            out.missing.append(rec)
            continue
        seen.add(rec.key)
        cell = cells[0]
        out.matched += 1
        if cell.signed_result != rec.result:
            out.sign_mismatches.append((rec, cell.signed_result, adjudicate_sign(cell)))
        if table.is_duplicate(cell) != rec.duplicate:
            out.duplicate_mismatches.append(rec)
    out.extra = sorted(k for k in engine if k not in seen)
    return out
