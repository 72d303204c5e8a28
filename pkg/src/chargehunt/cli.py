"""Command-line front end: ``chargehunt {hunt,truncation-scan,tables,verify}``.

Exit codes: 0 success, 1 internal self-check failure, 2 invalid input,
3 resource guard.  Reports are deterministic; the only run-dependent data
(timestamp, timings, backend) live in the ``header`` object.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import __version__
from ._accel import BACKEND
from .dense import MAX_SITES, ChainTooLarge, commutant_norm, dense_kernel_dim
from .hunt import WORKERS_ENV, HuntReport, run_hunt, truncation_scan
from .kernel import kernel
from .basis import enumerate_pbc_basis
from .constraints import build_matrix
from .models import (BUILTIN, DEFAULT_BOUNDARY, OPEN, PERIODIC, HamiltonianSpec, ModelFormatError,
                     builtin_model, parse_model_file)
from .operators import canonicalize, lift_class_vector
from .pairing import OBC_LEFT_MODE, PBC, generation_table, table_csv, table_text
from .pauli import PauliString, parse_pauli
from .scalars import parse_rational

EXIT_SELFCHECK = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

KMAX_DEFAULT = 6
KMAX_CAP_ENV = "CHARGEHUNT_KMAX_CAP"
KMAX_CAP_DEFAULT = 8


class InputError(Exception):
    pass


class ResourceError(Exception):
    pass


def _bc(text: str) -> str:
    t = text.lower()
    if t in ("pbc", "periodic"):
        return PERIODIC
    if t in ("obc", "open"):
        return OPEN
    raise argparse.ArgumentTypeError(f"unknown boundary condition {text!r} (use pbc or obc)")


def _boundary(text: str) -> Tuple[Fraction, Fraction]:
    try:
        left, right = text.split(",")
        return parse_rational(left), parse_rational(right)
    except ValueError:
        raise argparse.ArgumentTypeError(f"boundary must be 'left,right' rationals, got {text!r}") from None


def load_model(name: str, mask: Optional[str], bc: str, boundary) -> Tuple[HamiltonianSpec, Optional[str]]:
    """Built-in model name or path to a model file."""
    if name in BUILTIN:
        try:
            spec = builtin_model(name, mask, bc, boundary or DEFAULT_BOUNDARY)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        return spec, None
    path = Path(name)
    if not path.is_file():
        raise InputError(f"unknown model {name!r}: not a built-in ({', '.join(BUILTIN)}) and no such file")
    text = path.read_text(encoding="utf-8")
    try:
        spec = parse_model_file(text, name=path.stem)
    except (ModelFormatError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None
    if mask is not None:
        raise InputError("--mask applies to built-in models only")
    if bc == OPEN and spec.bc == PERIODIC:
        spec = HamiltonianSpec(spec.bulk, OPEN, (), (), spec.truncation_mask, spec.name)
    if boundary is not None:
        if spec.bc != OPEN:
            raise InputError("--boundary needs an open chain")
        spec = spec.with_boundary(*boundary)
    return spec, text


def _kcap() -> int:
    try:
        return int(os.environ.get(KMAX_CAP_ENV, KMAX_CAP_DEFAULT))
    except ValueError:
        raise InputError(f"{KMAX_CAP_ENV} must be an integer") from None


def _check_k(kmax: int, cap: Optional[int]) -> None:
    if kmax < 1:
        raise InputError("--kmax must be at least 1")
    cap = cap if cap is not None else _kcap()
    if kmax > cap:
        raise ResourceError(f"kmax={kmax} exceeds the cap of {cap} (raise with --kmax-cap or {KMAX_CAP_ENV})")


def _header(command: str, argv: Sequence[str], extra: Optional[dict] = None) -> dict:
    h = {
        "tool": "chargehunt",
        "version": __version__,
        "command": command,
        "argv": list(argv),
        "backend": BACKEND,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    if extra:
        h.update(extra)
    return h


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json(header: dict, body: dict) -> str:
    return json.dumps({"header": header, "report": body}, indent=2, sort_keys=False) + "\n"


def hunt_csv(rep: HuntReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["model", "mask", "bc", "side", "k", "dimension", "new_at_k", "forced_zero", "rows", "cols", "nnz"])
    for r in rep.levels:
        w.writerow([rep.model["name"], rep.model.get("mask") or "", rep.model["bc"], r.side or "",
                    r.k, r.dimension, r.new_at_k, r.forced_zero, r.rows, r.cols, r.nnz])
    return buf.getvalue()


def hunt_text(rep: HuntReport) -> str:
    m = rep.model
    lines = [f"model {m['name']}  bc={m['bc']}" + (f"  mask={m['mask']}" if m.get("mask") else "")
             + (f"  N={rep.n}" if rep.n else "")]
    lines.append(f"{'side':<6}{'k':>3}{'dim':>6}{'new':>6}{'forced0':>9}{'rows':>9}{'cols':>8}{'nnz':>10}")
    for r in rep.levels:
        lines.append(f"{r.side or '-':<6}{r.k:>3}{r.dimension:>6}{r.new_at_k:>6}{r.forced_zero:>9}"
                     f"{r.rows:>9}{r.cols:>8}{r.nnz:>10}")
    lines.append("verdict: " + rep.verdict)
    return "\n".join(lines) + "\n"


def cmd_hunt(args, argv) -> int:
    spec, text = load_model(args.model, args.mask, args.bc, args.boundary)
    _check_k(args.kmax, args.kmax_cap)
    if spec.bc == OPEN and args.n is not None and args.n < 2 * args.kmax:
        raise InputError(f"--n must be at least 2*kmax = {2 * args.kmax}")
    try:
        rep = run_hunt(spec, args.kmax, n=args.n, workers=args.workers, dump=args.dump, source_text=text)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.json:
        _emit(_json(_header("hunt", argv, {"timings": rep.timings()}), rep.as_dict()), args.output)
    elif args.csv:
        _emit(hunt_csv(rep), args.output)
    else:
        _emit(hunt_text(rep), args.output)
    return 0


def cmd_truncation_scan(args, argv) -> int:
    _check_k(args.kmax, args.kmax_cap)
    rows = truncation_scan(args.kmax, workers=args.workers)
    with_gain = [r.mask for r in rows if r.gains]
    body = {
        "kmax": args.kmax,
        "masks": [r.as_dict() for r in rows],
        "masks_with_nontrivial_gains": with_gain,
        "unique_mask": with_gain[0] if len(with_gain) == 1 else None,
    }
    if args.json:
        _emit(_json(_header("truncation-scan", argv), body), args.output)
        return 0
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["mask"] + [f"dim_k{k}" for k in range(1, args.kmax + 1)] + ["nontrivial_gains"])
        for r in rows:
            w.writerow([r.mask] + r.report.dims() + [" ".join(map(str, r.gains))])
        _emit(buf.getvalue(), args.output)
        return 0
    lines = [f"{'mask':<6}{'dims':<24}nontrivial gains beyond k=1"]
    for r in rows:
        mark = "  <-- unique" if [r.mask] == with_gain else ""
        lines.append(f"{r.mask:<6}{str(r.report.dims()):<24}{','.join(map(str, r.gains)) or '-'}{mark}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_tables(args, argv) -> int:
    if args.k < 1:
        raise InputError("--k must be at least 1")
    _check_k(args.k, args.kmax_cap)
    spec, _ = load_model(args.model, args.mask, OPEN if args.mode == OBC_LEFT_MODE else PERIODIC, None)
    table = generation_table(args.k, spec, args.mode)
    outputs = {"csv": table_csv(table), "txt": table_text(table)}
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        stem = f"table-{args.mode}-k{args.k}"
        for ext, text in outputs.items():
            if args.format in (ext, "both"):
                (d / f"{stem}.{ext}").write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(outputs["txt" if args.format in ("txt", "both") else "csv"])
    return 0


def read_charge_file(text: str, anchored: bool) -> dict:
    """Lines ``<rational> <word>`` (class representatives) or ``<rational> <word>@<site>``."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            coef, word = line.split()
            p = parse_pauli(word)
            c = parse_rational(coef)
        except ValueError:
            raise InputError(f"charge file line {lineno}: expected '<rational> <pauli>'") from None
        if not anchored:
            p = PauliString(0, p.length, p.x, p.z)
        out[p] = out.get(p, 0) + c
    if not out:
        raise InputError("charge file is empty")
    return out


def cmd_verify(args, argv) -> int:
    spec, _ = load_model(args.model, args.mask, args.bc, args.boundary)
    n = args.n
    if n > MAX_SITES:
        raise ResourceError(f"n={n} exceeds the dense limit of {MAX_SITES}")
    if n < 3:
        raise InputError("--n must be at least 3")
    checks = []
    if args.charge_file:
        text = Path(args.charge_file).read_text(encoding="utf-8")
        vec = read_charge_file(text, anchored=spec.bc == OPEN)
        if spec.bc == OPEN:
            q = canonicalize((c, p) for p, c in vec.items())
        else:
            q = lift_class_vector(vec, n)
        checks.append({"charge": args.charge_file, "norm": commutant_norm(q, spec, n)})
    else:
        if spec.bc != PERIODIC:
            raise InputError("default checks need a periodic model; pass --charge-file")
        for label, vec in (("total-Z", {parse_pauli("Z"): 1}), ("sum-ZXY", {parse_pauli("ZXY"): 1})):
            checks.append({"charge": label, "norm": commutant_norm(lift_class_vector(vec, n), spec, n)})
    body = {"model": spec.descriptor(), "n": n, "commutant_norms": checks}
    if spec.bc == PERIODIC:
        k = args.k if args.k is not None else max(1, (n - 2) // 2)
        if n < 2 * k + 2:
            raise InputError(f"dense kernel check needs n >= 2k+2 (n={n}, k={k})")
        if n > 12:
            raise ResourceError("dense kernel check is limited to n <= 12")
        exact = kernel(build_matrix(enumerate_pbc_basis(k), spec)).dimension
        dense = dense_kernel_dim(k, spec, n, seed=args.seed)
        body["kernel"] = {"k": k, "exact": exact, "dense": dense, "agree": exact == dense}
    fmt = lambda x: float(f"{x:.6e}")  # noqa: E731 - round for byte-stable output
    for c in checks:
        c["norm"] = fmt(c["norm"])
    if args.json:
        _emit(_json(_header("verify", argv), body), args.output)
    else:
        lines = [f"model {spec.name} bc={spec.bc} n={n}"]
        lines += [f"  ||[{c['charge']}, H]||_max = {c['norm']:.3e}" for c in checks]
        if "kernel" in body:
            kk = body["kernel"]
            lines.append(f"  kernel dim k={kk['k']}: exact={kk['exact']} dense={kk['dense']}"
                         f" ({'agree' if kk['agree'] else 'DISAGREE'})")
        _emit("\n".join(lines) + "\n", args.output)
    return 0 if body.get("kernel", {}).get("agree", True) else EXIT_SELFCHECK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chargehunt", description="Exact search for local conserved charges.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, model=True):
        if model:
            sp.add_argument("--model", default="fredkin", help="built-in name (fredkin, xxx) or model file path")
            sp.add_argument("--mask", default=None, help="four-bit truncation mask for the fredkin family")
        sp.add_argument("--kmax-cap", type=int, default=None, help=f"hard cap on k (default {KMAX_CAP_DEFAULT})")
        sp.add_argument("--workers", type=int, default=None, help=f"worker processes (env {WORKERS_ENV})")
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true")
        fmt.add_argument("--csv", action="store_true")
        sp.add_argument("-o", "--output", default=None)

    h = sub.add_parser("hunt", help="kernel dimensions for k = 1..kmax")
    common(h)
    h.add_argument("--bc", type=_bc, default=PERIODIC)
    h.add_argument("--kmax", type=int, default=KMAX_DEFAULT)
    h.add_argument("--n", type=int, default=None, help="open chain length (default max(12, 2*kmax))")
    h.add_argument("--boundary", type=_boundary, default=None, help="open boundary fields 'left,right'")
    h.add_argument("--dump", default=None, help="directory for sparse matrix dumps")

    t = sub.add_parser("truncation-scan", help="hunt over all 16 truncation masks")
    common(t, model=False)
    t.add_argument("--kmax", type=int, default=5)

    g = sub.add_parser("tables", help="maximal-length generation tables")
    g.add_argument("--model", default="fredkin")
    g.add_argument("--mask", default=None)
    g.add_argument("--k", type=int, default=4)
    g.add_argument("--mode", choices=(PBC, OBC_LEFT_MODE), default=PBC)
    g.add_argument("--format", choices=("csv", "txt", "both"), default="both")
    g.add_argument("--out", default=None, help="output directory (stdout if omitted)")
    g.add_argument("--kmax-cap", type=int, default=None)

    v = sub.add_parser("verify", help="dense cross-checks on a small chain")
    v.add_argument("--model", default="fredkin")
    v.add_argument("--mask", default=None)
    v.add_argument("--bc", type=_bc, default=PERIODIC)
    v.add_argument("--boundary", type=_boundary, default=None)
    v.add_argument("--n", type=int, default=8)
    v.add_argument("--k", type=int, default=None, help="level for the dense-vs-exact kernel check")
    v.add_argument("--charge-file", default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", action="store_true")
    v.add_argument("-o", "--output", default=None)
    return p


COMMANDS = {"hunt": cmd_hunt, "truncation-scan": cmd_truncation_scan, "tables": cmd_tables, "verify": cmd_verify}


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:   # argparse usage errors exit 2; --help/--version exit 0
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, argv)
    except InputError as exc:
        print(f"chargehunt: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ResourceError, ChainTooLarge) as exc:
        print(f"chargehunt: resource guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except AssertionError as exc:
        print(f"chargehunt: self-check failed: {exc}", file=sys.stderr)
        return EXIT_SELFCHECK


if __name__ == "__main__":
    sys.exit(main())
