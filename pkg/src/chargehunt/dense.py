"""Floating-point brute-force oracle on small chains.

Nothing here certifies anything; it only cross-checks the exact engine.
Strings are embedded with Kronecker products of the 2x2 Pauli matrices
(site 0 or 1 is the leftmost tensor factor), independent of the
symplectic phase bookkeeping in ``pauli``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional

import numpy as np
import scipy.sparse as sp

from .basis import ChargeBasis, enumerate_pbc_basis
from .models import OPEN, PERIODIC, HamiltonianSpec, hamiltonian_operator
from .operators import OperatorSum, lift_class_vector
from .pauli import PauliString

MAX_SITES = 14
MAX_DENSE_SITES = 12
IDENTITY_TOL = 1e-12
RANK_CUTOFF = 1e-8
CONDITION_WARN = 1e-6

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
UP = np.array([[1, 0], [0, 0]], dtype=complex)     # |up><up|, Z = +1
DOWN = np.array([[0, 0], [0, 1]], dtype=complex)


class ChainTooLarge(ValueError):
    """Dense embedding refused by the memory guard."""


def _guard(n: int, limit: int = MAX_SITES) -> None:
    if n < 1:
        raise ValueError("chain needs at least one site")
    if n > limit:
        raise ChainTooLarge(f"n={n} exceeds the dense limit of {limit} sites")


@dataclass
class DenseOperator:
    n: int
    matrix: sp.csr_matrix

    def toarray(self) -> np.ndarray:
        _guard(self.n, MAX_DENSE_SITES)
        return self.matrix.toarray()

    def hermiticity_defect(self) -> float:
        d = self.matrix - self.matrix.conj().T
        return float(abs(d).max()) if d.nnz else 0.0


def _site_letters(p: PauliString, n: int, offset: int) -> List[str]:
    letters = ["I"] * n
    for j, ch in enumerate(p.word):
        site = (p.anchor + j - offset)
        if ch == "I":
            continue
        letters[site % n] = ch
    return letters


@lru_cache(maxsize=65536)
def _kron_word(letters: str) -> sp.csr_matrix:
    out = sp.csr_matrix(np.ones((1, 1), dtype=complex))
    for ch in letters:
        out = sp.kron(out, sp.csr_matrix(_PAULI[ch]), format="csr")
    return out


def string_matrix(p: PauliString, n: int, bc: str = PERIODIC) -> sp.csr_matrix:
    """Sparse ``2^n x 2^n`` matrix of one string (ring sites 0..n-1, open sites 1..n)."""
    _guard(n)
    offset = 1 if bc == OPEN else 0
    if bc == OPEN and (p.anchor < 1 or p.end > n):
        raise ValueError(f"{p} does not fit on open sites 1..{n}")
    if bc == PERIODIC and p.length > n:
        raise ValueError(f"{p} longer than ring of {n}")
    return _kron_word("".join(_site_letters(p, n, offset)))


def embed_dense(op: OperatorSum, n: int, bc: str = PERIODIC) -> DenseOperator:
    _guard(n)
    dim = 2 ** n
    acc = sp.csr_matrix((dim, dim), dtype=complex)
    for c, p in op:
        if p.is_identity:
            acc = acc + complex(c) * sp.identity(dim, dtype=complex, format="csr")
        else:
            acc = acc + complex(c) * string_matrix(p, n, bc)
    return DenseOperator(n, acc.tocsr())


def embed_hamiltonian(spec: HamiltonianSpec, n: int) -> DenseOperator:
    return embed_dense(hamiltonian_operator(spec, n), n, spec.bc)


def _local(mats: Iterable[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def swap_gate() -> np.ndarray:
    return 0.5 * sum(_local([_PAULI[a], _PAULI[a]]) for a in "IXYZ")


def fredkin_gate() -> np.ndarray:
    """Controlled SWAP: identity if the control is down, SWAP if it is up."""
    return _local([DOWN, np.eye(4)]) + np.kron(UP, swap_gate())


def fredkin_gate_density() -> np.ndarray:
    """``(1 - F_{j,j+1,j+2}) + (1 - X_{j+2} F_{j+2,j+1,j} X_{j+2})`` on three sites."""
    f = fredkin_gate()
    # F_{j+2,j+1,j}: control on the right site, swap on the left pair
    perm = np.zeros((8, 8))
    for b in range(8):
        b0, b1, b2 = (b >> 2) & 1, (b >> 1) & 1, b & 1
        perm[(b2 << 2) | (b1 << 1) | b0, b] = 1
    f_rev = perm @ f @ perm
    x2 = _local([np.eye(2), np.eye(2), _PAULI["X"]])
    one = np.eye(8)
    return (one - f) + (one - x2 @ f_rev @ x2)


def gate_hamiltonian(n: int, bc: str = PERIODIC) -> np.ndarray:
    """Fredkin chain from the gate form; open chains add the projector boundary."""
    _guard(n, MAX_DENSE_SITES)
    h = fredkin_gate_density()
    dim = 2 ** n
    out = np.zeros((dim, dim), dtype=complex)
    starts = range(n) if bc == PERIODIC else range(n - 2)
    for j in starts:
        sites = [(j + t) % n for t in range(3)]
        out += _embed_local(h, sites, n)
    if bc == OPEN:
        out += _embed_local(DOWN, [0], n) + _embed_local(UP, [n - 1], n)
    return out


def _embed_local(h: np.ndarray, sites: List[int], n: int) -> np.ndarray:
    """Place a ``2^m`` local matrix on arbitrary (possibly wrapped) sites."""
    m = len(sites)
    t = h.reshape([2] * (2 * m))
    dim = 2 ** n
    eye = np.eye(dim, dtype=complex).reshape([2] * (2 * n))
    # contract local operator into the ket legs of the identity
    ket_axes = list(sites)
    out = np.tensordot(t, eye, axes=(list(range(m, 2 * m)), ket_axes))
    # tensordot moved the new ket legs to the front; put them back in place
    rest = [i for i in range(2 * n) if i not in ket_axes]
    order = [0] * (2 * n)
    for i, s in enumerate(ket_axes):
        order[s] = i
    for i, r in enumerate(rest):
        order[r] = m + i
    return np.transpose(out, order).reshape(dim, dim)


def commutant_norm(q: OperatorSum, spec: HamiltonianSpec, n: int) -> float:
    """Max-abs entry of the dense ``[Q, H]`` on ``n`` sites."""
    _guard(n)
    qm = embed_dense(q, n, spec.bc).matrix
    hm = embed_hamiltonian(spec, n).matrix
    c = (qm @ hm - hm @ qm).tocsr()
    c.eliminate_zeros()
    return float(abs(c).max()) if c.nnz else 0.0


def _lifted(basis: ChargeBasis, n: int) -> List[OperatorSum]:
    return [lift_class_vector({e: 1}, n) for e in basis]


def dense_kernel_dim(k: int, spec: HamiltonianSpec, n: int, *, probes: Optional[int] = None,
                     seed: int = 0, basis: Optional[ChargeBasis] = None) -> int:
    """Numerical nullity of ``e -> [lift(e), H]`` over the periodic class basis.

    Vectorizing each commutator over all ``4^n`` matrix entries is too big
    for ``n >= 8``, so the map is sampled on ``probes`` random states:
    ``[Q_e, H] psi`` stacked over the probes.
    Random probes can only merge directions (never split them), so the
    sampled nullity is an upper bound that equals the true one with
    probability 1 once ``probes * 2^n`` exceeds the basis size.
    """
    if spec.bc != PERIODIC:
        raise ValueError("dense kernel oracle is defined for periodic chains")
    if n < 2 * k + 2:
        raise ValueError(f"oracle needs n >= 2k+2 (n={n}, k={k})")
    _guard(n, MAX_DENSE_SITES)
    basis = basis or enumerate_pbc_basis(k)
    dim = 2 ** n
    hm = embed_hamiltonian(spec, n).matrix
    if probes is None:
        probes = max(2, -(-2 * len(basis) // dim) + 1)
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal((dim, probes)) + 1j * rng.standard_normal((dim, probes))
    hpsi = hm @ psi
    cols = []
    for q in _lifted(basis, n):
        qm = embed_dense(q, n).matrix
        cols.append((qm @ hpsi - hm @ (qm @ psi)).reshape(-1))
    a = np.stack(cols, axis=1)
    s = np.linalg.svd(a, compute_uv=False)
    # the cutoff is anchored to |H psi| too, so round-off from an all-conserved
    # basis is not mistaken for rank
    ref = max(float(s[0]) if s.size else 0.0, float(np.linalg.norm(hpsi)))
    if s.size == 0 or ref == 0:
        return len(basis)
    keep = s > RANK_CUTOFF * ref
    if keep.any() and s[keep][-1] < CONDITION_WARN * ref:
        warnings.warn(f"ill-conditioned dense oracle: smallest kept singular value {s[keep][-1]:.3e}",
                      RuntimeWarning, stacklevel=2)
    return len(basis) - int(keep.sum())
