from fractions import Fraction

import numpy as np
import pytest

from chargehunt import _kernels_py, constraints
from chargehunt.basis import enumerate_obc_basis, enumerate_pbc_basis
from chargehunt.constraints import build_matrix, matrix_stats, placements_for
from chargehunt.kernel import kernel, lift_kernel_vector
from chargehunt.models import OPEN, fredkin, hamiltonian_operator, xxx
from chargehunt.operators import ring_commutator
from chargehunt.pauli import parse_pauli

try:
    from chargehunt import _kernels
except ImportError:  # pragma: no cover - fallback build
    _kernels = None


@pytest.fixture(scope="module")
def fredkin_k4():
    return build_matrix(enumerate_pbc_basis(4), fredkin())


def _col(m, word):
    return m.basis.index[parse_pauli(word)]


class TestRows:
    def test_pairing_row(self, fredkin_k4):
        m = fredkin_k4
        r = m.row_of(parse_pauli("ZXYYXZ@3"))
        assert m.row_entries(r) == {_col(m, "ZXYZ"): 1, _col(m, "ZYXZ"): -1}

    def test_isolated_row(self, fredkin_k4):
        m = fredkin_k4
        r = m.row_of(parse_pauli("XIIYXX"))
        assert list(m.row_entries(r)) == [_col(m, "XIIX")]

    def test_xxx_total_z(self):
        m = build_matrix(enumerate_pbc_basis(1), xxx())
        assert m.multiply({_col(m, "Z"): Fraction(1)}) == {}

    def test_row_lengths_bounded(self, fredkin_k4):
        assert int(fredkin_k4.row_len.max()) <= 6
        assert all(v != 0 for _, _, v in fredkin_k4.entries())


class TestStats:
    def test_k4(self, fredkin_k4):
        rows, cols, nnz = matrix_stats(fredkin_k4)
        assert cols == 192
        n_terms = len(fredkin().bulk)
        assert rows <= cols * n_terms * (2 * 4 + 3)
        assert nnz > 0

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_nonempty(self, k):
        assert build_matrix(enumerate_pbc_basis(k), fredkin()).nnz > 0


class TestInvariance:
    def test_column_permutation(self, rng):
        b = enumerate_pbc_basis(3)
        order = list(range(len(b)))
        rng.shuffle(order)
        m1 = build_matrix(b, fredkin())
        m2 = build_matrix(b.permuted(order), fredkin())
        assert kernel(m1).dimension == kernel(m2).dimension
        e1 = {(m1.rows[r], b[c], v) for r, c, v in m1.entries()}
        e2 = {(m2.rows[r], m2.basis[c], v) for r, c, v in m2.entries()}
        assert e1 == e2

    @pytest.mark.skipif(_kernels is None, reason="compiled kernels not built")
    @pytest.mark.parametrize("k", [2, 4])
    def test_backends_agree(self, k, monkeypatch):
        b = enumerate_pbc_basis(k)
        compiled = build_matrix(b, fredkin())
        monkeypatch.setattr(constraints._accel, "pair_commutators", _kernels_py.pair_commutators)
        pure = build_matrix(b, fredkin())
        assert compiled.dump() == pure.dump()

    def test_placements_guard(self):
        with pytest.raises(ValueError):
            placements_for(enumerate_pbc_basis(2), fredkin(bc=OPEN))
        with pytest.raises(ValueError):
            placements_for(enumerate_obc_basis(2, "left", 6), fredkin())


class TestDump:
    def test_format(self):
        m = build_matrix(enumerate_pbc_basis(2), fredkin())
        mat, rows, cols = m.dump()
        lines = mat.splitlines()
        assert lines[0] == f"{m.n_rows} {m.n_cols} {m.nnz}"
        assert len(lines) == m.nnz + 1
        r, c, v = lines[1].split()
        assert Fraction(v) != 0 and 0 <= int(r) < m.n_rows and 0 <= int(c) < m.n_cols
        assert len(rows.splitlines()) == m.n_rows
        assert cols.splitlines()[:3] == ["X@0", "Y@0", "Z@0"]

    def test_open_half_integers(self):
        m = build_matrix(enumerate_obc_basis(2, "left", 8), fredkin(bc=OPEN))
        assert m.scale == 2
        assert any(v.denominator == 2 for _, _, v in m.entries())


class TestExactness:
    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_kernel_vectors_commute_on_ring(self, k):
        # the class algebra result, checked by a finite ring commutator at N = 2k+4
        n = 2 * k + 4
        b = enumerate_pbc_basis(k)
        rep = kernel(build_matrix(b, fredkin()))
        h = hamiltonian_operator(fredkin(), n)
        for v in rep.vectors:
            assert ring_commutator(lift_kernel_vector(v, b, n), h, n).is_zero()

    def test_non_kernel_vector_fails(self):
        k, n = 3, 10
        b = enumerate_pbc_basis(k)
        m = build_matrix(b, fredkin())
        h = hamiltonian_operator(fredkin(), n)
        v = {b.index[parse_pauli("ZXY")]: 1}
        assert m.multiply(v)
        assert not ring_commutator(lift_kernel_vector(v, b, n), h, n).is_zero()


class TestFallback:
    def test_env_selects_pure_python(self):
        import os
        import subprocess
        import sys
        code = ("import chargehunt; from chargehunt.hunt import run_hunt; from chargehunt.models import fredkin;"
                "print(chargehunt.BACKEND, run_hunt(fredkin(), 4).dims())")
        env = dict(os.environ, CHARGEHUNT_PURE_PYTHON="1")
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        assert out.stdout.split(None, 1) == ["python", "[1, 1, 2, 2]\n"]
