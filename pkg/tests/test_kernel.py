import dataclasses
import math
from fractions import Fraction

import numpy as np
import pytest

from chargehunt.basis import enumerate_obc_basis, enumerate_pbc_basis
from chargehunt.constraints import build_matrix
from chargehunt.dense import commutant_norm
from chargehunt.kernel import kernel, lift_kernel_vector, rref
from chargehunt.models import OPEN, fredkin, hamiltonian_operator, xxx
from chargehunt.operators import ChainTooShort, ClassVector, lift_class_vector
from chargehunt.pauli import parse_pauli


def dim(k, spec):
    return kernel(build_matrix(enumerate_pbc_basis(k), spec)).dimension


class TestDimensions:
    def test_fredkin(self):
        assert [dim(k, fredkin()) for k in range(1, 6)] == [1, 1, 2, 2, 2]

    def test_xxx(self):
        assert [dim(k, xxx()) for k in range(1, 5)] == [3, 4, 5, 6]

    def test_monotone(self):
        for spec in (fredkin(), fredkin("0011"), fredkin("1000")):
            d = [dim(k, spec) for k in range(1, 5)]
            assert d == sorted(d)

    def test_fredkin_k3_basis(self):
        rep = kernel(build_matrix(enumerate_pbc_basis(3), fredkin()))
        idx = rep.columns.index
        h = {idx[p]: c for c, p in fredkin().bulk}
        z = {idx[parse_pauli("Z")]: Fraction(1)}
        span = rref([{c: Fraction(x) for c, x in v.items()} for v in rep.vectors])
        both = rref(span + [h, z])
        assert all(isinstance(v, ClassVector) for v in rep.basis)
        assert len(span) == len(both) == 2

    def test_xxx_new_charge_has_chiral_part(self):
        rep = kernel(build_matrix(enumerate_pbc_basis(3), xxx()))
        three = [v for v in rep.basis if any(p.length == 3 for p in v)]
        assert three
        words = {p.word for v in three for p in v if p.length == 3}
        assert {"XYZ", "YZX", "ZXY", "XZY", "YXZ", "ZYX"} <= words

    def test_open_chain_empty(self):
        spec = fredkin(bc=OPEN)
        for side in ("left", "right"):
            for k in (1, 2, 3):
                assert kernel(build_matrix(enumerate_obc_basis(k, side, 12), spec)).dimension == 0


class TestKernelProperties:
    def test_row_scaling(self, rng):
        m = build_matrix(enumerate_pbc_basis(3), fredkin())
        f = np.array([rng.choice([1, -1, 2, 3, -5, 7]) for _ in range(m.n_rows)], dtype=np.int64)
        scaled = dataclasses.replace(m, ent_num=m.ent_num * f[m.ent_row], _row_strings=None, _row_index=None)
        assert kernel(scaled).vectors == kernel(m).vectors

    def test_primitive_normalization(self):
        for spec in (fredkin(), xxx()):
            for v in kernel(build_matrix(enumerate_pbc_basis(4), spec)).vectors:
                assert math.gcd(*v.values()) == 1
                assert v[min(v)] > 0

    def test_empty_matrix(self):
        m = build_matrix(enumerate_pbc_basis(2), fredkin())
        empty = np.zeros(0, dtype=np.int64)
        m0 = dataclasses.replace(m, row_x=empty.astype(np.uint64), row_z=empty.astype(np.uint64),
                                 row_anchor=empty, row_len=empty, ent_row=empty, ent_col=empty,
                                 ent_num=empty, _row_strings=None, _row_index=None)
        assert kernel(m0).dimension == len(m.basis)

    def test_self_check_catches_corruption(self, monkeypatch):
        from chargehunt import kernel as kmod
        m = build_matrix(enumerate_pbc_basis(2), fredkin())
        monkeypatch.setattr(kmod, "rref", lambda vs: [{0: Fraction(1)}])
        with pytest.raises(AssertionError):
            kernel(m)

    def test_forced_zero_counts(self):
        rep = kernel(build_matrix(enumerate_pbc_basis(4), fredkin()))
        assert rep.forced_zero > 0
        assert rep.basis and not (rep.forced_zero_cols & rep.support())

    def test_deterministic(self):
        m = build_matrix(enumerate_pbc_basis(4), xxx())
        assert kernel(m).vectors == kernel(m).vectors


class TestLift:
    def test_total_z(self):
        b = enumerate_pbc_basis(1)
        op = lift_kernel_vector({parse_pauli("Z"): 1}, b, 6)
        assert [str(p) for _, p in op] == [f"Z@{j}" for j in range(6)]

    def test_hamiltonian(self):
        b = enumerate_pbc_basis(3)
        v = {p: c for c, p in fredkin().bulk}
        lifted = lift_kernel_vector(v, b, 8)
        direct = hamiltonian_operator(fredkin(), 8)
        assert lifted.terms == direct.terms

    def test_k4_kernel_commutes_densely(self):
        b = enumerate_pbc_basis(4)
        rep = kernel(build_matrix(b, fredkin()))
        for v in rep.vectors:
            assert commutant_norm(lift_kernel_vector(v, b, 10), fredkin(), 10) < 1e-10

    def test_short_chain(self):
        with pytest.raises(ChainTooShort):
            lift_kernel_vector({0: 1}, enumerate_pbc_basis(4), 7)

    def test_open_lift(self):
        b = enumerate_obc_basis(2, "left", 6)
        op = lift_kernel_vector({b.index[parse_pauli("XZ@1")]: 2}, b, 6, bc="open")
        assert [str(p) for _, p in op] == ["XZ@1"]
        with pytest.raises(ValueError):
            lift_kernel_vector({0: 1}, b, 8, bc="open")
