import numpy as np
import pytest

from chargehunt.basis import enumerate_pbc_basis
from chargehunt.constraints import build_matrix
from chargehunt.dense import (ChainTooLarge, commutant_norm, dense_kernel_dim, embed_dense, embed_hamiltonian,
                              fredkin_gate, string_matrix, swap_gate)
from chargehunt.kernel import kernel
from chargehunt.models import OPEN, PERIODIC, fredkin, hamiltonian_operator, xxx
from chargehunt.operators import OperatorSum, canonicalize, lift_class_vector
from chargehunt.pauli import parse_pauli

from conftest import random_string


class TestEmbedding:
    def test_xx_spectrum(self):
        m = embed_dense(OperatorSum.single(parse_pauli("XX@1"), -2), 2, OPEN).toarray()
        assert np.allclose(sorted(np.linalg.eigvalsh(m)), [-2, -2, 2, 2])

    def test_zero(self):
        assert not embed_dense(OperatorSum(()), 4).toarray().any()

    def test_linear(self, rng):
        n = 5
        a = canonicalize([(rng.randint(1, 4), random_string(rng, 4, (0, 4))) for _ in range(5)])
        b = canonicalize([(rng.randint(-4, -1), random_string(rng, 4, (0, 4))) for _ in range(5)])
        lhs = embed_dense(a.scale(3) + b.scale(-2), n).toarray()
        rhs = 3 * embed_dense(a, n).toarray() - 2 * embed_dense(b, n).toarray()
        assert np.abs(lhs - rhs).max() < 1e-12

    def test_wraps_on_ring(self):
        ring = string_matrix(parse_pauli("XZ@3"), 4).toarray()
        direct = string_matrix(parse_pauli("ZIIX@0"), 4).toarray()
        assert np.array_equal(ring, direct)

    @pytest.mark.parametrize("spec", [fredkin(), xxx(), fredkin("0110"), fredkin(bc=OPEN)])
    def test_hermitian(self, spec):
        assert embed_hamiltonian(spec, 6).hermiticity_defect() < 1e-12

    def test_gates(self):
        s = swap_gate()
        assert np.array_equal(s @ s, np.eye(4))
        f = fredkin_gate()
        assert np.array_equal(f @ f, np.eye(8))
        # control down leaves targets alone; control up swaps them
        e = np.eye(8)
        assert np.array_equal(f @ e[:, 0b101], e[:, 0b101])
        assert np.array_equal(f @ e[:, 0b001], e[:, 0b010])

    def test_guards(self):
        with pytest.raises(ChainTooLarge):
            embed_dense(OperatorSum(()), 15)
        with pytest.raises(ChainTooLarge):
            embed_dense(OperatorSum(()), 13).toarray()
        with pytest.raises(ValueError):
            string_matrix(parse_pauli("XX@4"), 4, OPEN)


class TestCommutant:
    def test_total_z(self):
        assert commutant_norm(lift_class_vector({parse_pauli("Z"): 1}, 8), fredkin(), 8) < 1e-12

    def test_hamiltonian(self):
        assert commutant_norm(hamiltonian_operator(fredkin(), 8), fredkin(), 8) < 1e-12

    def test_non_conserved(self):
        assert commutant_norm(lift_class_vector({parse_pauli("ZXY"): 1}, 8), fredkin(), 8) > 0.5

    def test_string_commutators_match_pauli_core(self, rng):
        from chargehunt.pauli import commutator
        n = 6
        for _ in range(300):
            p = random_string(rng, 6, (0, 0))
            q = random_string(rng, 6, (0, 0))
            pm, qm = string_matrix(p, n).toarray(), string_matrix(q, n).toarray()
            res = commutator(p, q)
            want = np.zeros_like(pm) if res is None else complex(res[0]) * string_matrix(res[1], n).toarray()
            assert np.array_equal(pm @ qm - qm @ pm, want)


class TestOracle:
    def test_fredkin_k1(self):
        assert dense_kernel_dim(1, fredkin(), 8) == 1

    def test_xxx_k1(self):
        assert dense_kernel_dim(1, xxx(), 8) == 3

    def test_fredkin_k3(self):
        assert dense_kernel_dim(3, fredkin(), 8) == 2

    @pytest.mark.parametrize("k", [1, 2, 3])
    @pytest.mark.parametrize("spec", [fredkin(), xxx(), fredkin("0011"), fredkin("0100")],
                             ids=["fredkin", "xxx", "m0011", "m0100"])
    def test_agrees_with_exact(self, k, spec):
        exact = kernel(build_matrix(enumerate_pbc_basis(k), spec)).dimension
        assert dense_kernel_dim(k, spec, 2 * k + 2) == exact

    def test_preconditions(self):
        with pytest.raises(ValueError):
            dense_kernel_dim(3, fredkin(), 7)
        with pytest.raises(ValueError):
            dense_kernel_dim(1, fredkin(bc=OPEN), 8)
        with pytest.raises(ChainTooLarge):
            dense_kernel_dim(1, fredkin(), 13)
