from functools import reduce

import numpy as np
import pytest

from chargehunt.operators import OperatorSum, canonicalize, op_commutator
from chargehunt.pauli import (IDENTITY, PauliString, anticommute, canonical_key, commutator, mul,
                              parse_pauli, spatial_reflect, translate)
from chargehunt.scalars import Gauss

from conftest import random_string

_M = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
}


def dense(p, n):
    letters = ["I"] * n
    for i in range(p.length):
        letters[p.anchor + i] = p.symbol(i)
    return reduce(np.kron, (_M[c] for c in letters))


class TestStrings:
    def test_endpoint_invariant(self):
        with pytest.raises(ValueError):
            PauliString(0, 3, 0b010, 0b000)
        with pytest.raises(ValueError):
            PauliString.from_word("XI")
        assert PauliString.from_word("") is IDENTITY
        assert IDENTITY.length == 0

    def test_mask_decoding(self):
        p = PauliString.from_word("XYZ")
        assert (p.x, p.z) == (0b011, 0b110)
        assert p.word == "XYZ"
        assert str(parse_pauli("zxyz@3")) == "ZXYZ@3"

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_pauli("XQ")

    def test_from_masks_trims(self):
        p = PauliString.from_masks(0b0100, 0b1100, anchor=2)
        assert (p.anchor, p.word) == (4, "YZ")


class TestProducts:
    def test_single_site(self):
        assert mul(parse_pauli("X"), parse_pauli("Y")) == (1, parse_pauli("Z"))
        assert mul(parse_pauli("Y"), parse_pauli("Z")) == (1, parse_pauli("X"))
        assert mul(parse_pauli("Z"), parse_pauli("X")) == (1, parse_pauli("Y"))

    def test_two_site(self):
        ph, r = mul(parse_pauli("XX"), parse_pauli("ZZ"))
        assert (ph, r) == (2, parse_pauli("YY"))

    def test_disjoint_concatenate(self):
        assert mul(parse_pauli("Z@0"), parse_pauli("X@5")) == (0, parse_pauli("ZIIIIX@0"))

    def test_square_is_identity(self, rng):
        for _ in range(200):
            p = random_string(rng, 8, (-3, 3))
            assert mul(p, p) == (0, IDENTITY)

    def test_associative(self, rng):
        for _ in range(500):
            a, b, c = (random_string(rng, 5, (0, 3)) for _ in range(3))
            m1, ab = mul(a, b)
            m2, ab_c = mul(ab, c)
            m3, bc = mul(b, c)
            m4, a_bc = mul(a, bc)
            assert ab_c == a_bc
            assert (m1 + m2) % 4 == (m3 + m4) % 4


class TestCommutator:
    def test_fredkin_example(self):
        assert commutator(parse_pauli("ZXYZ@0"), parse_pauli("XXZ@3")) == (Gauss(0, 2), parse_pauli("ZXYYXZ@0"))

    def test_disjoint_is_zero(self):
        assert commutator(parse_pauli("ZXYZ@0"), parse_pauli("XXX@4")) is None

    def test_column_expression_sign(self):
        # bare strings give +2i; the minus sign comes from the -ZXX coefficient in H
        assert commutator(parse_pauli("ZYXZ@2"), parse_pauli("ZXX@0")) == (Gauss(0, 2), parse_pauli("ZXYYXZ@0"))
        c = op_commutator(OperatorSum.single(parse_pauli("ZYXZ@2")), OperatorSum.single(parse_pauli("ZXX@0"), -1))
        assert c.terms == ((Gauss(0, -2), parse_pauli("ZXYYXZ@0")),)

    def test_random_pairs_against_dense(self, rng):
        # 10^4 random pairs on at most 6 sites, compared entrywise with Kronecker matrices
        n = 6
        for _ in range(10_000):
            p = random_string(rng, 6, (0, 0))
            p = translate(p, rng.randint(0, n - p.length))
            q = random_string(rng, 6, (0, 0))
            q = translate(q, rng.randint(0, n - q.length))
            dp, dq = dense(p, n), dense(q, n)
            c = dp @ dq - dq @ dp
            res = commutator(p, q)
            parity = sum(((p.x << p.anchor) >> i & 1) * ((q.z << q.anchor) >> i & 1)
                         + ((p.z << p.anchor) >> i & 1) * ((q.x << q.anchor) >> i & 1) for i in range(n)) % 2
            assert (res is None) == (parity == 0) == (not anticommute(p, q))
            if res is None:
                assert not np.any(c)
            else:
                coef, r = res
                assert abs(complex(coef)) == 2
                assert np.array_equal(c, complex(coef) * dense(r, n))

    def test_jacobi(self, rng):
        for _ in range(1_000):
            a, b, c = (canonicalize([(rng.choice([1, -1, 2]), random_string(rng, 4, (0, 3)))
                                     for _ in range(rng.randint(1, 3))]) for _ in range(3))
            total = (op_commutator(a, op_commutator(b, c)) + op_commutator(b, op_commutator(c, a))
                     + op_commutator(c, op_commutator(a, b)))
            assert total.is_zero()


class TestSymmetries:
    def test_translate(self):
        assert translate(parse_pauli("ZXYZ@0"), 2) == parse_pauli("ZXYZ@2")
        assert translate(parse_pauli("ZXYZ@7"), 3, n=8) == parse_pauli("ZXYZ@2")
        assert translate(parse_pauli("X@0"), -1, n=8) == parse_pauli("X@7")

    def test_translate_inverse(self, rng):
        for _ in range(100):
            p = random_string(rng, 6, (-5, 5))
            d = rng.randint(-9, 9)
            assert translate(translate(p, d), -d) == p

    def test_reflect(self):
        assert spatial_reflect(parse_pauli("ZXYZ")) == parse_pauli("ZYXZ")
        assert spatial_reflect(parse_pauli("XXZ")) == parse_pauli("ZXX")
        assert spatial_reflect(parse_pauli("XYX")) == parse_pauli("XYX")

    def test_reflect_involution(self, rng):
        for _ in range(100):
            p = random_string(rng, 8, (-2, 2))
            assert spatial_reflect(spatial_reflect(p)) == p


class TestOrdering:
    def test_examples(self):
        k = lambda w: canonical_key(parse_pauli(w))  # noqa: E731
        assert k("X") < k("XX")
        assert k("XIX") < k("XXX")
        assert k("ZXYZ") < k("ZYXZ")

    def test_total_order_is_deterministic(self, rng):
        ps = {random_string(rng, 4, (0, 2)) for _ in range(300)}
        a = sorted(ps, key=canonical_key)
        b = sorted(reversed(a), key=canonical_key)
        assert a == b
        assert len({canonical_key(p) for p in ps}) == len(ps)
