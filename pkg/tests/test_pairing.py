import networkx as nx
import pytest

from chargehunt.basis import enumerate_pbc_basis, strings_of_length
from chargehunt.constraints import build_matrix
from chargehunt.kernel import kernel
from chargehunt.models import OPEN, fredkin, xxx
from chargehunt.pairing import (INSIDE, LEFT, OBC_LEFT_MODE, RIGHT, Case, boundary_sequence_valid,
                                classify_cases, format_relation, generation_table, pair_graph, relations,
                                table_csv, table_text)
from chargehunt.pauli import commutator, parse_pauli, translate

CASE3_K4 = {"XXXX", "XXYY", "XXYZ", "ZXYY", "YYYY", "YYXX", "YYXZ", "ZYXX", "ZXYZ", "ZYXZ"}
VALID_K5 = {"XXXYZ", "YYYXZ", "ZXYYY", "ZYXXX", "XXYXZ", "YYXYZ", "ZXYXX", "ZYXYY", "ZXZYZ", "ZYZXZ"}


@pytest.fixture(scope="module")
def table4():
    return generation_table(4, fredkin())


@pytest.fixture(scope="module")
def table5():
    return generation_table(5, fredkin())


def P(w):
    return parse_pauli(w)


class TestTables:
    def test_row_xiix(self, table4):
        assert sorted(c.signed_result for c in table4.row(P("XIIX"))) == sorted(
            ["XIIYXX", "-ZYZIIX", "XIIYYY", "-XXYIIX", "-YYYIIX", "XIIZYZ"])

    def test_duplicated_rows(self, table4):
        # the duplicated 6-site classes sit in rows ZXYX and ZXZX
        got = {c.result.word for ch in ("ZXYX", "ZXZX") for c in table4.row(P(ch)) if table4.is_duplicate(c)}
        assert {"ZXYYXX", "ZXYYYY", "ZXYZYZ", "ZXZYXX", "ZXZYYY", "ZXZZYZ"} <= got

    def test_obc_row(self):
        t = generation_table(3, fredkin(bc=OPEN), OBC_LEFT_MODE)
        assert sorted(c.signed_result for c in t.row(P("XXZ@1"))) == ["-XXXYZ", "XXYXZ"]
        assert not t.duplicates

    def test_results_reproducible(self, table4):
        for c in table4.cells:
            assert c.result.length == 6
            assert c.side in (LEFT, RIGHT)
            coef, r = commutator(c.charge, c.term)
            assert translate(r, -r.anchor) == c.result
            assert coef.im * c.coef / 2 == c.value

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            generation_table(3, fredkin(), "sideways")

    def test_emission_stable(self, table4):
        assert table_csv(table4) == table_csv(generation_table(4, fredkin()))
        csv_lines = table_csv(table4).splitlines()
        assert csv_lines[0] == "structure,charge,term,side,result,duplicate"
        assert len(csv_lines) == len(table4.cells) + 1
        text = table_text(table4)
        assert text.count("[") >= 9 and "*" in text


class TestCases:
    def test_k4_case3(self, table4):
        cases = classify_cases(4, fredkin(), table4)
        assert {p.word for p, c in cases.items() if c == Case.CASE3} == CASE3_K4
        assert cases[P("ZIIZ")] == Case.CASE1
        assert cases[P("ZZXZ")] == Case.CASE2
        assert len(cases) == 144

    @pytest.mark.parametrize("k", [4, 5])
    def test_consistent_with_singleton_rows(self, k, table4, table5):
        # Case 1/2 with a nonempty row -> the column meets a single-entry maximal row;
        # a Case-3 charge meets one only through self-pairing
        table = table4 if k == 4 else table5
        m = build_matrix(enumerate_pbc_basis(k), fredkin())
        single = set()
        for r, p in enumerate(m.rows):
            if p.length == k + 2:
                ent = m.row_entries(r)
                if len(ent) == 1:
                    single.update(ent)
        cases = classify_cases(k, fredkin(), table)
        rows = {c.charge for c in table.cells}
        selfp = table.self_paired()
        for ch, case in cases.items():
            if ch not in rows:
                continue
            hit = m.basis.index[ch] in single
            if case != Case.CASE3:
                assert hit
            elif hit:
                assert ch in selfp

    @pytest.mark.parametrize("k", [4, 5])
    def test_invalid_boundaries_forced_to_zero(self, k):
        rep = kernel(build_matrix(enumerate_pbc_basis(k), fredkin()))
        for v in rep.basis:
            assert all(p.length <= 3 for p in v)


class TestBoundarySequences:
    @pytest.mark.parametrize("word,want", [
        ("XXYXZ", (True, True)),
        ("ZXZYZ", (True, True)),
        ("ZZXZ", (False, False)),
        ("XXX", (False, False)),
        ("XXYY", (True, True)),
        ("ZXYZ", (True, True)),
        ("ZXYXZ", (False, False)),
    ])
    def test_examples(self, word, want):
        assert boundary_sequence_valid(P(word)) == want

    def test_reflection_closed(self):
        for p in strings_of_length(5):
            l, r = boundary_sequence_valid(p)
            assert l == r

    def test_too_short(self):
        with pytest.raises(ValueError):
            boundary_sequence_valid(P("XX"))

    def test_k5_case3_selection(self, table5):
        cases = classify_cases(5, fredkin(), table5)
        case3 = [p for p, c in cases.items() if c == Case.CASE3]
        accepted = {p.word for p in case3 if all(boundary_sequence_valid(p))}
        assert accepted == VALID_K5


class TestGraph:
    def test_k4_pair(self, table4):
        g = pair_graph(4, fredkin(), table=table4)
        assert g.has_edge(P("ZXYZ"), P("ZYXZ"))
        assert not any(u == v for u, v in g.edges)
        assert g.nodes[P("ZXYZ")]["self_pair"]

    def test_k5_component(self, table5):
        g = pair_graph(5, fredkin(), subset=[P(w) for w in sorted(VALID_K5)], table=table5)
        assert nx.number_connected_components(g) == 1

    def test_k6_self_pair(self):
        t = generation_table(6, fredkin())
        assert P("ZXYXYZ") in t.self_paired()

    def test_relations(self, table4):
        rels = relations(table4, [P("ZXYZ"), P("ZYXZ")])
        text = sorted(format_relation(r) for _, r in rels)
        assert text == sorted(["-2*q_ZXYZ = 0", "q_ZXYZ-q_ZYXZ = 0", "q_ZXYZ-q_ZYXZ = 0", "2*q_ZYXZ = 0"])
