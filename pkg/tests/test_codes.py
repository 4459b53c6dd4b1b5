import io
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import float_gram_is_scaled_identity
from riscodes.codes import (
    BHCatalogEntry,
    ConstructionCase,
    Exactness,
    PhaseCodeMatrix,
    bh_matrix,
    bh_recipe,
    catalog_load,
    code_to_json,
    code_to_text,
    conference_bh4,
    dephase,
    design_code,
    dft_code,
    dft_entry,
    embedded_catalog,
    exhaustive_feasibility,
    kronecker_compose,
    kronecker_dft_code,
    kronecker_power,
    minimal_P,
    paley,
    read_code,
    sylvester,
    two_circulant_bh,
    verify_bh,
    verify_code,
)
from riscodes.codes.catalog import catalog_dumps
from riscodes.codes.design import smallest_v
from riscodes.codes.matrix import lift
from riscodes.errors import (
    CatalogError,
    ConstructionUnsupported,
    InvalidCode,
    ResolutionInfeasible,
    SearchSpaceTooLarge,
)


def is_bh(entry):
    return verify_bh(entry) and float_gram_is_scaled_identity(entry.exponents, entry.modulus)


class TestDft:
    def test_f2(self):
        assert dft_code(2, 2).exponents.tolist() == [[0, 0], [0, 1]]

    def test_f3_over_sixth_roots(self):
        # exp(-2j pi k p / 3) written over T_6
        code = dft_code(3, 6)
        assert code.exponents.tolist() == [[0, 0, 0], [0, 4, 2], [0, 2, 4]]
        assert verify_code(code).passed
        # same rows as the positive-sign convention k*p*(6/3), in the other order
        positive = sorted([[(k * p * 2) % 6 for p in range(3)] for k in range(3)])
        assert sorted(code.exponents.tolist()) == positive

    def test_f5_head_for_three_paths(self):
        code = dft_code(5, 5).head(3)
        assert code.K == 2 and code.P == 5
        assert verify_code(code).passed

    def test_infinite_resolution_default(self):
        code = dft_code(7)
        assert code.R == 7 and verify_code(code).passed

    def test_matches_numpy_dft(self):
        code = dft_code(12)
        assert np.allclose(code.to_complex(), np.fft.fft(np.eye(12)))

    def test_resolution_infeasible(self):
        with pytest.raises(ResolutionInfeasible):
            dft_code(3, 4)


class TestSylvester:
    def test_order_one(self):
        assert sylvester(0).exponents.tolist() == [[0]]

    def test_order_two_is_f2(self):
        assert sylvester(1) == BHCatalogEntry([[0, 0], [0, 1]], 2)

    def test_order_eight(self):
        e = sylvester(3)
        assert e.order == 8 and set(np.unique(e.exponents)) <= {0, 1}
        assert verify_code(e.as_code()).passed
        assert float_gram_is_scaled_identity(e.exponents, 2)


class TestPaley:
    def test_q11_gives_order_12(self):
        e = paley(11)
        assert e.order == 12 and e.modulus == 2
        assert is_bh(e)

    def test_q3_gives_order_4(self):
        e = paley(3)
        assert e.order == 4 and is_bh(e)

    def test_q13_gives_order_28(self):
        e = paley(13)
        assert e.order == 28 and is_bh(e)

    @pytest.mark.parametrize("q, order", [(9, 20), (25, 52), (27, 28), (49, 100)])
    def test_prime_powers(self, q, order):
        e = paley(q)
        assert e.order == order and is_bh(e)

    @pytest.mark.parametrize("q", [2, 15, 21, 1])
    def test_unsupported(self, q):
        with pytest.raises(ConstructionUnsupported):
            paley(q)

    @pytest.mark.parametrize("q", [5, 9, 13, 17, 25, 29])
    def test_conference_bh4(self, q):
        e = conference_bh4(q)
        assert e.order == q + 1 and e.modulus == 4 and is_bh(e)

    def test_conference_needs_q_1_mod_4(self):
        with pytest.raises(ConstructionUnsupported):
            conference_bh4(7)


class TestKronecker:
    def test_f2_squared_is_sylvester(self):
        f2 = dft_entry(2)
        assert kronecker_compose(f2, f2) == sylvester(2)

    def test_f2_f3(self):
        e = kronecker_compose(dft_entry(2), dft_entry(3))
        assert e.order == 6 and e.modulus == 6 and is_bh(e)

    def test_zeroth_power_is_scalar_one(self):
        e = kronecker_power(dft_entry(3), 0)
        assert e.exponents.tolist() == [[0]]

    def test_power(self):
        e = kronecker_power(dft_entry(3), 2)
        assert e.order == 9 and is_bh(e)

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from([2, 3, 4, 5, 6, 8, 12]), st.sampled_from([2, 3, 4, 6, 9, 12]))
    def test_composition_verifies(self, a, b):
        # covers mixed moduli (lcm lifting); all orders <= 36 except 12*12 is skipped
        ea = bh_matrix(a, {2: 2, 3: 3, 4: 4, 5: 5, 6: 6, 8: 2, 12: 2}[a])
        eb = bh_matrix(b, {2: 2, 3: 3, 4: 4, 6: 6, 9: 3, 12: 2}[b])
        if a * b > 36:
            return
        assert is_bh(kronecker_compose(ea, eb))


class TestDephase:
    def test_identity_when_already_normal(self):
        g = dft_code(4, 4)
        assert dephase(g) == g

    def test_shifted_f3(self):
        g = np.array([[0, 1, 2], [0, 2, 1], [0, 0, 0]])
        out = dephase(g, modulus=3)
        assert out.exponents[0].tolist() == [0, 0, 0]
        assert verify_code(out).passed

    def test_paley_ii_first_row(self):
        e = paley(5)
        assert not verify_code(e.as_code()).first_row_ones
        out = dephase(e)
        assert verify_code(out).passed and out.verified

    def test_column_c_scaled_by_conjugate_of_first_entry(self, rng):
        e = paley(7)
        out = dephase(e)
        for c in range(e.order):
            expected = (e.exponents[:, c] - e.exponents[0, c]) % 2
            assert out.exponents[:, c].tolist() == expected.tolist()

    def test_rejects_non_orthogonal(self):
        with pytest.raises(InvalidCode):
            dephase(np.array([[0, 0], [0, 0]]), modulus=2)

    @settings(max_examples=60, deadline=None)
    @given(
        st.sampled_from([(12, 2), (6, 4), (10, 4), (8, 8), (6, 3), (22, 4), (9, 3), (20, 2)]),
        st.integers(0, 2**32 - 1),
    )
    def test_preserves_orthogonality_after_random_equivalence(self, order_mod, seed):
        P, R = order_mod
        base = bh_matrix(P, R).exponents
        r = np.random.default_rng(seed)
        e = base[r.permutation(P)][:, r.permutation(P)]
        e = (e + r.integers(0, R, (P, 1)) + r.integers(0, R, (1, P))) % R
        out = dephase(e, modulus=R)
        assert np.all(out.exponents[0] == 0)
        assert verify_code(out).passed
        assert float_gram_is_scaled_identity(out.exponents, R)


class TestVerify:
    def test_f2(self):
        assert verify_code(dft_code(2, 2)).passed

    def test_failure_report(self):
        code = PhaseCodeMatrix([[0, 0, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]], 2)
        rep = verify_code(code)
        assert not rep.passed
        assert rep.failing_pairs == [(0, 2), (1, 2)]
        assert rep.failing_row_sums == [2]
        assert "overall: FAIL" in rep.lines()

    def test_first_row_check(self):
        code = PhaseCodeMatrix([[0, 1], [0, 0]], 2)
        rep = verify_code(code)
        assert not rep.first_row_ones and not rep.passed

    def test_verified_flag_is_checked(self):
        with pytest.raises(InvalidCode):
            PhaseCodeMatrix([[0, 0], [0, 0]], 2, verified=True)

    def test_matches_float_oracle_on_random_matrices(self, rng):
        for _ in range(300):
            R = int(rng.choice([2, 3, 4, 6]))
            P = int(rng.integers(2, 7))
            n = int(rng.integers(2, P + 1))
            e = rng.integers(0, R, (n, P))
            e[0] = 0
            e[:, 0] = 0
            rep = verify_code(PhaseCodeMatrix(e, R))
            assert rep.passed == float_gram_is_scaled_identity(e, R)


class TestMinimalP:
    def test_k1_r2(self):
        assert minimal_P(1, 2) == (2, Exactness.EXACT)

    def test_eight_ris_binary(self):
        assert minimal_P(8, 2) == (12, Exactness.EXACT)

    def test_smallest_prime_factor(self):
        assert minimal_P(2, 35) == (5, Exactness.EXACT)

    def test_power_of_two_alphabet(self):
        assert minimal_P(5, 8) == (6, Exactness.EXACT)

    def test_k2_r2(self):
        assert minimal_P(2, 2) == (4, Exactness.EXACT)

    def test_lower_bound(self):
        assert minimal_P(3, 3) == (4, Exactness.LOWER_BOUND)
        assert minimal_P(700, 2) == (701, Exactness.LOWER_BOUND)

    def test_infinite_resolution(self):
        assert minimal_P(6, None) == (7, Exactness.EXACT)

    def test_dft_of_order_r(self):
        # the 6-point DFT is a BH(6, 6)
        assert minimal_P(5, 6) == (6, Exactness.EXACT)


class TestDesign:
    def test_eight_ris_binary(self):
        out = design_code(8, 2)
        assert out.code.exponents.shape == (9, 12)
        assert out.construction_case is ConstructionCase.HADAMARD_R2
        assert out.source == "Paley I q=11"
        assert out.optimal and verify_code(out.code).passed
        assert float_gram_is_scaled_identity(out.code.exponents, 2)

    def test_ternary_uses_catalog_dft(self):
        out = design_code(2, 3)
        assert out.achieved_P == 3 and out.optimal
        assert out.construction_case is ConstructionCase.CATALOG_KP1
        assert out.code == dft_code(3, 3)

    def test_sylvester_inside_sixth_roots(self):
        out = design_code(3, 6)
        assert out.achieved_P == 4 and out.optimal
        assert verify_code(out.code).passed

    def test_smallest_prime_factor(self):
        out = design_code(2, 35)
        assert out.construction_case is ConstructionCase.DFT_PRIME
        assert out.code.exponents.shape == (3, 5) and out.optimal

    def test_quaternary_family(self):
        out = design_code(5, 8)
        assert out.achieved_P == 6 and out.optimal and out.code.R == 8

    def test_general_case_not_longer_than_dft_kronecker(self):
        for K in range(1, 30):
            for R in (3, 5, 6, 10, 15):
                out = design_code(K, R)
                ref = kronecker_dft_code(K, R)
                assert verify_code(ref).passed and ref.P == smallest_v(K, R)
                assert K + 1 <= out.achieved_P <= ref.P

    def test_p_override(self):
        out = design_code(3, 2, P=8)
        assert out.achieved_P == 8 and not out.optimal
        # order 6 real Hadamard matrices do not exist and none is registered
        with pytest.raises(ConstructionUnsupported):
            design_code(3, 2, P=6)
        with pytest.raises(ValueError):
            design_code(5, 2, P=4)
        with pytest.raises(ResolutionInfeasible):
            design_code(3, 2, P=5)
        with pytest.raises(ValueError):
            design_code(4, None, P=3)

    def test_order_92_gap(self):
        with pytest.raises(ConstructionUnsupported) as exc:
            design_code(90, 2)
        assert exc.value.missing_order == 92
        assert "92" in str(exc.value)

    def test_infinite_resolution(self):
        out = design_code(4, None)
        assert out.construction_case is ConstructionCase.DFT_INF
        assert out.achieved_P == 5 and out.optimal

    @pytest.mark.parametrize("R", [2, 3, 4, 5, 6, 8, 12, 16, 64])
    def test_coverage_invariants(self, R):
        for K in range(1, 65):
            P_min, exact = minimal_P(K, R)
            try:
                out = design_code(K, R)
            except ConstructionUnsupported as exc:
                assert exc.missing_order is not None and exc.missing_order >= K + 1
                assert exact is Exactness.EXACT  # gaps only arise where the optimum is known
                continue
            assert out.code.verified and verify_code(out.code).passed
            assert out.achieved_P >= K + 1
            assert out.code.K == K and out.code.R == R
            if exact is Exactness.EXACT:
                assert out.achieved_P == P_min, (K, R)

    def test_embedding_invariance(self):
        for P in (2, 4, 8, 12, 20):
            e = bh_matrix(P, 2)
            for r in (2, 3, 6):
                lifted = BHCatalogEntry(lift(e.exponents, 2, 2**r), 2**r)
                assert verify_bh(lifted)


class TestExhaustive:
    def test_appendix_a_k2_p6(self):
        assert not exhaustive_feasibility(2, 6, 2)

    def test_k2_p4(self):
        assert exhaustive_feasibility(2, 4, 2)

    def test_appendix_b(self):
        assert not exhaustive_feasibility(1, 3, 4)
        assert not exhaustive_feasibility(2, 5, 4)

    def test_appendix_a_as_property(self):
        checked = 0
        for K in range(3, 8):
            for P in (5, 6, 7, 9, 10, 11):
                try:
                    assert not exhaustive_feasibility(K, P, 2)
                    checked += 1
                except SearchSpaceTooLarge:
                    pass
        assert checked >= 6

    def test_search_bound(self):
        with pytest.raises(SearchSpaceTooLarge):
            exhaustive_feasibility(3, 12, 2)

    def test_below_k_plus_1(self):
        assert not exhaustive_feasibility(4, 4, 4)


class TestCatalog:
    def test_embedded_entries_verify(self):
        entries = embedded_catalog()
        assert {(e.order, e.modulus) for e in entries} >= {(6, 3), (22, 4)}
        for e in entries:
            assert is_bh(e)

    def test_roundtrip(self):
        entries = [paley(11), conference_bh4(5), dft_entry(3)]
        text = catalog_dumps(entries)
        loaded = catalog_load(io.BytesIO(text.encode()))
        assert loaded == entries
        assert [e.source for e in loaded] == [e.source for e in entries]

    def test_comments_and_blank_lines(self):
        text = "# header\n\nBH 2 2 tiny  # trailing\n0 0\n# inner comment\n0 1\n\n"
        (e,) = catalog_load(text)
        assert e.exponents.tolist() == [[0, 0], [0, 1]] and e.source == "tiny"

    def test_parse_error_line_number(self):
        with pytest.raises(CatalogError) as exc:
            catalog_load("BH 2 2 x\n0 0\n0 7\n")
        assert exc.value.line == 3

    def test_wrong_row_length(self):
        with pytest.raises(CatalogError) as exc:
            catalog_load("BH 2 2 x\n0 0 0\n")
        assert exc.value.line == 2

    def test_verification_failure_names_entry(self):
        with pytest.raises(CatalogError, match="broken"):
            catalog_load("BH 2 2 broken\n0 0\n0 0\n")

    def test_row_outside_block(self):
        with pytest.raises(CatalogError):
            catalog_load("0 1\n")

    def test_code_text_and_json_roundtrip(self):
        out = design_code(8, 2)
        assert read_code(code_to_text(out.code, "K=8")) == out.code
        doc = code_to_json(out.code, optimal=True)
        assert json.loads(doc)["P"] == 12
        assert read_code(doc) == out.code

    def test_two_circulant(self):
        e = two_circulant_bh([0, 2, 1, 2, 3, 0, 1, 0, 0, 0, 0], [0, 1, 3, 2, 2, 1, 3, 1, 0, 2, 2], 4)
        assert e.order == 22 and is_bh(e)

    def test_recipe_uses_catalog(self):
        assert bh_recipe(22, 4)[0] == "catalog"
        assert bh_recipe(6, 3)[0] == "catalog"
        assert bh_recipe(44, 4)[0] in {"paley", "kron"}
