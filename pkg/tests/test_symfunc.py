"""Power/monomial change of basis against the literal expansion oracle."""

from __future__ import annotations

import pytest

from longcycle.perm_core import aut, enumerate_partitions
from longcycle.symfunc import CoeffTable, expand_monomials, power_to_monomial, series_equal


class TestPowerToMonomial:
    def test_single_row(self):
        for n in range(1, 7):
            t = power_to_monomial((n,))
            assert t.coeffs == {((n,),): 1}

    def test_square_of_first_power_sum(self):
        t = power_to_monomial((1, 1))
        assert t[(2,)] == 1
        assert t[(1, 1)] == 2

    def test_coarsening_fixture(self):
        t = power_to_monomial((2, 2, 1, 1))
        assert t[(3, 2, 1)] == aut((3, 2, 1)) * 4

    def test_triangularity(self):
        for n in range(1, 8):
            for lam in enumerate_partitions(n):
                t = power_to_monomial(lam)
                for (mu,), c in t.items():
                    assert len(mu) <= len(lam)
                    assert c != 0

    def test_leading_coefficient(self):
        for n in range(1, 8):
            for lam in enumerate_partitions(n):
                assert power_to_monomial(lam)[lam] == aut(lam)


class TestExpandOracle:
    def test_monomial_basis(self):
        assert expand_monomials("monomial", (1,), 3) == {(1,): 1}
        assert expand_monomials("monomial", (2, 1), 2) == {(2, 1): 1}

    def test_power_basis_examples(self):
        assert expand_monomials("power", (2,), 2) == {(2,): 1}
        assert expand_monomials("power", (1, 1), 2) == {(2,): 1, (1, 1): 2}

    def test_too_few_variables(self):
        with pytest.raises(ValueError):
            expand_monomials("monomial", (1, 1, 1), 2)
        with pytest.raises(ValueError):
            expand_monomials("banana", (1,), 2)

    def test_conversion_matches_oracle_through_degree_6(self):
        # acceptance covers degree 8; keep the module test brisk
        for n in range(1, 7):
            for lam in enumerate_partitions(n):
                table = power_to_monomial(lam)
                oracle = expand_monomials("power", lam, max(n, len(lam)))
                assert {mu: c for (mu,), c in table.items()} == oracle, lam


class TestCoeffTable:
    def test_make_and_lookup(self):
        t = CoeffTable.make(3, "monomial", {(2, 1): 5, ((3,),): 0})
        assert t[(2, 1)] == 5
        assert t[(3,)] == 0
        assert t.arity == 1

    def test_rejects_bad_keys(self):
        with pytest.raises(ValueError):
            CoeffTable(3, "monomial", 1, {((2, 2),): 1})  # weight 4 at degree 3
        with pytest.raises(ValueError):
            CoeffTable(3, "powerr", 1, {})
        with pytest.raises(ValueError):
            CoeffTable.make(3, "monomial", [((2, 1), 1), (((2, 1), (3,)), 1)])

    def test_triple_alphabet_keys(self):
        t = CoeffTable.make(2, "power", {((2,), (2,), (2,)): 1})
        assert t.arity == 3
        m = t.to_monomial()
        # p2 = m2 in each alphabet
        assert m[((2,), (2,), (2,))] == 1
        assert len(m.coeffs) == 1

    def test_json_roundtrip_stable(self):
        t = CoeffTable.make(3, "monomial", {(2, 1): 5, (1, 1, 1): -2, (3,): 7})
        s = t.to_json()
        assert s == t.to_json()
        back = CoeffTable.from_json(s, 3, "monomial")
        assert back == t
        t3 = CoeffTable.make(2, "power", {((2,), (1, 1), (2,)): 9})
        assert CoeffTable.from_json(t3.to_json(), 2, "power") == t3


class TestSeriesEqual:
    def test_reflexive(self):
        t = power_to_monomial((2, 1))
        assert series_equal(t, t)

    def test_p2_equals_m2(self):
        p = CoeffTable.make(2, "power", {(2,): 1})
        m = CoeffTable.make(2, "monomial", {(2,): 1})
        assert series_equal(p, m)

    def test_detects_difference(self):
        p = CoeffTable.make(2, "power", {(1, 1): 1})
        m = CoeffTable.make(2, "monomial", {(1, 1): 1})
        assert not series_equal(p, m)  # p_{11} = m_2 + 2 m_{11}

    def test_mismatch_raises(self):
        a = CoeffTable.make(2, "power", {(2,): 1})
        b = CoeffTable.make(3, "power", {(3,): 1})
        with pytest.raises(ValueError):
            series_equal(a, b)
        c = CoeffTable.make(2, "power", {((2,), (2,)): 1})
        with pytest.raises(ValueError):
            series_equal(a, c)

    def test_three_alphabet_conversion(self):
        # p_{11} ⊗ p_2 ⊗ p_{11} expanded by hand in each alphabet
        p = CoeffTable.make(2, "power", {((1, 1), (2,), (1, 1)): 1})
        expected = {}
        for mu1, c1 in [((2,), 1), ((1, 1), 2)]:
            for mu3, c3 in [((2,), 1), ((1, 1), 2)]:
                expected[(mu1, (2,), mu3)] = c1 * c3
        m = CoeffTable.make(2, "monomial", expected)
        assert series_equal(p, m)
